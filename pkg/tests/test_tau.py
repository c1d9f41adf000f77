"""Tests für die Sinustransformation und die τ-Algebra."""

import math

import numpy as np
import pytest

from toeplitz_tau.errors import DenseCapError, DimensionError, GridZeroError
from toeplitz_tau.symbols import abs_pow, laplace_pow, product, scaled
from toeplitz_tau.tau import (
    TauOperator,
    build_tau,
    dst1,
    dst1_fft,
    tau_apply,
    tau_product,
    tau_solve,
)
from toeplitz_tau.toeplitz import build_toeplitz

from .conftest import relative_error


def sine_matrix(n: int) -> np.ndarray:
    i = np.arange(1, n + 1)
    return math.sqrt(2.0 / (n + 1)) * np.sin(np.outer(i, i) * math.pi / (n + 1))


def test_dst1_size_one() -> None:
    np.testing.assert_array_equal(dst1(np.array([2.5])), [2.5])


def test_dst1_unit_vector() -> None:
    e2 = np.array([0.0, 1.0, 0.0])
    np.testing.assert_allclose(dst1(e2), [math.sqrt(0.5), 0.0, -math.sqrt(0.5)], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 7, 64, 1000])
def test_dst1_involution_and_isometry(n: int, rng: np.random.Generator) -> None:
    x = rng.standard_normal(n)
    y = dst1(x)
    assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-13 * np.linalg.norm(x)
    assert relative_error(dst1(y), x) <= 1e-13


@pytest.mark.parametrize("n", [2, 5, 33])
def test_dst1_matches_sine_matrix(n: int, rng: np.random.Generator) -> None:
    X = rng.standard_normal((n, 3))
    np.testing.assert_allclose(dst1(X), sine_matrix(n) @ X, atol=1e-13)


@pytest.mark.parametrize("n", [1, 4, 31, 128])
def test_dst1_fft_matches_dst1(n: int, rng: np.random.Generator) -> None:
    x = rng.standard_normal(n)
    np.testing.assert_allclose(dst1_fft(x), dst1(x), atol=1e-13)


def test_build_tau_laplace_equals_toeplitz() -> None:
    for n in (3, 16, 64):
        P = build_tau(laplace_pow(1), n)
        T = build_toeplitz(laplace_pow(1), n)
        np.testing.assert_allclose(P.dense(), T.dense(), atol=1e-12)


def test_build_tau_inverse_samples() -> None:
    P = build_tau(abs_pow(2), 3, power=-1.0)
    expected = [(math.pi / 4) ** -2, (math.pi / 2) ** -2, (3 * math.pi / 4) ** -2]
    np.testing.assert_allclose(P.diag, expected, rtol=1e-14)


def test_half_power_semigroup(rng: np.random.Generator) -> None:
    half = build_tau(abs_pow(1), 4, power=0.5)
    full = build_tau(abs_pow(1), 4)
    x = rng.standard_normal(4)
    assert relative_error(half.apply(half.apply(x)), full.apply(x)) <= 1e-12
    np.testing.assert_allclose(full.powered(0.5).diag, half.diag, rtol=1e-15)


def test_tau_apply_examples(rng: np.random.Generator) -> None:
    ones = TauOperator(5, np.ones(5))
    x = rng.standard_normal(5)
    np.testing.assert_allclose(tau_apply(ones, x), x, atol=1e-14)
    P = build_tau(laplace_pow(1), 3)
    np.testing.assert_allclose(tau_apply(P, np.ones(3)), [1.0, 0.0, 1.0], atol=1e-14)


def test_tau_apply_against_dense(rng: np.random.Generator) -> None:
    P = build_tau(abs_pow(1.5), 64)
    S = sine_matrix(64)
    D = S @ np.diag(P.diag) @ S
    x = rng.standard_normal(64)
    assert relative_error(P.apply(x), D @ x) <= 1e-12
    np.testing.assert_allclose(P.dense(), D, atol=1e-12 * np.abs(D).max())


def test_tau_solve_roundtrip(rng: np.random.Generator) -> None:
    P = build_tau(abs_pow(3), 128)
    B = rng.standard_normal((128, 100))
    for b in B.T:
        assert relative_error(tau_apply(P, tau_solve(P, b)), b) <= 1e-11
        assert relative_error(tau_solve(P, tau_apply(P, b)), b) <= 1e-11
    ones = TauOperator(4, np.ones(4))
    np.testing.assert_allclose(tau_solve(ones, B[:4, 0]), B[:4, 0], atol=1e-14)


def test_tau_apply_matrix_input(rng: np.random.Generator) -> None:
    P = build_tau(abs_pow(1), 16)
    X = rng.standard_normal((16, 4))
    Y = P.apply(X)
    for j in range(4):
        np.testing.assert_allclose(Y[:, j], P.apply(X[:, j]), atol=1e-13)


def test_tau_product_closed() -> None:
    n = 32
    f, g = abs_pow(1), abs_pow(2)
    P = tau_product(build_tau(f, n), build_tau(g, n))
    np.testing.assert_allclose(P.dense(), build_tau(product(f, g), n).dense(), atol=1e-12)
    np.testing.assert_allclose(
        build_tau(f, n).dense() @ build_tau(g, n).dense(), P.dense(), atol=1e-11
    )


@pytest.mark.parametrize("theta", [0.5, 1.0, 3.5])
def test_condition_number(theta: float) -> None:
    n = 100
    assert build_tau(abs_pow(theta), n).condition_number == pytest.approx(n**theta, rel=1e-12)


def test_inverse_operator(rng: np.random.Generator) -> None:
    P = build_tau(abs_pow(2.5), 20)
    x = rng.standard_normal(20)
    np.testing.assert_allclose(P.inverse().apply(x), P.solve(x), rtol=1e-12)


def test_tau_errors() -> None:
    P = build_tau(abs_pow(1), 8)
    with pytest.raises(DimensionError):
        P.apply(np.ones(9))
    with pytest.raises(DenseCapError):
        P.dense(cap=4)
    with pytest.raises(GridZeroError):
        build_tau(scaled(abs_pow(1), 0.0), 8)
    with pytest.raises(ValueError):
        TauOperator(3, np.array([1.0, 0.0, 1.0]))
