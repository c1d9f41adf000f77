"""Tests für Symbole, Fourier-Koeffizienten und Gitterwerte."""

import math

import numpy as np
import pytest
from scipy import integrate

from toeplitz_tau.errors import GridZeroError, QuadratureError
from toeplitz_tau.symbols import (
    SymbolKind,
    abs_pow,
    constant,
    eval_symbol,
    fourier_coeff,
    fourier_coeffs,
    grid_points,
    grid_samples,
    laplace_pow,
    partial_sum,
    product,
    scaled,
)


def quad_oracle(f, l: int) -> float:
    value, _ = integrate.quad(
        lambda t: f(t) * math.cos(l * t), 0.0, math.pi, epsabs=1e-14, epsrel=1e-13, limit=500
    )
    return value / math.pi


@pytest.mark.parametrize(
    "symbol, t, expected",
    [
        (abs_pow(1), math.pi, math.pi),
        (laplace_pow(1), 0.0, 0.0),
        (laplace_pow(2), math.pi, 16.0),
        (abs_pow(2), -0.5, 0.25),
        (constant(3.0), 1.0, 3.0),
    ],
)
def test_eval_symbol(symbol, t: float, expected: float) -> None:
    assert eval_symbol(symbol, t) == pytest.approx(expected, abs=1e-14)


def test_eval_symbol_even_and_nonnegative() -> None:
    t = np.linspace(0.0, np.pi, 1001)
    for s in (abs_pow(0.5), abs_pow(3.5), laplace_pow(3), product(laplace_pow(1), abs_pow(1))):
        values = eval_symbol(s, t)
        np.testing.assert_array_equal(values, eval_symbol(s, -t))
        assert np.all(values >= 0.0)
        assert np.count_nonzero(values == 0.0) == 1, f"{s}: Nullstelle nicht nur bei 0"


def test_eval_symbol_outside_domain() -> None:
    with pytest.raises(ValueError):
        eval_symbol(abs_pow(1), 4.0)


def test_constructors_reject_invalid_parameters() -> None:
    with pytest.raises(ValueError):
        abs_pow(-1.0)
    with pytest.raises(ValueError):
        laplace_pow(0)
    with pytest.raises(ValueError):
        laplace_pow(1.5)  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        scaled(abs_pow(1), -2.0)


def test_zero_order() -> None:
    assert abs_pow(3.5).zero_order == 3.5
    assert laplace_pow(2).zero_order == 4.0
    assert product(laplace_pow(2), abs_pow(0.5)).zero_order == 4.5
    assert scaled(abs_pow(1), 2.0).zero_order == 1.0


def test_product_simplifies() -> None:
    assert product(abs_pow(0), laplace_pow(1)) == laplace_pow(1)
    assert product(abs_pow(1), abs_pow(2)) == abs_pow(3)
    assert product(laplace_pow(1), abs_pow(1)).kind is SymbolKind.PRODUCT
    assert scaled(abs_pow(1), 1.0) == abs_pow(1)


def test_polynomial_properties() -> None:
    assert laplace_pow(3).bandwidth == 3
    assert product(laplace_pow(1), laplace_pow(2)).bandwidth == 3
    assert abs_pow(0).bandwidth == 0
    assert abs_pow(1).bandwidth is None
    assert not product(laplace_pow(1), abs_pow(1)).is_polynomial


@pytest.mark.parametrize("l, expected", [(0, 2.0), (1, -1.0), (-1, -1.0), (2, 0.0), (7, 0.0)])
def test_fourier_coeff_laplace(l: int, expected: float) -> None:
    assert fourier_coeff(laplace_pow(1), l) == expected


def test_fourier_coeff_laplace_square_stencil() -> None:
    coeffs = [fourier_coeff(laplace_pow(2), l) for l in range(4)]
    assert coeffs == [6.0, -4.0, 1.0, 0.0]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_laplace_bandwidth_property(k: int) -> None:
    for l in range(k + 1, k + 6):
        assert fourier_coeff(laplace_pow(k), l) == 0.0


@pytest.mark.parametrize(
    "theta, l, expected",
    [
        (1.0, 0, math.pi / 2),
        (1.0, 1, -2.0 / math.pi),
        (1.0, 2, 0.0),
        (3.0, 0, math.pi**3 / 4),
        (2.0, 1, -2.0),
    ],
)
def test_fourier_coeff_abs_pow_closed_forms(theta: float, l: int, expected: float) -> None:
    assert fourier_coeff(abs_pow(theta), l) == pytest.approx(expected, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("theta", [0.5, 1.5, 3.5, 4.5])
@pytest.mark.parametrize("l", [0, 1, 5, 17])
def test_fourier_coeff_against_quadrature_oracle(theta: float, l: int) -> None:
    expected = quad_oracle(lambda t: t**theta, l)
    assert fourier_coeff(abs_pow(theta), l) == pytest.approx(expected, rel=1e-8, abs=1e-11)


def cubic_coeff(l: int) -> float:
    """(1/π)∫_0^π t³ cos(lt) dt für l >= 1."""
    sign = (-1.0) ** l
    return 3.0 * math.pi * sign / l**2 - 6.0 * (sign - 1.0) / (math.pi * l**4)


@pytest.mark.parametrize("l", [1, 2, 37, 1000, 1001, 4000])
def test_fourier_coeff_large_l_absolute_accuracy(l: int) -> None:
    # Für große l begrenzt die absolute Toleranz den Fehler
    assert abs(fourier_coeff(abs_pow(3.0), l) - cubic_coeff(l)) <= 1e-13


def test_fourier_coeffs_tolerances_are_part_of_cache_key() -> None:
    fine = fourier_coeffs(abs_pow(2.75), 16)
    coarse = fourier_coeffs(abs_pow(2.75), 16, 1e-8, 1e-10)
    assert coarse is not fine
    assert coarse is fourier_coeffs(abs_pow(2.75), 16, 1e-8, 1e-10)
    np.testing.assert_allclose(coarse.a, fine.a, rtol=1e-7, atol=1e-9)


def test_fourier_coeff_is_even_in_l() -> None:
    for l in (1, 4, 9):
        assert fourier_coeff(abs_pow(1.5), l) == fourier_coeff(abs_pow(1.5), -l)


def test_fourier_coeff_product_matches_quadrature() -> None:
    s = product(laplace_pow(1), abs_pow(1))
    for l in (0, 1, 3):
        expected = quad_oracle(lambda t: (2 - 2 * math.cos(t)) * t, l)
        assert fourier_coeff(s, l) == pytest.approx(expected, rel=1e-8, abs=1e-11)


def test_fourier_coeff_scaled() -> None:
    assert fourier_coeff(scaled(abs_pow(1), 3.0), 1) == pytest.approx(-6.0 / math.pi, rel=1e-12)
    assert fourier_coeff(constant(2.5), 0) == 2.5
    assert fourier_coeff(constant(2.5), 1) == 0.0


def test_fourier_coeffs_table_is_cached_and_read_only() -> None:
    table = fourier_coeffs(abs_pow(1.25), 32)
    assert table is fourier_coeffs(abs_pow(1.25), 32)
    assert table.a.shape == (32,)
    assert table.a[0] > 0
    with pytest.raises(ValueError):
        table.a[0] = 1.0


def test_fourier_coeffs_rejects_empty() -> None:
    with pytest.raises(ValueError):
        fourier_coeffs(abs_pow(1), 0)


def test_quadrature_error_carries_estimate() -> None:
    fehler = QuadratureError(3, 0.5, 1e-3, 1e-12)
    assert fehler.l == 3
    assert fehler.fehlerschaetzung == 1e-3
    assert isinstance(fehler, ArithmeticError)
    assert "a_3" in str(fehler)


def test_grid_points() -> None:
    np.testing.assert_allclose(grid_points(3), [np.pi / 4, np.pi / 2, 3 * np.pi / 4])


@pytest.mark.parametrize(
    "symbol, n, expected",
    [
        (laplace_pow(1), 3, [2 - math.sqrt(2), 2.0, 2 + math.sqrt(2)]),
        (abs_pow(1), 1, [math.pi / 2]),
        (abs_pow(2), 3, [(math.pi / 4) ** 2, (math.pi / 2) ** 2, (3 * math.pi / 4) ** 2]),
    ],
)
def test_grid_samples(symbol, n: int, expected: list) -> None:
    np.testing.assert_allclose(grid_samples(symbol, n), expected, rtol=1e-14)


def test_grid_samples_positive_and_match_eval() -> None:
    for s in (abs_pow(4.5), laplace_pow(2), product(laplace_pow(1), abs_pow(0.5))):
        samples = grid_samples(s, 50)
        assert np.all(samples > 0)
        np.testing.assert_allclose(samples, eval_symbol(s, grid_points(50)), rtol=1e-15)


def test_grid_samples_zero_on_grid() -> None:
    with pytest.raises(GridZeroError):
        grid_samples(scaled(abs_pow(1), 0.0), 4)
    with pytest.raises(ValueError):
        grid_samples(abs_pow(1), 0)


@pytest.mark.parametrize("theta", [1.0, 1.5])
def test_partial_sum_converges_at_half_pi(theta: float) -> None:
    value = partial_sum(abs_pow(theta), 2048, math.pi / 2)
    assert value == pytest.approx((math.pi / 2) ** theta, abs=1e-3)
