"""Spektren vorkonditionierter Matrizen τ_n(f)^{-1} T_n(f).

Die Eigenwerte werden über die symmetrische Form P^{-1/2} T P^{-1/2} berechnet; die
Quadratwurzel der τ-Matrix ist im Raum der Gitterwerte exakt. Oberhalb der Grenze für dichte
Matrizen liefert ``extreme_eigenvalues`` Lanczos-Näherungen der Randeigenwerte.

Zusätzlich: Auswertung der Rayleigh-Quotienten zᵀTz / zᵀτz mit der Zerlegung des Zählers
N = C + S (Kosinus- und Sinusanteil) und dem Vergleich S ≈ D/2 über die Trapezregel.
"""

import logging
from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.special
from numpy.typing import NDArray
from scipy.sparse.linalg import LinearOperator, eigsh

from .config import (
    CLUSTER_EPS,
    DENSE_CAP,
    QUAD_ABS_TOL,
    QUAD_REL_TOL,
    SEED,
    THRESHOLD,
    TRIALS,
)
from .errors import DenseCapError, DimensionError, SplitIdentityError
from .symbols import abs_pow
from .tau import TauOperator, build_tau
from .toeplitz import ToeplitzOperator, build_toeplitz

logger = logging.getLogger(__name__)

SPLIT_TOL = 1e-8
GAUSS_NODES = 16


@dataclass(frozen=True, eq=False)
class SpectralReport:
    """Sortiertes Spektrum und abgeleitete Kennzahlen."""

    n: int
    theta: float
    eigenvalues: NDArray[np.float64]
    lambda_min: float
    lambda_max: float
    outliers_above: int
    threshold: float
    cluster_fraction: float
    approximate: bool = False

    @classmethod
    def from_eigenvalues(
        cls,
        n: int,
        theta: float,
        eigenvalues: NDArray[np.float64],
        threshold: float = THRESHOLD,
        cluster_eps: float = CLUSTER_EPS,
        approximate: bool = False,
    ) -> "SpectralReport":
        eigs = np.sort(np.asarray(eigenvalues, dtype=float))
        in_cluster = np.abs(eigs - 1.0) <= cluster_eps
        return cls(
            n=n,
            theta=theta,
            eigenvalues=eigs,
            lambda_min=float(eigs[0]),
            lambda_max=float(eigs[-1]),
            outliers_above=outlier_count(eigs, threshold),
            threshold=threshold,
            cluster_fraction=float("nan") if approximate else float(np.mean(in_cluster)),
            approximate=approximate,
        )

    def to_row(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "eigenvalues"}


def outlier_count(eigs: NDArray[np.float64], threshold: float = THRESHOLD) -> int:
    """Anzahl der Einträge echt größer als threshold."""
    return int(np.count_nonzero(np.asarray(eigs) > threshold))


def symmetrized_matrix(
    T: ToeplitzOperator, P: TauOperator, cap: int = DENSE_CAP
) -> NDArray[np.float64]:
    """P^{-1/2} T P^{-1/2} als dichte symmetrische Matrix."""
    if T.n != P.n:
        raise DimensionError(T.n, P.n)
    if T.n > cap:
        raise DenseCapError(T.n, cap)
    half = P.powered(-0.5)
    X = half.apply(T.dense(cap))
    M = half.apply(X.T).T
    return np.asarray(0.5 * (M + M.T), dtype=float)


def preconditioned_spectrum(
    T: ToeplitzOperator, P: TauOperator, cap: int = DENSE_CAP
) -> NDArray[np.float64]:
    """Aufsteigend sortierte Eigenwerte von P^{-1} T."""
    return np.asarray(scipy.linalg.eigvalsh(symmetrized_matrix(T, P, cap)), dtype=float)


def pencil_eigenvalues(
    A: NDArray[np.float64], B: NDArray[np.float64], symmetric: bool = True
) -> NDArray[np.float64]:
    """Eigenwerte von B^{-1} A über einen dichten verallgemeinerten Löser.

    Für nichtsymmetrische Paare wird der Realteil zurückgegeben.
    """
    if symmetric:
        return np.asarray(scipy.linalg.eigh(A, B, eigvals_only=True), dtype=float)
    values = scipy.linalg.eigvals(A, B)
    imag = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if imag > 1e-6 * float(np.max(np.abs(values))):
        logger.warning("Nichtreelle Eigenwerte im Büschel, max. Imaginärteil %.2e", imag)
    return np.sort(values.real)


def extreme_eigenvalues(
    T: ToeplitzOperator, P: TauOperator, k_top: int = 3, tol: float = 1e-8
) -> NDArray[np.float64]:
    """Kleinster und k_top größte Eigenwerte von P^{-1} T per Lanczos (Näherung).

    Returns:
        Aufsteigend sortiert: [λ_min, ..., λ_max]
    """
    if T.n != P.n:
        raise DimensionError(T.n, P.n)
    half = P.powered(-0.5)

    def matvec(x: NDArray[np.float64]) -> NDArray[np.float64]:
        return half.apply(T.matvec(half.apply(np.ravel(x))))

    op = LinearOperator((T.n, T.n), matvec=matvec, dtype=float)
    k_top = max(1, min(k_top, T.n - 2))
    top = eigsh(op, k=k_top, which="LA", tol=tol, return_eigenvectors=False)
    bottom = eigsh(op, k=1, which="SA", tol=tol, return_eigenvectors=False)
    logger.debug("Lanczos-Randeigenwerte n=%d: min %.4g, max %.4g", T.n, bottom[0], top.max())
    return np.sort(np.concatenate([bottom, top]))


def spectral_report(
    theta: float,
    n: int,
    threshold: float = THRESHOLD,
    cluster_eps: float = CLUSTER_EPS,
    cap: int = DENSE_CAP,
    approximate_above_cap: bool = False,
    quad_rel_tol: float = QUAD_REL_TOL,
    quad_abs_tol: float = QUAD_ABS_TOL,
) -> SpectralReport:
    """Spektrum von τ_n(|t|^θ)^{-1} T_n(|t|^θ) mit Kennzahlen.

    Raises:
        DenseCapError: Für n > cap, sofern approximate_above_cap nicht gesetzt ist
    """
    symbol = abs_pow(theta)
    T = build_toeplitz(symbol, n, quad_rel_tol, quad_abs_tol)
    P = build_tau(symbol, n)
    if n > cap and approximate_above_cap:
        logger.info("n=%d oberhalb der Grenze %d, Lanczos-Näherung der Randeigenwerte", n, cap)
        eigs = extreme_eigenvalues(T, P)
        return SpectralReport.from_eigenvalues(n, theta, eigs, threshold, cluster_eps, True)
    eigs = preconditioned_spectrum(T, P, cap)
    report = SpectralReport.from_eigenvalues(n, theta, eigs, threshold, cluster_eps)
    logger.debug(
        "θ=%g n=%d: λ_min=%.4g λ_max=%.4g Ausreißer=%d",
        theta,
        n,
        report.lambda_min,
        report.lambda_max,
        report.outliers_above,
    )
    return report


def rayleigh_quotient(T: ToeplitzOperator, P: TauOperator, z: NDArray[np.float64]) -> float:
    """zᵀ T z / zᵀ P z."""
    z = np.asarray(z, dtype=float)
    return float(z @ T.matvec(z)) / float(z @ P.apply(z))


@lru_cache(maxsize=16)
def _split_rule(theta: float, n: int) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Zusammengesetzte Gauß-Regel für ∫_0^π t^θ g(t) dt über [kπ/(n+1), (k+1)π/(n+1)].

    Erstes Teilintervall mit Gauß-Jacobi-Gewicht t^θ, die übrigen mit Gauß-Legendre.
    """
    h = np.pi / (n + 1)
    x, w = scipy.special.roots_legendre(GAUSS_NODES)
    xj, wj = scipy.special.roots_jacobi(GAUSS_NODES, 0.0, theta)
    first_nodes = 0.5 * h * (1.0 + xj)
    first_weights = (0.5 * h) ** (theta + 1.0) * wj
    starts = h * np.arange(1, n + 1)
    nodes = (starts[:, None] + 0.5 * h * (1.0 + x)[None, :]).ravel()
    weights = (0.5 * h * w[None, :] * (nodes.reshape(n, -1) ** theta)).ravel()
    return np.concatenate([first_nodes, nodes]), np.concatenate([first_weights, weights])


def split_numerator(theta: float, z: NDArray[np.float64]) -> Tuple[float, float]:
    """C = (1/π)∫_0^π t^θ (Σ cos(jt) z_j)² dt und S analog mit sin."""
    n = z.shape[0]
    nodes, weights = _split_rule(float(theta), n)
    phase = np.multiply.outer(nodes, np.arange(1, n + 1))
    cos_part = np.cos(phase) @ z
    sin_part = np.sin(phase) @ z
    C = float(weights @ cos_part**2) / np.pi
    S = float(weights @ sin_part**2) / np.pi
    return C, S


@dataclass(frozen=True, eq=False)
class RayleighDiagnostics:
    """Ergebnis der Rayleigh-Quotienten-Auswertung."""

    min_ratio: float
    ratios: NDArray[np.float64]
    split_error: float
    min_s_over_d: float


def rayleigh_lower_diag(
    theta: float,
    n: int,
    trials: int = TRIALS,
    seed: int = SEED,
    vectors: Optional[NDArray[np.float64]] = None,
    split_checks: int = 3,
    cap: int = DENSE_CAP,
    quad_rel_tol: float = QUAD_REL_TOL,
    quad_abs_tol: float = QUAD_ABS_TOL,
) -> RayleighDiagnostics:
    """Minimum der Rayleigh-Quotienten zᵀTz / zᵀτz über zufällige Einheitsvektoren.

    Für die ersten split_checks Vektoren wird der Zähler als C + S per Quadratur
    nachgerechnet und S mit dem halben Nenner verglichen.

    Args:
        theta: Ordnung der Nullstelle
        n: Dimension
        trials: Anzahl zufälliger Vektoren (ignoriert, wenn vectors gesetzt ist)
        seed: Startwert des Zufallsgenerators
        vectors: Optionale Testvektoren als Spalten
        split_checks: Anzahl Vektoren für die Zerlegungsprüfung
        cap: Grenze für dichte Matrizen
        quad_rel_tol, quad_abs_tol: Toleranzen der Koeffizientenquadratur

    Raises:
        SplitIdentityError: Wenn |N - (C + S)| / N > 1e-8
    """
    if n > cap:
        raise DenseCapError(n, cap)
    symbol = abs_pow(theta)
    T = build_toeplitz(symbol, n, quad_rel_tol, quad_abs_tol)
    P = build_tau(symbol, n)
    if vectors is None:
        if trials < 1:
            raise ValueError(f"trials muss positiv sein, erhalten: {trials}")
        rng = np.random.default_rng(seed)
        vectors = rng.standard_normal((n, trials))
    Z = np.asarray(vectors, dtype=float).reshape(n, -1)
    Z = Z / np.linalg.norm(Z, axis=0)

    numer = np.einsum("ij,ij->j", Z, T.matvec(Z))
    denom = np.einsum("ij,ij->j", Z, P.apply(Z))
    ratios = numer / denom

    split_error = 0.0
    s_over_d = []
    for j in range(min(split_checks, Z.shape[1])):
        C, S = split_numerator(theta, Z[:, j])
        err = abs(numer[j] - (C + S)) / numer[j]
        if err > SPLIT_TOL:
            raise SplitIdentityError(
                f"N = C + S verletzt: relative Abweichung {err:.2e} (θ={theta}, n={n})"
            )
        split_error = max(split_error, err)
        s_over_d.append(S / denom[j])

    result = RayleighDiagnostics(
        min_ratio=float(ratios.min()),
        ratios=ratios,
        split_error=split_error,
        min_s_over_d=float(min(s_over_d)) if s_over_d else float("nan"),
    )
    logger.debug("Rayleigh θ=%g n=%d: Minimum %.4g", theta, n, result.min_ratio)
    return result
