"""Symmetrische Toeplitz-Operatoren T_n(f).

Schnelle Matrix-Vektor-Multiplikation über die zirkulante Einbettung der Größe 2n
(erste Spalte a_0..a_{n-1}, 0, a_{n-1}..a_1) und FFT. Für trigonometrische Polynome
(Bandmatrizen) zusätzlich Band-Cholesky-Zerlegung und Lösen in O(n k²).

Hauptkomponenten:
- ToeplitzOperator: Koeffizientenspalte, matvec, dichte Darstellung
- BandCholesky: Faktorisierung einmal, Lösen pro PCG-Iteration
- build_band_preconditioner: Vergleichsvorkonditionierer T_n((2 - 2cos t)^k)
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .config import DENSE_CAP, QUAD_ABS_TOL, QUAD_REL_TOL
from .errors import DenseCapError, DimensionError, PositiveDefinitenessError
from .symbols import Symbol, fourier_coeffs, laplace_pow

logger = logging.getLogger(__name__)


def check_dimension(n: int, x: NDArray[np.float64]) -> None:
    if x.ndim not in (1, 2) or x.shape[0] != n:
        raise DimensionError(n, x.shape[0] if x.ndim > 0 else 0)


@dataclass(frozen=True, eq=False)
class ToeplitzOperator:
    """T_n(f) mit Eintrag (j, k) = a_{|j-k|}.

    Attributes:
        n: Dimension
        col: Erste Spalte a_0..a_{n-1}
        bandwidth: Bandbreite k für polynomiale Symbole, sonst None
        symbol: Erzeugendes Symbol (optional)
    """

    n: int
    col: NDArray[np.float64]
    bandwidth: Optional[int] = None
    symbol: Optional[Symbol] = None
    _col_hat: NDArray[np.complex128] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1 or self.col.shape != (self.n,):
            raise ValueError(f"Spalte der Länge {self.n} erwartet, erhalten: {self.col.shape}")
        circulant = np.concatenate([self.col, [0.0], self.col[:0:-1]])
        object.__setattr__(self, "_col_hat", np.fft.rfft(circulant))

    def matvec(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """T x in O(n log n); x darf eine Matrix mit n Zeilen sein."""
        x = np.asarray(x, dtype=float)
        check_dimension(self.n, x)
        m = 2 * self.n
        x_hat = np.fft.rfft(x, n=m, axis=0)
        col_hat = self._col_hat if x.ndim == 1 else self._col_hat[:, None]
        return np.fft.irfft(col_hat * x_hat, n=m, axis=0)[: self.n]

    apply = matvec

    def dense(self, cap: int = DENSE_CAP) -> NDArray[np.float64]:
        if self.n > cap:
            raise DenseCapError(self.n, cap)
        return np.asarray(scipy.linalg.toeplitz(self.col), dtype=float)


def build_toeplitz(
    s: Symbol, n: int, rel_tol: float = QUAD_REL_TOL, abs_tol: float = QUAD_ABS_TOL
) -> ToeplitzOperator:
    """T_n(s) aus den Fourier-Koeffizienten des Symbols (Toleranzen der Quadratur)."""
    coeffs = fourier_coeffs(s, n, rel_tol, abs_tol)
    return ToeplitzOperator(n=n, col=np.array(coeffs.a), bandwidth=s.bandwidth, symbol=s)


def toeplitz_matvec(T: ToeplitzOperator, x: NDArray[np.float64]) -> NDArray[np.float64]:
    return T.matvec(x)


class BandCholesky:
    """Cholesky-Zerlegung einer symmetrischen Band-Toeplitz-Matrix (obere Speicherform).

    Raises:
        ValueError: Wenn der Operator keine Bandbreite hat
        PositiveDefinitenessError: Bei nichtpositivem Pivot
    """

    def __init__(self, T: ToeplitzOperator) -> None:
        if T.bandwidth is None:
            raise ValueError("Band-Cholesky benötigt einen Operator mit Bandbreite.")
        self.n = T.n
        k = min(T.bandwidth, T.n - 1)
        ab = np.zeros((k + 1, T.n))
        for d in range(k + 1):
            ab[k - d, d:] = T.col[d]
        try:
            self._factor = scipy.linalg.cholesky_banded(ab, lower=False)
        except np.linalg.LinAlgError as e:
            raise PositiveDefinitenessError(
                f"Band-Cholesky fehlgeschlagen, Matrix nicht positiv definit: {e}"
            ) from e

    def solve(self, b: NDArray[np.float64]) -> NDArray[np.float64]:
        b = np.asarray(b, dtype=float)
        check_dimension(self.n, b)
        return np.asarray(scipy.linalg.cho_solve_banded((self._factor, False), b), dtype=float)


def band_solve(T: ToeplitzOperator, b: NDArray[np.float64]) -> NDArray[np.float64]:
    """Löst T x = b für eine Band-Toeplitz-Matrix."""
    return BandCholesky(T).solve(b)


def band_exponent(theta: float) -> int:
    """k >= 1 mit minimalem |2k - θ|, bei Gleichstand das größere k."""
    if theta <= 0:
        raise ValueError(f"θ muss positiv sein, erhalten: {theta}")
    return max(1, int(np.floor(theta / 2.0 + 0.5)))


def build_band_preconditioner(theta: float, n: int) -> ToeplitzOperator:
    k = band_exponent(theta)
    logger.debug("Bandvorkonditionierer für θ=%g: (2-2cos t)^%d", theta, k)
    return build_toeplitz(laplace_pow(k), n)
