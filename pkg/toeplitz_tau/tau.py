"""Sinustransformation DST-I und die τ-Algebra.

τ_n(f) = S_n diag(f(w)) S_n mit (S_n)_{ij} = √(2/(n+1)) sin(ijπ/(n+1)) und w_i = iπ/(n+1).
S_n ist symmetrisch, orthogonal und involutorisch, daher kostet Anwenden und Lösen je zwei
Transformationen und eine Diagonalskalierung. Gebrochene Potenzen werden als Exponent auf
den Gitterwerten gespeichert.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.fft
from numpy.typing import NDArray

from .config import DENSE_CAP
from .errors import DenseCapError, DimensionError
from .symbols import Symbol, grid_samples
from .toeplitz import check_dimension

logger = logging.getLogger(__name__)


def dst1(x: NDArray[np.float64]) -> NDArray[np.float64]:
    """S_n x entlang der ersten Achse (orthonormierte DST-I)."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] == 1:
        return x.copy()
    return np.asarray(scipy.fft.dst(x, type=1, norm="ortho", axis=0), dtype=float)


def dst1_fft(x: NDArray[np.float64]) -> NDArray[np.float64]:
    """S_n x über die ungerade Fortsetzung der Länge 2(n+1) und eine FFT."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    pad = np.zeros((1,) + x.shape[1:])
    extended = np.concatenate([pad, x, pad, -x[::-1]], axis=0)
    spectrum = np.fft.fft(extended, axis=0)
    return -spectrum[1 : n + 1].imag * np.sqrt(0.5 / (n + 1))


@dataclass(frozen=True, eq=False)
class TauOperator:
    """S diag(eigs^power) S.

    Attributes:
        n: Dimension
        eigs: Gitterwerte f(w_i) > 0
        power: Exponent auf den Gitterwerten
    """

    n: int
    eigs: NDArray[np.float64]
    power: float = 1.0

    def __post_init__(self) -> None:
        if self.eigs.shape != (self.n,):
            raise DimensionError(self.n, self.eigs.shape[0])
        if np.any(self.eigs <= 0):
            raise ValueError("τ-Operator benötigt strikt positive Gitterwerte.")

    @property
    def diag(self) -> NDArray[np.float64]:
        return np.asarray(self.eigs**self.power, dtype=float)

    @property
    def condition_number(self) -> float:
        d = self.diag
        return float(d.max() / d.min())

    def _scale(self, x: NDArray[np.float64], d: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        check_dimension(self.n, x)
        y = dst1(x)
        y *= d if y.ndim == 1 else d[:, None]
        return dst1(y)

    def apply(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self._scale(x, self.diag)

    def solve(self, b: NDArray[np.float64]) -> NDArray[np.float64]:
        return self._scale(b, 1.0 / self.diag)

    def powered(self, p: float) -> "TauOperator":
        """(S diag(eigs^power) S)^p."""
        return TauOperator(self.n, self.eigs, self.power * p)

    def inverse(self) -> "TauOperator":
        return self.powered(-1.0)

    def dense(self, cap: int = DENSE_CAP) -> NDArray[np.float64]:
        if self.n > cap:
            raise DenseCapError(self.n, cap)
        return self.apply(np.eye(self.n))


def build_tau(s: Symbol, n: int, power: float = 1.0) -> TauOperator:
    """τ_n(s)^power aus den Gitterwerten des Symbols.

    Raises:
        GridZeroError: Wenn das Symbol auf dem Gitter verschwindet
    """
    return TauOperator(n=n, eigs=grid_samples(s, n), power=power)


def tau_apply(P: TauOperator, x: NDArray[np.float64]) -> NDArray[np.float64]:
    return P.apply(x)


def tau_solve(P: TauOperator, b: NDArray[np.float64]) -> NDArray[np.float64]:
    return P.solve(b)


def tau_product(P: TauOperator, Q: TauOperator) -> TauOperator:
    """P·Q innerhalb der Algebra: Produkt der Eigenwerte."""
    if P.n != Q.n:
        raise DimensionError(P.n, Q.n)
    return TauOperator(P.n, P.diag * Q.diag)
