"""2×2-Blocksymbole, Block-Toeplitz-Operatoren und PSD-Orakel.

B_2n(F) = [[T(f1), T(f2)], [T(f3), T(f4)]] geht durch eine Permutation in T_n(F) über,
die Toeplitz-Matrix mit 2×2-Blöcken. Für punktweise positiv semidefinites F ist B_2n(F)
positiv semidefinit und damit auch sein Schur-Komplement. Die Funktionen hier dienen als
dichte Test-Orakel und sind auf kleine n ausgelegt.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .config import DENSE_CAP, PSD_TOL, SCHUR_CAP
from .errors import AsymmetricMatrixError, DenseCapError, SingularBlockError
from .spectral import preconditioned_spectrum
from .symbols import Symbol, abs_pow, eval_symbol
from .tau import build_tau
from .toeplitz import ToeplitzOperator, build_toeplitz

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class BlockSymbol:
    """F(t) = [[f1, f2], [f3, f4]]."""

    f1: Symbol
    f2: Symbol
    f3: Symbol
    f4: Symbol

    @property
    def is_symmetric(self) -> bool:
        return self.f2 == self.f3


def mean_construction(theta1: float, theta2: float) -> BlockSymbol:
    """[[|t|^θ1, |t|^θ̂], [|t|^θ̂, |t|^θ2]] mit dem arithmetischen Mittel θ̂."""
    theta_hat = 0.5 * (theta1 + theta2)
    return BlockSymbol(abs_pow(theta1), abs_pow(theta_hat), abs_pow(theta_hat), abs_pow(theta2))


def pointwise_psd(F: BlockSymbol, points: int = 10_000, tol: float = 1e-12) -> bool:
    """Prüft f1 >= 0, f4 >= 0 und det F >= 0 auf einem gleichmäßigen Gitter über [-π, π]."""
    t = np.linspace(-np.pi, np.pi, points)
    f1, f2, f3, f4 = (np.asarray(eval_symbol(f, t)) for f in (F.f1, F.f2, F.f3, F.f4))
    scale = max(1.0, float(np.max(np.abs(np.concatenate([f1, f2, f3, f4])))) ** 2)
    det = f1 * f4 - f2 * f3
    return bool(np.all(f1 >= -tol) and np.all(f4 >= -tol) and np.all(det >= -tol * scale))


@dataclass(frozen=True, eq=False)
class BlockToeplitz:
    """Vier Toeplitz-Blöcke der Größe n, zusammen 2n × 2n."""

    n: int
    blocks: Tuple[ToeplitzOperator, ToeplitzOperator, ToeplitzOperator, ToeplitzOperator]

    def dense(self, cap: int = DENSE_CAP) -> NDArray[np.float64]:
        if 2 * self.n > cap:
            raise DenseCapError(2 * self.n, cap)
        t1, t2, t3, t4 = (b.dense(cap) for b in self.blocks)
        return np.block([[t1, t2], [t3, t4]])


def build_block(F: BlockSymbol, n: int) -> BlockToeplitz:
    if n < 1:
        raise ValueError(f"n muss positiv sein, erhalten: {n}")
    blocks = tuple(build_toeplitz(f, n) for f in (F.f1, F.f2, F.f3, F.f4))
    return BlockToeplitz(n=n, blocks=blocks)  # type: ignore[arg-type]


def interleave_permutation(n: int) -> NDArray[np.intp]:
    """p[2j + s] = s·n + j: Blockreihenfolge -> verschränkte Reihenfolge."""
    j, s = np.divmod(np.arange(2 * n), 2)
    return np.asarray(s * n + j, dtype=np.intp)


def interleave_permute(B: BlockToeplitz, cap: int = DENSE_CAP) -> NDArray[np.float64]:
    """Π B Πᵀ, die Toeplitz-Matrix mit 2×2-Blöcken T_n(F)."""
    p = interleave_permutation(B.n)
    return B.dense(cap)[np.ix_(p, p)]


def schur_complement(B: BlockToeplitz, cap: int = SCHUR_CAP) -> NDArray[np.float64]:
    """T(f4) - T(f3) T(f1)^{-1} T(f2) über eine Cholesky-Zerlegung von T(f1).

    Raises:
        DenseCapError: Für n oberhalb der Grenze
        SingularBlockError: Wenn T(f1) nicht positiv definit ist
    """
    if B.n > cap:
        raise DenseCapError(B.n, cap)
    t1, t2, t3, t4 = (b.dense(cap) for b in B.blocks)
    try:
        factor = scipy.linalg.cho_factor(t1)
    except np.linalg.LinAlgError as e:
        raise SingularBlockError(f"Linker oberer Block nicht invertierbar: {e}") from e
    schur = t4 - t3 @ scipy.linalg.cho_solve(factor, t2)
    if B.blocks[1].symbol == B.blocks[2].symbol:
        schur = 0.5 * (schur + schur.T)
    return np.asarray(schur, dtype=float)


def is_psd(M: NDArray[np.float64], tol: float = PSD_TOL) -> bool:
    """True genau dann, wenn λ_min(M) >= -tol · max(‖M‖₂, 1).

    Raises:
        AsymmetricMatrixError: Wenn M nicht symmetrisch ist
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"Quadratische Matrix erwartet, erhalten: {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    asym = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    if asym > SYMMETRY_TOL * scale:
        raise AsymmetricMatrixError(asym, SYMMETRY_TOL * scale)
    eigs = scipy.linalg.eigvalsh(M)
    norm = max(1.0, float(np.max(np.abs(eigs))))
    return bool(eigs[0] >= -tol * norm)


@dataclass(frozen=True)
class MeanRadiusBound:
    """Beide Seiten von ρ̂² <= ‖M‖² <= ρ1·ρ2 für die Mittelwertkonstruktion."""

    rho_hat_sq: float
    middle: float
    rho_product: float

    def holds(self, slack: float = 1e-8) -> bool:
        return self.rho_hat_sq <= self.middle + slack and self.middle <= self.rho_product + slack


def mean_radius_bound(theta1: float, theta2: float, n: int) -> MeanRadiusBound:
    """Spektralradien von τ(|t|^{-θ})T(|t|^θ) für θ1, θ2 und das Mittel θ̂.

    middle ist ‖τ(|t|^{-θ2/2}) T(|t|^θ̂) τ(|t|^{-θ1/2})‖₂², das Bindeglied
    der Abschätzung.
    """
    theta_hat = 0.5 * (theta1 + theta2)

    def radius(theta: float) -> float:
        symbol = abs_pow(theta)
        eigs = preconditioned_spectrum(build_toeplitz(symbol, n), build_tau(symbol, n))
        return float(eigs[-1])

    T_hat = build_toeplitz(abs_pow(theta_hat), n).dense()
    left = build_tau(abs_pow(theta2), n, power=-0.5)
    right = build_tau(abs_pow(theta1), n, power=-0.5)
    M = left.apply(right.apply(T_hat.T).T)
    middle = float(scipy.linalg.norm(M, 2)) ** 2

    bound = MeanRadiusBound(radius(theta_hat) ** 2, middle, radius(theta1) * radius(theta2))
    logger.debug("Mittelwertschranke θ1=%g θ2=%g n=%d: %s", theta1, theta2, n, bound)
    return bound
