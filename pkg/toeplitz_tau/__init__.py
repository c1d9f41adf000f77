"""Toeplitz-Systeme mit nichtnegativem Symbol und τ-Vorkonditionierung.

Bausteine: Symbole und Fourier-Koeffizienten, Toeplitz- und τ-Operatoren, PCG,
Spektralanalyse, mehrstufige Vorkonditionierung für θ > 2 und Blocksymbole.
"""

from .chain import ChainReport, build_theta_chain, verify_chain
from .errors import (
    AsymmetricMatrixError,
    ChainError,
    DenseCapError,
    DimensionError,
    GridZeroError,
    PositiveDefinitenessError,
    QuadratureError,
    SingularBlockError,
    SplitIdentityError,
    ToeplitzTauError,
)
from .pcg import SolveConfig, SolveResult, pcg_solve, unpreconditioned_cg
from .spectral import SpectralReport, spectral_report
from .symbols import Symbol, abs_pow, eval_symbol, fourier_coeffs, laplace_pow, product
from .tau import TauOperator, build_tau
from .toeplitz import ToeplitzOperator, build_band_preconditioner, build_toeplitz

__version__ = "1.0.0"

__all__ = [
    "AsymmetricMatrixError",
    "ChainError",
    "ChainReport",
    "DenseCapError",
    "DimensionError",
    "GridZeroError",
    "PositiveDefinitenessError",
    "QuadratureError",
    "SingularBlockError",
    "SolveConfig",
    "SolveResult",
    "SpectralReport",
    "SplitIdentityError",
    "Symbol",
    "TauOperator",
    "ToeplitzOperator",
    "ToeplitzTauError",
    "abs_pow",
    "build_band_preconditioner",
    "build_tau",
    "build_theta_chain",
    "build_toeplitz",
    "eval_symbol",
    "fourier_coeffs",
    "laplace_pow",
    "pcg_solve",
    "product",
    "spectral_report",
    "unpreconditioned_cg",
    "verify_chain",
]
