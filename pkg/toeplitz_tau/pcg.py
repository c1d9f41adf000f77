"""Vorkonditioniertes CG-Verfahren (PCG).

Startvektor 0, Abbruch bei ‖r_j‖₂ / ‖r_0‖₂ <= rel_tol. Operator und Vorkonditionierer
werden als Funktionen übergeben (apply_A: x -> A x, solve_P: r -> P^{-1} r).
Alle residual_refresh Iterationen wird das Residuum aus b - A x neu berechnet, solange es
oberhalb der Rundungsschranke ε·‖A‖·‖x‖ liegt.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from numpy.typing import NDArray

from .config import MAX_ITER, REL_TOL, RESIDUAL_REFRESH
from .errors import PositiveDefinitenessError

logger = logging.getLogger(__name__)

Vector = NDArray[np.float64]
LinearMap = Callable[[Vector], Vector]

# Faktor auf ε·‖A‖·‖x‖; darunter zeigt das wahre Residuum nur Rundungsfehler
ROUNDOFF_FACTOR = 100.0


@dataclass(frozen=True)
class SolveConfig:
    rel_tol: float = REL_TOL
    max_iter: int = MAX_ITER
    record_history: bool = False
    residual_refresh: int = RESIDUAL_REFRESH

    def __post_init__(self) -> None:
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol muss in (0, 1) liegen, erhalten: {self.rel_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter muss mindestens 1 sein, erhalten: {self.max_iter}")
        if self.residual_refresh < 1:
            raise ValueError("residual_refresh muss mindestens 1 sein.")


@dataclass(frozen=True, eq=False)
class SolveResult:
    x: Vector
    iterations: int
    residual_history: Optional[Vector]
    converged: bool
    final_relative_residual: float


def identity_preconditioner(r: Vector) -> Vector:
    return np.array(r, dtype=float)


def ones_rhs(n: int) -> Vector:
    return np.ones(n)


def random_rhs(n: int, seed: int = 0) -> Vector:
    return np.random.default_rng(seed).standard_normal(n)


def _check_finite(value: float, what: str, iteration: int) -> None:
    if not np.isfinite(value):
        raise PositiveDefinitenessError(f"{what} nicht endlich in Iteration {iteration}")


def pcg_solve(
    apply_A: LinearMap, solve_P: LinearMap, b: Vector, cfg: SolveConfig = SolveConfig()
) -> SolveResult:
    """Löst A x = b mit vorkonditioniertem CG.

    Args:
        apply_A: Symmetrisch positiv definiter Operator
        solve_P: Anwendung von P^{-1}, P symmetrisch positiv definit
        b: Rechte Seite, ungleich 0
        cfg: Abbruchkriterien

    Returns:
        SolveResult: Näherung, Iterationszahl und Konvergenzstatus

    Raises:
        ValueError: Wenn b der Nullvektor ist
        PositiveDefinitenessError: Bei pᵀAp <= 0 oder nichtendlichen Werten
    """
    b = np.asarray(b, dtype=float)
    r0_norm = float(np.linalg.norm(b))
    if r0_norm == 0.0:
        raise ValueError("Rechte Seite ist der Nullvektor.")

    x = np.zeros_like(b)
    r = b.copy()
    z = solve_P(r)
    p = z.copy()
    rz = float(r @ z)
    _check_finite(rz, "rᵀz", 0)
    history: List[float] = [1.0]
    norm_A = 0.0
    rel = 1.0
    converged = False
    iteration = 0

    for iteration in range(1, cfg.max_iter + 1):
        Ap = apply_A(p)
        pAp = float(p @ Ap)
        _check_finite(pAp, "pᵀAp", iteration)
        if pAp <= 0.0:
            raise PositiveDefinitenessError(f"pᵀAp = {pAp:.3e} <= 0 in Iteration {iteration}")
        norm_A = max(norm_A, float(np.linalg.norm(Ap) / np.linalg.norm(p)))

        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap

        if iteration % cfg.residual_refresh == 0:
            true_r = b - apply_A(x)
            floor = ROUNDOFF_FACTOR * np.finfo(float).eps * norm_A * float(np.linalg.norm(x))
            if np.linalg.norm(true_r) > floor:
                r = true_r
            else:
                logger.debug("Iteration %d: Residuum an der Rundungsschranke", iteration)

        rel = float(np.linalg.norm(r)) / r0_norm
        _check_finite(rel, "Residuum", iteration)
        if cfg.record_history:
            history.append(rel)
        if rel <= cfg.rel_tol:
            converged = True
            break

        z = solve_P(r)
        rz_new = float(r @ z)
        _check_finite(rz_new, "rᵀz", iteration)
        p = z + (rz_new / rz) * p
        rz = rz_new

    if not converged:
        logger.warning(
            "PCG nach %d Iterationen nicht konvergiert (rel. Residuum %.2e)", iteration, rel
        )
    else:
        logger.debug("PCG konvergiert in %d Iterationen (rel. Residuum %.2e)", iteration, rel)

    return SolveResult(
        x=x,
        iterations=iteration,
        residual_history=np.array(history) if cfg.record_history else None,
        converged=converged,
        final_relative_residual=rel,
    )


def unpreconditioned_cg(
    apply_A: LinearMap, b: Vector, cfg: SolveConfig = SolveConfig()
) -> SolveResult:
    return pcg_solve(apply_A, identity_preconditioner, b, cfg)
