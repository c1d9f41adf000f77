"""Mehrstufige Vorkonditionierung für θ > 2.

Mit θ = 2k + r (k >= 1, r ∈ [0, 2)) und g_k = (2 - 2cos t)^k lautet die Kette

    P0 = T(|t|^θ), P1 = T(g_k |t|^r), P2 = τ(g_k)·T(|t|^r), P3 = τ(g_k |t|^r), P4 = τ(|t|^θ).

Liegen die Eigenwerte von (P_{j+1})^{-1} P_j bis auf r_j^- bzw. r_j^+ Ausreißer in [α_j, β_j],
so liegen die von P4^{-1} P0 bis auf Σ r_j^- bzw. Σ r_j^+ Ausreißer in [Π α_j, Π β_j].
``verify_chain`` misst die Intervalle je Glied, setzt das Budget zusammen und prüft es gegen
das direkt berechnete Spektrum.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar

from .config import DENSE_CAP, QUAD_ABS_TOL, QUAD_REL_TOL, THRESHOLD
from .errors import ChainError, DenseCapError, DimensionError
from .spectral import outlier_count, pencil_eigenvalues, preconditioned_spectrum
from .symbols import abs_pow, laplace_pow, product
from .tau import TauOperator, build_tau
from .toeplitz import ToeplitzOperator, build_toeplitz

logger = logging.getLogger(__name__)

RANK_CONSTANT = 4
RANK_TOL = 1e-9
BOUND_SAMPLES = 100_000
# Relativer Spielraum beim Zählen gegen α und β
COUNT_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class ProductOperator:
    """τ(g) · T(h), nicht symmetrisch, aber ähnlich zu τ(g)^{1/2} T(h) τ(g)^{1/2}."""

    tau: TauOperator
    toeplitz: ToeplitzOperator

    def __post_init__(self) -> None:
        if self.tau.n != self.toeplitz.n:
            raise DimensionError(self.tau.n, self.toeplitz.n)

    @property
    def n(self) -> int:
        return self.tau.n

    def apply(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.tau.apply(self.toeplitz.matvec(x))

    def dense(self, cap: int = DENSE_CAP) -> NDArray[np.float64]:
        return self.tau.apply(self.toeplitz.dense(cap))

    def symmetrized_dense(self, cap: int = DENSE_CAP) -> NDArray[np.float64]:
        """τ(g)^{1/2} T(h) τ(g)^{1/2}, symmetrisch mit denselben Eigenwerten."""
        half = self.tau.powered(0.5)
        M = half.apply(half.apply(self.toeplitz.dense(cap)).T).T
        return np.asarray(0.5 * (M + M.T), dtype=float)


ChainOperator = Union[ToeplitzOperator, TauOperator, ProductOperator]
OPERATOR_KINDS: Dict[type, str] = {
    ToeplitzOperator: "toeplitz",
    TauOperator: "tau",
    ProductOperator: "product",
}


def decompose_theta(theta: float) -> Tuple[int, float]:
    """θ = 2k + r mit k >= 1 und r ∈ [0, 2).

    Raises:
        ChainError: Für θ <= 2
    """
    if not theta > 2:
        raise ChainError(f"Kette nur für θ > 2 definiert, erhalten: {theta}")
    k = int(math.floor(theta / 2.0))
    return k, theta - 2.0 * k


def build_theta_chain(
    theta: float, n: int, quad_rel_tol: float = QUAD_REL_TOL, quad_abs_tol: float = QUAD_ABS_TOL
) -> List[ChainOperator]:
    """Die Operatoren P0..P4 der Kette für T_n(|t|^θ)."""
    if n < 1:
        raise ValueError(f"n muss positiv sein, erhalten: {n}")
    k, r = decompose_theta(theta)
    g = laplace_pow(k)
    h = abs_pow(r)
    gh = product(g, h)
    logger.debug("Kette θ=%g: k=%d, r=%g, n=%d", theta, k, r, n)
    tol = (quad_rel_tol, quad_abs_tol)
    return [
        build_toeplitz(abs_pow(theta), n, *tol),
        build_toeplitz(gh, n, *tol),
        ProductOperator(build_tau(g, n), build_toeplitz(h, n, *tol)),
        build_tau(gh, n),
        build_tau(abs_pow(theta), n),
    ]


def _ratio(t: NDArray[np.float64], k: int) -> NDArray[np.float64]:
    # t² / (2 - 2cos t) = (t / (2 sin(t/2)))², ohne Auslöschung bei kleinen t
    return np.asarray((t / (2.0 * np.sin(0.5 * t))) ** (2 * k), dtype=float)


@lru_cache(maxsize=None)
def equiv_bounds(k: int) -> Tuple[float, float]:
    """(r, R) = (min, max) von |t|^{2k} / (2 - 2cos t)^k auf [-π, π] \\ {0}, Grenzwert 1 bei 0."""
    if int(k) != k or k < 1:
        raise ValueError(f"k muss eine positive ganze Zahl sein, erhalten: {k}")
    t = np.linspace(np.pi / BOUND_SAMPLES, np.pi, BOUND_SAMPLES)
    values = _ratio(t, k)
    step = t[1] - t[0]

    def refine(index: int, sign: float) -> float:
        lo = max(t[index] - step, t[0])
        hi = min(t[index] + step, np.pi)
        res = minimize_scalar(
            lambda s: sign * float(_ratio(np.array([s]), k)[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return float(sign * res.fun)

    lower = min(1.0, float(values.min()), refine(int(np.argmin(values)), 1.0))
    upper = max(1.0, float(values.max()), refine(int(np.argmax(values)), -1.0))
    return lower, upper


@dataclass(frozen=True, eq=False)
class ChainLink:
    """Ein Glied (P_{j+1}, P_j) mit Intervall, Ausreißerzahlen und dem Operator P_j."""

    interval: Tuple[float, float]
    outliers_below: int = 0
    outliers_above: int = 0
    operator: Optional[ChainOperator] = None
    label: str = ""
    eigenvalues: Optional[NDArray[np.float64]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        alpha, beta = self.interval
        if alpha > beta:
            raise ChainError(f"Intervall ungültig: α={alpha} > β={beta}")
        if self.outliers_below < 0 or self.outliers_above < 0:
            raise ChainError("Ausreißerzahlen müssen nichtnegativ sein.")

    @property
    def operator_kind(self) -> str:
        """Art des Operators P_j: toeplitz, tau, product oder leer."""
        if self.operator is None:
            return ""
        return OPERATOR_KINDS[type(self.operator)]


@dataclass(frozen=True)
class ChainBudget:
    alpha: float
    beta: float
    r_minus: int
    r_plus: int

    def combine(self, other: "ChainBudget") -> "ChainBudget":
        return ChainBudget(
            self.alpha * other.alpha,
            self.beta * other.beta,
            self.r_minus + other.r_minus,
            self.r_plus + other.r_plus,
        )


def _link_budget(link: ChainLink) -> ChainBudget:
    alpha, beta = link.interval
    if alpha <= 0:
        raise ChainError(f"Intervall muss positiv sein, erhalten: α={alpha}")
    return ChainBudget(alpha, beta, link.outliers_below, link.outliers_above)


def compose_budget(links: Sequence[ChainLink]) -> ChainBudget:
    """α = Π α_j, β = Π β_j, r^- = Σ r_j^-, r^+ = Σ r_j^+.

    Raises:
        ChainError: Für eine leere Liste oder nichtpositive Intervalle
    """
    if not links:
        raise ChainError("Budget einer leeren Kette ist nicht definiert.")
    return reduce(ChainBudget.combine, (_link_budget(link) for link in links))


def link_spectrum(
    lower: ChainOperator, upper: ChainOperator, cap: int = DENSE_CAP
) -> NDArray[np.float64]:
    """Aufsteigend sortierte Eigenwerte von lower^{-1} · upper."""
    if lower.n != upper.n:
        raise DimensionError(lower.n, upper.n)
    if lower.n > cap:
        raise DenseCapError(lower.n, cap)
    if isinstance(lower, TauOperator):
        if isinstance(upper, TauOperator):
            return np.sort(upper.diag / lower.diag)
        if isinstance(upper, ToeplitzOperator):
            return preconditioned_spectrum(upper, lower, cap)
        # lower^{-1}·τ(g)·T(h) = τ(q)·T(h) mit q = Quotient der Gitterwerte
        q = TauOperator(lower.n, upper.tau.diag / lower.diag)
        M = ProductOperator(q, upper.toeplitz).symmetrized_dense(cap)
        return np.asarray(scipy.linalg.eigvalsh(M), dtype=float)
    if isinstance(lower, ToeplitzOperator) and isinstance(upper, ToeplitzOperator):
        return pencil_eigenvalues(upper.dense(cap), lower.dense(cap), symmetric=True)
    return pencil_eigenvalues(upper.dense(cap), lower.dense(cap), symmetric=False)


def measure_link(
    lower: ChainOperator,
    upper: ChainOperator,
    below: int = 0,
    above: int = 0,
    label: str = "",
    cap: int = DENSE_CAP,
) -> ChainLink:
    """Kleinstes Intervall, das alle Eigenwerte bis auf die deklarierten Ausreißer enthält."""
    eigs = link_spectrum(lower, upper, cap)
    inner = eigs[below : eigs.size - above]
    if inner.size == 0:
        raise ChainError(f"Glied {label}: keine Eigenwerte außerhalb der Ausreißer")
    link = ChainLink(
        interval=(float(inner[0]), float(inner[-1])),
        outliers_below=below,
        outliers_above=above,
        operator=upper,
        label=label,
        eigenvalues=eigs,
    )
    logger.info(
        "Glied %s: [%.4g, %.4g], Ausreißer -%d/+%d", label, inner[0], inner[-1], below, above
    )
    return link


def difference_rank(P1: ChainOperator, P2: ChainOperator, cap: int = DENSE_CAP) -> int:
    """Numerischer Rang von P1 - P2 (Schwelle RANK_TOL · σ_max)."""
    D = P1.dense(cap) - P2.dense(cap)
    sigma = np.linalg.svd(D, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > RANK_TOL * sigma[0]))


@dataclass(frozen=True, eq=False)
class ChainReport:
    theta: float
    n: int
    k: int
    r: float
    links: List[ChainLink]
    budget: ChainBudget
    difference_rank: int
    direct_eigenvalues: NDArray[np.float64] = field(repr=False)
    direct_below: int
    direct_above: int
    outliers_gt_threshold: int
    violations: List[str]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_record(self) -> Dict[str, Any]:
        return {
            "theta": self.theta,
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "links": [
                {
                    "label": link.label,
                    "operator": link.operator_kind,
                    "alpha": link.interval[0],
                    "beta": link.interval[1],
                    "outliers_below": link.outliers_below,
                    "outliers_above": link.outliers_above,
                }
                for link in self.links
            ],
            "budget": {
                "alpha": self.budget.alpha,
                "beta": self.budget.beta,
                "r_minus": self.budget.r_minus,
                "r_plus": self.budget.r_plus,
            },
            "difference_rank": self.difference_rank,
            "lambda_min": float(self.direct_eigenvalues[0]),
            "lambda_max": float(self.direct_eigenvalues[-1]),
            "direct_below": self.direct_below,
            "direct_above": self.direct_above,
            "outliers_gt_threshold": self.outliers_gt_threshold,
            "passed": self.passed,
            "violations": list(self.violations),
        }


def verify_chain(
    theta: float,
    n: int,
    cap: int = DENSE_CAP,
    threshold: float = THRESHOLD,
    quad_rel_tol: float = QUAD_REL_TOL,
    quad_abs_tol: float = QUAD_ABS_TOL,
) -> ChainReport:
    """Misst alle Glieder der Kette und prüft das zusammengesetzte Budget.

    Für kleine n wird die Zahl der Ausreißer des Glieds P2/P1 auf (n - 1) // 2 je Seite
    begrenzt, damit jedes Glied ein Intervall hat.

    Raises:
        ChainError: Für θ <= 2
        DenseCapError: Für n > cap
    """
    k, r = decompose_theta(theta)
    if n > cap:
        raise DenseCapError(n, cap)
    P = build_theta_chain(theta, n, quad_rel_tol, quad_abs_tol)
    rank = difference_rank(P[1], P[2], cap)
    if rank > RANK_CONSTANT * k:
        logger.warning("Rang von P1 - P2 = %d überschreitet %d·k = %d", rank, RANK_CONSTANT, k)
    # Mindestens ein Eigenwert bleibt im Fenster
    m = min(rank, (n - 1) // 2)
    if m < rank:
        logger.debug("n=%d: Ausreißer von P2/P1 auf %d je Seite begrenzt (Rang %d)", n, m, rank)
    declared = [(0, 0), (m, m), (0, 0), (0, 0)]

    links = [
        measure_link(P[j + 1], P[j], below, above, label=f"P{j + 1}/P{j}", cap=cap)
        for j, (below, above) in enumerate(declared)
    ]
    budget = compose_budget(links)

    direct = link_spectrum(P[4], P[0], cap)
    direct_below = int(np.count_nonzero(direct < budget.alpha * (1.0 - COUNT_SLACK)))
    direct_above = int(np.count_nonzero(direct > budget.beta * (1.0 + COUNT_SLACK)))

    violations: List[str] = []
    if direct_below > budget.r_minus:
        violations.append(
            f"{direct_below} Eigenwerte unter α={budget.alpha:.4g}, erlaubt {budget.r_minus}"
        )
    if direct_above > budget.r_plus:
        violations.append(
            f"{direct_above} Eigenwerte über β={budget.beta:.4g}, erlaubt {budget.r_plus}"
        )
    for message in violations:
        logger.warning("Budget verletzt (θ=%g, n=%d): %s", theta, n, message)

    return ChainReport(
        theta=theta,
        n=n,
        k=k,
        r=r,
        links=links,
        budget=budget,
        difference_rank=rank,
        direct_eigenvalues=direct,
        direct_below=direct_below,
        direct_above=direct_above,
        outliers_gt_threshold=outlier_count(direct, threshold),
        violations=violations,
    )
