"""Erzeugende Funktionen (Symbole) und ihre Fourier-Koeffizienten.

Ein Symbol ist eine gerade, nichtnegative, 2π-periodische Funktion mit einer Nullstelle
der Ordnung θ im Ursprung. Unterstützt werden:

- abs_pow(θ): |t|^θ
- laplace_pow(k): (2 - 2cos t)^k
- product(a, b): punktweises Produkt
- scaled(s, c): c · s

Die Fourier-Koeffizienten a_l = (1/π) ∫_0^π f(t) cos(lt) dt werden für trigonometrische
Polynome exakt per Faltung berechnet, sonst per adaptiver Quadratur (QUADPACK, Kosinus-Gewicht).
"""

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from .config import QUAD_ABS_TOL, QUAD_REL_TOL
from .errors import GridZeroError, QuadratureError

logger = logging.getLogger(__name__)

# Akzeptierter Überschuss der Fehlerschätzung, bevor eine Quadraturwarnung zum Fehler wird
QUAD_FAILURE_FACTOR = 1e3
QUAD_LIMIT = 200
QUAD_MAXP1 = 100

LAPLACE_STENCIL = np.array([-1.0, 2.0, -1.0])


class SymbolKind(Enum):
    ABS_POW = "abs_pow"
    LAPLACE_POW = "laplace_pow"
    PRODUCT = "product"
    SCALED = "scaled"


@dataclass(frozen=True)
class Symbol:
    """Unveränderliche Beschreibung einer erzeugenden Funktion.

    Attributes:
        kind: Art des Symbols
        param: θ (ABS_POW), k (LAPLACE_POW) oder Faktor c (SCALED); 0 für PRODUCT
        factors: Teilsymbole für PRODUCT (zwei) und SCALED (eins)
    """

    kind: SymbolKind
    param: float = 0.0
    factors: Tuple["Symbol", ...] = ()

    @property
    def zero_order(self) -> float:
        """Ordnung der Nullstelle im Ursprung."""
        if self.kind is SymbolKind.ABS_POW:
            return self.param
        if self.kind is SymbolKind.LAPLACE_POW:
            return 2.0 * self.param
        if self.kind is SymbolKind.PRODUCT:
            return sum(f.zero_order for f in self.factors)
        return self.factors[0].zero_order

    @property
    def is_polynomial(self) -> bool:
        """True für trigonometrische Polynome (endlich viele Koeffizienten ungleich 0)."""
        if self.kind is SymbolKind.ABS_POW:
            return self.param == 0.0
        if self.kind is SymbolKind.LAPLACE_POW:
            return True
        return all(f.is_polynomial for f in self.factors)

    @property
    def bandwidth(self) -> Optional[int]:
        """Grad des trigonometrischen Polynoms, None für nichtpolynomiale Symbole."""
        if not self.is_polynomial:
            return None
        return (len(_poly_coeffs(self)) - 1) // 2

    def __str__(self) -> str:
        if self.kind is SymbolKind.ABS_POW:
            return f"|t|^{self.param:g}"
        if self.kind is SymbolKind.LAPLACE_POW:
            return f"(2-2cos t)^{int(self.param)}"
        if self.kind is SymbolKind.PRODUCT:
            return " * ".join(f"({f})" for f in self.factors)
        return f"{self.param:g} * ({self.factors[0]})"


def abs_pow(theta: float) -> Symbol:
    """|t|^θ; θ = 0 ergibt die Konstante 1."""
    if not math.isfinite(theta) or theta < 0:
        raise ValueError(f"θ muss endlich und nichtnegativ sein, erhalten: {theta}")
    return Symbol(SymbolKind.ABS_POW, float(theta))


def laplace_pow(k: int) -> Symbol:
    """(2 - 2cos t)^k, das Symbol der k-ten Potenz des diskreten Laplace-Operators."""
    if int(k) != k or k < 1:
        raise ValueError(f"k muss eine positive ganze Zahl sein, erhalten: {k}")
    return Symbol(SymbolKind.LAPLACE_POW, float(k))


def constant(c: float) -> Symbol:
    return scaled(abs_pow(0.0), c)


def scaled(s: Symbol, c: float) -> Symbol:
    """c · s mit c >= 0."""
    if not math.isfinite(c) or c < 0:
        raise ValueError(f"Skalierungsfaktor muss nichtnegativ sein, erhalten: {c}")
    if c == 1.0:
        return s
    return Symbol(SymbolKind.SCALED, float(c), (s,))


def product(a: Symbol, b: Symbol) -> Symbol:
    """Punktweises Produkt; konstante Faktoren |t|^0 entfallen, |t|-Potenzen werden addiert."""
    one = abs_pow(0.0)
    if a == one:
        return b
    if b == one:
        return a
    if a.kind is SymbolKind.ABS_POW and b.kind is SymbolKind.ABS_POW:
        return abs_pow(a.param + b.param)
    return Symbol(SymbolKind.PRODUCT, 0.0, (a, b))


def _check_domain(t: NDArray[np.float64]) -> None:
    if np.any(np.abs(t) > np.pi * (1.0 + 1e-12)):
        raise ValueError("Auswertung nur auf [-π, π] definiert.")


def _eval(s: Symbol, t: NDArray[np.float64]) -> NDArray[np.float64]:
    if s.kind is SymbolKind.ABS_POW:
        return np.asarray(np.abs(t) ** s.param, dtype=float)
    if s.kind is SymbolKind.LAPLACE_POW:
        return np.asarray((2.0 - 2.0 * np.cos(t)) ** int(s.param), dtype=float)
    if s.kind is SymbolKind.PRODUCT:
        return _eval(s.factors[0], t) * _eval(s.factors[1], t)
    return s.param * _eval(s.factors[0], t)


def eval_symbol(s: Symbol, t: Union[float, ArrayLike]) -> Union[float, NDArray[np.float64]]:
    """Wertet das Symbol punktweise auf [-π, π] aus (skalar oder vektorisiert).

    Raises:
        ValueError: Wenn ein Argument außerhalb von [-π, π] liegt
    """
    arr = np.asarray(t, dtype=float)
    _check_domain(arr)
    values = _eval(s, arr)
    if values.ndim == 0:
        return float(values)
    return values


def _poly_coeffs(s: Symbol) -> NDArray[np.float64]:
    """Koeffizienten a_{-d}..a_d eines trigonometrischen Polynoms (zentriert)."""
    if s.kind is SymbolKind.ABS_POW:
        return np.array([1.0])
    if s.kind is SymbolKind.LAPLACE_POW:
        coeffs = np.array([1.0])
        for _ in range(int(s.param)):
            coeffs = np.convolve(coeffs, LAPLACE_STENCIL)
        return coeffs
    if s.kind is SymbolKind.PRODUCT:
        return np.convolve(_poly_coeffs(s.factors[0]), _poly_coeffs(s.factors[1]))
    return s.param * _poly_coeffs(s.factors[0])


def _quad_coeff(s: Symbol, l: int, rel_tol: float, abs_tol: float) -> float:
    """a_l per QUADPACK, für l > 0 mit Kosinusgewicht (QAWO).

    Die Genauigkeit ist max(abs_tol, rel_tol · |a_l|). Da |a_l| mit l abfällt, bestimmt für
    große l die absolute Schranke abs_tol den Fehler; der relative Fehler wächst dann
    (für θ = 3 etwa 1e-10 bei l = 1000), der absolute bleibt in der Größenordnung abs_tol.
    """

    def integrand(t: float) -> float:
        return float(_eval(s, np.asarray(t)))

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        if l == 0:
            value, error = integrate.quad(
                integrand, 0.0, np.pi, epsabs=abs_tol, epsrel=rel_tol, limit=QUAD_LIMIT
            )
        else:
            value, error = integrate.quad(
                integrand,
                0.0,
                np.pi,
                weight="cos",
                wvar=l,
                epsabs=abs_tol,
                epsrel=rel_tol,
                limit=QUAD_LIMIT,
                maxp1=QUAD_MAXP1,
            )

    tolerance = max(abs_tol, rel_tol * abs(value))
    if any(issubclass(w.category, integrate.IntegrationWarning) for w in caught):
        if error > QUAD_FAILURE_FACTOR * tolerance:
            raise QuadratureError(l, value / np.pi, error / np.pi, tolerance / np.pi)
        logger.debug("Quadraturwarnung für a_%d von %s, Fehlerschätzung %.2e", l, s, error)
    return value / np.pi


@lru_cache(maxsize=None)
def fourier_coeff(
    s: Symbol, l: int, rel_tol: float = QUAD_REL_TOL, abs_tol: float = QUAD_ABS_TOL
) -> float:
    """l-ter Fourier-Koeffizient a_l = (1/π) ∫_0^π f(t) cos(lt) dt.

    Args:
        s: Symbol
        l: Index, a_{-l} = a_l
        rel_tol: Relative Toleranz der Quadratur
        abs_tol: Absolute Toleranz der Quadratur

    Returns:
        float: a_l

    Raises:
        QuadratureError: Wenn die Quadratur die Toleranz deutlich verfehlt
    """
    l = abs(int(l))
    if s.is_polynomial:
        coeffs = _poly_coeffs(s)
        d = (len(coeffs) - 1) // 2
        return float(coeffs[d + l]) if l <= d else 0.0
    if s.kind is SymbolKind.ABS_POW and l == 0:
        return float(np.pi**s.param / (s.param + 1.0))
    if s.kind is SymbolKind.SCALED:
        return s.param * fourier_coeff(s.factors[0], l, rel_tol, abs_tol)
    return _quad_coeff(s, l, rel_tol, abs_tol)


@dataclass(frozen=True, eq=False)
class FourierCoeffs:
    """Tabelle a_0..a_{n-1} eines Symbols (schreibgeschützt)."""

    n: int
    a: NDArray[np.float64]


@lru_cache(maxsize=64)
def fourier_coeffs(
    s: Symbol, n: int, rel_tol: float = QUAD_REL_TOL, abs_tol: float = QUAD_ABS_TOL
) -> FourierCoeffs:
    """Berechnet und cached die ersten n Fourier-Koeffizienten."""
    if n < 1:
        raise ValueError(f"n muss positiv sein, erhalten: {n}")
    logger.debug("Berechne %d Fourier-Koeffizienten für %s", n, s)
    a = np.array([fourier_coeff(s, l, rel_tol, abs_tol) for l in range(n)], dtype=float)
    a.flags.writeable = False
    return FourierCoeffs(n=n, a=a)


def grid_points(n: int) -> NDArray[np.float64]:
    """Gitter w_i = iπ/(n+1), i = 1..n."""
    return np.arange(1, n + 1, dtype=float) * np.pi / (n + 1)


def grid_samples(s: Symbol, n: int) -> NDArray[np.float64]:
    """Symbolwerte auf dem Gitter w_i = iπ/(n+1).

    Raises:
        GridZeroError: Wenn ein Gitterwert nicht positiv ist
    """
    if n < 1:
        raise ValueError(f"n muss positiv sein, erhalten: {n}")
    samples = _eval(s, grid_points(n))
    if np.any(samples <= 0.0):
        index = int(np.argmax(samples <= 0.0)) + 1
        raise GridZeroError(f"Symbol {s} verschwindet auf dem Gitterpunkt w_{index} (n={n})")
    return samples


def partial_sum(s: Symbol, n: int, t: Union[float, ArrayLike]) -> Union[float, NDArray[np.float64]]:
    """Partialsumme Σ_{|l|<n} a_l e^{ilt} = a_0 + 2 Σ_{l=1}^{n-1} a_l cos(lt)."""
    a = fourier_coeffs(s, n).a
    arr = np.asarray(t, dtype=float)
    l = np.arange(1, n)
    values = a[0] + 2.0 * np.cos(np.multiply.outer(arr, l)) @ a[1:]
    if np.ndim(values) == 0:
        return float(values)
    return np.asarray(values)
