"""Fehlerklassen für toeplitz_tau.

Jede Klasse leitet zusätzlich von der passenden Builtin-Exception ab, damit Aufrufer
wahlweise ``ToeplitzTauError`` oder z.B. ``ValueError`` abfangen können.
"""

from typing import Optional


class ToeplitzTauError(Exception):
    """Basisklasse aller Fehler des Pakets."""


class QuadratureError(ToeplitzTauError, ArithmeticError):
    """Adaptive Quadratur hat die geforderte Genauigkeit nicht erreicht."""

    def __init__(self, l: int, wert: float, fehlerschaetzung: float, toleranz: float) -> None:
        self.l = l
        self.wert = wert
        self.fehlerschaetzung = fehlerschaetzung
        self.toleranz = toleranz
        super().__init__(
            f"Quadratur für Fourier-Koeffizient a_{l} nicht konvergiert: "
            f"Wert {wert:.3e}, Fehlerschätzung {fehlerschaetzung:.3e} > Toleranz {toleranz:.3e}"
        )


class GridZeroError(ToeplitzTauError, ValueError):
    """Symbol verschwindet auf einem Gitterpunkt, tau-Matrix wäre singulär."""


class DimensionError(ToeplitzTauError, ValueError):
    """Vektorlänge passt nicht zur Operatordimension."""

    def __init__(self, erwartet: int, erhalten: int) -> None:
        self.erwartet = erwartet
        self.erhalten = erhalten
        super().__init__(f"Dimensionskonflikt: erwartet {erwartet}, erhalten {erhalten}")


class DenseCapError(ToeplitzTauError, ValueError):
    """Dichte Materialisierung oberhalb der konfigurierten Grenze."""

    def __init__(self, n: int, cap: int) -> None:
        self.n = n
        self.cap = cap
        super().__init__(f"Dimension {n} überschreitet die Grenze für dichte Matrizen ({cap})")


class PositiveDefinitenessError(ToeplitzTauError, ArithmeticError):
    """Positive Definitheit verloren (Pivot <= 0, p'Ap <= 0 oder NaN)."""


class SingularBlockError(PositiveDefinitenessError):
    """Linker oberer Block eines Blockoperators ist nicht invertierbar."""


class AsymmetricMatrixError(ToeplitzTauError, ValueError):
    """Matrix ist nicht symmetrisch innerhalb der Toleranz."""

    def __init__(self, abweichung: float, toleranz: Optional[float] = None) -> None:
        self.abweichung = abweichung
        text = f"Matrix nicht symmetrisch (Abweichung {abweichung:.3e})"
        if toleranz is not None:
            text += f", Toleranz {toleranz:.3e}"
        super().__init__(text)


class ChainError(ToeplitzTauError, ValueError):
    """Ungültige Vorkonditionierungskette (theta <= 2, leere Liste, ...)."""


class SplitIdentityError(ToeplitzTauError, ArithmeticError):
    """Zerlegung N = C + S des Rayleigh-Zählers verletzt."""
