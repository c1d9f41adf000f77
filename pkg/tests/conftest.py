"""Konfigurationsdatei für Pytest Fixtures und Plugins."""

from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
import pytest

from toeplitz_tau.pcg import SolveConfig, SolveResult


@pytest.fixture(scope="session")
def project_root() -> Path:
    return Path(__file__).parent.parent


@pytest.fixture(scope="session")
def python_files(project_root: Path) -> List[Path]:
    return sorted(project_root.glob("toeplitz_tau/*.py")) + [project_root / "experimentauswahl.py"]


@pytest.fixture(scope="session")
def config_files(project_root: Path) -> List[Path]:
    return list(project_root.glob("*.yaml"))


@pytest.fixture(scope="session")
def doc_files(project_root: Path) -> Dict[str, List[Path]]:
    return {"md": list(project_root.glob("*.md"))}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20261019)


@pytest.fixture
def random_spd(rng: np.random.Generator) -> Callable[[int], np.ndarray]:
    """Erzeugt gut konditionierte symmetrisch positiv definite Testmatrizen."""

    def erzeuge(n: int) -> np.ndarray:
        X = rng.standard_normal((n, n))
        return X @ X.T + n * np.eye(n)

    return erzeuge


def dense_cg(A: np.ndarray, b: np.ndarray, rel_tol: float, max_iter: int) -> Tuple[np.ndarray, int]:
    """Lehrbuch-CG auf dichten Matrizen als Referenz für die Iterationszahl."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rr = float(r @ r)
    r0 = np.sqrt(rr)
    for j in range(1, max_iter + 1):
        Ap = A @ p
        alpha = rr / float(p @ Ap)
        x = x + alpha * p
        r = r - alpha * Ap
        rr_new = float(r @ r)
        if np.sqrt(rr_new) / r0 <= rel_tol:
            return x, j
        p = r + (rr_new / rr) * p
        rr = rr_new
    return x, max_iter


@pytest.fixture
def reference_cg() -> Callable[..., Tuple[np.ndarray, int]]:
    return dense_cg


@pytest.fixture
def solve_config() -> SolveConfig:
    return SolveConfig(rel_tol=1e-7, max_iter=1000)


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def converged_to(result: SolveResult, rel_tol: float) -> bool:
    return result.converged and result.final_relative_residual <= rel_tol
