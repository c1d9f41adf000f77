"""Konfiguration für Numerik und Experimente.

Die Standardwerte stehen als Modulkonstanten zur Verfügung; die Bibliotheksfunktionen
verwenden sie als Default-Parameter. ``load_config`` liest ``config.yaml`` (Großbuchstaben-
Schlüssel) und erlaubt Überschreibungen über Umgebungsvariablen bzw. eine ``.env``-Datei.

Umgebungsvariablen:
    TOEPLITZ_TAU_DENSE_CAP: Grenze für dichte Matrizen
    TOEPLITZ_TAU_LOG_LEVEL: Logging-Level (DEBUG, INFO, ...)
    TOEPLITZ_TAU_JOBS: Anzahl paralleler Tabellenzellen

Version: 1.0
Datum: 19.10.2026
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Numerik
DENSE_CAP = 4096
QUAD_REL_TOL = 1e-12
QUAD_ABS_TOL = 1e-15
# Blockoperationen, nur als Standardparameter der Bibliothek
SCHUR_CAP = 512
PSD_TOL = 1e-10
# PCG
REL_TOL = 1e-7
MAX_ITER = 1000
RESIDUAL_REFRESH = 50
# Auswertung
THRESHOLD = 2.0
CLUSTER_EPS = 0.1
SIZES: Tuple[int, ...] = (256, 512, 1024, 2048, 4096)
SEED = 0
TRIALS = 200

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

ENV_PREFIX = "TOEPLITZ_TAU_"


@dataclass
class ExperimentConfig:
    """Konfiguration für Numerik, PCG und Experimente."""

    dense_cap: int = DENSE_CAP
    quad_rel_tol: float = QUAD_REL_TOL
    quad_abs_tol: float = QUAD_ABS_TOL
    rel_tol: float = REL_TOL
    max_iter: int = MAX_ITER
    residual_refresh: int = RESIDUAL_REFRESH
    threshold: float = THRESHOLD
    cluster_eps: float = CLUSTER_EPS
    sizes: Tuple[int, ...] = SIZES
    seed: int = SEED
    trials: int = TRIALS
    jobs: int = 1
    log_level: str = "INFO"
    experimente: Dict[str, List[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Lädt Umgebungsvariablen und validiert die Werte."""
        load_dotenv()
        self.dense_cap = int(os.getenv(f"{ENV_PREFIX}DENSE_CAP", self.dense_cap))
        self.jobs = int(os.getenv(f"{ENV_PREFIX}JOBS", self.jobs))
        self.log_level = os.getenv(f"{ENV_PREFIX}LOG_LEVEL", self.log_level).upper()
        self.sizes = tuple(int(n) for n in self.sizes)
        self._validiere()

    def _validiere(self) -> None:
        if self.dense_cap < 1:
            raise ValueError("Grenze für dichte Matrizen muss positiv sein.")
        if not 0 < self.quad_rel_tol < 1 or self.quad_abs_tol < 0:
            raise ValueError(
                f"Ungültige Quadraturtoleranzen: {self.quad_rel_tol}, {self.quad_abs_tol}"
            )
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol muss in (0, 1) liegen, erhalten: {self.rel_tol}")
        if self.max_iter < 1:
            raise ValueError("max_iter muss mindestens 1 sein.")
        if self.residual_refresh < 1:
            raise ValueError("residual_refresh muss mindestens 1 sein.")
        if not self.sizes or any(n < 1 for n in self.sizes):
            raise ValueError("SIZES muss eine nichtleere Liste positiver Zahlen sein.")
        if self.trials < 1:
            raise ValueError("trials muss mindestens 1 sein.")
        if self.jobs < 1:
            raise ValueError("jobs muss mindestens 1 sein.")
        if self.log_level not in logging.getLevelNamesMapping():
            raise ValueError(f"Unbekanntes Logging-Level: {self.log_level}")


# Schlüssel in config.yaml -> Feldname
_SCHLUESSEL = {
    "DENSE_CAP": "dense_cap",
    "QUAD_REL_TOL": "quad_rel_tol",
    "QUAD_ABS_TOL": "quad_abs_tol",
    "REL_TOL": "rel_tol",
    "MAX_ITER": "max_iter",
    "RESIDUAL_REFRESH": "residual_refresh",
    "THRESHOLD": "threshold",
    "CLUSTER_EPS": "cluster_eps",
    "SIZES": "sizes",
    "SEED": "seed",
    "TRIALS": "trials",
    "JOBS": "jobs",
    "LOG_LEVEL": "log_level",
    "EXPERIMENTE": "experimente",
}


def _lade_experimente(eintraege: Any) -> Dict[str, List[str]]:
    """Übernimmt nur Einträge der Form Name -> Liste von Strings."""
    result: Dict[str, List[str]] = {}
    if not isinstance(eintraege, dict):
        return result
    for name, befehl in eintraege.items():
        if isinstance(befehl, list) and all(isinstance(x, str) for x in befehl):
            result[str(name)] = befehl
        else:
            logger.warning("Experiment '%s' ignoriert: keine Liste von Strings", name)
    return result


def load_config(config_path: Union[str, Path] = "config.yaml") -> ExperimentConfig:
    """Lädt die Konfiguration aus einer YAML-Datei.

    Args:
        config_path: Pfad zur YAML-Datei

    Returns:
        ExperimentConfig: Konfiguration, Standardwerte für fehlende Schlüssel
    """
    pfad = Path(config_path)
    if not pfad.exists():
        logger.warning("Konfigurationsdatei %s nicht gefunden, verwende Standardwerte", pfad)
        return ExperimentConfig()

    with open(pfad, "r", encoding="utf-8") as config_file:
        roh = yaml.safe_load(config_file) or {}

    werte: Dict[str, Any] = {}
    for key, value in roh.items():
        feld = _SCHLUESSEL.get(str(key).upper())
        if feld is None:
            logger.debug("Unbekannter Schlüssel in %s ignoriert: %s", pfad, key)
            continue
        werte[feld] = _lade_experimente(value) if feld == "experimente" else value

    return ExperimentConfig(**werte)
