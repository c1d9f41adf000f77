"""Tests für Konfiguration und Experimentauswahl."""

import logging
from pathlib import Path
from typing import List

import pytest

import experimentauswahl
from toeplitz_tau.config import (
    DENSE_CAP,
    MAX_ITER,
    REL_TOL,
    SIZES,
    THRESHOLD,
    ExperimentConfig,
    load_config,
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in ("DENSE_CAP", "JOBS", "LOG_LEVEL"):
        monkeypatch.delenv(f"TOEPLITZ_TAU_{name}", raising=False)


def test_defaults() -> None:
    config = ExperimentConfig()
    assert config.dense_cap == DENSE_CAP
    assert config.rel_tol == REL_TOL
    assert config.max_iter == MAX_ITER
    assert config.threshold == THRESHOLD
    assert config.sizes == SIZES
    assert config.jobs == 1
    assert config.experimente == {}


def test_load_missing_file(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING):
        config = load_config(tmp_path / "fehlt.yaml")
    assert config.dense_cap == DENSE_CAP
    assert "nicht gefunden" in caplog.text


def test_load_yaml(tmp_path: Path) -> None:
    pfad = tmp_path / "config.yaml"
    pfad.write_text(
        "REL_TOL: 1.0e-9\n"
        "SIZES: [16, 32]\n"
        "THRESHOLD: 1.5\n"
        "QUAD_ABS_TOL: 1.0e-14\n"
        "TRIALS: 50\n"
        "UNBEKANNT: 3\n"
        "EXPERIMENTE:\n"
        "  Gut: ['table', '--theta', '1']\n"
        "  Schlecht: 'table --theta 1'\n",
        encoding="utf-8",
    )
    config = load_config(pfad)
    assert config.rel_tol == 1e-9
    assert config.sizes == (16, 32)
    assert config.threshold == 1.5
    assert config.quad_abs_tol == 1e-14
    assert config.trials == 50
    assert config.experimente == {"Gut": ["table", "--theta", "1"]}


def test_load_empty_yaml(tmp_path: Path) -> None:
    pfad = tmp_path / "leer.yaml"
    pfad.write_text("", encoding="utf-8")
    assert load_config(pfad).max_iter == MAX_ITER


def test_project_config_loads(project_root: Path) -> None:
    config = load_config(project_root / "config.yaml")
    assert config.sizes == (256, 512, 1024, 2048, 4096)
    assert config.experimente


def test_environment_overrides(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("TOEPLITZ_TAU_DENSE_CAP", "256")
    monkeypatch.setenv("TOEPLITZ_TAU_JOBS", "4")
    monkeypatch.setenv("TOEPLITZ_TAU_LOG_LEVEL", "debug")
    config = ExperimentConfig()
    assert config.dense_cap == 256
    assert config.jobs == 4
    assert config.log_level == "DEBUG"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"dense_cap": 0},
        {"rel_tol": 0.0},
        {"rel_tol": 1.5},
        {"max_iter": 0},
        {"residual_refresh": 0},
        {"sizes": ()},
        {"sizes": (16, -1)},
        {"jobs": 0},
        {"trials": 0},
        {"quad_rel_tol": 0.0},
        {"quad_abs_tol": -1.0},
        {"log_level": "LAUT"},
    ],
)
def test_validation(kwargs: dict) -> None:
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


def test_baue_befehle_adds_table_sequence() -> None:
    befehle = experimentauswahl.baue_befehle(
        {
            "Tabelle": ["table", "--theta", "1"],
            "Spektrum": ["figure", "--theta", "1", "-n", "8"],
        }
    )
    assert list(befehle) == ["1", "2", "3"]
    assert befehle["1"]["command"] == ["table", "--theta", "1"]
    assert befehle["3"]["name"] == "Kombi: alle Tabellen"
    assert callable(befehle["3"]["command"])


def test_baue_befehle_without_tables() -> None:
    befehle = experimentauswahl.baue_befehle({"Kette": ["verify", "--theta", "3", "-n", "16"]})
    assert list(befehle) == ["1"]


def test_sicherer_aufruf(tmp_path: Path) -> None:
    config: List[str] = ["--config", str(tmp_path / "fehlt.yaml")]
    assert experimentauswahl.sicherer_aufruf(["solve", "--theta", "1", "-n", "16"] + config)
    assert not experimentauswahl.sicherer_aufruf(["verify", "--theta", "1", "-n", "16"] + config)
    assert not experimentauswahl.sicherer_aufruf(["unbekannt"])
