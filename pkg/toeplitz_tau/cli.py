"""Kommandozeile für die Toeplitz/τ-Experimente.

Unterbefehle:
    table     Iterationszahlen (Band- und τ-Vorkonditionierer) und Spektralkennzahlen je n
    figure    Vollständiges sortiertes Spektrum als Plotdaten
    solve     Einzelner Lauf mit wählbarem Vorkonditionierer
    spectrum  Spektralberichte für mehrere n
    verify    Prüfung der mehrstufigen Vorkonditionierung für θ > 2

Verwendung:
    python -m toeplitz_tau table --theta 1 --sizes 256,512,1024
    python -m toeplitz_tau figure --theta 3 -n 512 --output spektrum.csv
    python -m toeplitz_tau solve --theta 1 -n 1024 --precond tau
    python -m toeplitz_tau spectrum --theta 3 --sizes 128,256 --rayleigh
    python -m toeplitz_tau verify --theta 4.5 -n 128

Exit-Codes: 0 Erfolg, 1 Fehlschlag (Prüfung oder Löser), 2 ungültige Eingabe.

Version: 1.0
Datum: 19.10.2026
"""

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from rich.console import Console
from rich.table import Table
from tqdm import tqdm

from .chain import ChainReport, verify_chain
from .config import (
    LOG_DATEFMT,
    LOG_FORMAT,
    QUAD_ABS_TOL,
    QUAD_REL_TOL,
    REL_TOL,
    SEED,
    SIZES,
    THRESHOLD,
    ExperimentConfig,
    load_config,
)
from .errors import ToeplitzTauError
from .pcg import SolveConfig, SolveResult, ones_rhs, pcg_solve, random_rhs, unpreconditioned_cg
from .spectral import RayleighDiagnostics, SpectralReport, rayleigh_lower_diag, spectral_report
from .symbols import abs_pow, fourier_coeffs
from .tau import build_tau
from .toeplitz import BandCholesky, build_band_preconditioner, build_toeplitz

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_REJECTED = 2
ERROR_MARKER = "ERR"
PRECONDITIONERS = ("tau", "band", "none")

console = Console(stderr=True)


def _sig6(value: float) -> float:
    return float(f"{value:.6g}")


def _fmt(value: Union[int, float, None]) -> str:
    if value is None:
        return ERROR_MARKER
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


@dataclass
class ExperimentSpec:
    """Parameter eines Tabellenlaufs."""

    theta: float
    sizes: Tuple[int, ...] = SIZES
    rel_tol: float = REL_TOL
    threshold: float = THRESHOLD
    output_path: Optional[str] = None
    format: str = "csv"
    random_rhs: bool = False
    seed: int = SEED

    def __post_init__(self) -> None:
        if not self.theta > 0:
            raise ValueError(f"θ muss positiv sein, erhalten: {self.theta}")
        self.sizes = tuple(int(n) for n in self.sizes)
        if not self.sizes:
            raise ValueError("Liste der Größen ist leer.")
        if any(n < 1 for n in self.sizes):
            raise ValueError(f"Größen müssen positiv sein: {self.sizes}")
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError(f"Größen müssen streng aufsteigend sein: {self.sizes}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"Unbekanntes Format: {self.format}")


@dataclass(frozen=True)
class TableRow:
    """Eine Tabellenzeile, Gleitkommawerte auf 6 signifikante Stellen gerundet."""

    n: int
    iter_S: Optional[int]
    iter_tau: Optional[int]
    lambda_min: Optional[float]
    lambda_max: Optional[float]
    outliers: Optional[int]

    @classmethod
    def create(
        cls,
        n: int,
        iter_S: Optional[int],
        iter_tau: Optional[int],
        report: Optional[SpectralReport],
    ) -> "TableRow":
        if report is None:
            return cls(n, iter_S, iter_tau, None, None, None)
        return cls(
            n,
            iter_S,
            iter_tau,
            _sig6(report.lambda_min),
            _sig6(report.lambda_max),
            report.outliers_above,
        )

    def cells(self) -> List[str]:
        values = (self.n, self.iter_S, self.iter_tau, self.lambda_min, self.lambda_max)
        return [_fmt(v) for v in values] + [_fmt(self.outliers)]


def table_header(threshold: float) -> List[str]:
    return ["n", "iter_S", "iter_tau", "lambda_min", "lambda_max", f"outliers_gt_{threshold:g}"]


def _csv_text(
    header: Sequence[str], rows: Sequence[Sequence[str]], comments: Sequence[str] = ()
) -> str:
    buffer = io.StringIO()
    for comment in comments:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def format_table(rows: Sequence[TableRow], threshold: float, fmt: str = "csv") -> str:
    header = table_header(threshold)
    if fmt == "json":
        records = [dict(zip(header, (_json_value(c) for c in row.cells()))) for row in rows]
        return json.dumps(records, indent=2) + "\n"
    return _csv_text(header, [row.cells() for row in rows])


def _json_value(cell: str) -> Union[int, float, str, None]:
    if cell == ERROR_MARKER:
        return cell
    try:
        return int(cell)
    except ValueError:
        value = float(cell)
    # NaN und inf sind kein gültiges JSON
    return value if np.isfinite(value) else None


def _parse_int(cell: str) -> Optional[int]:
    return None if cell == ERROR_MARKER else int(cell)


def _parse_float(cell: str) -> Optional[float]:
    return None if cell == ERROR_MARKER else float(cell)


def read_table_csv(text: str) -> List[TableRow]:
    """Liest eine mit format_table geschriebene CSV-Tabelle."""
    reader = csv.reader(io.StringIO(text))
    next(reader)
    return [
        TableRow(
            int(row[0]),
            _parse_int(row[1]),
            _parse_int(row[2]),
            _parse_float(row[3]),
            _parse_float(row[4]),
            _parse_int(row[5]),
        )
        for row in reader
        if row
    ]


def format_figure(eigenvalues: np.ndarray, theta: float, threshold: float) -> str:
    rows = [[str(i), f"{v:.6g}"] for i, v in enumerate(eigenvalues, start=1)]
    comments = [f"theta={theta:g}", f"threshold={threshold:g}"]
    return _csv_text(["index", "eigenvalue"], rows, comments)


def read_figure_csv(text: str) -> Tuple[Dict[str, float], np.ndarray]:
    """Liest Metadaten (Kommentarzeilen) und Eigenwerte einer Spektrumsdatei."""
    meta: Dict[str, float] = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = float(value)
        elif line:
            lines.append(line)
    reader = csv.reader(lines[1:])
    return meta, np.array([float(row[1]) for row in reader])


def format_spectrum(
    reports: Sequence[SpectralReport],
    fmt: str = "csv",
    rayleigh: Optional[Sequence[RayleighDiagnostics]] = None,
) -> str:
    """Spektralberichte als CSV oder JSON, optional mit Rayleigh-Kennzahlen je n."""
    header = ["theta", "n", "lambda_min", "lambda_max", "outliers_gt_threshold", "cluster_fraction"]
    rows = [
        [
            _fmt(r.theta),
            str(r.n),
            _fmt(r.lambda_min),
            _fmt(r.lambda_max),
            str(r.outliers_above),
            _fmt(r.cluster_fraction),
        ]
        for r in reports
    ]
    if rayleigh is not None:
        header += ["rayleigh_min", "split_error", "s_over_d_min"]
        for row, diag in zip(rows, rayleigh):
            row += [_fmt(diag.min_ratio), _fmt(diag.split_error), _fmt(diag.min_s_over_d)]
    if fmt == "json":
        records = [dict(zip(header, map(_json_value, row))) for row in rows]
        return json.dumps(records, indent=2) + "\n"
    return _csv_text(header, rows)


def _solve(
    theta: float,
    n: int,
    precond: str,
    cfg: SolveConfig,
    rhs: np.ndarray,
    quad_tol: Tuple[float, float] = (QUAD_REL_TOL, QUAD_ABS_TOL),
) -> SolveResult:
    T = build_toeplitz(abs_pow(theta), n, *quad_tol)
    if precond == "tau":
        P = build_tau(abs_pow(theta), n)
        return pcg_solve(T.matvec, P.solve, rhs, cfg)
    if precond == "band":
        factor = BandCholesky(build_band_preconditioner(theta, n))
        return pcg_solve(T.matvec, factor.solve, rhs, cfg)
    if precond == "none":
        return unpreconditioned_cg(T.matvec, rhs, cfg)
    raise ValueError(f"Unbekannter Vorkonditionierer: {precond}")


def _rhs(n: int, use_random: bool, seed: int) -> np.ndarray:
    return random_rhs(n, seed) if use_random else ones_rhs(n)


def _solve_config(rel_tol: float, config: ExperimentConfig) -> SolveConfig:
    return SolveConfig(
        rel_tol=rel_tol, max_iter=config.max_iter, residual_refresh=config.residual_refresh
    )


def _quad_tol(config: ExperimentConfig) -> Tuple[float, float]:
    return config.quad_rel_tol, config.quad_abs_tol


def _guarded(action: Callable[[], Any], what: str) -> Any:
    try:
        return action()
    except ToeplitzTauError as e:
        logger.error("%s fehlgeschlagen: %s", what, e)
        return None


def table_row(spec: ExperimentSpec, n: int, config: ExperimentConfig) -> TableRow:
    """Berechnet eine Tabellenzeile; Fehler einzelner Zellen werden zu ERR."""
    cfg = _solve_config(spec.rel_tol, config)
    rhs = _rhs(n, spec.random_rhs, spec.seed)

    def iterations(precond: str) -> Optional[int]:
        result = _guarded(
            lambda: _solve(spec.theta, n, precond, cfg, rhs, _quad_tol(config)),
            f"PCG ({precond}, n={n})",
        )
        return None if result is None else int(result.iterations)

    report = _guarded(
        lambda: spectral_report(
            spec.theta,
            n,
            threshold=spec.threshold,
            cluster_eps=config.cluster_eps,
            cap=config.dense_cap,
            approximate_above_cap=True,
            quad_rel_tol=config.quad_rel_tol,
            quad_abs_tol=config.quad_abs_tol,
        ),
        f"Spektrum (n={n})",
    )
    return TableRow.create(n, iterations("band"), iterations("tau"), report)


def cmd_table(spec: ExperimentSpec, config: ExperimentConfig) -> List[TableRow]:
    """Tabelle für alle n; Zellen parallel, Ausgabe in der Reihenfolge der Größen."""
    logger.info("Tabelle θ=%g, n=%s", spec.theta, ",".join(map(str, spec.sizes)))
    # Koeffizienten vorab im Hauptthread, QUADPACK ist nicht threadsicher
    fourier_coeffs(abs_pow(spec.theta), max(spec.sizes), *_quad_tol(config))
    with ThreadPoolExecutor(max_workers=config.jobs) as executor:
        futures = [executor.submit(table_row, spec, n, config) for n in spec.sizes]
        progress = tqdm(futures, desc=f"θ={spec.theta:g}", unit="n", disable=None)
        rows = [f.result() for f in progress]
    return rows


def cmd_figure(theta: float, n: int, config: ExperimentConfig, threshold: float) -> np.ndarray:
    report = spectral_report(
        theta,
        n,
        threshold=threshold,
        cap=config.dense_cap,
        quad_rel_tol=config.quad_rel_tol,
        quad_abs_tol=config.quad_abs_tol,
    )
    logger.info(
        "Spektrum θ=%g n=%d: %d Werte über %g", theta, n, report.outliers_above, threshold
    )
    return report.eigenvalues


def cmd_solve(
    theta: float,
    n: int,
    precond: str,
    cfg: SolveConfig,
    use_random: bool = False,
    seed: int = 0,
    quad_tol: Tuple[float, float] = (QUAD_REL_TOL, QUAD_ABS_TOL),
) -> SolveResult:
    result = _solve(theta, n, precond, cfg, _rhs(n, use_random, seed), quad_tol)
    logger.info(
        "θ=%g n=%d %s: %d Iterationen, rel. Residuum %.2e, konvergiert: %s",
        theta,
        n,
        precond,
        result.iterations,
        result.final_relative_residual,
        result.converged,
    )
    return result


def cmd_spectrum(
    theta: float,
    sizes: Sequence[int],
    config: ExperimentConfig,
    threshold: float,
    rayleigh: bool = False,
    seed: int = SEED,
) -> Tuple[List[SpectralReport], Optional[List[RayleighDiagnostics]]]:
    """Spektralberichte je n; mit rayleigh zusätzlich config.trials Rayleigh-Quotienten."""
    reports: List[SpectralReport] = []
    diagnostics: List[RayleighDiagnostics] = []
    for n in tqdm(sizes, desc="Spektren", unit="n", disable=None):
        reports.append(
            spectral_report(
                theta,
                n,
                threshold=threshold,
                cluster_eps=config.cluster_eps,
                cap=config.dense_cap,
                approximate_above_cap=True,
                quad_rel_tol=config.quad_rel_tol,
                quad_abs_tol=config.quad_abs_tol,
            )
        )
        if rayleigh:
            diagnostics.append(
                rayleigh_lower_diag(
                    theta,
                    n,
                    trials=config.trials,
                    seed=seed,
                    cap=config.dense_cap,
                    quad_rel_tol=config.quad_rel_tol,
                    quad_abs_tol=config.quad_abs_tol,
                )
            )
    return reports, (diagnostics if rayleigh else None)


def cmd_verify(theta: float, n: int, config: ExperimentConfig, threshold: float) -> ChainReport:
    return verify_chain(
        theta,
        n,
        cap=config.dense_cap,
        threshold=threshold,
        quad_rel_tol=config.quad_rel_tol,
        quad_abs_tol=config.quad_abs_tol,
    )


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        pfad = Path(output)
        pfad.parent.mkdir(parents=True, exist_ok=True)
        pfad.write_text(text, encoding="utf-8")
        logger.info("Ergebnis geschrieben: %s", output)
    else:
        sys.stdout.write(text)


def _show_table(rows: Sequence[TableRow], threshold: float, theta: float) -> None:
    table = Table(title=f"f(t) = |t|^{theta:g}")
    for name in table_header(threshold):
        table.add_column(name, justify="right")
    for row in rows:
        table.add_row(*row.cells())
    console.print(table)


def _show_chain(report: ChainReport) -> None:
    table = Table(title=f"Kette θ={report.theta:g}, n={report.n} (k={report.k}, r={report.r:g})")
    for name in ("Glied", "P_j", "α", "β", "r-", "r+"):
        table.add_column(name, justify="right")
    for link in report.links:
        table.add_row(
            link.label,
            link.operator_kind,
            _fmt(link.interval[0]),
            _fmt(link.interval[1]),
            str(link.outliers_below),
            str(link.outliers_above),
        )
    b = report.budget
    table.add_row("Budget", "", _fmt(b.alpha), _fmt(b.beta), str(b.r_minus), str(b.r_plus))
    console.print(table)
    status = "[green]bestanden[/green]" if report.passed else "[red]verletzt[/red]"
    console.print(
        f"Direkt: {report.direct_below} unter α, {report.direct_above} über β -> {status}"
    )


def parse_sizes(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Ungültige Größenliste: {text}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="config.yaml", help="Pfad zur Konfigurationsdatei")
    common.add_argument("--output", help="Ausgabedatei (Standard: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="Ausgabeformat")
    common.add_argument("--threshold", type=float, help="Schwelle für Ausreißer (Standard: 2)")
    common.add_argument("--tol", type=float, help="Relative Toleranz für PCG (Standard: 1e-7)")
    common.add_argument("--seed", type=int, help="Startwert für Zufallsvektoren")
    common.add_argument("--jobs", type=int, help="Parallele Tabellenzellen")
    common.add_argument("--verbose", action="store_true", help="Ausführliche Ausgabe (DEBUG)")

    parser = argparse.ArgumentParser(
        prog="toeplitz_tau", description="Toeplitz-Systeme mit τ-Vorkonditionierung."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser("table", parents=[common], help="Tabelle über mehrere n")
    table.add_argument("--theta", type=float, required=True)
    table.add_argument("--sizes", type=parse_sizes, help="Kommagetrennte Liste, z.B. 256,512")
    table.add_argument("--random-rhs", action="store_true", help="Zufällige rechte Seite")

    figure = sub.add_parser("figure", parents=[common], help="Spektrum als Plotdaten")
    figure.add_argument("--theta", type=float, required=True)
    figure.add_argument("-n", type=int, required=True)

    solve = sub.add_parser("solve", parents=[common], help="Einzelner PCG-Lauf")
    solve.add_argument("--theta", type=float, required=True)
    solve.add_argument("-n", type=int, required=True)
    solve.add_argument("--precond", choices=PRECONDITIONERS, default="tau")
    solve.add_argument("--random-rhs", action="store_true", help="Zufällige rechte Seite")

    spectrum = sub.add_parser("spectrum", parents=[common], help="Spektralberichte")
    spectrum.add_argument("--theta", type=float, required=True)
    spectrum.add_argument("--sizes", type=parse_sizes, help="Kommagetrennte Liste")
    spectrum.add_argument(
        "--rayleigh",
        action="store_true",
        help="Minimum der Rayleigh-Quotienten über TRIALS Zufallsvektoren (--seed)",
    )

    verify = sub.add_parser("verify", parents=[common], help="Kette für θ > 2 prüfen")
    verify.add_argument("--theta", type=float, required=True)
    verify.add_argument("-n", type=int, required=True)
    return parser


def _run(args: argparse.Namespace, config: ExperimentConfig) -> int:
    threshold = args.threshold if args.threshold is not None else config.threshold
    rel_tol = args.tol if args.tol is not None else config.rel_tol
    seed = args.seed if args.seed is not None else config.seed

    if args.command == "table":
        spec = ExperimentSpec(
            theta=args.theta,
            sizes=args.sizes or config.sizes,
            rel_tol=rel_tol,
            threshold=threshold,
            output_path=args.output,
            format=args.format,
            random_rhs=args.random_rhs,
            seed=seed,
        )
        rows = cmd_table(spec, config)
        _show_table(rows, threshold, spec.theta)
        _emit(format_table(rows, threshold, spec.format), spec.output_path)
        return EXIT_OK

    if args.command == "figure":
        eigenvalues = cmd_figure(args.theta, args.n, config, threshold)
        if args.format == "json":
            data = {
                "theta": args.theta,
                "threshold": threshold,
                "eigenvalues": eigenvalues.tolist(),
            }
            _emit(json.dumps(data, indent=2) + "\n", args.output)
        else:
            _emit(format_figure(eigenvalues, args.theta, threshold), args.output)
        return EXIT_OK

    if args.command == "solve":
        cfg = _solve_config(rel_tol, config)
        result = cmd_solve(
            args.theta, args.n, args.precond, cfg, args.random_rhs, seed, _quad_tol(config)
        )
        record = {
            "theta": args.theta,
            "n": args.n,
            "precond": args.precond,
            "iterations": result.iterations,
            "relative_residual": _sig6(result.final_relative_residual),
            "converged": result.converged,
        }
        if args.format == "json":
            _emit(json.dumps(record, indent=2) + "\n", args.output)
        else:
            _emit(_csv_text(list(record), [[str(v) for v in record.values()]]), args.output)
        return EXIT_OK

    if args.command == "spectrum":
        sizes = args.sizes or config.sizes
        reports, rayleigh = cmd_spectrum(
            args.theta, sizes, config, threshold, rayleigh=args.rayleigh, seed=seed
        )
        _emit(format_spectrum(reports, args.format, rayleigh), args.output)
        return EXIT_OK

    report = cmd_verify(args.theta, args.n, config, threshold)
    _show_chain(report)
    _emit(json.dumps(report.to_record(), indent=2) + "\n", args.output)
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = load_config(args.config)
    if args.jobs is not None:
        config.jobs = max(1, args.jobs)

    level = logging.DEBUG if args.verbose else getattr(logging, config.log_level)
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=LOG_DATEFMT)

    try:
        return _run(args, config)
    except ValueError as e:
        logger.error("Ungültige Eingabe: %s", e)
        return EXIT_REJECTED
    except ToeplitzTauError as e:
        logger.error("Fehlgeschlagen: %s", e)
        return EXIT_FAILED
    except OSError as e:
        logger.error("Ein-/Ausgabefehler: %s", e)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
