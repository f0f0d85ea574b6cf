"""Parameter sweeps over (algorithm x sweep value x seed) and their CSV output."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .scenario import ALGORITHMS, KEYS, ConfigError, Scenario, parse_pairs, scenario_from_pairs
from .simkernel import Metrics, run

SWEEP_KEYS = ("rate", "flows")
ROW_HEADER = ["algorithm", "sweep_key", "sweep_value", "seed", "delivery_rate", "throughput_kbps",
              "sent", "delivered", "collided"]
SUMMARY_HEADER = ["algorithm", "sweep_key", "sweep_value", "seeds", "delivery_rate_mean",
                  "delivery_rate_std", "throughput_kbps_mean", "throughput_kbps_std"]


@dataclass(frozen=True)
class ExperimentMatrix:
    base: Scenario
    sweep_key: str
    sweep_values: tuple
    algorithms: tuple[str, ...] = ALGORITHMS
    seeds: tuple[int, ...] = tuple(range(10))
    jobs: int = 1

    def validate(self) -> "ExperimentMatrix":
        if self.sweep_key not in SWEEP_KEYS:
            raise ConfigError(f"sweep_key must be one of {SWEEP_KEYS}, got {self.sweep_key!r}")
        if not self.sweep_values or not self.algorithms or not self.seeds:
            raise ConfigError("sweep_values, algorithms and seeds must all be non-empty")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {alg!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        for value in self.sweep_values:
            self.scenario(self.algorithms[0], value).validate()
        return self

    def scenario(self, algorithm: str, value) -> Scenario:
        return self.base.replace(algorithm=algorithm, **{self.sweep_key: value})

    def cells(self) -> list[tuple[str, object, int]]:
        """Every (algorithm, sweep value, seed), in CSV order."""
        return sorted((a, v, s) for a in self.algorithms for v in self.sweep_values for s in self.seeds)


def _int_list(text: str) -> tuple[int, ...]:
    """``0-9`` or ``1, 4, 7`` (ranges are inclusive)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def parse_matrix_text(text: str, source: str = "<string>") -> ExperimentMatrix:
    """Matrix file: scenario keys plus ``sweep_key``, ``sweep_values``, ``algorithms``, ``seeds``, ``jobs``."""
    pairs = parse_pairs(text, source)
    scenario_pairs, extra = [], {}
    for lineno, key, value in pairs:
        if key in ("sweep_key", "sweep_values", "algorithms", "seeds", "jobs"):
            extra[key] = (lineno, value)
        else:
            scenario_pairs.append((lineno, key, value))
    if "sweep_key" not in extra or "sweep_values" not in extra:
        raise ConfigError(f"{source}: matrix needs sweep_key and sweep_values")
    base = scenario_from_pairs(scenario_pairs, source)
    sweep_key = extra["sweep_key"][1]
    if sweep_key not in SWEEP_KEYS:
        raise ConfigError(f"{source}:{extra['sweep_key'][0]}: sweep_key must be one of {SWEEP_KEYS}")
    conv = KEYS[sweep_key][1]
    kw = {}
    try:
        lineno = extra["sweep_values"][0]
        values = tuple(conv(v.strip()) for v in extra["sweep_values"][1].split(",") if v.strip())
        if "algorithms" in extra:
            lineno = extra["algorithms"][0]
            kw["algorithms"] = tuple(a.strip() for a in extra["algorithms"][1].split(",") if a.strip())
        if "seeds" in extra:
            lineno = extra["seeds"][0]
            kw["seeds"] = _int_list(extra["seeds"][1])
        if "jobs" in extra:
            lineno = extra["jobs"][0]
            kw["jobs"] = int(extra["jobs"][1])
    except ValueError as exc:
        raise ConfigError(f"{source}:{lineno}: {exc}") from None
    matrix = ExperimentMatrix(base, sweep_key, values, **kw)
    try:
        return matrix.validate()
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_matrix(path) -> ExperimentMatrix:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc.strerror}") from None
    return parse_matrix_text(text, str(path))


def _fmt_value(v) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _run_cell(args) -> Metrics:
    scenario, seed = args
    return run(scenario, seed, trace=False)[0]


def run_cells(matrix: ExperimentMatrix) -> list[tuple[tuple[str, object, int], Metrics]]:
    matrix.validate()
    cells = matrix.cells()
    work = [(matrix.scenario(a, v), s) for a, v, s in cells]
    if matrix.jobs > 1:
        with ProcessPoolExecutor(matrix.jobs) as pool:
            results = list(pool.map(_run_cell, work))
    else:
        results = []
        for cell, item in zip(cells, work):
            try:
                results.append(_run_cell(item))
            except Exception as exc:
                raise RuntimeError(f"cell algorithm={cell[0]} {matrix.sweep_key}={cell[1]} seed={cell[2]} "
                                   f"failed: {exc}") from exc
    return list(zip(cells, results))


def summary_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + "_summary" + (out.suffix or ".csv"))


def run_matrix(matrix: ExperimentMatrix, out) -> tuple[Path, Path]:
    """Run every cell, write the per-seed CSV at ``out`` and the seed-averaged one beside it."""
    results = run_cells(matrix)
    out = Path(out)
    rows = []
    for (alg, value, seed), m in results:
        rows.append([alg, matrix.sweep_key, _fmt_value(value), seed, f"{m.delivery_rate:.6f}",
                     f"{m.throughput_kbps:.6f}", m.sent, m.delivered, m.collided])
    groups: dict[tuple[str, object], list[Metrics]] = {}
    for (alg, value, _), m in results:
        groups.setdefault((alg, value), []).append(m)
    summary = []
    for (alg, value), ms in sorted(groups.items()):
        dr = np.array([m.delivery_rate for m in ms])
        th = np.array([m.throughput_kbps for m in ms])
        summary.append([alg, matrix.sweep_key, _fmt_value(value), len(ms), f"{dr.mean():.6f}", f"{dr.std():.6f}",
                        f"{th.mean():.6f}", f"{th.std():.6f}"])
    side = summary_path(out)
    try:
        for path, header, body in ((out, ROW_HEADER, rows), (side, SUMMARY_HEADER, summary)):
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows(body)
    except OSError as exc:
        raise ConfigError(f"cannot write {exc.filename}: {exc.strerror}") from None
    return out, side
