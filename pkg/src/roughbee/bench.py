"""Experiment harness: run reduct algorithms over datasets and tabulate reduct sizes.

Experiments are described by a JSON file::

    {
      "datasets": [
        {"name": "wisconsin", "path": "breast-cancer-wisconsin.data",
         "has_header": false, "drop_columns": [0], "missing_policy": "drop_rows",
         "discretization": {"strategy": "equal_frequency", "bins": 3}}
      ],
      "algorithms": [
        {"algorithm_id": "quickreduct"},
        {"algorithm_id": "beersar", "runs": 3, "base_seed": 0,
         "config": {"max_cycles": 1000}}
      ],
      "output": {"report_path": null, "format": "table"}
    }

Relative dataset paths are resolved against the config file's directory.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from .bee import BeeConfig, bee_rsar
from .core import DecisionTable, SubsetEvaluator, dependency, mask_of
from .data import DiscretizationSpec, load_table
from .deterministic import (
    DEFAULT_ORACLE_CAP,
    ReductOutcome,
    ReductSizeError,
    ebr,
    exhaustive_min_reduct,
    quick_reduct,
)
from .metaheuristics import AntConfig, GaConfig, PsoConfig, ant_rsar, gen_rsar, pso_rsar

__all__ = [
    "ALGORITHMS",
    "ConfigError",
    "DatasetSpec",
    "AlgorithmSpec",
    "ExperimentConfig",
    "ReportRow",
    "OracleCheck",
    "VerificationReport",
    "cardinality_display",
    "load_config",
    "run_algorithm",
    "run_experiment",
    "emit_report",
    "verify_against_oracle",
]

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """The experiment description cannot be run."""


@dataclass(frozen=True)
class _Algo:
    run: Callable[..., ReductOutcome]
    config_type: Optional[type]
    stochastic: bool
    label: str


ALGORITHMS: dict[str, _Algo] = {
    "quickreduct": _Algo(lambda t, c, s: quick_reduct(t), None, False, "RSAR"),
    "ebr": _Algo(lambda t, c, s: ebr(t), None, False, "EBR"),
    "oracle": _Algo(lambda t, c, s: exhaustive_min_reduct(t, **c), None, False, "Oracle"),
    "antrsar": _Algo(ant_rsar, AntConfig, True, "AntRSAR"),
    "genrsar": _Algo(gen_rsar, GaConfig, True, "GenRSAR"),
    "psorsar": _Algo(pso_rsar, PsoConfig, True, "PSORSAR"),
    "beersar": _Algo(bee_rsar, BeeConfig, True, "BeeRSAR"),
}


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    path: Path
    discretization: DiscretizationSpec = DiscretizationSpec()
    missing_policy: str = "drop_rows"
    delimiter: str = ","
    has_header: bool = True
    missing_marker: str = "?"
    decision_column: int = -1
    drop_columns: tuple[int, ...] = ()

    def load(self) -> DecisionTable:
        return load_table(self.path, self.discretization, self.missing_policy,
                          delimiter=self.delimiter, has_header=self.has_header,
                          missing_marker=self.missing_marker,
                          decision_column=self.decision_column,
                          drop_columns=self.drop_columns)


@dataclass(frozen=True)
class AlgorithmSpec:
    algorithm_id: str
    config: Any = None
    runs: int = 1
    base_seed: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[DatasetSpec, ...]
    algorithms: tuple[AlgorithmSpec, ...]
    report_path: Optional[Path] = None
    format: str = "table"

    def __post_init__(self) -> None:
        if not self.datasets:
            raise ConfigError("at least one dataset is required")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        if self.format not in ("table", "machine"):
            raise ConfigError(f"unknown report format {self.format!r}")
        for a in self.algorithms:
            if a.algorithm_id not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm_id {a.algorithm_id!r}")
            if a.runs < 1:
                raise ConfigError(f"{a.algorithm_id}: runs must be at least 1")

    def with_seed(self, seed: int) -> "ExperimentConfig":
        algos = tuple(AlgorithmSpec(a.algorithm_id, a.config, a.runs, seed)
                      for a in self.algorithms)
        return ExperimentConfig(self.datasets, algos, self.report_path, self.format)


def _build_algorithm(entry: dict) -> AlgorithmSpec:
    entry = dict(entry)
    algo_id = entry.pop("algorithm_id", None)
    if algo_id not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm_id {algo_id!r}")
    spec = ALGORITHMS[algo_id]
    raw_cfg = entry.pop("config", None) or {}
    if spec.config_type is None:
        allowed = {"max_attrs_cap"} if algo_id == "oracle" else set()
        bad = set(raw_cfg) - allowed
        if bad:
            raise ConfigError(f"{algo_id}: unexpected config keys {sorted(bad)}")
        cfg: Any = dict(raw_cfg)
    else:
        known = {f.name for f in fields(spec.config_type) if f.init}
        bad = set(raw_cfg) - known
        if bad:
            raise ConfigError(f"{algo_id}: unexpected config keys {sorted(bad)}")
        try:
            cfg = spec.config_type(**raw_cfg)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{algo_id}: {exc}") from exc
    if spec.stochastic:
        default_runs = cfg.runs if isinstance(cfg, BeeConfig) else 3
    else:
        default_runs = 1
    runs = entry.pop("runs", default_runs)
    base_seed = entry.pop("base_seed", 0)
    if entry:
        raise ConfigError(f"{algo_id}: unexpected keys {sorted(entry)}")
    if not isinstance(runs, int) or not isinstance(base_seed, int):
        raise ConfigError(f"{algo_id}: runs and base_seed must be integers")
    return AlgorithmSpec(algo_id, cfg, runs, base_seed)


def _build_dataset(entry: dict, root: Path) -> DatasetSpec:
    entry = dict(entry)
    try:
        name = entry.pop("name")
        path = Path(entry.pop("path"))
    except KeyError as exc:
        raise ConfigError(f"dataset entry missing {exc.args[0]!r}") from None
    disc = entry.pop("discretization", None) or {}
    overrides = {k: (v[0], int(v[1])) for k, v in (disc.get("overrides") or {}).items()}
    try:
        spec = DiscretizationSpec(disc.get("strategy", "equal_frequency"),
                                  int(disc.get("bins", 3)), overrides)
    except ValueError as exc:
        raise ConfigError(f"dataset {name}: {exc}") from exc
    policy = entry.pop("missing_policy", "drop_rows")
    if policy not in ("drop_rows", "reject"):
        raise ConfigError(f"dataset {name}: unknown missing_policy {policy!r}")
    known = {"delimiter", "has_header", "missing_marker", "decision_column", "drop_columns"}
    if set(entry) - known:
        raise ConfigError(f"dataset {name}: unexpected keys {sorted(set(entry) - known)}")
    if "drop_columns" in entry:
        entry["drop_columns"] = tuple(int(j) for j in entry["drop_columns"])
    return DatasetSpec(name, path if path.is_absolute() else root / path, spec, policy, **entry)


def load_config(path: Path | str) -> ExperimentConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(doc, path.parent)


def config_from_dict(doc: dict, root: Path = Path(".")) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    datasets = tuple(_build_dataset(d, root) for d in doc.get("datasets") or [])
    algorithms = tuple(_build_algorithm(a) for a in doc.get("algorithms") or [])
    output = doc.get("output") or {}
    report = output.get("report_path")
    return ExperimentConfig(datasets, algorithms,
                            Path(report) if report else None,
                            output.get("format", "table"))


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------


def cardinality_display(cards: Sequence[int]) -> str:
    """``"k"`` when all runs agree, otherwise ``"min-max"``."""
    if not cards:
        return "-"
    lo, hi = min(cards), max(cards)
    return str(lo) if lo == hi else f"{lo}-{hi}"


@dataclass(frozen=True)
class ReportRow:
    dataset_name: str
    algorithm_id: str
    cardinalities: tuple[int, ...] = ()
    gamma_best: Optional[float] = None
    best_subset: tuple[int, ...] = ()
    total_evaluations: int = 0
    all_reducts: bool = True
    num_attrs: Optional[int] = None
    error: Optional[str] = None
    total_elapsed: float = field(default=0.0, compare=False)
    outcomes: tuple[ReductOutcome, ...] = field(default=(), compare=False, repr=False)

    @property
    def cardinality_display(self) -> str:
        return "ERR" if self.error else cardinality_display(self.cardinalities)


def run_algorithm(table: DecisionTable, spec: AlgorithmSpec) -> list[ReductOutcome]:
    """All runs of one algorithm on one table, seeded ``base_seed + i``."""
    algo = ALGORITHMS[spec.algorithm_id]
    cfg = spec.config if spec.config is not None else (
        algo.config_type() if algo.config_type else {})
    return [algo.run(table, cfg, spec.base_seed + i) for i in range(spec.runs)]


def _summarise(name: str, table: DecisionTable, spec: AlgorithmSpec,
               outcomes: list[ReductOutcome]) -> ReportRow:
    ev = SubsetEvaluator(table)
    best = min(outcomes, key=lambda o: (not ev.is_reduct(mask_of(o.subset)),
                                        o.cardinality, o.seed or 0))
    return ReportRow(
        dataset_name=name,
        algorithm_id=spec.algorithm_id,
        cardinalities=tuple(o.cardinality for o in outcomes),
        gamma_best=dependency(table, best.subset),
        best_subset=tuple(sorted(best.subset)),
        total_evaluations=sum(o.evaluations for o in outcomes),
        all_reducts=all(ev.is_reduct(mask_of(o.subset)) for o in outcomes),
        num_attrs=table.num_condition_attrs,
        total_elapsed=sum(o.elapsed for o in outcomes),
        outcomes=tuple(outcomes),
    )


def run_experiment(cfg: ExperimentConfig,
                   progress: Optional[Callable[[str], None]] = None) -> list[ReportRow]:
    """One row per (dataset, algorithm) in configured order.

    A dataset that fails to load yields error rows; the rest still run.
    """
    rows: list[ReportRow] = []
    for ds in cfg.datasets:
        try:
            table = ds.load()
        except (OSError, ValueError) as exc:
            log.error("dataset %s failed to load: %s", ds.name, exc)
            rows.extend(ReportRow(ds.name, a.algorithm_id, error=str(exc))
                        for a in cfg.algorithms)
            continue
        for spec in cfg.algorithms:
            if progress:
                progress(f"{ds.name}: {spec.algorithm_id} x{spec.runs}")
            try:
                outcomes = run_algorithm(table, spec)
            except ReductSizeError as exc:
                rows.append(ReportRow(ds.name, spec.algorithm_id,
                                      num_attrs=table.num_condition_attrs, error=str(exc)))
                continue
            rows.append(_summarise(ds.name, table, spec, outcomes))
    return rows


# --------------------------------------------------------------------------
# reporting
# --------------------------------------------------------------------------

MACHINE_FIELDS = ("dataset", "algorithm", "cardinalities", "display", "gamma_best",
                  "best_subset", "evaluations", "all_reducts", "error")


def _machine_record(row: ReportRow, timing: bool) -> list[str]:
    rec = [
        row.dataset_name,
        row.algorithm_id,
        " ".join(str(c) for c in row.cardinalities),
        row.cardinality_display,
        "" if row.gamma_best is None else repr(row.gamma_best),
        " ".join(str(a) for a in row.best_subset),
        str(row.total_evaluations),
        str(row.all_reducts).lower(),
        (row.error or "").replace("\t", " ").replace("\n", " "),
    ]
    if timing:
        rec.append(f"{row.total_elapsed:.6f}")
    return rec


def emit_report(rows: Sequence[ReportRow], format: str = "table", timing: bool = False) -> str:
    """Render rows as a dataset-by-algorithm grid or as tab-separated records.

    Wall time is left out of the machine format unless ``timing`` is set,
    since it is the one field that differs between identical runs.
    """
    if not rows:
        raise ValueError("no report rows to emit")
    if format == "machine":
        header = list(MACHINE_FIELDS) + (["elapsed_s"] if timing else [])
        lines = ["\t".join(header)]
        lines.extend("\t".join(_machine_record(r, timing)) for r in rows)
        return "\n".join(lines) + "\n"
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")
    datasets = list(dict.fromkeys(r.dataset_name for r in rows))
    algos = list(dict.fromkeys(r.algorithm_id for r in rows))
    cell = {(r.algorithm_id, r.dataset_name): r for r in rows}
    n_attrs = {r.dataset_name: r.num_attrs for r in rows if r.num_attrs is not None}
    grid = [["Dataset", *datasets],
            ["#Features", *(str(n_attrs.get(d, "?")) for d in datasets)]]
    for a in algos:
        label = ALGORITHMS[a].label if a in ALGORITHMS else a
        grid.append([label, *(cell[(a, d)].cardinality_display if (a, d) in cell else "-"
                              for d in datasets)])
    widths = [max(len(r[c]) for r in grid) for c in range(len(grid[0]))]
    out = []
    for i, r in enumerate(grid):
        out.append("  ".join(v.ljust(widths[c]) if c == 0 else v.rjust(widths[c])
                             for c, v in enumerate(r)).rstrip())
        if i == 1:
            out.append("  ".join("-" * w for w in widths))
    if timing:
        out.append("")
        for r in rows:
            out.append(f"{r.dataset_name}/{r.algorithm_id}: {r.total_elapsed:.2f}s")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# oracle verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleCheck:
    dataset_name: str
    algorithm_id: str
    oracle_min: int
    cardinalities: tuple[int, ...]
    gaps: tuple[int, ...]
    invalid_runs: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.invalid_runs


@dataclass
class VerificationReport:
    checks: list[OracleCheck] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and all(c.ok for c in self.checks)

    def render(self) -> str:
        lines = []
        for note in self.skipped:
            lines.append(f"SKIP {note}")
        for note in self.errors:
            lines.append(f"ERROR {note}")
        for c in self.checks:
            flag = "ok" if c.ok else f"NOT-A-REDUCT runs={list(c.invalid_runs)}"
            lines.append(
                f"{c.dataset_name}\t{c.algorithm_id}\tmin={c.oracle_min}\t"
                f"sizes={cardinality_display(c.cardinalities)}\t"
                f"gap={cardinality_display(c.gaps)}\t{flag}")
        return "\n".join(lines) + "\n"


def verify_against_oracle(cfg: ExperimentConfig,
                          max_attrs_cap: int = DEFAULT_ORACLE_CAP) -> VerificationReport:
    """Compare every algorithm's reduct sizes with the exhaustive minimum."""
    report = VerificationReport()
    for ds in cfg.datasets:
        try:
            table = ds.load()
        except (OSError, ValueError) as exc:
            report.errors.append(f"{ds.name}: {exc}")
            continue
        if table.num_condition_attrs > max_attrs_cap:
            report.skipped.append(
                f"{ds.name}: {table.num_condition_attrs} attributes exceeds cap {max_attrs_cap}")
            continue
        best = exhaustive_min_reduct(table, max_attrs_cap).cardinality
        ev = SubsetEvaluator(table)
        for spec in cfg.algorithms:
            outcomes = run_algorithm(table, spec)
            cards = tuple(o.cardinality for o in outcomes)
            invalid = tuple(i for i, o in enumerate(outcomes)
                            if not ev.is_reduct(mask_of(o.subset)))
            report.checks.append(OracleCheck(ds.name, spec.algorithm_id, best, cards,
                                             tuple(c - best for c in cards), invalid))
    return report

