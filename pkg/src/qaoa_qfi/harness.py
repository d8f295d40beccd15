"""Experiment sweeps: QFI scans, entanglement-stage study, QIm benchmark.

Every mode takes an :class:`ExperimentConfig`, writes CSV/JSON files into
``output_dir`` and returns the number of grid points that failed.
"""
from __future__ import annotations

import csv
import json
import logging
import zlib
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, fields
from itertools import product
from pathlib import Path
from typing import Any, Iterator, Optional, Union

from .errors import ContractError, QaoaQfiError
from .graphs import make_graph
from .qfi import averaged_qfi, qfi_samples, sample_mean_extremes, summarize
from .qim import Strategy, benchmark, mutation_profile
from .simulator import AnsatzSpec, EntPattern

log = logging.getLogger(__name__)

QFI_HEADER = [
    "n", "topology", "mixer", "depth", "ent_pattern", "ent_stages",
    "n_samples", "seed", "max_eig", "min_eig", "trace", "cov_fraction",
]
RUNS_HEADER = ["case", "strategy", "run_index", "seed", "final_eev", "best_iteration"]
SUMMARY_HEADER = ["case", "strategy", "mean", "variance", "q1", "median", "q3", "min", "max"]

MODES = ("qfi-scan", "ent-stage-study", "qim-bench")
FULL = "full"  # ent_stages placeholder meaning "one stage per layer"


@dataclass
class Grid:
    n: list[int] = field(default_factory=lambda: [4, 7, 10])
    topologies: list[str] = field(default_factory=lambda: ["cyclic", "complete"])
    mixers: list[str] = field(default_factory=lambda: ["rx", "rxry"])
    depths: list[int] = field(default_factory=lambda: [1, 2, 3])
    ent_patterns: list[str] = field(default_factory=lambda: ["none", "complete"])
    ent_stages: list[Union[int, str]] = field(default_factory=lambda: [FULL])


@dataclass
class BenchCase:
    name: str
    n: int
    topology: str
    mixer: str
    depth: int
    ent_pattern: str = "none"
    ent_stages: int = 0

    def spec(self) -> AnsatzSpec:
        return AnsatzSpec(make_graph(self.topology, self.n), self.depth, self.mixer,
                          self.ent_pattern, self.ent_stages)


DEFAULT_CASES = [
    BenchCase("7-complete-rx-3L", 7, "complete", "rx", 3),
    BenchCase("10-cyclic-rxry-3L-ent", 10, "cyclic", "rxry", 3, "complete", 3),
]


@dataclass
class ExperimentConfig:
    mode: str = "qfi-scan"
    grid: Grid = field(default_factory=Grid)
    n_samples: int = 100
    runs: int = 100
    iterations: int = 100
    seed: int = 0
    output_dir: str = "results"
    jobs: int = 1
    s_m: float = 0.01
    cases: list[BenchCase] = field(default_factory=list)
    include_default_cases: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ContractError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("n_samples", "runs", "iterations", "jobs"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be >= 1")

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "ExperimentConfig":
        obj = dict(obj)
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ContractError(f"unknown config keys: {sorted(unknown)}")
        if "grid" in obj:
            grid = obj["grid"]
            bad = set(grid) - {f.name for f in fields(Grid)}
            if bad:
                raise ContractError(f"unknown grid keys: {sorted(bad)}")
            obj["grid"] = Grid(**grid)
        if "cases" in obj:
            obj["cases"] = [BenchCase(**c) for c in obj["cases"]]
        return cls(**obj)


def load_config(path: Optional[str], **overrides) -> ExperimentConfig:
    """Read a JSON config; non-None ``overrides`` replace file values."""
    obj: dict[str, Any] = {}
    if path is not None:
        with open(path) as fh:
            obj = json.load(fh)
    obj.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(obj)


def point_seed(seed: int, identifier: str) -> int:
    """Grid-point seed; depends only on the base seed and the point itself."""
    return int(seed) ^ zlib.crc32(identifier.encode())


def grid_points(grid: Grid) -> Iterator[tuple[str, Optional[AnsatzSpec], Optional[str]]]:
    """Yield ``(identifier, spec, None)`` or ``(identifier, None, reason)`` in grid order.

    For ``ent_pattern == "none"`` the stage list collapses to a single 0.
    """
    for n, topo, mixer, depth, pattern in product(
        grid.n, grid.topologies, grid.mixers, grid.depths, grid.ent_patterns
    ):
        if EntPattern(pattern) is EntPattern.NONE:
            stage_list: list = [0]
        else:
            stage_list = list(dict.fromkeys(depth if s == FULL else int(s) for s in grid.ent_stages))
        for stages in stage_list:
            ident = (f"n={n},topology={topo},mixer={mixer},depth={depth},"
                     f"ent_pattern={pattern},ent_stages={stages}")
            try:
                spec = AnsatzSpec(make_graph(topo, int(n)), int(depth), mixer, pattern, stages)
            except QaoaQfiError as exc:
                yield ident, None, str(exc)
                continue
            yield ident, spec, None


# ---------------------------------------------------------------------------
# Workers (module level so they pickle)
# ---------------------------------------------------------------------------

def _qfi_point(args) -> dict:
    spec, n_samples, seed = args
    samples = qfi_samples(spec, n_samples, seed)
    f = samples.sum(axis=0) / n_samples
    f = 0.5 * (f + f.T)
    summary = summarize(f)
    me, le = sample_mean_extremes(samples)
    return {
        "config": spec.to_json(),
        "n_samples": n_samples,
        "seed": seed,
        "qfi": f.tolist(),
        "summary": summary.to_json(),
        "sample_mean_extremes": {"max_eig": me, "min_eig": le},
    }


def _safe(fn, args):
    try:
        return fn(args), None
    except Exception as exc:  # noqa: BLE001 - reported per grid point
        return None, f"{type(exc).__name__}: {exc}"


def _safe_qfi_point(args):
    return _safe(_qfi_point, args)


@contextmanager
def _executor(jobs: int):
    if jobs <= 1:
        yield None
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            yield ex


def _map(ex, fn, items):
    return list(ex.map(fn, items)) if ex is not None else [fn(x) for x in items]


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def write_csv(path: Path, header: list[str], rows: list[dict]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(row[h]) for h in header])


def read_csv(path: Path) -> list[dict]:
    """Parse a result CSV back, converting numeric fields."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                try:
                    parsed[k] = int(v)
                except ValueError:
                    try:
                        parsed[k] = float(v)
                    except ValueError:
                        parsed[k] = v
            out.append(parsed)
    return out


def write_json(path: Path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _qfi_row(result: dict) -> dict:
    c, s = result["config"], result["summary"]
    return {
        "n": c["n"], "topology": c["graph"]["topology"], "mixer": c["mixer"],
        "depth": c["depth"], "ent_pattern": c["ent_pattern"], "ent_stages": c["ent_stages"],
        "n_samples": result["n_samples"], "seed": result["seed"], **s,
    }


# ---------------------------------------------------------------------------
# Modes
# ---------------------------------------------------------------------------

def _run_qfi_grid(cfg: ExperimentConfig, points, stem: str) -> tuple[list[dict], int]:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    work, idents = [], []
    for ident, spec, reason in points:
        if spec is None:
            log.warning("skipping %s: %s", ident, reason)
            continue
        work.append((spec, cfg.n_samples, point_seed(cfg.seed, ident)))
        idents.append(ident)
    log.info("%s: %d grid points, %d samples each", stem, len(work), cfg.n_samples)
    with _executor(cfg.jobs) as ex:
        outcomes = _map(ex, _safe_qfi_point, work)
    results, failed = [], 0
    for ident, (res, err) in zip(idents, outcomes):
        if err is not None:
            log.error("grid point %s failed: %s", ident, err)
            failed += 1
            continue
        results.append(res)
    rows = [_qfi_row(r) for r in results]
    write_csv(out / f"{stem}.csv", QFI_HEADER, rows)
    write_json(out / f"{stem}.json", results)
    return rows, failed


def run_qfi_scan(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    return _run_qfi_grid(cfg, grid_points(cfg.grid), "qfi_scan")


ENT_STUDY_GRID = Grid(n=[7], topologies=["complete"], mixers=["rx", "rxry"], depths=[3],
                      ent_patterns=["cyclic", "complete"], ent_stages=[1, 2, 3])


def run_ent_stage_study(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    """Fixed grid: 7-node complete graph, depth 3, both mixers and patterns, 1-3 stages."""
    return _run_qfi_grid(cfg, grid_points(ENT_STUDY_GRID), "ent_study")


def _bench_case(args):
    case, cfg = args
    spec = case.spec()
    qfi_seed = point_seed(cfg.seed, "qfi:" + case.name)
    f, summary = averaged_qfi(spec, cfg.n_samples, qfi_seed)
    profile = mutation_profile(f)
    bench_seed = point_seed(cfg.seed, "bench:" + case.name)
    res = benchmark(spec, spec.graph, list(Strategy), cfg.runs, cfg.iterations, bench_seed,
                    profile=profile, s_m=cfg.s_m)
    qfi_json = {
        "case": case.name,
        "config": spec.to_json(),
        "n_samples": cfg.n_samples,
        "seed": qfi_seed,
        "qfi": f.tolist(),
        "summary": summary.to_json(),
        "mutation_probability": profile.d.tolist(),
    }
    run_rows, summary_rows = [], []
    for strat, recs in res.records.items():
        for r, (rec, s) in enumerate(zip(recs, res.seeds)):
            run_rows.append({
                "case": case.name, "strategy": strat.value, "run_index": r, "seed": s,
                "final_eev": rec.final_objective, "best_iteration": rec.best_iteration,
            })
        st = res.stats[strat]
        summary_rows.append({
            "case": case.name, "strategy": strat.value, "mean": st.mean, "variance": st.variance,
            "q1": st.q1, "median": st.median, "q3": st.q3, "min": st.min, "max": st.max,
        })
    return run_rows, summary_rows, qfi_json


def bench_cases(cfg: ExperimentConfig) -> list[BenchCase]:
    cases = (list(DEFAULT_CASES) if cfg.include_default_cases else []) + list(cfg.cases)
    names = [c.name for c in cases]
    if len(set(names)) != len(names):
        raise ContractError(f"duplicate case names: {names}")
    return cases


def run_qim_bench(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    """Returns the summary rows; per-run rows and the QFI JSON go to files."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cases = bench_cases(cfg)
    # one case per worker; cases stay internally sequential
    with _executor(cfg.jobs) as ex:
        outcomes = _map(ex, _safe_bench_case, [(c, cfg) for c in cases])
    runs, summaries, qfis, failed = [], [], [], 0
    for case, (res, err) in zip(cases, outcomes):
        if err is not None:
            log.error("case %s failed: %s", case.name, err)
            failed += 1
            continue
        runs.extend(res[0])
        summaries.extend(res[1])
        qfis.append(res[2])
        for row in res[1]:
            log.info("%s %-6s mean=%.4f var=%.4f", case.name, row["strategy"], row["mean"], row["variance"])
    write_csv(out / "bench_runs.csv", RUNS_HEADER, runs)
    write_csv(out / "bench_summary.csv", SUMMARY_HEADER, summaries)
    write_json(out / "bench_qfi.json", qfis)
    return summaries, failed


def _safe_bench_case(args):
    return _safe(_bench_case, args)


def run(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    if cfg.mode == "qfi-scan":
        return run_qfi_scan(cfg)
    if cfg.mode == "ent-stage-study":
        return run_ent_stage_study(cfg)
    return run_qim_bench(cfg)
