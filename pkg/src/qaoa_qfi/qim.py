"""QFI-informed mutation (QIm) and the nonQIm / random-restart baselines.

All strategies run the same greedy loop: propose, score by expected cut,
keep the proposal only if it strictly improves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import ContractError, DegenerateMatrixError
from .graphs import Graph
from .simulator import AnsatzSpec, Statevector, check_params, cost_diagonal, evolve


class Strategy(str, Enum):
    QIM = "qim"
    NONQIM = "nonqim"
    RR = "rr"


@dataclass(frozen=True)
class MutationProfile:
    d: np.ndarray
    step: np.ndarray


@dataclass(frozen=True)
class OptimizerConfig:
    strategy: Strategy
    iterations: int = 100
    s_m: float = 0.01
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.iterations < 1:
            raise ContractError(f"iterations must be >= 1, got {self.iterations}")
        if not self.s_m > 0:
            raise ContractError(f"s_m must be positive, got {self.s_m}")


@dataclass
class RunRecord:
    objective_trace: np.ndarray
    final_params: np.ndarray
    final_objective: float
    best_iteration: int = 0
    initial_objective: float = field(default=float("nan"))


def expected_cut(state: Statevector, g: Graph) -> float:
    """Expected number of cut edges, ``(|E| - <H_P>) / 2``."""
    if state.n_qubits != g.n_nodes:
        raise ContractError(f"state has {state.n_qubits} qubits, graph has {g.n_nodes} nodes")
    return _cut_from_amps(state.amplitudes, cost_diagonal(g), g.n_edges)


def _cut_from_amps(amps: np.ndarray, diag: np.ndarray, n_edges: int) -> float:
    probs = amps.real ** 2 + amps.imag ** 2
    return 0.5 * (n_edges - float(probs @ diag))


def mutation_profile(f: np.ndarray) -> MutationProfile:
    diag = np.diag(np.asarray(f, dtype=float)).copy()
    tr = float(diag.sum())
    if tr <= 1e-12:
        raise DegenerateMatrixError(f"QFI trace {tr} is not positive")
    d = diag / tr
    return MutationProfile(d, 1.0 - d)


def qim_update(params: np.ndarray, profile: MutationProfile, rng: np.random.Generator) -> np.ndarray:
    """theta + m * zeta * (1 - d), m ~ Bernoulli(d), zeta ~ Rademacher."""
    params = np.asarray(params, dtype=float)
    if params.shape != profile.d.shape:
        raise ContractError(f"params shape {params.shape} != profile shape {profile.d.shape}")
    mask = rng.random(params.shape) < profile.d
    sign = rng.choice((-1.0, 1.0), size=params.shape)
    return params + mask * sign * profile.step


def baseline_update(
    params: np.ndarray, cfg: OptimizerConfig, rng: np.random.Generator, spec: Optional[AnsatzSpec] = None
) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    if cfg.strategy is Strategy.NONQIM:
        mask = rng.random(params.shape) < 0.5
        sign = rng.choice((-1.0, 1.0), size=params.shape)
        return params + mask * sign * cfg.s_m
    if cfg.strategy is Strategy.RR:
        return random_restart(params.size, rng, spec)
    raise ContractError(f"{cfg.strategy.value} is not a baseline strategy")


def random_restart(m: int, rng: np.random.Generator, spec: Optional[AnsatzSpec] = None) -> np.ndarray:
    """gamma ~ U[0, pi), every beta ~ U[0, 2pi)."""
    ppl = spec.params_per_layer if spec is not None else 2
    if m % ppl:
        raise ContractError(f"{m} parameters do not split into layers of {ppl}")
    upper = np.full(m, 2 * np.pi)
    upper[::ppl] = np.pi
    return rng.random(m) * upper


def run_seed(seed: int, run_index: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(run_index,)).generate_state(1, np.uint64)[0] >> 1)


def run_optimizer(
    spec: AnsatzSpec,
    g: Graph,
    cfg: OptimizerConfig,
    profile: Optional[MutationProfile] = None,
    initial_params: Optional[Sequence[float]] = None,
) -> RunRecord:
    if g != spec.graph:
        raise ContractError("graph does not match the ansatz graph")
    if cfg.strategy is Strategy.QIM:
        if profile is None:
            raise ContractError("QIm needs a mutation profile")
        if profile.d.shape != (spec.n_params,):
            raise ContractError("profile size does not match the parameter count")
    rng = np.random.default_rng(cfg.seed)
    if initial_params is None:
        best = rng.uniform(0.0, 2 * np.pi, spec.n_params)
    else:
        best = check_params(spec, initial_params).copy()
    diag = cost_diagonal(spec)

    def score(p):
        return _cut_from_amps(evolve(spec, p)[0], diag, g.n_edges)

    best_val = initial = score(best)
    trace = np.empty(cfg.iterations)
    best_iter = 0
    for it in range(cfg.iterations):
        if cfg.strategy is Strategy.QIM:
            cand = qim_update(best, profile, rng)
        else:
            cand = baseline_update(best, cfg, rng, spec)
        val = score(cand)
        if val > best_val:
            best, best_val, best_iter = cand, val, it + 1
        trace[it] = best_val
    return RunRecord(trace, best, best_val, best_iter, initial)


@dataclass(frozen=True)
class StrategyStats:
    strategy: Strategy
    mean: float
    variance: float
    q1: float
    median: float
    q3: float
    min: float
    max: float


@dataclass
class BenchmarkResult:
    records: dict[Strategy, list[RunRecord]]
    seeds: list[int]
    stats: dict[Strategy, StrategyStats]


def summarize_runs(strategy: Strategy, finals: Sequence[float]) -> StrategyStats:
    x = np.asarray(finals, dtype=float)
    q1, med, q3 = np.percentile(x, [25, 50, 75])
    # sample variance; runs >= 2 is enforced upstream
    return StrategyStats(
        Strategy(strategy), float(x.mean()), float(x.var(ddof=1)),
        float(q1), float(med), float(q3), float(x.min()), float(x.max()),
    )


def benchmark(
    spec: AnsatzSpec,
    g: Graph,
    strategies: Sequence[Strategy | str],
    runs: int = 100,
    iterations: int = 100,
    seed: int = 0,
    *,
    profile: Optional[MutationProfile] = None,
    s_m: float = 0.01,
    seeds: Optional[Sequence[int]] = None,
    executor=None,
) -> BenchmarkResult:
    """Independent runs per strategy; run ``r`` uses the same seed for every
    strategy, so all strategies start from the same initial point.

    ``seeds`` overrides the per-run seeds derived from ``(seed, r)``.
    ``executor`` (anything with an order-preserving ``map``) parallelizes runs.
    """
    if runs < 2:
        raise ContractError(f"runs must be >= 2, got {runs}")
    if seeds is None:
        seeds = [run_seed(seed, r) for r in range(runs)]
    elif len(seeds) != runs:
        raise ContractError(f"{len(seeds)} seeds given for {runs} runs")
    seeds = [int(s) for s in seeds]
    strategies = [Strategy(s) for s in strategies]
    mapper = executor.map if executor is not None else map
    records, stats = {}, {}
    for strat in strategies:
        cfgs = [OptimizerConfig(strat, iterations, s_m, s) for s in seeds]
        prof = profile if strat is Strategy.QIM else None
        recs = list(mapper(_run_one, [(spec, g, c, prof) for c in cfgs]))
        records[strat] = recs
        stats[strat] = summarize_runs(strat, [r.final_objective for r in recs])
    return BenchmarkResult(records, seeds, stats)


def _run_one(args) -> RunRecord:
    return run_optimizer(*args)
