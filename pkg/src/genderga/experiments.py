"""Experiment harness: seeded ensembles, peak-tracking classification, the
bifurcation sweep over the decay rate, the four-variant comparison, and
meta-optimization of the mutation-schedule parameters."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from functools import partial

import numpy as np

from .engine import RunHistory, evolve
from .model import (
    ConfigurationError,
    EvaluationError,
    EvolutionConfig,
    MutationSchedule,
    RandomSource,
)
from .objectives import ObjectiveSpec, PerturbationParams, dynamic_objective, static_rastrigin

# xor'ed into the base seed so inner meta ensembles never share substreams
# with the outer optimizer
_META_INNER_SALT = 0x9E3779B97F4A7C15


class ChaseLabel(Enum):
    PERTURBATION_PEAK = "perturbation_peak"
    RASTRIGIN_PEAK = "rastrigin_peak"
    NEITHER = "neither"


@dataclass(frozen=True)
class ChaseSpec:
    """Ball-based classification of which peak a point is tracking."""

    perturbation_center: tuple[float, float] = (0.0, 1.0)
    rastrigin_center: tuple[float, float] = (0.0, 0.0)
    radius: float = 0.25


def classify_chase(
    point,
    perturbation_center=(0.0, 1.0),
    rastrigin_center=(0.0, 0.0),
    radius: float = 0.25,
) -> ChaseLabel:
    """Label a point by containment in the two peak balls; nearer center wins
    overlaps, ties go to the perturbation peak."""
    if radius <= 0.0:
        raise ConfigurationError("chase radius must be positive")
    p = np.asarray(point, float)
    dp = float(np.linalg.norm(p - np.asarray(perturbation_center, float)))
    dr = float(np.linalg.norm(p - np.asarray(rastrigin_center, float)))
    in_p = dp <= radius
    in_r = dr <= radius
    if in_p and in_r:
        return ChaseLabel.PERTURBATION_PEAK if dp <= dr else ChaseLabel.RASTRIGIN_PEAK
    if in_p:
        return ChaseLabel.PERTURBATION_PEAK
    if in_r:
        return ChaseLabel.RASTRIGIN_PEAK
    return ChaseLabel.NEITHER


@dataclass(frozen=True)
class EnsembleResult:
    generations: np.ndarray
    mean_best_fitness: np.ndarray
    stderr_best_fitness: np.ndarray
    mean_best_point: np.ndarray
    final_best_fitness: np.ndarray
    final_best_points: np.ndarray
    final_labels: tuple[ChaseLabel, ...] | None
    n_runs: int
    base_seed: int


def _run_realization(task) -> tuple[np.ndarray, np.ndarray]:
    config, objective, base_seed, index = task
    rng = RandomSource(base_seed).substream(index)
    hist = evolve(config, objective, rng)
    best_fitness = np.array([r.best_fitness for r in hist.records])
    best_points = np.array([r.best_point for r in hist.records])
    return best_fitness, best_points


def run_ensemble(
    config: EvolutionConfig,
    objective: ObjectiveSpec,
    n_runs: int,
    base_seed: int,
    jobs: int = 1,
    chase: ChaseSpec | None = None,
) -> EnsembleResult:
    """Execute n_runs independent seeded runs and aggregate per generation.

    Run k uses the substream derived from (base_seed, k); aggregation follows
    run-index order, so results are independent of scheduling and of ``jobs``.
    """
    if n_runs < 1:
        raise ConfigurationError("n_runs must be >= 1")
    tasks = [(config, objective, base_seed, k) for k in range(n_runs)]
    outs = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            iterator = pool.map(_run_realization, tasks)
            for k in range(n_runs):
                try:
                    outs.append(next(iterator))
                except EvaluationError as exc:
                    raise EvaluationError(
                        f"ensemble run {k} (base seed {base_seed}) failed: {exc}"
                    ) from exc
    else:
        for k, task in enumerate(tasks):
            try:
                outs.append(_run_realization(task))
            except EvaluationError as exc:
                raise EvaluationError(
                    f"ensemble run {k} (base seed {base_seed}) failed: {exc}"
                ) from exc

    best_fitness = np.stack([o[0] for o in outs])  # runs x generations
    best_points = np.stack([o[1] for o in outs])  # runs x generations x dim
    mean_fit = best_fitness.mean(axis=0)
    if n_runs > 1:
        stderr = best_fitness.std(axis=0, ddof=1) / math.sqrt(n_runs)
    else:
        stderr = np.zeros_like(mean_fit)
    final_points = best_points[:, -1, :]
    labels = None
    if chase is not None:
        labels = tuple(
            classify_chase(
                p, chase.perturbation_center, chase.rastrigin_center, chase.radius
            )
            for p in final_points
        )
    return EnsembleResult(
        generations=np.arange(best_fitness.shape[1]),
        mean_best_fitness=mean_fit,
        stderr_best_fitness=stderr,
        mean_best_point=best_points.mean(axis=0),
        final_best_fitness=best_fitness[:, -1],
        final_best_points=final_points,
        final_labels=labels,
        n_runs=n_runs,
        base_seed=int(base_seed),
    )


@dataclass(frozen=True)
class BifurcationReport:
    lambda_grid: tuple[float, ...]
    switch_fraction: np.ndarray
    switch_stderr: np.ndarray
    n_runs: int
    bifurcation_lambda: float | None


def bifurcation_sweep(
    config: EvolutionConfig,
    perturbation: PerturbationParams,
    lambda_grid,
    n_runs: int,
    base_seed: int,
    jobs: int = 1,
    radius: float = 0.25,
) -> BifurcationReport:
    """Sweep the perturbation decay rate and measure how often the chase ends
    at the Rastrigin peak.

    The bifurcation point is the smallest grid value whose switch fraction
    exceeds 0.5, or None when no grid point reaches a majority.
    """
    grid = [float(v) for v in lambda_grid]
    if not grid:
        raise ConfigurationError("lambda_grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigurationError("lambda_grid must be strictly ascending")
    chase = ChaseSpec(perturbation_center=perturbation.center, radius=radius)
    fractions = np.empty(len(grid))
    stderrs = np.empty(len(grid))
    for i, lam in enumerate(grid):
        params = replace(perturbation, decay_rate=lam)
        objective = dynamic_objective(params, config.max_generation)
        result = run_ensemble(config, objective, n_runs, base_seed, jobs, chase)
        frac = sum(
            1 for lab in result.final_labels if lab is ChaseLabel.RASTRIGIN_PEAK
        ) / n_runs
        fractions[i] = frac
        stderrs[i] = math.sqrt(frac * (1.0 - frac) / n_runs)
    switched = [lam for lam, f in zip(grid, fractions) if f > 0.5]
    return BifurcationReport(
        lambda_grid=tuple(grid),
        switch_fraction=fractions,
        switch_stderr=stderrs,
        n_runs=n_runs,
        bifurcation_lambda=switched[0] if switched else None,
    )


@dataclass(frozen=True)
class PairwiseTest:
    first: str
    second: str
    z: float
    p_first_greater: float


@dataclass(frozen=True)
class VariantComparison:
    variants: tuple[str, ...]
    results: dict
    mean_final: dict
    stderr_final: dict
    pairwise: tuple[PairwiseTest, ...]


def one_sided_z(mean_a: float, se_a: float, mean_b: float, se_b: float) -> tuple[float, float]:
    """z statistic and p-value for the one-sided test mean_a > mean_b."""
    denom = math.sqrt(se_a * se_a + se_b * se_b)
    if denom == 0.0:
        z = math.inf if mean_a > mean_b else (-math.inf if mean_a < mean_b else 0.0)
    else:
        z = (mean_a - mean_b) / denom
    p = 0.5 * math.erfc(z / math.sqrt(2.0))
    return z, p


def compare_variants(
    objective: ObjectiveSpec,
    variants,
    config: EvolutionConfig,
    n_runs: int,
    base_seed: int,
    jobs: int = 1,
) -> VariantComparison:
    """Run each variant under identical budgets and seeds and tabulate final
    ensemble-mean best fitness with pairwise one-sided z-tests."""
    variants = tuple(variants)
    if not variants:
        raise ConfigurationError("variant list must be non-empty")
    results = {}
    for v in variants:
        results[v] = run_ensemble(
            replace(config, variant=v), objective, n_runs, base_seed, jobs
        )
    mean_final = {v: float(r.mean_best_fitness[-1]) for v, r in results.items()}
    stderr_final = {v: float(r.stderr_best_fitness[-1]) for v, r in results.items()}
    tests = []
    for i, a in enumerate(variants):
        for b in variants[i + 1 :]:
            z, p = one_sided_z(mean_final[a], stderr_final[a], mean_final[b], stderr_final[b])
            tests.append(PairwiseTest(first=a, second=b, z=z, p_first_greater=p))
    return VariantComparison(
        variants=variants,
        results=results,
        mean_final=mean_final,
        stderr_final=stderr_final,
        pairwise=tuple(tests),
    )


@dataclass(frozen=True)
class MetaConfig:
    """Search box and budgets for meta-optimizing the mutation schedule."""

    p_f0_bounds: tuple[float, float] = (0.0, 1.0)
    p_m0_bounds: tuple[float, float] = (0.0, 1.0)
    a_f_bounds: tuple[float, float] = (0.01, 10.0)
    a_m_bounds: tuple[float, float] = (0.01, 10.0)
    outer_population: int = 20
    outer_generations: int = 10
    inner_runs: int = 20


@dataclass(frozen=True)
class MetaResult:
    p_f0: float
    p_m0: float
    a_f: float
    a_m: float
    fitness: float
    history: RunHistory | None

    @property
    def schedule(self) -> MutationSchedule:
        return MutationSchedule(self.p_f0, self.p_m0, self.a_f, self.a_m)


def inner_schedule_fitness(
    x,
    t,
    template: EvolutionConfig,
    inner_runs: int,
    inner_seed: int,
) -> float:
    """Meta-objective: inner ensemble-mean final best fitness of a GGA on the
    static Rastrigin landscape with schedule parameters x = (p_f0, p_m0, a_f, a_m).

    A fixed inner seed makes the meta-landscape deterministic (common random
    numbers across candidates)."""
    sched = MutationSchedule(
        p_f0=float(x[0]), p_m0=float(x[1]), a_f=float(x[2]), a_m=float(x[3])
    )
    cfg = replace(template, variant="GGA", schedule=sched, learning_enabled=False)
    result = run_ensemble(cfg, static_rastrigin(), inner_runs, inner_seed, jobs=1)
    return float(result.mean_best_fitness[-1])


def meta_optimize(
    inner_template: EvolutionConfig,
    meta: MetaConfig,
    base_seed: int,
) -> MetaResult:
    """Tune (p_f0, p_m0, a_f, a_m) with an outer GGA over the inner fitness."""
    box = (meta.p_f0_bounds, meta.p_m0_bounds, meta.a_f_bounds, meta.a_m_bounds)
    for lo, hi in box:
        if lo > hi:
            raise ConfigurationError(f"invalid meta bounds [{lo}, {hi}]")
    inner_seed = (int(base_seed) ^ _META_INNER_SALT) & 0xFFFFFFFFFFFFFFFF
    if all(lo == hi for lo, hi in box):
        point = np.array([lo for lo, _ in box])
        fitness = inner_schedule_fitness(
            point, 0, inner_template, meta.inner_runs, inner_seed
        )
        return MetaResult(*point.tolist(), fitness=fitness, history=None)
    outer_config = EvolutionConfig(
        variant="GGA",
        population_size=meta.outer_population,
        max_generation=meta.outer_generations,
        dimension=4,
        lower_bounds=tuple(lo for lo, _ in box),
        upper_bounds=tuple(hi for _, hi in box),
        mutation_sigma=0.1,
        elitism_count=1,
        learning_enabled=False,
        seed=int(base_seed),
    )
    objective = ObjectiveSpec(
        name="meta_inner_gga",
        dimension=4,
        evaluate=partial(
            inner_schedule_fitness,
            template=inner_template,
            inner_runs=meta.inner_runs,
            inner_seed=inner_seed,
        ),
        params={"inner_runs": meta.inner_runs, "inner_seed": inner_seed},
    )
    history = evolve(outer_config, objective, RandomSource(base_seed).substream(0))
    best = max(history.records, key=lambda r: r.best_fitness)
    point = best.best_point
    return MetaResult(
        p_f0=float(point[0]),
        p_m0=float(point[1]),
        a_f=float(point[2]),
        a_m=float(point[3]),
        fitness=float(best.best_fitness),
        history=history,
    )
