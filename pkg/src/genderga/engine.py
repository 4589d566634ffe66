"""The generational evolution loop, parameterized over the four variants.

Variants:
  GA    plain genetic algorithm: no gender, proportional selection for both
        parents, single mutation schedule, no learning;
  GGA   gendered selection and per-gender mutation rates, no learning;
  BGGA  GGA plus Baldwin learning (learned fitness guides selection, genotypes
        stay untouched);
  LGGA  GGA plus Lamarck learning (learned phenotypes written back).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .learning import LearningMode, learn
from .model import (
    ConfigurationError,
    EvaluationError,
    EvolutionConfig,
    Gender,
    Individual,
    Population,
    RandomSource,
    init_population,
)
from .operators import (
    MutationRates,
    crossover,
    elites,
    male_selection_weights,
    mutate,
    mutation_rates,
    select_female,
    select_male,
)


@dataclass(frozen=True)
class GenerationRecord:
    t: int
    best_fitness: float
    best_point: np.ndarray
    mean_fitness: float
    rates: MutationRates
    male_count: int


@dataclass(frozen=True)
class RunHistory:
    records: tuple[GenerationRecord, ...]
    config_digest: str
    seed: int
    final_population: Population
    fallback_matings: int = 0


def config_digest(config: EvolutionConfig) -> str:
    payload = json.dumps(asdict(config), sort_keys=True, default=str)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _evaluate_all(objective, genotypes, t: int) -> np.ndarray:
    out = np.empty(len(genotypes))
    for i, g in enumerate(genotypes):
        try:
            v = float(objective.evaluate(g, t))
        except Exception as exc:
            raise EvaluationError(
                f"objective evaluation failed at generation {t}, individual {i}: {exc}"
            ) from exc
        if not math.isfinite(v):
            raise EvaluationError(
                f"non-finite objective value at generation {t}, individual {i}"
            )
        out[i] = v
    return out


def _record(t, fit, points, rates, male_count) -> GenerationRecord:
    best = int(np.argmax(fit))
    return GenerationRecord(
        t=t,
        best_fitness=float(fit[best]),
        best_point=np.array(points[best], copy=True),
        mean_fitness=float(fit.mean()),
        rates=rates,
        male_count=male_count,
    )


def reproduce(
    pool: list[Individual],
    fitness: np.ndarray,
    config: EvolutionConfig,
    rng: RandomSource,
    lower: np.ndarray,
    upper: np.ndarray,
) -> tuple[list[Individual], int]:
    """Elitism plus selection and mating; returns (next members, fallback count).

    Each offspring comes from one male (roulette over windowed proportional
    weights) and one female (uniform).  A side with no members falls back to
    proportional selection over the whole pool for that parent role; plain GA
    uses the whole-pool path for both parents by construction.
    """
    n_total = config.population_size
    elite_members = elites(pool, fitness, config.elitism_count)
    new_members: list[Individual] = [Individual(genotype=e.genotype) for e in elite_members]

    if config.variant == "GA":
        male_idx: list[int] = []
        female_idx: list[int] = []
    else:
        male_idx = [i for i, m in enumerate(pool) if m.gender is Gender.MALE]
        female_idx = [i for i, m in enumerate(pool) if m.gender is Gender.FEMALE]

    whole_weights = male_selection_weights(fitness, config.selection_window_fraction)
    male_weights = (
        male_selection_weights(fitness[male_idx], config.selection_window_fraction)
        if male_idx
        else None
    )

    fallbacks = 0
    count_fallbacks = config.variant != "GA"
    for _ in range(n_total - len(new_members)):
        if male_weights is not None:
            father = male_idx[select_male(male_weights, rng)]
        else:
            father = select_male(whole_weights, rng)
            fallbacks += count_fallbacks
        if female_idx:
            mother = female_idx[select_female(len(female_idx), rng)]
        else:
            mother = select_male(whole_weights, rng)
            fallbacks += count_fallbacks
        child = crossover(
            pool[father].genotype,
            pool[mother].genotype,
            rng,
            config.crossover_lambda_range,
            lower,
            upper,
            config.crossover_convex,
        )
        new_members.append(Individual(genotype=child))
    return new_members, fallbacks


def evolve(
    config: EvolutionConfig,
    objective,
    rng: RandomSource,
    on_learned=None,
) -> RunHistory:
    """Run the full generational loop and return the per-generation history.

    The history has max_generation + 1 records: record 0 holds the raw fitness
    of the initial population, record t+1 the fitness used for selection at
    loop iteration t (learned fitness for BGGA/LGGA, raw otherwise) together
    with the position achieving it.  ``on_learned(t, learned_members)``, when
    given, observes the population right after each learning pass.
    """
    config.validate()
    if objective.dimension != config.dimension:
        raise ConfigurationError(
            f"objective dimension {objective.dimension} != config dimension {config.dimension}"
        )
    lower, upper = config.bounds_arrays()
    n_pop = config.population_size
    t_max = config.max_generation
    sched = config.schedule
    gendered = config.variant != "GA"
    learning = config.variant in ("BGGA", "LGGA") and config.learning_enabled
    mode = LearningMode.LAMARCK if config.variant == "LGGA" else LearningMode.BALDWIN

    members = list(init_population(config, rng).members)

    fits0 = _evaluate_all(objective, [m.genotype for m in members], 0)
    records = [
        _record(0, fits0, [m.genotype for m in members], mutation_rates(0, t_max, sched), 0)
    ]
    fallback_matings = 0

    for t in range(t_max):
        # gender determination (re-drawn every generation)
        if gendered:
            draws = rng.uniforms(n_pop)
            genders = [
                Gender.MALE if p < config.gender_probability else Gender.FEMALE
                for p in draws
            ]
            male_count = sum(1 for g in genders if g is Gender.MALE)
        else:
            genders = [None] * n_pop
            male_count = 0

        rates = mutation_rates(t, t_max, sched)

        # gender-based mutation; plain GA uses the female schedule for everyone
        gate = rng.uniforms(n_pop)
        mutated: list[Individual] = []
        for i, m in enumerate(members):
            rate = rates.p_m if genders[i] is Gender.MALE else rates.p_f
            if gate[i] < rate:
                geno = mutate(m.genotype, config.mutation_sigma, rng, lower, upper)
            else:
                geno = m.genotype
            mutated.append(Individual(genotype=geno, gender=genders[i]))

        # learning pass and fitness evaluation
        if learning:
            if config.learn_source == "post_mutation":
                source = mutated
            else:
                source = [
                    Individual(genotype=m.genotype, gender=genders[i])
                    for i, m in enumerate(members)
                ]
            raw = _evaluate_all(objective, [m.genotype for m in source], t)
            try:
                learned = [
                    learn(
                        Individual(
                            genotype=m.genotype, gender=m.gender, raw_fitness=raw[i]
                        ),
                        objective,
                        t,
                        mode,
                        lower,
                        upper,
                        config.fd_step,
                    )
                    for i, m in enumerate(source)
                ]
            except EvaluationError as exc:
                raise EvaluationError(f"learning pass failed at generation {t}: {exc}") from exc
            if on_learned is not None:
                on_learned(t, learned)
            fit = np.array([m.learned_fitness for m in learned])
            pool = learned if mode is LearningMode.LAMARCK else mutated
            points = [m.learned_phenotype for m in learned]
        else:
            fit = _evaluate_all(objective, [m.genotype for m in mutated], t)
            pool = mutated
            points = [m.genotype for m in mutated]

        records.append(_record(t + 1, fit, points, rates, male_count))

        members, fb = reproduce(pool, fit, config, rng, lower, upper)
        fallback_matings += fb

    return RunHistory(
        records=tuple(records),
        config_digest=config_digest(config),
        seed=rng.seed,
        final_population=Population(members=tuple(members), generation=t_max),
        fallback_matings=fallback_matings,
    )
