"""Data model: chromosomes, individuals, populations, run configuration, RNG.

Genotypes are plain 1-D float64 numpy arrays of fixed length ``dimension``.
All model objects are value types: operators return new objects instead of
mutating in place, so populations can be shared freely across readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

_SEED_MASK = 0xFFFFFFFFFFFFFFFF

VARIANTS = ("GA", "GGA", "BGGA", "LGGA")
LEARN_SOURCES = ("pre_mutation", "post_mutation")


class ConfigurationError(ValueError):
    """A configuration value violates its invariants."""


class EvaluationError(RuntimeError):
    """An objective or derivative evaluation produced a non-finite result."""


class Gender(Enum):
    MALE = "male"
    FEMALE = "female"


def as_vector(values, dimension: int | None = None) -> np.ndarray:
    """Validate and return a finite 1-D float vector."""
    vec = np.asarray(values, dtype=float)
    if vec.ndim != 1:
        raise ConfigurationError(f"expected a 1-D vector, got shape {vec.shape}")
    if dimension is not None and vec.shape[0] != dimension:
        raise ConfigurationError(
            f"vector length {vec.shape[0]} does not match dimension {dimension}"
        )
    if not np.all(np.isfinite(vec)):
        raise EvaluationError("vector contains non-finite components")
    return vec


@dataclass(frozen=True, eq=False)
class Individual:
    """A candidate solution: genotype plus optional gender and fitness caches.

    ``learned_phenotype`` is the position reached by lifetime learning.  In
    Baldwin mode it never replaces the genotype; in Lamarck mode the learning
    pass writes it back, after which genotype and phenotype coincide.
    """

    genotype: np.ndarray
    gender: Gender | None = None
    raw_fitness: float | None = None
    learned_fitness: float | None = None
    learned_phenotype: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class Population:
    members: tuple[Individual, ...]
    generation: int = 0

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class MutationSchedule:
    """Initial per-gender mutation probabilities and their decay constants."""

    p_f0: float = 0.37
    p_m0: float = 0.36
    a_f: float = 4.55
    a_m: float = 3.57


@dataclass(frozen=True)
class EvolutionConfig:
    """All knobs for one evolutionary run."""

    variant: str = "BGGA"
    population_size: int = 100
    max_generation: int = 15
    dimension: int = 2
    lower_bounds: tuple[float, ...] = (-5.12, -5.12)
    upper_bounds: tuple[float, ...] = (5.12, 5.12)
    gender_probability: float = 0.5
    schedule: MutationSchedule = field(default_factory=MutationSchedule)
    mutation_sigma: float = 0.05
    crossover_lambda_range: tuple[float, float] = (0.0, 1.0)
    crossover_convex: bool = True
    elitism_count: int = 1
    selection_window_fraction: float = 0.1
    learning_enabled: bool = True
    learn_source: str = "post_mutation"
    fd_step: float = 1e-5
    seed: int = 0

    def validate(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown variant {self.variant!r}")
        if self.population_size < 1:
            raise ConfigurationError("population_size must be positive")
        if self.max_generation < 1:
            raise ConfigurationError("max_generation must be positive")
        if self.dimension < 1:
            raise ConfigurationError("dimension must be positive")
        if (
            len(self.lower_bounds) != self.dimension
            or len(self.upper_bounds) != self.dimension
        ):
            raise ConfigurationError("bounds length must equal dimension")
        for lo, hi in zip(self.lower_bounds, self.upper_bounds):
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
                raise ConfigurationError(f"invalid bounds [{lo}, {hi}]: need lo < hi")
        if not 0.0 <= self.gender_probability <= 1.0:
            raise ConfigurationError("gender_probability must be in [0, 1]")
        s = self.schedule
        if not (0.0 <= s.p_f0 <= 1.0 and 0.0 <= s.p_m0 <= 1.0):
            raise ConfigurationError("initial mutation probabilities must be in [0, 1]")
        if s.a_f <= 0.0 or s.a_m <= 0.0:
            raise ConfigurationError("mutation decay constants must be positive")
        if self.mutation_sigma <= 0.0:
            raise ConfigurationError("mutation_sigma must be positive")
        lam_lo, lam_hi = self.crossover_lambda_range
        if not (0.0 <= lam_lo < lam_hi <= 1.0):
            raise ConfigurationError("crossover_lambda_range must nest inside (0, 1)")
        if not 0 <= self.elitism_count < self.population_size:
            raise ConfigurationError("elitism_count must satisfy 0 <= k < N")
        if self.selection_window_fraction < 0.0:
            raise ConfigurationError("selection_window_fraction must be >= 0")
        if self.learn_source not in LEARN_SOURCES:
            raise ConfigurationError(f"unknown learn_source {self.learn_source!r}")
        if self.fd_step <= 0.0:
            raise ConfigurationError("fd_step must be positive")

    def bounds_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.lower_bounds, float), np.asarray(self.upper_bounds, float)


class RandomSource:
    """Deterministic pseudo-random stream (PCG64).

    The same seed yields a bit-identical stream.  Independent substreams are
    derived by index: the stream for ensemble run ``k`` is seeded from
    ``SeedSequence((seed, k))``, so runs are reproducible and independent of
    execution order.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed) & _SEED_MASK
        self.path = tuple(int(p) for p in path)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.seed,) + self.path))
        )

    def substream(self, index: int) -> RandomSource:
        return RandomSource(self.seed, self.path + (int(index),))

    def uniform(self) -> float:
        """One uniform draw in [0, 1)."""
        return float(self._gen.random())

    def uniforms(self, size) -> np.ndarray:
        return self._gen.random(size)

    def open_uniform(self) -> float:
        """One uniform draw in the open interval (0, 1)."""
        u = float(self._gen.random())
        while u == 0.0:
            u = float(self._gen.random())
        return u

    def normal(self) -> float:
        return float(self._gen.standard_normal())

    def normals(self, size) -> np.ndarray:
        return self._gen.standard_normal(size)

    def integer(self, upper: int) -> int:
        """Uniform integer in [0, upper)."""
        return int(self._gen.integers(upper))


def init_population(config: EvolutionConfig, rng: RandomSource) -> Population:
    """Sample N genotypes uniformly per coordinate within the search bounds."""
    config.validate()
    lo, hi = config.bounds_arrays()
    u = rng.uniforms((config.population_size, config.dimension))
    genotypes = lo + u * (hi - lo)
    members = tuple(
        Individual(genotype=genotypes[i]) for i in range(config.population_size)
    )
    return Population(members=members, generation=0)


def assign_genders(pop: Population, p_g: float, rng: RandomSource) -> Population:
    """Re-draw every individual's gender: male iff p < p_g with p ~ U[0, 1)."""
    if not 0.0 <= p_g <= 1.0:
        raise ConfigurationError("gender_probability must be in [0, 1]")
    draws = rng.uniforms(len(pop))
    members = tuple(
        Individual(
            genotype=m.genotype,
            gender=Gender.MALE if p < p_g else Gender.FEMALE,
            raw_fitness=m.raw_fitness,
            learned_fitness=m.learned_fitness,
            learned_phenotype=m.learned_phenotype,
        )
        for m, p in zip(pop.members, draws)
    )
    return Population(members=members, generation=pop.generation)
