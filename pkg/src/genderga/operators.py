"""Genetic operators: adaptive mutation schedule, crossover, Gaussian mutation,
per-gender selection and elitism."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ConfigurationError, EvaluationError, MutationSchedule, RandomSource


@dataclass(frozen=True)
class MutationRates:
    """Per-individual mutation probabilities at one generation."""

    p_f: float
    p_m: float


def mutation_rates(t: int, t_max: int, schedule: MutationSchedule) -> MutationRates:
    """Exponentially decaying per-gender rates: p = p0 * exp(-a * t / t_max)."""
    if t < 0 or t > t_max:
        raise ConfigurationError(f"generation {t} outside [0, {t_max}]")
    frac = t / t_max
    return MutationRates(
        p_f=schedule.p_f0 * math.exp(-schedule.a_f * frac),
        p_m=schedule.p_m0 * math.exp(-schedule.a_m * frac),
    )


def crossover(
    x: np.ndarray,
    y: np.ndarray,
    rng: RandomSource,
    lambda_range: tuple[float, float] = (0.0, 1.0),
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    convex: bool = False,
) -> np.ndarray:
    """Arithmetic crossover z_k = x_k + lambda_k * (x_k - y_k), fresh lambda per gene.

    ``convex=True`` flips the offset sign, turning the extrapolation into the
    convex average x - lambda * (x - y).  The result is clamped to the search
    bounds when given.
    """
    if x.shape != y.shape:
        raise ConfigurationError("parents must have equal dimension")
    lo, hi = lambda_range
    lam = np.array([lo + rng.open_uniform() * (hi - lo) for _ in range(x.shape[0])])
    if convex:
        lam = -lam
    z = x + lam * (x - y)
    if lower is not None:
        z = np.clip(z, lower, upper)
    return z


def mutate(
    x: np.ndarray,
    sigma: float,
    rng: RandomSource,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
) -> np.ndarray:
    """Add independent N(0, sigma^2) noise to every coordinate, then clamp."""
    if sigma <= 0.0:
        raise ConfigurationError("mutation sigma must be positive")
    z = x + sigma * rng.normals(x.shape[0])
    if lower is not None:
        z = np.clip(z, lower, upper)
    return z


def male_selection_weights(fitness, window_fraction: float = 0.1) -> np.ndarray:
    """Proportional-selection weights, windowed to tolerate non-positive fitness.

    Raw proportional weights w_i = f_i are only well defined for positive
    fitness; the benchmark landscape is <= 0 everywhere, so weights default to
    the min-shifted form w_i = f_i - f_min + eps with eps = window_fraction *
    (f_max - f_min).  A degenerate (constant) fitness vector yields uniform
    weights.  With window_fraction == 0 and strictly positive fitness the raw
    proportional weights are used unchanged.
    """
    f = np.asarray(fitness, dtype=float)
    if f.size == 0:
        raise ConfigurationError("fitness list must be non-empty")
    if not np.all(np.isfinite(f)):
        raise EvaluationError("non-finite fitness in selection weights")
    f_min = float(f.min())
    f_max = float(f.max())
    if f_max == f_min:
        w = np.ones_like(f)
    elif window_fraction == 0.0 and f_min > 0.0:
        w = f
    else:
        w = f - f_min + window_fraction * (f_max - f_min)
    return w / w.sum()


def select_male(weights: np.ndarray, rng: RandomSource) -> int:
    """Roulette draw: index i with probability weights[i]."""
    cum = np.cumsum(weights)
    idx = int(np.searchsorted(cum, rng.uniform() * cum[-1], side="right"))
    return min(idx, len(weights) - 1)


def select_female(count: int, rng: RandomSource) -> int:
    """Uniform random index among ``count`` females."""
    if count < 1:
        raise ConfigurationError("cannot select from an empty female pool")
    return rng.integer(count)


def elites(members, fitness, k: int) -> list:
    """The k members with highest fitness, ties broken by lower index."""
    if k == 0:
        return []
    order = np.argsort(-np.asarray(fitness, dtype=float), kind="stable")
    return [members[i] for i in order[:k]]
