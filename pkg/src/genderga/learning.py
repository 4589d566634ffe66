"""Lifetime learning: one-step Newton-Raphson improvement with Baldwin
(fitness-only) and Lamarck (genotype write-back) application modes, plus
finite-difference derivative fallbacks."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .model import EvaluationError, Individual

CONDITION_LIMIT = 1e12


class LearningMode(Enum):
    BALDWIN = "baldwin"
    LAMARCK = "lamarck"


@dataclass(frozen=True)
class DerivativeBundle:
    gradient: np.ndarray
    hessian: np.ndarray


@dataclass(frozen=True)
class LearnOutcome:
    """Post-learning position and fitness; ``stepped`` marks an accepted step."""

    phenotype: np.ndarray
    fitness: float
    stepped: bool


def newton_step(x: np.ndarray, d: DerivativeBundle) -> tuple[np.ndarray, bool]:
    """Solve H * s = grad and return (x - s, True).

    A singular or ill-conditioned Hessian (condition estimate above 1e12)
    yields (x, False) instead of a step.
    """
    g = d.gradient
    h = d.hessian
    n = x.shape[0]
    if n == 2:
        # scalar fast path: this runs once per individual per generation
        a, b = float(h[0, 0]), float(h[0, 1])
        c, e = float(h[1, 0]), float(h[1, 1])
        gx, gy = float(g[0]), float(g[1])
        if not (
            math.isfinite(a)
            and math.isfinite(b)
            and math.isfinite(c)
            and math.isfinite(e)
            and math.isfinite(gx)
            and math.isfinite(gy)
        ):
            raise EvaluationError("non-finite derivative entries in Newton step")
        det = a * e - b * c
        if det == 0.0:
            return x, False
        # cond_2 = sigma_max / sigma_min = sigma_max^2 / |det| for a 2x2 matrix
        s = a * a + b * b + c * c + e * e
        root = math.sqrt(max(s * s - 4.0 * det * det, 0.0))
        smax_sq = 0.5 * (s + root)
        if smax_sq / abs(det) > CONDITION_LIMIT:
            return x, False
        ox = float(x[0]) - (e * gx - b * gy) / det
        oy = float(x[1]) - (a * gy - c * gx) / det
        if not (math.isfinite(ox) and math.isfinite(oy)):
            return x, False
        return np.array([ox, oy]), True
    else:
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(h))):
            raise EvaluationError("non-finite derivative entries in Newton step")
        try:
            cond = np.linalg.cond(h)
        except np.linalg.LinAlgError:
            return x, False
        if not np.isfinite(cond) or cond > CONDITION_LIMIT:
            return x, False
        step = np.linalg.solve(h, g)
    out = x - step
    if not np.all(np.isfinite(out)):
        return x, False
    return out, True


def fd_gradient(objective, x: np.ndarray, t: int, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient with per-coordinate step h * max(1, |x_k|)."""
    n = x.shape[0]
    grad = np.empty(n)
    for k in range(n):
        hk = h * max(1.0, abs(float(x[k])))
        xp = x.copy()
        xm = x.copy()
        xp[k] += hk
        xm[k] -= hk
        grad[k] = (objective.evaluate(xp, t) - objective.evaluate(xm, t)) / (2.0 * hk)
    return grad


def fd_hessian(objective, x: np.ndarray, t: int, h: float = 1e-5) -> np.ndarray:
    """Central second differences, symmetrized as (A + A^T) / 2."""
    n = x.shape[0]
    steps = [h * max(1.0, abs(float(x[k]))) for k in range(n)]
    f0 = objective.evaluate(x, t)
    hess = np.empty((n, n))
    for k in range(n):
        xp = x.copy()
        xm = x.copy()
        xp[k] += steps[k]
        xm[k] -= steps[k]
        hess[k, k] = (
            objective.evaluate(xp, t) - 2.0 * f0 + objective.evaluate(xm, t)
        ) / steps[k] ** 2
    for k in range(n):
        for j in range(k + 1, n):
            hk, hj = steps[k], steps[j]
            xpp = x.copy()
            xpm = x.copy()
            xmp = x.copy()
            xmm = x.copy()
            xpp[k] += hk
            xpp[j] += hj
            xpm[k] += hk
            xpm[j] -= hj
            xmp[k] -= hk
            xmp[j] += hj
            xmm[k] -= hk
            xmm[j] -= hj
            hess[k, j] = (
                objective.evaluate(xpp, t)
                - objective.evaluate(xpm, t)
                - objective.evaluate(xmp, t)
                + objective.evaluate(xmm, t)
            ) / (4.0 * hk * hj)
            hess[j, k] = hess[k, j]
    return 0.5 * (hess + hess.T)


def derivative_bundle(objective, x: np.ndarray, t: int, fd_step: float = 1e-5) -> DerivativeBundle:
    """Analytic derivatives when the objective provides them, else central FD."""
    if objective.gradient is not None:
        grad = objective.gradient(x, t)
    else:
        grad = fd_gradient(objective, x, t, fd_step)
    if objective.hessian is not None:
        hess = objective.hessian(x, t)
    else:
        hess = fd_hessian(objective, x, t, fd_step)
    return DerivativeBundle(gradient=np.asarray(grad, float), hessian=np.asarray(hess, float))


def learn_position(
    x: np.ndarray,
    objective,
    t: int,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    fd_step: float = 1e-5,
    raw_fitness: float | None = None,
) -> LearnOutcome:
    """One improvement-gated Newton step from x.

    The candidate is accepted only if it stays within the search bounds and
    strictly improves the objective; otherwise the outcome keeps the original
    position and fitness, so learning never degrades fitness.
    """
    raw = float(objective.evaluate(x, t)) if raw_fitness is None else float(raw_fitness)
    if not math.isfinite(raw):
        raise EvaluationError(f"non-finite objective value at t={t}")
    candidate, moved = newton_step(x, derivative_bundle(objective, x, t, fd_step))
    if moved:
        inside = lower is None or bool(
            np.all(candidate >= lower) and np.all(candidate <= upper)
        )
        if inside:
            cand_fit = float(objective.evaluate(candidate, t))
            if math.isfinite(cand_fit) and cand_fit > raw:
                return LearnOutcome(phenotype=candidate, fitness=cand_fit, stepped=True)
    return LearnOutcome(phenotype=x, fitness=raw, stepped=False)


def learn(
    ind: Individual,
    objective,
    t: int,
    mode: LearningMode,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    fd_step: float = 1e-5,
) -> Individual:
    """Apply one learning step to an individual.

    Baldwin mode keeps the genotype and records the learned phenotype and
    fitness; Lamarck mode writes the phenotype back into the genotype.
    """
    raw = ind.raw_fitness
    if raw is None:
        raw = float(objective.evaluate(ind.genotype, t))
        if not math.isfinite(raw):
            raise EvaluationError(f"non-finite objective value at t={t}")
    out = learn_position(ind.genotype, objective, t, lower, upper, fd_step, raw)
    if mode is LearningMode.LAMARCK:
        return replace(
            ind,
            genotype=out.phenotype,
            raw_fitness=out.fitness,
            learned_fitness=out.fitness,
            learned_phenotype=out.phenotype,
        )
    return replace(
        ind,
        raw_fitness=raw,
        learned_fitness=out.fitness,
        learned_phenotype=out.phenotype,
    )
