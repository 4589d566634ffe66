"""Benchmark landscapes: negated Rastrigin, a decaying Gaussian perturbation,
their time-dependent composite, and closed-form derivatives.

All landscapes are maximization problems.  The negated Rastrigin has its
global maximum 0 at the origin; the dynamic composite adds a Gaussian bump
whose amplitude decays exponentially in time, producing two competing peaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from .model import ConfigurationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ObjectiveSpec:
    """Evaluatable scalar field over (vector, generation).

    ``evaluate(x, t)`` must be deterministic and pure for fixed inputs;
    ``gradient`` and ``hessian`` are optional analytic derivatives with the
    same signature.
    """

    name: str
    dimension: int
    evaluate: Callable[[np.ndarray, int], float]
    gradient: Callable[[np.ndarray, int], np.ndarray] | None = None
    hessian: Callable[[np.ndarray, int], np.ndarray] | None = None
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PerturbationParams:
    """Gaussian bump: amplitude * exp(-decay_rate*t/t_max) * exp(-r^2/(2 sigma^2)).

    ``amplitude`` is a calibration default, not a reported value; it must
    exceed 1 for the bump at (0, 1) to initially dominate the Rastrigin peak.
    """

    amplitude: float = 2.0
    decay_rate: float = 0.5
    sigma_sq: float = 0.025
    center: tuple[float, float] = (0.0, 1.0)

    def validate(self) -> None:
        if self.sigma_sq <= 0.0:
            raise ConfigurationError("sigma_sq must be positive")
        if self.decay_rate < 0.0:
            raise ConfigurationError("decay_rate must be nonnegative")


def rastrigin(x) -> float:
    """Negated 2-D Rastrigin: -(20 + x^2 + y^2 - 10 (cos 2 pi x + cos 2 pi y))."""
    x0, x1 = float(x[0]), float(x[1])
    # grouped sums keep the coordinate-swap symmetry exact in floating point
    return -(
        20.0
        + (x0 * x0 + x1 * x1)
        - 10.0 * (math.cos(TWO_PI * x0) + math.cos(TWO_PI * x1))
    )


def rastrigin_grad(x) -> np.ndarray:
    x0, x1 = float(x[0]), float(x[1])
    return np.array(
        [
            -(2.0 * x0 + 20.0 * math.pi * math.sin(TWO_PI * x0)),
            -(2.0 * x1 + 20.0 * math.pi * math.sin(TWO_PI * x1)),
        ]
    )


def rastrigin_hess(x) -> np.ndarray:
    x0, x1 = float(x[0]), float(x[1])
    c = 40.0 * math.pi * math.pi
    return np.array(
        [
            [-(2.0 + c * math.cos(TWO_PI * x0)), 0.0],
            [0.0, -(2.0 + c * math.cos(TWO_PI * x1))],
        ]
    )


def perturbation(x, t: int, t_max: int, p: PerturbationParams) -> float:
    """Radially symmetric Gaussian bump with exponentially decaying amplitude."""
    dx = float(x[0]) - p.center[0]
    dy = float(x[1]) - p.center[1]
    return (
        p.amplitude
        * math.exp(-p.decay_rate * t / t_max)
        * math.exp(-(dx * dx + dy * dy) / (2.0 * p.sigma_sq))
    )


def perturbation_grad(x, t: int, t_max: int, p: PerturbationParams) -> np.ndarray:
    g = perturbation(x, t, t_max, p)
    dx = float(x[0]) - p.center[0]
    dy = float(x[1]) - p.center[1]
    return np.array([-g * dx / p.sigma_sq, -g * dy / p.sigma_sq])


def perturbation_hess(x, t: int, t_max: int, p: PerturbationParams) -> np.ndarray:
    g = perturbation(x, t, t_max, p)
    dx = float(x[0]) - p.center[0]
    dy = float(x[1]) - p.center[1]
    s2 = p.sigma_sq
    return g * np.array(
        [
            [dx * dx / s2**2 - 1.0 / s2, dx * dy / s2**2],
            [dx * dy / s2**2, dy * dy / s2**2 - 1.0 / s2],
        ]
    )


def _static_eval(x, t):
    return rastrigin(x)


def _static_grad(x, t):
    return rastrigin_grad(x)


def _static_hess(x, t):
    return rastrigin_hess(x)


def static_rastrigin() -> ObjectiveSpec:
    """The time-invariant negated Rastrigin landscape."""
    return ObjectiveSpec(
        name="static_rastrigin",
        dimension=2,
        evaluate=_static_eval,
        gradient=_static_grad,
        hessian=_static_hess,
    )


def _dynamic_eval(x, t, params, t_max):
    return rastrigin(x) + perturbation(x, t, t_max, params)


def _dynamic_grad(x, t, params, t_max):
    return rastrigin_grad(x) + perturbation_grad(x, t, t_max, params)


def _dynamic_hess(x, t, params, t_max):
    return rastrigin_hess(x) + perturbation_hess(x, t, t_max, params)


def dynamic_objective(params: PerturbationParams, t_max: int) -> ObjectiveSpec:
    """Negated Rastrigin plus the decaying Gaussian bump (additive composite)."""
    params.validate()
    if t_max < 1:
        raise ConfigurationError("t_max must be positive")
    return ObjectiveSpec(
        name="perturbed_rastrigin",
        dimension=2,
        evaluate=partial(_dynamic_eval, params=params, t_max=t_max),
        gradient=partial(_dynamic_grad, params=params, t_max=t_max),
        hessian=partial(_dynamic_hess, params=params, t_max=t_max),
        params={
            "amplitude": params.amplitude,
            "decay_rate": params.decay_rate,
            "sigma_sq": params.sigma_sq,
            "center": list(params.center),
            "t_max": t_max,
        },
    )


def make_objective(name: str, t_max: int, **params) -> ObjectiveSpec:
    """Build a registered objective by name."""
    if name == "static_rastrigin":
        if params:
            raise ConfigurationError("static_rastrigin takes no parameters")
        return static_rastrigin()
    if name == "perturbed_rastrigin":
        try:
            p = PerturbationParams(**params)
        except TypeError as exc:
            raise ConfigurationError(f"bad perturbation parameters: {exc}") from exc
        return dynamic_objective(p, t_max)
    raise ConfigurationError(f"unknown objective {name!r}")


OBJECTIVE_NAMES = ("static_rastrigin", "perturbed_rastrigin")
