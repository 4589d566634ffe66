import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genderga import (
    ConfigurationError,
    MutationSchedule,
    RandomSource,
    crossover,
    elites,
    male_selection_weights,
    mutate,
    mutation_rates,
    select_female,
    select_male,
)

BASELINE_SCHEDULE = MutationSchedule(p_f0=0.37, p_m0=0.36, a_f=4.55, a_m=3.57)


class ScriptedRng:
    """Stand-in random source replaying fixed draws."""

    def __init__(self, uniforms=(), normals=(), integers=()):
        self._uniforms = list(uniforms)
        self._normals = list(normals)
        self._integers = list(integers)

    def uniform(self):
        return self._uniforms.pop(0)

    def open_uniform(self):
        return self._uniforms.pop(0)

    def normals(self, size):
        out = np.array(self._normals[:size], dtype=float)
        del self._normals[:size]
        return out

    def integer(self, upper):
        return self._integers.pop(0)


# --- mutation schedule -------------------------------------------------


def test_rates_at_t0_are_initial_values():
    r = mutation_rates(0, 15, BASELINE_SCHEDULE)
    assert r.p_f == 0.37
    assert r.p_m == 0.36


def test_rates_at_t_max():
    r = mutation_rates(15, 15, BASELINE_SCHEDULE)
    assert r.p_f == pytest.approx(0.37 * math.exp(-4.55), rel=1e-15)
    assert r.p_f == pytest.approx(0.0039099, abs=5e-7)
    assert r.p_m == pytest.approx(0.36 * math.exp(-3.57), rel=1e-15)


def test_rates_midpoint_between_endpoints():
    start = mutation_rates(0, 10, BASELINE_SCHEDULE)
    mid = mutation_rates(5, 10, BASELINE_SCHEDULE)
    end = mutation_rates(10, 10, BASELINE_SCHEDULE)
    assert end.p_f < mid.p_f < start.p_f
    assert mid.p_f == pytest.approx(0.37 * math.exp(-4.55 / 2), rel=1e-15)


def test_rates_strictly_decreasing_and_bounded():
    values = [mutation_rates(t, 15, BASELINE_SCHEDULE) for t in range(16)]
    for prev, cur in zip(values, values[1:]):
        assert cur.p_f < prev.p_f
        assert cur.p_m < prev.p_m
    assert all(0.0 < v.p_f <= 0.37 and 0.0 < v.p_m <= 0.36 for v in values)


def test_rates_outside_range_rejected():
    with pytest.raises(ConfigurationError):
        mutation_rates(16, 15, BASELINE_SCHEDULE)


# --- crossover ----------------------------------------------------------


def test_crossover_forced_lambda_half():
    rng = ScriptedRng(uniforms=[0.5, 0.5])
    z = crossover(np.array([1.0, 1.0]), np.array([0.0, 0.0]), rng)
    assert np.array_equal(z, np.array([1.5, 1.5]))


def test_crossover_identical_parents_is_identity():
    x = np.array([0.3, -0.7])
    rng = ScriptedRng(uniforms=[0.9, 0.1])
    assert np.array_equal(crossover(x, x.copy(), rng), x)


def test_crossover_hand_value():
    rng = ScriptedRng(uniforms=[0.25])
    z = crossover(np.array([0.0]), np.array([2.0]), rng)
    assert z[0] == pytest.approx(-0.5, abs=0)


def test_crossover_convex_form():
    rng = ScriptedRng(uniforms=[0.25])
    z = crossover(np.array([0.0]), np.array([2.0]), rng, convex=True)
    assert z[0] == pytest.approx(0.5, abs=0)


def test_crossover_clamps_to_bounds():
    rng = ScriptedRng(uniforms=[0.99, 0.99])
    z = crossover(
        np.array([1.0, 1.0]),
        np.array([-1.0, -1.0]),
        rng,
        lower=np.array([-1.5, -1.5]),
        upper=np.array([1.5, 1.5]),
    )
    assert np.array_equal(z, np.array([1.5, 1.5]))


def test_crossover_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        crossover(np.zeros(2), np.zeros(3), ScriptedRng(uniforms=[0.5] * 3))


@given(
    st.lists(st.floats(-5, 5), min_size=2, max_size=2),
    st.lists(st.floats(-5, 5), min_size=2, max_size=2),
    st.lists(st.floats(0.001, 0.999), min_size=2, max_size=2),
)
def test_crossover_collinearity(xs, ys, lams):
    # per coordinate: z_k - x_k == lambda_k * (x_k - y_k) exactly, pre-clamping
    x = np.array(xs)
    y = np.array(ys)
    z = crossover(x, y, ScriptedRng(uniforms=list(lams)))
    assert np.array_equal(z, x + np.array(lams) * (x - y))


# --- mutation -----------------------------------------------------------


def test_mutate_zero_noise_is_identity():
    x = np.array([0.5, -0.5])
    z = mutate(x, 0.05, ScriptedRng(normals=[0.0, 0.0]))
    assert np.array_equal(z, x)


def test_mutate_clamps_at_corner():
    x = np.array([1.0, 1.0])
    z = mutate(
        x,
        1.0,
        ScriptedRng(normals=[100.0, -100.0]),
        lower=np.array([-1.0, -1.0]),
        upper=np.array([1.0, 1.0]),
    )
    assert np.array_equal(z, np.array([1.0, -1.0]))


def test_mutate_gaussian_moments():
    # sigma = 0.05, 1e5 coordinates: mean within 3 sigma/sqrt(n), stddev within 2%
    rng = RandomSource(2024)
    n = 100_000
    base = np.zeros(n)
    out = mutate(base, 0.05, rng)
    assert abs(out.mean()) <= 3 * 0.05 / math.sqrt(n)
    assert abs(out.std() - 0.05) <= 0.02 * 0.05


# --- selection ----------------------------------------------------------


def test_weights_raw_proportional_when_positive_and_unwindowed():
    w = male_selection_weights([1.0, 1.0, 2.0], window_fraction=0.0)
    assert np.allclose(w, [0.25, 0.25, 0.5], atol=1e-15)


def test_weights_windowed_shift_hand_value():
    # fitness (-3, -1), eps_frac 0.2: eps = 0.4, weights prop (0.4, 2.4)
    w = male_selection_weights([-3.0, -1.0], window_fraction=0.2)
    assert np.allclose(w, [1.0 / 7.0, 6.0 / 7.0], atol=1e-12)


def test_weights_degenerate_constant_fitness_uniform():
    w = male_selection_weights([4.2] * 5, window_fraction=0.1)
    assert np.allclose(w, 0.2, atol=1e-15)


def test_weights_normalized_and_shift_invariant():
    f = np.array([-7.0, -2.0, 0.5, 3.0])
    w = male_selection_weights(f, window_fraction=0.1)
    assert abs(w.sum() - 1.0) <= 1e-12
    shifted = male_selection_weights(f + 123.456, window_fraction=0.1)
    assert np.allclose(w, shifted, atol=1e-12)


def test_weights_empty_rejected():
    with pytest.raises(ConfigurationError):
        male_selection_weights([])


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=20))
def test_weights_always_a_distribution(fitness):
    w = male_selection_weights(fitness, window_fraction=0.1)
    assert np.all(w >= 0)
    assert abs(w.sum() - 1.0) <= 1e-12


def test_select_male_point_mass():
    rng = RandomSource(5)
    w = np.array([1.0, 0.0])
    assert all(select_male(w, rng) == 0 for _ in range(50))


def test_select_male_single():
    assert select_male(np.array([1.0]), RandomSource(0)) == 0


def test_select_male_chi_squared():
    # 1e5 roulette draws against weights (0.25, 0.25, 0.5): chi2(2) at 99%
    weights = np.array([0.25, 0.25, 0.5])
    rng = RandomSource(31337)
    counts = np.zeros(3)
    n = 100_000
    for _ in range(n):
        counts[select_male(weights, rng)] += 1
    expected = weights * n
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 <= 9.210340371976184  # chi2(2) 99th percentile


def test_select_female_uniform_frequencies():
    rng = RandomSource(77)
    n = 100_000
    counts = np.zeros(4)
    for _ in range(n):
        counts[select_female(4, rng)] += 1
    assert np.all(np.abs(counts / n - 0.25) <= 0.01)


def test_select_female_single_and_empty():
    assert select_female(1, RandomSource(0)) == 0
    with pytest.raises(ConfigurationError):
        select_female(0, RandomSource(0))


def test_select_female_deterministic():
    assert select_female(10, RandomSource(3)) == select_female(10, RandomSource(3))


# --- elitism ------------------------------------------------------------


def test_elites_empty():
    assert elites(["a", "b"], [1.0, 2.0], 0) == []


def test_elites_argmax():
    assert elites(["a", "b", "c"], [3.0, 9.0, 1.0], 1) == ["b"]


def test_elites_tie_breaks_by_lower_index():
    assert elites(["a", "b"], [5.0, 5.0], 1) == ["a"]


def test_elites_top_k_order():
    assert elites(list("abcd"), [1.0, 4.0, 4.0, 2.0], 3) == ["b", "c", "d"]
