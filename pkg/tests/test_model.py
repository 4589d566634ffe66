import numpy as np
import pytest

from genderga import (
    ConfigurationError,
    EvolutionConfig,
    Gender,
    MutationSchedule,
    RandomSource,
    assign_genders,
    init_population,
)


def test_init_population_respects_bounds():
    cfg = EvolutionConfig(
        population_size=3,
        dimension=2,
        lower_bounds=(-1.0, -1.0),
        upper_bounds=(1.0, 1.0),
    )
    pop = init_population(cfg, RandomSource(0))
    assert len(pop) == 3
    assert pop.generation == 0
    for ind in pop.members:
        assert ind.genotype.shape == (2,)
        assert np.all(ind.genotype >= -1.0) and np.all(ind.genotype <= 1.0)
        assert ind.gender is None


def test_init_population_degenerate_narrow_interval():
    cfg = EvolutionConfig(
        population_size=1,
        dimension=1,
        lower_bounds=(5.0,),
        upper_bounds=(5.0 + 1e-12,),
        elitism_count=0,
    )
    pop = init_population(cfg, RandomSource(3))
    gene = pop.members[0].genotype[0]
    assert 5.0 <= gene <= 5.0 + 1e-12


def test_init_population_deterministic():
    cfg = EvolutionConfig(population_size=10, seed=42)
    a = init_population(cfg, RandomSource(42))
    b = init_population(cfg, RandomSource(42))
    for x, y in zip(a.members, b.members):
        assert np.array_equal(x.genotype, y.genotype)


def test_invalid_bounds_rejected():
    cfg = EvolutionConfig(lower_bounds=(1.0, 1.0), upper_bounds=(1.0, 2.0))
    with pytest.raises(ConfigurationError):
        cfg.validate()


@pytest.mark.parametrize(
    "field,value",
    [
        ("variant", "XGA"),
        ("population_size", 0),
        ("max_generation", 0),
        ("gender_probability", 1.5),
        ("mutation_sigma", 0.0),
        ("crossover_lambda_range", (0.5, 0.5)),
        ("elitism_count", 100),
        ("learn_source", "sideways"),
    ],
)
def test_config_invariants(field, value):
    cfg = EvolutionConfig(**{field: value})
    with pytest.raises(ConfigurationError):
        cfg.validate()


def test_bad_schedule_rejected():
    cfg = EvolutionConfig(schedule=MutationSchedule(p_f0=1.2))
    with pytest.raises(ConfigurationError):
        cfg.validate()
    cfg = EvolutionConfig(schedule=MutationSchedule(a_f=0.0))
    with pytest.raises(ConfigurationError):
        cfg.validate()


def _small_pop(n=10, seed=0):
    cfg = EvolutionConfig(population_size=n, seed=seed)
    return init_population(cfg, RandomSource(seed))


def test_assign_genders_extremes():
    pop = _small_pop()
    all_f = assign_genders(pop, 0.0, RandomSource(1))
    assert all(m.gender is Gender.FEMALE for m in all_f.members)
    all_m = assign_genders(pop, 1.0, RandomSource(1))
    assert all(m.gender is Gender.MALE for m in all_m.members)


def test_assign_genders_preserves_genotypes():
    pop = _small_pop()
    gendered = assign_genders(pop, 0.5, RandomSource(7))
    for before, after in zip(pop.members, gendered.members):
        assert np.array_equal(before.genotype, after.genotype)


def test_assign_genders_binomial_concentration():
    # p_g = 0.5, N = 10000: male fraction within 3 binomial stddevs (+-0.015)
    pop = _small_pop(n=10_000, seed=5)
    gendered = assign_genders(pop, 0.5, RandomSource(11))
    frac = sum(1 for m in gendered.members if m.gender is Gender.MALE) / 10_000
    assert abs(frac - 0.5) <= 0.015


def test_random_source_determinism_and_substreams():
    a = RandomSource(123)
    b = RandomSource(123)
    assert [a.uniform() for _ in range(5)] == [b.uniform() for _ in range(5)]
    s1 = RandomSource(123).substream(4)
    s2 = RandomSource(123).substream(4)
    assert s1.uniform() == s2.uniform()
    # different indices give different streams
    other = RandomSource(123).substream(5)
    assert RandomSource(123).substream(4).uniform() != other.uniform()


def test_random_source_open_uniform_positive():
    rng = RandomSource(9)
    assert all(0.0 < rng.open_uniform() < 1.0 for _ in range(100))
