"""Gender genetic algorithm with Baldwin/Lamarck learning on a dynamic
perturbed-Rastrigin benchmark."""

from .engine import GenerationRecord, RunHistory, evolve, reproduce
from .experiments import (
    BifurcationReport,
    ChaseLabel,
    ChaseSpec,
    EnsembleResult,
    MetaConfig,
    MetaResult,
    VariantComparison,
    bifurcation_sweep,
    PairwiseTest,
    classify_chase,
    compare_variants,
    inner_schedule_fitness,
    meta_optimize,
    one_sided_z,
    run_ensemble,
)
from .learning import (
    DerivativeBundle,
    LearnOutcome,
    LearningMode,
    fd_gradient,
    fd_hessian,
    learn,
    learn_position,
    newton_step,
)
from .model import (
    ConfigurationError,
    EvaluationError,
    EvolutionConfig,
    Gender,
    Individual,
    MutationSchedule,
    Population,
    RandomSource,
    assign_genders,
    init_population,
)
from .objectives import (
    ObjectiveSpec,
    PerturbationParams,
    dynamic_objective,
    make_objective,
    perturbation,
    rastrigin,
    rastrigin_grad,
    rastrigin_hess,
    static_rastrigin,
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

__version__ = "0.1.0"
