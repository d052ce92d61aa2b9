"""Non-elitist tournament-selection GA with hitting-time planning and verification."""

from .core import (
    GAParams,
    Population,
    RunRecord,
    fitness,
    fitness_batch,
    ga_iteration,
    init_population,
    run_ga,
    run_iterated_ga,
    select_parents,
    tournament_select,
)
from .operators import (
    CrossoverConfig,
    MutationConfig,
    bitwise_mutation,
    mutation_hit_bound,
    mutation_hit_probability,
    single_point_crossover,
    uniform_neighbor_mutation,
    verify_crossover_epsilon,
)
from .problems import (
    BruteForceReport,
    CallableProblem,
    HammingNeighborhood,
    MaxCut,
    MaxSat,
    OneMax,
    OversizeError,
    as_genotype,
    bits_to_str,
    ProblemInstance,
    brute_force,
    enumerate_neighbors,
    glo_ratio,
    hamming_distance,
    is_local_optimum,
    local_search,
    make_maxcut,
    make_maxsat,
    make_onemax,
    random_maxcut,
    random_maxsat,
)
from .theory import (
    CampaignStats,
    TheoryBounds,
    certify_s,
    check_lemma_conditions,
    estimate_m,
    plan_parameters,
    planned_params,
    success_probability_bounds,
    verify_hitting_time,
)

__version__ = "0.1.0"
