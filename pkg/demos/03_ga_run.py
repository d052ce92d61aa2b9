"""A single GA run and an iterated (restarting) run on a random Max-Cut graph.

With planner-sized populations on small graphs the first population usually
already contains a local optimum, so this uses a larger graph and a modest
hand-picked population to make the search visible.
"""

import numpy as np

from glo_ga import (
    CrossoverConfig,
    GAParams,
    MutationConfig,
    bits_to_str,
    check_lemma_conditions,
    init_population,
    random_maxcut,
    run_ga,
    run_iterated_ga,
)

inst = random_maxcut(60, np.random.default_rng(7), p=0.2)
m = inst.objective_upper_bound  # declared bound: total edge weight
params = GAParams(
    pop_size=40, tournament_size=20, m=m,
    mutation=MutationConfig("bitwise"), crossover=CrossoverConfig("single_point", 0.5), r=0.5,
)
ok, bad = check_lemma_conditions(40, 20, 0.5, m, 1 / (np.e * inst.n), 0.5, True)
print(f"n={inst.n} edges={len(inst.edges)} m={m}; planner conditions met: {ok} {bad}")

rng = np.random.default_rng(0)
pop = init_population(inst, params.pop_size, "uniform", rng)
rec = run_ga(inst, params, pop, m, rng)
print(f"single run: first local optimum at iteration {rec.first_hit}")
print("  best fitness every 2 iterations:", rec.best_fitness[: (rec.first_hit or m) + 1 : 2])

rec = run_iterated_ga(inst, params, restart_budget=20, rng=np.random.default_rng(1))
print(f"iterated run: series {rec.eta}, {rec.total_iterations} iterations in total")
print(f"  local optimum {bits_to_str(rec.hit_genotype)} cuts weight {inst.value(rec.hit_genotype)}")
