"""Choosing population and tournament size.

The planner picks the smallest even lambda for which one series of m
iterations finds a local optimum with probability at least 1/e, given the
mutation constant s, the crossover constant eps and the selection ratio r.
"""

from glo_ga import (
    CrossoverConfig,
    MutationConfig,
    OneMax,
    certify_s,
    plan_parameters,
    success_probability_bounds,
)

for m, s, eps, r in [(10, 0.1, 0.5, 1.0), (16, 1 / 16, 1.0, 0.5), (100, 0.01, 0.7, 2.0)]:
    lam, k = plan_parameters(m, s, eps, r)
    b = success_probability_bounds(s, eps, r, lam, m, k)
    print(f"m={m:4d} s={s:.4f} eps={eps} r={r}: lambda={lam:6d} k={k:6d} series bound={b.series_success_lower:.4f}")

# s comes from the mutation operator and the instance
inst = OneMax(12, K=1)
for mut in (MutationConfig("bitwise"), MutationConfig("uniform_neighbor")):
    s = certify_s(mut, inst)
    eps = CrossoverConfig("single_point", 0.4).epsilon
    print(f"{mut.kind:17s} s={s:.5f} -> (lambda, k) = {plan_parameters(12, s, eps, 1.0)}")
