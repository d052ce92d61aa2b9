"""Brute-force landscapes, local search and the ratio of local optima.

On small instances every genotype can be enumerated. This gives the exact
number m of non-optimal objective values, the full set of 1-flip local
optima, and how far the worst of them is from the global optimum.
"""

import numpy as np

from glo_ga import brute_force, glo_ratio, local_search, random_maxcut, random_maxsat

gen = np.random.default_rng(3)
for inst in (random_maxcut(10, gen, max_weight=3), random_maxsat(10, 30, gen, width=2)):
    rep = brute_force(inst)
    ratios = [glo_ratio(inst, x, rep.global_optimum_value) for x in rep.local_optima]
    print(f"{type(inst).__name__}: optimum={rep.global_optimum_value} m={rep.m_exact} "
          f"local optima={len(rep.local_optima)} worst ratio={float(max(ratios)):.3f}")

    x0 = gen.integers(0, 2, inst.n, dtype=np.uint8)
    for rule in ("first_improving", "best_improving"):
        x, steps = local_search(inst, x0, rule=rule)
        print(f"  {rule:16s}: value {inst.value(x0)} -> {inst.value(x)} in {steps} steps")
