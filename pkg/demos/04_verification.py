"""Statistical campaign: hit fraction, hitting time and restart count.

Every run is seeded with base_seed + run index, so rerunning this script
prints exactly the same numbers.
"""

import math

from glo_ga import CrossoverConfig, MutationConfig, OneMax, estimate_m, planned_params, verify_hitting_time

inst = OneMax(10)
params = planned_params(inst, MutationConfig("uniform_neighbor"), CrossoverConfig("identity"), 0.5, m=estimate_m(inst))
stats = verify_hitting_time(inst, params, runs=300, base_seed=0)

print(f"lambda={params.pop_size} k={params.tournament_size} m={params.m}")
print(f"hit fraction within m : {stats.hit_fraction:.3f} +- {stats.hit_halfwidth:.3f}   (bound >= {1 / math.e:.3f})")
print(f"mean first hit        : {stats.mean_first_hit:.2f} +- {stats.first_hit_halfwidth:.2f} (bound <= {math.e * params.m:.2f})")
print(f"mean series index     : {stats.mean_eta:.3f} +- {stats.eta_halfwidth:.3f} (bound <= {math.e:.3f})")
print("violations:", stats.violations or "none")
