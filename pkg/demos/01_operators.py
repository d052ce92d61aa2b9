"""Mutation and crossover, measured against their closed-form constants.

Bitwise mutation at rate K/n hits any fixed genotype within distance K with
probability at least (K/(e n))^K. Single-point crossover with probability P_c
keeps a child at least as fit as the better parent at least 1 - P_c of the time.
"""

import numpy as np

from glo_ga import (
    CrossoverConfig,
    bitwise_mutation,
    mutation_hit_bound,
    mutation_hit_probability,
    verify_crossover_epsilon,
)

rng = np.random.default_rng(1)
n, K = 20, 2

print("exact hit probability vs. bound, n=20, rate K/n")
for delta in range(K + 1):
    print(f"  delta={delta}: {mutation_hit_probability(delta, n, K / n):.6e}")
print(f"  bound:   {mutation_hit_bound(K, n):.6e}")

# empirical check of the delta=2 case
x = np.zeros(n, dtype=np.uint8)
target = x.copy()
target[[4, 15]] = 1
X = bitwise_mutation(np.broadcast_to(x, (200_000, n)), K / n, rng)
print(f"  sampled: {np.mean((X == target).all(axis=1)):.6e}")

onemax = lambda X: np.asarray(X).sum(axis=-1)
print("\ncrossover success frequency on OneMax n=16")
for p_c in (0.3, 0.6, 0.9):
    cfg = CrossoverConfig("single_point", p_c)
    freq = verify_crossover_epsilon(cfg, onemax, 16, 50_000, rng)
    print(f"  P_c={p_c}: claimed eps={cfg.epsilon:.2f}, observed {freq:.4f}")
