"""Variation operators and their exact hit probabilities.

Operators work on batches: mutation maps a ``(b, n)`` array to a new
``(b, n)`` array, crossover maps two ``(b, n)`` arrays of paired parents to
two offspring arrays. Single genotypes of shape ``(n,)`` are accepted too.
Inputs are never modified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .problems import ProblemInstance, flip_masks

MUTATION_KINDS = ("bitwise", "uniform_neighbor")
CROSSOVER_KINDS = ("single_point", "identity")


def bitwise_mutation(x, p_m: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability ``p_m``."""
    x = np.asarray(x, dtype=np.uint8)
    if not 0.0 <= p_m <= 1.0:
        raise ValueError(f"mutation probability must be in [0, 1], got {p_m}")
    flips = rng.random(x.shape) < p_m
    return x ^ flips.astype(np.uint8)


def mutation_hit_probability(delta: int, n: int, p_m):
    """Probability that bitwise mutation turns ``x`` into one fixed ``y`` at distance ``delta``.

    Exact when ``p_m`` is a :class:`fractions.Fraction`.
    """
    if not 0 <= delta <= n:
        raise ValueError(f"need 0 <= delta <= n, got delta={delta}, n={n}")
    return p_m**delta * (1 - p_m) ** (n - delta)


def mutation_hit_bound(K: int, n: int) -> float:
    """Lower bound ``(K / (e n))^K`` on the hit probability when ``p_m = K/n``.

    Valid only for ``1 <= K <= n/2``.
    """
    if K < 1 or 2 * K > n:
        raise ValueError(f"bound requires 1 <= K <= n/2, got K={K}, n={n}")
    return (K / (math.e * n)) ** K


def uniform_neighbor_mutation(
    x, instance: ProblemInstance, rng: np.random.Generator, K: int | None = None
) -> np.ndarray:
    """Replace each genotype by a uniformly drawn member of its neighborhood.

    For feasible rows the draw is over feasible neighbors only. Infeasible rows
    have no neighborhood in the problem sense, so they draw from the plain
    Hamming ball of radius K instead.
    """
    X = np.asarray(x, dtype=np.uint8)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    K = instance.K if K is None else K
    n = X.shape[1]
    masks = flip_masks(n, K)
    if masks.shape[0] == 0:
        raise ValueError("empty neighborhood")
    if instance.whole_space:
        pick = rng.integers(masks.shape[0], size=X.shape[0])
        out = X ^ masks[pick]
        return out[0] if single else out

    nbrs = np.bitwise_xor(X[:, None, :], masks[None, :, :])
    allowed = instance.violations(nbrs) == 0
    allowed |= (instance.violations(X) > 0)[:, None]
    if not allowed.any(axis=1).all():
        raise ValueError("empty neighborhood: no feasible neighbor to move to")
    keys = np.where(allowed, rng.random(allowed.shape), -1.0)
    pick = keys.argmax(axis=1)
    out = nbrs[np.arange(X.shape[0]), pick]
    return out[0] if single else out


def single_point_crossover(x, y, p_c: float, rng: np.random.Generator, cut=None):
    """One-point crossover applied to paired rows of ``x`` and ``y``.

    With probability ``p_c`` a cut ``chi`` is drawn uniformly from ``1..n-1``;
    the first child keeps ``x[:chi]`` and takes ``y[chi:]``, the second the
    reverse. Otherwise both parents are copied. ``cut`` forces the cut point
    (and the crossover branch) for every pair.
    """
    X = np.asarray(x, dtype=np.uint8)
    Y = np.asarray(y, dtype=np.uint8)
    if X.shape != Y.shape:
        raise ValueError(f"parent shapes differ: {X.shape} vs {Y.shape}")
    if not 0.0 <= p_c <= 1.0:
        raise ValueError(f"crossover probability must be in [0, 1], got {p_c}")
    single = X.ndim == 1
    if single:
        X, Y = X[None, :], Y[None, :]
    b, n = X.shape
    if cut is not None:
        if not 1 <= cut <= n - 1:
            raise ValueError(f"cut point must be in 1..{n - 1}, got {cut}")
        do = np.ones(b, dtype=bool)
        chi = np.full(b, cut)
    else:
        if n < 2 and p_c > 0:
            raise ValueError("single-point crossover needs n >= 2")
        do = rng.random(b) < p_c
        chi = rng.integers(1, n, size=b) if n >= 2 else np.ones(b, dtype=np.int64)
    swap = (np.arange(n)[None, :] >= chi[:, None]) & do[:, None]
    X2 = np.where(swap, Y, X)
    Y2 = np.where(swap, X, Y)
    if single:
        return X2[0], Y2[0]
    return X2, Y2


@dataclass(frozen=True)
class MutationConfig:
    kind: str = "bitwise"
    p_m: float | None = None  # bitwise only; None means K/n

    def __post_init__(self):
        if self.kind not in MUTATION_KINDS:
            raise ValueError(f"unknown mutation kind {self.kind!r}")
        if self.p_m is not None and not 0.0 <= self.p_m <= 1.0:
            raise ValueError(f"mutation probability must be in [0, 1], got {self.p_m}")

    def rate(self, instance: ProblemInstance) -> float:
        return instance.K / instance.n if self.p_m is None else self.p_m

    def apply(self, X, instance: ProblemInstance, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "bitwise":
            return bitwise_mutation(X, self.rate(instance), rng)
        return uniform_neighbor_mutation(X, instance, rng)


@dataclass(frozen=True)
class CrossoverConfig:
    kind: str = "single_point"
    p_c: float = 0.0

    def __post_init__(self):
        if self.kind not in CROSSOVER_KINDS:
            raise ValueError(f"unknown crossover kind {self.kind!r}")
        if self.kind == "single_point" and not 0.0 <= self.p_c < 1.0:
            raise ValueError(f"single-point crossover needs 0 <= p_c < 1, got {self.p_c}")

    @property
    def epsilon(self) -> float:
        """Certified probability that the better parent's fitness is not lost."""
        return 1.0 if self.kind == "identity" else 1.0 - self.p_c

    def apply(self, X, Y, rng: np.random.Generator):
        if self.kind == "identity":
            return np.array(X, dtype=np.uint8), np.array(Y, dtype=np.uint8)
        return single_point_crossover(X, Y, self.p_c, rng)


def verify_crossover_epsilon(
    crossover,
    fitness_fn: Callable[[np.ndarray], np.ndarray],
    n: int,
    samples: int,
    rng: np.random.Generator,
    parents: tuple[np.ndarray, np.ndarray] | None = None,
) -> float:
    """Empirical frequency of ``max(F(x'), F(y')) >= max(F(x), F(y))``.

    Parent pairs are uniform random unless ``parents`` supplies fixed
    ``(x, y)`` genotypes, in which case that pair is repeated ``samples`` times.
    ``fitness_fn`` is evaluated row-wise on a batch.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if parents is None:
        X = rng.integers(0, 2, size=(samples, n), dtype=np.uint8)
        Y = rng.integers(0, 2, size=(samples, n), dtype=np.uint8)
    else:
        X = np.tile(np.asarray(parents[0], dtype=np.uint8), (samples, 1))
        Y = np.tile(np.asarray(parents[1], dtype=np.uint8), (samples, 1))
    X2, Y2 = crossover.apply(X, Y, rng)
    before = np.maximum(fitness_fn(X), fitness_fn(Y))
    after = np.maximum(fitness_fn(X2), fitness_fn(Y2))
    return float(np.mean(after >= before))
