"""Pseudo-boolean optimization problems, Hamming neighborhoods and local search.

Every problem is a maximization problem over genotypes in ``{0,1}^n``.
Genotypes are ``uint8`` numpy arrays; most functions accept either a single
genotype of shape ``(n,)`` or a batch of shape ``(b, n)``.

A problem exposes three vectorized pieces:

* ``objective(X)``  -- the integer objective ``f`` (meaningful on feasible rows)
* ``violations(X)`` -- a non-negative constraint-violation count, zero iff feasible
* ``neighborhood``  -- a K-bounded Hamming neighborhood

Constrained problems subclass :class:`ProblemInstance` and override
:meth:`ProblemInstance.violations`; nothing else needs to change.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

BRUTE_FORCE_MAX_N = 24
_CHUNK = 1 << 14


class OversizeError(ValueError):
    """Raised when exhaustive enumeration is requested above the size guard."""


def as_genotype(x, n: int | None = None) -> np.ndarray:
    """Coerce a bit sequence (list, string of 0/1, array) to a uint8 array."""
    if isinstance(x, str):
        x = [int(c) for c in x]
    arr = np.asarray(x, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError(f"genotype must be one-dimensional, got shape {arr.shape}")
    if np.any(arr > 1):
        raise ValueError("genotype entries must be 0 or 1")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"genotype has length {arr.shape[0]}, expected {n}")
    return arr


def bits_to_str(x: np.ndarray) -> str:
    return "".join(str(int(b)) for b in x)


def hamming_distance(x, y) -> int:
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return int(np.count_nonzero(x != y))


@lru_cache(maxsize=64)
def flip_masks(n: int, K: int) -> np.ndarray:
    """All flip patterns of 1..K positions, lexicographic by flipped-index set.

    Returns a read-only ``(M, n)`` uint8 array with ``M = sum_{i<=K} C(n, i)``.
    """
    subsets = [
        c for size in range(1, min(K, n) + 1) for c in itertools.combinations(range(n), size)
    ]
    subsets.sort()
    masks = np.zeros((len(subsets), n), dtype=np.uint8)
    for row, idx in enumerate(subsets):
        masks[row, list(idx)] = 1
    masks.setflags(write=False)
    return masks


@dataclass(frozen=True)
class HammingNeighborhood:
    """Neighborhood ``{y : 0 < d(x, y) <= K}`` restricted to feasible ``y``."""

    K: int = 1

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("neighborhood radius K must be >= 1")

    def max_size(self, n: int) -> int:
        return sum(math.comb(n, i) for i in range(1, min(self.K, n) + 1))

    def candidates(self, x: np.ndarray) -> np.ndarray:
        """Every genotype within distance K of ``x``, feasibility ignored."""
        return np.bitwise_xor(x[None, :], flip_masks(x.shape[0], self.K))


class ProblemInstance:
    """Base class for a maximization problem over ``{0,1}^n``.

    Subclasses implement :meth:`objective`. Constrained problems also override
    :meth:`violations`, set ``whole_space = False`` and should supply a
    ``feasible_seed``.
    """

    name = "problem"
    whole_space = True

    def __init__(
        self,
        n: int,
        objective_upper_bound: int,
        neighborhood: HammingNeighborhood | None = None,
        feasible_seed=None,
    ):
        if n < 1:
            raise ValueError("dimension n must be positive")
        self.n = int(n)
        self.objective_upper_bound = int(objective_upper_bound)
        self.neighborhood = neighborhood or HammingNeighborhood(1)
        self.feasible_seed = None if feasible_seed is None else as_genotype(feasible_seed, self.n)
        if self.feasible_seed is not None and not self.is_feasible(self.feasible_seed):
            raise ValueError("feasible_seed violates the instance constraints")

    @property
    def K(self) -> int:
        return self.neighborhood.K

    def objective(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def violations(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X)
        return np.zeros(X.shape[:-1], dtype=np.int64)

    def value(self, x) -> int:
        """Objective of a single genotype."""
        return int(self.objective(as_genotype(x, self.n)[None, :])[0])

    def is_feasible(self, x) -> bool:
        return int(self.violations(as_genotype(x, self.n)[None, :])[0]) == 0

    def _check_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.uint8)
        if X.shape[-1] != self.n:
            raise ValueError(f"genotype length {X.shape[-1]} does not match n={self.n}")
        return X

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, K={self.K})"


class OneMax(ProblemInstance):
    name = "onemax"

    def __init__(self, n: int, K: int = 1):
        super().__init__(n, n, HammingNeighborhood(K), np.zeros(n, dtype=np.uint8))

    def objective(self, X):
        X = self._check_batch(X)
        return X.sum(axis=-1, dtype=np.int64)


class MaxCut(ProblemInstance):
    """Weighted Max-Cut; bit ``i`` is the side of vertex ``i`` (0-based)."""

    name = "maxcut"

    def __init__(self, n: int, edges: Sequence[tuple[int, int, int]], K: int = 1):
        edges = [tuple(int(v) for v in e) for e in edges]
        for pos, (u, v, w) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {pos}: vertex out of range 0..{n - 1}")
            if u == v:
                raise ValueError(f"edge {pos}: self-loop on vertex {u}")
            if w <= 0:
                raise ValueError(f"edge {pos}: weight must be a positive integer, got {w}")
        self.edges = edges
        arr = np.array(edges, dtype=np.int64).reshape(-1, 3)
        self._u, self._v, self._w = arr[:, 0], arr[:, 1], arr[:, 2]
        super().__init__(n, int(self._w.sum()), HammingNeighborhood(K), np.zeros(n, dtype=np.uint8))

    @property
    def total_weight(self) -> int:
        return self.objective_upper_bound

    def objective(self, X):
        X = self._check_batch(X)
        cut = X[..., self._u] != X[..., self._v]
        return (cut * self._w).sum(axis=-1, dtype=np.int64)


class MaxSat(ProblemInstance):
    """Unweighted MAX-SAT. Clauses use DIMACS literals: ``+i`` / ``-i`` for variable ``i`` (1-based)."""

    name = "maxsat"

    def __init__(self, n: int, clauses: Sequence[Sequence[int]], K: int = 1):
        clauses = [tuple(int(l) for l in c) for c in clauses]
        if not clauses:
            raise ValueError("MAX-SAT instance needs at least one clause")
        for pos, c in enumerate(clauses):
            if not c:
                raise ValueError(f"clause {pos}: empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > n:
                    raise ValueError(f"clause {pos}: literal {lit} out of range for {n} variables")
        self.clauses = clauses
        width = max(len(c) for c in clauses)
        self._var = np.zeros((len(clauses), width), dtype=np.int64)
        self._pos = np.zeros((len(clauses), width), dtype=np.uint8)
        self._used = np.zeros((len(clauses), width), dtype=bool)
        for i, c in enumerate(clauses):
            self._var[i, : len(c)] = [abs(l) - 1 for l in c]
            self._pos[i, : len(c)] = [l > 0 for l in c]
            self._used[i, : len(c)] = True
        super().__init__(n, len(clauses), HammingNeighborhood(K), np.zeros(n, dtype=np.uint8))

    def objective(self, X):
        X = self._check_batch(X)
        lit_true = (X[..., self._var] == self._pos) & self._used
        return lit_true.any(axis=-1).sum(axis=-1, dtype=np.int64)


class CallableProblem(ProblemInstance):
    """Problem built from per-genotype Python callables.

    Convenient for small constrained problems (vertex cover on a bounded-degree
    graph and the like); evaluation loops in Python, so keep ``n`` modest.
    """

    def __init__(
        self,
        n: int,
        objective: Callable[[np.ndarray], int],
        objective_upper_bound: int,
        violations: Callable[[np.ndarray], int] | None = None,
        K: int = 1,
        feasible_seed=None,
        name: str = "callable",
    ):
        self._objective_fn = objective
        self._violations_fn = violations
        self.name = name
        self.whole_space = violations is None
        super().__init__(n, objective_upper_bound, HammingNeighborhood(K), feasible_seed)

    @staticmethod
    def _rowwise(fn, X):
        flat = X.reshape(-1, X.shape[-1])
        out = np.fromiter((fn(row) for row in flat), dtype=np.int64, count=flat.shape[0])
        return out.reshape(X.shape[:-1])

    def objective(self, X):
        return self._rowwise(self._objective_fn, self._check_batch(X))

    def violations(self, X):
        X = self._check_batch(X)
        if self._violations_fn is None:
            return np.zeros(X.shape[:-1], dtype=np.int64)
        return self._rowwise(self._violations_fn, X)


def make_onemax(n: int, K: int = 1) -> OneMax:
    return OneMax(n, K)


def make_maxcut(edges, n: int | None = None, K: int = 1) -> MaxCut:
    """Max-Cut from ``(u, v, w)`` triples with 0-based vertices."""
    edges = list(edges)
    if n is None:
        n = 1 + max(max(u, v) for u, v, _ in edges) if edges else 1
    return MaxCut(n, edges, K)


def make_maxsat(clauses, n: int | None = None, K: int = 1) -> MaxSat:
    clauses = [tuple(c) for c in clauses]
    if n is None:
        n = max((abs(l) for c in clauses for l in c), default=0)
    return MaxSat(n, clauses, K)


def random_maxcut(n: int, rng: np.random.Generator, p: float = 0.5, max_weight: int = 1) -> MaxCut:
    """G(n, p) graph with integer weights uniform on ``1..max_weight``; at least one edge."""
    while True:
        edges = [
            (u, v, int(rng.integers(1, max_weight + 1)))
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        if edges:
            return MaxCut(n, edges)


def random_maxsat(n: int, num_clauses: int, rng: np.random.Generator, width: int = 2) -> MaxSat:
    """Random CNF; each clause has ``min(width, n)`` distinct variables with random signs."""
    width = min(width, n)
    clauses = []
    for _ in range(num_clauses):
        vars_ = rng.choice(n, size=width, replace=False) + 1
        signs = rng.choice([-1, 1], size=width)
        clauses.append(tuple(int(v * s) for v, s in zip(vars_, signs)))
    return MaxSat(n, clauses)


def _require_feasible(instance: ProblemInstance, x: np.ndarray):
    if not instance.is_feasible(x):
        raise ValueError(f"genotype {bits_to_str(x)} is infeasible")


def _neighborhood(instance: ProblemInstance, K: int | None) -> HammingNeighborhood:
    if K is None or K == instance.K:
        return instance.neighborhood
    return HammingNeighborhood(K)


def enumerate_neighbors(instance: ProblemInstance, x, K: int | None = None) -> np.ndarray:
    """Feasible genotypes at Hamming distance 1..K from ``x`` as a ``(M, n)`` array."""
    x = as_genotype(x, instance.n)
    _require_feasible(instance, x)
    cand = _neighborhood(instance, K).candidates(x)
    if instance.whole_space:
        return cand
    return cand[instance.violations(cand) == 0]


def local_optimum_mask(instance: ProblemInstance, X, K: int | None = None) -> np.ndarray:
    """Row-wise local optimality test for a batch; infeasible rows are ``False``."""
    X = instance._check_batch(X)
    if X.ndim == 1:
        X = X[None, :]
    hood = _neighborhood(instance, K)
    masks = flip_masks(instance.n, hood.K)
    out = np.zeros(X.shape[0], dtype=bool)
    # keep the (rows, M, n) neighbor tensor bounded
    step = max(1, _CHUNK * 4 // max(1, masks.shape[0]))
    for lo in range(0, X.shape[0], step):
        block = X[lo : lo + step]
        feas = instance.violations(block) == 0
        if not feas.any():
            continue
        fx = instance.objective(block)
        nbrs = np.bitwise_xor(block[:, None, :], masks[None, :, :])
        fn = instance.objective(nbrs)
        if not instance.whole_space:
            fn = np.where(instance.violations(nbrs) == 0, fn, np.iinfo(np.int64).min)
        out[lo : lo + step] = feas & (fn <= fx[:, None]).all(axis=1)
    return out


def is_local_optimum(instance: ProblemInstance, x, K: int | None = None) -> bool:
    x = as_genotype(x, instance.n)
    _require_feasible(instance, x)
    return bool(local_optimum_mask(instance, x[None, :], K)[0])


def local_search(
    instance: ProblemInstance, x0, K: int | None = None, rule: str = "best_improving"
) -> tuple[np.ndarray, int]:
    """Climb to a local optimum; returns the optimum and the number of moves made.

    ``rule`` is ``"first_improving"`` or ``"best_improving"``. Ties go to the
    earliest neighbor in enumeration order.
    """
    if rule not in ("first_improving", "best_improving"):
        raise ValueError(f"unknown improvement rule {rule!r}")
    x = as_genotype(x0, instance.n).copy()
    _require_feasible(instance, x)
    fx = instance.value(x)
    steps = 0
    while True:
        nbrs = enumerate_neighbors(instance, x, K)
        if nbrs.shape[0] == 0:
            return x, steps
        fn = instance.objective(nbrs)
        better = np.flatnonzero(fn > fx)
        if better.size == 0:
            return x, steps
        j = better[0] if rule == "first_improving" else int(np.argmax(fn))
        x, fx = nbrs[j].copy(), int(fn[j])
        steps += 1


def all_genotypes(n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Genotypes with integer codes ``start..stop-1``; bit 0 is the most significant."""
    stop = (1 << n) if stop is None else stop
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8)


def _iter_space(n: int) -> Iterator[np.ndarray]:
    total = 1 << n
    for lo in range(0, total, _CHUNK):
        yield all_genotypes(n, lo, min(total, lo + _CHUNK))


@dataclass
class BruteForceReport:
    global_optimum_value: int
    local_optima: np.ndarray  # (count, n) uint8
    objective_value_set: list[int] = field(default_factory=list)
    optima: np.ndarray | None = None  # global maximizers

    @property
    def m_exact(self) -> int:
        return len(self.objective_value_set) - 1

    def local_optima_set(self) -> set[str]:
        return {bits_to_str(x) for x in self.local_optima}


def brute_force(instance: ProblemInstance, K: int | None = None) -> BruteForceReport:
    """Enumerate ``{0,1}^n`` to get the optimum, exact ``m`` and all local optima."""
    n = instance.n
    if n > BRUTE_FORCE_MAX_N:
        raise OversizeError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got n={n}")
    values: set[int] = set()
    best = None
    optima = []
    local = []
    for X in _iter_space(n):
        feas = instance.violations(X) == 0
        if not feas.any():
            continue
        Xf = X[feas]
        f = instance.objective(Xf)
        values.update(np.unique(f).tolist())
        top = int(f.max())
        if best is None or top > best:
            best, optima = top, [Xf[f == top]]
        elif top == best:
            optima.append(Xf[f == top])
        local.append(Xf[local_optimum_mask(instance, Xf, K)])
    if best is None:
        raise ValueError("instance has no feasible solution")
    return BruteForceReport(
        global_optimum_value=best,
        local_optima=np.concatenate(local),
        objective_value_set=sorted(values),
        optima=np.concatenate(optima),
    )


def glo_ratio(instance: ProblemInstance, x, optimum_value: int | None = None) -> Fraction | float:
    """Achieved approximation ratio ``f(opt) / f(x)``.

    Returns ``math.inf`` when ``f(x) = 0`` (no finite ratio exists).
    """
    x = as_genotype(x, instance.n)
    if not is_local_optimum(instance, x):
        raise ValueError(f"{bits_to_str(x)} is not a local optimum")
    if optimum_value is None:
        optimum_value = brute_force(instance).global_optimum_value
    fx = instance.value(x)
    if fx == 0:
        return math.inf
    return Fraction(int(optimum_value), fx)
