"""Shared fixtures and pure-Python oracles.

The oracles here deliberately avoid the package's vectorized code paths:
objectives are recomputed from the raw edge/clause lists and the search
space is walked with ``itertools.product``.
"""

import itertools

import numpy as np
import pytest

from glo_ga.problems import random_maxcut, random_maxsat


def cut_value(edges, x):
    return sum(w for u, v, w in edges if x[u] != x[v])


def sat_value(clauses, x):
    return sum(any((x[abs(l) - 1] == 1) == (l > 0) for l in c) for c in clauses)


def enumerate_landscape(f, n):
    """Map every assignment tuple to its objective value."""
    return {x: f(x) for x in itertools.product((0, 1), repeat=n)}


def flip_local_optima(values):
    """Assignments with no strictly better single-bit flip."""
    out = set()
    for x, fx in values.items():
        better = False
        for i in range(len(x)):
            y = x[:i] + (1 - x[i],) + x[i + 1 :]
            if values[y] > fx:
                better = True
                break
        if not better:
            out.add("".join(map(str, x)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def maxcut_corpus(count, n_range, seed):
    gen = np.random.default_rng(seed)
    return [
        random_maxcut(int(gen.integers(*n_range)), gen, p=0.5, max_weight=int(gen.integers(1, 6)))
        for _ in range(count)
    ]


def maxsat_corpus(count, n_range, seed):
    out = []
    gen = np.random.default_rng(seed)
    for _ in range(count):
        n = int(gen.integers(*n_range))
        width = int(gen.integers(1, 4))
        out.append(random_maxsat(n, int(gen.integers(n, 4 * n + 1)), gen, width=width))
    return out
