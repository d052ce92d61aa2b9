import math
import mpmath
import numpy as np
import pytest

from glo_ga.core import GAParams
from glo_ga.operators import CrossoverConfig, MutationConfig, mutation_hit_probability
from glo_ga.problems import (
    CallableProblem,
    OneMax,
    OversizeError,
    enumerate_neighbors,
    hamming_distance,
    make_maxcut,
    make_maxsat,
)
from glo_ga.theory import (
    certify_s,
    check_lemma_conditions,
    estimate_m,
    plan_parameters,
    planned_params,
    population_threshold,
    success_probability_bounds,
    verify_hitting_time,
)

from conftest import maxcut_corpus, maxsat_corpus

mpmath.mp.dps = 50


def planner_oracle(m, s, eps, r):
    """High-precision evaluation of the planning formula."""
    m, s, eps, r = (mpmath.mpf(str(v)) if not isinstance(v, mpmath.mpf) else v for v in (m, s, eps, r))
    half = (1 + mpmath.log(m)) / (s * eps * (1 - mpmath.exp(-2 * r)))
    lam = 2 * int(mpmath.ceil(half))
    return lam, int(mpmath.ceil(r * lam))


class TestPlanner:
    def test_frozen_values(self):
        # frozen from planner_oracle: 76.3899585... and 95.4903597...
        assert plan_parameters(10, 0.1, 0.5, 1) == (154, 154)
        assert plan_parameters(16, 1 / 16, 1, 0.5) == (192, 96)
        assert planner_oracle(10, "0.1", "0.5", 1) == (154, 154)
        assert planner_oracle(16, mpmath.mpf(1) / 16, 1, "0.5") == (192, 96)

    def test_monotone_in_m(self):
        assert plan_parameters(100, 0.1, 0.5, 1)[0] > plan_parameters(10, 0.1, 0.5, 1)[0]

    def test_rejects_small_m(self):
        with pytest.raises(ValueError):
            plan_parameters(1, 0.1, 0.5, 1)

    def test_grid_against_oracle(self):
        gen = np.random.default_rng(7)
        for _ in range(300):
            m = int(gen.integers(2, 10_000))
            s = float(gen.uniform(1e-4, 1))
            eps = float(gen.uniform(0.05, 1))
            r = float(gen.uniform(0.05, 3))
            lam, k = plan_parameters(m, s, eps, r)
            o_lam, o_k = planner_oracle(m, mpmath.mpf(s), mpmath.mpf(eps), mpmath.mpf(r))
            assert lam == o_lam
            assert k == o_k
            assert lam % 2 == 0
            ok, bad = check_lemma_conditions(lam, k, r, m, s, eps, True)
            assert ok, bad


class TestLemmaConditions:
    def test_planner_output_ok(self):
        lam, k = plan_parameters(10, 0.1, 0.5, 1)
        assert check_lemma_conditions(lam, k, 1, 10, 0.1, 0.5, True) == (True, [])

    def test_population_boundary(self):
        thr = population_threshold(10, 0.1, 0.5, 1)
        lam = math.ceil(thr) - 1
        ok, bad = check_lemma_conditions(lam, lam, 1, 10, 0.1, 0.5, True)
        assert not ok and bad == ["population size"]

    def test_tournament_deficit(self):
        ok, bad = check_lemma_conditions(154, 100, 1, 10, 0.1, 0.5, True)
        assert not ok and bad == ["tournament size"]

    def test_feasibility_and_domain(self):
        ok, bad = check_lemma_conditions(154, 154, 1, 10, 0.1, 0.5, False)
        assert bad == ["feasible initial population"]
        ok, bad = check_lemma_conditions(154, 154, 1, 1, 0.1, 0.5, True)
        assert "m > 1" in bad
        ok, bad = check_lemma_conditions(154, 154, 1, 10, 0.0, 0.5, True)
        assert "s positive" in bad


class TestBounds:
    def test_exact_threshold_gives_inverse_e(self):
        for m, s, eps, r in [(10, 0.1, 0.5, 1.0), (3, 0.7, 0.9, 0.2), (1000, 0.003, 1.0, 2.0)]:
            lam = population_threshold(m, s, eps, r)
            b = success_probability_bounds(s, eps, r, lam, m)
            assert b.series_success_lower == pytest.approx(math.exp(-1), rel=1e-12)

    def test_planner_ceiling_not_worse(self):
        lam, k = plan_parameters(10, 0.1, 0.5, 1)
        b = success_probability_bounds(0.1, 0.5, 1, lam, 10, k)
        assert b.series_success_lower >= math.exp(-1)
        assert (b.planned_lambda, b.planned_k) == (154, 154)
        assert b.q_lower == pytest.approx(0.1 * 0.5 * (1 - math.exp(-2)))
        # the tournament-size form of the bound is at least the r-form
        assert b.q_tournament >= b.q_lower
        assert 0 < b.ell < 1

    def test_large_r_saturates(self):
        b = success_probability_bounds(0.1, 0.6, 50.0, 100, 10)
        assert b.c == pytest.approx(0.6, rel=1e-15)


class TestEstimateM:
    def test_onemax(self):
        assert estimate_m(OneMax(4)) == 4
        assert estimate_m(OneMax(4), "declared_bound") == 4

    def test_declared_bounds(self):
        cut = make_maxcut([(0, 1, 2), (1, 2, 5)])
        assert estimate_m(cut, "declared_bound") == 7
        sat = make_maxsat([(1, 2), (-1,), (2, -3)])
        assert estimate_m(sat, "declared_bound") == 3

    def test_oversize(self):
        with pytest.raises(OversizeError):
            estimate_m(OneMax(30))

    def test_declared_dominates_exact(self):
        for inst in maxcut_corpus(20, (3, 10), 1) + maxsat_corpus(20, (3, 10), 2):
            assert estimate_m(inst, "declared_bound") >= estimate_m(inst)


class TestCertifyS:
    def test_examples(self):
        assert certify_s(MutationConfig("bitwise", 0.1), OneMax(10)) == pytest.approx(1 / (10 * math.e))
        assert certify_s(MutationConfig("uniform_neighbor"), OneMax(16)) == 1 / 16
        assert certify_s(MutationConfig("bitwise", 0.05), OneMax(10)) == pytest.approx(
            0.05 * 0.95**9, rel=1e-12
        )
        assert 0.05 * 0.95**9 == pytest.approx(3.151e-2, abs=5e-6)

    def test_true_lower_bound(self):
        gen = np.random.default_rng(11)
        for _ in range(100):
            n = int(gen.integers(2, 17))
            K = int(gen.integers(1, max(2, n // 2 + 1)))
            inst = OneMax(n, K=K)
            x = gen.integers(0, 2, n, dtype=np.uint8)
            nbrs = enumerate_neighbors(inst, x)
            y = nbrs[int(gen.integers(len(nbrs)))]
            d = hamming_distance(x, y)
            for mut in (MutationConfig("bitwise"), MutationConfig("bitwise", float(gen.uniform(0.01, 0.5)))):
                exact = mutation_hit_probability(d, n, mut.rate(inst))
                assert exact >= certify_s(mut, inst) * (1 - 1e-12)
            assert 1 / len(nbrs) >= certify_s(MutationConfig("uniform_neighbor"), inst)


class TestVerifier:
    def test_onemax_campaign(self):
        inst = OneMax(8)
        p = planned_params(inst, MutationConfig("uniform_neighbor"), CrossoverConfig("identity"), 0.5)
        stats = verify_hitting_time(inst, p, 200, 0)
        assert not stats.violation
        assert stats.hit_fraction >= math.exp(-1) - 0.05
        assert stats.mean_eta <= math.e + 0.3
        assert stats.mean_first_hit <= math.e * p.m + stats.first_hit_halfwidth

    def test_degenerate_all_local_optima(self):
        flat = CallableProblem(5, objective=lambda x: 3, objective_upper_bound=3)
        lam, k = plan_parameters(2, 0.5, 1.0, 1.0)
        p = GAParams(lam, k, 2, MutationConfig("bitwise"), CrossoverConfig("identity"), r=1.0, s=0.5)
        stats = verify_hitting_time(flat, p, 100, 3, tests=("lemma1",))
        assert stats.hit_fraction == 1.0

    def test_reproducible(self):
        inst = maxsat_corpus(1, (6, 7), 4)[0]
        assert estimate_m(inst) > 1
        p = planned_params(inst, MutationConfig("bitwise"), CrossoverConfig("single_point", 0.5), 1.0)
        a = verify_hitting_time(inst, p, 100, 42)
        b = verify_hitting_time(inst, p, 100, 42)
        assert a == b

    def test_parallel_matches_sequential(self):
        inst = OneMax(6)
        p = planned_params(inst, MutationConfig("bitwise"), CrossoverConfig("single_point", 0.3), 1.0)
        a = verify_hitting_time(inst, p, 100, 5, tests=("iterated",))
        b = verify_hitting_time(inst, p, 100, 5, tests=("iterated",), workers=2)
        assert a == b
        assert [r.total_iterations for r in a.records["iterated"]] == [
            r.total_iterations for r in b.records["iterated"]
        ]

    def test_rejects_bad_params(self):
        inst = OneMax(8)
        p = GAParams(4, 1, 8, MutationConfig("bitwise"), CrossoverConfig("identity"), r=0.5)
        with pytest.raises(ValueError, match="lemma conditions"):
            verify_hitting_time(inst, p, 100, 0)

    def test_rejects_few_runs(self):
        inst = OneMax(8)
        p = planned_params(inst, MutationConfig("uniform_neighbor"), CrossoverConfig("identity"), 0.5)
        with pytest.raises(ValueError):
            verify_hitting_time(inst, p, 10, 0)

    def test_prop1_requires_whole_space(self):
        inst = CallableProblem(
            4, objective=lambda x: int(x.sum()), objective_upper_bound=4,
            violations=lambda x: int(x[0] == 1 and x[1] == 1), feasible_seed="0000",
        )
        p = planned_params(inst, MutationConfig("bitwise"), CrossoverConfig("identity"), 1.0, m=4)
        with pytest.raises(ValueError, match="feasible"):
            verify_hitting_time(inst, p, 100, 0, tests=("prop1",))
        stats = verify_hitting_time(inst, p, 100, 0)
        assert not stats.violation
