"""Parameter planning and empirical checks of the GA hitting-time guarantees.

The planner picks the population and tournament sizes that make a GA run of
``m`` iterations visit a local optimum with probability at least ``1/e``.
:func:`verify_hitting_time` runs seeded campaigns and flags any statistically
significant contradiction of the three bounds:

* GA run of ``m`` iterations hits a local optimum with probability ``>= 1/e``;
* without restarts, the expected hitting time is ``<= e*m`` (whole-space problems);
* with restarts every ``m`` iterations, the expected index of the first
  successful series is ``<= e`` and the expected total work is ``<= e*m``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .core import GAParams, RunRecord, init_population, run_ga, run_iterated_ga
from .operators import CrossoverConfig, MutationConfig, mutation_hit_bound, mutation_hit_probability
from .problems import BRUTE_FORCE_MAX_N, OversizeError, ProblemInstance, brute_force

Z99 = NormalDist().inv_cdf(0.995)
INV_E = math.exp(-1.0)
TESTS = ("lemma1", "prop1", "iterated")


def population_threshold(m: int, s: float, epsilon: float, r: float) -> float:
    """Smallest real population size satisfying the population-size condition."""
    return 2.0 * (1.0 + math.log(m)) / (s * epsilon * (1.0 - math.exp(-2.0 * r)))


def plan_parameters(m: int, s: float, epsilon: float, r: float) -> tuple[int, int]:
    """Population size ``2*ceil((1 + ln m) / (s*eps*(1 - e^{-2r})))`` and tournament size ``ceil(r*lambda)``."""
    if m <= 1:
        raise ValueError(f"planning needs m > 1, got {m}")
    if s <= 0 or epsilon <= 0 or r <= 0:
        raise ValueError("s, epsilon and r must be positive")
    lam = 2 * math.ceil((1.0 + math.log(m)) / (s * epsilon * (1.0 - math.exp(-2.0 * r))))
    return lam, math.ceil(r * lam)


def check_lemma_conditions(
    pop_size: int,
    tournament_size: int,
    r: float,
    m: int,
    s: float,
    epsilon: float,
    x0_has_feasible: bool,
) -> tuple[bool, list[str]]:
    """Return ``(ok, violations)`` for the preconditions of the hitting-probability bound."""
    bad = []
    if not x0_has_feasible:
        bad.append("feasible initial population")
    if r <= 0:
        bad.append("r positive")
    if m <= 1:
        bad.append("m > 1")
    if s <= 0:
        bad.append("s positive")
    if not 0 < epsilon <= 1:
        bad.append("epsilon in (0, 1]")
    if r > 0 and tournament_size < r * pop_size:
        bad.append("tournament size")
    if r > 0 and m > 1 and s > 0 and 0 < epsilon <= 1:
        if pop_size < population_threshold(m, s, epsilon, r):
            bad.append("population size")
    return not bad, bad


@dataclass(frozen=True)
class TheoryBounds:
    q_lower: float
    c: float
    ell: float
    series_success_lower: float
    planned_lambda: int | None
    planned_k: int | None
    q_tournament: float | None = None  # same bound using the actual tournament size


def success_probability_bounds(
    s: float, epsilon: float, r: float, pop_size: float, m: int, k: int | None = None
) -> TheoryBounds:
    """Bounds from the hitting-probability argument at the given parameters.

    ``ell`` bounds the probability that one iteration improves the best
    solution; ``series_success_lower = ell**m`` bounds reaching a local
    optimum within ``m`` iterations. ``pop_size`` may be real-valued.
    """
    c = epsilon * (1.0 - math.exp(-2.0 * r))
    q = s * c
    # ell**m = exp(-m * e^{1 - q*lambda/2}); stay in log space
    log_ell = -math.exp(1.0 - q * pop_size / 2.0)
    planned = plan_parameters(m, s, epsilon, r) if m > 1 else (None, None)
    q_tour = None
    if k is not None and pop_size >= 1:
        q_tour = s * epsilon * (1.0 - (1.0 - 1.0 / pop_size) ** (2 * k))
    return TheoryBounds(
        q_lower=q,
        c=c,
        ell=math.exp(log_ell),
        series_success_lower=math.exp(m * log_ell),
        planned_lambda=planned[0],
        planned_k=planned[1],
        q_tournament=q_tour,
    )


def estimate_m(instance: ProblemInstance, mode: str = "exact_bruteforce") -> int:
    """Number of non-optimal objective values, exactly or via the declared upper bound."""
    if mode == "exact_bruteforce":
        if instance.n > BRUTE_FORCE_MAX_N:
            raise OversizeError(f"exact m needs n <= {BRUTE_FORCE_MAX_N}, got n={instance.n}")
        return brute_force(instance).m_exact
    if mode == "declared_bound":
        return instance.objective_upper_bound
    raise ValueError(f"unknown mode {mode!r}")


def certify_s(mutation: MutationConfig, instance: ProblemInstance) -> float:
    """Lower bound on the probability that mutation produces any given neighbor."""
    n, K = instance.n, instance.K
    if mutation.kind == "uniform_neighbor":
        return 1.0 / instance.neighborhood.max_size(n)
    p_m = mutation.rate(instance)
    if math.isclose(p_m, K / n) and 2 * K <= n:
        return mutation_hit_bound(K, n)
    return min(mutation_hit_probability(d, n, p_m) for d in range(1, K + 1))


def planned_params(
    instance: ProblemInstance,
    mutation: MutationConfig,
    crossover: CrossoverConfig,
    r: float,
    m: int | None = None,
) -> GAParams:
    """Planner output packaged as :class:`GAParams`; ``m`` defaults to the exact value."""
    if m is None:
        m = estimate_m(instance)
    s = certify_s(mutation, instance)
    lam, k = plan_parameters(m, s, crossover.epsilon, r)
    return GAParams(lam, k, m, mutation, crossover, r=r, epsilon=crossover.epsilon, s=s)


def halfwidth(values) -> float:
    """99% normal-approximation confidence halfwidth of the mean."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(Z99 * values.std(ddof=1) / math.sqrt(values.size))


def proportion_halfwidth(p: float, n: int) -> float:
    return Z99 * math.sqrt(p * (1.0 - p) / n) if n else 0.0


def _ga_run(instance, params, seed, seeding, K, budget):
    rng = np.random.default_rng(seed)
    init = init_population(instance, params.pop_size, seeding, rng)
    rec = run_ga(instance, params, init, budget, rng, K=K, stop_at_hit=True)
    rec.seed = seed
    return rec


def _iterated_run(instance, params, seed, seeding, K, restart_budget):
    rng = np.random.default_rng(seed)
    rec = run_iterated_ga(instance, params, restart_budget, rng, seeding=seeding, K=K)
    rec.seed = seed
    return rec


def _dispatch(job):
    kind, args = job
    return {"ga": _ga_run, "iterated": _iterated_run}[kind](*args)


def run_campaign(jobs, workers: int = 1) -> list[RunRecord]:
    """Execute ``(kind, args)`` jobs; results come back in job order regardless of ``workers``."""
    jobs = list(jobs)
    if workers <= 1:
        return [_dispatch(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_dispatch, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


@dataclass
class CampaignStats:
    runs: int
    m: int
    hits_within_m: int | None = None
    hit_fraction: float | None = None
    hit_halfwidth: float | None = None
    mean_first_hit: float | None = None
    first_hit_halfwidth: float | None = None
    censored_runs: int = 0
    mean_eta: float | None = None
    eta_halfwidth: float | None = None
    mean_total_iterations: float | None = None
    total_iterations_halfwidth: float | None = None
    failed_iterated_runs: int = 0
    violations: list[str] = field(default_factory=list)
    records: dict[str, list[RunRecord]] = field(default_factory=dict, compare=False, repr=False)

    @property
    def violation(self) -> bool:
        return bool(self.violations)

    @property
    def confidence_halfwidth(self) -> float | None:
        return self.hit_halfwidth

    def summary(self) -> dict[str, object]:
        keys = [
            "runs", "m", "hits_within_m", "hit_fraction", "hit_halfwidth",
            "mean_first_hit", "first_hit_halfwidth", "censored_runs",
            "mean_eta", "eta_halfwidth", "mean_total_iterations",
            "total_iterations_halfwidth", "failed_iterated_runs",
        ]
        out: dict[str, object] = {k: getattr(self, k) for k in keys}
        out["violation"] = "; ".join(self.violations) if self.violations else "none"
        return out


def verify_hitting_time(
    instance: ProblemInstance,
    params: GAParams,
    runs: int,
    base_seed: int,
    *,
    tests=None,
    seeding: str | None = None,
    K: int | None = None,
    prop1_budget: int | None = None,
    restart_budget: int = 1000,
    workers: int = 1,
) -> CampaignStats:
    """Run seeded campaigns and compare them with the theoretical bounds.

    Run ``i`` of every campaign uses ``numpy.random.default_rng(base_seed + i)``.
    ``tests`` picks any of ``"lemma1"`` (hit within ``m`` iterations),
    ``"prop1"`` (hitting time without restarts) and ``"iterated"``; by default
    all that apply to the instance. Raises ``ValueError`` when the parameters
    do not meet the planning preconditions.
    """
    if runs < 100:
        raise ValueError(f"need at least 100 runs for a meaningful campaign, got {runs}")
    if seeding is None:
        seeding = "uniform" if instance.whole_space else "seeded_feasible"
    if tests is None:
        tests = TESTS if instance.whole_space else ("lemma1", "iterated")
    tests = tuple(tests)
    unknown = set(tests) - set(TESTS)
    if unknown:
        raise ValueError(f"unknown tests {sorted(unknown)}")
    if "prop1" in tests and not instance.whole_space:
        raise ValueError("the no-restart expectation bound needs every genotype to be feasible")

    s = params.s if params.s is not None else certify_s(params.mutation, instance)
    eps = params.crossover_success
    r = params.r if params.r is not None else params.tournament_size / params.pop_size
    has_feasible = instance.whole_space or seeding == "seeded_feasible"
    ok, bad = check_lemma_conditions(
        params.pop_size, params.tournament_size, r, params.m, s, eps if eps else 0.0, has_feasible
    )
    if not ok:
        raise ValueError(f"parameters violate the lemma conditions: {', '.join(bad)}")

    m = params.m
    seeds = [base_seed + i for i in range(runs)]
    stats = CampaignStats(runs=runs, m=m)

    if "lemma1" in tests:
        recs = run_campaign((("ga", (instance, params, sd, seeding, K, m)) for sd in seeds), workers)
        hits = sum(1 for rec in recs if rec.hit and rec.first_hit <= m)
        stats.hits_within_m = hits
        stats.hit_fraction = hits / runs
        stats.hit_halfwidth = proportion_halfwidth(stats.hit_fraction, runs)
        stats.records["lemma1"] = recs
        if stats.hit_fraction + stats.hit_halfwidth < INV_E:
            stats.violations.append(
                f"hit fraction {stats.hit_fraction:.4f} + {stats.hit_halfwidth:.4f} below 1/e"
            )

    if "prop1" in tests:
        budget = prop1_budget if prop1_budget is not None else math.ceil(50 * math.e * m)
        recs = run_campaign(
            (("ga", (instance, params, sd, seeding, K, budget)) for sd in seeds), workers
        )
        # unhit runs enter at the budget, which only inflates the mean
        times = [rec.first_hit if rec.hit else budget for rec in recs]
        stats.censored_runs = sum(1 for rec in recs if not rec.hit)
        stats.mean_first_hit = float(np.mean(times))
        stats.first_hit_halfwidth = halfwidth(times)
        stats.records["prop1"] = recs
        if stats.mean_first_hit - stats.first_hit_halfwidth > math.e * m:
            stats.violations.append(
                f"mean hitting time {stats.mean_first_hit:.3f} exceeds e*m = {math.e * m:.3f}"
            )

    if "iterated" in tests:
        recs = run_campaign(
            (("iterated", (instance, params, sd, seeding, K, restart_budget)) for sd in seeds),
            workers,
        )
        etas = [rec.eta if rec.eta is not None else restart_budget for rec in recs]
        totals = [rec.total_iterations for rec in recs]
        stats.failed_iterated_runs = sum(1 for rec in recs if rec.eta is None)
        stats.mean_eta = float(np.mean(etas))
        stats.eta_halfwidth = halfwidth(etas)
        stats.mean_total_iterations = float(np.mean(totals))
        stats.total_iterations_halfwidth = halfwidth(totals)
        stats.records["iterated"] = recs
        if stats.mean_eta - stats.eta_halfwidth > math.e:
            stats.violations.append(f"mean restart index {stats.mean_eta:.3f} exceeds e")
        if stats.mean_total_iterations - stats.total_iterations_halfwidth > math.e * m:
            stats.violations.append(
                f"mean total iterations {stats.mean_total_iterations:.3f} exceeds e*m = {math.e * m:.3f}"
            )
    return stats
