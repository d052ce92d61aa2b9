"""Non-elitist genetic algorithm with tournament selection, plus the restarting variant.

One iteration builds ``pop_size / 2`` offspring pairs. For each pair two
parents are picked by independent tournaments, each is mutated, and the two
mutants are recombined; the crossover outputs are the pair, in generation
order. Nothing from the old population survives except through this pipeline.

Local-optimum checks made by :func:`run_ga` are observational and never feed
back into selection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import CrossoverConfig, MutationConfig
from .problems import ProblemInstance, as_genotype, local_optimum_mask

SEEDING_MODES = ("uniform", "seeded_feasible")


def fitness(instance: ProblemInstance, x) -> int:
    """``f(x)`` for feasible ``x``; ``-1 - violations(x)`` otherwise."""
    x = as_genotype(x, instance.n)
    return int(fitness_batch(instance, x[None, :])[0])


def fitness_batch(instance: ProblemInstance, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.uint8)
    if X.shape[-1] != instance.n:
        raise ValueError(f"genotype length {X.shape[-1]} does not match n={instance.n}")
    f = instance.objective(X)
    if instance.whole_space:
        return f
    viol = instance.violations(X)
    return np.where(viol == 0, f, -1 - viol)


@dataclass
class Population:
    """``members`` is a ``(pop_size, n)`` uint8 array; ``fitness`` caches one value per row."""

    members: np.ndarray
    fitness: np.ndarray
    generation: int = 0

    def __post_init__(self):
        if self.members.ndim != 2:
            raise ValueError("members must be a 2-D array")
        if len(self) % 2:
            raise ValueError(f"population size must be even, got {len(self)}")
        if self.fitness.shape != (len(self),):
            raise ValueError("fitness cache does not match the member count")

    @classmethod
    def from_members(cls, instance: ProblemInstance, members, generation: int = 0) -> "Population":
        members = np.array(members, dtype=np.uint8)
        if members.ndim == 1:
            members = members[None, :]
        return cls(members, fitness_batch(instance, members), generation)

    def __len__(self):
        return self.members.shape[0]

    def best_index(self) -> int:
        return int(np.argmax(self.fitness))


@dataclass(frozen=True)
class GAParams:
    """Parameters of one GA configuration.

    ``m`` is the run length used for hit-within-m windows and the default
    restart period ``t_max``. ``epsilon`` defaults to what the crossover
    certifies. ``r`` and ``s`` are bookkeeping for condition checks; they do
    not change the dynamics.
    """

    pop_size: int
    tournament_size: int
    m: int
    mutation: MutationConfig = field(default_factory=MutationConfig)
    crossover: CrossoverConfig = field(default_factory=CrossoverConfig)
    r: float | None = None
    t_max: int | None = None
    epsilon: float | None = None
    s: float | None = None

    def __post_init__(self):
        if self.pop_size < 2 or self.pop_size % 2:
            raise ValueError(f"pop_size must be even and >= 2, got {self.pop_size}")
        if self.tournament_size < 1:
            raise ValueError(f"tournament_size must be >= 1, got {self.tournament_size}")
        if self.m < 1:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.t_max is not None and self.t_max < 1:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.r is not None and self.r <= 0:
            raise ValueError(f"r must be positive, got {self.r}")
        eps = self.crossover_success
        if eps is not None and not 0 < eps <= 1:
            raise ValueError(f"epsilon must be in (0, 1], got {eps}")
        if self.s is not None and not 0 < self.s <= 1:
            raise ValueError(f"s must be in (0, 1], got {self.s}")

    @property
    def restart_period(self) -> int:
        return self.m if self.t_max is None else self.t_max

    @property
    def crossover_success(self) -> float | None:
        if self.epsilon is not None:
            return self.epsilon
        return getattr(self.crossover, "epsilon", None)


def select_parents(fitness: np.ndarray, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Run ``count`` independent size-``k`` tournaments (with replacement).

    Ties among the best drawn entrants are broken uniformly at random.
    """
    if k < 1:
        raise ValueError(f"tournament size must be >= 1, got {k}")
    size = fitness.shape[0]
    if size == 0:
        raise ValueError("cannot select from an empty population")
    draws = rng.integers(size, size=(count, k))
    if k == 1:
        return draws[:, 0]
    fd = fitness[draws]
    is_best = fd == fd.max(axis=1, keepdims=True)
    keys = np.where(is_best, rng.random(draws.shape), -1.0)
    return draws[np.arange(count), keys.argmax(axis=1)]


def tournament_select(pop: Population | np.ndarray, k: int, rng: np.random.Generator) -> int:
    fit = pop.fitness if isinstance(pop, Population) else np.asarray(pop)
    return int(select_parents(fit, k, 1, rng)[0])


def ga_iteration(
    pop: Population, params: GAParams, instance: ProblemInstance, rng: np.random.Generator
) -> Population:
    lam = len(pop)
    if lam != params.pop_size:
        raise ValueError(f"population has {lam} members, params expect {params.pop_size}")
    sel = select_parents(pop.fitness, params.tournament_size, lam, rng)
    x = params.mutation.apply(pop.members[sel[0::2]], instance, rng)
    y = params.mutation.apply(pop.members[sel[1::2]], instance, rng)
    c1, c2 = params.crossover.apply(x, y, rng)
    children = np.empty_like(pop.members)
    children[0::2] = c1
    children[1::2] = c2
    return Population(children, fitness_batch(instance, children), pop.generation + 1)


def init_population(
    instance: ProblemInstance, pop_size: int, seeding: str, rng: np.random.Generator
) -> Population:
    """Uniform random bits; ``seeded_feasible`` puts the instance's feasible seed in slot 0."""
    if seeding not in SEEDING_MODES:
        raise ValueError(f"unknown seeding mode {seeding!r}")
    if pop_size < 2 or pop_size % 2:
        raise ValueError(f"pop_size must be even and >= 2, got {pop_size}")
    members = rng.integers(0, 2, size=(pop_size, instance.n), dtype=np.uint8)
    if seeding == "seeded_feasible":
        if instance.feasible_seed is None:
            raise ValueError(f"{instance!r} has no feasible seed")
        members[0] = instance.feasible_seed
    return Population.from_members(instance, members)


@dataclass
class RunRecord:
    """Trace of one GA run or one iterated-GA execution.

    ``first_hit`` is the iteration (within the final series, for the iterated
    GA) at which a feasible local optimum was first present; 0 means the
    initial population already had one. ``best_fitness`` holds the best
    fitness of every population visited, initial populations included.
    """

    seed: int | None = None
    first_hit: int | None = None
    iterations: int = 0
    eta: int | None = None
    restarts: int = 0
    total_iterations: int = 0
    best_fitness: list[int] = field(default_factory=list)
    hit_genotype: np.ndarray | None = None
    final_best: np.ndarray | None = None
    final_best_is_local_opt: bool = False

    @property
    def hit(self) -> bool:
        return self.first_hit is not None

    @property
    def best_fitness_value(self) -> int | None:
        return max(self.best_fitness) if self.best_fitness else None


def _local_hit(instance: ProblemInstance, pop: Population, K: int | None):
    mask = local_optimum_mask(instance, pop.members, K)
    if mask.any():
        return pop.members[int(np.flatnonzero(mask)[0])].copy()
    return None


def run_ga(
    instance: ProblemInstance,
    params: GAParams,
    init: Population,
    budget: int,
    rng: np.random.Generator,
    *,
    K: int | None = None,
    stop_at_hit: bool = False,
) -> RunRecord:
    """Iterate the GA at most ``budget`` times from ``init``.

    With ``stop_at_hit`` the run ends as soon as a local optimum is seen;
    everything recorded up to that point is identical to an unstopped run.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    rec = RunRecord()
    pop = init
    rec.best_fitness.append(int(pop.fitness.max()))
    hit = _local_hit(instance, pop, K)
    if hit is not None:
        rec.first_hit, rec.hit_genotype = 0, hit
    t = 0
    while t < budget and not (stop_at_hit and rec.hit):
        pop = ga_iteration(pop, params, instance, rng)
        t += 1
        rec.best_fitness.append(int(pop.fitness.max()))
        if not rec.hit:
            hit = _local_hit(instance, pop, K)
            if hit is not None:
                rec.first_hit, rec.hit_genotype = t, hit
    rec.iterations = t
    rec.total_iterations = t
    best = pop.members[pop.best_index()].copy()
    rec.final_best = best
    rec.final_best_is_local_opt = bool(local_optimum_mask(instance, best[None, :], K)[0])
    return rec


def run_iterated_ga(
    instance: ProblemInstance,
    params: GAParams,
    restart_budget: int,
    rng: np.random.Generator,
    *,
    seeding: str = "uniform",
    K: int | None = None,
) -> RunRecord:
    """Restart the GA every ``t_max`` iterations until a local optimum is visited.

    ``restart_budget`` caps the number of series. On success ``eta`` is the
    1-based index of the successful series; otherwise ``eta`` is ``None``.
    """
    if restart_budget < 1:
        raise ValueError("restart_budget must be >= 1")
    t_max = params.restart_period
    total = 0
    trace: list[int] = []
    rec = RunRecord()
    for series in range(1, restart_budget + 1):
        init = init_population(instance, params.pop_size, seeding, rng)
        rec = run_ga(instance, params, init, t_max, rng, K=K, stop_at_hit=True)
        trace.extend(rec.best_fitness)
        if rec.hit:
            total += rec.first_hit
            rec.eta = series
            break
        total += rec.iterations
    rec.restarts = series - 1
    rec.total_iterations = total
    rec.best_fitness = trace
    return rec

