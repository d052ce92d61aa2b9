"""Command-line front end.

    python -m glo_ga --mode verify_lemma1 --problem onemax --n 8 \\
        --mutation neighbor --crossover identity --r 0.5 --runs 1000

Settings may also come from ``--config FILE`` (``key = value`` lines using
the long option names); explicit flags override the file.

Exit status: 0 on success, 1 when a verification flags a violation, 2 on
invalid input.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .core import GAParams, init_population, run_ga, run_iterated_ga
from .formats import FormatError, format_results, parse_config, parse_dimacs_cnf, parse_edge_list
from .operators import CrossoverConfig, MutationConfig
from .problems import (
    BRUTE_FORCE_MAX_N,
    OneMax,
    OversizeError,
    ProblemInstance,
    bits_to_str,
    brute_force,
    is_local_optimum,
    local_search,
)
from .theory import (
    certify_s,
    check_lemma_conditions,
    estimate_m,
    plan_parameters,
    success_probability_bounds,
    verify_hitting_time,
)

MODES = (
    "single_ga",
    "iterated_ga",
    "local_search",
    "verify_lemma1",
    "verify_prop1",
    "plan_only",
    "brute_force",
)
EXACT_M_MAX_N = 20

RUN_COLUMNS = ["run_index", "seed", "first_hit_iteration", "eta", "best_fitness", "is_local_opt"]


class UsageError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    problem: str | None = None
    instance: str | None = None
    n: int | None = None
    K: int = 1
    r: float | None = None
    m: int | None = None
    s: float | None = None
    epsilon: float | None = None
    lam: int | None = None
    k: int | None = None
    pm: float | None = None
    pc: float = 0.0
    mutation: str = "bitwise"
    crossover: str = "onepoint"
    seeding: str | None = None
    runs: int = 100
    seed: int = 0
    budget: int | None = None
    restarts: int = 1000
    workers: int = 1
    out: str | None = None
    format: str = "csv"
    timing: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.lam is not None:
            if self.lam < 2 or self.lam % 2:
                raise UsageError(f"--lambda must be even and >= 2, got {self.lam}")
            if self.k is None:
                raise UsageError("--lambda requires --k")
        elif self.r is not None and self.r <= 0:
            raise UsageError(f"--r must be positive, got {self.r}")
        if self.runs < 1:
            raise UsageError("--runs must be >= 1")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glo_ga", description=__doc__.split("\n\n")[0])
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--problem", choices=("onemax", "maxcut", "maxsat"))
    p.add_argument("--instance", help="edge list (maxcut) or DIMACS CNF (maxsat)")
    p.add_argument("--n", type=int, help="dimension for onemax")
    p.add_argument("--K", type=int, help="Hamming neighborhood radius (default 1)")
    p.add_argument("--r", type=float, help="tournament ratio for the planner (default 1)")
    p.add_argument("--m", type=int, help="override the run length / restart period")
    p.add_argument("--s", type=float, help="override the certified mutation hit bound")
    p.add_argument("--epsilon", type=float, help="override the crossover success constant")
    p.add_argument("--lambda", dest="lam", type=int, help="manual population size (even)")
    p.add_argument("--k", type=int, help="manual tournament size")
    p.add_argument("--pm", type=float, help="bitwise mutation rate (default K/n)")
    p.add_argument("--pc", type=float, help="single-point crossover rate (default 0)")
    p.add_argument("--mutation", choices=("bitwise", "neighbor"))
    p.add_argument("--crossover", choices=("onepoint", "identity"))
    p.add_argument("--seeding", choices=("uniform", "seeded_feasible"))
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int, help="base seed; run i uses seed + i")
    p.add_argument("--budget", type=int, help="iterations per single_ga run (default m)")
    p.add_argument("--restarts", type=int, help="restart budget of the iterated GA")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="result file (default stdout)")
    p.add_argument("--format", choices=("csv", "tsv"))
    p.add_argument("--timing", action="store_true", default=None, help="add a wall_time column")
    return p


_TYPES = {
    "n": int, "K": int, "r": float, "m": int, "s": float, "epsilon": float, "lam": int,
    "k": int, "pm": float, "pc": float, "runs": int, "seed": int, "budget": int,
    "restarts": int, "workers": int,
}


def config_from_args(argv=None) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    settings: dict[str, object] = {}
    if args.config:
        raw = parse_config(Path(args.config).read_text())
        for key, value in raw.items():
            key = {"lambda": "lam"}.get(key, key)
            if key not in ExperimentConfig.__dataclass_fields__ or key == "config":
                raise UsageError(f"unknown config key {key!r}")
            if key == "timing":
                settings[key] = value.lower() in ("1", "true", "yes")
            else:
                settings[key] = _TYPES.get(key, str)(value)
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            settings[key] = value
    if "mode" not in settings:
        raise UsageError("--mode is required")
    return ExperimentConfig(**settings)


def load_instance(cfg: ExperimentConfig) -> ProblemInstance | None:
    if cfg.problem is None:
        return None
    if cfg.problem == "onemax":
        if cfg.n is None:
            raise UsageError("onemax needs --n")
        return OneMax(cfg.n, cfg.K)
    if cfg.instance is None:
        raise UsageError(f"{cfg.problem} needs --instance")
    text = Path(cfg.instance).read_text()
    if cfg.problem == "maxcut":
        return parse_edge_list(text, cfg.K)
    return parse_dimacs_cnf(text, cfg.K)


def _operators(cfg: ExperimentConfig):
    mutation = MutationConfig("uniform_neighbor" if cfg.mutation == "neighbor" else "bitwise", cfg.pm)
    crossover = CrossoverConfig("identity" if cfg.crossover == "identity" else "single_point", cfg.pc)
    return mutation, crossover


def _resolve_m(cfg, inst) -> int:
    if cfg.m is not None:
        return cfg.m
    if inst is None:
        raise UsageError("--m is required without a problem instance")
    mode = "exact_bruteforce" if inst.n <= EXACT_M_MAX_N else "declared_bound"
    return estimate_m(inst, mode)


def resolve_params(cfg: ExperimentConfig, inst: ProblemInstance) -> tuple[GAParams, dict]:
    """GA parameters plus the planner inputs/outputs for the result footer."""
    mutation, crossover = _operators(cfg)
    m = _resolve_m(cfg, inst)
    s = cfg.s if cfg.s is not None else certify_s(mutation, inst)
    eps = cfg.epsilon if cfg.epsilon is not None else crossover.epsilon
    if cfg.lam is not None:
        lam, k = cfg.lam, cfg.k
        r = cfg.r if cfg.r is not None else k / lam
        source = "manual"
    else:
        r = cfg.r if cfg.r is not None else 1.0
        lam, k = plan_parameters(m, s, eps, r)
        source = "planner"
    params = GAParams(lam, k, m, mutation, crossover, r=r, epsilon=eps, s=s)
    info = {"param_source": source, "m": m, "s": s, "epsilon": eps, "r": r, "lambda": lam, "k": k}
    return params, info


def _bounds_footer(s, eps, r, lam, m, k) -> dict:
    if m <= 1:
        return {}
    b = success_probability_bounds(s, eps, r, lam, m, k)
    return {f"bound_{key}": value for key, value in asdict(b).items()}


def _run_row(i, seed, rec, t0, timing) -> dict:
    row = {
        "run_index": i,
        "seed": seed,
        "first_hit_iteration": rec.first_hit,
        "eta": rec.eta,
        "best_fitness": rec.best_fitness_value,
        "is_local_opt": rec.hit or rec.final_best_is_local_opt,
    }
    if timing:
        row["wall_time"] = round(time.perf_counter() - t0, 6)
    return row


def run_experiment(cfg: ExperimentConfig, stdout=None) -> int:
    """Run one configured experiment and write its result file. Returns the exit status."""
    stdout = stdout or sys.stdout
    inst = load_instance(cfg)
    footer: dict[str, object] = {"mode": cfg.mode}
    if inst is not None:
        footer.update(problem=inst.name, n=inst.n, K=inst.K)
    columns = list(RUN_COLUMNS)
    rows: list[dict] = []
    status = 0

    if cfg.mode == "plan_only":
        if inst is None:
            if None in (cfg.s, cfg.epsilon):
                raise UsageError("plan_only without a problem needs --m, --s and --epsilon")
            m, s, eps = _resolve_m(cfg, None), cfg.s, cfg.epsilon
        else:
            _, info = resolve_params(cfg, inst)
            m, s, eps = info["m"], info["s"], info["epsilon"]
        r = cfg.r if cfg.r is not None else 1.0
        lam, k = plan_parameters(m, s, eps, r)
        footer.update(m=m, s=s, epsilon=eps, r=r, **{"lambda": lam, "k": k})
        footer.update(_bounds_footer(s, eps, r, lam, m, k))
        columns = ["lambda", "k"]
        rows = [{"lambda": lam, "k": k}]

    elif cfg.mode == "brute_force":
        if inst is None:
            raise UsageError("brute_force needs a problem")
        if inst.n > BRUTE_FORCE_MAX_N:
            raise OversizeError(f"oversize: brute force limited to n <= {BRUTE_FORCE_MAX_N}, got n={inst.n}")
        rep = brute_force(inst)
        footer.update(
            global_optimum_value=rep.global_optimum_value,
            m_exact=rep.m_exact,
            local_optima_count=len(rep.local_optima),
            objective_values=" ".join(map(str, rep.objective_value_set)),
        )
        columns = ["genotype", "objective", "is_global"]
        rows = [
            {"genotype": bits_to_str(x), "objective": v, "is_global": v == rep.global_optimum_value}
            for x, v in zip(rep.local_optima, inst.objective(rep.local_optima).tolist())
        ]

    elif cfg.mode == "local_search":
        if inst is None:
            raise UsageError("local_search needs a problem")
        columns = ["run_index", "seed", "start", "local_optimum", "objective", "steps", "is_local_opt"]
        for i in range(cfg.runs):
            rng = np.random.default_rng(cfg.seed + i)
            x0 = rng.integers(0, 2, size=inst.n, dtype=np.uint8)
            if not inst.is_feasible(x0):
                x0 = inst.feasible_seed
            x, steps = local_search(inst, x0)
            rows.append({
                "run_index": i, "seed": cfg.seed + i, "start": bits_to_str(x0),
                "local_optimum": bits_to_str(x), "objective": inst.value(x), "steps": steps,
                "is_local_opt": is_local_optimum(inst, x),
            })

    else:
        if inst is None:
            raise UsageError(f"{cfg.mode} needs a problem")
        params, info = resolve_params(cfg, inst)
        footer.update(info)
        footer.update(_bounds_footer(info["s"], info["epsilon"], info["r"], params.pop_size, params.m, params.tournament_size))
        seeding = cfg.seeding or ("uniform" if inst.whole_space else "seeded_feasible")
        footer["seeding"] = seeding
        if cfg.timing:
            columns.append("wall_time")

        if cfg.mode in ("single_ga", "iterated_ga"):
            ok, bad = check_lemma_conditions(
                params.pop_size, params.tournament_size, info["r"], params.m, info["s"],
                info["epsilon"], inst.whole_space or seeding == "seeded_feasible",
            )
            footer["lemma_conditions"] = "ok" if ok else "; ".join(bad)
            for i in range(cfg.runs):
                seed = cfg.seed + i
                rng = np.random.default_rng(seed)
                t0 = time.perf_counter()
                if cfg.mode == "single_ga":
                    init = init_population(inst, params.pop_size, seeding, rng)
                    budget = cfg.budget if cfg.budget is not None else params.m
                    rec = run_ga(inst, params, init, budget, rng)
                else:
                    rec = run_iterated_ga(inst, params, cfg.restarts, rng, seeding=seeding)
                rows.append(_run_row(i, seed, rec, t0, cfg.timing))
        else:
            tests = ("lemma1",) if cfg.mode == "verify_lemma1" else (
                ("prop1", "iterated") if inst.whole_space else ("iterated",)
            )
            stats = verify_hitting_time(
                inst, params, cfg.runs, cfg.seed, tests=tests, seeding=seeding,
                prop1_budget=cfg.budget, restart_budget=cfg.restarts, workers=cfg.workers,
            )
            columns.insert(0, "campaign")
            for name in tests:
                for i, rec in enumerate(stats.records[name]):
                    row = _run_row(i, rec.seed, rec, 0.0, False)
                    row["campaign"] = name
                    rows.append(row)
            footer.update(stats.summary())
            footer["e_times_m"] = math.e * params.m
            if "wall_time" in columns:
                columns.remove("wall_time")
            status = 1 if stats.violation else 0

    text = format_results(rows, columns, footer, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)
    return status


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        return run_experiment(cfg)
    except OversizeError as exc:
        print(f"error: oversize instance: {exc}", file=sys.stderr)
        return 2
    except (UsageError, FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
