"""Command-line front end: compile, sweep, compare, verify, cache.

Config precedence is built-in defaults < --config JSON file < explicit
flags; the fully resolved config is echoed into every artifact.  Artifact
floats are serialized with 9 significant digits.  Exit codes: 0 ok,
2 parse/config error, 3 evaluation-budget refusal.

CSV schemas (column order is fixed):
  sweep.v1:   method, axis, value, seed, gate, length, best_d,
              evaluations, wall_time_s
  compare.v1: method, l0, order, length, seed, gate, best_d, d_quat,
              quat_inner_sign, rl_reference_d, evaluations, wall_time_s
The rl_reference_d column inverts the published reinforcement-learning fit
L = 1.55 * ln(1/eps)^1.6 at each row's length; it is a reference curve, not
a run.  quat_inner_sign = -1 flags rows where the unsigned quaternion
distance differs from the signed variant.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import baselines, braids, ga, sk

COMPILE_SCHEMA = "fibbraid.compile.v1"
SWEEP_SCHEMA = "fibbraid.sweep.v1"
COMPARE_SCHEMA = "fibbraid.compare.v1"

SWEEP_COLUMNS = [
    "method", "axis", "value", "seed", "gate", "length",
    "best_d", "evaluations", "wall_time_s",
]
COMPARE_COLUMNS = [
    "method", "l0", "order", "length", "seed", "gate", "best_d",
    "d_quat", "quat_inner_sign", "rl_reference_d", "evaluations", "wall_time_s",
]


@dataclass
class RunConfig:
    gate: str = "H"
    method: str = "ga"
    l0: int = 30
    order: int = 0
    alphabet: str | None = None  # None: aB for ga/bf/mitm, AaBb for mc
    N: int = 3000
    T: int | None = None
    P: float = 0.1
    G: int = 10000
    pool: int | None = None
    restarts: int = 3
    early_stop: float | None = None
    sweeps: int | None = None
    mc_t0: float = 0.1
    mc_decay: float = 0.97
    seed: int = 0
    threads: int = 1
    budget: int = baselines.DEFAULT_BUDGET
    cache_dir: str | None = None
    out: str | None = None

    def resolved_alphabet(self) -> str:
        if self.alphabet is not None:
            return braids.parse_alphabet(self.alphabet)
        return "AaBb" if self.method == "mc" else "aB"


def _load_config_file(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **_load_config_file(args.config))
    overrides = {
        f.name: getattr(args, f.name)
        for f in fields(RunConfig)
        if getattr(args, f.name, None) is not None
    }
    return replace(cfg, **overrides)


def parse_gate(text: str) -> braids.GateTarget:
    """X / H / T by name, or a custom matrix as 8 comma-separated floats
    (re, im interleaved, row-major)."""
    if text in ("X", "H", "T"):
        return braids.standard_gate(text)
    parts = text.replace(",", " ").split()
    if len(parts) != 8:
        raise ValueError(
            f"gate must be X, H, T or 8 floats (re,im row-major), got {text!r}"
        )
    vals = [float(p) for p in parts]
    matrix = np.array(
        [
            [complex(vals[0], vals[1]), complex(vals[2], vals[3])],
            [complex(vals[4], vals[5]), complex(vals[6], vals[7])],
        ]
    )
    return braids.custom_gate(matrix)


def rl_reference_distance(length: float) -> float:
    """Invert L = 1.55 * ln(1/eps)^1.6 for eps at the given length."""
    return math.exp(-((length / 1.55) ** (1.0 / 1.6)))


def _round9(obj):
    if isinstance(obj, float):
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_round9(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _write_csv(path: str, schema: str, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema: {schema}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])


def build_engine(cfg: RunConfig):
    alphabet = cfg.resolved_alphabet()
    if cfg.method == "ga":
        ga_cfg = ga.GaConfig(
            population_size=cfg.N,
            crossover_count=cfg.T,
            mutation_prob=cfg.P,
            generations=cfg.G,
            parent_pool_size=cfg.pool,
            word_length=cfg.l0,
            alphabet=alphabet,
            restarts=cfg.restarts,
            rng_seed=cfg.seed,
            early_stop_d=cfg.early_stop,
        )
        return sk.GaEngine(ga_cfg, threads=cfg.threads)
    if cfg.method == "bf":
        return sk.BfEngine(cfg.l0, alphabet, budget=cfg.budget, threads=cfg.threads)
    if cfg.method == "mitm":
        return sk.MitmEngine(
            cfg.l0, alphabet, cache_dir=cfg.cache_dir, budget=cfg.budget, threads=cfg.threads
        )
    if cfg.method == "mc":
        mc_cfg = baselines.McConfig(
            word_length=cfg.l0,
            alphabet=alphabet,
            sweeps=cfg.sweeps if cfg.sweeps is not None else 200,
            temp_initial=cfg.mc_t0,
            temp_decay=cfg.mc_decay,
            rng_seed=cfg.seed,
        )
        return sk.McEngine(mc_cfg)
    raise ValueError(f"unknown method {cfg.method!r}; expected ga, bf, mitm or mc")


def run_compile(cfg: RunConfig):
    """Shared core for compile / sweep / compare: returns (result, engine, dt)."""
    gate = parse_gate(cfg.gate)
    engine = build_engine(cfg)
    t0 = time.perf_counter()
    result = sk.solovay_kitaev(
        gate, sk.SkConfig(depth=cfg.order, base_length=cfg.l0, base_engine=engine)
    )
    return result, engine, time.perf_counter() - t0


def _config_dict(cfg: RunConfig) -> dict:
    data = asdict(cfg)
    data["alphabet"] = cfg.resolved_alphabet()
    return data


def cmd_compile(args) -> int:
    cfg = resolve_config(args)
    result, engine, dt = run_compile(cfg)
    out = cfg.out or f"{result.gate}_{cfg.method}_l{cfg.l0}_n{cfg.order}.json"
    payload = {
        "schema": COMPILE_SCHEMA,
        "command": "compile",
        "config": _config_dict(cfg),
        "method": cfg.method,
        "result": sk.sk_result_json(result, cfg.l0),
        "evaluations": engine.evaluations,
        "base_calls": result.base_calls,
        "wall_time_s": dt,
    }
    _write_json(out, payload)
    print(f"gate {result.gate}  method {cfg.method}  l0 {cfg.l0}  order {cfg.order}")
    print(f"word: {braids.format_word(result.word)}")
    print(f"d = {result.distance:.9g}  (length {result.length})")
    if result.non_monotonic_orders:
        print(f"note: distance not monotone at orders {result.non_monotonic_orders}")
    print(f"artifact: {out}")
    return 0


_SWEEP_AXES = ("N", "P", "G", "l0", "L", "alphabet", "order")


def _apply_axis(cfg: RunConfig, axis: str, raw: str) -> RunConfig:
    if axis == "N":
        return replace(cfg, N=int(raw))
    if axis == "P":
        return replace(cfg, P=float(raw))
    if axis == "G":
        return replace(cfg, G=int(raw))
    if axis in ("l0", "L"):
        return replace(cfg, l0=int(raw))
    if axis == "alphabet":
        return replace(cfg, alphabet=raw)
    if axis == "order":
        return replace(cfg, order=int(raw))
    raise ValueError(f"axis must be one of {_SWEEP_AXES}")


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    if args.axis not in _SWEEP_AXES:
        raise ValueError(f"axis must be one of {_SWEEP_AXES}")
    values = [v for v in args.values.split(",") if v]
    if not values:
        raise ValueError("--values must list at least one value")
    seeds = [int(s) for s in args.seeds.split(",")]
    rows = []
    for raw in values:
        for seed in seeds:
            run_cfg = replace(_apply_axis(cfg, args.axis, raw), seed=seed)
            result, engine, dt = run_compile(run_cfg)
            rows.append(
                {
                    "method": run_cfg.method,
                    "axis": args.axis,
                    "value": raw,
                    "seed": seed,
                    "gate": result.gate,
                    "length": result.length,
                    "best_d": result.distance,
                    "evaluations": engine.evaluations,
                    "wall_time_s": dt,
                }
            )
    out = cfg.out or "sweep.csv"
    _write_csv(out, SWEEP_SCHEMA, SWEEP_COLUMNS, rows)
    print(f"{len(rows)} rows -> {out}")
    return 0


def cmd_compare(args) -> int:
    cfg = resolve_config(args)
    methods = [m for m in args.methods.split(",") if m]
    if len(methods) < 2:
        raise ValueError("compare needs at least two methods")
    orders = [int(o) for o in args.orders.split(",")]
    seeds = [int(s) for s in args.seeds.split(",")]
    gate = parse_gate(cfg.gate)
    tmat = gate.matrix

    # match the MC evaluation budget to the GA's planned spend per search
    mc_sweeps = cfg.sweeps
    if mc_sweeps is None and "ga" in methods and "mc" in methods:
        ga_cfg = ga.GaConfig(
            population_size=cfg.N, crossover_count=cfg.T, mutation_prob=cfg.P,
            generations=cfg.G, parent_pool_size=cfg.pool, word_length=cfg.l0,
            alphabet="aB", restarts=cfg.restarts,
        )
        mc_sweeps = max(1, ga.planned_evaluations(ga_cfg) // cfg.l0)

    rows = []
    for method in methods:
        for order in orders:
            for seed in seeds:
                run_cfg = replace(cfg, method=method, order=order, seed=seed, sweeps=mc_sweeps)
                result, engine, dt = run_compile(run_cfg)
                approx = braids.evaluate(result.word)
                rows.append(
                    {
                        "method": method,
                        "l0": run_cfg.l0,
                        "order": order,
                        "length": result.length,
                        "seed": seed,
                        "gate": result.gate,
                        "best_d": result.distance,
                        "d_quat": braids.distance_quaternion(tmat, approx),
                        "quat_inner_sign": braids.quaternion_inner_sign(tmat, approx),
                        "rl_reference_d": rl_reference_distance(result.length),
                        "evaluations": engine.evaluations,
                        "wall_time_s": dt,
                    }
                )
    out = cfg.out or "compare.csv"
    _write_csv(out, COMPARE_SCHEMA, COMPARE_COLUMNS, rows)
    print(f"{len(rows)} rows -> {out}")
    return 0


def cmd_verify(args) -> int:
    gate = parse_gate(args.gate)
    word = braids.parse_word(args.word)
    approx = braids.evaluate(word)
    print(f"L = {len(word)}")
    print(f"d_phase_invariant = {braids.distance_phase_invariant(gate.matrix, approx):.9g}")
    print(f"d_quaternion = {braids.distance_quaternion(gate.matrix, approx):.9g}")
    print(f"simplified_length = {len(braids.simplify(word))}")
    return 0


def cmd_cache(args) -> int:
    cfg = resolve_config(args)
    alphabet = cfg.resolved_alphabet()
    path = baselines.table_cache_path(cfg.l0, alphabet, cfg.cache_dir)
    if args.cache_cmd == "build":
        table = baselines.load_or_build_table(
            cfg.l0, alphabet, cache_dir=cfg.cache_dir, budget=cfg.budget, threads=cfg.threads
        )
        print(f"l = {table.length}  alphabet = {table.alphabet}  entries = {table.entry_count}")
        print(f"cache: {path}")
        return 0
    if args.cache_cmd == "inspect":
        if not path.exists():
            print(f"no cache at {path}", file=sys.stderr)
            return 2
        table = baselines.EnumerationTable.load(path)
        print(f"l = {table.length}  alphabet = {table.alphabet}  entries = {table.entry_count}")
        print(f"file: {path}  ({path.stat().st_size} bytes)")
        return 0
    raise ValueError("cache expects a build or inspect subcommand")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibbraid",
        description="Compile single-qubit gates into Fibonacci-anyon braid words.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (defaults < file < flags)")
    common.add_argument("--gate", help="X, H, T or 8 floats (re,im row-major)")
    common.add_argument("--method", choices=("ga", "bf", "mitm", "mc"))
    common.add_argument("--l0", type=int, help="base word length")
    common.add_argument("--order", type=int, help="recursion depth n")
    common.add_argument("--alphabet", help="letters over AaBb, e.g. aB")
    common.add_argument("--N", type=int, help="GA population size")
    common.add_argument("--T", type=int, help="GA crossovers per generation")
    common.add_argument("--P", type=float, help="GA mutation probability")
    common.add_argument("--G", type=int, help="GA generations")
    common.add_argument("--pool", type=int, help="GA survivor pool size")
    common.add_argument("--restarts", type=int, help="GA independent restarts")
    common.add_argument("--early-stop", dest="early_stop", type=float)
    common.add_argument("--sweeps", type=int, help="MC sweeps")
    common.add_argument("--mc-t0", dest="mc_t0", type=float, help="MC initial temperature")
    common.add_argument("--mc-decay", dest="mc_decay", type=float, help="MC decay per sweep")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--budget", type=int, help="max exhaustive evaluations")
    common.add_argument("--cache-dir", dest="cache_dir", help="enumeration cache directory")
    common.add_argument("--out", help="output artifact path")

    p = sub.add_parser("compile", parents=[common], help="compile one gate")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("sweep", parents=[common], help="parameter sweep to CSV")
    p.add_argument("--axis", required=True, choices=_SWEEP_AXES)
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--seeds", default="0", help="comma-separated seeds")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", parents=[common], help="method comparison to CSV")
    p.add_argument("--methods", required=True, help="comma-separated, at least two")
    p.add_argument("--orders", default="0", help="comma-separated recursion depths")
    p.add_argument("--seeds", default="0", help="comma-separated seeds")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="re-check a braid word against a gate")
    p.add_argument("--word", required=True, help="braid word text, e.g. aBBa")
    p.add_argument("--gate", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cache", parents=[common], help="enumeration-table cache")
    p.add_argument("cache_cmd", choices=("build", "inspect"))
    p.set_defaults(func=cmd_cache)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except baselines.BudgetExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
