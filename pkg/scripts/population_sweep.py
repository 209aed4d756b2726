#!/usr/bin/env python3
"""Sweep the GA population size N and report converged distance and time.

Desk-scaled by default (minutes); pass --full for the published scale
(N up to 6000 at G = 10000, hours).

    python scripts/population_sweep.py --out n_sweep.csv
    python scripts/population_sweep.py --full --gate H --l0 50
"""

import argparse
import csv
import time

from fibbraid import GaConfig, ga_search, standard_gate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gate", default="H", choices=("X", "H", "T"))
    ap.add_argument("--l0", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--full", action="store_true", help="published scale (slow)")
    ap.add_argument("--out", default="n_sweep.csv")
    args = ap.parse_args()

    populations = (600, 1800, 3000, 4200, 6000) if args.full else (150, 300, 600, 1200)
    generations = 10000 if args.full else 400
    target = standard_gate(args.gate)

    rows = []
    for n in populations:
        cfg = GaConfig(population_size=n, generations=generations,
                       word_length=args.l0, restarts=1, rng_seed=args.seed)
        t0 = time.perf_counter()
        report = ga_search(target, cfg)
        dt = time.perf_counter() - t0
        rows.append({"N": n, "G": generations, "L": args.l0,
                     "best_d": f"{report.best.fitness_d:.9g}", "time_s": f"{dt:.2f}"})
        print(f"N={n:5d}  d={report.best.fitness_d:.6g}  ({dt:.1f}s)")

    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
