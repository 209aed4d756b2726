#!/usr/bin/env python3
"""Compare GA and MC searches at a matched evaluation budget, with the
published reinforcement-learning fit curve as a reference column.

    python scripts/method_comparison.py --l0 30 --seeds 0,1,2,3,4
"""

import argparse
import math

from fibbraid import GaConfig, McConfig, ga_search, mc_anneal, standard_gate
from fibbraid.cli import rl_reference_distance
from fibbraid.ga import planned_evaluations, with_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gate", default="H", choices=("X", "H", "T"))
    ap.add_argument("--l0", type=int, default=30)
    ap.add_argument("--seeds", default="0,1,2,3,4")
    ap.add_argument("--N", type=int, default=600)
    ap.add_argument("--G", type=int, default=1000)
    args = ap.parse_args()

    target = standard_gate(args.gate)
    seeds = [int(s) for s in args.seeds.split(",")]
    ga_cfg = GaConfig(population_size=args.N, generations=args.G,
                      word_length=args.l0, restarts=1)
    budget = planned_evaluations(ga_cfg)
    sweeps = budget // args.l0
    decay = math.exp(math.log(1e-4 / 0.1) / sweeps)  # cool over the whole run
    print(f"budget: {budget} distance evaluations per search; MC sweeps = {sweeps}")
    print(f"RL reference at L={args.l0}: d = {rl_reference_distance(args.l0):.4g}")

    ga_ds, mc_ds = [], []
    for seed in seeds:
        ga_d = ga_search(target, with_seed(ga_cfg, seed)).best.fitness_d
        mc_d = mc_anneal(target, McConfig(word_length=args.l0, sweeps=sweeps,
                                          temp_decay=decay, rng_seed=seed)).best_d
        ga_ds.append(ga_d)
        mc_ds.append(mc_d)
        print(f"seed {seed}:  GA d = {ga_d:.5f}   MC d = {mc_d:.5f}")

    median = lambda xs: sorted(xs)[len(xs) // 2]
    print(f"median GA = {median(ga_ds):.5f}   median MC = {median(mc_ds):.5f}")


if __name__ == "__main__":
    main()
