#!/usr/bin/env python3
"""Distance vs recursion order for several base lengths (the order/length
trade-off: a 2-order compile at a long base can match a 3-order compile at
a shorter one while braiding far fewer elementary operations).

Desk-scaled defaults; --full uses the published GA settings (very slow).

    python scripts/order_length_tradeoff.py --gate H --orders 0,1,2
"""

import argparse
import csv

from fibbraid import GaConfig, GaEngine, SkConfig, solovay_kitaev, standard_gate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gate", default="H", choices=("X", "H", "T"))
    ap.add_argument("--base-lengths", default="20,30,50")
    ap.add_argument("--orders", default="0,1,2")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--full", action="store_true", help="published GA settings (slow)")
    ap.add_argument("--out", default="order_tradeoff.csv")
    args = ap.parse_args()

    target = standard_gate(args.gate)
    orders = [int(x) for x in args.orders.split(",")]
    rows = []
    for l0 in (int(x) for x in args.base_lengths.split(",")):
        if args.full:
            ga_cfg = GaConfig(word_length=l0, rng_seed=args.seed)
        else:
            ga_cfg = GaConfig(population_size=300, generations=800, word_length=l0,
                              restarts=1, rng_seed=args.seed)
        depth = max(orders)
        result = solovay_kitaev(
            target, SkConfig(depth=depth, base_length=l0, base_engine=GaEngine(ga_cfg))
        )
        for order in orders:
            rows.append({
                "gate": args.gate, "l0": l0, "order": order,
                "length": l0 * 5**order,
                "d": f"{result.child_distances[order]:.9g}",
            })
            print(f"l0={l0:3d} order={order}  L={l0 * 5**order:6d}  d={result.child_distances[order]:.6g}")
        if result.non_monotonic_orders:
            print(f"  note: non-monotone at orders {result.non_monotonic_orders}")

    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
