"""Calibration: full-default GA quality/time at paper scales."""
import json, time
import numpy as np
import fibbraid as fb

out = {}
H = fb.standard_gate('H')

# (6a) L=25 full defaults (restarts=3), 3 runs
runs = []
for seed in (101, 102, 103):
    cfg = fb.GaConfig(word_length=25, rng_seed=seed)  # full defaults N=3000 G=10000 P=0.1 restarts=3
    t0 = time.perf_counter()
    rep = fb.ga_search(H, cfg)
    runs.append({"seed": seed, "d": rep.best.fitness_d, "t": time.perf_counter()-t0,
                 "restart_best": [float(min(h)) for h in rep.histories]})
    print("L25", runs[-1], flush=True)
out["L25_defaults"] = runs

# (6b precursor) L=30 full defaults, restarts=1, a few seeds
runs = []
for seed in (201, 202, 203):
    cfg = fb.GaConfig(word_length=30, restarts=1, rng_seed=seed)
    t0 = time.perf_counter()
    rep = fb.ga_search(H, cfg)
    runs.append({"seed": seed, "d": rep.best.fitness_d, "t": time.perf_counter()-t0})
    print("L30", runs[-1], flush=True)
out["L30_r1"] = runs

# (6c) L=50, P=0 vs P=0.1, 5 seeds each, restarts=1
for P in (0.0, 0.1):
    runs = []
    for seed in (301, 302, 303, 304, 305):
        cfg = fb.GaConfig(word_length=50, mutation_prob=P, restarts=1, rng_seed=seed)
        t0 = time.perf_counter()
        rep = fb.ga_search(H, cfg)
        runs.append({"seed": seed, "d": rep.best.fitness_d, "t": time.perf_counter()-t0})
        print(f"L50 P={P}", runs[-1], flush=True)
    out[f"L50_P{P}"] = runs

json.dump(out, open(".calib/ga_calib.json", "w"), indent=1)
print("CALIBRATION DONE")
print("mean P=0:  ", np.mean([r["d"] for r in out["L50_P0.0"]]))
print("mean P=0.1:", np.mean([r["d"] for r in out["L50_P0.1"]]))
