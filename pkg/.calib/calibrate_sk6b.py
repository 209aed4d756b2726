"""Criterion 6(b) calibration: GA-enhanced SKA, H, l0=30, depth 3."""
import json, time
import fibbraid as fb

H = fb.standard_gate('H')
ga_cfg = fb.GaConfig(word_length=30, restarts=3, rng_seed=60102)  # full defaults otherwise
eng = fb.GaEngine(ga_cfg)
t0 = time.perf_counter()
res = fb.solovay_kitaev(H, fb.SkConfig(depth=3, base_length=30, base_engine=eng))
dt = time.perf_counter() - t0
out = {"chain": res.child_distances, "d": res.distance, "length": res.length,
       "base_calls": res.base_calls, "time_s": dt, "seed": 60102,
       "word_head": fb.format_word(res.word[:40])}
json.dump(out, open(".calib/sk6b.json", "w"), indent=1)
print(json.dumps(out, indent=1))
