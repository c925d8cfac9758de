"""Simulating a single-pixel camera.

A known object is illuminated by random binary patterns; a bucket detector
records one number per pattern, the total transmitted light. This script
builds the aircraft phantom, draws patterns, simulates noiseless and noisy
bucket values, and shows that the draw is reproducible from the seed.

Run:  python demos/01_forward_model.py [out_dir]
"""
import sys
from pathlib import Path

import numpy as np

from ghostedge import NoiseModel, generate_patterns, measure
from ghostedge.formats import load_patterns, save_measurements, save_patterns, write_pgm
from ghostedge.phantoms import aircraft

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output") / "forward"
out.mkdir(parents=True, exist_ok=True)

obj = aircraft(64)
write_pgm(out / "object.pgm", obj)
print(f"object: {obj.rows}x{obj.cols}, {np.mean(obj.pixels == 0):.1%} of pixels opaque")

# 200 patterns is under 5% of the 4096 pixels
patterns = generate_patterns(64, 64, 200, density=0.5, seed=0)
write_pgm(out / "pattern0.pgm", patterns.patterns[0].astype(float), bits=8)
print(f"patterns: M={patterns.count}, mean density {patterns.patterns.mean():.3f}")

y = measure(patterns, obj)
y_noisy = measure(patterns, obj, NoiseModel.gaussian(2.0), seed=0)
print(f"bucket values: mean {y.values.mean():.1f}, std {y.values.std():.1f}")
print(f"with sigma=2 detector noise: rms change {np.sqrt(np.mean((y_noisy.values - y.values) ** 2)):.2f}")

# the same seed regenerates the same patterns; a prefix of a longer draw is a shorter draw
assert generate_patterns(64, 64, 100, 0.5, 0) == patterns[:100]

save_patterns(out / "patterns.gipt", patterns)
save_measurements(out / "y.gims", y)
assert load_patterns(out / "patterns.gipt") == patterns
print(f"wrote {out}/patterns.gipt ({(out / 'patterns.gipt').stat().st_size} bytes, packed bits)")
