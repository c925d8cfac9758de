"""How much does the filter stage help, and how does quality scale with M?

Compares three reconstructions of the same measurements: correlation ghost
imaging (CGI), Landweber steps alone, and the joint iteration. Then sweeps the
number of patterns and renders PSNR against M as a PGM plot.

Run:  python demos/04_ablation_and_sweep.py [out_dir]
"""
import sys
from pathlib import Path

from ghostedge import (
    edge_response_selfguided,
    generate_patterns,
    measure,
    psnr,
    reconstruct_cgi,
    reconstruct_jigi,
    reconstruct_plir_only,
    snr,
)
from ghostedge.config import RunConfig
from ghostedge.experiments import run_sweep
from ghostedge.formats import write_pgm, write_raster_pgm
from ghostedge.metrics import ground_truth_edge
from ghostedge.phantoms import aircraft
from ghostedge.plotting import render_line_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output") / "ablation"
out.mkdir(parents=True, exist_ok=True)

obj = aircraft(64)
mask, _ = ground_truth_edge(obj)
patterns = generate_patterns(64, 64, 200, seed=0)
y = measure(patterns, obj)

cgi = reconstruct_cgi(patterns, y)
plir = reconstruct_plir_only(patterns, y)
jigi = reconstruct_jigi(patterns, y)
rows = [
    ("CGI", cgi, edge_response_selfguided(cgi)),
    ("Landweber only", plir.image, plir.edge),
    ("joint iteration", jigi.image, jigi.edge),
]
print(f"{'method':<16} {'image PSNR':>10} {'edge SNR':>9}")
for name, image, edge in rows:
    print(f"{name:<16} {psnr(obj, image):10.2f} {snr(edge, mask):9.3f}")
    write_pgm(out / f"{name.replace(' ', '_')}.pgm", image)

cfg = RunConfig(m_values=[50, 100, 150, 200, 250])
points = run_sweep(obj, cfg)
print(f"\n{'M':>4} {'image PSNR':>10} {'edge PSNR':>9} {'iterations':>10}")
for p in points:
    print(f"{p.m:4d} {p.image_psnr:10.2f} {p.edge_psnr:9.2f} {p.iterations:10d}")
plot = render_line_plot([p.m for p in points],
                        [[p.image_psnr for p in points], [p.edge_psnr for p in points]])
write_raster_pgm(out / "psnr_vs_m.pgm", plot)
print(f"plot written to {out}/psnr_vs_m.pgm (dark: image, light: edge)")
