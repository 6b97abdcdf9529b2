"""Track the first zero of the (p, q) sum over a run of N and fit the 1/f slope.

    python scripts/first_zero_noise.py --N-lo 9000 --N-hi 12000
"""
import argparse
import json
from pathlib import Path

from cfzeta.cli import main as cli

ap = argparse.ArgumentParser()
ap.add_argument("--p", type=int, default=1)
ap.add_argument("--q", type=int, default=2)
ap.add_argument("--N-lo", type=int, default=9000)
ap.add_argument("--N-hi", type=int, default=12000)
ap.add_argument("--outdir", default="out/noise")
a = ap.parse_args()

out = Path(a.outdir)
out.mkdir(parents=True, exist_ok=True)
zeros = out / f"zeros_{a.p}{a.q}_{a.N_lo}_{a.N_hi}.csv"
cli(["zero-series", "--p", str(a.p), "--q", str(a.q), "--N-lo", str(a.N_lo), "--N-hi", str(a.N_hi),
     "--out", str(zeros), "--resume"])
for comp in ("re", "im"):
    cli(["spectrum", "--input", str(zeros), "--component", comp, "--out", str(out / f"spectrum_{comp}.csv"),
         "--summary", str(out / f"fit_{comp}.json")])
    print(comp, json.loads((out / f"fit_{comp}.json").read_text())["slope"])
