"""Strip-chart data: |sum(s)| over 0 <= Re s <= 1, 13 <= Im s <= 34.

Writes one CSV per (kind, N) and prints the deepest local minima of each.

    python scripts/strip_charts.py --N 15 151 1051 11051 --kinds baseline permuted
"""
import argparse
from pathlib import Path

from cfzeta.cli import main as cli
from cfzeta.sums import GridSpec, SumSpec
from cfzeta.zeros import scan_zero_candidates

ap = argparse.ArgumentParser()
ap.add_argument("--N", type=int, nargs="+", default=[1051, 11051])
ap.add_argument("--kinds", nargs="+", default=["baseline", "permuted", "shadow"])
ap.add_argument("--p", type=int, default=1)
ap.add_argument("--q", type=int, default=2)
ap.add_argument("--step", type=float, default=0.05)
ap.add_argument("--outdir", default="out/strips")
a = ap.parse_args()

Path(a.outdir).mkdir(parents=True, exist_ok=True)
for kind in a.kinds:
    for N in a.N:
        tag = f"{kind}{a.p}{a.q}" if kind == "permuted" else kind
        out = Path(a.outdir) / f"{tag}_N{N}.csv"
        cli(["scan", "--kind", kind, "--N", str(N), "--p", str(a.p), "--q", str(a.q),
             "--re-step", str(a.step), "--im-step", str(a.step), "--out", str(out), "--resume"])
        grid = GridSpec(0, 1, 13, 34, a.step, a.step)
        cands = sorted(scan_zero_candidates(SumSpec(N, kind, a.p, a.q), grid, 0.5), key=lambda c: c[1])
        print(f"{tag} N={N}: " + ", ".join(f"{s.real:.2f}+{s.imag:.2f}i ({v:.3f})" for s, v in cands[:8]))
