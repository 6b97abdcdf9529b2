"""First zero of the S_{1,2} sum on a sparse logarithmic ladder of N.

    python scripts/log_ladder.py --max-exp 5.5
"""
import argparse

import numpy as np

from cfzeta.sums import SumSpec
from cfzeta.zeros import refine_zero

ap = argparse.ArgumentParser()
ap.add_argument("--min-exp", type=float, default=3.0)
ap.add_argument("--max-exp", type=float, default=5.0)
ap.add_argument("--per-decade", type=int, default=4)
ap.add_argument("--tol", type=float, default=1e-6)
a = ap.parse_args()

seed = 0.5 + 14.92j
count = int(round((a.max_exp - a.min_exp) * a.per_decade)) + 1
print("N,re_s,im_s,residual,converged")
for N in np.unique(np.round(np.logspace(a.min_exp, a.max_exp, count)).astype(int)):
    rec = refine_zero(SumSpec(int(N), "permuted", 1, 2), seed, a.tol)
    print(f"{N},{rec.s_re:.10f},{rec.s_im:.10f},{rec.residual:.3e},{int(rec.converged)}")
    if rec.converged:
        seed = rec.s
