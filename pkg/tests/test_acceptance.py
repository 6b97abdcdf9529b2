"""Exit criteria for the package, one test per criterion, each printing PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected in the terminal summary.  Criterion 7 is the long one.
"""
import math
import os
import time
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from cfzeta import selftest
from cfzeta.mobius import (
    ConditionalConvergenceWarning,
    SeriesTruncation,
    analytic_zeta_12,
    f_series,
    mobius_cell_integral,
    mobius_coeffs,
)
from cfzeta.spectral import pink_noise, power_spectrum, spectrum_fit, white_noise
from cfzeta.sums import SumSpec, eta_sum, shadow_identity_residual, zeta_pq_sum
from cfzeta.zeros import refine_many, refine_zero, zero_series

ORDINATES = (14.13, 21.02, 25.01, 30.42, 32.93)
SEEDS = (14.2, 21.0, 25.0, 30.4, 32.9)
WORKER_COUNTS = sorted({1, 4, os.cpu_count() or 1})

_outputs: dict = {}


def baseline_zeros(workers):
    key = ("c5", workers)
    if key not in _outputs:
        spec = SumSpec(151051, "baseline")
        _outputs[key] = refine_many(spec, [complex(0.5, t) for t in SEEDS], workers=workers)
    return _outputs[key]


def first_permuted_zero(workers):
    key = ("c6", workers)
    if key not in _outputs:
        _outputs[key] = refine_zero(SumSpec(90000, "permuted", 1, 2), 0.5 + 14.9j, workers=workers)
    return _outputs[key]


def noise_series(workers):
    key = ("c7", workers)
    if key not in _outputs:
        ser = zero_series(1, 2, 9000, 12000, workers=workers)
        fit = spectrum_fit(ser.component("im"))
        _outputs[key] = (ser, fit)
    return _outputs[key]


def cross_check(workers):
    key = ("c8", workers)
    if key not in _outputs:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditionalConvergenceWarning)
            res = analytic_zeta_12(2, SeriesTruncation(64, 200, 200), workers=workers)
        num = zeta_pq_sum(10**5, 1, 2, 2, workers=workers)
        _outputs[key] = (res, num)
    return _outputs[key]


def test_c1_exact_identities(report):
    t0 = time.perf_counter()
    checks = {
        "round-trip": selftest.check_roundtrip((10, 1000, 10007)),
        "involution+identity": selftest.check_involution(10_000),
        "determinant": selftest.check_determinant(100),
        "cell agreement": selftest.check_cells(50),
    }
    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < 60
    report("C1 exact identities", ok, f"{checks} in {dt:.1f}s")
    assert ok


def test_c2_shadow_identity(report):
    worst = max(
        shadow_identity_residual(N, complex(re, im))
        for N in (2, 10, 100, 11051)
        for re in np.linspace(-2, 3, 5)
        for im in np.linspace(0, 34, 5)
    )
    ok = worst <= 1e-12
    report("C2 shadow identity", ok, f"max residual {worst:.2e} (<= 1e-12)")
    assert ok


def test_c3_eta_limit(report):
    errs = [abs(eta_sum(N, 2) - 4 / 3) for N in (10**2, 10**3, 10**4, 10**5)]
    ok = errs[-1] < 1e-3 and all(b < a for a, b in zip(errs, errs[1:]))
    report("C3 eta limit", ok, "errors " + ", ".join(f"{e:.2e}" for e in errs))
    assert ok


def _quad_cell(piece, s):
    f = lambda x: piece(x) * x ** (s - 1)  # noqa: E731
    lo, hi = float(piece.cell_lo), float(piece.cell_hi)
    kw = dict(epsabs=1e-14, epsrel=1e-13, limit=400)
    return quad(lambda x: f(x).real, lo, hi, **kw)[0] + 1j * quad(lambda x: f(x).imag, lo, hi, **kw)[0]


def test_c4_f_series_oracle(report):
    t0 = time.perf_counter()
    closed = abs(f_series(1, 1, 1.0, 64) - f_series(1, 1, 0.0, 64) - (1 - math.log(2)))
    worst = 0.0
    for s in (2, 3, 0.5 + 14.92j):
        for a1 in range(1, 21):
            for a2 in range(1, 21):
                piece = mobius_coeffs(a1, a2)
                worst = max(worst, abs(mobius_cell_integral(piece, s) - _quad_cell(piece, s)))
    dt = time.perf_counter() - t0
    ok = closed < 1e-10 and worst < 1e-8 and dt < 60
    report("C4 F-series oracle", ok, f"1-ln2 error {closed:.1e}, worst cell {worst:.1e}, {dt:.1f}s")
    assert ok


def test_c5_baseline_zeros(report):
    recs = baseline_zeros(1)
    ok = all(r.converged and r.residual < 0.05 and abs(r.s_im - t) < 0.3 for r, t in zip(recs, ORDINATES))
    found = ", ".join(f"{r.s_re:.3f}+{r.s_im:.3f}i" for r in recs)
    report("C5 baseline zeros N=151051", ok, found)
    assert ok


def test_c6_first_permuted_zero(report):
    r = first_permuted_zero(1)
    ok = r.converged and abs(r.s_im - 14.92) <= 0.1 and 0.40 <= r.s_re <= 0.60
    report("C6 first S_12 zero N=90000", ok, f"s = {r.s_re:.4f}+{r.s_im:.4f}i, residual {r.residual:.1e}")
    assert ok


@pytest.mark.long
def test_c7_one_over_f(report):
    ser, fit = noise_series(1)
    failures = sum(not z.converged for z in ser.zeros)
    ok = len(ser.zeros) == 3001 and -1.5 <= fit.slope <= -0.5
    report("C7 1/f slope of Im s, N=9000..12000", ok,
           f"slope {fit.slope:.3f} over [{fit.fit_band[0]:.4f}, {fit.fit_band[1]:.4f}], {failures} unconverged")
    assert ok


def test_c8_analytic_vs_numeric(report):
    res, num = cross_check(1)
    rel = abs(res.value - num) / abs(num)
    ok = rel < 0.05
    report("C8 analytic vs numeric at s=2", ok, f"relative difference {rel:.2e}, tail {res.tail:.1e}")
    assert ok


def test_c9_synthetic_spectra(report):
    white = spectrum_fit(white_noise(4096, np.random.default_rng(11))).slope
    pink = spectrum_fit(pink_noise(4096, np.random.default_rng(12))).slope
    x = np.random.default_rng(13).standard_normal(3000)
    _, p = power_spectrum(x)
    parseval = abs(p.sum() / (x.size * x.var()) - 1)
    ok = abs(white) <= 0.2 and abs(pink + 1) <= 0.2 and parseval < 1e-10
    report("C9 synthetic spectra", ok, f"white {white:.3f}, 1/f {pink:.3f}, Parseval {parseval:.1e}")
    assert ok


@pytest.mark.long
def test_c10_determinism(report):
    def fingerprint(w):
        c5 = [(r.s_re, r.s_im, r.residual, r.iterations) for r in baseline_zeros(w)]
        r6 = first_permuted_zero(w)
        ser, fit = noise_series(w)
        c7 = ([(z.s_re, z.s_im, z.residual) for z in ser.zeros], fit.slope, fit.intercept)
        res, num = cross_check(w)
        return repr((c5, (r6.s_re, r6.s_im, r6.residual), c7, (res.value, res.tail, num)))

    prints = {w: fingerprint(w) for w in WORKER_COUNTS}
    ok = len(set(prints.values())) == 1
    report("C10 determinism", ok, f"criteria 5-8 identical for workers {WORKER_COUNTS}")
    assert ok
