import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cfzeta.errors import DomainError, PoleError, SumOverflowError
from cfzeta.reduce import CHUNK, tree_sum
from cfzeta.sums import (
    GridSpec,
    SumSpec,
    eta_sum,
    evaluate,
    partial_zeta,
    phase_trace,
    shadow_identity_residual,
    strip_scan,
    zeta_baseline_sum,
    zeta_pq_sum,
)


def brute_midpoint(N, weight, s):
    """Plain Python loop over exact abscissas, independent of the chunked path."""
    from fractions import Fraction

    acc = 0j
    for n in range(N):
        x = Fraction(2 * n + 1, 2 * N)
        acc += float(weight(x)) * complex(float(x)) ** (s - 1)
    return s / (s - 1) - s / N * acc


def test_single_abscissa():
    assert zeta_pq_sum(1, 1, 2, 2) == 1.5
    assert zeta_baseline_sum(1, 2) == 2.0
    assert eta_sum(1, 2) == 1.5


@pytest.mark.parametrize("N", [3, 100, 2049])
@pytest.mark.parametrize("s", [2, 0.5 + 14.13j, -1.5 + 3j])
def test_against_brute_force(N, s):
    from cfzeta.cf import gauss_map, s_pq

    assert zeta_pq_sum(N, 1, 2, s) == pytest.approx(brute_midpoint(N, lambda x: s_pq(x, 1, 2), s), rel=1e-12)
    assert zeta_baseline_sum(N, s) == pytest.approx(brute_midpoint(N, gauss_map, s), rel=1e-12)


@pytest.mark.parametrize("p", [1, 2, 5])
@pytest.mark.parametrize("N", [1, 50, 4000])
def test_swap_equal_positions_is_eta(N, p):
    for s in (2, 0.5 + 20j, -1 + 2j):
        assert zeta_pq_sum(N, p, p, s) == eta_sum(N, s)


def test_baseline_near_zeta2():
    assert abs(zeta_baseline_sum(10**5, 2) - math.pi**2 / 6) < 1e-2


def test_eta_limit_monotone():
    errs = [abs(eta_sum(N, 2) - 4 / 3) for N in (10**2, 10**3, 10**4, 10**5)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_partial_zeta():
    assert partial_zeta(3, 1) == pytest.approx(11 / 6, rel=1e-15)
    assert partial_zeta(1, 0.3 + 7j) == 1
    # sum_{n<5} ((2n+1)/10)^2 = 1.65 = (Z_9(-2) - 4 Z_4(-2)) / 100
    assert (partial_zeta(9, -2) - 4 * partial_zeta(4, -2)) / 100 == pytest.approx(1.65, rel=1e-14)


def test_shadow_residual_examples():
    assert shadow_identity_residual(5, 2) <= 1e-14
    assert shadow_identity_residual(11051, 0.5 + 20j) <= 1e-11
    assert shadow_identity_residual(2, 0) <= 1e-15


def test_shadow_lattice():
    worst = max(
        shadow_identity_residual(N, complex(re, im))
        for N in (2, 10, 100, 11051)
        for re in np.linspace(-2, 3, 5)
        for im in np.linspace(0, 34, 5)
    )
    assert worst <= 1e-12


def test_shadow_needs_two():
    with pytest.raises(DomainError):
        shadow_identity_residual(1, 2)


@pytest.mark.parametrize("spec", [SumSpec(50, "permuted"), SumSpec(50, "baseline"), SumSpec(50, "shadow"), SumSpec(50, "partial-zeta")])
def test_zero_at_origin(spec):
    if spec.kind == "partial-zeta":
        # Z_N(0) counts terms; only the midpoint sums carry the factor s
        assert evaluate(spec, 0) == 50
    else:
        assert evaluate(spec, 0) == 0


def test_pole():
    for f in (lambda: zeta_pq_sum(10, 1, 2, 1), lambda: zeta_baseline_sum(10, 1), lambda: eta_sum(10, 1 + 0j)):
        with pytest.raises(PoleError):
            f()


def test_overflow():
    with pytest.raises(SumOverflowError):
        zeta_baseline_sum(1000, -400)


def test_bad_spec():
    with pytest.raises(DomainError):
        SumSpec(0, "baseline")
    with pytest.raises(DomainError):
        SumSpec(10, "gamma")
    with pytest.raises(DomainError):
        SumSpec(10, "permuted", 0, 2)


@given(st.floats(-3, 3), st.floats(-40, 40))
def test_conjugate_symmetry(re, im):
    s = complex(re, im)
    if s == 1:
        return
    z, zc = zeta_pq_sum(3001, 1, 2, s), zeta_pq_sum(3001, 1, 2, s.conjugate())
    assert zc == pytest.approx(z.conjugate(), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("N", [1, 1023, 1024, 1025, 5000, 151051])
def test_worker_count_bit_identical(N):
    s = 0.5 + 14.13j
    ref = zeta_baseline_sum(N, s, workers=1)
    for w in (2, 3, 4, 8):
        assert zeta_baseline_sum(N, s, workers=w) == ref
    assert partial_zeta(N, s, workers=4) == partial_zeta(N, s, workers=1)


def test_repeatable():
    a = [zeta_pq_sum(90000, 1, 2, 0.5 + 14.9j) for _ in range(3)]
    assert a[0] == a[1] == a[2]


def test_tree_sum_padding():
    v = np.arange(1, 8, dtype=np.complex128)
    assert tree_sum(v) == 28
    assert tree_sum(np.array([], dtype=complex)) == 0
    assert CHUNK == 1024


def test_grid_axes():
    g = GridSpec(0, 1, 13, 34, 0.05, 0.05)
    assert g.shape == (421, 21)
    assert g.re_axis()[-1] == pytest.approx(1.0)
    with pytest.raises(DomainError):
        GridSpec(1, 0, 0, 1, 0.1, 0.1)
    with pytest.raises(DomainError):
        GridSpec(0, 1, 0, 1, 0, 0.1)


def test_scan_single_node():
    g = GridSpec(0.5, 0.6, 14.0, 14.1, 1.0, 1.0)
    for kind in ("permuted", "baseline", "shadow", "partial-zeta"):
        spec = SumSpec(200, kind)
        out = strip_scan(spec, g)
        assert out.shape == (1, 1)
        assert out[0, 0] == abs(evaluate(spec, 0.5 + 14j))


def test_scan_layout_and_pole_flag():
    g = GridSpec(0.0, 1.0, -0.5, 0.5, 0.5, 0.5)
    spec = SumSpec(100, "baseline")
    out = strip_scan(spec, g)
    assert out.shape == (3, 3)
    assert np.isnan(out[1, 2])  # s = 1
    assert out[0, 1] == abs(evaluate(spec, 0.5 - 0.5j))
    assert np.isfinite(np.delete(out.ravel(), 5)).all()


def test_scan_shadow_smooth_near_two():
    g = GridSpec(1.8, 2.2, -0.2, 0.2, 0.1, 0.1)
    out = strip_scan(SumSpec(10**5, "shadow"), g)
    s = g.re_axis()[None, :] + 1j * g.im_axis()[:, None]
    assert np.allclose(out, np.abs(2 * s / (s**2 - 1)), rtol=1e-4)


def test_scan_workers_identical():
    g = GridSpec(0.0, 1.0, 13, 15, 0.25, 0.25)
    spec = SumSpec(5000, "permuted")
    assert np.array_equal(strip_scan(spec, g, workers=1), strip_scan(spec, g, workers=3), equal_nan=True)


def test_phase_trace():
    spec = SumSpec(1000, "baseline")
    (pt,) = phase_trace(spec, 13.0, 34.0, 1)
    z = evaluate(spec, 0.5 + 13j)
    assert pt == (z.real, z.imag)
    assert len(phase_trace(spec, 13, 34, 7)) == 7
    with pytest.raises(DomainError):
        phase_trace(spec, 34, 13, 5)


def test_shadow_trace_stays_off_origin():
    pts = np.array(phase_trace(SumSpec(10**5, "shadow"), 13, 34, 200))
    z = pts[:, 0] + 1j * pts[:, 1]
    t = np.linspace(13, 34, 200)
    s = 0.5 + 1j * t
    limit = 2 * s / (s**2 - 1)
    assert np.min(np.abs(z)) > 0.5 * np.min(np.abs(limit))
    # winding of the trace about 0 is zero: no loops around the origin
    winding = np.sum(np.angle(z[1:] / z[:-1])) / (2 * cmath.pi)
    assert abs(winding) < 0.5


def test_baseline_trace_passes_origin_near_riemann_ordinates():
    t = np.linspace(13, 34, 1500)
    pts = np.array(phase_trace(SumSpec(11051, "baseline"), 13, 34, 1500))
    mod = np.hypot(pts[:, 0], pts[:, 1])
    for ordinate in (14.13, 21.02, 25.01, 30.42, 32.93):
        near = np.abs(t - ordinate) < 0.3
        assert mod[near].min() < 0.2
