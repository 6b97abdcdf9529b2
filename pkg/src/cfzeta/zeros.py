"""Locating zeros of the truncated sums.

Zeros are found as minima of |sum(s)|^2 with a derivative-free simplex
search.  Any local minimum of the modulus of an analytic function is a zero,
so a converged minimum with a small residual is a genuine zero of the
truncated sum (possibly an artifact zero, see :func:`classify_zero`).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, PoleError, SumOverflowError
from .sums import GridSpec, SumSpec, evaluate, strip_scan

DEFAULT_SEED = complex(0.5, 14.92)
DEFAULT_TOL = 1e-4
DEFAULT_THRESHOLD = 0.05
SIMPLEX_STEP = 0.02
SEARCH_RADIUS = 1.0


@dataclass(frozen=True)
class ZeroRecord:
    s_re: float
    s_im: float
    residual: float
    N: int
    kind: str
    iterations: int
    converged: bool

    @property
    def s(self) -> complex:
        return complex(self.s_re, self.s_im)

    def admitted(self, threshold: float = DEFAULT_THRESHOLD) -> bool:
        return self.converged and self.residual < threshold


@dataclass
class ZeroSeries:
    N_values: list[int] = field(default_factory=list)
    zeros: list[ZeroRecord] = field(default_factory=list)

    def append(self, rec: ZeroRecord) -> None:
        self.N_values.append(rec.N)
        self.zeros.append(rec)

    def component(self, which: str) -> np.ndarray:
        if which not in ("re", "im"):
            raise DomainError("component must be 're' or 'im'")
        return np.array([z.s_re if which == "re" else z.s_im for z in self.zeros])


def scan_zero_candidates(spec: SumSpec, grid: GridSpec, threshold: float, workers: int = 1) -> list[tuple[complex, float]]:
    """Grid nodes that are minima over their 8-neighbourhood and below threshold."""
    field_ = strip_scan(spec, grid, workers)
    re_axis, im_axis = grid.re_axis(), grid.im_axis()
    padded = np.pad(np.where(np.isnan(field_), np.inf, field_), 1, constant_values=np.inf)
    out = []
    rows, cols = field_.shape
    for i in range(rows):
        for j in range(cols):
            v = field_[i, j]
            if not v < threshold:
                continue
            hood = padded[i : i + 3, j : j + 3].copy()
            hood[1, 1] = np.inf
            if v <= hood.min():
                out.append((complex(re_axis[j], im_axis[i]), float(v)))
    return out


def _objective(spec: SumSpec, workers: int, center: complex, radius: float):
    def f(v):
        if abs(complex(v[0], v[1]) - center) > radius:
            return math.inf
        try:
            return abs(evaluate(spec, complex(v[0], v[1]), workers)) ** 2
        except (PoleError, SumOverflowError):
            return math.inf

    return f


def refine_zero(
    spec: SumSpec,
    seed: complex,
    tol: float = DEFAULT_TOL,
    max_iter: int = 500,
    method: str = "nelder-mead",
    workers: int = 1,
    radius: float = SEARCH_RADIUS,
) -> ZeroRecord:
    """Minimize |sum(s)|^2 from ``seed`` within ``radius`` of it.

    Converged means the simplex has shrunk below ``tol`` in both coordinates
    away from the edge of the search disc.  A record is always returned;
    check ``converged``.
    """
    seed = complex(seed)
    if seed == 1:
        raise PoleError("seed at the pole s = 1")
    x0 = np.array([seed.real, seed.imag])
    f = _objective(spec, workers, seed, radius)
    if method == "nelder-mead":
        simplex = np.array([x0, x0 + [SIMPLEX_STEP, 0.0], x0 + [0.0, SIMPLEX_STEP]])
        res = minimize(
            f, x0, method="Nelder-Mead",
            options=dict(initial_simplex=simplex, xatol=tol, fatol=math.inf, maxiter=max_iter),
        )
    elif method == "powell":
        res = minimize(f, x0, method="Powell", options=dict(xtol=tol, ftol=1e-30, maxiter=max_iter))
    else:
        raise DomainError(f"unknown method {method!r}")
    on_edge = abs(complex(res.x[0], res.x[1]) - seed) > radius - 2 * tol
    return ZeroRecord(
        s_re=float(res.x[0]),
        s_im=float(res.x[1]),
        residual=math.sqrt(res.fun) if math.isfinite(res.fun) else math.inf,
        N=spec.N,
        kind=spec.label(),
        iterations=int(res.nit),
        converged=bool(res.success) and not on_edge,
    )


def refine_many(spec: SumSpec, seeds, tol: float = DEFAULT_TOL, max_iter: int = 500, workers: int = 1) -> list[ZeroRecord]:
    """Independent refinements, one per seed, run concurrently."""
    seeds = list(seeds)
    if workers <= 1:
        return [refine_zero(spec, z, tol, max_iter) for z in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda z: refine_zero(spec, z, tol, max_iter), seeds))


def is_local_minimum(spec: SumSpec, rec: ZeroRecord, tol: float = DEFAULT_TOL) -> bool:
    """|sum| at the four axis neighbours (offset tol) is not below the residual."""
    s = rec.s
    for ds in (tol, -tol, 1j * tol, -1j * tol):
        if abs(evaluate(spec, s + ds)) < rec.residual:
            return False
    return True


def classify_zero(spec: SumSpec, rec: ZeroRecord, threshold: float = DEFAULT_THRESHOLD, tol: float = DEFAULT_TOL) -> str:
    """'dominant' if the zero persists at 2N (residual and location within 0.1), else 'artifact'."""
    doubled = SumSpec(2 * spec.N, spec.kind, spec.p, spec.q)
    again = refine_zero(doubled, rec.s, tol)
    if rec.admitted(threshold) and again.admitted(threshold) and abs(again.s - rec.s) < 0.1:
        return "dominant"
    return "artifact"


def iter_zero_series(
    p: int,
    q: int,
    N_values,
    seed: complex = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    max_iter: int = 500,
    warm_start: bool = True,
    workers: int = 1,
):
    """Yield one ZeroRecord per N, warm-starting each refinement from the last zero."""
    current = complex(seed)
    for N in N_values:
        rec = refine_zero(SumSpec(N, "permuted", p, q), current, tol, max_iter, workers=workers)
        yield rec
        if warm_start and rec.converged and math.isfinite(rec.residual):
            current = rec.s


def zero_series(
    p: int,
    q: int,
    N_lo: int,
    N_hi: int,
    N_step: int = 1,
    seed: complex = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    max_iter: int = 500,
    warm_start: bool = True,
    workers: int = 1,
) -> ZeroSeries:
    """First-zero track of the permuted sum as N runs from N_lo to N_hi.

    Failed refinements are kept (``converged=False``) and the series goes on
    from the last good zero.
    """
    if N_lo > N_hi or N_step < 1 or N_lo < 1:
        raise DomainError("need 1 <= N_lo <= N_hi and N_step >= 1")
    out = ZeroSeries()
    for rec in iter_zero_series(p, q, range(N_lo, N_hi + 1, N_step), seed, tol, max_iter, warm_start, workers):
        out.append(rec)
    return out
