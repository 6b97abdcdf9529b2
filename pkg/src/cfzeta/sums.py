"""Truncated midpoint sums for the permuted, Gauss-map and shadow zetas.

All three share the form

    s/(s-1) - (s/N) * sum_n w_n * x_n**(s-1),    x_n = (2n+1)/(2N)

and differ only in the weights ``w_n`` (see :mod:`cfzeta.tables`).  The
partial zeta ``Z_N(s) = sum_{n=1}^N n**-s`` uses the same reduction.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DomainError, PoleError, SumOverflowError
from .reduce import CHUNK, chunked_sum, padded_length, split_ranges
from .tables import AbscissaTable, get_table, identity_weights

KINDS = ("permuted", "baseline", "shadow", "partial-zeta")


@dataclass(frozen=True)
class SumSpec:
    """Which sum to evaluate: ``N`` abscissas (or terms) and the kind."""

    N: int
    kind: str = "permuted"
    p: int = 1
    q: int = 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.N < 1:
            raise DomainError(f"N must be >= 1, got {self.N}")
        if self.kind == "permuted" and (self.p < 1 or self.q < 1):
            raise DomainError(f"p, q must be >= 1, got {self.p}, {self.q}")

    def __call__(self, s: complex, workers: int = 1) -> complex:
        return evaluate(self, s, workers)

    def label(self) -> str:
        if self.kind == "permuted":
            return f"permuted({self.p},{self.q})"
        return self.kind


@dataclass(frozen=True)
class GridSpec:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float
    re_step: float
    im_step: float

    def __post_init__(self):
        if not (self.re_lo < self.re_hi and self.im_lo < self.im_hi):
            raise DomainError("grid ranges need lo < hi on both axes")
        if not (self.re_step > 0 and self.im_step > 0):
            raise DomainError("grid steps must be positive")

    @staticmethod
    def _axis(lo: float, hi: float, step: float) -> np.ndarray:
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return lo + step * np.arange(count)

    def re_axis(self) -> np.ndarray:
        return self._axis(self.re_lo, self.re_hi, self.re_step)

    def im_axis(self) -> np.ndarray:
        return self._axis(self.im_lo, self.im_hi, self.im_step)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.im_axis()), len(self.re_axis())


def _check_s(s: complex) -> complex:
    s = complex(s)
    if s == 1:
        raise PoleError("s = 1 is a pole of s/(s-1)")
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError(f"s must be finite, got {s}")
    return s


def _finite(value: complex, what: str, s: complex) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise SumOverflowError(f"{what} is not finite at s={s}")
    return value


def weighted_power_sum(table: AbscissaTable, exponent: complex, workers: int = 1) -> complex:
    """sum_n w_n * exp(exponent * ln x_n) with the fixed chunk/tree order."""
    sig, t = exponent.real, exponent.imag
    w, lx = table.weights, table.logx

    def chunks(c0: int, c1: int) -> np.ndarray:
        l = lx[c0:c1]
        mag = w[c0:c1] * np.exp(sig * l)
        ph = t * l
        terms = mag * np.cos(ph) + 1j * (mag * np.sin(ph))
        return np.add.reduce(terms, axis=1)

    with np.errstate(over="ignore", invalid="ignore"):
        return chunked_sum(chunks, table.nchunks, workers)


def midpoint_zeta(table: AbscissaTable, s: complex, workers: int = 1) -> complex:
    s = _check_s(s)
    total = weighted_power_sum(table, s - 1, workers)
    value = s / (s - 1) - (s / table.N) * total
    return _finite(value, "sum", s)


def zeta_pq_sum(N: int, p: int, q: int, s: complex, workers: int = 1) -> complex:
    return midpoint_zeta(get_table(N, "permuted", p, q), s, workers)


def zeta_baseline_sum(N: int, s: complex, workers: int = 1) -> complex:
    return midpoint_zeta(get_table(N, "baseline"), s, workers)


def eta_sum(N: int, s: complex, workers: int = 1) -> complex:
    return midpoint_zeta(get_table(N, "shadow"), s, workers)


@functools.lru_cache(maxsize=8)
def _log_integers(N: int) -> np.ndarray:
    out = np.zeros(padded_length(N))
    out[:N] = np.log(np.arange(1, N + 1, dtype=np.float64))
    out = out.reshape(-1, CHUNK)
    out.flags.writeable = False
    return out


def _power_sum_integers(N: int, s: complex, workers: int = 1) -> complex:
    if N <= 0:
        return 0j
    ln = _log_integers(N)
    valid = np.zeros(ln.size, dtype=bool)
    valid[:N] = True
    valid = valid.reshape(ln.shape)
    sig, t = -s.real, -s.imag

    def chunks(c0: int, c1: int) -> np.ndarray:
        l = ln[c0:c1]
        mag = np.where(valid[c0:c1], np.exp(sig * l), 0.0)
        ph = t * l
        return np.add.reduce(mag * np.cos(ph) + 1j * (mag * np.sin(ph)), axis=1)

    with np.errstate(over="ignore", invalid="ignore"):
        return chunked_sum(chunks, ln.shape[0], workers)


def partial_zeta(N: int, s: complex, workers: int = 1) -> complex:
    """Z_N(s) = sum_{n=1}^{N} n**-s."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    s = complex(s)
    return _finite(_power_sum_integers(N, s, workers), "partial zeta", s)


def shadow_identity_residual(N: int, s: complex) -> float:
    """Relative mismatch of sum ((2n+1)/2N)^s against (2N)^-s [Z_{2N-1}(-s) - 2^s Z_{N-1}(-s)].

    Both sides are computed independently: the left from the abscissa logs,
    the right from integer logs.
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    s = complex(s)
    x = identity_weights(N)
    lhs = complex(np.sum(np.exp(s * np.log(x))))
    z_odd = _power_sum_integers(2 * N - 1, -s)
    z_half = _power_sum_integers(N - 1, -s)
    rhs = np.exp(-s * math.log(2 * N)) * (z_odd - np.exp(s * math.log(2)) * z_half)
    return abs(lhs - rhs) / (abs(lhs) + 1)


def evaluate(spec: SumSpec, s: complex, workers: int = 1) -> complex:
    if spec.kind == "partial-zeta":
        return partial_zeta(spec.N, s, workers)
    return midpoint_zeta(get_table(spec.N, spec.kind, spec.p, spec.q), s, workers)


def _scan_row(spec: SumSpec, im: float, re_axis: np.ndarray) -> np.ndarray:
    row = np.empty(len(re_axis))
    for j, re in enumerate(re_axis):
        try:
            row[j] = abs(evaluate(spec, complex(re, im)))
        except (PoleError, SumOverflowError):
            row[j] = np.nan
    return row


def scan_rows(spec: SumSpec, grid: GridSpec, rows, workers: int = 1):
    """Yield ``(row_index, im, |sum| row)`` in order; rows may run on a thread pool."""
    re_axis, im_axis = grid.re_axis(), grid.im_axis()
    rows = list(rows)
    if spec.kind != "partial-zeta":
        get_table(spec.N, spec.kind, spec.p, spec.q)  # build once, before threads share it
    if workers <= 1:
        for i in rows:
            yield i, im_axis[i], _scan_row(spec, im_axis[i], re_axis)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for batch in split_ranges(len(rows), max(1, len(rows) // workers)):
            idx = rows[batch[0] : batch[1]]
            futs = [pool.submit(_scan_row, spec, im_axis[i], re_axis) for i in idx]
            for i, fut in zip(idx, futs):
                yield i, im_axis[i], fut.result()


def strip_scan(spec: SumSpec, grid: GridSpec, workers: int = 1) -> np.ndarray:
    """|sum(s)| on the grid; ``out[i, j]`` is at ``s = re_axis[j] + i*im_axis[i]``.

    Poles and overflows are flagged as NaN cells.
    """
    out = np.empty(grid.shape)
    for i, _, row in scan_rows(spec, grid, range(grid.shape[0]), workers):
        out[i] = row
    return out


def phase_trace(spec: SumSpec, t_lo: float, t_hi: float, steps: int) -> list[tuple[float, float]]:
    """(Re, Im) of the sum along s = 1/2 + i t for equally spaced t."""
    if steps < 1:
        raise DomainError("steps must be >= 1")
    if steps > 1 and not t_lo < t_hi:
        raise DomainError("need t_lo < t_hi")
    ts = [t_lo] if steps == 1 else np.linspace(t_lo, t_hi, steps)
    out = []
    for t in ts:
        z = evaluate(spec, complex(0.5, float(t)))
        out.append((z.real, z.imag))
    return out
