"""Piecewise-Mobius evaluation of the S_{1,2} integral.

On the cell of x with leading digits (a1, a2), S_{1,2}(x) = (ax+b)/(cx+d)
with integer coefficients.  Each cell integral of (ax+b)/(cx+d) x^(s-1) is
written through the antiderivative

    F(s, alpha; x) = int x^s/(x+alpha) dx
                   = (-alpha)^s [ln(x+alpha)
                                 + sum_{k>=1} (-1)^k/k C(s,k) (1+x/alpha)^k]

a Newton series that converges for |1 + x/alpha| < 1.  For complex s with a
large imaginary part the binomials grow to ~1e10 before decaying, so those
cells are summed in extended precision (mpmath).  Where the Newton series
diverges on a cell (only a1=1, a2=2 in practice) the integrand is expanded in
powers of alpha/x instead.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import DomainError, PoleError, SingularCellError
from .reduce import tree_sum

# Newton ratio above which a cell switches to the reciprocal expansion.
NEWTON_RATIO_MAX = 0.9
KMAX_CAP = 4096
STABLE_RTOL = 1e-10


class SeriesDivergenceWarning(RuntimeWarning):
    pass


class ConditionalConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class MobiusPiece:
    a: int
    b: int
    c: int
    d: int
    cell_lo: Fraction
    cell_hi: Fraction
    a1: int
    a2: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __call__(self, x):
        return (self.a * x + self.b) / (self.c * x + self.d)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.d, self.c)


@dataclass(frozen=True)
class SeriesTruncation:
    kmax: int = 64
    a1max: int = 200
    a2max: int = 200
    adaptive: bool = True  # double kmax until stable, up to KMAX_CAP

    def __post_init__(self):
        if min(self.kmax, self.a1max, self.a2max) < 1:
            raise DomainError("truncations must be >= 1")


def mobius_coeffs(a1: int, a2: int) -> MobiusPiece:
    if a1 < 1 or a2 < 1:
        raise DomainError(f"digits must be >= 1, got {a1}, {a2}")
    return MobiusPiece(
        a=1 + a1 * (a2 - a1),
        b=a1 - a2,
        c=(a2 - a1) * (1 + a1 * a2),
        d=1 + a2 * (a1 - a2),
        cell_lo=Fraction(a2, 1 + a1 * a2),
        cell_hi=Fraction(1 + a2, 1 + a1 + a1 * a2),
        a1=a1,
        a2=a2,
    )


def binomials(s, kmax: int) -> list:
    """C(s, k) for k = 0..kmax by C(s,k) = C(s,k-1) (s-k+1)/k."""
    out = [s * 0 + 1]
    for k in range(1, kmax + 1):
        out.append(out[-1] * (s - k + 1) / k)
    return out


def _terminates(s) -> bool:
    """C(s, k) vanishes for k > s when s is a nonnegative integer."""
    s = complex(s)
    return s.imag == 0 and s.real >= 0 and float(s.real).is_integer()


def _ctx(dps):
    return mpmath.workdps(dps) if dps else _Null()


class _Null:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _num(x, dps):
    if dps:
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpmathify(x)
    return complex(x) if isinstance(x, complex) else float(x)


def _log(y, dps):
    if dps:
        return mpmath.log(y)
    return complex(np.log(complex(y)))


def _pow(base, s, dps):
    if dps:
        return mpmath.power(base, s)
    return complex(base) ** complex(s)


def f_series(s, alpha, x, kmax: int = 64, dps: int | None = None):
    """Truncated F(s, alpha; x) on the principal branch.

    Only differences in x are meaningful.  ``dps`` selects mpmath working
    precision; None uses complex doubles.
    """
    if kmax < 1:
        raise DomainError("kmax must be >= 1")
    alpha_f = Fraction(alpha) if not isinstance(alpha, float) else alpha
    if x + alpha_f == 0:
        raise SingularCellError(f"x = -alpha = {x}")
    if not _terminates(s) and abs(1 + x / alpha_f) >= 1:
        warnings.warn(
            f"Newton series outside its disc: |1 + x/alpha| = {abs(1 + x / alpha_f):.3g}",
            SeriesDivergenceWarning,
            stacklevel=2,
        )
    with _ctx(dps):
        s_ = _num(complex(s), dps)
        al = _num(alpha_f, dps)
        xx = _num(x, dps)
        u = 1 + xx / al
        acc = _log(xx + al, dps)
        bk = 1
        uk = 1
        for k in range(1, kmax + 1):
            bk = bk * (s_ - k + 1) / k
            uk = uk * u
            acc += (-1) ** k * bk * uk / k
        out = _pow(-al, s_, dps) * acc
        return complex(out)


def _newton_difference(s, alpha: Fraction, lo: Fraction, hi: Fraction, trunc: SeriesTruncation, dps):
    """F(s, alpha; hi) - F(s, alpha; lo), summing k to a stable truncation."""
    with _ctx(dps):
        s_ = _num(complex(s), dps)
        al = _num(alpha, dps)
        xl, xh = _num(lo, dps), _num(hi, dps)
        ul, uh = 1 + xl / al, 1 + xh / al
        # ln|y| difference; a constant i*pi from a negative y cancels
        acc = _log(abs(xh + al), dps) - _log(abs(xl + al), dps)
        bk, pl, ph = 1, 1, 1
        kmax = trunc.kmax
        last = None
        k = 0
        finite = _terminates(s)
        cap = int(complex(s).real) if finite else KMAX_CAP
        while True:
            while k < min(kmax, cap if finite else kmax):
                k += 1
                bk = bk * (s_ - k + 1) / k
                pl, ph = pl * ul, ph * uh
                acc += (-1) ** k * bk * (ph - pl) / k
            if finite or not trunc.adaptive:
                break
            cur = complex(acc)
            if last is not None and abs(cur - last) <= STABLE_RTOL * max(abs(cur), 1e-300):
                break
            if kmax >= KMAX_CAP:
                warnings.warn("Newton series not stable at kmax cap", SeriesDivergenceWarning, stacklevel=3)
                break
            last = cur
            kmax = min(2 * kmax, KMAX_CAP)
        return complex(_pow(-al, s_, dps) * acc)


def _reciprocal_difference(s, alpha: Fraction, lo: Fraction, hi: Fraction):
    """int_lo^hi x^s/(x+alpha) dx via x^s/(x+alpha) = sum_j (-alpha)^j x^(s-1-j), for x > |alpha|."""
    s = complex(s)
    al = float(alpha)
    xl, xh = float(lo), float(hi)
    ratio = abs(al) / xl
    need = int(math.ceil(math.log(1e-18) / math.log(ratio))) + 1 if ratio > 0 else 1
    acc = 0j
    coeff = 1.0
    for j in range(need + 1):
        e = s - j
        if e == 0:
            acc += coeff * (math.log(xh) - math.log(xl))
        else:
            acc += coeff * (xh**e - xl**e) / e
        coeff *= -al
    return acc


def _newton_ratio(alpha: Fraction, lo: Fraction, hi: Fraction) -> float:
    return float(max(abs(1 + lo / alpha), abs(1 + hi / alpha)))


def _precision_for(s, ratio: float) -> int | None:
    """mpmath digits needed to absorb the cancellation in the Newton series."""
    s = complex(s)
    if _terminates(s):
        return None
    bk, peak, k = 1.0 + 0j, 1.0, 0
    while k < KMAX_CAP:
        k += 1
        bk = bk * (s - k + 1) / k
        term = abs(bk) * ratio**k / k
        peak = max(peak, term)
        if k > abs(s) + 8 and term < peak * 1e-20:
            break
    lost = math.log10(peak)
    if lost < 2:
        return None
    return 20 + int(math.ceil(lost))


def definite_f(s, alpha: Fraction, lo: Fraction, hi: Fraction, trunc: SeriesTruncation):
    """F(s, alpha; hi) - F(s, alpha; lo), choosing a convergent expansion."""
    if lo == hi:
        return 0j
    ratio = _newton_ratio(alpha, lo, hi)
    if _terminates(s) or ratio <= NEWTON_RATIO_MAX:
        return _newton_difference(s, alpha, lo, hi, trunc, _precision_for(s, ratio))
    if lo + alpha > 0 and -alpha < lo:
        return _reciprocal_difference(s, alpha, lo, hi)
    raise SingularCellError(f"no convergent expansion on ({lo}, {hi}) for alpha={alpha}")


def _check_cell(piece: MobiusPiece) -> None:
    pole = -piece.alpha
    if piece.cell_lo <= pole <= piece.cell_hi:
        raise SingularCellError(f"pole {pole} inside cell ({piece.cell_lo}, {piece.cell_hi})")


def mobius_interval_integral(piece: MobiusPiece, s, lo: Fraction, hi: Fraction, trunc: SeriesTruncation = SeriesTruncation()) -> complex:
    """int_lo^hi (ax+b)/(cx+d) x^(s-1) dx."""
    s = complex(s)
    if s in (0, 1):
        raise PoleError(f"s must avoid 0 and 1, got {s}")
    if piece.c == 0:
        a, b = piece.a / piece.d, piece.b / piece.d
        xh, xl = float(hi), float(lo)
        return a * (xh ** (s + 1) - xl ** (s + 1)) / (s + 1) + b * (xh**s - xl**s) / s
    al = piece.alpha
    pole = -al
    if lo <= pole <= hi:
        raise SingularCellError(f"pole {pole} inside ({lo}, {hi})")
    # (ax+b)/(cx+d) x^(s-1) = (a/c) x^s/(x+alpha) + (b/c) x^(s-1)/(x+alpha)
    return (piece.a / piece.c) * definite_f(s, al, lo, hi, trunc) + (piece.b / piece.c) * definite_f(
        s - 1, al, lo, hi, trunc
    )


def mobius_cell_integral(piece: MobiusPiece, s, trunc: SeriesTruncation = SeriesTruncation()) -> complex:
    """Integral of the piece times x^(s-1) over its own cell."""
    if piece.c:
        _check_cell(piece)
    return mobius_interval_integral(piece, s, piece.cell_lo, piece.cell_hi, trunc)


def consolidated_integral(piece: MobiusPiece, s, lo: Fraction, hi: Fraction, kmax: int = 256, dps: int = 40) -> complex:
    """Single-series form of the cell integral, kept as a cross-check.

    (-alpha)^(s-1)/c^2 [-det ln(x+alpha)
                        + sum_k (-1)^k/k C(s-1,k) (1+x/alpha)^k (det s + k b c)/(k - s)]

    Upper signs correspond to det = +1.  Singular for integer s; valid only
    where the Newton series converges.
    """
    s = complex(s)
    if s.imag == 0 and float(s.real).is_integer():
        raise DomainError("consolidated form is singular at integer s")
    det, b, c = piece.det, piece.b, piece.c
    with mpmath.workdps(dps):
        s_ = mpmath.mpc(s)
        al = mpmath.mpf(piece.d) / piece.c
        xl = mpmath.mpf(lo.numerator) / lo.denominator
        xh = mpmath.mpf(hi.numerator) / hi.denominator
        ul, uh = 1 + xl / al, 1 + xh / al
        acc = -det * (mpmath.log(abs(xh + al)) - mpmath.log(abs(xl + al)))
        bk, pl, ph = mpmath.mpf(1), mpmath.mpf(1), mpmath.mpf(1)
        for k in range(1, kmax + 1):
            bk = bk * (s_ - 1 - k + 1) / k
            pl, ph = pl * ul, ph * uh
            acc += (-1) ** k * bk * (ph - pl) / k * (det * s_ + k * b * c) / (k - s_)
        return complex(mpmath.power(-al, s_ - 1) / c**2 * acc)


@dataclass(frozen=True)
class AnalyticResult:
    value: complex  # s/(s-1) - s * integral
    integral: complex  # truncated double sum of cell integrals
    tail: float  # |contribution of the outermost shell|
    covered_width: float  # total width of the cells summed


def _row(s, a1: int, trunc: SeriesTruncation) -> list[complex]:
    return [mobius_cell_integral(mobius_coeffs(a1, a2), s, trunc) for a2 in range(1, trunc.a2max + 1)]


def analytic_zeta_12(s, trunc: SeriesTruncation = SeriesTruncation(), workers: int = 1) -> AnalyticResult:
    """Assemble the S_{1,2} zeta from the truncated double sum over cells.

    Every cell integral is converged in k before cells are combined; the
    sums over k and over (a1, a2) must not be interchanged.
    """
    s = complex(s)
    if s in (0, 1):
        raise PoleError(f"s must avoid 0 and 1, got {s}")
    warnings.warn(
        "the double sum over cells converges only conditionally", ConditionalConvergenceWarning, stacklevel=2
    )
    a1s = range(1, trunc.a1max + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda a1: _row(s, a1, trunc), a1s))
    else:
        rows = [_row(s, a1, trunc) for a1 in a1s]
    grid = np.array(rows, dtype=np.complex128)
    integral = tree_sum(grid.ravel())
    shell = np.concatenate([grid[-1, :], grid[:-1, -1]])
    value = s / (s - 1) - s * integral
    return AnalyticResult(value, integral, abs(tree_sum(shell)), covered_width(trunc.a1max, trunc.a2max))


def covered_width(a1max: int, a2max: int) -> float:
    total = Fraction(0)
    for a1 in range(1, a1max + 1):
        for a2 in range(1, a2max + 1):
            p = mobius_coeffs(a1, a2)
            total += p.cell_hi - p.cell_lo
    return float(total)
