"""Exact continued-fraction arithmetic on rationals in (0, 1].

Expansions are tuples of positive ints ``(a1, ..., aL)`` meaning
``1/(a1 + 1/(a2 + ... + 1/aL))``.  The canonical form never ends in a 1
when ``L >= 2``; ``x = 1`` is ``(1,)`` and ``x = 0`` is the empty tuple.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import DomainError

CFExpansion = tuple[int, ...]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise DomainError(f"expected an exact rational, got {type(x).__name__}")


def _check_unit(x: Fraction) -> None:
    if not 0 < x <= 1:
        raise DomainError(f"x must lie in (0, 1], got {x}")


def canonicalize(digits) -> CFExpansion:
    """Fold a trailing 1 into its predecessor: [.., a, 1] -> [.., a + 1]."""
    d = list(digits)
    if any(a < 1 for a in d):
        raise DomainError(f"digits must be positive, got {d}")
    if len(d) >= 2 and d[-1] == 1:
        d.pop()
        d[-1] += 1
    return tuple(d)


def expand_ints(num: int, den: int) -> CFExpansion:
    """Euclidean algorithm on ``num/den`` with ``0 < num <= den``."""
    digits = []
    while num:
        a, r = divmod(den, num)
        digits.append(a)
        num, den = r, num
    return tuple(digits)


def cf_expand(x) -> CFExpansion:
    x = _as_fraction(x)
    _check_unit(x)
    return expand_ints(x.numerator, x.denominator)


def cf_value(digits) -> Fraction:
    p, q = 0, 1  # value of the empty tail
    for a in reversed(digits):
        if a < 1:
            raise DomainError(f"digits must be positive, got {list(digits)}")
        p, q = q, a * q + p
    return Fraction(p, q)


def gauss_map(x) -> Fraction:
    """h(x) = 1/x - floor(1/x); drops the leading digit."""
    x = _as_fraction(x)
    _check_unit(x)
    return Fraction(x.denominator % x.numerator, x.numerator)


def swap_digits(digits, p: int, q: int) -> CFExpansion:
    """Exchange digits p and q (1-based).

    Positions beyond the expansion length leave it untouched.  Short
    expansions form a measure-zero set, so this choice does not affect any
    integral.
    """
    if p < 1 or q < 1:
        raise DomainError(f"positions must be >= 1, got p={p}, q={q}")
    d = list(digits)
    if p > len(d) or q > len(d):
        return tuple(d)
    d[p - 1], d[q - 1] = d[q - 1], d[p - 1]
    return canonicalize(d)


def s_pq(x, p: int, q: int) -> Fraction:
    """Digit-swap operator S_{p,q}(x) on an exact rational."""
    return cf_value(swap_digits(cf_expand(x), p, q))
