"""Exact abscissa tables for the midpoint sums.

For a fixed ``N`` the abscissas are ``x_n = (2n+1)/(2N)``.  Each table holds
the weight ``f(x_n)`` for one choice of ``f`` (the digit swap S_{p,q}, the
Gauss map, or the identity) together with ``ln x_n``.  Weights are computed
in exact integer arithmetic and rounded to double once, at the end.

Arrays are stored padded to a whole number of reduction chunks (see
:mod:`cfzeta.reduce`): padding entries carry weight 0 and log 0.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cf import cf_value, expand_ints, swap_digits
from .errors import DomainError
from .reduce import CHUNK, padded_length

# Continuant numerators/denominators must stay below this for int64 work
# and for exact int -> float conversion.
_EXACT_FLOAT_LIMIT = 2**53


@dataclass(frozen=True)
class AbscissaTable:
    N: int
    key: str
    weights: np.ndarray  # shape (nchunks, CHUNK), float64
    logx: np.ndarray  # shape (nchunks, CHUNK), float64

    @property
    def nchunks(self) -> int:
        return self.weights.shape[0]

    def flat_weights(self) -> np.ndarray:
        return self.weights.ravel()[: self.N]


def midpoints(N: int) -> tuple[np.ndarray, int]:
    """Numerators ``2n+1`` (int64) and the common denominator ``2N``."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    return np.arange(1, 2 * N, 2, dtype=np.int64), 2 * N


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Correctly rounded num/den for nonnegative int64 arrays."""
    if den.size and max(int(num.max()), int(den.max())) >= _EXACT_FLOAT_LIMIT:
        return np.array([float(Fraction(int(a), int(b))) for a, b in zip(num, den)])
    return num.astype(np.float64) / den.astype(np.float64)


def swap_weights(N: int, p: int, q: int) -> np.ndarray:
    """S_{p,q}((2n+1)/(2N)) for n = 0..N-1, exact then rounded to double.

    Runs the Euclidean algorithm on all abscissas at once for
    ``max(p, q)`` steps, then rebuilds the value from the swapped digits and
    the untouched tail.
    """
    if p < 1 or q < 1:
        raise DomainError(f"positions must be >= 1, got p={p}, q={q}")
    u, v = midpoints(N)
    if p == q:
        return _ratio(u, np.full_like(u, v))
    m = max(p, q)
    if 2.0 ** (m + 1) * float(v) ** 2 >= _EXACT_FLOAT_LIMIT:
        return _swap_weights_slow(N, p, q)

    num = u.copy()
    den = np.full_like(u, v)
    length = np.zeros_like(u)
    digits = np.zeros((m, u.size), dtype=np.int64)
    for k in range(m):
        live = num > 0
        safe = np.where(live, num, 1)
        a = np.where(live, den // safe, 0)
        rem = den - a * num
        digits[k] = a
        length += live
        den = np.where(live, num, den)
        num = np.where(live, rem, num)

    swapped = digits.copy()
    swapped[[p - 1, q - 1]] = digits[[q - 1, p - 1]]
    # tail value num/den; an exhausted expansion has tail 0 = 0/1
    P = num.copy()
    Q = np.where(num == 0, 1, den)
    g = np.gcd(P, Q)
    P //= g
    Q //= g
    for k in range(m - 1, -1, -1):
        P, Q = Q, swapped[k] * Q + P
    out = _ratio(P, Q)
    short = length < m
    if short.any():
        out[short] = _ratio(u[short], np.full(int(short.sum()), v, dtype=np.int64))
    return out


def _swap_weights_slow(N: int, p: int, q: int) -> np.ndarray:
    u, v = midpoints(N)
    out = np.empty(N)
    for i, a in enumerate(u.tolist()):
        out[i] = float(cf_value(swap_digits(expand_ints(a, v), p, q)))
    return out


def gauss_weights(N: int) -> np.ndarray:
    """h((2n+1)/(2N)) = (2N mod (2n+1)) / (2n+1)."""
    u, v = midpoints(N)
    return _ratio(v % u, u)


def identity_weights(N: int) -> np.ndarray:
    u, v = midpoints(N)
    return _ratio(u, np.full_like(u, v))


def log_abscissas(N: int) -> np.ndarray:
    return np.log(identity_weights(N))


def _pad(a: np.ndarray) -> np.ndarray:
    out = np.zeros(padded_length(a.size))
    out[: a.size] = a
    return out.reshape(-1, CHUNK)


def build_table(N: int, key: str, weights: np.ndarray) -> AbscissaTable:
    w = _pad(weights)
    lx = _pad(log_abscissas(N))
    w.flags.writeable = False
    lx.flags.writeable = False
    return AbscissaTable(N, key, w, lx)


def table_key(kind: str, p: int = 1, q: int = 2) -> str:
    if kind == "permuted":
        return f"S{p},{q}"
    if kind == "baseline":
        return "gauss"
    if kind == "shadow":
        return "identity"
    raise DomainError(f"no abscissa table for kind {kind!r}")


def compute_weights(N: int, kind: str, p: int = 1, q: int = 2) -> np.ndarray:
    if kind == "permuted":
        return swap_weights(N, p, q)
    if kind == "baseline":
        return gauss_weights(N)
    if kind == "shadow":
        return identity_weights(N)
    raise DomainError(f"no abscissa table for kind {kind!r}")


_disk_cache = None


def set_disk_cache(cache) -> None:
    """Install a :class:`cfzeta.cache.TableCache` (or None) for weight lookups."""
    global _disk_cache
    _disk_cache = cache
    get_table.cache_clear()


@functools.lru_cache(maxsize=8)
def get_table(N: int, kind: str, p: int = 1, q: int = 2) -> AbscissaTable:
    """Cached table; S_{p,p} shares the identity table so both paths agree bitwise."""
    if kind == "permuted" and p == q:
        kind = "shadow"
    key = table_key(kind, p, q)
    if kind == "shadow":
        p = q = 1
    if _disk_cache is not None:
        weights = _disk_cache.load_or_compute(N, key, lambda: compute_weights(N, kind, p, q))
    else:
        weights = compute_weights(N, kind, p, q)
    return build_table(N, key, weights)
