"""Exact-identity checks run by ``cfzeta selftest``."""
from __future__ import annotations

import random
import tempfile
from fractions import Fraction

import numpy as np

from .cache import TableCache
from .cf import cf_expand, cf_value, s_pq, swap_digits
from .mobius import mobius_coeffs
from .spectral import power_spectrum
from .sums import shadow_identity_residual
from .tables import compute_weights, midpoints


def check_roundtrip(Ns=(10, 1000, 10007)) -> bool:
    for N in Ns:
        u, v = midpoints(N)
        for a in u.tolist():
            x = Fraction(a, v)
            if cf_value(cf_expand(x)) != x:
                return False
    return True


def random_rationals(count: int, seed: int = 0, max_den: int = 10**6) -> list[Fraction]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        den = rng.randint(1, max_den)
        out.append(Fraction(rng.randint(1, den), den))
    return out


def check_involution(count: int = 10_000, seed: int = 0) -> bool:
    rng = random.Random(seed + 1)
    for x in random_rationals(count, seed):
        p, q = rng.randint(1, 6), rng.randint(1, 6)
        if s_pq(x, p, p) != x:
            return False
        if involutive_at(x, p, q) and s_pq(s_pq(x, p, q), p, q) != x:
            return False
    return True


def involutive_at(x, p: int, q: int) -> bool:
    """True when the swapped expansion keeps length >= max(p, q).

    A swap that moves a 1 into the last place shortens the expansion on
    canonicalization, e.g. [1, 2] -> [2, 1] = [3], and the second swap is then
    out of range.
    """
    return len(swap_digits(cf_expand(x), p, q)) >= max(p, q)


def check_determinant(max_a: int = 100) -> bool:
    return all(
        mobius_coeffs(a1, a2).det == 1 for a1 in range(1, max_a + 1) for a2 in range(1, max_a + 1)
    )


def cell_points(piece, count: int, rng: random.Random) -> list[Fraction]:
    width = piece.cell_hi - piece.cell_lo
    return [piece.cell_lo + width * Fraction(rng.randint(1, 999), 1000) for _ in range(count)]


def check_cells(max_a: int = 50, per_cell: int = 5, seed: int = 0) -> bool:
    rng = random.Random(seed)
    for a1 in range(1, max_a + 1):
        for a2 in range(1, max_a + 1):
            piece = mobius_coeffs(a1, a2)
            for x in cell_points(piece, per_cell, rng):
                if piece(x) != s_pq(x, 1, 2):
                    return False
    return True


def check_shadow(tol: float = 1e-12) -> float:
    worst = 0.0
    for N in (2, 10, 100, 11051):
        for re in np.linspace(-2, 3, 5):
            for im in np.linspace(0, 34, 5):
                worst = max(worst, shadow_identity_residual(N, complex(re, im)))
    return worst


def check_parseval(seed: int = 0) -> float:
    x = np.random.default_rng(seed).standard_normal(1000)
    _, p = power_spectrum(x)
    return abs(p.sum() / (x.size * x.var()) - 1)


def check_cache() -> bool:
    with tempfile.TemporaryDirectory() as d:
        cache = TableCache(d)
        ref = compute_weights(257, "permuted", 1, 2)
        cache.store(257, "S1,2", ref)
        path = cache.path(257, "S1,2")
        raw = bytearray(path.read_bytes())
        raw[len(raw) // 2] ^= 0xFF
        path.write_bytes(bytes(raw))
        w = cache.load_or_compute(257, "S1,2", lambda: compute_weights(257, "permuted", 1, 2))
        return cache.rejected == 1 and np.array_equal(w, ref) and cache.load(257, "S1,2") is not None


def run(max_a: int = 100) -> list[tuple[str, bool, str]]:
    shadow = check_shadow()
    parseval = check_parseval()
    return [
        ("cf round-trip", check_roundtrip(), "N in {10, 1000, 10007}"),
        ("involution and S_pp = identity", check_involution(), "10^4 random rationals"),
        ("determinant ad - bc = 1", check_determinant(max_a), f"a1, a2 <= {max_a}"),
        ("cell Mobius agreement", check_cells(), "a1, a2 <= 50, exact"),
        ("shadow identity", shadow <= 1e-12, f"max residual {shadow:.3g}"),
        ("Parseval", parseval < 1e-10, f"relative error {parseval:.3g}"),
        ("cache corruption recovery", check_cache(), "corrupted entry rejected and rebuilt"),
    ]
