"""Decide and construct functional decompositions f = g(h(x)) over the integers.

The test for a fixed split (m, n) = (deg g, deg h) runs in two exact stages:

1. Solve for the unique monic rational candidate inner polynomial h with
   h(0) = 0 whose top coefficients match f (a triangular linear solve).
2. Expand f in powers of that candidate; f factors through h exactly when
   every expansion coefficient is a constant.

A decomposition over the complex numbers forces the rational candidate, and
an integer witness exists whenever a complex one does, so a failed rational
test is conclusive.  Witnesses are returned in a canonical gauge: h(0) = 0,
positive leading inner coefficient, monic g and h whenever f is monic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Tuple

from .poly_core import (
    Poly,
    compose,
    degree,
    lead,
    normalize,
    poly_pow,
)

RatPoly = Tuple[Fraction, ...]


class DecompositionError(RuntimeError):
    """A rational witness was found but integer normalization failed.

    This signals a bug or a violated uniqueness assumption, never an
    indecomposable input.
    """


@dataclass(frozen=True)
class Decomposition:
    """A normalized witness pair: f = g(h(x)) with split (deg g, deg h)."""

    g: Poly
    h: Poly
    split: Tuple[int, int]

    def __post_init__(self):
        m, n = self.split
        if degree(self.g) != m or degree(self.h) != n:
            raise ValueError("witness degrees do not match the split")
        if m < 2 or n < 2:
            raise ValueError("split parts must both be >= 2")
        if self.h[0] != 0:
            raise ValueError("inner witness must vanish at 0")
        if lead(self.h) <= 0:
            raise ValueError("inner witness must have positive leading coefficient")


def to_rational(f) -> RatPoly:
    return tuple(Fraction(c) for c in f)


def _divmod_monic(f, h):
    """Exact (quotient, remainder) for division by a monic polynomial.

    Synthetic division: needs no coefficient inversions, so it stays in the
    coefficient ring (works for int and Fraction alike).
    """
    n = degree(h)
    if degree(f) < n:
        return (), tuple(f)
    rem = list(f)
    qlen = len(f) - n
    quo = [0] * qlen
    for i in range(qlen - 1, -1, -1):
        c = rem[i + n]
        quo[i] = c
        if c:
            for j in range(n + 1):
                rem[i + j] -= c * h[j]
    return normalize(quo), normalize(rem[:n])


def candidate_h(f: Poly, m: int, n: int) -> RatPoly:
    """The unique monic rational inner candidate for the split (m, n).

    Returns the monic degree-n polynomial h with h(0) = 0 such that
    lead(f) * h**m matches f in the coefficients of x**(d-1) .. x**(d-n+1),
    where d = m*n.  Solved coefficient by coefficient: with the higher inner
    coefficients fixed, the coefficient of x**(d-k) depends linearly on
    b_(n-k) with slope lead(f)*m.
    """
    _check_split(f, m, n)
    d = m * n
    a = Fraction(lead(f))
    bs: List[Fraction] = [Fraction(0)] * (n + 1)
    bs[n] = Fraction(1)
    for k in range(1, n):
        hm = poly_pow(tuple(bs), m)
        delta = f[d - k] - a * hm[d - k]
        bs[n - k] = delta / (a * m)
    return tuple(bs)


def hadic_coefficients(f: Poly, h) -> List[RatPoly]:
    """Expansion coefficients c_0..c_m of f in powers of a monic h.

    These are the unique polynomials with f = sum c_i * h**i and
    deg c_i < deg h, obtained by repeated division.
    """
    if degree(h) < 1:
        raise ValueError("inner polynomial must have degree >= 1")
    if h[-1] != 1:
        raise ValueError("h-adic expansion requires monic h")
    n = degree(h)
    hq = to_rational(h)
    cur: RatPoly = to_rational(f)
    out: List[RatPoly] = []
    while degree(cur) >= n:
        cur, r = _divmod_monic(cur, hq)
        out.append(to_rational(r))
    out.append(cur)
    return out


def _check_split(f, m, n):
    if m < 2 or n < 2:
        raise ValueError("split parts must both be >= 2")
    if degree(f) != m * n:
        raise ValueError(f"degree {degree(f)} does not match split ({m},{n})")


def _split_unit_lead(f: Poly, m: int, n: int) -> Optional[Tuple[Poly, Poly]]:
    """Integer-only split test for |lead(f)| = 1.

    Same candidate-then-expand procedure, but the candidate inner polynomial
    of a decomposable unit-lead f is necessarily integral, so any division
    remainder in the solve rejects the split immediately.
    """
    d = m * n
    a = f[-1]
    bs = [0] * (n + 1)
    bs[n] = 1
    for k in range(1, n):
        hm = poly_pow(tuple(bs), m)
        delta = f[d - k] - a * hm[d - k]
        b, r = divmod(delta, a * m)
        if r:
            return None
        bs[n - k] = b
    h = tuple(bs)
    cur: Poly = f
    gs = []
    while degree(cur) >= n:
        cur, rem = _divmod_monic(cur, h)
        if degree(rem) > 0:
            return None
        gs.append(rem[0] if rem else 0)
    if degree(cur) > 0:
        return None
    gs.append(cur[0] if cur else 0)
    g = normalize(gs)
    if degree(g) != m:
        return None
    return g, h


def decompose_split(f: Poly, m: int, n: int) -> Optional[Decomposition]:
    """Witness f = g(h(x)) with deg g = m, deg h = n, or None.

    The returned witness is canonical: h(0) = 0, lead(h) > 0, and h is the
    minimal positive integer multiple of the monic rational candidate (monic
    f therefore gets monic g and h).  None means no such decomposition
    exists over the complex numbers, hence none over the integers.
    """
    _check_split(f, m, n)
    if abs(f[-1]) == 1:
        got = _split_unit_lead(f, m, n)
        if got is None:
            return None
        g, h = got
        if compose(g, h) != f:
            raise DecompositionError(
                f"witness recomposition mismatch for f={f}, split=({m},{n})"
            )
        return Decomposition(g, h, (m, n))

    hq = candidate_h(f, m, n)
    cs = hadic_coefficients(f, hq)
    if any(degree(c) > 0 for c in cs):
        return None
    gq = normalize(tuple(c[0] if c else Fraction(0) for c in cs))
    if degree(gq) != m:
        return None
    # Rescale the monic rational inner to its minimal integer multiple
    # L*h; the outer becomes g(x/L), integral whenever f is decomposable.
    scale = lcm(*(c.denominator for c in hq)) if hq else 1
    h_int = []
    for c in hq:
        v = c * scale
        if v.denominator != 1:
            raise DecompositionError("inner rescale left a non-integer coefficient")
        h_int.append(int(v))
    g_int = []
    for i, c in enumerate(gq):
        v = c / Fraction(scale) ** i
        if v.denominator != 1:
            raise DecompositionError(
                f"rational witness found but integer normalization failed for f={f}"
            )
        g_int.append(int(v))
    g, h = normalize(g_int), normalize(h_int)
    if compose(g, h) != f:
        raise DecompositionError(
            f"witness recomposition mismatch for f={f}, split=({m},{n})"
        )
    return Decomposition(g, h, (m, n))


def _is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k < 4:
        return True
    if k % 2 == 0:
        return False
    p = 3
    while p * p <= k:
        if k % p == 0:
            return False
        p += 2
    return True


def _inner_degrees(d: int) -> List[int]:
    """Candidate inner degrees for d, primes first, each ascending."""
    divs = [n for n in range(2, d // 2 + 1) if d % n == 0]
    return sorted(divs, key=lambda n: (not _is_prime(n), n))


def is_decomposable(f: Poly) -> bool:
    """True iff f = g(h(x)) for some g, h of degree >= 2.

    Prime degree short-circuits to False; otherwise every ordered split is
    tried until one yields a witness.
    """
    d = degree(f)
    if d < 2:
        raise ValueError("decomposability needs degree >= 2")
    if _is_prime(d):
        return False
    for n in _inner_degrees(d):
        if decompose_split(f, d // n, n) is not None:
            return True
    return False


def full_decomposition(f: Poly) -> List[Poly]:
    """Indecomposable factors f1, .., fk with f = f1 o f2 o .. o fk.

    Greedy and deterministic: the innermost factor is extracted with the
    smallest prime inner degree first (composite inner degrees are only
    reachable when no prime one works, and then recursion cleans up).
    """
    d = degree(f)
    if d < 2:
        raise ValueError("decomposition needs degree >= 2")
    if not _is_prime(d):
        for n in _inner_degrees(d):
            w = decompose_split(f, d // n, n)
            if w is not None:
                return full_decomposition(w.g) + full_decomposition(w.h)
    return [f]
