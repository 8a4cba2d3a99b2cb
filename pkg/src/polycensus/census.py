"""Exact counts of decomposable integer polynomials of fixed degree and height.

Two independent routes produce every count:

* count_bruteforce iterates the whole coefficient box and asks the
  decomposition tester about each polynomial.
* count_forward generates the polynomials constructively, enumerating
  normalized inner polynomials h (h(0) = 0, positive leading coefficient,
  monic in the monic regime) inside a provably sufficient height box, then
  backtracking over outer coefficients with exact final-coefficient pruning.

Generated polynomials are identified by their coefficient vectors.  The
constant term never interacts with decomposability (it is the free constant
term of the outer polynomial), so vectors are keyed without it and every
count carries an exact factor 2H+1.  Within one split the normalized witness
is unique per polynomial, which the enumeration re-verifies on small runs;
unions across splits are deduplicated through key sets.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .asymptotics import spf
from .decompose import decompose_split, is_decomposable
from .poly_core import Poly, mul, poly_pow

DEFAULT_SET_BUDGET = 200_000_000   # dedup keys per query
DEFAULT_ORACLE_BUDGET = 3_000_000  # brute-force box size
DEDUP_VERIFY_CAP = 2_000_000       # witness-uniqueness re-check limit
BUDGET_ENV = "POLYCENSUS_BUDGET"

VARIANTS = ("total", "split", "indecomp_pair")


class BudgetError(ValueError):
    """A query was refused because it exceeds a configured budget."""


def _int_root(x: int, k: int) -> int:
    """Largest t >= 0 with t**k <= x (x >= 0)."""
    if x < 0:
        raise ValueError("negative radicand")
    if k == 2:
        return isqrt(x)
    t = int(round(x ** (1.0 / k)))
    while t > 0 and t**k > x:
        t -= 1
    while (t + 1) ** k <= x:
        t += 1
    return t


def explicit_constants(m: int, n: int) -> Tuple[float, float]:
    """Explicit forms (K1, K2) of the inner/outer height bounds.

    For every f = g(h(x)) with h(0) = 0, deg g = m, deg h = n, d = m*n:
        |lead(g)| * H(h)**m <= K1 * H(f),      K1 = 2**d * (n+1)**(m/2)
        H(g) <= K2 * H(f)   (if H(h) >= 1),    K2 = 2**m * (n+1)**(m/2) * sqrt(d+1)
    Obtained by running the composition height argument with the two-sided
    height-measure sandwich in place of the implicit product constant.
    """
    if m < 2 or n < 2:
        raise ValueError("split parts must both be >= 2")
    d = m * n
    half = (n + 1) ** (m / 2.0)
    k1 = float(2**d) * half
    k2 = float(2**m) * half * (d + 1) ** 0.5
    return k1, k2


@dataclass(frozen=True)
class EnumBox:
    """Provably sufficient enumeration box for one split at one height.

    Every normalized decomposition of every degree-d polynomial of height
    at most H has inner height at most b_max; per-coefficient bounds for the
    outer polynomial are derived exactly during backtracking, with
    lead_cap(b) as the analytic cap on |lead(g)| given inner height b.
    """

    m: int
    n: int
    H: int
    b_max: int
    k1: float
    k2: float
    _k1_sq_hh: int = field(repr=False, default=0)  # (K1*H)^2 as an exact integer

    @classmethod
    def build(cls, m: int, n: int, H: int) -> "EnumBox":
        d = m * n
        k1, k2 = explicit_constants(m, n)
        x = (1 << (2 * d)) * (n + 1) ** m * H * H  # exact (K1*H)^2
        b_max = _int_root(x, 2 * m)
        return cls(m, n, H, b_max, k1, k2, x)

    def lead_cap(self, b: int) -> int:
        """Max |lead(g)| compatible with inner height b (exact integer)."""
        if b < 1:
            raise ValueError("inner height must be >= 1")
        return isqrt(self._k1_sq_hh // b ** (2 * self.m))

    def inner_lead_max(self) -> int:
        """Max inner leading coefficient: lead(g)*lead(h)^m caps the top of f."""
        return min(self.b_max, _int_root(self.H, self.m))


@dataclass(frozen=True)
class CountQuery:
    d: int
    H: int
    monic: bool
    variant: str
    split: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.d < 2 or self.H < 2:
            raise ValueError("degree and height must both be >= 2")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "split":
            if self.split is None:
                raise ValueError("split variant needs (m, n)")
            m, n = self.split
            if m < 2 or n < 2 or m * n != self.d:
                raise ValueError(f"invalid split ({m},{n}) for degree {self.d}")
        elif self.split is not None:
            raise ValueError("split only applies to the split variant")


@dataclass(frozen=True)
class CountResult:
    count: int
    query: CountQuery
    method: str
    elapsed_seconds: float
    workers: int


def ordered_splits(d: int) -> List[Tuple[int, int]]:
    """All ordered pairs (m, n) with m, n >= 2 and m*n = d."""
    return [(m, d // m) for m in range(2, d // 2 + 1) if d % m == 0]


def _resolve_budget(budget: Optional[int]) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        return int(env)
    return DEFAULT_SET_BUDGET


# ---------------------------------------------------------------------------
# forward enumeration
# ---------------------------------------------------------------------------


def _h_candidates(m: int, n: int, H: int, monic: bool, box: EnumBox) -> List[Poly]:
    """Normalized inner candidates in lexicographic order.

    Backtracks over the inner coefficients b_(n-1)..b_1; each level is
    restricted by |b| <= b_max and by the final top coefficients of f: the
    coefficient of x^((m-1)n+j) depends on b_j linearly with slope
    m*lead^(m-1) and must not exceed H in absolute value for any feasible
    outer polynomial.  Non-monic candidates are additionally primitive
    (content 1); imprimitive inners never generate new polynomials.
    """
    out: List[Poly] = []
    b_max = box.b_max
    leads = [1] if monic else list(range(1, box.inner_lead_max() + 1))
    for L in leads:
        slope = m * L ** (m - 1)
        bs = [0] * (n + 1)
        bs[n] = L

        def rec(j: int) -> None:
            hm = poly_pow(tuple(bs), m)
            s = hm[(m - 1) * n + j]
            lo = max(-b_max, -((H + s) // slope))
            hi = min(b_max, (H - s) // slope)
            for t in range(lo, hi + 1):
                bs[j] = t
                if j == 1:
                    if monic or gcd(*bs) == 1:
                        out.append(tuple(bs))
                else:
                    rec(j - 1)
            bs[j] = 0

        rec(n - 1)
    return out


def _window_interval(P, hk, j_lo, j_hi, H, lo, hi):
    """Clip [lo, hi] so |P[j] + a*hk[j]| <= H for all j in [j_lo, j_hi]."""
    for j in range(j_lo, j_hi + 1):
        c = hk[j] if j < len(hk) else 0
        p = P[j]
        if c == 0:
            if p > H or p < -H:
                return 1, 0
        elif c > 0:
            lo1 = -((H + p) // c)
            hi1 = (H - p) // c
            if lo1 > lo:
                lo = lo1
            if hi1 < hi:
                hi = hi1
        else:
            cc = -c
            lo1 = -((H - p) // cc)
            hi1 = (H + p) // cc
            if lo1 > lo:
                lo = lo1
            if hi1 < hi:
                hi = hi1
        if lo > hi:
            return 1, 0
    return lo, hi


def _run_chunk(args):
    """Enumerate outer polynomials for one inner-candidate chunk.

    Returns (pairs, flagged, keys, hits, defense):
      pairs    -- witness pairs completed (equals distinct polynomials)
      flagged  -- pairs whose outer part is indecomposable
      keys     -- packed truncated coefficient vectors (collect mode only)
      hits     -- pairs whose key lies in the membership set (stream mode)
      defense  -- capped key set for the uniqueness re-check, or None
    """
    (d, H, monic, m, n, h_chunk, collect, member, flag, budget, verify_cap) = args

    base = 2 * H + 1
    basepow = [base**e for e in range(d)]
    keys: Optional[Set[int]] = set() if collect else None
    defense: Optional[Set[int]] = set() if (not collect and verify_cap) else None
    pairs = 0
    flagged = 0
    hits = 0
    prefix: List[int] = []

    for h in h_chunk:
        hp = [None, h]
        for i in range(2, m + 1):
            hp.append(mul(hp[-1], h))
        hkf = sum(h[j] * basepow[j - 1] for j in range(1, n + 1))
        P = [0] * (d + 1)

        def leaf(lo, hi):
            nonlocal pairs, flagged, hits, defense
            width = hi - lo + 1
            key0 = 0
            for j in range(1, d + 1):
                key0 += (P[j] + H) * basepow[j - 1]
            if collect:
                keys.update([key0 + a * hkf for a in range(lo, hi + 1)])
                if len(keys) > budget:
                    raise BudgetError(
                        f"dedup set exceeded budget of {budget} entries "
                        f"(split ({m},{n}), H={H}); raise {BUDGET_ENV} or --budget"
                    )
            else:
                if member is not None:
                    k = key0 + lo * hkf
                    for _ in range(width):
                        if k in member:
                            hits += 1
                        k += hkf
                if defense is not None:
                    defense.update([key0 + a * hkf for a in range(lo, hi + 1)])
                    if len(defense) > verify_cap:
                        defense = None
            if flag:
                tail = tuple(reversed(prefix))
                for a in range(lo, hi + 1):
                    if not is_decomposable((0, a) + tail):
                        flagged += 1
            pairs += width
            if pairs > budget:
                raise BudgetError(
                    f"enumeration exceeded budget of {budget} dedup entries "
                    f"(split ({m},{n}), H={H}); raise {BUDGET_ENV} or --budget"
                )

        def rec(k):
            hk = hp[k]
            kn = k * n
            lo, hi = _window_interval(P, hk, (k - 1) * n + 1, kn, H, -(1 << 62), 1 << 62)
            if lo > hi:
                return
            if k == 1:
                leaf(lo, hi)
                return
            if lo:
                for j in range(1, kn + 1):
                    P[j] += lo * hk[j]
            a = lo
            while True:
                prefix.append(a)
                rec(k - 1)
                prefix.pop()
                if a == hi:
                    break
                for j in range(1, kn + 1):
                    P[j] += hk[j]
                a += 1
            for j in range(1, kn + 1):
                P[j] -= hi * hk[j]

        if monic:
            hpm = hp[m]
            for j in range(1, d + 1):
                P[j] = hpm[j]
            prefix.append(1)
            if m == 1:
                leaf(*_window_interval(P, hp[1], 1, n, H, -(1 << 62), 1 << 62))
            else:
                rec(m - 1)
            prefix.pop()
        else:
            hpm = hp[m]
            b = max(abs(c) for c in h)
            cap = (1 << (2 * d)) * (n + 1) ** m * H * H
            amax = isqrt(cap // b ** (2 * m))
            lo_a, hi_a = _window_interval(
                [0] * (d + 1), hpm, (m - 1) * n + 1, d, H, -amax, amax
            )
            for am in range(lo_a, hi_a + 1):
                if am == 0:
                    continue
                for j in range(1, d + 1):
                    P[j] = am * hpm[j]
                prefix.append(am)
                rec(m - 1)
                prefix.pop()
            for j in range(1, d + 1):
                P[j] = 0

    return pairs, flagged, keys, hits, defense


def _chunks(seq: List, parts: int) -> List[List]:
    parts = max(1, min(parts, len(seq)))
    size, extra = divmod(len(seq), parts)
    out = []
    idx = 0
    for i in range(parts):
        step = size + (1 if i < extra else 0)
        out.append(seq[idx : idx + step])
        idx += step
    return out


def _run_split(d, H, monic, split, workers, collect, member, flag, budget):
    """Enumerate one split, sharded over workers; merge by set union.

    Raises on a witness-uniqueness violation whenever a complete key set is
    available to check against the raw pair count.
    """
    m, n = split
    box = EnumBox.build(m, n, H)
    h_list = _h_candidates(m, n, H, monic, box)
    if not h_list:
        return 0, 0, set() if collect else None, 0
    chunk_list = _chunks(h_list, workers)
    verify_cap = DEDUP_VERIFY_CAP if len(chunk_list) == 1 else 0
    tasks = [
        (d, H, monic, m, n, chunk, collect, member, flag, budget, verify_cap)
        for chunk in chunk_list
    ]
    if len(tasks) == 1:
        results = [_run_chunk(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(tasks)) as pool:
            results = list(pool.map(_run_chunk, tasks))

    pairs = sum(r[0] for r in results)
    flagged = sum(r[1] for r in results)
    hits = sum(r[3] for r in results)
    if pairs > budget:
        raise BudgetError(
            f"enumeration exceeded budget of {budget} dedup entries "
            f"(split ({m},{n}), H={H}); raise {BUDGET_ENV} or --budget"
        )
    keys = None
    if collect:
        keys = set()
        for r in results:
            keys |= r[2]
            if len(keys) > budget:
                raise BudgetError(
                    f"dedup set exceeded budget of {budget} entries "
                    f"(split ({m},{n}), H={H}); raise {BUDGET_ENV} or --budget"
                )
        if len(keys) != pairs:
            raise RuntimeError(
                f"normalized witness uniqueness violated in split ({m},{n}), "
                f"H={H}: {pairs} pairs but {len(keys)} distinct polynomials"
            )
    elif len(results) == 1 and results[0][4] is not None:
        if len(results[0][4]) != pairs:
            raise RuntimeError(
                f"normalized witness uniqueness violated in split ({m},{n}), "
                f"H={H}: {pairs} pairs but {len(results[0][4])} distinct polynomials"
            )
    return pairs, flagged, keys, hits


def count_forward(q: CountQuery, workers: int = 1, budget: Optional[int] = None) -> CountResult:
    """Constructive count: enumerate witnesses, deduplicate, scale by 2H+1.

    The count is exact and independent of the worker count.  Composite-free
    degrees return 0 immediately.
    """
    t0 = time.perf_counter()
    budget = _resolve_budget(budget)
    d, H, monic = q.d, q.H, q.monic
    splits = ordered_splits(d)
    base = 2 * H + 1

    if not splits:
        return CountResult(0, q, "forward", time.perf_counter() - t0, workers)

    if q.variant == "split":
        pairs, _, _, _ = _run_split(d, H, monic, q.split, workers, False, None, False, budget)
        count = pairs * base
    elif q.variant == "indecomp_pair":
        ell = spf(d)
        pairs, flagged, _, _ = _run_split(
            d, H, monic, (d // ell, ell), workers, False, None, True, budget
        )
        count = flagged * base
    else:  # total
        ell = spf(d)
        dominant = (d // ell, ell)
        if len(splits) == 1:
            pairs, _, _, _ = _run_split(d, H, monic, splits[0], workers, False, None, False, budget)
            count = pairs * base
        else:
            union: Set[int] = set()
            for s in splits:
                if s == dominant:
                    continue
                _, _, keys, _ = _run_split(d, H, monic, s, workers, True, None, False, budget)
                union |= keys
                if len(union) > budget:
                    raise BudgetError(
                        f"dedup set exceeded budget of {budget} entries "
                        f"(total, d={d}, H={H}); raise {BUDGET_ENV} or --budget"
                    )
            pairs, _, _, hits = _run_split(
                d, H, monic, dominant, workers, False, union, False, budget
            )
            count = (pairs + len(union) - hits) * base

    return CountResult(count, q, "forward", time.perf_counter() - t0, workers)


def forward_key_set(
    d: int, H: int, monic: bool, split: Tuple[int, int], budget: Optional[int] = None
) -> Set[int]:
    """The packed truncated-vector key set for one split (testing aid)."""
    budget = _resolve_budget(budget)
    _, _, keys, _ = _run_split(d, H, monic, split, 1, True, None, False, budget)
    return keys if keys is not None else set()


def pack_truncated(f: Poly, d: int, H: int) -> int:
    """Pack the coefficients of x^1..x^d of f into the dedup key encoding."""
    if len(f) != d + 1:
        raise ValueError("polynomial length does not match degree")
    base = 2 * H + 1
    key = 0
    for j in range(d, 0, -1):
        c = f[j]
        if c > H or c < -H:
            raise ValueError("coefficient outside the height box")
        key = key * base + (c + H)
    return key


def iter_decompositions(
    d: int, H: int, monic: bool, split: Tuple[int, int]
) -> Iterator[Tuple[Poly, Poly]]:
    """Yield every enumerated witness pair (g, h) for one split.

    The outer polynomial is produced with constant term 0; the full family
    per pair ranges over all constants in [-H, H].  Intended for inequality
    sweeps and tests, not for counting.
    """
    m, n = split
    box = EnumBox.build(m, n, H)
    for h in _h_candidates(m, n, H, monic, box):
        hp = [None, h]
        for i in range(2, m + 1):
            hp.append(mul(hp[-1], h))
        hpm = hp[m]
        P = [0] * (d + 1)
        prefix: List[int] = []

        def walk(k):
            hk = hp[k]
            kn = k * n
            lo, hi = _window_interval(P, hk, (k - 1) * n + 1, kn, H, -(1 << 62), 1 << 62)
            for a in range(lo, hi + 1):
                prefix.append(a)
                if k == 1:
                    yield (0,) + tuple(reversed(prefix))
                else:
                    for j in range(1, kn + 1):
                        P[j] += a * hk[j]
                    yield from walk(k - 1)
                    for j in range(1, kn + 1):
                        P[j] -= a * hk[j]
                prefix.pop()

        if monic:
            lead_range = [1]
        else:
            b = max(abs(c) for c in h)
            amax = isqrt(box._k1_sq_hh // b ** (2 * m))
            lo_a, hi_a = _window_interval(
                P, hpm, (m - 1) * n + 1, d, H, -amax, amax
            )
            lead_range = [a for a in range(lo_a, hi_a + 1) if a]
        for am in lead_range:
            for j in range(1, d + 1):
                P[j] = am * hpm[j]
            prefix.append(am)
            yield from ((g, h) for g in walk(m - 1))
            prefix.pop()
        for j in range(1, d + 1):
            P[j] = 0


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


def _box_size(d: int, H: int, monic: bool) -> int:
    side = 2 * H + 1
    return side**d if monic else 2 * H * side**d


def _iter_box(d: int, H: int, monic: bool) -> Iterator[Poly]:
    import itertools

    rng = range(-H, H + 1)
    lows = itertools.product(*([rng] * d))
    if monic:
        for low in lows:
            yield low + (1,)
    else:
        leads = [a for a in rng if a]
        for low in lows:
            for a in leads:
                yield low + (a,)


def count_bruteforce(q: CountQuery, budget: Optional[int] = None) -> CountResult:
    """Oracle count: test every polynomial in the height box directly."""
    t0 = time.perf_counter()
    if budget is None:
        budget = DEFAULT_ORACLE_BUDGET
    size = _box_size(q.d, q.H, q.monic)
    if size > budget:
        raise BudgetError(
            f"brute-force box has {size} polynomials, over the budget of "
            f"{budget}; raise --budget to force"
        )
    d, H = q.d, q.H
    count = 0
    if q.variant == "split":
        m, n = q.split
        for f in _iter_box(d, H, q.monic):
            if decompose_split(f, m, n) is not None:
                count += 1
    elif q.variant == "indecomp_pair":
        ell = spf(d)
        if ordered_splits(d):
            m, n = d // ell, ell
            for f in _iter_box(d, H, q.monic):
                w = decompose_split(f, m, n)
                if w is not None and not is_decomposable(w.g):
                    count += 1
    else:
        if ordered_splits(d):
            for f in _iter_box(d, H, q.monic):
                if is_decomposable(f):
                    count += 1
    return CountResult(count, q, "oracle", time.perf_counter() - t0, 1)


def census_sweep(
    d: int,
    monic: bool,
    variant: str,
    H_grid: Sequence[int],
    workers: int = 1,
    split: Optional[Tuple[int, int]] = None,
    budget: Optional[int] = None,
) -> Iterator[CountResult]:
    """Run count_forward over an ascending height grid, yielding rows."""
    grid = list(H_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("height grid must be strictly ascending")
    for H in grid:
        q = CountQuery(d, H, monic, variant, split)
        yield count_forward(q, workers=workers, budget=budget)
