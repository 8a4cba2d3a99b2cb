import random
from fractions import Fraction

import pytest

from polycensus.census import EnumBox
from polycensus.decompose import (
    Decomposition,
    candidate_h,
    decompose_split,
    full_decomposition,
    hadic_coefficients,
    is_decomposable,
)
from polycensus.poly_core import compose, degree, height, lead


def rand_pair(rng, m, n, monic, bound=6):
    g = [rng.randint(-bound, bound) for _ in range(m)]
    h = [0] + [rng.randint(-bound, bound) for _ in range(n - 1)]
    if monic:
        g.append(1)
        h.append(1)
    else:
        a = 0
        while a == 0:
            a = rng.randint(-bound, bound)
        g.append(a)
        h.append(rng.randint(1, bound))
    return tuple(g), tuple(h)


def test_candidate_h_quartic():
    c = candidate_h((5, 2, 3, 2, 1), 2, 2)
    assert c == (0, 1, 1)
    c = candidate_h((0, 1, 0, 0, 1), 2, 2)
    assert c == (0, 0, 1)


def test_candidate_h_sextic():
    f = compose((0, 1, 1), (0, 1, 0, 1))  # (x^2+x) o (x^3+x)
    assert f == (0, 1, 1, 1, 2, 0, 1)
    c = candidate_h(f, 2, 3)
    assert c == (0, 1, 0, 1)


def test_candidate_h_is_rational_for_non_monic():
    # (x^2) o (2x^2+x) = 4x^4+4x^3+x^2; the monic candidate picks up a half
    f = compose((0, 0, 1), (0, 1, 2))
    c = candidate_h(f, 2, 2)
    assert c == (0, Fraction(1, 2), 1)


def test_hadic_examples():
    cs = hadic_coefficients((5, 2, 3, 2, 1), (0, 1, 1))
    assert cs == [(5,), (2,), (1,)]
    cs = hadic_coefficients((0, 1, 0, 0, 1), (0, 0, 1))
    assert cs == [(0, 1), (), (1,)]
    cs = hadic_coefficients((0, 1, 1), (0, 1, 1))
    assert cs == [(), (1,)]


def test_hadic_reconstructs():
    rng = random.Random(11)
    for _ in range(200):
        f = tuple(rng.randint(-9, 9) for _ in range(rng.randint(3, 9))) + (rng.randint(1, 9),)
        n = rng.randint(1, 3)
        h = tuple(rng.randint(-4, 4) for _ in range(n)) + (1,)
        cs = hadic_coefficients(f, h)
        acc = ()
        power = (1,)
        from polycensus.poly_core import add, mul, scale

        for c in cs:
            acc = add(acc, mul(tuple(Fraction(x) for x in power), c))
            power = mul(power, h)
        assert acc == tuple(Fraction(c) for c in f)
        assert all(degree(c) < degree(h) for c in cs)


def test_decompose_split_examples():
    w = decompose_split((5, 2, 3, 2, 1), 2, 2)
    assert w.g == (5, 2, 1) and w.h == (0, 1, 1)
    assert decompose_split((0, 1, 0, 0, 1), 2, 2) is None
    w = decompose_split((1, 0, 4, 0, 4), 2, 2)
    assert w.g == (1, 4, 4) and w.h == (0, 0, 1)


def test_decompose_split_non_monic_rescale():
    # 4x^4+4x^3+x^2 = (2x^2+x)^2 decomposes with the primitive inner 2x^2+x
    f = compose((0, 0, 1), (0, 1, 2))
    w = decompose_split(f, 2, 2)
    assert w.h == (0, 1, 2) and w.g == (0, 0, 1)
    assert compose(w.g, w.h) == f


def test_unit_lead_negative():
    f = compose((0, 2, -1), (0, 3, 1))
    w = decompose_split(f, 2, 2)
    assert w is not None and compose(w.g, w.h) == f
    assert lead(f) == -1


def test_is_decomposable_basics():
    assert is_decomposable((0, 0, 0, 0, 1))
    assert not is_decomposable((0, 1, 0, 0, 1))
    assert not is_decomposable(tuple([3, 1, 4, 1, 5]) + (1,))  # degree 5 is prime
    with pytest.raises(ValueError):
        is_decomposable((1, 1))


def test_round_trip_random_pairs():
    rng = random.Random(12)
    for _ in range(800):
        m, n = rng.choice(((2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3)))
        monic = rng.random() < 0.5
        g, h = rand_pair(rng, m, n, monic)
        f = compose(g, h)
        w = decompose_split(f, m, n)
        assert w is not None
        assert compose(w.g, w.h) == f
        assert w.h[0] == 0 and lead(w.h) > 0
        if lead(f) == 1:
            assert lead(w.g) == 1 and lead(w.h) == 1


def test_witness_determinism():
    rng = random.Random(13)
    for _ in range(100):
        g, h = rand_pair(rng, 2, 2, False)
        f = compose(g, h)
        w1 = decompose_split(f, 2, 2)
        w2 = decompose_split(f, 2, 2)
        assert (w1.g, w1.h) == (w2.g, w2.h)


def test_full_decomposition_examples():
    assert full_decomposition((0,) * 8 + (1,)) == [(0, 0, 1)] * 3
    assert full_decomposition((5, 2, 3, 2, 1)) == [(5, 2, 1), (0, 1, 1)]
    f = (1, 1, 0, 0, 1)  # indecomposable quartic
    assert full_decomposition(f) == [f]


def test_full_decomposition_composes_back():
    rng = random.Random(14)
    for _ in range(300):
        parts = rng.choice(((2, 2), (2, 3), (3, 2), (2, 2, 2), (2, 2, 3)))
        f = None
        for deg_part in parts:
            p, _ = rand_pair(rng, deg_part, 2, rng.random() < 0.5, bound=3)
            f = p if f is None else compose(f, p)
        factors = full_decomposition(f)
        acc = factors[0]
        for p in factors[1:]:
            acc = compose(acc, p)
        assert acc == f
        assert all(not is_decomposable(p) for p in factors)
        assert all(degree(p) >= 2 for p in factors)


def test_unit_lead_path_matches_rational_path():
    # the integer fast path must agree with the generic rational procedure
    rng = random.Random(15)
    from polycensus import decompose as dec

    for _ in range(500):
        m, n = rng.choice(((2, 2), (2, 3), (3, 2)))
        f = tuple(rng.randint(-20, 20) for _ in range(m * n)) + (rng.choice((1, -1)),)
        fast = dec._split_unit_lead(f, m, n)
        hq = candidate_h(f, m, n)
        cs = hadic_coefficients(f, hq)
        slow_ok = (
            all(degree(c) <= 0 for c in cs)
            and all(c[0].denominator == 1 for c in cs if c)
            and all(b.denominator == 1 for b in hq)
        )
        assert (fast is not None) == slow_ok
        if fast is not None:
            g, h = fast
            assert tuple(Fraction(c) for c in h) == hq


def test_conclusiveness_against_direct_search():
    """is_decomposable agrees with a raw search over witness pairs.

    Search box per the explicit height-bound constants: inner height up to
    (K1*H)^(1/2) and outer coefficients up to K2*H.  The outer range is
    further clipped by |a1| <= H + b1^2, forced by the x^2 coefficient of
    any composition of height at most H, which keeps the search finite
    without excluding a single witness.
    """
    H = 6
    box = EnumBox.build(2, 2, H)
    gbound = int(box.k2 * H)
    composable = set()
    for b1 in range(-box.b_max, box.b_max + 1):
        h = (0, b1, 1)
        a1_cap = min(gbound, H + b1 * b1)
        for a1 in range(-a1_cap, a1_cap + 1):
            for a0 in range(-H, H + 1):
                f = compose((a0, a1, 1), h)
                if height(f) <= H:
                    composable.add(f)
    import itertools

    for low in itertools.product(*([range(-H, H + 1)] * 4)):
        f = low + (1,)
        assert is_decomposable(f) == (f in composable), f
