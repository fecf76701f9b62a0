import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffdyn.errors import BudgetError
from ffdyn.funcfield import Frac, KField
from ffdyn.gf import GF
from ffdyn.kfactor import is_irreducible_over_K, kpoly_factor
from ffdyn.kpoly import KPoly
from ffdyn.polyq import PolyQ
from ffdyn.textio import format_kpoly, parse_kpoly

from oracles import rand_frac, trial_factor


def kp(F, s):
    return parse_kpoly(F, s)


def _divisors(f):
    """Monic divisors of a nonzero polynomial, from its trial factorization."""
    fac = trial_factor(f) if f.deg > 0 else []
    out = []
    for exps in itertools.product(*[range(m + 1) for _, m in fac]):
        d = PolyQ.one(f.F)
        for (g, _), k in zip(fac, exps):
            d = d * g**k
        out.append(d)
    return out


def rational_roots(P):
    """Roots of P in K by the rational root test on the primitive integral model."""
    F = P.F
    polys = P.primitive_part()
    a0 = next(i for i, a in enumerate(polys) if a)
    roots = [Frac.zero(F)] if a0 > 0 else []
    polys = polys[a0:]
    nums, dens = _divisors(polys[0]), _divisors(polys[-1])
    units = [u for u in range(1, F.q)]
    found = set()
    for a in nums:
        for b in dens:
            for u in units:
                z = Frac(a.scale(u), b)
                if z not in found and P(z).is_zero():
                    found.add(z)
    return roots + sorted(found, key=lambda z: z.sort_key())


def _product(fac, K):
    out = KPoly.const(K, K.one)
    for g, m in fac:
        out = out * g**m
    return out


# -- arithmetic ----------------------------------------------------------------

def test_discriminant_quadratic():
    F = GF(5)
    rng = random.Random(2)
    K = KField(F)
    for _ in range(20):
        b, c = rand_frac(rng, F, nonzero=False), rand_frac(rng, F, nonzero=False)
        P = KPoly(K, (c, b, K.one))
        assert P.discriminant() == b * b - c * 4


def test_resultant_of_split_polynomials():
    F = GF(3)
    K = KField(F)
    rng = random.Random(4)
    for _ in range(10):
        r = [rand_frac(rng, F) for _ in range(2)]
        s = [rand_frac(rng, F) for _ in range(3)]
        A = KPoly.linear(K, r[0]) * KPoly.linear(K, r[1])
        B = KPoly.linear(K, s[0]) * KPoly.linear(K, s[1]) * KPoly.linear(K, s[2])
        expect = K.one
        for x in r:
            for y in s:
                expect = expect * (x - y)
        assert A.resultant(B) == expect


def test_taylor_shift_and_eval():
    F = GF(3)
    P = kp(F, "x^3+t*x+1/t")
    s = Frac(PolyQ(F, (1, 1)))
    Q = P.taylor_shift(s)
    for z in (Frac.zero(F), Frac.one(F), Frac(PolyQ(F, (0, 2)))):
        assert Q(z) == P(z + s)


kpolys3 = st.lists(
    st.tuples(st.lists(st.integers(0, 2), min_size=1, max_size=3),
              st.lists(st.integers(0, 2), min_size=1, max_size=2).filter(any)),
    min_size=1, max_size=4,
).map(lambda cs: KPoly(KField(GF(3)), [Frac(PolyQ(GF(3), n), PolyQ(GF(3), d)) for n, d in cs]))


@settings(max_examples=80, deadline=None)
@given(kpolys3, kpolys3, kpolys3)
def test_kpoly_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    if not b.is_zero():
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.deg < b.deg


def test_kpoly_text_roundtrip():
    F = GF(3, 2)
    for s in ["x^2+(g+1)*t*x+1/t", "x^5+t*x+1", "g*x"]:
        P = kp(F, s)
        assert kp(F, format_kpoly(P)) == P


# -- factorization over K ----------------------------------------------------

def test_factor_examples():
    F = GF(3)
    fac = kpoly_factor(kp(F, "x^2-t^2"))
    assert fac == sorted([(kp(F, "x-t"), 1), (kp(F, "x+t"), 1)], key=lambda gm: gm[0].sort_key())
    assert kpoly_factor(kp(F, "x^2+t")) == [(kp(F, "x^2+t"), 1)]
    P = kp(F, "x^4+2*t*x^2+t^2+t")
    assert kpoly_factor(P) == [(P, 1)]
    assert rational_roots(P) == []


@pytest.mark.parametrize("p", [2, 3, 5])
def test_factor_products_of_random_factors(p):
    F = GF(p)
    K = KField(F)
    rng = random.Random(p)
    for _ in range(8):
        parts = []
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(1, 2)
            parts.append(KPoly(K, [rand_frac(rng, F, 2, nonzero=False) for _ in range(d)] + [K.one]))
        P = parts[0]
        for g in parts[1:]:
            P = P * g
        fac = kpoly_factor(P)
        assert _product(fac, K) == P.monic()
        assert sum(g.deg * m for g, m in fac) == P.deg
        # linear factors are exactly the rational roots
        lin = sorted((-g.c[0] for g, _ in fac if g.deg == 1), key=lambda z: z.sort_key())
        assert lin == rational_roots(P)
        for g, _ in fac:
            if g.deg in (2, 3):
                assert rational_roots(g) == []


def test_factor_inseparable():
    F = GF(3)
    assert kpoly_factor(kp(F, "x^3-t")) == [(kp(F, "x^3-t"), 1)]
    assert kpoly_factor(kp(F, "(x+t)^3")) == [(kp(F, "x+t"), 3)]
    fac = kpoly_factor(kp(F, "x^6-t^2"))
    assert {g for g, _ in fac} == {kp(F, "x^3-t"), kp(F, "x^3+t")}


def test_factor_over_f9_and_f2():
    F9 = GF(3, 2)
    # x^2 + 1 splits over F_9 since -1 is a square there
    fac = kpoly_factor(kp(F9, "x^2+1"))
    assert [g.deg for g, _ in fac] == [1, 1]
    F2 = GF(2)
    fac = kpoly_factor(kp(F2, "x^2+x+t"))
    assert fac == [(kp(F2, "x^2+x+t"), 1)]


def test_second_specialization_agrees():
    F = GF(3)
    for s in ["x^4+2*t*x^2+t^2+t", "x^3+t*x+1", "x^2+t"]:
        P = kp(F, s)
        assert is_irreducible_over_K(P) and is_irreducible_over_K(P, skip=1)
    assert not is_irreducible_over_K(kp(F, "x^2-t^2"), skip=1)


def test_factor_budget():
    F = GF(3)
    P = kp(F, "x^64+t^70*x+1")
    with pytest.raises(BudgetError):
        kpoly_factor(P, budget=100)
