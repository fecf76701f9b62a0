import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffdyn.errors import HypothesisError
from ffdyn.funcfield import INF, Frac, KField
from ffdyn.gf import GF
from ffdyn.kpoly import KPoly
from ffdyn.polyq import PolyQ
from ffdyn.ratmap import (
    RatMap, critical_points, degree_profile, evaluate, is_exceptional, is_postcritical,
    iterate_poly, orbit, ram_index_at, residue_period,
)

from oracles import all_places, orbit_table, rand_poly


# -- evaluation and orbits ---------------------------------------------------------

def test_evaluate_examples(P3):
    f = P3.map("z^2+t")
    assert evaluate(f, P3.pt("0")) == P3.pt("t")
    assert evaluate(f, INF) is INF
    assert evaluate(P3.map("z^2/t"), P3.pt("t")) == P3.pt("t")
    g = P3.map("1/z")
    assert evaluate(g, P3.pt("0")) is INF
    assert evaluate(g, INF) == P3.pt("0")


def test_orbit_record(P3):
    f = P3.map("z^2+t")
    rec = orbit(f, P3.pt("0"), 3)
    assert rec.values[0] == P3.pt("0")
    for a, b in zip(rec.values, rec.values[1:]):
        assert evaluate(f, a) == b
    assert rec.heights == [0, 1, 2, 4]


def test_constant_map_rejected(P3):
    with pytest.raises(HypothesisError):
        P3.map("t")


def test_canonical_scaling(P3):
    f = P3.map("(t*z^2+z)/(t*z+1)")
    assert f.den.lc == P3.K.one
    assert f.num.gcd(f.den).deg == 0


# -- preimage polynomials -----------------------------------------------------

def test_iterate_poly_examples(P3):
    P, rad = iterate_poly(P3.map("z^2+t"), 2, P3.pt("0"))
    assert P == P3.kp("x^4+2*t*x^2+t^2+t")
    P, rad = iterate_poly(P3.map("z^2"), 2, P3.pt("0"))
    assert P == P3.kp("x^4") and rad == P3.kp("x")
    P, rad = iterate_poly(P3.map("z^2+t"), 1, P3.pt("t"))
    assert P == P3.kp("x^2") and rad == P3.kp("x")


def _compose_poly(outer: KPoly, inner: KPoly) -> KPoly:
    acc = KPoly(inner.K)
    for a in reversed(outer.c):
        acc = acc * inner + KPoly(inner.K, (a,))
    return acc


@pytest.mark.parametrize("beta", ["0", "t", "1/t", "t^2+1"])
def test_preimages_push_forward(P3, beta):
    # if f^2(x) = beta then f(x) is a root of P_{1,beta}: P_1(f(x)) vanishes mod P_2
    f = P3.map("z^2+t")
    b = P3.pt(beta)
    P1, _ = iterate_poly(f, 1, b)
    P2, _ = iterate_poly(f, 2, b)
    assert (_compose_poly(P1, f.num) % P2).is_zero()


def test_iterate_matches_repeated_evaluation(P5):
    rng = random.Random(8)
    f = P5.map("(z^2+t)/(z+1)")
    f3 = f.iterate(3)
    for _ in range(10):
        z = Frac(rand_poly(rng, P5.F, 2))
        assert evaluate(f3, z) == evaluate(f, evaluate(f, evaluate(f, z)))


# -- degrees -----------------------------------------------------------------

def test_degree_profile_examples(P3, P5):
    assert degree_profile(P3.map("z^2+t")).to_dict() == {"total": 2, "separable": 2, "inseparable": 1}
    assert degree_profile(P3.map("z^3")).to_dict() == {"total": 3, "separable": 1, "inseparable": 3}
    assert degree_profile(P5.map("z^10+t*z^5")).to_dict() == {"total": 10, "separable": 2, "inseparable": 5}


small_maps = st.tuples(
    st.lists(st.integers(0, 2), min_size=1, max_size=4),
    st.lists(st.integers(0, 2), min_size=1, max_size=3),
    st.booleans(),
)


def _build(F, spec):
    K = KField(F)
    num, den, frob = spec
    cn = [Frac(PolyQ(F, (a, 1 if i == 0 else 0))) for i, a in enumerate(num)]
    cd = [Frac(PolyQ.const(F, a)) for a in den]
    N, D = KPoly(K, cn), KPoly(K, cd)
    if frob:
        N, D = N.substitute_power(F.p), D.substitute_power(F.p)
    if D.is_zero():
        D = KPoly(K, (K.one,))
    g = N.gcd(D)
    if max(N.deg, D.deg) - g.deg < 1:
        return None
    return RatMap(N, D)


@settings(max_examples=40, deadline=None)
@given(small_maps)
def test_degree_profile_multiplicative(spec):
    F = GF(3)
    f = _build(F, spec)
    if f is None:
        return
    prof = degree_profile(f)
    assert prof.total == prof.separable * prof.inseparable
    assert prof.inseparable in (1, 3, 9, 27)
    if f.degree ** 2 <= 64:
        assert degree_profile(f.iterate(2)).separable == prof.separable**2


# -- critical and exceptional structure -------------------------------------------

def _describe(cps):
    return sorted((c.describe(), c.ram_index) for c in cps)


def test_critical_points_examples(P3, P5):
    assert _describe(critical_points(P3.map("z^2+t"))) == [("0", 2), ("inf", 2)]
    assert critical_points(P3.map("z^3+t")) == []
    cps = critical_points(P5.map("(z^2-t)/z"))
    assert len(cps) == 1 and not cps[0].is_rational
    assert cps[0].location == P5.kp("x^2+t") and cps[0].ram_index == 2


def test_exceptional_examples(P3):
    assert is_exceptional(P3.map("z^2"), P3.pt("0"))
    assert not is_exceptional(P3.map("z^2+t"), P3.pt("0"))
    assert is_exceptional(P3.map("z^2+t"), INF)


@pytest.mark.parametrize("seed", range(6))
def test_polynomial_exceptional_at_infinity_is_totally_ramified(P5, seed):
    rng = random.Random(seed)
    K = P5.K
    d = rng.randint(2, 4)
    coeffs = [Frac(rand_poly(rng, P5.F, rng.randint(0, 2))) for _ in range(d)] + [K.one]
    f = RatMap(KPoly(K, coeffs))
    assert is_exceptional(f, INF)
    assert ram_index_at(f, INF) == f.degree


def test_postcritical_examples(P3):
    f = P3.map("z^2+t")
    r = is_postcritical(f, P3.pt("t"), 1)
    assert r.found and r.gamma == P3.pt("0") and r.n == 1
    r = is_postcritical(f, P3.pt("0"), 5)
    assert not r.found and r.to_dict()["verdict"] == "no_up_to_5"
    assert not is_postcritical(P3.map("z^2"), P3.pt("1"), 7).found


def test_postcritical_conjugate_class(P5):
    # critical class gamma^2 = -t; phi(gamma) = gamma - t/gamma = 2 gamma and
    # phi(2 gamma) = 2 gamma + 3 gamma = 0 over F_5, then phi(0) = inf
    f = P5.map("(z^2-t)/z")
    r = is_postcritical(f, P5.pt("0"), 3)
    assert r.found and r.n == 2 and r.gamma == P5.kp("x^2+t")
    r = is_postcritical(f, INF, 3)
    assert r.found and r.n == 3
    assert not is_postcritical(f, P5.pt("0"), 1).found
    assert not is_postcritical(f, P5.pt("1"), 4).found


# -- residue-field periods ---------------------------------------------------

def test_residue_period_examples(P3):
    f = P3.map("z^2+t")
    r = residue_period(f, P3.pt("0"), P3.pl("t+1"))
    assert (r.tail, r.cycle) == (0, 2)
    r = residue_period(f, P3.pt("0"), P3.pl("t"))
    assert (r.tail, r.cycle) == (0, 1)
    for pl in all_places(P3.F, 2)[1:]:
        r = residue_period(P3.map("z^2"), P3.pt("1"), pl)
        assert (r.tail, r.cycle) == (0, 1)


def test_residue_period_signals(P3):
    assert residue_period(P3.map("z^2+1/t"), P3.pt("0"), P3.pl("t")).status == "bad_reduction"
    assert residue_period(P3.map("z^2+t"), P3.pt("1/t"), P3.pl("t")).status == "not_integral"


def _reduced_orbit_oracle(coeffs, alpha, g):
    """Orbit of alpha under sum c_i z^i in F[t]/(g), by storing every value."""
    def f(x):
        acc = PolyQ.zero(g.F)
        for c in reversed(coeffs):
            acc = (acc * x + c) % g
        return acc
    return f, orbit_table(f, alpha % g)


@pytest.mark.parametrize("p", [2, 3])
def test_residue_period_matches_orbit_table(p):
    F = GF(p)
    K = KField(F)
    rng = random.Random(30 + p)
    places = [pl for pl in all_places(F, 3)[1:]]
    for _ in range(25):
        d = rng.randint(2, 3)
        coeffs = [rand_poly(rng, F, rng.randint(0, 3)) for _ in range(d)] + [PolyQ.one(F)]
        f = RatMap(KPoly(K, [Frac(c) for c in coeffs]))
        alpha = rand_poly(rng, F, rng.randint(0, 3))
        pl = rng.choice(places)
        r = residue_period(f, Frac(alpha), pl)
        fr, (tail, cycle) = _reduced_orbit_oracle(coeffs, alpha, pl.gen)
        assert (r.tail, r.cycle) == (tail, cycle)
        # the cycle length divides the order of the permutation on periodic residues
        residues = [PolyQ(F, [(code // p**i) % p for i in range(pl.gen.deg)]) for code in range(p**pl.gen.deg)]
        lcm = 1
        for x in residues:
            t0, c0 = orbit_table(fr, x)
            if t0 == 0:
                lcm = lcm * c0 // math.gcd(lcm, c0)
        assert lcm % cycle == 0
