import itertools
import random
from fractions import Fraction

import pytest

from ffdyn.errors import HypothesisError
from ffdyn.funcfield import INF, Frac, KField, Place, valuation
from ffdyn.gf import GF
from ffdyn.kpoly import KPoly
from ffdyn.ratmap import RatMap, eval_reduced
from ffdyn.reduction import (
    bad_reduction_places, cross_ratio, newton_polygon, noniso_set_witness, reduction_type,
    revalidate_witness,
)
from ffdyn.residue import ResidueField

from oracles import all_places, rand_frac, val


# -- reduction types ---------------------------------------------------------

def test_reduction_type_examples(P3):
    r = reduction_type(P3.map("z^2+t"), P3.pl("t"))
    assert r.is_good and r.to_dict()["reduced_map"] == "z^2"
    assert not reduction_type(P3.map("z^2+t"), Place.infinity()).is_good
    assert not reduction_type(P3.map("z^2/t"), P3.pl("t")).is_good


def test_bad_reduction_places_examples(P3):
    assert bad_reduction_places(P3.map("z^2+t")) == [Place.infinity()]
    assert bad_reduction_places(P3.map("z^2+1/t")) == [P3.pl("t")]
    assert bad_reduction_places(P3.map("z^2")) == []


@pytest.mark.parametrize("text", ["z^2+t", "(z^2+1)/(t*z)", "(z^2+t*z+1)/(z+t^2)", "z^3+1/(t+1)"])
def test_bad_places_complete(P3, text):
    f = P3.map(text)
    bad = set(bad_reduction_places(f))
    for pl in all_places(P3.F, 2):
        assert reduction_type(f, pl).is_good == (pl not in bad)


@pytest.mark.parametrize("text", ["z^2+t", "(z^2+1)/(t*z)", "(t*z^2+1)/(z+1)"])
def test_good_reduction_commutes_with_composition(P3, text):
    # pointwise on k_p and infinity: (phi^2)_p = (phi_p)^2
    f = P3.map(text)
    f2 = f.iterate(2)
    for pl in all_places(P3.F, 2)[1:]:
        r1 = reduction_type(f, pl)
        if not r1.is_good:
            continue
        r2 = reduction_type(f2, pl)
        assert r2.is_good
        R = ResidueField(pl, P3.F)
        for x in list(R.elements()) + [INF]:
            once = eval_reduced(r1.reduced_num, r1.reduced_den, x, R)
            twice = eval_reduced(r1.reduced_num, r1.reduced_den, once, R)
            assert eval_reduced(r2.reduced_num, r2.reduced_den, x, R) == twice


# -- Newton polygons -----------------------------------------------------------

def test_newton_examples(P3):
    ng = newton_polygon(P3.kp("x^4+2*t*x^2+t^2+t"), P3.pl("t"))
    assert ng.slopes == [(Fraction(-1, 4), 4)]
    assert ng.vertices == [(0, 1), (4, 0)]
    ng = newton_polygon(P3.kp("x^2-t^2"), P3.pl("t"))
    assert ng.slopes == [(-1, 2)]
    assert newton_polygon(P3.kp("x^2+t"), P3.pl("t+1")).slopes == [(0, 2)]


def test_newton_zero_polynomial(P3):
    with pytest.raises(ValueError):
        newton_polygon(KPoly(P3.K), P3.pl("t"))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_polygon_matches_rational_roots(p):
    F = GF(p)
    K = KField(F)
    rng = random.Random(p + 40)
    places = all_places(F, 2)
    for _ in range(40):
        roots = [rand_frac(rng, F, 2) for _ in range(rng.randint(1, 5))]
        P = KPoly(K, (K.one,))
        for r in roots:
            P = P * KPoly.linear(K, r)
        P = P.scale(rand_frac(rng, F, 2))
        pl = rng.choice(places)
        ng = newton_polygon(P, pl)
        assert sorted(ng.root_valuations()) == sorted(val(r, pl) for r in roots)
        total = sum(-s * n for s, n in ng.slopes)
        assert total == valuation(P.c[0], pl) - valuation(P.c[-1], pl)


def test_slopes_nondecreasing(P5):
    rng = random.Random(3)
    for _ in range(50):
        P = KPoly(P5.K, [rand_frac(rng, P5.F, 3, nonzero=False) for _ in range(5)] + [P5.K.one])
        slopes = [s for s, _ in newton_polygon(P, P5.pl("t")).slopes]
        assert slopes == sorted(slopes)


# -- cross ratios ------------------------------------------------------------

def test_cross_ratio_examples(P3, P5):
    c = cross_ratio(P3.pt("t^3"), P3.pt("t"), P3.pt("t^2"), P3.pt("1"), P3.pl("t"))
    assert c.comparison == 1 and c.greater_than_one
    pts = [P5.pt(s) for s in "0123"]
    for pl in all_places(P5.F, 1):
        assert cross_ratio(*pts, pl).is_one
    # infinity terms are dropped; the remaining terms give v(-1) - v(t - 1) at (t - 1)
    c = cross_ratio(INF, P3.pt("t"), P3.pt("1"), P3.pt("t+1"), P3.pl("t+2"))
    assert c.comparison == -1


def test_cross_ratio_rejects_repeats(P3):
    with pytest.raises(ValueError):
        cross_ratio(P3.pt("t"), P3.pt("t"), P3.pt("1"), P3.pt("0"), P3.pl("t"))
    with pytest.raises(ValueError):
        cross_ratio(INF, INF, P3.pt("1"), P3.pt("0"), P3.pl("t"))


def _moebius(a, b, z):
    return INF if z is INF else z * a + b


def _invert(z, F):
    if z is INF:
        return Frac.zero(F)
    if z.is_zero():
        return INF
    return Frac.one(F) / z


@pytest.mark.parametrize("p", [3, 5])
def test_cross_ratio_invariance(p):
    F = GF(p)
    rng = random.Random(p * 11)
    places = all_places(F, 2)
    for _ in range(300):
        pts = set()
        while len(pts) < 4:
            pts.add(rand_frac(rng, F, 2, nonzero=False))
        pts = list(pts)
        if rng.random() < 0.2:
            pts[rng.randrange(4)] = INF
        pl = rng.choice(places)
        c = cross_ratio(*pts, pl).comparison
        a, b = rand_frac(rng, F, 2), rand_frac(rng, F, 2, nonzero=False)
        assert cross_ratio(*[_moebius(a, b, z) for z in pts], pl).comparison == c
        assert cross_ratio(*[_invert(z, F) for z in pts], pl).comparison == c


# -- witnesses -----------------------------------------------------------------

def test_witness_example(P3):
    f, beta = P3.map("z^2+t"), P3.pt("0")
    rep = noniso_set_witness(f, beta, 4)
    assert rep.found and rep.n <= 4
    assert revalidate_witness(rep, f, beta)
    assert rep.comparison > 0


def test_witness_none_at_good_place(P3):
    f = P3.map("z^2+t")
    rep = noniso_set_witness(f, P3.pt("0"), 1, places=[P3.pl("t+1")])
    assert rep.kind == "none_found" and rep.to_dict()["kind"] == "none_found"
    assert not revalidate_witness(rep, f, P3.pt("0"))


@pytest.mark.parametrize("text,beta", [("z^2+1", "2"), ("z^3+2*z+1", "1"), ("(z^2+1)/z", "0")])
def test_witness_none_for_constant_maps(P3, text, beta):
    rep = noniso_set_witness(P3.map(text), P3.pt(beta), 3, places=all_places(P3.F, 2))
    assert not rep.found


def test_witness_none_for_scaled_constants(P5):
    # preimages of t^4 under z^2 at level 2 are t times the 4th roots of unity
    rep = noniso_set_witness(P5.map("z^2"), P5.pt("t^4"), 2, places=all_places(P5.F, 1))
    assert not rep.found


def test_tampered_witness_rejected(P3):
    f, beta = P3.map("z^2+t"), P3.pt("0")
    rep = noniso_set_witness(f, beta, 4)
    rep.comparison = rep.comparison + 1
    assert not revalidate_witness(rep, f, beta)


def _brute_nonconstant_cross_ratio(roots, places):
    for pl in places:
        for a, b, c, d in itertools.permutations(roots, 4):
            if cross_ratio(a, b, c, d, pl).comparison != 0:
                return True
    return False


@pytest.mark.parametrize("seed", range(8))
def test_witness_agrees_with_rational_roots(P3, seed):
    # maps with K-rational preimages at level 1: every cross ratio is computable directly
    rng = random.Random(seed)
    K = P3.K
    while True:
        roots = list({rand_frac(rng, P3.F, 2, nonzero=False) for _ in range(4)})
        if len(roots) == 4:
            break
    P = KPoly(K, (K.one,))
    for r in roots:
        P = P * KPoly.linear(K, r)
    f = RatMap(P)
    places = all_places(P3.F, 2)
    rep = noniso_set_witness(f, K.zero, 1, places=places)
    brute = _brute_nonconstant_cross_ratio(roots, places)
    if rep.found:
        assert brute and revalidate_witness(rep, f, K.zero)
        # the stored bound is realized by an actual quadruple at that place
        best = max(cross_ratio(a, b, c, d, rep.place).comparison
                   for a, b, c, d in itertools.permutations(roots, 4))
        assert best >= rep.comparison


def test_witness_hypotheses(P3):
    with pytest.raises(HypothesisError):
        noniso_set_witness(P3.map("z^2"), P3.pt("0"), 2)
    with pytest.raises(HypothesisError):
        noniso_set_witness(P3.map("z^2+t"), INF, 2)
