"""Reduction of maps at places, Newton polygons, cross ratios, and the
non-isotrivial preimage-set witness search.

Sign convention for cross ratios.  For points x1, x2, y1, y2 the comparison
integer is

    c = [v(x1 - y1) + v(x2 - y2)] - [v(x1 - y2) + v(x2 - y1)]

and the metric cross ratio |x1-y2||x2-y1| / |x1-y1||x2-y2| equals q^(c N_p).
So c > 0 means ratio > 1, c = 0 means ratio = 1.  Differences involving
the point at infinity are dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HypothesisError
from .funcfield import INF, Frac, Place, finite_places_of, valuation
from .kpoly import KPoly, p_resultant, p_taylor_shift, p_trim
from .polyq import PolyQ
from .ratmap import RatMap, iterate_poly, is_exceptional
from .residue import ResidueField, local_generator, to_local
from .textio import format_frac, format_kpoly, format_place

# -- reduction types --------------------------------------------------------


@dataclass
class ReductionType:
    place: Place
    verdict: str
    reduced_num: tuple = ()
    reduced_den: tuple = ()
    reason: str = ""

    @property
    def is_good(self) -> bool:
        return self.verdict == "good"

    def to_dict(self):
        d = {"place": format_place(self.place), "verdict": self.verdict}
        if self.is_good:
            d["reduced_map"] = format_reduced_map(self.reduced_num, self.reduced_den)
        else:
            d["reason"] = self.reason
        return d


def _fmt_res(a: PolyQ) -> str:
    from .textio import format_polyq
    s = format_polyq(a)
    return s if "+" not in s else f"({s})"


def format_reduced_map(num: tuple, den: tuple) -> str:
    def fmt(c):
        terms = []
        for k in range(len(c) - 1, -1, -1):
            a = c[k]
            if a.is_zero():
                continue
            cs = _fmt_res(a)
            if k == 0:
                terms.append(cs)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                terms.append(mono if cs == "1" else f"{cs}*{mono}")
        return "+".join(terms) if terms else "0"
    if len(den) == 1 and den[0].is_one():
        return fmt(num)
    return f"({fmt(num)}) / ({fmt(den)})"


def _local_coeffs(phi: RatMap, place: Place) -> tuple[list[Frac], list[Frac], PolyQ]:
    """Coefficients of num and den in local coordinates, scaled to be integral
    with at least one unit."""
    F = phi.F
    pi = local_generator(place, F)
    lp = Place(pi)
    num = [to_local(a, place) for a in phi.num.c]
    den = [to_local(a, place) for a in phi.den.c]
    m = min(valuation(a, lp) for a in num + den if not a.is_zero())
    scale = Frac(pi) ** (-m)
    return [a * scale for a in num], [a * scale for a in den], pi


def reduction_type(phi: RatMap, place: Place) -> ReductionType:
    """Good iff the normalized reductions have no common root on P^1 and the degree is kept."""
    R = ResidueField(place, phi.F)
    num, den, _ = _local_coeffs(phi, place)
    rn = p_trim([R.reduce_local(a) for a in num], R)
    rd = p_trim([R.reduce_local(a) for a in den], R)
    d = phi.degree
    if not rn or not rd:
        return ReductionType(place, "bad", reason="a reduced component vanishes")
    if max(len(rn), len(rd)) - 1 < d:
        return ReductionType(place, "bad", reason="degree drops (common root at infinity)")
    if len(rn) == 1 and len(rd) == 1:
        return ReductionType(place, "bad", reason="reduction is constant")
    res = p_resultant(rn, rd, R)
    if R.is_zero(res):
        return ReductionType(place, "bad", reason="reductions share a root")
    return ReductionType(place, "good", rn, rd)


def homogeneous_resultant(phi: RatMap) -> PolyQ:
    """Res_d of the primitive integral homogenized pair, a nonzero element of F_q[t]."""
    d = phi.degree
    K = phi.K
    allc = list(phi.num.c) + list(phi.den.c)
    L = PolyQ.one(phi.F)
    for a in allc:
        L = L * a.den.exact_div(L.gcd(a.den))
    A = KPoly(K, [a * L for a in phi.num.c])
    B = KPoly(K, [a * L for a in phi.den.c])
    g = PolyQ.zero(phi.F)
    for a in A.c + B.c:
        if not a.is_zero():
            g = a.num.gcd(g) if g else a.num.monic()
    A = A.scale(Frac(g).inv())
    B = B.scale(Frac(g).inv())
    r = A.resultant(B)
    if A.deg == d:
        r = r * A.lc ** (d - B.deg)
    else:
        r = r * B.lc ** (d - A.deg)
    if not r.is_poly():
        raise AssertionError("homogeneous resultant should be integral")
    return r.num


def bad_reduction_places(phi: RatMap) -> list[Place]:
    """Every place of bad reduction in the given coordinates (finite ones, then INF)."""
    res = homogeneous_resultant(phi)
    out = [pl for pl in finite_places_of(res)]
    if not reduction_type(phi, Place.infinity()).is_good:
        out.append(Place.infinity())
    return out


# -- Newton polygons --------------------------------------------------------


@dataclass
class NewtonPolygon:
    vertices: list
    slopes: list  # (slope, length), slopes non-decreasing
    zero_roots: int = 0

    def root_valuations(self) -> list:
        """Valuations of all roots, highest first (math.inf for x = 0)."""
        out = [math.inf] * self.zero_roots
        for s, length in self.slopes:
            out.extend([-s] * length)
        return out

    def to_dict(self):
        return {
            "vertices": [[i, _q(v)] for i, v in self.vertices],
            "slopes": [[_q(s), n] for s, n in self.slopes],
            "zero_roots": self.zero_roots,
        }


def _q(x) -> dict | str:
    if x == math.inf:
        return "inf"
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def lower_hull(points: list) -> list:
    """Lower convex hull of (x, y) points with distinct x, left to right."""
    hull: list = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def polygon_from_valuations(vals: list) -> NewtonPolygon:
    """vals[i] = valuation of the i-th coefficient (math.inf for zero)."""
    pts = [(i, Fraction(v)) for i, v in enumerate(vals) if v != math.inf]
    if not pts:
        raise ValueError("Newton polygon of the zero polynomial")
    hull = lower_hull(pts)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(hull, slopes, pts[0][0])


def newton_polygon(P: KPoly, place: Place) -> NewtonPolygon:
    if P.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    return polygon_from_valuations([valuation(a, place) for a in P.c])


# -- cross ratios -----------------------------------------------------------


@dataclass(frozen=True)
class CrossRatioVal:
    comparison: int

    @property
    def is_one(self) -> bool:
        return self.comparison == 0

    @property
    def greater_than_one(self) -> bool:
        return self.comparison > 0


def _vdiff(a, b, place):
    if a is INF or b is INF:
        return None
    return valuation(a - b, place)


def cross_ratio(x1, x2, y1, y2, place: Place) -> CrossRatioVal:
    pts = [x1, x2, y1, y2]
    for i in range(4):
        for j in range(i + 1, 4):
            a, b = pts[i], pts[j]
            if (a is INF and b is INF) or (a is not INF and b is not INF and a == b):
                raise ValueError("cross ratio needs four distinct points")
    top = [_vdiff(x1, y1, place), _vdiff(x2, y2, place)]
    bot = [_vdiff(x1, y2, place), _vdiff(x2, y1, place)]
    c = sum(v for v in top if v is not None) - sum(v for v in bot if v is not None)
    return CrossRatioVal(int(c))


def comparison_from_valuations(d12, d34, d14, d32) -> Fraction:
    """Cross-ratio comparison (z1, z3; z2, z4) from the four pairwise difference valuations."""
    return Fraction(d12) + Fraction(d34) - Fraction(d14) - Fraction(d32)


# -- witness search ---------------------------------------------------------


class _ExtRing:
    """K[a] = K[z]/(u) with elements stored as KPoly reduced mod u."""

    def __init__(self, u: KPoly):
        self.u = u
        K = u.K
        self.zero = KPoly(K)
        self.one = KPoly(K, (K.one,))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return (a * b) % self.u

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    def from_int(self, n):
        return KPoly(self.u.K, (self.u.K.from_int(n),))


@dataclass
class Center:
    """A cluster center: 0, a K-rational point, or a root of an irreducible u."""

    kind: str  # "zero" | "rational" | "root"
    value: object  # Frac or KPoly u
    valuation: Fraction = Fraction(0)  # v_p of the center when kind == "root"

    def describe(self) -> str:
        if self.kind == "root":
            return f"root of {format_kpoly(self.value, 'x')}"
        return format_frac(self.value)


def totally_ramified_valuation(u: KPoly, place: Place):
    """v_p(a) for a root a of u if the polygon certifies total ramification, else None."""
    if u.deg < 2:
        return None
    np_ = newton_polygon(u, place)
    if np_.zero_roots or len(np_.slopes) != 1:
        return None
    s, _ = np_.slopes[0]
    if s.denominator != u.deg:
        return None
    return -s


def _ext_valuation(c: KPoly, place: Place, va: Fraction):
    """v_p(sum c_i a^i) for a totally ramified generator a with v(a) = va."""
    if c.is_zero():
        return math.inf
    return min(Fraction(valuation(ci, place)) + i * va for i, ci in enumerate(c.c) if not ci.is_zero())


def centered_root_valuations(R: KPoly, center: Center, place: Place) -> list:
    """Valuations v(gamma - a) over the roots gamma of R, highest first."""
    K = R.K
    if center.kind != "root":
        a = center.value
        S = R.taylor_shift(a) if not a.is_zero() else R
        return newton_polygon(S, place).root_valuations()
    u = center.value
    ring = _ExtRing(u)
    coeffs = tuple(KPoly(K, (c,)) for c in R.c)
    a = KPoly.x(K) % u
    shifted = p_taylor_shift(coeffs, a, ring)
    vals = [_ext_valuation(c, place, center.valuation) for c in shifted]
    vals += [math.inf] * (R.deg + 1 - len(vals))
    return polygon_from_valuations(vals).root_valuations()


def cluster_split(vals: list):
    """(k, v_k - v_{k+1}) for the first 2 <= k <= m-2 with v_k > v_{k+1}, else None.

    vals are sorted root valuations, highest first.  Two roots from the top k
    and two from the rest give a cross ratio comparison of at least the gap.
    """
    m = len(vals)
    for k in range(2, m - 1):
        hi, lo = vals[k - 1], vals[k]
        if hi != math.inf and hi > lo:
            return k, Fraction(hi - lo)
    return None


def cluster_gap(vals: list):
    hit = cluster_split(vals)
    return None if hit is None else hit[1]


@dataclass
class WitnessReport:
    map: str
    beta: str
    n_max: int
    kind: str = "none_found"
    n: int | None = None
    place: Place | None = None
    center: Center | None = None
    valuations: list = field(default_factory=list)
    comparison: Fraction | None = None
    probed: list = field(default_factory=list)
    radical_degree: int | None = None
    split: int = 2

    @property
    def found(self) -> bool:
        return self.kind != "none_found"

    def to_dict(self):
        d = {
            "map": self.map,
            "beta": self.beta,
            "n_max": self.n_max,
            "kind": self.kind,
            "probed": [[n, format_place(pl)] for n, pl in self.probed],
        }
        if self.found:
            d.update({
                "n": self.n,
                "place": format_place(self.place),
                "center": self.center.describe(),
                "slopes": [_q(v) for v in self.valuations],
                "comparison_integer": _q(self.comparison),
                "radical_degree": self.radical_degree,
                "split": self.split,
            })
        return d


def default_witness_places(phi: RatMap, beta) -> list[Place]:
    places = set(bad_reduction_places(phi))
    data = list(phi.coefficients())
    if beta is not INF:
        data.append(beta)
    for a in data:
        if a.is_zero():
            continue
        for poly in (a.num, a.den):
            places.update(finite_places_of(poly))
    return sorted(places, key=lambda pl: pl.sort_key())


def _centers(radicals: list, place: Place):
    """Candidate centers in a fixed order: 0, K-rational roots, ramified roots."""
    from .kfactor import kpoly_factor
    K = radicals[-1].K
    yield Center("zero", K.zero)
    factored = [kpoly_factor(R) for R in radicals]
    for u, _ in factored[-1]:
        if u.deg == 1:
            yield Center("rational", -u.c[0])
    seen = set()
    for fac in factored:
        for u, _ in fac:
            if u in seen:
                continue
            seen.add(u)
            va = totally_ramified_valuation(u, place)
            if va is not None:
                yield Center("root", u, va)


def _probe(R: KPoly, radicals: list, place: Place):
    for c in _centers(radicals, place):
        vals = centered_root_valuations(R, c, place)
        hit = cluster_split(vals)
        if hit is not None:
            return c, vals, hit
    return None


def noniso_set_witness(phi: RatMap, beta, n_max: int, places=None, n_min: int = 1) -> WitnessReport:
    """Search for a cross ratio != 1 among the points of phi^{-n}(beta)."""
    if phi.degree < 2:
        raise HypothesisError("witness search needs deg phi >= 2")
    if beta is INF:
        raise HypothesisError("witness search needs a finite beta")
    if is_exceptional(phi, beta):
        raise HypothesisError("beta is exceptional")
    if places is None:
        places = default_witness_places(phi, beta)
    rep = WitnessReport(str(phi), format_frac(beta), n_max)
    radicals = []
    for n in range(1, n_max + 1):
        _, R = iterate_poly(phi, n, beta)
        radicals.append(R)
        if n < n_min:
            continue
        for pl in places:
            rep.probed.append((n, pl))
            if R.deg < 4:
                continue
            hit = _probe(R, radicals, pl)
            if hit is not None:
                c, vals, (k, gap) = hit
                rep.kind = "slope_chain" if c.kind == "zero" else "two_clusters"
                rep.n, rep.place, rep.center = n, pl, c
                rep.valuations, rep.comparison = vals, gap
                rep.radical_degree, rep.split = R.deg, k
                return rep
    return rep


def revalidate_witness(rep: WitnessReport, phi: RatMap, beta) -> bool:
    """Recompute the centered polygon from scratch and re-derive the comparison bound.

    With z1, z2 among the k roots closest to the center a and z3, z4 among
    the others, ultrametric estimates give v(z1-z2) >= v_k and
    v(zi-zj) = v(zj-a) for i in {1,2}, j in {3,4}, so the comparison of
    (z1, z3; z2, z4) is at least v_k - v_{k+1} > 0.
    """
    if not rep.found:
        return False
    _, R = iterate_poly(phi, rep.n, beta)
    if R.deg != rep.radical_degree:
        return False
    c = rep.center
    if c.kind == "root":
        va = totally_ramified_valuation(c.value, rep.place)
        if va is None or va != c.valuation:
            return False
    vals = centered_root_valuations(R, c, rep.place)
    if vals != rep.valuations:
        return False
    k = rep.split
    if cluster_split(vals) != (k, rep.comparison):
        return False
    vk, vk1, vk2 = vals[k - 1], vals[k], vals[k + 1]
    # worst case v(z3 - z4) = min(v_{k+1}, v_{k+2}) = v_{k+2}
    bound = comparison_from_valuations(vk, vk2, vk2, vk1)
    return bound > 0 and bound == rep.comparison
