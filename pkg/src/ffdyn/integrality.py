"""S-integrality relative to a divisor, the functoriality transfer, and orbit scans.

A divisor D on P^1 is given by a squarefree G in K[x] (its finite support,
possibly non-K-rational) and a flag for the point at infinity.  Outside an
enlarged set S (coefficients of G integral, leading coefficient and
discriminant units) a point alpha is p-adically close to Supp D exactly when

    v_p(alpha) >= 0 and v_p(G(alpha)) > 0,   or   v_p(alpha) < 0 and INF in D.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import HypothesisError
from .funcfield import INF, Frac, Place, finite_places_of, valuation, weil_height
from .kpoly import KPoly
from .polyq import PolyQ, _equal_degree
from .ratmap import RatMap, evaluate, iterate_poly
from .textio import format_kpoly, format_place


@dataclass(frozen=True)
class PlaceSet:
    places: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, *places) -> PlaceSet:
        return cls(frozenset(places))

    def __contains__(self, pl):
        return pl in self.places

    def __or__(self, other):
        other = other.places if isinstance(other, PlaceSet) else frozenset(other)
        return PlaceSet(self.places | other)

    def __le__(self, other):
        return self.places <= other.places

    def sorted(self) -> list[Place]:
        return sorted(self.places, key=lambda pl: pl.sort_key())

    def finite_generators(self) -> list[PolyQ]:
        return [pl.gen for pl in self.places if pl.gen is not None]

    def to_list(self) -> list[str]:
        return [format_place(pl) for pl in self.sorted()]


@dataclass(frozen=True)
class DivisorSpec:
    G: KPoly | None
    include_infinity: bool = False

    @classmethod
    def point(cls, K, beta) -> DivisorSpec:
        if beta is INF:
            return cls(None, True)
        return cls(KPoly.linear(K, beta), False)

    @classmethod
    def pullback(cls, phi: RatMap, beta) -> DivisorSpec:
        """Support of phi^*(beta), without multiplicities."""
        inf_pre = evaluate(phi, INF)
        has_inf = inf_pre is INF if beta is INF else (inf_pre is not INF and inf_pre == beta)
        try:
            _, rad = iterate_poly(phi, 1, beta)
        except HypothesisError:
            rad = None
        return cls(rad, has_inf)

    def to_dict(self):
        return {"G": format_kpoly(self.G) if self.G is not None else None,
                "include_infinity": self.include_infinity}


def _separable_core(G: KPoly) -> KPoly:
    p = G.F.p
    while G.deg > 0 and G.derivative().is_zero():
        G = G.deflate(p)
    return G


def _places_of_frac(z: Frac) -> set:
    out = set(finite_places_of(z.num)) | set(finite_places_of(z.den))
    if valuation(z, Place.infinity()) != 0:
        out.add(Place.infinity())
    return out


def enlarge_S(S: PlaceSet, D: DivisorSpec, extra=()) -> PlaceSet:
    """Add places where G has non-integral coefficients, non-unit lc or discriminant."""
    add = set(extra)
    if D.G is not None and D.G.deg >= 1:
        G = D.G
        inf = Place.infinity()
        for a in G.c:
            if a.is_zero():
                continue
            add.update(finite_places_of(a.den))
            if valuation(a, inf) < 0:
                add.add(inf)
        add.update(_places_of_frac(G.lc))
        core = _separable_core(G)
        if core.deg >= 2:
            add.update(_places_of_frac(core.discriminant()))
    return S | add


def _strip(poly: PolyQ, gens) -> PolyQ:
    for g in gens:
        while poly.deg > 0:
            q, r = divmod(poly, g)
            if r:
                break
            poly = q
    return poly


def first_place(poly: PolyQ) -> Place | None:
    """Smallest place (degree, then coefficients) dividing poly, without full factorization."""
    if poly.deg < 1:
        return None
    f = PolyQ.one(poly.F)
    for g, _ in poly.squarefree_decomposition():
        f = f * g
    x = PolyQ.gen(f.F)
    h = x % f
    d = 0
    while True:
        d += 1
        if 2 * d > f.deg:
            return Place(f)
        h = h.powmod(f.F.q, f)
        block = f.gcd(h - x)
        if block.deg > 0:
            return Place(min(_equal_degree(block, d), key=lambda g: g.sort_key()))


@dataclass(frozen=True)
class IntegralityResult:
    integral: bool
    witness: Place | None = None

    def __bool__(self):
        return self.integral


def s_integrality(alpha, D: DivisorSpec, S: PlaceSet) -> IntegralityResult:
    """Decide S-integrality of alpha relative to D and name a failing place."""
    inf = Place.infinity()
    if alpha is INF:
        if not D.include_infinity:
            return IntegralityResult(True)
        return IntegralityResult(False, inf if inf not in S else None)
    gens = S.finite_generators()
    if D.include_infinity:
        # poles of alpha outside S
        if inf not in S and valuation(alpha, inf) < 0:
            return IntegralityResult(False, inf)
        rest = _strip(alpha.den, gens)
        if rest.deg > 0:
            return IntegralityResult(False, first_place(rest))
    if D.G is not None:
        val = D.G(alpha)
        if val.is_zero():
            # alpha lies on the support: non-integral at every place
            cand = inf if inf not in S else None
            if cand is None:
                cand = _some_place_outside(alpha.F, S)
            return IntegralityResult(False, cand)
        # finite places with v(G(alpha)) > 0 and v(alpha) >= 0
        num = _strip(val.num, gens)
        g = num.gcd(alpha.den) if alpha.den.deg > 0 else PolyQ.one(alpha.F)
        while g.deg > 0:
            num = num.exact_div(g)
            g = num.gcd(g)
        if num.deg > 0:
            return IntegralityResult(False, first_place(num))
        if inf not in S and valuation(alpha, inf) >= 0 and valuation(val, inf) > 0:
            return IntegralityResult(False, inf)
    return IntegralityResult(True)


def _some_place_outside(F, S: PlaceSet) -> Place:
    from .funcfield import places_up_to_degree
    d = 1
    while True:
        for pl in places_up_to_degree(F, d):
            if pl not in S and pl.gen.deg == d:
                return pl
        d += 1


def is_s_integral(alpha, D: DivisorSpec, S: PlaceSet) -> bool:
    return s_integrality(alpha, D, S).integral


@dataclass(frozen=True)
class FunctCheck:
    image_integral: bool
    preimage_integral: bool

    @property
    def agree(self) -> bool:
        return self.image_integral == self.preimage_integral

    def to_dict(self):
        return {"phi_gamma_integral_rel_alpha": self.image_integral,
                "gamma_integral_rel_pullback": self.preimage_integral,
                "agree": self.agree}


def auto_S(phi: RatMap, alpha, S: PlaceSet | None = None) -> PlaceSet:
    """S enlarged by bad reduction of phi and by both divisors {alpha} and phi^*(alpha)."""
    from .reduction import bad_reduction_places
    if S is None:
        S = PlaceSet.of(Place.infinity())
    S = S | bad_reduction_places(phi)
    S = enlarge_S(S, DivisorSpec.point(phi.K, alpha))
    S = enlarge_S(S, DivisorSpec.pullback(phi, alpha))
    return S


def functoriality_check(phi: RatMap, alpha, gamma, S: PlaceSet) -> FunctCheck:
    from .reduction import bad_reduction_places
    D1 = DivisorSpec.point(phi.K, alpha)
    D2 = DivisorSpec.pullback(phi, alpha)
    need = enlarge_S(enlarge_S(PlaceSet(), D1, bad_reduction_places(phi)), D2)
    if not need <= S:
        missing = [format_place(pl) for pl in (need.places - S.places)]
        raise HypothesisError(f"S must contain {missing}")
    lhs = is_s_integral(evaluate(phi, gamma), D1, S)
    rhs = is_s_integral(gamma, D2, S)
    return FunctCheck(lhs, rhs)


@dataclass
class ScanRow:
    n: int
    height: int
    integral: bool
    witness: Place | None

    def csv(self) -> str:
        w = "" if self.integral or self.witness is None else format_place(self.witness)
        return f"{self.n},{self.height},{str(self.integral).lower()},{w}"


@dataclass
class ScanReport:
    rows: list
    N: int

    @property
    def integral_indices(self) -> list[int]:
        return [r.n for r in self.rows if r.integral]

    @property
    def last_integral(self) -> int | None:
        idx = self.integral_indices
        return idx[-1] if idx else None

    def csv(self) -> str:
        return "\n".join(["n,height,integral,witness"] + [r.csv() for r in self.rows]) + "\n"

    def to_dict(self):
        return {"N": self.N, "integral_n": self.integral_indices, "last_integral": self.last_integral,
                "heights": [r.height for r in self.rows]}


def orbit_integral_scan(phi: RatMap, alpha, beta, S: PlaceSet, N: int) -> ScanReport:
    """Rows for n = 0..N: is phi^n(alpha) S-integral relative to beta?"""
    if phi.degree < 2:
        raise HypothesisError("scan needs deg phi >= 2")
    D = DivisorSpec.point(phi.K, beta)
    rows = []
    z = alpha
    for n in range(N + 1):
        if n:
            z = evaluate(phi, z)
        res = s_integrality(z, D, S)
        rows.append(ScanRow(n, weil_height(z), res.integral, res.witness))
    return ScanReport(rows, N)


__all__ = [
    "PlaceSet", "DivisorSpec", "enlarge_S", "is_s_integral", "s_integrality",
    "functoriality_check", "FunctCheck", "orbit_integral_scan", "ScanReport", "auto_S",
    "first_place",
]
