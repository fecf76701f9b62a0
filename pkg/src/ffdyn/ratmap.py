"""Rational maps phi in K(z): evaluation, iteration, degrees, critical structure.

A map is a coprime pair (num, den) of KPoly with den monic (den = 1 for
polynomial maps).  Points of P^1(K) are Frac values or the sentinel INF.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import comb

from .errors import BudgetError, HypothesisError
from .funcfield import INF, Frac, KField, weil_height
from .gf import FieldConfig
from .kpoly import KPoly, p_eval
from .textio import format_frac, format_kpoly, format_map, parse_rational_function

DEGREE_BUDGET = int(os.environ.get("FFDYN_DEGREE_BUDGET", "4096"))


class RatMap:
    """phi(z) = num(z) / den(z) over K."""

    __slots__ = ("num", "den")

    def __init__(self, num: KPoly, den: KPoly | None = None, _canonical: bool = False):
        K = num.K
        if den is None:
            den = KPoly(K, (K.one,))
        if not _canonical:
            if den.is_zero():
                raise ZeroDivisionError("map with zero denominator")
            g = num.gcd(den)
            if g.deg > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            s = den.lc.inv()
            num, den = num.scale(s), den.scale(s)
        self.num, self.den = num, den
        if self.degree < 1 and not _canonical:
            raise HypothesisError("constant maps are not supported")

    @classmethod
    def parse(cls, F: FieldConfig, text: str) -> RatMap:
        num, den = parse_rational_function(F, text)
        return cls(num, den, _canonical=True)._check()

    def _check(self):
        if self.degree < 1:
            raise HypothesisError("constant maps are not supported")
        return self

    @classmethod
    def polynomial(cls, P: KPoly) -> RatMap:
        return cls(P)

    @property
    def K(self) -> KField:
        return self.num.K

    @property
    def F(self) -> FieldConfig:
        return self.num.K.F

    @property
    def degree(self) -> int:
        return max(self.num.deg, self.den.deg)

    def is_polynomial(self) -> bool:
        return self.den.deg == 0

    def __eq__(self, other):
        return isinstance(other, RatMap) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatMap({self})"

    def __str__(self):
        return format_map(self.num, self.den, "z")

    def coefficients(self) -> list[Frac]:
        return list(self.num.c) + list(self.den.c)

    def has_constant_coefficients(self) -> bool:
        return all(a.is_constant() for a in self.coefficients())

    def __call__(self, z):
        return evaluate(self, z)

    def compose(self, other: RatMap) -> RatMap:
        """self o other."""
        d = self.degree
        a, b = other.num, other.den
        K = self.K
        # powers of a and b up to d
        pa = [KPoly(K, (K.one,))]
        pb = [KPoly(K, (K.one,))]
        for _ in range(d):
            pa.append(pa[-1] * a)
            pb.append(pb[-1] * b)

        def hom(P: KPoly) -> KPoly:
            acc = KPoly(K)
            for i, c in enumerate(P.c):
                if not c.is_zero():
                    acc = acc + (pa[i] * pb[d - i]).scale(c)
            return acc

        return RatMap(hom(self.num), hom(self.den))

    def iterate(self, n: int) -> RatMap:
        if n < 1:
            raise ValueError("iterate needs n >= 1")
        if self.degree**n > DEGREE_BUDGET:
            raise BudgetError(f"deg phi^{n} = {self.degree**n} exceeds budget {DEGREE_BUDGET}")
        out = self
        for _ in range(n - 1):
            out = self.compose(out)
        return out

    def to_dict(self):
        return {"num": format_kpoly(self.num, "z"), "den": format_kpoly(self.den, "z")}


def evaluate(phi: RatMap, z):
    """phi(z) on P^1(K)."""
    if z is INF:
        dn, dd = phi.num.deg, phi.den.deg
        if dn > dd:
            return INF
        if dn < dd:
            return phi.K.zero
        return phi.num.lc / phi.den.lc
    d = phi.den(z)
    if d.is_zero():
        return INF
    return phi.num(z) / d


@dataclass
class OrbitRecord:
    seed: object
    values: list = field(default_factory=list)
    heights: list = field(default_factory=list)

    def to_dict(self):
        return {
            "seed": format_frac(self.seed),
            "values": [format_frac(v) for v in self.values],
            "heights": list(self.heights),
        }


def orbit(phi: RatMap, alpha, n: int, height_budget: int | None = None) -> OrbitRecord:
    """alpha, phi(alpha), ..., phi^n(alpha) with Weil heights."""
    if height_budget is None:
        height_budget = DEGREE_BUDGET * 4
    rec = OrbitRecord(alpha, [alpha], [weil_height(alpha)])
    z = alpha
    for _ in range(n):
        z = evaluate(phi, z)
        h = weil_height(z)
        if h > height_budget:
            raise BudgetError(f"orbit height {h} exceeds budget {height_budget}")
        rec.values.append(z)
        rec.heights.append(h)
    return rec


# -- preimage polynomials --------------------------------------------------

def iterate_poly(phi: RatMap, n: int, beta) -> tuple[KPoly, KPoly]:
    """(P, rad P) with P monic, the numerator of phi^n(x) - beta.

    For beta = INF the polynomial is the denominator of phi^n.
    """
    psi = phi.iterate(n)
    if beta is INF:
        P = psi.den
    else:
        P = psi.num - psi.den.scale(beta)
    if P.deg < 1:
        if P.is_zero():
            raise HypothesisError("phi^n(x) - beta vanishes identically")
        raise HypothesisError("beta has no finite preimages")
    P = P.monic()
    return P, P.radical()


# -- degrees ---------------------------------------------------------------

@dataclass(frozen=True)
class DegreeProfile:
    total: int
    separable: int
    inseparable: int

    def to_dict(self):
        return {"total": self.total, "separable": self.separable, "inseparable": self.inseparable}


def inseparable_exponent(phi: RatMap) -> int:
    """Largest r with phi(z) = g(z^(p^r))."""
    p = phi.F.p
    r = 0
    k = p
    while all(P.is_power_form(k) for P in (phi.num, phi.den)) and phi.degree % k == 0:
        r += 1
        k *= p
    return r


def separable_part(phi: RatMap) -> tuple[RatMap, int]:
    """(g, r) with phi(z) = g(z^(p^r)) and g separable."""
    r = inseparable_exponent(phi)
    k = phi.F.p**r
    if r == 0:
        return phi, 0
    return RatMap(phi.num.deflate(k), phi.den.deflate(k), _canonical=True), r


def degree_profile(phi: RatMap) -> DegreeProfile:
    r = inseparable_exponent(phi)
    di = phi.F.p**r
    return DegreeProfile(phi.degree, phi.degree // di, di)


# -- ramification ----------------------------------------------------------

def _hasse(P: KPoly, k: int) -> KPoly:
    """k-th Hasse derivative: sum C(i, k) a_i z^(i-k)."""
    p = P.F.p
    K = P.K
    return KPoly(K, [a * (comb(i, k) % p) for i, a in enumerate(P.c) if i >= k])


def _mod(P: KPoly, u: KPoly) -> KPoly:
    return P % u


def ram_index_at_class(phi: RatMap, u: KPoly) -> int:
    """e_phi at a root gamma of the irreducible u, computed in K[z]/(u)."""
    N, D = phi.num, phi.den
    Dg = _mod(D, u)
    if Dg.is_zero():
        # gamma is a pole: e = multiplicity of u in D
        e, rest = 0, D
        while True:
            q, r = divmod(rest, u)
            if not r.is_zero():
                return e
            e, rest = e + 1, q
    Ng = _mod(N, u)
    for k in range(1, phi.degree + 1):
        c = _mod(_hasse(N, k) * Dg - Ng * _hasse(D, k), u)
        if not c.is_zero():
            return k
    raise AssertionError("ramification index exceeds degree")


def ram_index_at_infinity(phi: RatMap) -> int:
    dn, dd = phi.num.deg, phi.den.deg
    if dn > dd:
        return dn - dd
    c = phi.num.lc / phi.den.lc if dn == dd else phi.K.zero
    return dd - (phi.num - phi.den.scale(c)).deg


def ram_index_at(phi: RatMap, gamma) -> int:
    if gamma is INF:
        return ram_index_at_infinity(phi)
    return ram_index_at_class(phi, KPoly.linear(phi.K, gamma))


@dataclass(frozen=True)
class CriticalPoint:
    """A K-rational point (Frac or INF) or a conjugate class given by an irreducible KPoly."""

    location: object
    ram_index: int

    @property
    def is_rational(self) -> bool:
        return not isinstance(self.location, KPoly)

    def describe(self) -> str:
        if isinstance(self.location, KPoly):
            return f"roots of {format_kpoly(self.location, 'z')}"
        return format_frac(self.location)

    def to_dict(self):
        return {"location": self.describe(), "ram_index": self.ram_index,
                "conjugate_class": not self.is_rational}


def wronskian(phi: RatMap) -> KPoly:
    return phi.num.derivative() * phi.den - phi.num * phi.den.derivative()


def critical_points(phi: RatMap) -> list[CriticalPoint]:
    """Points gamma with e_phi(gamma) > deg_i(phi), including INF and conjugate classes."""
    from .kfactor import kpoly_factor

    g, r = separable_part(phi)
    di = phi.F.p**r
    if g.degree < 1:
        raise HypothesisError("separable degree must be >= 1")
    out = []
    W = wronskian(g)
    if W.deg >= 1:
        cand = W.substitute_power(di) if di > 1 else W
        for u, _ in kpoly_factor(cand):
            e = ram_index_at_class(phi, u)
            if e > di:
                loc = -u.c[0] if u.deg == 1 else u
                out.append(CriticalPoint(loc, e))
    e_inf = ram_index_at_infinity(phi)
    if e_inf > di:
        out.append(CriticalPoint(INF, e_inf))
    return out


# -- exceptional / post-critical ------------------------------------------

def is_exceptional(phi: RatMap, beta) -> bool:
    if phi.degree < 2:
        raise HypothesisError("exceptionality needs deg phi >= 2")
    if beta is INF:
        return phi.iterate(2).is_polynomial()
    psi = phi.iterate(2)
    if evaluate(psi, INF) == beta:
        return False
    P, rad = iterate_poly(phi, 2, beta)
    return rad == KPoly.linear(phi.K, beta)


@dataclass
class PostcriticalResult:
    found: bool
    bound: int
    gamma: object = None
    n: int | None = None

    def to_dict(self):
        d = {"postcritical": self.found, "bound": self.bound}
        if self.found:
            g = self.gamma
            d["gamma"] = format_kpoly(g, "z") if isinstance(g, KPoly) else format_frac(g)
            d["n"] = self.n
        else:
            d["verdict"] = f"no_up_to_{self.bound}"
        return d


def _eval_mod(P: KPoly, w: KPoly, u: KPoly) -> KPoly:
    acc = KPoly(P.K)
    for a in reversed(P.c):
        acc = (acc * w + KPoly(P.K, (a,))) % u
    return acc


def same_point(a, b) -> bool:
    if a is INF or b is INF:
        return a is b
    return a == b


def is_postcritical(phi: RatMap, beta, N: int) -> PostcriticalResult:
    """Semi-decision: is beta = phi^n(gamma) for a critical gamma and 1 <= n <= N?"""
    if N < 1:
        raise ValueError("bound N must be >= 1")
    K = phi.K
    for cp in critical_points(phi):
        if cp.is_rational:
            z = cp.location
            for n in range(1, N + 1):
                z = evaluate(phi, z)
                if same_point(z, beta):
                    return PostcriticalResult(True, N, cp.location, n)
            continue
        # conjugate class: iterate the class of z in K[z]/(u)
        u = cp.location
        w = KPoly.x(K) % u
        for n in range(1, N + 1):
            d = _eval_mod(phi.den, w, u)
            if d.is_zero():
                # phi^n(gamma) = INF; the orbit continues in P^1(K)
                z = INF
                for m in range(n, N + 1):
                    if same_point(z, beta):
                        return PostcriticalResult(True, N, u, m)
                    z = evaluate(phi, z)
                break
            inv = _inverse_mod(d, u)
            w = (_eval_mod(phi.num, w, u) * inv) % u
            if beta is not INF and (w - KPoly(K, (beta,))).is_zero():
                return PostcriticalResult(True, N, u, n)
            if w.deg <= 0:
                # the orbit has landed on a K-rational point
                z = w[0]
                for m in range(n + 1, N + 1):
                    z = evaluate(phi, z)
                    if same_point(z, beta):
                        return PostcriticalResult(True, N, u, m)
                break
    return PostcriticalResult(False, N)


def _inverse_mod(a: KPoly, u: KPoly) -> KPoly:
    from .kpoly import p_xgcd
    g, s, _ = p_xgcd(a.c, u.c, a.K)
    if len(g) != 1:
        raise ZeroDivisionError("not invertible modulo u")
    return KPoly(a.K, s) % u


# -- residue-field periods ---------------------------------------------------

@dataclass
class PeriodResult:
    tail: int | None
    cycle: int | None
    status: str = "ok"

    def to_dict(self):
        return {"status": self.status, "tail": self.tail, "cycle": self.cycle}


def residue_period(phi: RatMap, alpha, place) -> PeriodResult:
    """Tail and cycle length of the reduced orbit of alpha (Brent's algorithm)."""
    from .reduction import reduction_type
    from .residue import ResidueField

    rt = reduction_type(phi, place)
    if rt.verdict != "good":
        return PeriodResult(None, None, "bad_reduction")
    R = ResidueField(place, phi.F)
    if alpha is INF:
        x0 = INF
    else:
        try:
            x0 = R.reduce(alpha)
        except HypothesisError:
            return PeriodResult(None, None, "not_integral")
    num, den = rt.reduced_num, rt.reduced_den

    def f(x):
        return eval_reduced(num, den, x, R)

    tail, cycle = brent(f, x0)
    return PeriodResult(tail, cycle)


def eval_reduced(num: tuple, den: tuple, x, R):
    """Evaluate a reduced map (coefficient tuples over R) at x in R or INF."""
    if x is INF:
        dn, dd = len(num) - 1, len(den) - 1
        if dn > dd:
            return INF
        if dn < dd:
            return R.zero
        return R.div(num[-1], den[-1])
    d = p_eval(den, x, R)
    if R.is_zero(d):
        return INF
    return R.div(p_eval(num, x, R), d)


def brent(f, x0) -> tuple[int, int]:
    """(tail length mu, cycle length lam) of the sequence x0, f(x0), ..."""
    power = lam = 1
    tortoise, hare = x0, f(x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    return mu, lam


__all__ = [
    "RatMap", "evaluate", "orbit", "OrbitRecord", "iterate_poly", "DegreeProfile",
    "degree_profile", "separable_part", "critical_points", "CriticalPoint",
    "is_exceptional", "is_postcritical", "PostcriticalResult", "residue_period",
    "PeriodResult", "brent", "ram_index_at", "wronskian",
]
