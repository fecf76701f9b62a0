"""Unicritical maps x^d + c: ramification certificates along the preimage tower.

Only valuations and Newton polygons are used; the fields K(f^-n(beta)) are
never built.  A slope s at a place p of f^n(x) - beta whose denominator (in
lowest terms) is divisible by l^e proves that some root generates a local
extension with ramification index divisible by l^e.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetError, FactorizationError, HypothesisError
from .funcfield import Frac, Place, finite_places_of, valuation, weil_height
from .gf import is_prime
from .kpoly import KPoly
from .ratmap import RatMap, evaluate, iterate_poly
from .reduction import newton_polygon
from .textio import format_frac, format_place
from .zsigmondy import positive_support, zsigmondy_scan

TOWER_BUDGET = int(os.environ.get("FFDYN_TOWER_BUDGET", "64"))

__all__ = [
    "UnicriticalMap", "UCheck", "lemma_u_check", "RamCertificate", "RCheck",
    "lemma_r_certificate", "revalidate_certificate", "ZramReport", "zram_scan",
    "TowerRow", "degree_tower", "finindex_conditions",
]


def _q(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


@dataclass(frozen=True)
class UnicriticalMap:
    d: int
    c: Frac

    def __post_init__(self):
        p = self.c.F.p
        if self.d < 2 or self.d % p == 0:
            raise HypothesisError(f"need d >= 2 with p = {p} not dividing d")

    @classmethod
    def from_ratmap(cls, phi: RatMap) -> UnicriticalMap:
        P = phi.num.scale(phi.den.lc.inv())
        if not phi.is_polynomial() or not P.lc.is_one():
            raise HypothesisError("map is not of the form x^d + c")
        if any(not a.is_zero() for a in P.c[1:-1]):
            raise HypothesisError("map is not of the form x^d + c")
        return cls(P.deg, P.c[0])

    @property
    def isotrivial(self) -> bool:
        return self.c.is_constant()

    @property
    def K(self):
        from .funcfield import KField
        return KField(self.c.F)

    @property
    def hhat_zero(self) -> Fraction:
        """Canonical height of the critical point 0, h(c)/d."""
        return Fraction(weil_height(self.c), self.d)

    def ratmap(self) -> RatMap:
        coeffs = [self.c] + [self.K.zero] * (self.d - 1) + [self.K.one]
        return RatMap.polynomial(KPoly(self.K, coeffs))

    def critical_orbit(self, n: int) -> list:
        """f(0), ..., f^n(0)."""
        out, z = [], self.K.zero
        phi = self.ratmap()
        for _ in range(n):
            z = evaluate(phi, z)
            out.append(z)
        return out

    def to_dict(self):
        return {"d": self.d, "c": format_frac(self.c), "isotrivial": self.isotrivial,
                "hhat_zero": _q(self.hhat_zero)}


def _beta_ok(beta: Frac, place: Place) -> bool:
    """|beta|_p = 1, with beta = 0 admitted (|beta|_p <= 1 reading)."""
    return beta.is_zero() or valuation(beta, place) == 0


# -- unramified criterion --------------------------------------------------

@dataclass(frozen=True)
class UCheck:
    certified: bool
    failed: tuple
    disc_valuation: object = None

    def to_dict(self):
        dv = self.disc_valuation
        return {"certified": self.certified, "failed": list(self.failed),
                "disc_valuation": "inf" if dv == math.inf else dv}


def disc_valuation(f: UnicriticalMap, beta: Frac, place: Place, n: int):
    """v_p(disc(f^n(x) - beta)), the independent unramifiedness oracle."""
    P, _ = iterate_poly(f.ratmap(), n, beta)
    return valuation(P.discriminant(), place)


def lemma_u_check(f: UnicriticalMap, beta: Frac, place: Place, n: int, oracle: bool = True) -> UCheck:
    """Conditions (i) v(c) >= 0, (ii) v(beta) >= 0, (iii) v(f^m(0) - beta) = 0 for 1 <= m <= n."""
    failed = []
    if valuation(f.c, place) < 0:
        failed.append("i")
    if valuation(beta, place) < 0:
        failed.append("ii")
    if any(valuation(z - beta, place) != 0 for z in f.critical_orbit(n)):
        failed.append("iii")
    if failed:
        return UCheck(False, tuple(failed))
    dv = disc_valuation(f, beta, place, n) if oracle and n >= 1 else None
    return UCheck(True, (), dv)


# -- ramification certificates ---------------------------------------------

@dataclass(frozen=True)
class RamCertificate:
    place: Place
    n: int
    ell: int
    e: int
    slopes: tuple           # (slope, length) of the polygon of f^n(x) - beta
    slope: Fraction         # the certifying slope
    hypotheses_met: bool    # v(c) = 0 and beta a unit (or zero)

    def to_dict(self):
        return {"place": format_place(self.place), "n": self.n, "ell": self.ell, "e": self.e,
                "slopes": [[_q(s), k] for s, k in self.slopes], "slope": _q(self.slope),
                "lemma_r_hypotheses_met": self.hypotheses_met}


@dataclass(frozen=True)
class RCheck:
    certificate: RamCertificate | None
    reason: str = ""

    def to_dict(self):
        if self.certificate is None:
            return {"certificate": None, "reason": self.reason}
        return {"certificate": self.certificate.to_dict()}


def _certifying_slope(P: KPoly, place: Place, power: int):
    poly = newton_polygon(P, place)
    for s, k in poly.slopes:
        if s.denominator % power == 0:
            return poly, s
    return poly, None


def lemma_r_certificate(f: UnicriticalMap, beta: Frac, place: Place, n: int,
                        ell: int, e: int = 1) -> RCheck:
    """Primitive ell-divisor test plus a Newton-polygon ramification certificate."""
    p = f.c.F.p
    if not is_prime(ell) or ell == p:
        raise HypothesisError(f"ell = {ell} must be a prime different from p = {p}")
    if e < 1 or f.d % ell**e:
        raise HypothesisError(f"ell^e = {ell}^{e} does not divide d = {f.d}")
    if f.isotrivial:
        return RCheck(None, "c is constant")
    if valuation(f.c, place) < 0 or valuation(beta, place) < 0:
        return RCheck(None, "c or beta not integral at the place")
    orbit = f.critical_orbit(n)
    vals = [valuation(z - beta, place) for z in orbit]
    v = vals[-1]
    if not (v > 0 and v != math.inf and v % ell != 0):
        return RCheck(None, "not an ell-divisor of f^n(0) - beta")
    if any(w > 0 for w in vals[:-1]):
        return RCheck(None, "not primitive")
    P, _ = iterate_poly(f.ratmap(), n, beta)
    poly, s = _certifying_slope(P, place, ell**e)
    if s is None:
        return RCheck(None, "no slope with denominator divisible by ell^e")
    met = valuation(f.c, place) == 0 and _beta_ok(beta, place)
    return RCheck(RamCertificate(place, n, ell, e, tuple(poly.slopes), s, met))


def revalidate_certificate(cert: RamCertificate, f: UnicriticalMap, beta: Frac) -> bool:
    """Recompute the polygon from scratch and recheck the certifying slope."""
    P, _ = iterate_poly(f.ratmap(), cert.n, beta)
    poly = newton_polygon(P, cert.place)
    if tuple(poly.slopes) != cert.slopes:
        return False
    s = Fraction(cert.slope.numerator, cert.slope.denominator)
    return any(t == s for t, _ in poly.slopes) and s.denominator % cert.ell**cert.e == 0


# -- new ramification by level ----------------------------------------------

@dataclass
class ZramReport:
    map: UnicriticalMap
    beta: Frac
    N: int
    ell: int
    blocked: str = ""
    witnesses: list = field(default_factory=list)   # (n, RamCertificate, UCheck)

    @property
    def levels(self) -> list[int]:
        return [n for n, _, _ in self.witnesses]

    def to_dict(self):
        return {
            "map": self.map.to_dict(), "beta": format_frac(self.beta), "N": self.N,
            "ell": self.ell, "blocked": self.blocked, "levels": self.levels,
            "witnesses": [{"n": n, "place": format_place(c.place), "certificate": c.to_dict(),
                           "unramified_below": u.to_dict()} for n, c, u in self.witnesses],
        }


def zram_scan(f: UnicriticalMap, beta: Frac, N: int, ell: int) -> ZramReport:
    """Levels n <= N with a place ramified at level n but unramified at level n - 1."""
    rep = ZramReport(f, beta, N, ell)
    if f.isotrivial:
        rep.blocked = "c is constant: non-isotriviality hypothesis fails"
        return rep
    if N < 1:
        return rep
    zs = zsigmondy_scan(f.ratmap(), f.K.zero, beta, [ell], N)
    for entry in zs.entries:
        n = entry.n
        for pl, _ in entry.support:
            if not entry.primitive_ell[ell][pl]:
                continue
            if valuation(f.c, pl) < 0 or valuation(beta, pl) < 0:
                continue
            u = lemma_u_check(f, beta, pl, n - 1)
            if not u.certified:
                continue
            r = lemma_r_certificate(f, beta, pl, n, ell)
            if r.certificate is None:
                continue
            rep.witnesses.append((n, r.certificate, u))
            break
    return rep


# -- degree tower -----------------------------------------------------------

@dataclass(frozen=True)
class TowerRow:
    n: int
    newton_lower: int
    certified_lower: int
    exact: int | None
    factor_degrees: tuple | None
    step_divisible: bool | None

    def to_dict(self):
        return {"n": self.n, "newton_lower": self.newton_lower,
                "certified_lower": self.certified_lower, "exact": self.exact,
                "factor_degrees": list(self.factor_degrees) if self.factor_degrees else None,
                "step_divisible_by_d": self.step_divisible}


def _probe_places(f: UnicriticalMap, beta: Frac) -> list[Place]:
    places = {Place.infinity()}
    for a in (f.c, beta):
        if not a.is_zero():
            places.update(finite_places_of(a.num))
            places.update(finite_places_of(a.den))
    return sorted(places, key=lambda pl: pl.sort_key())


def degree_tower(f: UnicriticalMap, beta: Frac, N: int, ell: int | None = None,
                 budget: int | None = None) -> list[TowerRow]:
    """Per level: Newton lower bound, certified product, and exact degree of the root algebra.

    exact is the degree over K of the etale algebra of f^n(x) - beta, i.e. the
    sum of the degrees of its distinct irreducible factors.  newton_lower is
    the largest slope denominator seen at the probed places; a root with that
    slope generates an extension of at least that degree.
    """
    from .kfactor import kpoly_factor
    if budget is None:
        budget = TOWER_BUDGET
    if ell is None:
        ell = min(q for q in range(2, f.d + 1) if f.d % q == 0 and is_prime(q))
    phi = f.ratmap()
    zr = zram_scan(f, beta, N, ell) if not f.isotrivial and ell != f.c.F.p else None
    cert_places = {n: c.place for n, c, _ in zr.witnesses} if zr else {}
    base = _probe_places(f, beta)
    rows = []
    certified = 1
    prev_exact = 1
    for n in range(1, N + 1):
        P, R = iterate_poly(phi, n, beta)
        probe = sorted(set(base) | set(cert_places.values()), key=lambda pl: pl.sort_key())
        lower = 1
        for pl in probe:
            for s, _ in newton_polygon(R, pl).slopes:
                lower = max(lower, s.denominator)
        if n in cert_places:
            certified *= ell
        exact = degs = step = None
        if R.deg <= budget:
            try:
                degs = tuple(sorted(u.deg for u, _ in kpoly_factor(R)))
                exact = sum(degs)
            except (BudgetError, FactorizationError):
                pass
        if exact is not None and prev_exact is not None:
            step = exact % prev_exact == 0 and (exact // prev_exact) % f.d == 0
        rows.append(TowerRow(n, lower, certified, exact, degs, step))
        prev_exact = exact
    return rows


# -- finite index conditions ------------------------------------------------

def finindex_conditions(f: UnicriticalMap, gammas: list, n: int) -> list[dict]:
    """For each gamma_i the first place meeting conditions (i)-(iv), or the failures seen."""
    p = f.c.F.p
    if p == 2:
        raise HypothesisError("needs p > 2")
    if f.d != 2:
        raise HypothesisError("finite index conditions are for quadratic maps")
    if len(set(gammas)) != len(gammas):
        raise HypothesisError("gammas must be pairwise distinct")
    orbit = f.critical_orbit(n)
    out = []
    for i, gi in enumerate(gammas):
        others = [g for j, g in enumerate(gammas) if j != i]
        rejected = []
        found = None
        b = orbit[-1] - gi
        support = [] if b.is_zero() else positive_support(b)
        for pl, v in support:
            bad = []
            if valuation(f.c, pl) != 0 or not all(_beta_ok(g, pl) for g in gammas):
                bad.append("i")
            if v % 2 == 0:
                bad.append("ii")
            if any(valuation(z - gi, pl) != 0 for z in orbit[:-1]):
                bad.append("iii")
            if any(valuation(z - g, pl) != 0 for z in orbit for g in others):
                bad.append("iv")
            if bad:
                rejected.append({"place": format_place(pl), "failed": bad})
            else:
                found = pl
                break
        out.append({"gamma": format_frac(gi),
                    "place": format_place(found) if found is not None else None,
                    "rejected": rejected})
    return out
