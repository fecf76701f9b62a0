"""Primitive divisors and Zsigmondy sets of polynomial orbits.

For b_n = f^n(alpha) - beta a place p is a primitive divisor of b_n when
v_p(b_n) > 0 and v_p(b_m) <= 0 for every 1 <= m < n, and a primitive
l-divisor when moreover l does not divide v_p(b_n).  Earlier terms are kept
as elements of K and probed by direct valuation, so nothing is factored twice.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetError, HypothesisError
from .funcfield import INF, Frac, Place, valuation
from .gf import is_prime
from .kpoly import KPoly
from .ratmap import RatMap, evaluate, is_exceptional, ram_index_at
from .textio import format_frac, format_place

FACTOR_BUDGET = int(os.environ.get("FFDYN_ZSIG_BUDGET", "4096"))

__all__ = [
    "SupportEntry", "ZsigmondyReport", "zsigmondy_scan", "positive_support",
    "TransferResult", "valuation_transfer_check", "DensityRow", "shared_support_density",
]


def positive_support(z: Frac) -> list[tuple[Place, int]]:
    """Places with v_p(z) > 0, sorted, found by factoring the numerator."""
    out = []
    if not z.num.is_constant():
        _, fac = z.num.factor()
        out = [(Place(g), m) for g, m in fac]
    vinf = valuation(z, Place.infinity())
    if vinf > 0:
        out.append((Place.infinity(), vinf))
    return sorted(out, key=lambda pv: pv[0].sort_key())


def _degree_of_support(z: Frac) -> int:
    return max(z.num.deg, z.den.deg)


@dataclass
class SupportEntry:
    n: int
    b: Frac
    support: list                       # [(Place, v)]
    primitive: dict                     # Place -> bool
    primitive_ell: dict                 # ell -> {Place: bool}

    @property
    def has_primitive(self) -> bool:
        return any(self.primitive.values())

    def has_primitive_ell(self, ell: int) -> bool:
        return any(self.primitive_ell[ell].values())

    def to_dict(self):
        rows = []
        for pl, v in self.support:
            row = {"place": format_place(pl), "v": v, "N_p": pl.local_degree,
                   "primitive": self.primitive[pl]}
            for ell in sorted(self.primitive_ell):
                row[f"primitive_{ell}"] = self.primitive_ell[ell][pl]
            rows.append(row)
        return {"n": self.n, "b": format_frac(self.b), "support": rows}


@dataclass
class ZsigmondyReport:
    map: RatMap
    alpha: Frac
    beta: Frac
    ells: list
    N: int
    entries: list = field(default_factory=list)
    hypotheses: dict = field(default_factory=dict)
    truncated_at: int | None = None

    @property
    def Z(self) -> list[int]:
        return [e.n for e in self.entries if not e.has_primitive]

    def Z_ell(self, ell: int) -> list[int]:
        return [e.n for e in self.entries if not e.has_primitive_ell(ell)]

    def to_dict(self):
        return {
            "map": str(self.map),
            "alpha": format_frac(self.alpha),
            "beta": format_frac(self.beta),
            "ells": list(self.ells),
            "N": self.N,
            "hypotheses": dict(self.hypotheses),
            "truncated_at": self.truncated_at,
            "Z": self.Z,
            "Z_ell": {str(ell): self.Z_ell(ell) for ell in self.ells},
            "entries": [e.to_dict() for e in self.entries],
        }

    def csv(self) -> str:
        head = ["n", "place", "v", "N_p", "primitive"] + [f"primitive_{ell}" for ell in self.ells]
        lines = [",".join(head)]
        for e in self.entries:
            for pl, v in e.support:
                row = [str(e.n), format_place(pl), str(v), str(pl.local_degree),
                       str(e.primitive[pl]).lower()]
                row += [str(e.primitive_ell[ell][pl]).lower() for ell in self.ells]
                lines.append(",".join(row))
        if self.truncated_at is not None:
            lines.append(f"# truncated at n={self.truncated_at}")
        return "\n".join(lines) + "\n"


def _check_hypotheses(f: RatMap, alpha, beta, N: int) -> dict:
    from .heights import is_preperiodic
    hyp = {
        "non_isotrivial_coefficients": not f.has_constant_coefficients(),
        "beta_not_exceptional": not is_exceptional(f, beta),
        "alpha_wandering": not is_preperiodic(f, alpha).preperiodic,
    }
    return hyp


def zsigmondy_scan(f: RatMap, alpha: Frac, beta: Frac, ells, N: int,
                   budget: int | None = None) -> ZsigmondyReport:
    """Primitive divisors of b_n = f^n(alpha) - beta for 1 <= n <= N."""
    if not f.is_polynomial() or f.degree < 2:
        raise HypothesisError("zsigmondy_scan needs a polynomial of degree >= 2")
    if alpha is INF or beta is INF:
        raise HypothesisError("alpha and beta must be elements of K")
    p = f.F.p
    ells = sorted(set(int(x) for x in ells))
    for ell in ells:
        if not is_prime(ell) or ell == p:
            raise HypothesisError(f"ell = {ell} must be a prime different from p = {p}")
    if budget is None:
        budget = FACTOR_BUDGET
    rep = ZsigmondyReport(f, alpha, beta, ells, N)
    if N <= 0:
        return rep
    rep.hypotheses = _check_hypotheses(f, alpha, beta, N)
    rep.hypotheses["beta_not_in_orbit"] = True
    earlier: list[Frac] = []
    z = alpha
    for n in range(1, N + 1):
        z = evaluate(f, z)
        b = z - beta
        if b.is_zero():
            rep.hypotheses["beta_not_in_orbit"] = False
            rep.truncated_at = n
            break
        if _degree_of_support(b) > budget:
            rep.truncated_at = n
            break
        support = positive_support(b)
        prim, prim_ell = {}, {ell: {} for ell in ells}
        for pl, v in support:
            ok = all(valuation(bm, pl) <= 0 for bm in earlier)
            prim[pl] = ok
            for ell in ells:
                prim_ell[ell][pl] = ok and v % ell != 0
        rep.entries.append(SupportEntry(n, b, support, prim, prim_ell))
        earlier.append(b)
    return rep


# -- valuation transfer -----------------------------------------------------

@dataclass(frozen=True)
class TransferResult:
    status: str          # pass, fail, excluded, not_applicable
    lhs: object
    rhs: object
    e: int
    exceptional: tuple

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_dict(self):
        def enc(v):
            return "inf" if v == float("inf") else v
        return {"status": self.status, "lhs": enc(self.lhs), "rhs": enc(self.rhs), "e": self.e,
                "exceptional": [format_place(pl) for pl in self.exceptional]}


def _iterate_at(f: RatMap, z, n: int):
    for _ in range(n):
        z = evaluate(f, z)
    return z


def transfer_exceptional_places(f: RatMap, gamma: Frac, beta: Frac, r: int) -> tuple[int, list[Place]]:
    """(e, E) for f^r(z) - beta = (z - gamma)^e H(z).

    Outside E the coefficients of H and gamma are integral and H(gamma) is a
    unit, so v(f^r(w) - beta) = e v(w - gamma) whenever v(w - gamma) > 0.
    """
    fr = f.iterate(r)
    e = ram_index_at(fr, gamma)
    P = fr.num - fr.den.scale(beta)
    lin = KPoly.linear(f.K, gamma)
    H = P
    for _ in range(e):
        H, rem = divmod(H, lin)
        if not rem.is_zero():
            raise AssertionError("ramification index inconsistent with the factorization")
    H = H.scale(fr.den.lc.inv()) if fr.den.deg == 0 else H
    places = set()
    for a in list(H.c) + [gamma]:
        if a.is_zero():
            continue
        for pl, _ in positive_support(a.inv()):
            places.add(pl)
    h0 = H(gamma)
    for pl, _ in positive_support(h0):
        places.add(pl)
    for pl, _ in positive_support(h0.inv()):
        places.add(pl)
    return e, sorted(places, key=lambda pl: pl.sort_key())


def valuation_transfer_check(f: RatMap, alpha: Frac, gamma: Frac, beta: Frac, r: int,
                             place: Place, n: int) -> TransferResult:
    """Check v_p(f^{n+r}(alpha) - beta) = e v_p(f^n(alpha) - gamma) at one place."""
    if not f.is_polynomial():
        raise HypothesisError("valuation transfer is stated for polynomials")
    if r < 1 or _iterate_at(f, gamma, r) != beta:
        raise HypothesisError("need f^r(gamma) = beta with r >= 1")
    e, E = transfer_exceptional_places(f, gamma, beta, r)
    w = _iterate_at(f, alpha, n)
    if w is INF:
        raise HypothesisError("orbit reached infinity")
    rhs_v = valuation(w - gamma, place)
    lhs_v = valuation(_iterate_at(f, w, r) - beta, place)
    rhs = e * rhs_v
    if place in E:
        return TransferResult("excluded", lhs_v, rhs, e, tuple(E))
    if not rhs_v > 0:
        return TransferResult("not_applicable", lhs_v, rhs, e, tuple(E))
    return TransferResult("pass" if lhs_v == rhs else "fail", lhs_v, rhs, e, tuple(E))


# -- shared support ---------------------------------------------------------

@dataclass(frozen=True)
class DensityRow:
    n: int
    weight: int
    scale: Fraction
    places: tuple

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.weight) / self.scale if self.scale else Fraction(0)

    def to_dict(self):
        r = self.ratio
        return {"n": self.n, "weight": self.weight,
                "ratio": {"num": str(r.numerator), "den": str(r.denominator)},
                "places": [format_place(pl) for pl in self.places]}


def shared_support_density(f: RatMap, alpha: Frac, gamma1: Frac, gamma2: Frac, N: int,
                           budget: int | None = None) -> list[DensityRow]:
    """Rows n = 2..N of sum N_p over places with v_p(f^m a - g1) > 0 and v_p(f^n a - g2) > 0, m < n.

    The ratio column divides by d^n times an estimate of the canonical height
    of alpha (error at most 2^-10).
    """
    from .heights import canonical_height
    if f.degree < 2:
        raise HypothesisError("needs deg f >= 2")
    if budget is None:
        budget = FACTOR_BUDGET
    w = gamma1
    for _ in range(N + 1):
        if w == gamma2:
            raise HypothesisError("gamma2 lies in the forward orbit of gamma1")
        w = evaluate(f, w)
        if w is INF:
            break
    if N < 2:
        return []
    hhat = canonical_height(f, alpha, Fraction(1, 1024)).value
    d = f.degree
    rows = []
    firsts: list[Frac] = []
    z = alpha
    for n in range(1, N + 1):
        z = evaluate(f, z)
        if z is INF:
            raise HypothesisError("orbit reached infinity")
        if n >= 2:
            b2 = z - gamma2
            if _degree_of_support(b2) > budget:
                raise BudgetError(f"degree budget exceeded at n={n}")
            shared = []
            for pl, _ in positive_support(b2):
                if any(valuation(b1, pl) > 0 for b1 in firsts):
                    shared.append(pl)
            weight = sum(pl.local_degree for pl in shared)
            rows.append(DensityRow(n, weight, d**n * hhat, tuple(shared)))
        firsts.append(z - gamma1)
    return rows
