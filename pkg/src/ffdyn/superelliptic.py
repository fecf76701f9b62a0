"""Superelliptic curves y^l = F(x) over K = F_q(t), tame case l != p.

For squarefree F of degree m the cover x : C -> P^1 is cyclic of degree l,
totally ramified over the m roots of F and over infinity exactly when l does
not divide m.  Riemann-Hurwitz gives

    2g - 2 = -2l + m(l - 1) + (l - gcd(l, m)).
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, HypothesisError
from .funcfield import INF, Frac, Place, weil_height
from .gf import is_prime
from .integrality import DivisorSpec, PlaceSet, is_s_integral
from .kpoly import KPoly
from .polyq import PolyQ
from .textio import format_frac, format_kpoly, format_place
from .zsigmondy import positive_support

RAMSUM_BUDGET = int(os.environ.get("FFDYN_RAMSUM_BUDGET", "4096"))

__all__ = [
    "SuperellipticCurve", "genus_formula", "uniqueness_bound", "CurveVerdict",
    "noniso_curve_verdict", "RamifiedSum", "ramified_sum", "ramified_sum_batch",
]


def genus_formula(ell: int, m: int) -> int:
    """Genus of y^ell = F(x) with F squarefree of degree m >= 1."""
    if m < 1:
        raise ValueError("deg F must be positive")
    two_g = -2 * ell + m * (ell - 1) + (ell - math.gcd(ell, m)) + 2
    return two_g // 2


def uniqueness_bound(ell: int, g: int) -> bool:
    """(ell - 1)^2 < g."""
    return (ell - 1) ** 2 < g


@dataclass(frozen=True)
class SuperellipticCurve:
    ell: int
    F: KPoly

    def __post_init__(self):
        p = self.F.K.F.p
        if not is_prime(self.ell):
            raise HypothesisError(f"ell = {self.ell} is not prime")
        if self.ell == p:
            raise HypothesisError("wild covers (ell = p) are not supported")
        if self.F.deg < 1:
            raise HypothesisError("F must be non-constant")
        if not self.F.is_separable():
            raise HypothesisError("F is not squarefree")

    @property
    def m(self) -> int:
        return self.F.deg

    @property
    def genus(self) -> int:
        return genus_formula(self.ell, self.m)

    def uniqueness_bound_ok(self) -> bool:
        return uniqueness_bound(self.ell, self.genus)

    def degree_bound_ok(self) -> bool:
        """ell - 1 < m/2 - 1."""
        return 2 * (self.ell - 1) < self.m - 2

    def to_dict(self):
        return {"ell": self.ell, "F": format_kpoly(self.F), "m": self.m, "genus": self.genus,
                "uniqueness_bound": self.uniqueness_bound_ok()}


@dataclass(frozen=True)
class CurveVerdict:
    verdict: str          # non_isotrivial_certified or undetermined
    reasons: tuple = ()

    def to_dict(self):
        return {"verdict": self.verdict, "reasons": list(self.reasons)}


def noniso_curve_verdict(curve: SuperellipticCurve, witness, phi=None, beta=None) -> CurveVerdict:
    """One-sided verdict from a root-set witness; never claims isotriviality.

    When phi and beta are given the witness is checked to concern the roots
    of F, i.e. F is (up to scaling) the radical of phi^n(x) - beta.
    """
    from .ratmap import iterate_poly
    from .reduction import revalidate_witness
    reasons = []
    if not witness.found:
        reasons.append("no cross ratio witness")
    elif phi is not None:
        _, R = iterate_poly(phi, witness.n, beta)
        if R != curve.F.monic():
            raise HypothesisError("witness does not concern the roots of F")
        if not revalidate_witness(witness, phi, beta):
            reasons.append("witness does not revalidate")
    if not curve.degree_bound_ok():
        reasons.append(f"degree bound fails: ell - 1 = {curve.ell - 1} is not below m/2 - 1")
    if reasons:
        return CurveVerdict("undetermined", tuple(reasons))
    return CurveVerdict("non_isotrivial_certified")


@dataclass(frozen=True)
class RamifiedSum:
    a: Frac
    total: int
    height: int
    places: tuple        # (Place, v)
    weighted_valuations: int
    height_of_value: int

    def to_dict(self):
        return {"a": format_frac(self.a), "sum": self.total, "height": self.height,
                "places": [[format_place(pl), v] for pl, v in self.places],
                "weighted_valuations": self.weighted_valuations,
                "height_of_value": self.height_of_value}


def ramified_sum(curve: SuperellipticCurve, a: Frac, S: PlaceSet,
                 budget: int | None = None) -> RamifiedSum:
    """Sum of N_p over p outside S with v_p(F(a)) > 0 and ell not dividing it."""
    if a is INF:
        raise HypothesisError("a must be an element of K")
    if not is_s_integral(a, DivisorSpec(None, True), S):
        raise HypothesisError("a is not S-integral")
    z = curve.F(a)
    if z.is_zero():
        raise HypothesisError("a is a root of F")
    if budget is None:
        budget = RAMSUM_BUDGET
    if weil_height(z) > budget:
        raise BudgetError(f"height of F(a) exceeds {budget}")
    flagged = []
    weighted = 0
    for pl, v in positive_support(z):
        if pl in S or v % curve.ell == 0:
            continue
        flagged.append((pl, v))
        weighted += v * pl.local_degree
    total = sum(pl.local_degree for pl, _ in flagged)
    return RamifiedSum(a, total, weil_height(a), tuple(flagged), weighted, weil_height(z))


def least_squares_slope(points) -> Fraction:
    """Exact least-squares slope of y against x."""
    n = len(points)
    sx = sum(x for x, _ in points)
    sy = sum(y for _, y in points)
    sxx = sum(x * x for x, _ in points)
    sxy = sum(x * y for x, y in points)
    den = n * sxx - sx * sx
    if den == 0:
        raise ValueError("degenerate sample: all heights equal")
    return Fraction(n * sxy - sx * sy, den)


def ramified_sum_batch(curve: SuperellipticCurve, count: int, max_deg: int = 10,
                       seed: int = 0) -> tuple[list[RamifiedSum], Fraction]:
    """Random polynomials a in F_q[t] (S = {inf}) and the slope of sum against h(a)."""
    F = curve.F.K.F
    rng = random.Random(seed)
    S = PlaceSet.of(Place.infinity())
    out = []
    while len(out) < count:
        deg = rng.randint(1, max_deg)
        coeffs = [rng.randrange(F.q) for _ in range(deg)] + [rng.randrange(1, F.q)]
        a = Frac(PolyQ(F, coeffs))
        if curve.F(a).is_zero():
            continue
        out.append(ramified_sum(curve, a, S))
    return out, least_squares_slope([(r.height, r.total) for r in out])


def valuation_sum(z: Frac) -> int:
    """sum over v_p(z) > 0 of v_p(z) N_p; bounded by h(z)."""
    return sum(v * pl.local_degree for pl, v in positive_support(z))
