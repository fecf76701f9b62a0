"""Weil and canonical heights for maps over K = F_q(t).

Heights are in degree units: h(a/b) = max(deg a, deg b).  Locally we use
lambda_v(z) = max(0, -v(z)), so h(z) = sum_v N_v lambda_v(z).

Functoriality constant.  For a polynomial f = sum a_i z^i of degree d and a
place v put

    U_v = max(0, max_i -v(a_i))
    r_v = max_{i<d} (v(a_d) - v(a_i)) / (d - i)
    L_v = min(-v(a_d), -d * max(0, r_v)).

The ultrametric inequality gives lambda_v(f z) <= U_v + d lambda_v(z).  If
-v(z) > r_v the leading term dominates, so lambda_v(f z) - d lambda_v(z) >=
-v(a_d); otherwise lambda_v(z) <= max(0, r_v).  Hence
L_v <= lambda_v(f z) - d lambda_v(z) <= U_v, and both bounds vanish outside
the support of the coefficients.  Summing with weights N_v gives C.

For a general rational map of coefficient height A the resultant identity
(Res * X^(2d-1) lies in the ideal of the two forms, with cofactors of
coefficient degree 2d-1) together with the product formula for Res gives
-(2d-1) A <= h(phi z) - d h(z) <= A, so C = (2d-1) A.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, HypothesisError
from .funcfield import INF, Place, finite_places_of, valuation, weil_height
from .ratmap import RatMap, evaluate

MAX_ITER = int(os.environ.get("FFDYN_HEIGHT_ITER", "64"))
HEIGHT_BUDGET = int(os.environ.get("FFDYN_HEIGHT_BUDGET", str(1 << 16)))

__all__ = [
    "weil_height", "functoriality_constant", "coefficient_height", "canonical_height",
    "HeightValue", "is_preperiodic", "PreperiodicityVerdict",
]


def coefficient_places(phi: RatMap) -> list[Place]:
    places = set()
    for a in phi.coefficients():
        if not a.is_zero():
            places.update(finite_places_of(a.num))
            places.update(finite_places_of(a.den))
    return sorted(places, key=lambda pl: pl.sort_key()) + [Place.infinity()]


def coefficient_height(phi: RatMap) -> int:
    """Height of the coefficient vector of (num, den) in projective space."""
    total = 0
    coeffs = [a for a in phi.coefficients() if not a.is_zero()]
    for pl in coefficient_places(phi):
        total += pl.local_degree * max(-valuation(a, pl) for a in coeffs)
    return total


def _poly_bounds(phi: RatMap) -> tuple[Fraction, Fraction]:
    P = phi.num.scale(phi.den.c[0].inv())
    d = P.deg
    up, low = Fraction(0), Fraction(0)
    for pl in coefficient_places(phi):
        vs = {i: valuation(a, pl) for i, a in enumerate(P.c) if not a.is_zero()}
        U = max(0, max(-v for v in vs.values()))
        r = max((Fraction(vs[d] - v, d - i) for i, v in vs.items() if i < d), default=None)
        r_pos = max(Fraction(0), r) if r is not None else Fraction(0)
        L = min(Fraction(-vs[d]), -d * r_pos)
        up += pl.local_degree * U
        low += pl.local_degree * L
    return low, up


def functoriality_constant(phi: RatMap) -> int:
    """Integer C with |h(phi z) - d h(z)| <= C for every z in P^1(K)."""
    d = phi.degree
    if d < 2:
        raise HypothesisError("functoriality constant needs deg >= 2")
    if phi.is_polynomial():
        low, up = _poly_bounds(phi)
        return math.ceil(max(up, -low))
    return (2 * d - 1) * coefficient_height(phi)


@dataclass(frozen=True)
class HeightValue:
    value: Fraction
    error_bound: Fraction
    n: int
    exact: bool = False

    def to_dict(self):
        return {
            "value_num": str(self.value.numerator),
            "value_den": str(self.value.denominator),
            "err_num": str(self.error_bound.numerator),
            "err_den": str(self.error_bound.denominator),
            "n": self.n,
            "exact": self.exact,
        }


def _key(z):
    return INF if z is INF else (z.num.c, z.den.c)


def canonical_height(phi: RatMap, z, eps: Fraction, C: int | None = None) -> HeightValue:
    """h(phi^n z)/d^n with |value - h_phi(z)| <= C/((d-1) d^n) <= eps.

    Returns exactly 0 as soon as the orbit is seen to repeat.
    """
    d = phi.degree
    if d < 2:
        raise HypothesisError("canonical height needs deg >= 2")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("tolerance must be positive")
    if C is None:
        C = functoriality_constant(phi)
    n = 0
    while Fraction(C, (d - 1) * d**n) > eps:
        n += 1
    if n > MAX_ITER:
        raise BudgetError(f"tolerance needs {n} iterations (limit {MAX_ITER})")
    seen = {_key(z)}
    w = z
    for k in range(1, n + 1):
        w = evaluate(phi, w)
        key = _key(w)
        if key in seen:
            return HeightValue(Fraction(0), Fraction(0), k, True)
        seen.add(key)
        if weil_height(w) > HEIGHT_BUDGET:
            raise BudgetError("orbit height budget exceeded")
    err = Fraction(C, (d - 1) * d**n)
    return HeightValue(Fraction(weil_height(w), d**n), err, n, err == 0)


@dataclass(frozen=True)
class PreperiodicityVerdict:
    preperiodic: bool
    tail: int | None = None
    cycle: int | None = None
    certificate_n: int | None = None
    certificate_height: int | None = None
    threshold: Fraction | None = None

    def to_dict(self):
        if self.preperiodic:
            return {"verdict": "preperiodic", "tail": self.tail, "cycle": self.cycle}
        return {
            "verdict": "wandering",
            "n": self.certificate_n,
            "height": self.certificate_height,
            "threshold": {"num": str(self.threshold.numerator), "den": str(self.threshold.denominator)},
        }


def is_preperiodic(phi: RatMap, z, C: int | None = None) -> PreperiodicityVerdict:
    """Decide preperiodicity: heights above C/(d-1) increase strictly forever."""
    d = phi.degree
    if d < 2:
        raise HypothesisError("preperiodicity test needs deg >= 2")
    if C is None:
        C = functoriality_constant(phi)
    T = Fraction(C, d - 1)
    index = {}
    w = z
    n = 0
    while True:
        key = _key(w)
        if key in index:
            m = index[key]
            return PreperiodicityVerdict(True, m, n - m)
        index[key] = n
        h = weil_height(w)
        if h > T:
            return PreperiodicityVerdict(False, certificate_n=n, certificate_height=h, threshold=T)
        w = evaluate(phi, w)
        n += 1

