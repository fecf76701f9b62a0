"""Factorization of polynomials in K[x], K = F_q(t).

Separable squarefree parts are factored by specialization: clear
denominators to a primitive G in F_q[t][x], pick a place pi with lc(G) a unit
and G mod pi squarefree, factor over the residue field, lift the factors
linearly modulo pi^k and recombine subsets.  Inseparable parts (G' = 0) go
through the substitution x^p -> x; over the imperfect field K a factor h(x^p)
with h irreducible is either irreducible or the p-th power of an irreducible.
"""

from __future__ import annotations

import itertools
import os

from .errors import BudgetError, FactorizationError
from .funcfield import Frac, KField
from .gf import GF
from .kpoly import KPoly
from .polyq import PolyQ, irreducibles_of_degree

DEFAULT_BUDGET = int(os.environ.get("FFDYN_KFACTOR_BUDGET", "4096"))
_SUBSET_LIMIT = 1 << 16
# largest residue-field degree tried for prime constant fields
_MAX_PLACE_DEGREE = 4


# -- residue fields ------------------------------------------------------

class _Residue:
    """Reduction F_q[t] -> F_q[t]/(pi) and a section back."""

    def __init__(self, pi: PolyQ):
        F = pi.F
        self.pi = pi
        self.F = F
        if pi.deg == 1:
            self.Fk = F
            self.root = F.neg(F.div(pi.c[0], pi.c[1]))
        else:
            if F.e != 1:
                raise FactorizationError("higher-degree residue fields need a prime constant field")
            self.Fk = GF(F.p, pi.deg, tuple(pi.c))
            self.root = None

    def red(self, a: PolyQ) -> int:
        if self.root is not None:
            return a(self.root)
        r = a % self.pi
        return sum(d * self.F.p**i for i, d in enumerate(r.c))

    def lift(self, a: int) -> PolyQ:
        if self.root is not None:
            return PolyQ.const(self.F, a)
        return PolyQ(self.F, self.Fk.digits(a))

    def red_poly(self, coeffs) -> PolyQ:
        return PolyQ(self.Fk, [self.red(a) for a in coeffs])


def candidate_places(F, max_degree: int | None = None):
    """Specialization places in the fixed order: degree 1, then 2, ..."""
    if max_degree is None:
        max_degree = 1 if F.e > 1 else _MAX_PLACE_DEGREE
    for d in range(1, max_degree + 1):
        if F.e > 1 and d > 1:
            break
        if F.q**d > (1 << 20):
            break
        yield from irreducibles_of_degree(F, d)


# -- helpers on coefficient lists over F_q[t] ------------------------------

def _to_polys(P: KPoly) -> list[PolyQ]:
    return P.primitive_part()


def _from_polys(K: KField, polys) -> KPoly:
    return KPoly(K, [Frac(a) for a in polys])


def _mul_mod(a: list, b: list, M: PolyQ) -> list:
    F = M.F
    out = [PolyQ.zero(F)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return [c % M for c in out]


def _tdeg(polys) -> int:
    return max((a.deg for a in polys if a), default=0)


# -- separable squarefree core ---------------------------------------------

def _factor_separable(P: KPoly, budget: int, skip: int = 0) -> list[KPoly]:
    """Irreducible monic factors of a separable squarefree P (deg >= 1)."""
    K = P.K
    if P.deg == 1:
        return [P.monic()]
    G = _to_polys(P)
    n = len(G) - 1
    dt = _tdeg(G)
    if n * max(dt, 1) > budget:
        raise BudgetError(f"deg_x * deg_t = {n * dt} exceeds budget {budget}")

    res = None
    gbar_fac = None
    for pi in candidate_places(P.F):
        if G[-1] % pi == 0:
            continue
        try:
            R = _Residue(pi)
        except FactorizationError:
            continue
        gbar = R.red_poly(G)
        if gbar.deg != n or not gbar.is_squarefree():
            continue
        if skip:
            skip -= 1
            continue
        res = R
        _, gbar_fac = gbar.factor()
        break
    if res is None:
        raise FactorizationError("no usable specialization place found")
    if len(gbar_fac) == 1:
        return [P.monic()]

    pi = res.pi
    lc = G[-1]
    # precision: pi^k must exceed every coefficient of lc(G) * (true factor)
    k = (dt + lc.deg) // pi.deg + 1
    lifted = _hensel_lift(G, [g for g, _ in gbar_fac], res, k)
    M = pi**k
    return _recombine(K, G, lifted, M, budget)


def _hensel_lift(G: list, gbar: list, R: _Residue, k: int) -> list:
    """Lift monic residue factors of G/lc(G) to factors modulo pi^k."""
    F = R.F
    pi = R.pi
    M = pi**k
    lcinv = G[-1].inverse_mod(M)
    Gm = [(a * lcinv) % M for a in G]
    r = len(gbar)
    cof = []
    for i in range(r):
        Pi = PolyQ.one(R.Fk)
        for j in range(r):
            if j != i:
                Pi = Pi * gbar[j]
        cof.append((Pi % gbar[i]).inverse_mod(gbar[i]))
    facs = [[R.lift(a) for a in g.c] for g in gbar]
    pij = PolyQ.one(F)
    for _ in range(1, k):
        pij = pij * pi
        prod = [PolyQ.one(F)]
        for f in facs:
            prod = _mul_mod(prod, f, M)
        err = [(Gm[i] if i < len(Gm) else PolyQ.zero(F)) - (prod[i] if i < len(prod) else PolyQ.zero(F))
               for i in range(max(len(Gm), len(prod)))]
        E = []
        for c in err:
            c = c % M
            q, rem = divmod(c, pij)
            if rem:
                raise AssertionError("Hensel invariant broken")
            E.append(R.red(q))
        Ebar = PolyQ(R.Fk, E)
        if Ebar.is_zero():
            continue
        for i in range(r):
            delta = (Ebar * cof[i]) % gbar[i]
            f = facs[i]
            for d, a in enumerate(delta.c):
                if a:
                    f[d] = (f[d] + pij * R.lift(a)) % M
    return facs


def _recombine(K: KField, G: list, lifted: list, M: PolyQ, budget: int) -> list[KPoly]:
    cur = _from_polys(K, G)
    remaining = list(range(len(lifted)))
    found: list[KPoly] = []
    tested = 0
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for combo in itertools.combinations(remaining, size):
            tested += 1
            if tested > _SUBSET_LIMIT:
                raise BudgetError("recombination subset budget exceeded")
            lc = _to_polys(cur)[-1]
            cand = [lc % M]
            for i in combo:
                cand = _mul_mod(cand, lifted[i], M)
            H = _from_polys(K, cand)
            H = _from_polys(K, H.primitive_part())
            q, r = divmod(cur, H)
            if r.is_zero():
                found.append(H.monic())
                cur = q
                remaining = [i for i in remaining if i not in combo]
                hit = True
                break
        if not hit:
            size += 1
    found.append(cur.monic())
    return found


# -- public ----------------------------------------------------------------

def _sort(fac):
    return sorted(fac, key=lambda gm: (gm[0].sort_key(), gm[1]))


def kpoly_factor(P: KPoly, budget: int | None = None, skip: int = 0) -> list[tuple[KPoly, int]]:
    """Monic irreducible factors of P over K with multiplicities.

    The product of the returned factors (with multiplicity) equals P / lc(P).
    ``skip`` discards that many usable specializations first, giving an
    independent route for re-checking results.
    """
    if budget is None:
        budget = DEFAULT_BUDGET
    if P.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if P.deg < 1:
        return []
    out: dict[KPoly, int] = {}
    _factor_into(P.monic(), 1, out, budget, skip)
    return _sort(out.items())


def _add(out, g, m):
    out[g] = out.get(g, 0) + m


def _factor_into(f: KPoly, mult: int, out: dict, budget: int, skip: int):
    if f.deg < 1:
        return
    df = f.derivative()
    if df.is_zero():
        _factor_inseparable(f, mult, out, budget, skip)
        return
    c = f.gcd(df)
    w = f.exact_div(c)
    i = 1
    while w.deg > 0:
        y = w.gcd(c)
        z = w.exact_div(y)
        if z.deg > 0:
            for g in _factor_separable(z, budget, skip):
                _add(out, g, i * mult)
        w = y
        c = c.exact_div(y)
        i += 1
    if c.deg > 0:
        # what is left has zero derivative and exact multiplicities
        _factor_inseparable(c.monic(), mult, out, budget, skip)


def _factor_inseparable(f: KPoly, mult: int, out: dict, budget: int, skip: int):
    p = f.F.p
    g = f.deflate(p)
    for h, m in kpoly_factor(g, budget, skip):
        H = h.substitute_power(p)
        if all(a.is_pth_power() for a in h.c):
            root = KPoly(h.K, [a.pth_root() for a in h.c])
            _add(out, root, m * mult * p)
        else:
            _add(out, H, m * mult)


def is_irreducible_over_K(P: KPoly, skip: int = 0, budget: int | None = None) -> bool:
    fac = kpoly_factor(P, budget, skip)
    return len(fac) == 1 and fac[0][1] == 1
