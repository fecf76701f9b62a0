"""Univariate polynomials over K = F_q(t) (and generic helpers over any field).

The module-level ``p_*`` functions work on coefficient tuples (lowest degree
first, no trailing zeros) over any field object exposing ``zero``, ``one``,
``add``, ``sub``, ``mul``, ``neg``, ``inv`` and ``is_zero``.  They back
``KPoly`` as well as the residue-field and local-extension arithmetic in the
reduction module.
"""

from __future__ import annotations

from .funcfield import Frac, KField
from .gf import FieldConfig
from .polyq import PolyQ


def p_trim(c, R) -> tuple:
    c = list(c)
    while c and R.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def p_add(a, b, R):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = R.add(out[i], y)
    return p_trim(out, R)


def p_neg(a, R):
    return tuple(R.neg(x) for x in a)


def p_sub(a, b, R):
    return p_add(a, p_neg(b, R), R)


def p_scale(a, s, R):
    if R.is_zero(s):
        return ()
    return p_trim([R.mul(x, s) for x in a], R)


def p_mul(a, b, R):
    if not a or not b:
        return ()
    out = [R.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if R.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not R.is_zero(y):
                out[i + j] = R.add(out[i + j], R.mul(x, y))
    return p_trim(out, R)


def p_divmod(a, b, R):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    inv = R.inv(b[-1])
    m = len(b) - 1
    r = list(a)
    q = [R.zero] * (len(a) - m)
    for i in range(len(a) - len(b), -1, -1):
        c = R.mul(r[i + m], inv)
        if not R.is_zero(c):
            q[i] = c
            for j in range(m + 1):
                if not R.is_zero(b[j]):
                    r[i + j] = R.sub(r[i + j], R.mul(c, b[j]))
    return p_trim(q, R), p_trim(r[:m], R)


def p_monic(a, R):
    if not a:
        return a
    return p_scale(a, R.inv(a[-1]), R)


def p_gcd(a, b, R):
    while b:
        a, b = b, p_divmod(a, b, R)[1]
    return p_monic(a, R)


def p_xgcd(a, b, R):
    """(g, s, u) with s*a + u*b = g monic."""
    r0, r1 = a, b
    s0, s1 = (R.one,), ()
    u0, u1 = (), (R.one,)
    while r1:
        q, r = p_divmod(r0, r1, R)
        r0, r1 = r1, r
        s0, s1 = s1, p_sub(s0, p_mul(q, s1, R), R)
        u0, u1 = u1, p_sub(u0, p_mul(q, u1, R), R)
    if not r0:
        return r0, s0, u0
    inv = R.inv(r0[-1])
    return p_scale(r0, inv, R), p_scale(s0, inv, R), p_scale(u0, inv, R)


def p_deriv(a, R):
    return p_trim([R.mul(R.from_int(i), x) for i, x in enumerate(a)][1:], R)


def p_eval(a, x, R):
    acc = R.zero
    for c in reversed(a):
        acc = R.add(R.mul(acc, x), c)
    return acc


def p_resultant(a, b, R):
    """Res(a, b) for polynomials of their actual degrees (Euclidean recurrence)."""
    if not a or not b:
        return R.zero
    res = R.one
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return R.mul(res, _pow(b[0], da, R))
        _, r = p_divmod(a, b, R)
        if not r:
            return R.zero
        dr = len(r) - 1
        factor = _pow(b[-1], da - dr, R)
        if da % 2 == 1 and db % 2 == 1:
            factor = R.neg(factor)
        res = R.mul(res, factor)
        a, b = b, r


def _pow(x, k, R):
    out = R.one
    for _ in range(k):
        out = R.mul(out, x)
    return out


def p_taylor_shift(a, s, R):
    """Coefficients of a(y + s) as a polynomial in y."""
    out = ()
    lin = (s, R.one)
    for c in reversed(a):
        out = p_add(p_mul(out, lin, R), (c,) if not R.is_zero(c) else (), R)
    return out


# -- KPoly ------------------------------------------------------------------

class KPoly:
    """Immutable polynomial over F_q(t) in an abstract variable."""

    __slots__ = ("K", "c")

    def __init__(self, K: KField, coeffs=(), _trusted: bool = False):
        self.K = K
        self.c = tuple(coeffs) if _trusted else p_trim(coeffs, K)

    @classmethod
    def from_polys(cls, F: FieldConfig, polys) -> KPoly:
        K = KField(F)
        return cls(K, [Frac(p) for p in polys])

    @classmethod
    def const(cls, K: KField, a: Frac) -> KPoly:
        return cls(K, (a,))

    @classmethod
    def x(cls, K: KField) -> KPoly:
        return cls(K, (K.zero, K.one), True)

    @classmethod
    def linear(cls, K: KField, root: Frac) -> KPoly:
        """x - root."""
        return cls(K, (-root, K.one))

    @property
    def F(self) -> FieldConfig:
        return self.K.F

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> Frac:
        return self.c[-1] if self.c else self.K.zero

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def __bool__(self):
        return bool(self.c)

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.K.zero

    def __eq__(self, other):
        if isinstance(other, KPoly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        from .textio import format_kpoly
        return f"KPoly({format_kpoly(self)})"

    def sort_key(self):
        return (len(self.c), tuple(x.sort_key() for x in reversed(self.c)))

    def _new(self, c):
        return KPoly(self.K, c, True)

    def _coerce(self, other):
        if isinstance(other, KPoly):
            return other
        if isinstance(other, Frac):
            return KPoly(self.K, (other,))
        if isinstance(other, (int, PolyQ)):
            return KPoly(self.K, (Frac(other) if isinstance(other, PolyQ) else self.K.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(p_add(self.c, o.c, self.K))

    __radd__ = __add__

    def __neg__(self):
        return self._new(p_neg(self.c, self.K))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(p_sub(self.c, o.c, self.K))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(p_mul(self.c, o.c, self.K))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result, base = KPoly(self.K, (self.K.one,), True), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        q, r = p_divmod(self.c, other.c, self.K)
        return self._new(q), self._new(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> KPoly:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact division in K[x]")
        return q

    def divides(self, other: KPoly) -> bool:
        return not (other % self)

    def scale(self, s: Frac) -> KPoly:
        return self._new(p_scale(self.c, s, self.K))

    def monic(self) -> KPoly:
        return self._new(p_monic(self.c, self.K))

    def gcd(self, other: KPoly) -> KPoly:
        return self._new(p_gcd(self.c, other.c, self.K))

    def derivative(self) -> KPoly:
        return self._new(p_deriv(self.c, self.K))

    def __call__(self, x):
        if isinstance(x, KPoly):
            return self.compose(x)
        return p_eval(self.c, x, self.K)

    def compose(self, h: KPoly) -> KPoly:
        acc = KPoly(self.K, (), True)
        for a in reversed(self.c):
            acc = acc * h + KPoly(self.K, (a,))
        return acc

    def taylor_shift(self, s: Frac) -> KPoly:
        return self._new(p_taylor_shift(self.c, s, self.K))

    def resultant(self, other: KPoly) -> Frac:
        return p_resultant(self.c, other.c, self.K)

    def discriminant(self) -> Frac:
        n = self.deg
        if n < 1:
            raise ValueError("discriminant needs positive degree")
        r = self.resultant(self.derivative())
        if (n * (n - 1) // 2) % 2:
            r = -r
        return r / self.lc

    def is_separable(self) -> bool:
        """gcd(f, f') == 1 (squarefree with no inseparable factor)."""
        if self.deg <= 0:
            return True
        d = self.derivative()
        if d.is_zero():
            return False
        return self.gcd(d).deg == 0

    def coefficient_polys(self) -> tuple[PolyQ, list[PolyQ]]:
        """(common denominator D, [D * c_i]) with D monic."""
        F = self.F
        D = PolyQ.one(F)
        for a in self.c:
            if not a.den.is_one():
                D = D * a.den.exact_div(D.gcd(a.den))
        return D, [a.num * D.exact_div(a.den) for a in self.c]

    def primitive_part(self) -> list[PolyQ]:
        """Coefficients in F_q[t] of a primitive polynomial associate to self."""
        _, polys = self.coefficient_polys()
        g = PolyQ.zero(self.F)
        for a in polys:
            if a:
                g = a.gcd(g) if g else a.monic()
                if g.is_one():
                    break
        return [a.exact_div(g) for a in polys]

    def substitute_power(self, k: int) -> KPoly:
        """self(x^k)."""
        out = [self.K.zero] * (self.deg * k + 1)
        for i, a in enumerate(self.c):
            out[i * k] = a
        return KPoly(self.K, out)

    def is_power_form(self, k: int) -> bool:
        return all(a.is_zero() for i, a in enumerate(self.c) if i % k)

    def deflate(self, k: int) -> KPoly:
        return KPoly(self.K, self.c[::k])

    def radical(self) -> KPoly:
        """Monic product of the distinct irreducible factors."""
        if self.deg < 1:
            return KPoly(self.K, (self.K.one,), True)
        if self.is_separable():
            return self.monic()
        from .kfactor import kpoly_factor
        out = KPoly(self.K, (self.K.one,), True)
        for g, _ in kpoly_factor(self):
            out = out * g
        return out

    def t_degree(self) -> int:
        """Max t-degree after clearing denominators (primitive representative)."""
        return max((a.deg for a in self.primitive_part() if a), default=0)
