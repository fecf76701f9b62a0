"""The rational function field K = F_q(t): elements, places, valuations.

Heights and absolute values are kept additive throughout: a place contributes
``v_p(z) * N_p`` and the height of ``a/b`` (reduced) is ``max(deg a, deg b)``.
The infinite place plays the role of the fixed place defining the ring
F_q[t], so "integral" means "polynomial" unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gf import FieldConfig
from .polyq import PolyQ, irreducibles_of_degree

INF_VAL = math.inf


class _Infinity:
    """The point at infinity of P^1(K)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class Frac:
    """Reduced fraction num/den in F_q(t) with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyQ, den: PolyQ | None = None, _reduced: bool = False):
        if den is None:
            self.num, self.den = num, PolyQ.one(num.F)
            return
        if _reduced:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, PolyQ.one(num.F)
            return
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        if lc != 1:
            inv = num.F.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @property
    def F(self) -> FieldConfig:
        return self.num.F

    @classmethod
    def from_int(cls, F: FieldConfig, n: int) -> Frac:
        return cls(PolyQ.const(F, F.from_int(n)))

    @classmethod
    def const(cls, F: FieldConfig, a: int) -> Frac:
        return cls(PolyQ.const(F, a))

    @classmethod
    def t(cls, F: FieldConfig) -> Frac:
        return cls(PolyQ.gen(F))

    @classmethod
    def zero(cls, F):
        return cls(PolyQ.zero(F))

    @classmethod
    def one(cls, F):
        return cls(PolyQ.one(F))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        """True when the element lies in F_q."""
        return self.den.is_one() and self.num.is_constant()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, Frac):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        from .textio import format_frac
        return f"Frac({format_frac(self)})"

    def sort_key(self):
        return (self.num.sort_key(), self.den.sort_key())

    def _coerce(self, other):
        if isinstance(other, Frac):
            return other
        if isinstance(other, PolyQ):
            return Frac(other)
        if isinstance(other, int):
            return Frac.from_int(self.F, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return Frac(self.num + o.num, self.den, True)
        if self.den == o.den:
            return Frac(self.num + o.num, self.den)
        return Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return Frac(self.num * o.num, self.den, True)
        return Frac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> Frac:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        return Frac(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return Frac(self.num**k, self.den**k, True)

    def is_pth_power(self) -> bool:
        return self.num.is_pth_power_form() and self.den.is_pth_power_form()

    def pth_root(self) -> Frac:
        return Frac(self.num.pth_root(), self.den.pth_root(), True)


def is_inf(z) -> bool:
    return z is INF


# -- places -----------------------------------------------------------------

@dataclass(frozen=True)
class Place:
    """A finite place (monic irreducible generator) or the infinite place (gen None)."""

    gen: PolyQ | None

    @classmethod
    def infinity(cls) -> Place:
        return cls(None)

    @classmethod
    def finite(cls, g: PolyQ, check: bool = True) -> Place:
        if check:
            if g.deg < 1 or g.lc != 1 or not g.is_irreducible():
                raise ValueError("place generator must be monic irreducible")
        return cls(g)

    @property
    def is_infinite(self) -> bool:
        return self.gen is None

    @property
    def local_degree(self) -> int:
        return 1 if self.gen is None else self.gen.deg

    def sort_key(self):
        if self.gen is None:
            return (1, ())
        return (0, self.gen.sort_key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        from .textio import format_place
        return f"Place({format_place(self)})"


def poly_valuation(a: PolyQ, g: PolyQ) -> float | int:
    if a.is_zero():
        return INF_VAL
    if g.c == (0, 1):
        return a.trailing_zeros()
    v = 0
    while True:
        q, r = divmod(a, g)
        if r:
            return v
        a = q
        v += 1


def valuation(z, place: Place):
    """v_p(z); +inf for z = 0.  The point INF is not an element of K."""
    if isinstance(z, PolyQ):
        z = Frac(z)
    if z.is_zero():
        return INF_VAL
    if place.gen is None:
        return z.den.deg - z.num.deg
    return poly_valuation(z.num, place.gen) - poly_valuation(z.den, place.gen)


def weil_height(z) -> int:
    """max(deg num, deg den); the point at infinity has height 0."""
    if z is INF:
        return 0
    if isinstance(z, PolyQ):
        z = Frac(z)
    if z.is_zero():
        return 0
    return max(z.num.deg, z.den.deg)


def finite_places_of(a: PolyQ) -> list[Place]:
    """Places dividing a nonzero polynomial."""
    if a.is_constant():
        return []
    _, fac = a.factor()
    return [Place(g) for g, _ in fac]


def support(z: Frac) -> dict[Place, int]:
    """All places with nonzero valuation, including infinity."""
    out = {}
    for g_poly in (z.num, z.den):
        if not g_poly.is_constant():
            _, fac = g_poly.factor()
            for g, m in fac:
                out[Place(g)] = m if g_poly is z.num else -m
    vinf = valuation(z, Place.infinity())
    if vinf:
        out[Place.infinity()] = vinf
    return dict(sorted(out.items(), key=lambda kv: kv[0].sort_key()))


def product_formula_check(z: Frac) -> int:
    """Sum of v_p(z) * N_p over every place of K; zero for all z != 0."""
    if z.is_zero():
        raise ValueError("product formula is for nonzero elements")
    total = 0
    for pl, v in support(z).items():
        total += v * pl.local_degree
    return total


def places_up_to_degree(F: FieldConfig, dmax: int, include_infinity: bool = False):
    """Finite places of degree <= dmax in enumeration order (then infinity)."""
    for d in range(1, dmax + 1):
        for g in irreducibles_of_degree(F, d):
            yield Place(g)
    if include_infinity:
        yield Place.infinity()


class KField:
    """Field operations on Frac values for the generic polynomial code."""

    __slots__ = ("F", "zero", "one")

    def __init__(self, F: FieldConfig):
        self.F = F
        self.zero = Frac.zero(F)
        self.one = Frac.one(F)

    def __eq__(self, other):
        return isinstance(other, KField) and other.F == self.F

    def __hash__(self):
        return hash(("K", self.F))

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        return a.inv()

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    def from_int(self, n: int):
        return Frac.from_int(self.F, n)
