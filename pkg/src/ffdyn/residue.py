"""Residue fields k_p = O_p / m_p of places of K.

Elements are PolyQ values reduced modulo the local generator.  The infinite
place is handled through the local parameter s = 1/t, so every place is
treated as a finite place "(s)" after the substitution t -> 1/s.
"""

from __future__ import annotations

from .errors import HypothesisError
from .funcfield import Frac, Place
from .polyq import PolyQ


def to_local(z: Frac, place: Place) -> Frac:
    """z rewritten in the local coordinate of the place (identity for finite places)."""
    if place.gen is not None:
        return z
    if z.is_zero():
        return z
    n = max(z.num.deg, z.den.deg)
    return Frac(z.num.reverse(n), z.den.reverse(n))


def local_generator(place: Place, F) -> PolyQ:
    return PolyQ.gen(F) if place.gen is None else place.gen


class ResidueField:
    """Finite field O_p/m_p with field operations for the generic polynomial code."""

    def __init__(self, place: Place, F):
        self.place = place
        self.F = F
        self.pi = local_generator(place, F)
        self.zero = PolyQ.zero(F)
        self.one = PolyQ.one(F)
        self.order = F.q ** self.pi.deg

    def __repr__(self):
        return f"ResidueField({self.place!r})"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return (a * b) % self.pi

    def inv(self, a):
        return a.inverse_mod(self.pi)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    def from_int(self, n):
        return PolyQ.const(self.F, self.F.from_int(n))

    def reduce(self, z) -> PolyQ:
        """Image of a p-integral element of K; raises HypothesisError otherwise."""
        if isinstance(z, PolyQ):
            z = Frac(z)
        return self.reduce_local(to_local(z, self.place))

    def reduce_local(self, loc: Frac) -> PolyQ:
        """Reduce an element already written in the local coordinate."""
        den = loc.den % self.pi
        if den.is_zero():
            raise HypothesisError("element is not integral at the place")
        num = loc.num % self.pi
        if num.is_zero():
            return num
        return self.mul(num, self.inv(den))

    def elements(self):
        """All elements, in a fixed order (for brute-force checks)."""
        F, k = self.F, self.pi.deg
        for code in range(self.order):
            coeffs = []
            for _ in range(k):
                coeffs.append(code % F.q)
                code //= F.q
            yield PolyQ(F, coeffs)
