"""Polynomials over F_q in the variable t, with factorization.

Coefficients are stored lowest degree first with no trailing zeros, so the
zero polynomial is the empty tuple.  Over prime fields large products and
remainders go through numpy; everything else is plain Python over the
field tables.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np

from .gf import FieldConfig, prime_factors

_NP_THRESHOLD = 48


def _trim(c: list) -> tuple:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _np_ok(F: FieldConfig, n: int) -> bool:
    return F.e == 1 and n * (F.p - 1) ** 2 < (1 << 62)


def _mul(a: tuple, b: tuple, F: FieldConfig) -> tuple:
    if not a or not b:
        return ()
    la, lb = len(a), len(b)
    if F.e == 1:
        p = F.p
        if min(la, lb) > _NP_THRESHOLD and _np_ok(F, min(la, lb)):
            r = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % p
            return _trim(r.tolist())
        out = [0] * (la + lb - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim([v % p for v in out])
    add, mul = F.add, F.mul
    out = [0] * (la + lb - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return _trim(out)


def _add(a: tuple, b: tuple, F: FieldConfig) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    if F.e == 1:
        p = F.p
        for i, y in enumerate(b):
            out[i] = (out[i] + y) % p
    else:
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
    return _trim(out)


def _neg(a: tuple, F: FieldConfig) -> tuple:
    return tuple(F.neg(x) for x in a)


def _scale(a: tuple, s: int, F: FieldConfig) -> tuple:
    if s == 0:
        return ()
    return tuple(F.mul(x, s) for x in a)


def _divmod(a: tuple, b: tuple, F: FieldConfig) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    la, lb = len(a), len(b)
    if la < lb:
        return (), a
    inv = F.inv(b[-1])
    m = lb - 1
    if F.e == 1:
        p = F.p
        if la > _NP_THRESHOLD:
            bm = np.array([x * inv % p for x in b], dtype=np.int64)
            r = np.array(a, dtype=np.int64)
            q = np.zeros(la - m, dtype=np.int64)
            for i in range(la - lb, -1, -1):
                c = int(r[i + m]) % p
                if c:
                    q[i] = c
                    seg = r[i:i + m + 1]
                    seg -= c * bm
                    seg %= p
            q = (q * inv) % p
            return _trim(q.tolist()), _trim((r[:m] % p).tolist())
        r = list(a)
        q = [0] * (la - m)
        for i in range(la - lb, -1, -1):
            c = r[i + m] * inv % p
            if c:
                q[i] = c
                for j in range(m + 1):
                    r[i + j] = (r[i + j] - c * b[j]) % p
        return _trim(q), _trim(r[:m])
    r = list(a)
    q = [0] * (la - m)
    for i in range(la - lb, -1, -1):
        c = F.mul(r[i + m], inv)
        if c:
            q[i] = c
            for j in range(m + 1):
                if b[j]:
                    r[i + j] = F.sub(r[i + j], F.mul(c, b[j]))
    return _trim(q), _trim(r[:m])


class PolyQ:
    """Immutable polynomial over a finite field."""

    __slots__ = ("F", "c")

    def __init__(self, F: FieldConfig, coeffs=(), _trusted: bool = False):
        self.F = F
        if _trusted:
            self.c = coeffs
        else:
            self.c = _trim([int(x) % F.q if F.e == 1 else int(x) for x in coeffs])
            if F.e > 1 and any(not 0 <= x < F.q for x in self.c):
                raise ValueError("coefficient out of range")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, F):
        return cls(F, (), True)

    @classmethod
    def one(cls, F):
        return cls(F, (1,), True)

    @classmethod
    def const(cls, F, a: int):
        return cls(F, (a,) if a else (), True)

    @classmethod
    def monomial(cls, F, k: int, a: int = 1):
        if a == 0:
            return cls.zero(F)
        return cls(F, (0,) * k + (a,), True)

    @classmethod
    def gen(cls, F):
        return cls(F, (0, 1), True)

    def _new(self, c):
        return PolyQ(self.F, c, True)

    # -- basic queries -----------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def __bool__(self):
        return bool(self.c)

    def __len__(self):
        return len(self.c)

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, other):
        if isinstance(other, PolyQ):
            return self.c == other.c and self.F == other.F
        if isinstance(other, int):
            return self.c == ((other % self.F.p,) if other % self.F.p else ())
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.F.q))

    def __repr__(self):
        from .textio import format_polyq
        return f"PolyQ({format_polyq(self)})"

    def sort_key(self):
        return (len(self.c), tuple(reversed(self.c)))

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, PolyQ):
            return other
        if isinstance(other, int):
            return PolyQ.const(self.F, self.F.from_int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(_add(self.c, other.c, self.F))

    __radd__ = __add__

    def __neg__(self):
        return self._new(_neg(self.c, self.F))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(_add(self.c, _neg(other.c, self.F), self.F))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(_mul(self.c, other.c, self.F))

    __rmul__ = __mul__

    def scale(self, a: int) -> PolyQ:
        return self._new(_scale(self.c, a, self.F))

    def __divmod__(self, other):
        q, r = _divmod(self.c, other.c, self.F)
        return self._new(q), self._new(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, k: int):
        result, base = PolyQ.one(self.F), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, other) -> PolyQ:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other) -> bool:
        return not (other % self)

    def monic(self) -> PolyQ:
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(self.F.inv(self.c[-1]))

    def __call__(self, x: int) -> int:
        F = self.F
        acc = 0
        for a in reversed(self.c):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def derivative(self) -> PolyQ:
        F = self.F
        return self._new(_trim([F.mul(F.from_int(i), a) for i, a in enumerate(self.c)][1:]))

    def shift(self, k: int) -> PolyQ:
        """Multiply by t^k."""
        if not self.c:
            return self
        return self._new((0,) * k + self.c)

    def reverse(self, n: int | None = None) -> PolyQ:
        """t^n * self(1/t) (default n = deg)."""
        if n is None:
            n = self.deg
        c = list(self.c) + [0] * max(0, n + 1 - len(self.c))
        return self._new(_trim(list(reversed(c[: n + 1]))))

    def trailing_zeros(self) -> int:
        for i, x in enumerate(self.c):
            if x:
                return i
        raise ValueError("zero polynomial")

    def gcd(self, other: PolyQ) -> PolyQ:
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: PolyQ):
        """(g, s, u) with s*self + u*other = g monic."""
        F = self.F
        r0, r1 = self, other
        s0, s1 = PolyQ.one(F), PolyQ.zero(F)
        u0, u1 = PolyQ.zero(F), PolyQ.one(F)
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            u0, u1 = u1, u0 - q * u1
        if not r0:
            return r0, s0, u0
        inv = F.inv(r0.lc)
        return r0.scale(inv), s0.scale(inv), u0.scale(inv)

    def inverse_mod(self, m: PolyQ) -> PolyQ:
        g, s, _ = self.xgcd(m)
        if not g.is_one():
            raise ZeroDivisionError("not invertible modulo m")
        return s % m

    def powmod(self, k: int, m: PolyQ) -> PolyQ:
        result, base = PolyQ.one(self.F) % m, self % m
        while k:
            if k & 1:
                result = (result * base) % m
            k >>= 1
            if k:
                base = (base * base) % m
        return result

    def compose_mod(self, h: PolyQ, m: PolyQ) -> PolyQ:
        """self(h) mod m by Horner."""
        acc = PolyQ.zero(self.F)
        for a in reversed(self.c):
            acc = (acc * h + PolyQ.const(self.F, a)) % m
        return acc

    def is_pth_power_form(self) -> bool:
        p = self.F.p
        return all(a == 0 for i, a in enumerate(self.c) if i % p)

    def pth_root(self) -> PolyQ:
        """g with g^p == self; requires self' == 0."""
        F, p = self.F, self.F.p
        return self._new(_trim([F.pth_root(a) for a in self.c[::p]]))

    # -- factorization -----------------------------------------------------
    def squarefree_decomposition(self) -> list[tuple[PolyQ, int]]:
        """[(g_i, m_i)] with self = lc * prod g_i^m_i, g_i squarefree monic, pairwise coprime."""
        if not self.c:
            raise ValueError("zero polynomial has no squarefree decomposition")
        out: dict[int, PolyQ] = {}
        _sqf(self.monic(), 1, out)
        return sorted(((g, m) for m, g in out.items() if g.deg > 0), key=lambda gm: gm[1])

    def is_squarefree(self) -> bool:
        if self.deg <= 0:
            return True
        return self.gcd(self.derivative()).is_one()

    def is_irreducible(self) -> bool:
        """Rabin's test."""
        n = self.deg
        if n < 1:
            return False
        if n == 1:
            return True
        f = self.monic()
        x = PolyQ.gen(self.F)
        q = self.F.q
        frob = [x % f]
        for _ in range(n):
            frob.append(frob[-1].powmod(q, f))
        if frob[n] != x % f:
            return False
        for r in prime_factors(n):
            if not f.gcd(frob[n // r] - x).is_one():
                return False
        return True

    def factor(self) -> tuple[int, list[tuple[PolyQ, int]]]:
        """(unit, [(monic irreducible, multiplicity)]) sorted by (degree, coefficients)."""
        if not self.c:
            raise ValueError("cannot factor the zero polynomial")
        unit = self.lc
        result: dict[PolyQ, int] = {}
        for g, m in self.squarefree_decomposition():
            for d, block in _distinct_degree(g):
                for h in _equal_degree(block, d):
                    result[h] = result.get(h, 0) + m
        return unit, sorted(result.items(), key=lambda hm: hm[0].sort_key())


def _sqf(f: PolyQ, mult: int, out: dict):
    """Squarefree decomposition over F_q (char p), accumulating into out[m]."""
    if f.deg <= 0:
        return
    F = f.F
    df = f.derivative()
    if not df:
        _sqf(f.pth_root(), mult * F.p, out)
        return
    c = f.gcd(df)
    w = f.exact_div(c)
    i = 1
    while not w.is_one():
        y = w.gcd(c)
        z = w.exact_div(y)
        if z.deg > 0:
            key = i * mult
            out[key] = (out[key] * z) if key in out else z
        i += 1
        w = y
        c = c.exact_div(y)
    if c.deg > 0:
        _sqf(c.pth_root(), mult * F.p, out)


def _distinct_degree(f: PolyQ) -> list[tuple[int, PolyQ]]:
    """Split squarefree monic f into (d, product of its degree-d irreducible factors)."""
    F = f.F
    q = F.q
    x = PolyQ.gen(F)
    out = []
    h = x % f
    d = 0
    while f.deg >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, f)
        g = f.gcd(h - x)
        if not g.is_one():
            out.append((d, g))
            f = f.exact_div(g)
            h = h % f
    if f.deg > 0:
        out.append((f.deg, f))
    return out


def _seed_for(f: PolyQ) -> int:
    blob = repr((f.F.p, f.F.e, f.F.modulus, f.c)).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _equal_degree(f: PolyQ, d: int) -> list[PolyQ]:
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    if f.deg == d:
        return [f]
    F = f.F
    q = F.q
    rng = random.Random(_seed_for(f))
    n = f.deg
    while True:
        a = PolyQ(F, [rng.randrange(q) for _ in range(n)])
        if a.deg < 1:
            continue
        if F.p == 2:
            # trace map Tr_{F_{q^d}/F_2}(a) = sum_{j < e d} a^(2^j)
            t = a % f
            acc = t
            for _ in range(F.e * d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((q**d - 1) // 2, f) - 1
        g = f.gcd(b)
        if 0 < g.deg < n:
            return _equal_degree(g, d) + _equal_degree(f.exact_div(g), d)


def irreducibles_of_degree(F: FieldConfig, d: int):
    """Monic irreducibles of degree d in a fixed enumeration order."""
    q = F.q
    for code in range(q**d):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % q)
            c //= q
        cand = PolyQ(F, tuple(coeffs) + (1,), True)
        if cand.is_irreducible():
            yield cand
