"""Finite fields F_q, q = p^e.

Elements are plain ints in ``range(q)``: the integer ``c_0 + c_1 p + ... + c_{e-1} p^{e-1}``
stands for ``c_0 + c_1 g + ... + c_{e-1} g^{e-1}`` where ``g`` is a root of the
defining modulus.  For ``e == 1`` this is just arithmetic mod p.
"""

from __future__ import annotations

import functools

from .errors import HypothesisError

# add/sub tables are only materialized below this size
_TABLE_LIMIT = 1 << 10
_MAX_Q_EXT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for s in small:
        if n % s == 0:
            return n == s
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- tiny list-based helpers over F_p, used only to vet the modulus --------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _lmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm] if len(a) > dm else a)


def _lmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _lmod(out, m, p)


def _lgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _lmod(a, b, p)
    return a


def _lpowx(k, m, p):
    """x^k mod m."""
    result, base = [1], _lmod([0, 1], m, p)
    while k:
        if k & 1:
            result = _lmulmod(result, base, m, p)
        base = _lmulmod(base, base, m, p)
        k >>= 1
    return result


def is_irreducible_mod_p(m: tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low first)."""
    n = len(m) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    m = list(m)
    x = [0, 1]

    def frob_iter(k):
        h = _lmod(x, m, p)
        for _ in range(k):
            h = _lpowx_poly(h, p, m, p)
        return h

    def sub_x(h):
        h = list(h) + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        return _trim(h)

    if sub_x(frob_iter(n)):
        return False
    for r in prime_factors(n):
        g = _lgcd(m, sub_x(frob_iter(n // r)), p)
        if len(g) > 1:
            return False
    return True


def _lpowx_poly(h, k, m, p):
    result, base = [1], h
    while k:
        if k & 1:
            result = _lmulmod(result, base, m, p)
        base = _lmulmod(base, base, m, p)
        k >>= 1
    return result


def _first_irreducible(p: int, e: int) -> tuple[int, ...]:
    # lexicographic search over monic polys of degree e
    for code in range(p**e):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        cand = tuple(coeffs) + (1,)
        if cand[0] == 0:
            continue
        if is_irreducible_mod_p(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")


class FieldConfig:
    """The finite field F_q = F_p[g]/(modulus)."""

    __slots__ = ("p", "e", "q", "modulus", "_exp", "_log", "_add", "_neg", "_digits", "_pw")

    def __init__(self, p: int, e: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise HypothesisError(f"characteristic {p} is not prime")
        if e < 1:
            raise HypothesisError("extension exponent must be >= 1")
        if modulus is None:
            modulus = (0, 1) if e == 1 else _first_irreducible(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise HypothesisError("modulus must be monic of degree e")
        if e > 1 and not is_irreducible_mod_p(modulus, p):
            raise HypothesisError(f"modulus {modulus} is reducible over F_{p}")
        self.p, self.e, self.q = p, e, p**e
        self.modulus = modulus
        self._exp = self._log = self._add = self._neg = None
        self._pw = tuple(p**i for i in range(e))
        if e > 1:
            if self.q > _MAX_Q_EXT:
                raise HypothesisError("extension field too large for table arithmetic")
            self._build_tables()

    # identity is the defining data
    def _key(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldConfig) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}, modulus={self.modulus})"

    # -- table construction (e > 1) ---------------------------------------
    def _to_digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, ds) -> int:
        return sum(d * w for d, w in zip(ds, self._pw))

    def _mul_slow(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self._to_digits(a), self._to_digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        m = self.modulus
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(e + 1):
                    prod[i - e + j] -= c * m[j]
        return self._from_digits([c % p for c in prod[:e]])

    def _build_tables(self):
        q = self.q
        self._digits = [self._to_digits(a) for a in range(q)]
        order = q - 1
        factors = prime_factors(order)
        gen = None
        for cand in range(2, q):
            if all(self._pow_slow(cand, order // r) != 1 for r in factors):
                gen = cand
                break
        if gen is None:  # q == 2 cannot happen for e > 1
            raise AssertionError("no primitive element")
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, gen)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp, self._log = exp, log
        p = self.p
        self._neg = [self._from_digits([(-d) % p for d in self._digits[a]]) for a in range(q)]
        if q <= _TABLE_LIMIT:
            self._add = [
                [self._from_digits([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])])
                 for b in range(q)]
                for a in range(q)
            ]

    def _pow_slow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            k >>= 1
        return r

    # -- arithmetic --------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        p = self.p
        return self._from_digits([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if self.e == 1:
            return pow(a, k, self.p)
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> F_q."""
        return n % self.p

    def pth_root(self, a: int) -> int:
        # Frobenius is a bijection; its inverse is a -> a^(q/p)
        return self.pow(a, self.q // self.p)

    def generator(self) -> int:
        """The element g (a root of the modulus)."""
        if self.e == 1:
            raise HypothesisError("prime field has no generator symbol")
        return self.p

    def digits(self, a: int) -> list[int]:
        return self._to_digits(a)

    def elements(self):
        return range(self.q)


@functools.lru_cache(maxsize=None)
def GF(p: int, e: int = 1, modulus: tuple[int, ...] | None = None) -> FieldConfig:
    return FieldConfig(p, e, modulus)
