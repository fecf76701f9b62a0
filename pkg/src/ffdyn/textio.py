"""Text wire format: parsing and printing of field elements, polynomials and maps.

Grammar (whitespace ignored)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary | atom)*      # juxtaposition multiplies
    unary := '-' unary | power
    power := atom ('^' ['-'] INT)?
    atom  := INT | 't' | 'z' | 'x' | 'g' | '(' expr ')'

``t`` is the function-field variable, ``z``/``x`` the map or polynomial
variable and ``g`` the generator of F_q when e > 1.  Output always uses
explicit ``*`` and ``^`` with exponents written high to low, e.g.
``2*t^3+t+1`` or ``(g+1)*t^2+g``.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .funcfield import INF, Frac, KField, Place
from .gf import FieldConfig
from .kpoly import KPoly
from .polyq import PolyQ

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\S))")
_MAP_VARS = ("z", "x")


def _tokenize(s: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize {s!r} at {pos}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("int", num))
        elif name is not None:
            toks.append(("name", name))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {s!r}")
            toks.append(("op", op))
        pos = m.end()
    return toks


class _Parser:
    """Evaluates an expression to a pair (num, den) of KPoly in the map variable."""

    def __init__(self, F: FieldConfig, text: str, allow_var: bool):
        self.F = F
        self.K = KField(F)
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_var = allow_var
        self.var_seen: set[str] = set()
        if not self.toks:
            raise ParseError("empty expression")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def const(self, c: Frac):
        one = KPoly(self.K, (self.K.one,))
        return KPoly(self.K, (c,)), one

    # -- rational arithmetic on (num, den) pairs ---------------------------
    @staticmethod
    def add(a, b):
        if a[1] == b[1]:
            return a[0] + b[0], a[1]
        return a[0] * b[1] + b[0] * a[1], a[1] * b[1]

    @staticmethod
    def neg(a):
        return -a[0], a[1]

    @staticmethod
    def mul(a, b):
        return a[0] * b[0], a[1] * b[1]

    def div(self, a, b):
        if b[0].is_zero():
            raise ParseError(f"division by zero in {self.text!r}")
        return a[0] * b[1], a[1] * b[0]

    def raise_to(self, a, k: int):
        if k < 0:
            a = self.div(self.const(self.K.one), a)
            k = -k
        return a[0] ** k, a[1] ** k

    # -- grammar -----------------------------------------------------------
    def parse(self):
        val = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return val

    def expr(self):
        val = self.term()
        while True:
            kind, op = self.peek()
            if kind == "op" and op in "+-":
                self.take()
                rhs = self.term()
                val = self.add(val, rhs if op == "+" else self.neg(rhs))
            else:
                return val

    def term(self):
        val = self.unary()
        while True:
            kind, op = self.peek()
            if kind == "op" and op == "*":
                self.take()
                val = self.mul(val, self.unary())
            elif kind == "op" and op == "/":
                self.take()
                val = self.div(val, self.unary())
            elif kind in ("int", "name") or (kind == "op" and op == "("):
                val = self.mul(val, self.power())
            else:
                return val

    def unary(self):
        kind, op = self.peek()
        if kind == "op" and op == "-":
            self.take()
            return self.neg(self.unary())
        if kind == "op" and op == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, op = self.peek()
        if kind == "op" and op == "^":
            self.take()
            sign = 1
            kind, val = self.peek()
            if kind == "op" and val == "-":
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            return self.raise_to(base, sign * int(val))
        return base

    def atom(self):
        kind, val = self.take()
        F, K = self.F, self.K
        if kind == "int":
            return self.const(K.from_int(int(val)))
        if kind == "name":
            if val == "t":
                return self.const(Frac.t(F))
            if val == "g":
                if F.e == 1:
                    raise ParseError("symbol 'g' needs an extension field (e > 1)")
                return self.const(Frac.const(F, F.generator()))
            if val in _MAP_VARS:
                if not self.allow_var:
                    raise ParseError(f"variable {val!r} not allowed here")
                self.var_seen.add(val)
                if len(self.var_seen) > 1:
                    raise ParseError("mixing variables z and x")
                return KPoly.x(K), KPoly(K, (K.one,))
            raise ParseError(f"unknown symbol {val!r}")
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def _reduce_pair(num: KPoly, den: KPoly) -> tuple[KPoly, KPoly]:
    if den.is_zero():
        raise ParseError("zero denominator")
    g = num.gcd(den)
    if g.deg > 0:
        num, den = num.exact_div(g), den.exact_div(g)
    s = den.lc.inv()
    return num.scale(s), den.scale(s)


def parse_rational_function(F: FieldConfig, text: str) -> tuple[KPoly, KPoly]:
    """Parse a rational function of z (or x) over K; (num, den) coprime, den monic."""
    p = _Parser(F, text, allow_var=True)
    num, den = p.parse()
    return _reduce_pair(num, den)


def parse_kpoly(F: FieldConfig, text: str) -> KPoly:
    num, den = parse_rational_function(F, text)
    if den.deg > 0:
        raise ParseError(f"{text!r} is not a polynomial in the variable")
    return num.scale(den.c[0].inv())


def parse_frac(F: FieldConfig, text: str) -> Frac:
    """Parse an element of K = F_q(t)."""
    p = _Parser(F, text, allow_var=False)
    num, den = p.parse()
    return num[0] / den[0]


def parse_point(F: FieldConfig, text: str):
    """Element of K or the point INF ("inf" / "oo")."""
    if text.strip().lower() in ("inf", "oo", "infinity"):
        return INF
    return parse_frac(F, text)


def parse_polyq(F: FieldConfig, text: str) -> PolyQ:
    z = parse_frac(F, text)
    if not z.is_poly():
        raise ParseError(f"{text!r} is not a polynomial in t")
    return z.num


def parse_place(F: FieldConfig, text: str) -> Place:
    s = text.strip()
    if s.lower() in ("inf", "oo", "infinity"):
        return Place.infinity()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    g = parse_polyq(F, s)
    if g.deg < 1:
        raise ParseError(f"place generator {text!r} must have positive degree")
    g = g.monic()
    if not g.is_irreducible():
        raise ParseError(f"place generator {text!r} is reducible")
    return Place(g)


def parse_modulus(p: int, text: str) -> tuple[int, ...]:
    """Modulus polynomial in g over F_p, e.g. "g^2+1" -> (1, 0, 1)."""
    from .gf import GF
    F = GF(p)
    src = re.sub(r"\bg\b", "t", text)
    return tuple(parse_polyq(F, src).c)


# -- printing --------------------------------------------------------------

def _mono(var: str, k: int) -> str:
    if k == 0:
        return "1"
    if k == 1:
        return var
    return f"{var}^{k}"


def _sum_terms(terms: list[tuple[str, int]], var: str) -> str:
    """terms: (coefficient string, exponent), high to low; '1' coefficients elided."""
    if not terms:
        return "0"
    parts = []
    for cs, k in terms:
        if k == 0:
            parts.append(cs)
        elif cs == "1":
            parts.append(_mono(var, k))
        else:
            parts.append(f"{cs}*{_mono(var, k)}")
    return "+".join(parts)


def _atomic(s: str) -> bool:
    return not any(ch in s for ch in "+-/")


def format_fq(F: FieldConfig, a: int) -> str:
    if F.e == 1:
        return str(a)
    ds = F.digits(a)
    terms = [(str(d), k) for k, d in reversed(list(enumerate(ds))) if d]
    return _sum_terms(terms, "g")


def format_polyq(f: PolyQ, var: str = "t") -> str:
    F = f.F
    terms = []
    for k in range(f.deg, -1, -1):
        a = f.c[k]
        if not a:
            continue
        cs = format_fq(F, a)
        if k and not _atomic(cs):
            cs = f"({cs})"
        terms.append((cs, k))
    return _sum_terms(terms, var)


def format_frac(z) -> str:
    if z is INF:
        return "inf"
    if isinstance(z, PolyQ):
        return format_polyq(z)
    num = format_polyq(z.num)
    if z.den.is_one():
        return num
    den = format_polyq(z.den)
    if not _atomic(num):
        num = f"({num})"
    if not _atomic(den) or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"


def format_kpoly(P: KPoly, var: str = "x") -> str:
    terms = []
    for k in range(P.deg, -1, -1):
        a = P.c[k]
        if a.is_zero():
            continue
        cs = format_frac(a)
        if k and not _atomic(cs):
            cs = f"({cs})"
        terms.append((cs, k))
    return _sum_terms(terms, var)


def format_map(num: KPoly, den: KPoly, var: str = "z") -> str:
    ns = format_kpoly(num, var)
    if den.deg == 0 and den.c[0].is_one():
        return ns
    return f"({ns}) / ({format_kpoly(den, var)})"


def format_place(pl: Place) -> str:
    return "inf" if pl.gen is None else format_polyq(pl.gen)
