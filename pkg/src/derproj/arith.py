"""Exact coefficient fields and sparse multivariate polynomials.

A ring context is a :class:`PolynomialRing` (field + variable names). Polynomials
are immutable maps from exponent tuples to nonzero coefficients.

>>> R = PolynomialRing(QQ, ["x", "y"])
>>> x, y = R.gens
>>> str((x + y) * (x - y))
'x^2 - y^2'
>>> F5 = PolynomialRing(Field(5), ["x"])
>>> str(F5.parse("(x+2)*(x+3)"))
'x^2 + 1'
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, Sequence, Tuple

from .errors import ContextError, ParseError

Monomial = Tuple[int, ...]
ORDERS = ("grevlex", "lex", "grlex")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """The rationals (``p == 0``) or the prime field GF(p) for an odd prime p < 2^31.

    QQ elements are ints or Fractions (integral values are kept as ``int``);
    GF(p) elements are ints in ``range(p)``.
    """

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p != 0 and not (2 < p < 2 ** 31 and _is_prime(p)):
            raise ValueError(f"prime field modulus must be an odd prime below 2^31, got {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def from_spec(cls, spec: str) -> "Field":
        """Parse ``q`` or ``fp:<p>``."""
        s = spec.strip().lower()
        if s in ("q", "qq", "rationals"):
            return cls(0)
        m = re.fullmatch(r"(?:fp|gf):(\d+)", s)
        if m:
            return cls(int(m.group(1)))
        raise ValueError(f"unknown field spec {spec!r}; use 'q' or 'fp:<p>'")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def spec(self) -> str:
        return "q" if self.p == 0 else f"fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __call__(self, x):
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, bool):
            x = int(x)
        p = self.p
        if isinstance(x, int):
            return x % p if p else x
        if isinstance(x, Fraction):
            if p:
                den = x.denominator % p
                if den == 0:
                    raise ZeroDivisionError(f"denominator divisible by {p}")
                return x.numerator * pow(den, -1, p) % p
            return x.numerator if x.denominator == 1 else x
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    zero = 0
    one = 1

    def add(self, a, b):
        return (a + b) % self.p if self.p else _q(a + b)

    def sub(self, a, b):
        return (a - b) % self.p if self.p else _q(a - b)

    def mul(self, a, b):
        return a * b % self.p if self.p else _q(a * b)

    def neg(self, a):
        return -a % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return _q(Fraction(1) / a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, a) -> str:
        return str(a)


def _q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


QQ = Field(0)


def order_key(order: str) -> Callable[[Monomial], tuple]:
    """Sort key realizing a monomial order: larger key means larger monomial."""
    if order == "grevlex":
        return _grevlex_key
    if order == "lex":
        return _lex_key
    if order == "grlex":
        return _grlex_key
    raise ValueError(f"unknown monomial order {order!r}")


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex_key(e):
    return e


def _grlex_key(e):
    return (sum(e), e)


def monomial_cmp(order: str, a: Monomial, b: Monomial) -> int:
    """Return -1, 0 or 1 comparing ``a`` and ``b`` in ``order``."""
    if len(a) != len(b):
        raise ContextError(f"monomials of different lengths {len(a)} and {len(b)}")
    key = order_key(order)
    ka, kb = key(a), key(b)
    return (ka > kb) - (ka < kb)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(a, b)])


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple([y - x for x, y in zip(a, b)])


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([max(x, y) for x, y in zip(a, b)])


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, k: int) -> Tuple[Monomial, ...]:
    """All exponent vectors of total degree k, in a fixed (lex-descending) order."""
    if k < 0:
        return ()
    if nvars == 0:
        return ((),) if k == 0 else ()
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, k: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(nvars, k))}


class PolynomialRing:
    """Ring context: a coefficient field plus ordered variable names.

    ``order`` is the default monomial order (for printing and Groebner bases);
    it does not take part in equality of contexts.
    """

    def __init__(self, field: Field, names: Sequence[str], order: str = "grevlex"):
        names = tuple(names)
        for n in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise ValueError(f"invalid variable name {n!r}")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        order_key(order)
        self.field = field
        self.names = names
        self.order = order
        self.nvars = len(names)
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and self.field == other.field and self.names == other.names

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"PolynomialRing({self.field!r}, {list(self.names)})"

    def with_order(self, order: str) -> "PolynomialRing":
        return PolynomialRing(self.field, self.names, order)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, {self._zero_exp: 1})

    @property
    def gens(self) -> Tuple["Polynomial", ...]:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(Polynomial(self, {tuple(e): 1}))
        return tuple(out)

    def var(self, name: str) -> "Polynomial":
        return self.gens[self.names.index(name)]

    def monomial(self, exp: Monomial, coeff=1) -> "Polynomial":
        if len(exp) != self.nvars:
            raise ContextError("exponent length does not match ring")
        return Polynomial(self, {tuple(exp): self.field(coeff)})

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {self._zero_exp: self.field(c)})

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise ContextError("polynomial belongs to a different ring")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.constant(x)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def monomials(self, k: int) -> Tuple[Monomial, ...]:
        return monomials_of_degree(self.nvars, k)


class Polynomial:
    """Immutable sparse polynomial. ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Dict[Monomial, object], _clean: bool = False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            f = ring.field
            t = {}
            for m, c in terms.items():
                c = f(c)
                if c:
                    t[tuple(m)] = c
            self.terms = t
        self._hash = None

    # -- basic predicates -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant_coeff(self):
        return self.terms.get(self.ring._zero_exp, 0)

    def coeff(self, m: Monomial):
        return self.terms.get(tuple(m), 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_degree(self):
        """Degree if homogeneous and nonzero, else None."""
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    # -- order-dependent data ---------------------------------------------
    def leading_monomial(self, order: str | None = None) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order_key(order or self.ring.order))

    def leading_coeff(self, order: str | None = None):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: str | None = None) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coeff(order)))

    def sorted_terms(self, order: str | None = None):
        key = order_key(order or self.ring.order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ContextError("polynomials from different ring contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return _add(self, other, -1)

    def __rsub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return _add(other, self, -1)

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, {m: f.neg(c) for m, c in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(self.ring.field(other))
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c) if not isinstance(c, int) or f.p else c
        if not c:
            return self.ring.zero
        if c == 1:
            return self
        if f.p:
            p = f.p
            return Polynomial(self.ring, {m: a * c % p for m, a in self.terms.items()}, _clean=True)
        return Polynomial(self.ring, {m: _q(a * c) for m, a in self.terms.items()}, _clean=True)

    def mul_term(self, mono: Monomial, c=1) -> "Polynomial":
        """Multiply by the single term ``c * x^mono``."""
        f = self.ring.field
        p = f.p
        out = {}
        for m, a in self.terms.items():
            v = a * c % p if p else _q(a * c)
            if v:
                out[tuple([x + y for x, y in zip(m, mono)])] = v
        return Polynomial(self.ring, out, _clean=True)

    def evaluate(self, values: Dict[str, object]) -> "Polynomial":
        """Substitute field values or polynomials for some variables."""
        R = self.ring
        subs = {}
        for name, v in values.items():
            subs[R.names.index(name)] = v if isinstance(v, Polynomial) else R.constant(v)
        result = R.zero
        for m, c in self.terms.items():
            t = R.monomial(tuple(0 if i in subs else e for i, e in enumerate(m)), c)
            for i, e in enumerate(m):
                if i in subs and e:
                    t = t * subs[i] ** e
            result = result + t
        return result

    def change_ring(self, ring: PolynomialRing) -> "Polynomial":
        """Reinterpret coefficients in another ring with the same number of variables."""
        if ring.nvars != self.ring.nvars:
            raise ContextError("variable counts differ")
        return Polynomial(ring, dict(self.terms))

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        p = self.ring.field.p
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(names, m) if e
            )
            if p:
                neg, mag = False, str(c)
            else:
                neg, mag = c < 0, str(abs(c))
            if mono:
                body = mono if mag == "1" else f"{mag}*{mono}"
            else:
                body = mag
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def _add(a: Polynomial, b: Polynomial, sign: int) -> Polynomial:
    p = a.ring.field.p
    out = dict(a.terms)
    for m, c in b.terms.items():
        v = out.get(m, 0) + (c if sign == 1 else -c)
        if p:
            v %= p
        else:
            v = _q(v)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return Polynomial(a.ring, out, _clean=True)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact product of two polynomials in the same ring context."""
    if a.ring != b.ring:
        raise ContextError("polynomials from different ring contexts")
    p = a.ring.field.p
    out: Dict[Monomial, object] = {}
    get = out.get
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            m = tuple([x + y for x, y in zip(m1, m2)])
            out[m] = get(m, 0) + c1 * c2
    if p:
        clean = {m: v % p for m, v in out.items() if v % p}
    else:
        clean = {m: _q(v) for m, v in out.items() if v}
    return Polynomial(a.ring, clean, _clean=True)


def poly_sum(ring: PolynomialRing, polys: Iterable[Polynomial]) -> Polynomial:
    p = ring.field.p
    out: Dict[Monomial, object] = {}
    for f in polys:
        for m, c in f.terms.items():
            out[m] = out.get(m, 0) + c
    if p:
        clean = {m: v % p for m, v in out.items() if v % p}
    else:
        clean = {m: _q(v) for m, v in out.items() if v}
    return Polynomial(ring, clean, _clean=True)


# ---------------------------------------------------------------------------
# text grammar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, ring: PolynomialRing, text: str):
        self.ring, self.text = ring, text
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                j = pos
                while j < len(text) and text[j].isspace():
                    j += 1
                raise ParseError(f"unexpected character {text[j]!r}", text, j)
            start = m.start(m.lastindex)
            kind = ("num", "name", "op")[m.lastindex - 1]
            self.toks.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg, pos=None):
        raise ParseError(msg, self.text, self.peek()[2] if pos is None else pos)

    def parse(self) -> Polynomial:
        if not self.toks:
            self.fail("empty polynomial")
        val = self.expr()
        if self.i != len(self.toks):
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return val

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        val = self.term()
        if sign < 0:
            val = -val
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> Polynomial:
        val = self.factor()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.factor()
            if op == "*":
                val = val * rhs
            else:
                if not rhs.is_constant():
                    self.fail("division only by nonzero constants", pos)
                c = rhs.constant_coeff()
                if not c:
                    self.fail("division by zero", pos)
                val = val.scale(self.ring.field.inv(c))
        return val

    def factor(self) -> Polynomial:
        if self.peek()[1] in ("+", "-"):
            # unary sign binds looser than ^, so -x^2 = -(x^2)
            neg = self.take()[1] == "-"
            val = self.factor()
            return -val if neg else val
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            kind, tok, _ = self.peek()
            if kind != "num":
                self.fail("expected a nonnegative integer exponent")
            self.take()
            base = base ** int(tok)
        return base

    def atom(self) -> Polynomial:
        kind, tok, pos = self.peek()
        if kind == "num":
            self.take()
            return self.ring.constant(int(tok))
        if kind == "name":
            self.take()
            if tok not in self.ring.names:
                self.fail(f"unknown variable {tok!r}", pos)
            return self.ring.var(tok)
        if tok == "(":
            self.take()
            val = self.expr()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return val
        if kind is None:
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {tok!r}")
