"""Exact arithmetic over a prime field F_p.

Monomials are exponent tuples, polynomials are immutable wrappers around a
``{exponents: coefficient}`` dict whose coefficients live in ``[0, p)``.
The Groebner engine works directly on the raw dicts; :class:`Polynomial` is
the user-facing value type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import re

from .errors import InputError, RingMismatch

DEFAULT_PRIME = 32003

# exponents must stay below this for the packed integer sort keys
EXP_BASE = 1 << 16

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers every 64-bit input)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"modulus {self.p} is not prime")

    def __call__(self, n: int) -> int:
        return n % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, self.p)

    def signed(self, a: int) -> int:
        """Symmetric representative in (-p/2, p/2], for display."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


class MonomialOrder:
    """Monomial order on exponent tuples.

    ``key(e)`` returns an integer that is larger for larger monomials, so
    orders can be compared, sorted and heaped without tuple juggling.
    ``kind`` is ``grevlex``, ``lex`` or ``block``; a block order takes a tuple
    of block sizes and uses grevlex inside each block.
    """

    KINDS = ("grevlex", "lex", "block")

    def __init__(self, kind: str = "grevlex", nvars: int = 0, blocks: tuple[int, ...] | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block":
            if not blocks or sum(blocks) != nvars:
                raise ValueError("block sizes must sum to the variable count")
        self.kind = kind
        self.nvars = nvars
        self.blocks = tuple(blocks) if blocks else (nvars,)
        self.key = lru_cache(maxsize=None)(self._key)

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', {self.nvars}, {self.blocks})"
        return f"MonomialOrder({self.kind!r}, {self.nvars})"

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.nvars == other.nvars and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.kind, self.nvars, self.blocks))

    def __getstate__(self):
        return (self.kind, self.nvars, self.blocks)

    def __setstate__(self, state):
        self.__init__(*state)

    @staticmethod
    def _grevlex(e) -> int:
        k = sum(e)
        for a in reversed(e):
            k = k * EXP_BASE + (EXP_BASE - 1 - a)
        return k

    def _key(self, e: tuple[int, ...]) -> int:
        if self.kind == "lex":
            k = 0
            for a in e:
                k = k * EXP_BASE + a
            return k
        if self.kind == "grevlex":
            return self._grevlex(e)
        k, start = 0, 0
        for size in self.blocks:
            part = e[start:start + size]
            k = k * EXP_BASE ** (size + 1) + self._grevlex(part)
            start += size
        return k

    def cmp(self, a, b) -> int:
        """-1, 0 or 1 as monomial ``a`` is less than, equal to or greater than ``b``."""
        a, b = tuple(a), tuple(b)
        if len(a) != len(b) or len(a) != self.nvars:
            raise ValueError("monomial length mismatch")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def monomial_cmp(order: MonomialOrder, a, b) -> str:
    return ("less", "equal", "greater")[order.cmp(a, b) + 1]


@dataclass(frozen=True, eq=False)
class Ring:
    """Descriptor for F_p[x_1..x_n] / J.

    ``quotient`` holds raw generator dicts of J; the quotient is applied by the
    Groebner layer, polynomial arithmetic itself is on the free polynomial ring.
    """

    variables: tuple[str, ...]
    field: PrimeField = field(default_factory=PrimeField)
    order_kind: str = "grevlex"
    quotient: tuple = ()

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable names")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise InputError(f"bad variable name {v!r}")
        object.__setattr__(self, "order", MonomialOrder(self.order_kind, len(self.variables)))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def p(self) -> int:
        return self.field.p

    def __eq__(self, other):
        return (isinstance(other, Ring) and self.variables == other.variables
                and self.field == other.field and self.order_kind == other.order_kind
                and self.quotient == other.quotient)

    def __hash__(self):
        return hash((self.variables, self.field.p, self.order_kind))

    def with_quotient(self, gens) -> "Ring":
        gens = [self(g) for g in gens]
        terms = tuple(tuple(sorted(g.terms.items())) for g in gens if not g.is_zero())
        return Ring(self.variables, self.field, self.order_kind, terms)

    def with_order(self, kind: str) -> "Ring":
        return Ring(self.variables, self.field, kind, self.quotient)

    def quotient_polys(self) -> list["Polynomial"]:
        return [Polynomial(self, dict(t)) for t in self.quotient]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.variables.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("monomial length mismatch")
        coeff %= self.p
        return Polynomial(self, {exps: coeff} if coeff else {})

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise RingMismatch("polynomial from another ring")
            return x
        if isinstance(x, int):
            return self.const(x)
        if isinstance(x, str):
            return parse_poly(x, self)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def __repr__(self):
        q = f"/({len(self.quotient)} gens)" if self.quotient else ""
        return f"F_{self.p}[{','.join(self.variables)}]{q}"


def add_terms(a: dict, b: dict, p: int, scale: int = 1) -> dict:
    """Return a + scale*b on raw term dicts."""
    out = dict(a)
    for m, c in b.items():
        v = (out.get(m, 0) + scale * c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def mul_terms(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = (out.get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


class Polynomial:
    """Immutable multivariate polynomial over F_p."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, add_terms(self.terms, other.terms, self.ring.p))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, add_terms(self.terms, other.terms, self.ring.p, -1))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, mul_terms(self.terms, other.terms, self.ring.p))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: a * c % p for m, a in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self):
        if not self.terms:
            return None
        return max(self.terms, key=self.ring.order.key)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"Polynomial({render_poly(self)!r})"


def poly_arith(kind: str, a: Polynomial, b) -> Polynomial:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "scale":
        if not isinstance(b, int):
            raise TypeError("scale takes an integer")
        return a.scale(b)
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def _render_monomial(ring: Ring, e) -> str:
    parts = []
    for name, k in zip(ring.variables, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def render_poly(f: Polynomial) -> str:
    """Render with symmetric coefficients so that parse(render(f)) == f."""
    if not f.terms:
        return "0"
    out = []
    for m, c in f.sorted_terms():
        c = f.ring.field.signed(c)
        mono = _render_monomial(f.ring, m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    """Recursive descent over ``+ - * ^ ( )``, integers and declared variables."""

    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.toks.append(("int", m.group(1), start))
            elif m.group(2):
                self.toks.append(("name", m.group(2), start))
            else:
                ch = m.group(3)
                if ch not in "+-*^()":
                    raise InputError(f"unexpected character {ch!r} at position {start}", position=start)
                self.toks.append((ch, ch, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise InputError(f"expected {kind!r} at position {tok[2]}, found {tok[1] or 'end of input'!r}",
                             position=tok[2])
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.toks:
            raise InputError("empty polynomial expression", position=0)
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise InputError(f"unexpected {tok[1]!r} at position {tok[2]}", position=tok[2])
        return out

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in "+-" and self.peek()[0] != "end":
            sign = -1 if self.take()[0] == "-" else 1
        out = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> Polynomial:
        out = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "*":
                self.take()
                out = out * self.factor()
            elif tok[0] in ("int", "name", "("):
                raise InputError(f"implicit multiplication at position {tok[2]}; write '*'", position=tok[2])
            else:
                return out

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            base = base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return self.ring.const(int(tok[1]))
        if tok[0] == "name":
            self.take()
            if tok[1] not in self.ring.variables:
                raise InputError(f"unknown variable {tok[1]!r} at position {tok[2]}", position=tok[2])
            return self.ring.var(tok[1])
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if tok[0] == "-":
            self.take()
            return -self.factor()
        raise InputError(f"unexpected {tok[1] or 'end of input'!r} at position {tok[2]}", position=tok[2])


def parse_poly(text: str, ring: Ring) -> Polynomial:
    return _Parser(text, ring).parse()
