"""Sparse polynomials and a small expression parser.

Monomials are exponent tuples over an ordered variable list.  The term
order is graded, and within a degree ``u > v`` iff the first nonzero
entry of ``u - v`` is negative (a reverse-lexicographic comparison).  With
variables ``x1..xn`` this makes ``xn`` the largest linear form, so the
leading term of ``x1*x3 + x2*x3`` is ``x2*x3``.

Grammar accepted by :func:`parse`::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" exponent)?
    atom   := number | name | "(" expr ")"

Exponents are integer expressions over literals and integer parameters
(``a^(i-q)``); negative exponents are only allowed on scalars.  The name
``a`` denotes the configured unit alpha.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .scalar import Field, FieldError, InvalidUnitError

Exponent = tuple  # tuple[int, ...]


class ParseError(ValueError):
    """Malformed or unsupported input; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.message = message
        self.pos = pos
        self.text = text
        where = "" if pos is None else f" at position {pos}"
        super().__init__(f"{message}{where}")


class UnknownIdentifierError(ParseError):
    pass


class NotHomogeneousError(ParseError):
    pass


class _Any:
    """Marker: the zero polynomial is homogeneous of every degree."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ANY"


ANY = _Any()


def order_key(exp: Sequence[int]):
    """Ascending sort key of the term order."""
    return (sum(exp), tuple(-e for e in exp))


def monomials_of_degree(n: int, d: int) -> list[tuple]:
    """All exponent vectors of total degree ``d``, in descending term order."""
    out: list[tuple] = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e, slots - 1)

    if n == 0:
        return [()] if d == 0 else []
    rec((), d, n)
    out.sort(key=order_key, reverse=True)
    return out


def monomial_str(exp: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, name in zip(exp, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


class Polynomial:
    """Immutable sparse polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("field", "names", "terms")

    def __init__(self, field: Field, names: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.field = field
        self.names = tuple(names)
        clean = {}
        for exp, c in (terms or {}).items():
            c = field(c)
            if not field.is_zero(c):
                exp = tuple(int(e) for e in exp)
                if len(exp) != len(self.names) or min(exp, default=0) < 0:
                    raise ValueError(f"bad exponent vector {exp}")
                clean[exp] = c
        # canonical order: leading (largest) term first
        self.terms = dict(sorted(clean.items(), key=lambda kv: order_key(kv[0]), reverse=True))

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, field, names, c):
        return cls(field, names, {(0,) * len(names): c})

    @classmethod
    def variable(cls, field, names, i):
        exp = [0] * len(names)
        exp[i] = 1
        return cls(field, names, {tuple(exp): 1})

    @classmethod
    def monomial(cls, field, names, exp, c=1):
        return cls(field, names, {tuple(exp): c})

    # -- queries ---------------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def leading(self):
        """(exponent, coefficient) of the leading term; None for zero."""
        if not self.terms:
            return None
        exp = next(iter(self.terms))
        return exp, self.terms[exp]

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self):
        """Degree if homogeneous, ``ANY`` for zero, ``None`` otherwise."""
        degs = self.degrees()
        if not degs:
            return ANY
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- arithmetic ------------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.names != self.names or other.field != self.field:
                raise ValueError("polynomials over different rings")
            return other
        return Polynomial.constant(self.field, self.names, other)

    def __add__(self, other):
        other = self._check(other)
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = f.add(out[e], c) if e in out else c
        return Polynomial(f, self.names, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial(f, self.names, {e: f.sub(f.zero, c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        f = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = f.mul(c1, c2)
                out[e] = f.add(out[e], prod) if e in out else prod
        return Polynomial(f, self.names, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_constant() or self.is_zero():
                raise ValueError("negative powers need a nonzero scalar base")
            return Polynomial.constant(self.field, self.names, self.field.pow(self.constant_term(), n))
        out = Polynomial.constant(self.field, self.names, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c):
        return self * Polynomial.constant(self.field, self.names, c)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self._check(other)
            except (ValueError, FieldError, TypeError):
                return NotImplemented
        return self.names == other.names and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, tuple(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({serialize(self)!r})"

    def __str__(self):
        return serialize(self)


def serialize(p: Polynomial) -> str:
    """Canonical text: leading term first, ``*`` between factors."""
    if p.is_zero():
        return "0"
    f = p.field
    chunks = []
    for exp, c in p.terms.items():
        neg = False
        if f.kind == "Q" and c < 0:
            neg, c = True, -c
        mono = monomial_str(exp, p.names)
        if c == 1:
            body = mono
        else:
            cs = f.format(c)
            body = cs if mono == "1" else f"{cs}*{mono}"
        if not chunks:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append(("- " if neg else "+ ") + body)
    return " ".join(chunks)


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass
class _Tok:
    kind: str  # "num", "name", "op", "end"
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace
            break
        if m.group(1) is not None:
            toks.append(_Tok("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            toks.append(_Tok("op", ch, m.start(3)))
        else:
            break
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, names, field, alpha, params):
        self.text = text
        self.names = tuple(names)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.field = field
        self.alpha = alpha
        self.params = dict(params or {})
        self.toks = _tokenize(text)
        self.k = 0

    # helpers
    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, value):
        t = self.take()
        if t.kind != "op" or t.value != value:
            raise ParseError(f"expected {value!r}", t.pos, self.text)
        return t

    def const(self, c):
        return Polynomial.constant(self.field, self.names, c)

    # grammar
    def parse(self):
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0, self.text)
        out = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.value!r}", t.pos, self.text)
        return out

    def expr(self):
        out = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "+-":
                self.take()
                rhs = self.term()
                out = out + rhs if t.value == "+" else out - rhs
            else:
                return out

    def term(self):
        out = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.take()
                out = out * self.unary()
            elif t.kind == "op" and t.value == "/":
                self.take()
                rhs = self.unary()
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by nonzero constants", t.pos, self.text)
                try:
                    out = out.scale(self.field.inv(rhs.constant_term()))
                except InvalidUnitError as exc:
                    raise ParseError(str(exc), t.pos, self.text) from exc
            else:
                return out

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.value in "+-":
            self.take()
            inner = self.unary()
            return inner if t.value == "+" else -inner
        return self.power()

    def power(self):
        base_tok = self.peek()
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.value == "^":
            self.take()
            n = self.int_unary()
            if n < 0 and not base.is_constant():
                raise ParseError("negative exponent on a non-scalar", t.pos, self.text)
            if n < 0 and base.is_zero():
                raise ParseError("zero raised to a negative power", base_tok.pos, self.text)
            return base ** n
        return base

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return self.const(int(t.value))
        if t.kind == "name":
            if t.value in self.index:
                return Polynomial.variable(self.field, self.names, self.index[t.value])
            if t.value == "a":
                if self.alpha is None:
                    raise UnknownIdentifierError("symbol 'a' used but no alpha configured", t.pos, self.text)
                return self.const(self.alpha)
            if t.value in self.params:
                return self.const(int(self.params[t.value]))
            raise UnknownIdentifierError(f"unknown identifier {t.value!r}", t.pos, self.text)
        if t.kind == "op" and t.value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        what = "end of input" if t.kind == "end" else repr(t.value)
        raise ParseError(f"unexpected {what}", t.pos, self.text)

    # integer sub-language for exponents
    def int_unary(self):
        t = self.peek()
        if t.kind == "op" and t.value in "+-":
            self.take()
            v = self.int_unary()
            return v if t.value == "+" else -v
        t = self.take()
        if t.kind == "num":
            return int(t.value)
        if t.kind == "name":
            if t.value in self.params:
                return int(self.params[t.value])
            raise UnknownIdentifierError(f"unknown integer parameter {t.value!r}", t.pos, self.text)
        if t.kind == "op" and t.value == "(":
            v = self.int_expr()
            self.expect(")")
            return v
        raise ParseError("expected an integer exponent", t.pos, self.text)

    def int_expr(self):
        v = self.int_term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "+-":
                self.take()
                w = self.int_term()
                v = v + w if t.value == "+" else v - w
            else:
                return v

    def int_term(self):
        v = self.int_unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.take()
                v = v * self.int_unary()
            else:
                return v


def parse(expr: str, names: Sequence[str], field: Field, alpha=None,
          params: Mapping[str, int] | None = None, homogeneous: bool = False) -> Polynomial:
    """Parse ``expr`` over the variables ``names``.

    ``alpha`` (a field element) is bound to the symbol ``a``; ``params``
    binds integer names usable in exponents.  With ``homogeneous=True`` a
    non-homogeneous result raises :class:`NotHomogeneousError`.
    """
    if not isinstance(expr, str):
        raise ParseError("expression must be a string")
    if alpha is not None:
        alpha = field(alpha)
    clash = set(names) & ({"a"} | set(params or {}))
    if clash:
        raise ParseError(f"names clash with reserved symbols: {sorted(clash)}")
    try:
        poly = _Parser(expr, names, field, alpha, params).parse()
    except FieldError as exc:
        raise ParseError(str(exc), None, expr) from exc
    if homogeneous and poly.is_homogeneous() is None:
        raise NotHomogeneousError(f"{expr!r} is not homogeneous", 0, expr)
    return poly


def is_homogeneous(p: Polynomial):
    return p.is_homogeneous()


def parse_many(exprs: Iterable[str], names, field, alpha=None, params=None, homogeneous=True):
    return [parse(e, names, field, alpha, params, homogeneous) for e in exprs]
