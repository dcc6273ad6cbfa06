"""Exact fields and dense linear algebra.

Two fields are supported: the rationals (elements are ``gmpy2.mpq``,
matrices are numpy object arrays) and prime fields F_p (elements are
Python ints in ``[0, p)``, matrices are ``int64`` arrays).  Nothing here
ever rounds.

Row reduction is deterministic: columns are scanned left to right and the
first row (top-down) with a nonzero entry becomes the pivot row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import gmpy2
import numpy as np

from . import kernels


class InvalidUnitError(ValueError):
    """Raised when a zero element is used where a unit is required."""


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Common surface of :class:`Rationals` and :class:`PrimeField`."""

    kind: str
    characteristic: int
    dtype: Any

    # -- scalars -----------------------------------------------------------
    zero: Any
    one: Any

    def __call__(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inv(x), -n)
        return self(x) ** n if self.kind == "Q" else pow(int(x), n, self.characteristic)

    def is_zero(self, x) -> bool:
        return x == 0

    # -- arrays ------------------------------------------------------------
    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def scale(self, c, a):
        raise NotImplementedError

    def mul(self, x, y):
        """Product of two scalars."""
        raise NotImplementedError

    def neg(self, a):
        return self.sub(self.zeros(a.shape), a)

    def kron(self, a, b):
        raise NotImplementedError

    def is_zero_array(self, a) -> bool:
        return not np.any(a != 0)

    # -- elimination ---------------------------------------------------------
    def rref(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (echelon rows, pivot columns); rank is ``len(pivots)``."""
        raise NotImplementedError

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def kernel(self, a: np.ndarray) -> np.ndarray:
        """Columns spanning ker(a): the standard basis read off the RREF."""
        n = a.shape[1]
        if a.shape[0] == 0:
            return self.eye(n)
        r, piv = self.rref(a)
        free = np.setdiff1d(np.arange(n), piv)
        k = self.zeros((n, len(free)))
        for t, f in enumerate(free):
            k[f, t] = self.one
        if len(piv) and len(free):
            k[piv, :] = self.neg(r[:, free])
        return k

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One solution x of a @ x = b (b a matrix of right-hand sides), or None."""
        m, n = a.shape
        aug = np.concatenate([a, b], axis=1) if m else self.zeros((0, n + b.shape[1]))
        r, piv = self.rref(aug)
        if np.any(piv >= n):
            return None
        x = self.zeros((n, b.shape[1]))
        if len(piv):
            x[piv, :] = r[:, n:]
        return x

    # -- serialization -------------------------------------------------------
    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Rationals(Field):
    kind: str = "Q"
    characteristic: int = 0

    dtype = object
    zero = gmpy2.mpq(0)
    one = gmpy2.mpq(1)

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return gmpy2.mpq(x.numerator, x.denominator)
        if isinstance(x, (bool, np.bool_)):
            raise FieldError("booleans are not field elements")
        if isinstance(x, (np.integer,)):
            x = int(x)
        return gmpy2.mpq(x)

    def inv(self, x):
        x = self(x)
        if x == 0:
            raise InvalidUnitError("zero has no inverse")
        return 1 / x

    def pow(self, x, n: int):
        x = self(x)
        if n < 0:
            return self.inv(x) ** (-n)
        return x ** n

    def zeros(self, shape):
        return np.full(shape, self.zero, dtype=object)

    def array(self, data):
        arr = np.array(data, dtype=object)
        if arr.size:
            flat = arr.reshape(-1)
            for i, x in enumerate(flat):
                flat[i] = self(x)
        return arr

    def matmul(self, a, b):
        if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
            return self.zeros((a.shape[0], b.shape[1]))
        return a.dot(b)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def scale(self, c, a):
        return a * self(c)

    def mul(self, x, y):
        return self(x) * self(y)

    def kron(self, a, b):
        if a.size == 0 or b.size == 0:
            return self.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
        return np.kron(a, b)

    def rref(self, a):
        if a.size and a.dtype != object:
            a = self.array(a)
        a = a.copy()
        m, n = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(n):
            if r == m:
                break
            nz = np.flatnonzero(a[r:, c] != 0)
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            a[r, c:] = a[r, c:] / a[r, c]
            col = a[:, c].copy()
            col[r] = self.zero
            idx = np.flatnonzero(col != 0)
            if idx.size:
                a[idx, c:] = a[idx, c:] - np.outer(col[idx], a[r, c:])
            pivots.append(c)
            r += 1
        return a[:r], np.asarray(pivots, dtype=np.int64)

    def parse(self, text: str):
        s = str(text).strip()
        try:
            return gmpy2.mpq(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"not a rational literal: {text!r}") from exc

    def format(self, x) -> str:
        x = self(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def to_spec(self):
        return {"kind": "Q"}

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField(Field):
    p: int = 2
    kind: str = "Fp"

    dtype = np.int64
    zero = 0
    one = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.p >= kernels.MAX_PRIME:
            raise FieldError(f"prime {self.p} too large (need p < 2**31)")

    @property
    def characteristic(self):  # type: ignore[override]
        return self.p

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (Fraction, type(gmpy2.mpq(0)))):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise FieldError(f"denominator of {x} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        if isinstance(x, (bool, np.bool_)):
            raise FieldError("booleans are not field elements")
        return int(x) % self.p

    def inv(self, x):
        x = self(x)
        if x == 0:
            raise InvalidUnitError("zero has no inverse")
        return pow(x, -1, self.p)

    def pow(self, x, n: int):
        x = self(x)
        if n < 0:
            return pow(self.inv(x), -n, self.p)
        return pow(x, n, self.p)

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def array(self, data):
        arr = np.array(data, dtype=object)
        if arr.size == 0:
            return np.zeros(arr.shape, dtype=np.int64)
        flat = arr.reshape(-1)
        for i, x in enumerate(flat):
            flat[i] = self(x)
        return arr.astype(np.int64)

    def matmul(self, a, b):
        return kernels.matmul_modp(a, b, self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def scale(self, c, a):
        return (a * self(c)) % self.p

    def mul(self, x, y):
        return self(x) * self(y) % self.p

    def kron(self, a, b):
        return np.kron(a, b) % self.p

    # above this many entries the blocked (matmul-driven) elimination wins
    blocked_threshold = 250_000

    def rref(self, a):
        a = np.array(a, dtype=np.int64) % self.p
        if a.size > self.blocked_threshold and min(a.shape) > RowBasis.block:
            # the reduced echelon form is unique, so both paths agree exactly
            rb = RowBasis(self, a.shape[1])
            rb.insert(a)
            return rb.echelon()
        r, piv = kernels.rref_modp(a, self.p)
        return a[:r], piv

    def parse(self, text: str):
        s = str(text).strip()
        try:
            return self(gmpy2.mpq(s))
        except ValueError as exc:
            raise FieldError(f"not a literal of F_{self.p}: {text!r}") from exc

    def format(self, x) -> str:
        return str(self(x))

    def to_spec(self):
        return {"kind": "Fp", "p": self.p}

    def __str__(self):
        return f"F_{self.p}"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p=p)


def field_from_spec(spec: dict | str) -> Field:
    """Build a field from ``{"kind": "Q"}`` / ``{"kind": "Fp", "p": 5}`` or "Q"/"F5"."""
    if isinstance(spec, str):
        s = spec.strip()
        if s.upper() in ("Q", "QQ"):
            return QQ
        for prefix in ("Fp:", "F_", "GF", "F"):
            if s.startswith(prefix):
                body = s[len(prefix):].strip("()")
                if body.isdigit():
                    return GF(int(body))
        raise FieldError(f"unknown field {spec!r}")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise FieldError("field spec must be an object with a 'kind'")
    kind = spec["kind"]
    if kind == "Q":
        return QQ
    if kind == "Fp":
        if "p" not in spec or not isinstance(spec["p"], int):
            raise FieldError("prime field spec needs an integer 'p'")
        return GF(spec["p"])
    raise FieldError(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# module-level conveniences


def rref(m: np.ndarray, field: Field):
    """(rank, pivot columns, echelon form) of ``m``."""
    if m.size == 0:
        return 0, np.zeros(0, dtype=np.int64), field.zeros((0, m.shape[1]))
    r, piv = field.rref(m)
    return len(piv), piv, r


def rank(m: np.ndarray, field: Field) -> int:
    return field.rank(m)


def kernel_basis(m: np.ndarray, field: Field) -> np.ndarray:
    return field.kernel(m)


def solve(a: np.ndarray, b: np.ndarray, field: Field):
    return field.solve(a, b)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def order_of_unit(alpha, field: Field) -> int:
    """Multiplicative order of ``alpha``; 0 encodes infinite order."""
    a = field(alpha)
    if field.is_zero(a):
        raise InvalidUnitError("0 is not a unit")
    if field.kind == "Q":
        if a == 1:
            return 1
        if a == -1:
            return 2
        return 0
    p = field.characteristic
    for d in _divisors(p - 1):
        if pow(a, d, p) == 1:
            return d
    raise AssertionError("unreachable: Fermat")  # pragma: no cover


class RowBasis:
    """Incrementally grown echelon basis of a subspace of ``field**n``.

    ``insert`` reports, row by row, whether a candidate enlarged the span
    (so the flagged rows are the greedy, left-to-right independent subset);
    ``reduce`` returns canonical remainders, zero in every pivot column.

    Over F_p the basis is a list of blocks.  Each block is in reduced
    echelon form internally and vanishes at the pivots of all earlier
    blocks, so reducing a batch of vectors is one matrix product per block.
    When ``n * (p-1)**2`` stays below 2**53 those products run in float64
    BLAS with a single remainder at the end, which is exact.
    """

    block = 128
    max_blocks = 24

    def __init__(self, field: Field, n: int, capacity: int | None = None):
        self.field = field
        self.n = n
        self.rank = 0
        self._blocks: list[tuple[np.ndarray, np.ndarray]] = []
        self._float = field.kind == "Fp" and n * (field.p - 1) ** 2 + field.p < kernels.FLOAT_EXACT

    # -- views -------------------------------------------------------------
    @property
    def pivots(self) -> np.ndarray:
        if not self._blocks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([piv for _, piv in self._blocks])

    def rows(self) -> np.ndarray:
        """Basis rows in insertion order, fully reduced."""
        self._consolidate()
        if not self._blocks:
            return self.field.zeros((0, self.n))
        return self._as_field(self._blocks[0][0])

    def echelon(self) -> tuple[np.ndarray, np.ndarray]:
        """The basis as a proper RREF: (rows sorted by pivot, pivots)."""
        rows = self.rows()
        piv = self.pivots
        order = np.argsort(piv, kind="stable")
        return rows[order].copy(), piv[order].copy()

    def _as_field(self, b):
        if self._float:
            return b.astype(np.int64)
        return b

    # -- reduction ---------------------------------------------------------
    def reduce(self, rows: np.ndarray) -> np.ndarray:
        """Remainders of ``rows`` modulo the current span."""
        f = self.field
        if f.kind == "Q":
            rows = rows.copy()
            for b, piv in self._blocks:
                rows = rows - f.matmul(rows[:, piv], b)
            return rows
        p = f.p
        if self._float:
            x = np.asarray(rows, dtype=np.float64)
            x = np.remainder(x, p)
            for b, piv in self._blocks:
                coeff = np.remainder(x[:, piv], p)
                if coeff.any():
                    x -= coeff @ b
            return np.remainder(x, p).astype(np.int64)
        x = np.asarray(rows, dtype=np.int64) % p
        for b, piv in self._blocks:
            x = (x - kernels.matmul_modp(x[:, piv], b, p)) % p
        return x

    def contains(self, rows: np.ndarray) -> np.ndarray:
        red = self.reduce(rows)
        return ~np.any(red != 0, axis=1)

    # -- growth ------------------------------------------------------------
    def insert(self, rows: np.ndarray, stop: int | None = None) -> np.ndarray:
        stop = self.n if stop is None else min(stop, self.n)
        flags = np.zeros(rows.shape[0], dtype=bool)
        if rows.shape[0] == 0 or self.rank >= stop:
            return flags
        if self.field.kind == "Fp":
            self._insert_fp(np.asarray(rows, dtype=np.int64), stop, flags)
        else:
            self._insert_q(rows, stop, flags)
        if len(self._blocks) > self.max_blocks:
            self._consolidate()
        return flags

    def _insert_fp(self, rows, stop, flags):
        p = self.field.p
        bs = self.block
        for s in range(0, rows.shape[0], bs):
            room = stop - self.rank
            if room <= 0:
                break
            x = self.reduce(rows[s:s + bs])
            cap = min(x.shape[0], room)
            local = np.zeros((cap, self.n), dtype=np.int64)
            lpiv = np.zeros(cap, dtype=np.int64)
            k, lf = kernels.insert_rows_modp(local, lpiv, 0, x, p, cap)
            if k == 0:
                continue
            flags[s:s + len(lf)] = lf
            new = local[:k]
            # within the block, go from semi-reduced to reduced echelon form
            kernels.rref_modp(new, p)
            npiv = np.argmax(new != 0, axis=1).astype(np.int64)
            self._blocks.append((new.astype(np.float64) if self._float else new, npiv))
            self.rank += k

    def _insert_q(self, rows, stop, flags):
        f = self.field
        for t in range(rows.shape[0]):
            if self.rank >= stop:
                break
            v = self.reduce(rows[t:t + 1])
            nz = np.flatnonzero(v[0] != 0)
            if nz.size == 0:
                continue
            c0 = int(nz[0])
            v = v / v[0, c0]
            self._blocks.append((v, np.array([c0], dtype=np.int64)))
            self.rank += 1
            flags[t] = True

    def _consolidate(self):
        """Merge all blocks into one fully reduced block."""
        if len(self._blocks) <= 1:
            return
        f = self.field
        pivs = [piv for _, piv in self._blocks]
        sizes = [len(piv) for piv in pivs]
        offs = np.concatenate([[0], np.cumsum(sizes)])
        m = np.concatenate([b for b, _ in self._blocks], axis=0)
        # back-substitution: clear each block's pivots from all earlier rows
        for j in range(len(pivs) - 1, 0, -1):
            lo, hi = offs[j], offs[j + 1]
            if f.kind == "Q":
                c = m[:lo, pivs[j]]
                if np.any(c != 0):
                    m[:lo] = m[:lo] - f.matmul(c, m[lo:hi])
                continue
            p = f.p
            if self._float:
                # entries stay integral and below 2**53; reduce lazily
                m[lo:hi] = np.remainder(m[lo:hi], p)
                c = np.remainder(m[:lo, pivs[j]], p)
                if c.any():
                    m[:lo] -= c @ m[lo:hi]
            else:
                c = m[:lo, pivs[j]]
                if c.any():
                    m[:lo] = (m[:lo] - kernels.matmul_modp(c, m[lo:hi], p)) % p
        if self._float:
            np.remainder(m, f.p, out=m)
        self._blocks = [(m, np.concatenate(pivs))]


def independent_columns(field: Field, vectors: np.ndarray, stop: int | None = None) -> np.ndarray:
    """Indices of the greedy (left-to-right) independent subset of columns."""
    basis = RowBasis(field, vectors.shape[0], capacity=stop)
    flags = basis.insert(vectors.T, stop)
    return np.flatnonzero(flags)


def concat_columns(field: Field, n: int, blocks: Sequence[np.ndarray]) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return field.zeros((n, 0))
    return np.concatenate(blocks, axis=1)


def as_field_array(field: Field, data: Iterable) -> np.ndarray:
    return field.array(data)
