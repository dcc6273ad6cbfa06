"""Finite-dimensional standard graded algebras k[x_1..x_n]/I.

Each graded piece of the ideal is spanned by the products ``g*m`` of the
relations with monomials of complementary degree.  Row reducing that span
with columns in descending term order makes the pivots the leading
monomials; the remaining (standard) monomials form the basis of the
quotient in that degree, and the reduced rows give normal forms of the
leading monomials.  Construction stops at the first degree that vanishes.

Besides the standard grading the algebra records its finest grading by
exponent classes: the lattice spanned by differences of the exponent
vectors inside each relation.  Modules that respect it (the residue field,
monomial quotients) can be resolved blockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from .polyparse import (ANY, NotHomogeneousError, Polynomial, monomial_str,
                        monomials_of_degree, parse)
from .scalar import Field, InvalidUnitError

DEFAULT_CAP = 10


class CapExceededError(RuntimeError):
    """The quotient did not vanish by the configured degree cap."""


class PresentationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exponent lattices (for the fine grading)


class ExponentLattice:
    """Sublattice of Z^n in Hermite normal form; ``reduce`` is canonical."""

    def __init__(self, n: int, generators: Sequence[Sequence[int]]):
        self.n = n
        rows = [list(map(int, g)) for g in generators if any(g)]
        self.rows = _hermite(rows, n)

    def reduce(self, v: Sequence[int]) -> tuple:
        v = list(map(int, v))
        for row in self.rows:
            c = next(j for j, x in enumerate(row) if x)
            q = v[c] // row[c]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def add(self, a, b) -> tuple:
        return self.reduce([x + y for x, y in zip(a, b)])

    @property
    def rank(self) -> int:
        return len(self.rows)


def _hermite(rows: list[list[int]], n: int) -> list[list[int]]:
    """Integer row echelon form with positive pivots and reduced entries above."""
    rows = [r[:] for r in rows]
    out: list[list[int]] = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            col += 1
            continue
        # Euclid on column ``col`` until one row is left there
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                (nxt if r[col] != 0 else rest).append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    # reduce entries above each pivot into [0, pivot)
    for i in range(len(out)):
        c = next(j for j, x in enumerate(out[i]) if x)
        for k in range(i):
            q = out[k][c] // out[i][c]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


# ---------------------------------------------------------------------------


@dataclass
class AlgebraPresentation:
    field: Field
    variables: tuple
    relations: list  # list[Polynomial]
    alpha: object = None
    cap: int = DEFAULT_CAP
    name: str = "R"

    def __post_init__(self):
        self.variables = tuple(self.variables)
        if len(set(self.variables)) != len(self.variables):
            raise PresentationError("variable names must be distinct")
        if self.cap < 1:
            raise PresentationError("degree cap must be at least 1")
        for k, r in enumerate(self.relations):
            if r.names != self.variables:
                raise PresentationError(f"relation {k} uses a different variable list")
            deg = r.is_homogeneous()
            if deg is None:
                raise NotHomogeneousError(f"relation {k} ({r}) is not homogeneous", None, str(r))
            if deg is not ANY and deg < 2:
                raise PresentationError(f"relation {k} ({r}) has degree {deg}; relations must have degree >= 2")

    @classmethod
    def from_strings(cls, field: Field, variables, relations: Sequence[str], alpha=None,
                     cap=DEFAULT_CAP, name="R"):
        if alpha is not None:
            alpha = field(alpha)
            if field.is_zero(alpha):
                raise InvalidUnitError("alpha must be a nonzero element")
        polys = [parse(r, variables, field, alpha=alpha, homogeneous=True) for r in relations]
        return cls(field, tuple(variables), polys, alpha, cap, name)

    def quotient_by_variables(self, drop: Sequence[str], name: str | None = None) -> "AlgebraPresentation":
        """Presentation of R/(drop): set those variables to zero and forget them."""
        drop_idx = [self.variables.index(v) for v in drop]
        keep = [i for i in range(len(self.variables)) if i not in drop_idx]
        names = tuple(self.variables[i] for i in keep)
        rels = []
        for r in self.relations:
            terms = {}
            for exp, c in r.terms.items():
                if any(exp[i] for i in drop_idx):
                    continue
                terms[tuple(exp[i] for i in keep)] = c
            q = Polynomial(self.field, names, terms)
            if not q.is_zero():
                rels.append(q)
        return AlgebraPresentation(self.field, names, rels, self.alpha, self.cap, name or f"{self.name}/({','.join(drop)})")


class GradedAlgebra:
    """R = k[x]/I realized degreewise.

    Attributes
    ----------
    basis : list of lists of exponent tuples, one list per degree
    hilbert : list of ints (h_0 .. h_top)
    offsets : start of each degree in the global basis numbering
    table : (dim, dim, dim) array; ``table[i, j]`` is the product of basis i and j
    mult : ``mult[l][c]`` is the (h_{c+1} x h_c) matrix of x_l: R_c -> R_{c+1}
    """

    def __init__(self, pres: AlgebraPresentation):
        self.presentation = pres
        self.field = pres.field
        self.names = pres.variables
        self.nvars = len(self.names)
        self.alpha = pres.alpha
        self.name = pres.name
        self._build()

    # -- construction ------------------------------------------------------------
    def _build(self):
        f = self.field
        n = self.nvars
        rels = [r for r in self.presentation.relations if not r.is_zero()]
        self._slice_ranks = [0]
        self.basis: list[list[tuple]] = [[(0,) * n]]
        self._nf: dict[tuple, dict[tuple, object]] = {(0,) * n: {(0,) * n: f.one}}
        top = 0
        for d in range(1, self.presentation.cap + 1):
            monos = monomials_of_degree(n, d)
            col = {m: j for j, m in enumerate(monos)}
            rows = []
            for g in rels:
                e = g.is_homogeneous()
                if e is ANY or e > d:
                    continue
                for m in monomials_of_degree(n, d - e):
                    row = f.zeros(len(monos))
                    for exp, c in g.terms.items():
                        row[col[tuple(a + b for a, b in zip(exp, m))]] = c
                    rows.append(row)
            if rows:
                r, piv = f.rref(np.array(rows, dtype=f.dtype) if f.kind == "Fp" else _stack(rows))
            else:
                r, piv = f.zeros((0, len(monos))), np.zeros(0, dtype=np.int64)
            self._slice_ranks.append(len(piv))
            pivset = set(int(p) for p in piv)
            std = [monos[j] for j in range(len(monos)) if j not in pivset]
            free = [j for j in range(len(monos)) if j not in pivset]
            for m in std:
                self._nf[m] = {m: f.one}
            for k, p in enumerate(piv):
                nf = {}
                for j in free:
                    c = r[k, j]
                    if not f.is_zero(c):
                        nf[monos[j]] = f.sub(f.zero, c)
                self._nf[monos[int(p)]] = nf
            if not std:
                break
            self.basis.append(std)
            top = d
        else:
            raise CapExceededError(
                f"quotient has nonzero component in degree {self.presentation.cap}; raise the cap")
        self.top = top
        self.hilbert = [len(b) for b in self.basis]
        self.offsets = [0]
        for h in self.hilbert:
            self.offsets.append(self.offsets[-1] + h)
        self.dim = self.offsets[-1]
        self.monomials = [m for b in self.basis for m in b]
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.degree_of = np.array([sum(m) for m in self.monomials], dtype=np.int64)
        self._build_tables()
        self._build_grading()

    def _build_tables(self):
        f = self.field
        dim = self.dim
        t = f.zeros((dim, dim, dim))
        for i, u in enumerate(self.monomials):
            for j, v in enumerate(self.monomials):
                w = tuple(a + b for a, b in zip(u, v))
                if sum(w) > self.top:
                    continue
                for mono, c in self._nf[w].items():
                    t[i, j, self.index[mono]] = c
        self.table = t
        self.mult = []
        self.var_index = []
        for l in range(self.nvars):
            e = [0] * self.nvars
            e[l] = 1
            vi = self.index.get(tuple(e))
            if vi is None:
                raise PresentationError(f"variable {self.names[l]} is not a basis element")
            self.var_index.append(vi)
            per = []
            for c in range(self.top + 1):
                lo, hi = self.offsets[c], self.offsets[c + 1]
                if c + 1 <= self.top:
                    lo2, hi2 = self.offsets[c + 1], self.offsets[c + 2]
                    per.append(t[vi, lo:hi, lo2:hi2].T.copy())
                else:
                    per.append(f.zeros((0, hi - lo)))
            self.mult.append(per)
        # parent path: basis monomial = x_l * (basis monomial of one degree less)
        self.parent = [None] * dim
        for i, m in enumerate(self.monomials):
            if sum(m) == 0:
                continue
            l = next(k for k, e in enumerate(m) if e)
            prev = list(m)
            prev[l] -= 1
            self.parent[i] = (l, self.index[tuple(prev)])

    def _build_grading(self):
        diffs = []
        for r in self.presentation.relations:
            exps = list(r.terms)
            for e in exps[1:]:
                diffs.append([a - b for a, b in zip(e, exps[0])])
        self.lattice = ExponentLattice(self.nvars, diffs)
        self.basis_weight = [self.lattice.reduce(m) for m in self.monomials]
        self.var_weight = [self.lattice.reduce([1 if k == l else 0 for k in range(self.nvars)])
                           for l in range(self.nvars)]

    # -- basic queries -------------------------------------------------------------
    def degree_slice(self, d: int) -> slice:
        if d < 0 or d > self.top:
            return slice(0, 0)
        return slice(self.offsets[d], self.offsets[d + 1])

    def h(self, d: int) -> int:
        return self.hilbert[d] if 0 <= d <= self.top else 0

    def basis_names(self) -> list[str]:
        return [monomial_str(m, self.names) for m in self.monomials]

    def normal_form(self, exp) -> dict:
        exp = tuple(exp)
        if sum(exp) > self.top:
            return {}
        return dict(self._nf[exp])

    def weight(self, exp) -> tuple:
        return self.lattice.reduce(exp)

    def _ideal_slice_rank(self, d: int) -> int:
        return self._slice_ranks[d] if d < len(self._slice_ranks) else 0

    # -- elements ------------------------------------------------------------------
    def zero(self):
        return self.field.zeros(self.dim)

    def one(self):
        v = self.zero()
        v[0] = self.field.one
        return v

    def var(self, l):
        if isinstance(l, str):
            l = self.names.index(l)
        v = self.zero()
        v[self.var_index[l]] = self.field.one
        return v

    def element(self, poly) -> np.ndarray:
        """Coordinate vector of a polynomial (or polynomial text)."""
        if isinstance(poly, str):
            poly = parse(poly, self.names, self.field, alpha=self.alpha)
        f = self.field
        v = self.zero()
        for exp, c in poly.terms.items():
            for mono, c2 in self.normal_form(exp).items():
                i = self.index[mono]
                v[i] = f.add(v[i], f.mul(c, c2))
        return v

    def element_degree(self, v):
        """Degree of a homogeneous element, ANY for zero, None if mixed."""
        nz = np.flatnonzero(v != 0)
        if nz.size == 0:
            return ANY
        degs = set(int(d) for d in self.degree_of[nz])
        return degs.pop() if len(degs) == 1 else None

    def to_polynomial(self, v) -> Polynomial:
        return Polynomial(self.field, self.names,
                          {self.monomials[i]: v[i] for i in np.flatnonzero(v != 0)})

    def multiply(self, u, v):
        f = self.field
        if f.kind == "Fp":
            out = np.einsum("i,j,ijk->k", u, v, self.table) % f.p
            return out.astype(np.int64)
        return np.tensordot(np.tensordot(u, self.table, axes=(0, 0)), v, axes=(0, 0))

    def mult_matrix(self, v) -> np.ndarray:
        """Matrix M with M @ y = v*y (column convention)."""
        f = self.field
        m = np.tensordot(v, self.table, axes=(0, 0)).T
        if f.kind == "Fp":
            return (m % f.p).astype(np.int64)
        return m

    @cached_property
    def basis_mult_matrices(self) -> list:
        """Matrices of multiplication by each basis element."""
        return [self.table[t].T.copy() for t in range(self.dim)]

    def variable_matrix(self, l) -> np.ndarray:
        return self.basis_mult_matrices[self.var_index[l]]

    # -- structure -------------------------------------------------------------------
    def socle_dims(self) -> list[int]:
        f = self.field
        out = []
        for c in range(self.top + 1):
            h = self.hilbert[c]
            if c == self.top:
                out.append(h)
                continue
            stack = np.concatenate([self.mult[l][c] for l in range(self.nvars)], axis=0)
            out.append(h - f.rank(stack))
        return out

    def is_gorenstein_artinian(self) -> bool:
        return sum(self.socle_dims()) == 1

    def check_basis(self, expected) -> bool:
        """True iff the given monomials (or polynomial strings) form a basis."""
        vecs = []
        for m in expected:
            if isinstance(m, str):
                vecs.append(self.element(m))
            elif isinstance(m, Polynomial):
                vecs.append(self.element(m))
            else:
                vecs.append(self.element(Polynomial.monomial(self.field, self.names, m)))
        if len(vecs) != self.dim:
            return False
        mat = _stack(vecs) if self.field.kind == "Q" else np.array(vecs, dtype=np.int64)
        return self.field.rank(mat) == self.dim

    def relations_vanish(self) -> bool:
        return all(not np.any(self.element(r) != 0) for r in self.presentation.relations)

    def quotient_by_variables(self, drop, name=None) -> "GradedAlgebra":
        return GradedAlgebra(self.presentation.quotient_by_variables(drop, name))

    def projection_to(self, other: "GradedAlgebra") -> np.ndarray:
        """Matrix of the surjection R -> other setting the missing variables to 0."""
        keep = [self.names.index(v) for v in other.names]
        f = self.field
        p = f.zeros((other.dim, self.dim))
        for i, m in enumerate(self.monomials):
            if any(m[k] for k in range(self.nvars) if k not in keep):
                continue
            sub = tuple(m[k] for k in keep)
            for mono, c in other.normal_form(sub).items():
                p[other.index[mono], i] = c
        return p

    def summary(self) -> dict:
        return {
            "dim": self.dim,
            "hilbert": list(self.hilbert),
            "socle": self.socle_dims(),
            "gorenstein": self.is_gorenstein_artinian(),
        }

    def __repr__(self):
        return f"GradedAlgebra({self.name}, hilbert={self.hilbert}, field={self.field})"


def _stack(rows):
    return np.array([list(r) for r in rows], dtype=object)


def build_algebra(pres: AlgebraPresentation) -> GradedAlgebra:
    return GradedAlgebra(pres)


def multiply(alg: GradedAlgebra, u, v):
    return alg.multiply(u, v)


def check_basis(alg: GradedAlgebra, expected) -> bool:
    return alg.check_basis(expected)


def socle_of_algebra(alg: GradedAlgebra) -> list[int]:
    return alg.socle_dims()


def is_gorenstein_artinian(alg: GradedAlgebra) -> bool:
    return alg.is_gorenstein_artinian()


def leading_term_hilbert(alg: GradedAlgebra) -> list[int]:
    """Hilbert function of k[x]/(leading terms of the given relations).

    It agrees with ``alg.hilbert`` exactly when the relations are a
    Groebner basis for the term order in use.
    """
    n = alg.nvars
    leads = [r.leading()[0] for r in alg.presentation.relations if not r.is_zero()]
    out = []
    for d in range(0, alg.presentation.cap + 1):
        cnt = 0
        for m in monomials_of_degree(n, d):
            if not any(all(a >= b for a, b in zip(m, l)) for l in leads):
                cnt += 1
        if cnt == 0:
            break
        out.append(cnt)
    return out
