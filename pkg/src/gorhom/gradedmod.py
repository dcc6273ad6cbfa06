"""Graded modules over a :class:`GradedAlgebra`, realized explicitly.

An :class:`ExplicitModule` is a finite sequence of vector spaces
``M_lo .. M_hi`` together with, for each variable, the action matrices
``M_d -> M_{d+1}`` (column convention: ``act[l][d-lo] @ v``).  All
constructions here (images, kernels, cokernels of maps between free
modules, quotients, sums, duals) produce such an object.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .gradedalg import GradedAlgebra
from .polyparse import ANY, Polynomial, parse


class ModuleError(ValueError):
    pass


class HomogeneityError(ModuleError):
    pass


# ---------------------------------------------------------------------------
# free modules and matrices with algebra entries


class FreeModule:
    """Direct sum of shifted copies R(-d_j), generators sorted by degree.

    Elements of the full realization are vectors of length ``rank*dim R``
    with the coordinate of ``e_j * basis_t`` at ``j*dim R + t``.
    """

    def __init__(self, alg: GradedAlgebra, degrees: Sequence[int], weights: Sequence[tuple] | None = None):
        degrees = [int(d) for d in degrees]
        if any(a > b for a, b in zip(degrees, degrees[1:])):
            raise ModuleError("generator degrees must be sorted")
        self.alg = alg
        self.degrees = degrees
        self.rank = len(degrees)
        if weights is None:
            zero = alg.lattice.reduce([0] * alg.nvars)
            weights = [zero] * self.rank
        self.weights = [tuple(w) for w in weights]

    def __len__(self):
        return self.rank

    def __eq__(self, other):
        return (isinstance(other, FreeModule) and other.alg is self.alg
                and other.degrees == self.degrees)

    def __repr__(self):
        return f"FreeModule({self.degrees})"

    @property
    def dim(self) -> int:
        return self.rank * self.alg.dim

    def dim_in_degree(self, d: int) -> int:
        return sum(self.alg.h(d - g) for g in self.degrees)

    def degree_range(self) -> tuple[int, int]:
        if not self.degrees:
            return (0, -1)
        return (self.degrees[0], self.degrees[-1] + self.alg.top)

    def slice_indices(self, d: int) -> np.ndarray:
        """Global coordinates of the degree-``d`` part, generator-major."""
        out = []
        dimr = self.alg.dim
        for j, g in enumerate(self.degrees):
            s = self.alg.degree_slice(d - g)
            out.extend(range(j * dimr + s.start, j * dimr + s.stop))
        return np.asarray(out, dtype=np.int64)

    def dual(self) -> "FreeModule":
        """Hom(F, R): generator degrees negated (order reversed to stay sorted)."""
        return FreeModule(self.alg, [-g for g in reversed(self.degrees)])

    def shift(self, k: int) -> "FreeModule":
        return FreeModule(self.alg, [g + k for g in self.degrees], self.weights)

    def multiply_matrix(self, ring_vec) -> np.ndarray:
        """Matrix of multiplication by a ring element on the full realization."""
        m = self.alg.mult_matrix(ring_vec)
        f = self.alg.field
        out = f.zeros((self.dim, self.dim))
        n = self.alg.dim
        for j in range(self.rank):
            out[j * n:(j + 1) * n, j * n:(j + 1) * n] = m
        return out


class AlgebraMatrix:
    """A homogeneous map of free modules ``source -> target``.

    ``entries[r, c]`` is the coordinate vector (over the algebra basis) of
    the ring element sending generator ``c`` of the source to its ``r``
    component; it must be homogeneous of degree
    ``source.degrees[c] - target.degrees[r]``.
    """

    def __init__(self, target: FreeModule, source: FreeModule, entries: np.ndarray, check: bool = True):
        alg = target.alg
        if source.alg is not alg:
            raise ModuleError("source and target live over different algebras")
        self.alg = alg
        self.target = target
        self.source = source
        shape = (target.rank, source.rank, alg.dim)
        if entries.size == 0:
            entries = alg.field.zeros(shape)
        if entries.shape != shape:
            raise ModuleError(f"entries have shape {entries.shape}, expected {shape}")
        self.entries = entries
        if check:
            self.check_homogeneous()

    @classmethod
    def from_polynomials(cls, alg: GradedAlgebra, rows, target_degrees=None, source_degrees=None,
                         params=None) -> "AlgebraMatrix":
        """Build from a grid of polynomials (or strings); degrees inferred when omitted."""
        polys = [[_as_poly(alg, e, params) for e in row] for row in rows]
        nr = len(polys)
        nc = len(polys[0]) if nr else 0
        if any(len(r) != nc for r in polys):
            raise ModuleError("ragged matrix")
        if target_degrees is None:
            target_degrees = [0] * nr
        if source_degrees is None:
            source_degrees = []
            for c in range(nc):
                cand = set()
                for r in range(nr):
                    d = polys[r][c].is_homogeneous()
                    if d is None:
                        raise HomogeneityError(f"entry ({r},{c}) is not homogeneous")
                    if d is not ANY:
                        cand.add(d + target_degrees[r])
                if len(cand) > 1:
                    raise HomogeneityError(f"column {c} has entries of inconsistent degree")
                source_degrees.append(cand.pop() if cand else target_degrees[0] if nr else 0)
        f = alg.field
        ent = f.zeros((nr, nc, alg.dim))
        for r in range(nr):
            for c in range(nc):
                ent[r, c] = alg.element(polys[r][c])
        # sort generator degrees (permuting rows/columns accordingly)
        ro = np.argsort(np.asarray(target_degrees), kind="stable")
        co = np.argsort(np.asarray(source_degrees), kind="stable")
        ent = ent[ro][:, co]
        tgt = FreeModule(alg, [target_degrees[i] for i in ro])
        src = FreeModule(alg, [source_degrees[i] for i in co])
        return cls(tgt, src, ent)

    def __repr__(self):
        return f"AlgebraMatrix({self.target.rank}x{self.source.rank})"

    def check_homogeneous(self):
        deg = self.alg.degree_of
        for r, gr in enumerate(self.target.degrees):
            for c, gc in enumerate(self.source.degrees):
                nz = np.flatnonzero(self.entries[r, c] != 0)
                if nz.size and np.any(deg[nz] != gc - gr):
                    raise HomogeneityError(
                        f"entry ({r},{c}) is not homogeneous of degree {gc - gr}")

    def is_minimal(self) -> bool:
        """No entry has a nonzero constant term."""
        return not np.any(self.entries[:, :, 0] != 0)

    def full_matrix(self) -> np.ndarray:
        """Matrix of the map on full realizations (column convention)."""
        alg = self.alg
        n = alg.dim
        f = alg.field
        out = f.zeros((self.target.rank * n, self.source.rank * n))
        mats = alg.basis_mult_matrices
        for r in range(self.target.rank):
            for c in range(self.source.rank):
                e = self.entries[r, c]
                nz = np.flatnonzero(e != 0)
                if not nz.size:
                    continue
                block = f.zeros((n, n))
                for t in nz:
                    block = f.add(block, f.scale(e[t], mats[t]))
                out[r * n:(r + 1) * n, c * n:(c + 1) * n] = block
        return out

    def slice_matrix(self, d: int) -> np.ndarray:
        """Degree-``d`` component (rows: target slice, columns: source slice)."""
        full = self._full
        return full[np.ix_(self.target.slice_indices(d), self.source.slice_indices(d))]

    @cached_property
    def _full(self):
        return self.full_matrix()

    def compose(self, other: "AlgebraMatrix") -> "AlgebraMatrix":
        """self o other."""
        if other.target != self.source:
            raise ModuleError("matrices are not composable")
        alg = self.alg
        f = alg.field
        t = alg.table
        if f.kind == "Fp":
            ent = np.einsum("rka,kcb,abz->rcz", self.entries, other.entries, t, optimize=True) % f.p
        else:
            tmp = np.tensordot(self.entries, t, axes=(2, 0))  # r k b z
            ent = np.einsum("rkbz,kcb->rcz", tmp, other.entries)
        return AlgebraMatrix(self.target, other.source, ent, check=False)

    def is_zero(self) -> bool:
        return not np.any(self.entries != 0)

    def transpose(self) -> "AlgebraMatrix":
        """Hom(-, R) of the map: target^* -> source^*."""
        ent = self.entries.transpose(1, 0, 2)[::-1, ::-1]
        return AlgebraMatrix(self.source.dual(), self.target.dual(), ent.copy(), check=False)

    def change_ring(self, other: GradedAlgebra, projection: np.ndarray | None = None) -> "AlgebraMatrix":
        """Reduce the entries along the surjection onto ``other``."""
        if projection is None:
            projection = self.alg.projection_to(other)
        f = self.alg.field
        ent = np.tensordot(self.entries, projection.T, axes=(2, 0))
        if f.kind == "Fp":
            ent = ent % f.p
        return AlgebraMatrix(FreeModule(other, self.target.degrees), FreeModule(other, self.source.degrees),
                             ent, check=False)


def _as_poly(alg, e, params=None):
    if isinstance(e, Polynomial):
        return e
    if isinstance(e, (int, np.integer)):
        e = str(int(e))
    return parse(e, alg.names, alg.field, alpha=alg.alpha, params=params)


# ---------------------------------------------------------------------------
# explicit modules


class ExplicitModule:
    """Graded module given by degreewise dimensions and action matrices."""

    def __init__(self, alg: GradedAlgebra, lo: int, dims: Sequence[int], act,
                 name: str = "M", weights=None, presentation=None, check: bool = False):
        self.alg = alg
        self.field = alg.field
        dims = [int(x) for x in dims]
        # trim zero ends so lo/hi are the realized range
        act = [list(a) for a in act] if act else [[] for _ in range(alg.nvars)]
        while dims and dims[-1] == 0:
            dims.pop()
        k = 0
        while k < len(dims) and dims[k] == 0:
            k += 1
        if k:
            dims = dims[k:]
            act = [a[k:] for a in act]
            lo += k
        self.lo = lo if dims else 0
        self.dims = dims
        self.hi = self.lo + len(dims) - 1
        f = self.field
        norm = []
        for l in range(alg.nvars):
            per = []
            for i, n0 in enumerate(dims):
                n1 = dims[i + 1] if i + 1 < len(dims) else 0
                a = act[l][i] if i < len(act[l]) else None
                if a is None or a.size == 0:
                    a = f.zeros((n1, n0))
                if a.shape != (n1, n0):
                    raise ModuleError(f"action of {alg.names[l]} in degree {lo + i} has shape {a.shape}, "
                                      f"expected {(n1, n0)}")
                per.append(a)
            norm.append(per)
        self.act = norm
        self.name = name
        self.weights = weights
        self.presentation = presentation
        self.offsets = [0]
        for n0 in dims:
            self.offsets.append(self.offsets[-1] + n0)
        self.dim = self.offsets[-1]
        if check:
            self.check()

    # -- shape -----------------------------------------------------------------
    def __repr__(self):
        return f"ExplicitModule({self.name}, lo={self.lo}, dims={self.dims})"

    def d(self, deg: int) -> int:
        i = deg - self.lo
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def degree_slice(self, deg: int) -> slice:
        i = deg - self.lo
        if not 0 <= i < len(self.dims):
            return slice(0, 0)
        return slice(self.offsets[i], self.offsets[i + 1])

    def hilbert(self) -> dict[int, int]:
        return {self.lo + i: n for i, n in enumerate(self.dims) if n}

    def hilbert_series(self, normalize_to: int | None = None) -> tuple[int, list[int]]:
        """(lowest degree, coefficients); optionally shifted to start at ``normalize_to``."""
        lo = self.lo if normalize_to is None else normalize_to
        return lo, list(self.dims)

    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def degree_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.lo, self.lo + len(self.dims)), self.dims).astype(np.int64)

    # -- actions ---------------------------------------------------------------
    def action(self, l: int, deg: int) -> np.ndarray:
        i = deg - self.lo
        if 0 <= i < len(self.dims):
            return self.act[l][i]
        return self.field.zeros((self.d(deg + 1), self.d(deg)))

    @cached_property
    def variable_matrices(self) -> list[np.ndarray]:
        """Total (dim x dim) matrix of each variable."""
        f = self.field
        out = []
        for l in range(self.alg.nvars):
            m = f.zeros((self.dim, self.dim))
            for i in range(len(self.dims) - 1):
                m[self.offsets[i + 1]:self.offsets[i + 2], self.offsets[i]:self.offsets[i + 1]] = self.act[l][i]
            out.append(m)
        return out

    @cached_property
    def basis_action(self) -> list[np.ndarray]:
        """Total matrix of each algebra basis monomial, built along parent paths."""
        f = self.field
        alg = self.alg
        mats = [None] * alg.dim
        mats[0] = f.eye(self.dim)
        for t in range(1, alg.dim):
            l, prev = alg.parent[t]
            mats[t] = f.matmul(self.variable_matrices[l], mats[prev])
        return mats

    def ring_action(self, vec) -> np.ndarray:
        f = self.field
        out = f.zeros((self.dim, self.dim))
        for t in np.flatnonzero(vec != 0):
            out = f.add(out, f.scale(vec[t], self.basis_action[t]))
        return out

    def check(self):
        """Commuting actions and vanishing relations; raises ModuleError."""
        f = self.field
        X = self.variable_matrices
        for i in range(len(X)):
            for j in range(i + 1, len(X)):
                if np.any(f.matmul(X[i], X[j]) != f.matmul(X[j], X[i])):
                    raise ModuleError(f"actions of {self.alg.names[i]} and {self.alg.names[j]} do not commute")
        for r in self.alg.presentation.relations:
            acc = f.zeros((self.dim, self.dim))
            for exp, c in r.terms.items():
                m = f.eye(self.dim)
                for l, e in enumerate(exp):
                    for _ in range(e):
                        m = f.matmul(X[l], m)
                acc = f.add(acc, f.scale(c, m))
            if np.any(acc != 0):
                raise ModuleError(f"relation {r} does not act as zero")
        return True

    # -- structure ----------------------------------------------------------------
    def socle_dims(self) -> dict[int, int]:
        f = self.field
        out = {}
        for i, n0 in enumerate(self.dims):
            if n0 == 0:
                continue
            stack = np.concatenate([self.act[l][i] for l in range(self.alg.nvars)], axis=0)
            out[self.lo + i] = n0 - (f.rank(stack) if stack.shape[0] else 0)
        return out

    def socle_dim(self) -> int:
        return sum(self.socle_dims().values())

    def c_invariant(self) -> int:
        return self.dim - self.socle_dim()

    def minimal_generator_dims(self) -> dict[int, int]:
        """dim (M/mM)_d per degree."""
        f = self.field
        out = {}
        for i, n0 in enumerate(self.dims):
            if i == 0:
                out[self.lo] = n0
                continue
            stack = np.concatenate([self.act[l][i - 1] for l in range(self.alg.nvars)], axis=1)
            r = f.rank(stack) if stack.size else 0
            if n0 - r:
                out[self.lo + i] = n0 - r
        return {d: n for d, n in out.items() if n}

    def shift(self, k: int) -> "ExplicitModule":
        """M(k) with M(k)_d = M_{d+k}: the realized degrees move down by ``k``."""
        return ExplicitModule(self.alg, self.lo - k, self.dims, self.act, name=self.name,
                              weights=self.weights)

    def normalized(self, lowest: int) -> "ExplicitModule":
        """Shift so that the lowest nonzero degree becomes ``lowest``."""
        return self.shift(self.lo - lowest)

    def weight_homogeneous(self) -> bool:
        return self.weights is not None


# ---------------------------------------------------------------------------
# constructions


def _slice_rref(field, rows: np.ndarray, n: int):
    if rows.shape[0] == 0:
        return field.zeros((0, n)), np.zeros(0, dtype=np.int64)
    return field.rref(rows)


def _subquotient(alg: GradedAlgebra, ambient: FreeModule, sub_rows: dict, quot_rows: dict | None,
                 degrees, name: str) -> ExplicitModule:
    """Module ``sub/quot`` inside a free module, degreewise.

    ``sub_rows[d]`` spans the degree-d part of the submodule (rows in slice
    coordinates), or is ``None`` for the whole slice; ``quot_rows[d]`` spans
    the part to divide out (contained in the submodule).
    """
    f = alg.field
    X = [ambient.multiply_matrix(alg.var(l)) for l in range(alg.nvars)]
    info = {}
    for d in degrees:
        idx = ambient.slice_indices(d)
        n = len(idx)
        q = quot_rows.get(d) if quot_rows else None
        qr, qp = _slice_rref(f, q if q is not None else f.zeros((0, n)), n)
        s = sub_rows.get(d) if sub_rows is not None else None
        if s is None:
            s = f.eye(n)
        # basis of sub modulo quot: reduce sub rows by quot, keep independent remainder
        red = _reduce_by(f, s, qr, qp)
        br, bp = _slice_rref(f, red, n)
        info[d] = (idx, qr, qp, br, bp)
    dims = [len(info[d][4]) for d in degrees]
    act = [[] for _ in range(alg.nvars)]
    for k, d in enumerate(degrees):
        idx, qr, qp, br, bp = info[d]
        nxt = info.get(d + 1)
        for l in range(alg.nvars):
            if nxt is None or len(nxt[4]) == 0 or len(bp) == 0:
                act[l].append(f.zeros((len(nxt[4]) if nxt else 0, len(bp))))
                continue
            idx2, qr2, qp2, br2, bp2 = nxt
            full = f.zeros((len(bp), ambient.dim))
            full[:, idx] = br
            img = f.matmul(full, X[l].T)[:, idx2]
            img = _reduce_by(f, img, qr2, qp2)
            # coordinates with respect to br2: read at its pivots
            act[l].append(img[:, bp2].T.copy())
    lo = degrees[0] if len(degrees) else 0
    mod = ExplicitModule(alg, lo, dims, act, name=name)
    mod.weights = _infer_weights(mod, ambient, [info[d] for d in degrees if len(info[d][4])])
    return mod


def _infer_weights(mod: ExplicitModule, ambient: FreeModule, pieces):
    """Weights of a basis made of weight-homogeneous vectors, if the actions respect them."""
    alg = mod.alg
    n = alg.dim
    out = []
    for idx, _qr, _qp, br, _bp in pieces:
        gens = idx // n
        ring = idx % n
        for row in br:
            nz = np.flatnonzero(row != 0)
            ws = {alg.lattice.add(ambient.weights[gens[j]], alg.basis_weight[ring[j]]) for j in nz}
            if len(ws) != 1:
                return None
            out.append(ws.pop())
    if len(out) != mod.dim or not weights_compatible(mod, out):
        return None
    return out


def weights_compatible(mod: ExplicitModule, weights) -> bool:
    alg = mod.alg
    for l, X in enumerate(mod.variable_matrices):
        for i, j in zip(*np.nonzero(X != 0)):
            if weights[i] != alg.lattice.add(weights[j], alg.var_weight[l]):
                return False
    return True


def _reduce_by(f, rows, echelon, piv):
    """Remainder of rows modulo the row space of an RREF matrix."""
    if len(piv) == 0 or rows.shape[0] == 0:
        return rows.copy()
    coeff = rows[:, piv]
    return f.sub(rows, f.matmul(coeff, echelon))


def _image_rows(m: AlgebraMatrix, d: int) -> np.ndarray:
    """Images of the degree-d basis of the source, as rows in target slice coordinates."""
    return m.slice_matrix(d).T.copy()


def realize_cokernel(alg: GradedAlgebra, m: AlgebraMatrix, name="coker") -> ExplicitModule:
    lo, hi = m.target.degree_range()
    degrees = list(range(lo, hi + 1))
    quot = {d: _image_rows(m, d) for d in degrees}
    mod = _subquotient(alg, m.target, None, quot, degrees, name)
    mod.presentation = m
    return mod


def realize_image(alg: GradedAlgebra, m: AlgebraMatrix, name="im") -> ExplicitModule:
    lo, hi = m.target.degree_range()
    lo2, hi2 = m.source.degree_range()
    degrees = list(range(min(lo, lo2), max(hi, hi2) + 1))
    sub = {d: _image_rows(m, d) for d in degrees}
    return _subquotient(alg, m.target, sub, None, degrees, name)


def realize_kernel(alg: GradedAlgebra, m: AlgebraMatrix, name="ker") -> ExplicitModule:
    f = alg.field
    lo, hi = m.source.degree_range()
    degrees = list(range(lo, hi + 1))
    sub = {}
    for d in degrees:
        s = m.slice_matrix(d)
        sub[d] = f.kernel(s).T.copy() if s.shape[1] else f.zeros((0, 0))
    return _subquotient(alg, m.source, sub, None, degrees, name)


def free_module_as_explicit(F: FreeModule, name="F") -> ExplicitModule:
    lo, hi = F.degree_range()
    return _subquotient(F.alg, F, None, None, list(range(lo, hi + 1)), name)


def cyclic_quotient(alg: GradedAlgebra, gens, name="R/I", degree: int = 0, params=None) -> ExplicitModule:
    """R/(gens) with its generator in ``degree``."""
    polys = [_as_poly(alg, g, params) for g in gens]
    polys = [p for p in polys if not p.is_zero()]
    if polys:
        m = AlgebraMatrix.from_polynomials(alg, [polys], target_degrees=[degree])
    else:
        m = AlgebraMatrix(FreeModule(alg, [degree]), FreeModule(alg, []), alg.field.zeros((1, 0, alg.dim)))
    return realize_cokernel(alg, m, name=name)


def quotient_by_ideal(M: ExplicitModule, gens=(), mpower: int | None = None, name=None) -> ExplicitModule:
    """M / I M where I is generated by ``gens`` and, optionally, m^mpower."""
    alg = M.alg
    f = M.field
    ring = [alg.element(_as_poly(alg, g)) if not isinstance(g, np.ndarray) else g for g in gens]
    if mpower is not None:
        s = alg.degree_slice(mpower)
        for t in range(s.start, s.stop):
            v = alg.zero()
            v[t] = f.one
            ring.append(v)
    subs = []
    for v in ring:
        A = M.ring_action(v)
        if np.any(A != 0):
            subs.append(A.T)  # rows: images of basis vectors
    rows = np.concatenate(subs, axis=0) if subs else f.zeros((0, M.dim))
    return _quotient_explicit(M, rows, name or f"{M.name}/I")


def _quotient_explicit(M: ExplicitModule, rows: np.ndarray, name: str) -> ExplicitModule:
    """Quotient of M by the graded subspace spanned by (homogeneous pieces of) ``rows``."""
    f = M.field
    info = []
    for i in range(len(M.dims)):
        s = M.degree_slice(M.lo + i)
        part = rows[:, s]
        keep = np.flatnonzero(np.any(part != 0, axis=1))
        q, qp = _slice_rref(f, part[keep], M.dims[i])
        free = np.setdiff1d(np.arange(M.dims[i]), qp)
        info.append((q, qp, free))
    dims = [len(x[2]) for x in info]
    act = [[] for _ in range(M.alg.nvars)]
    for i in range(len(M.dims)):
        q, qp, free = info[i]
        for l in range(M.alg.nvars):
            if i + 1 >= len(M.dims):
                act[l].append(f.zeros((0, len(free))))
                continue
            q2, qp2, free2 = info[i + 1]
            a = M.act[l][i][:, free]  # images of the kept basis vectors
            red = _reduce_by(f, a.T.copy(), q2, qp2)
            act[l].append(red[:, free2].T.copy())
    return ExplicitModule(M.alg, M.lo, dims, act, name=name)


def submodule_generated(M: ExplicitModule, vectors: np.ndarray, name="sub") -> ExplicitModule:
    """Submodule of M generated by the given (homogeneous) element rows."""
    f = M.field
    spans = vectors.copy()
    acc = [spans]
    cur = spans
    for _ in range(M.alg.top + 1):
        nxt = [f.matmul(cur, X.T) for X in M.variable_matrices]
        cur = np.concatenate(nxt, axis=0) if nxt else f.zeros((0, M.dim))
        cur = cur[np.any(cur != 0, axis=1)]
        if not cur.shape[0]:
            break
        acc.append(cur)
    rows = np.concatenate(acc, axis=0)
    info = []
    for i in range(len(M.dims)):
        s = M.degree_slice(M.lo + i)
        part = rows[:, s]
        b, bp = _slice_rref(f, part[np.any(part != 0, axis=1)], M.dims[i])
        info.append((b, bp))
    dims = [len(x[1]) for x in info]
    act = [[] for _ in range(M.alg.nvars)]
    for i in range(len(M.dims)):
        b, bp = info[i]
        for l in range(M.alg.nvars):
            if i + 1 >= len(M.dims):
                act[l].append(f.zeros((0, len(bp))))
                continue
            b2, bp2 = info[i + 1]
            img = f.matmul(b, M.act[l][i].T)
            act[l].append(img[:, bp2].T.copy())
    return ExplicitModule(M.alg, M.lo, dims, act, name=name)


def direct_sum(ms: Sequence[ExplicitModule], name="sum", alg: GradedAlgebra | None = None) -> ExplicitModule:
    """Degreewise sum; the empty sum is the zero module over ``alg``."""
    ms = [m for m in ms]
    if not ms:
        if alg is None:
            raise ModuleError("the empty direct sum needs an algebra")
        return zero_module(alg, name)
    alg = ms[0].alg
    if any(m.alg is not alg for m in ms):
        raise ModuleError("modules live over different algebras")
    f = alg.field
    live = [m for m in ms if m.dim]
    if not live:
        return zero_module(alg, name)
    lo = min(m.lo for m in live)
    hi = max(m.hi for m in live)
    dims = [sum(m.d(d) for m in live) for d in range(lo, hi + 1)]
    act = [[] for _ in range(alg.nvars)]
    for l in range(alg.nvars):
        for d in range(lo, hi + 1):
            blk = f.zeros((sum(m.d(d + 1) for m in live), sum(m.d(d) for m in live)))
            r = c = 0
            for m in live:
                a = m.action(l, d)
                blk[r:r + a.shape[0], c:c + a.shape[1]] = a
                r += a.shape[0]
                c += a.shape[1]
            act[l].append(blk)
    return ExplicitModule(alg, lo, dims, act, name=name)


def zero_module(alg: GradedAlgebra, name="0") -> ExplicitModule:
    return ExplicitModule(alg, 0, [], [[] for _ in range(alg.nvars)], name=name)


def matlis_dual(M: ExplicitModule, name=None) -> ExplicitModule:
    """Graded k-dual: (M^v)_{-d} = (M_d)^*, with (x f)(m) = f(x m)."""
    alg = M.alg
    if M.dim == 0:
        return zero_module(alg, name or f"{M.name}^v")
    lo = -M.hi
    n = len(M.dims)
    dims = list(reversed(M.dims))
    act = [[] for _ in range(alg.nvars)]
    for l in range(alg.nvars):
        for k in range(n):
            d = -(lo + k)  # this slot is (M_d)^*, mapping to (M_{d-1})^*
            act[l].append(M.action(l, d - 1).T.copy())
    return ExplicitModule(alg, lo, dims, act, name=name or f"{M.name}^v")


def restrict_scalars(M: ExplicitModule, alg: GradedAlgebra, name=None) -> ExplicitModule:
    """View a module killed by the dropped variables as a module over the quotient ``alg``."""
    src = M.alg
    keep = [src.names.index(v) for v in alg.names]
    for l in range(src.nvars):
        if l not in keep and any(np.any(a != 0) for a in M.act[l]):
            raise ModuleError(f"{src.names[l]} does not act as zero on {M.name}")
    act = [M.act[l] for l in keep]
    out = ExplicitModule(alg, M.lo, M.dims, act, name=name or M.name)
    return out


def extend_scalars(M: ExplicitModule, alg: GradedAlgebra, name=None) -> ExplicitModule:
    """M tensor R/(dropped variables), as a module over the quotient algebra."""
    src = M.alg
    drop = [l for l in range(src.nvars) if src.names[l] not in alg.names]
    q = quotient_by_ideal(M, [src.var(l) for l in drop], name=name or f"{M.name}(x)")
    return restrict_scalars(q, alg, name=name)


def star_dual(M: ExplicitModule, presentation: AlgebraMatrix | None = None, name=None) -> ExplicitModule:
    """Hom_R(M, R) as the kernel of the transposed presentation."""
    if presentation is None:
        presentation = M.presentation
    if presentation is None:
        from .resolve import presentation_of
        presentation = presentation_of(M)
    t = presentation.transpose()
    return realize_kernel(M.alg, t, name=name or f"{M.name}^*")


def is_isomorphic_dims(M: ExplicitModule, N: ExplicitModule) -> bool:
    return M.hilbert() == N.hilbert()


def random_module(alg: GradedAlgebra, rng, ngens=2, nrels=2, max_shift=1, name="rand") -> ExplicitModule:
    """Cokernel of a random homogeneous matrix with linear or quadratic entries."""
    f = alg.field
    tdeg = sorted(int(x) for x in rng.integers(0, max_shift + 1, size=ngens))
    sdeg = sorted(int(tdeg[0] + x) for x in rng.integers(1, 3, size=nrels))
    ent = f.zeros((ngens, nrels, alg.dim))
    for r in range(ngens):
        for c in range(nrels):
            e = sdeg[c] - tdeg[r]
            s = alg.degree_slice(e)
            for t in range(s.start, s.stop):
                if rng.random() < 0.6:
                    v = int(rng.integers(-3, 4))
                    ent[r, c, t] = f(v)
    m = AlgebraMatrix(FreeModule(alg, tdeg), FreeModule(alg, sdeg), ent)
    return realize_cokernel(alg, m, name=name)
