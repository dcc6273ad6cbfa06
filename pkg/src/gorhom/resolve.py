"""Minimal graded free resolutions, Betti tables, chain complexes.

The engine works one internal degree at a time.  Every free module is
realized fully, and each degree-``d`` slice is split further by the fine
weight grading when the module carries one (this keeps the residue field
over a multigraded algebra cheap).  For each slice the kernel of the
previous differential is computed exactly; the part already generated by
lower-degree kernel elements (``m * K``) is inserted into an echelon basis
first, and the kernel vectors that stay independent become the new
generators.  Graded Nakayama makes the result minimal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .gradedalg import GradedAlgebra
from .gradedmod import AlgebraMatrix, ExplicitModule, FreeModule, ModuleError
from .scalar import RowBasis

DEFAULT_STEPS = 20
# largest slice matrix (entries) the engine will form, in prime-field entries
DEFAULT_BUDGET = 120_000_000
# a rational entry is an object; count it as this many prime-field entries
RATIONAL_COST = 500
# rows of a lower-degree kernel multiplied by a variable in one go
ROW_CHUNK = 2048


class ResourceLimitError(RuntimeError):
    """A slice matrix would exceed the configured entry budget."""

    def __init__(self, step, degree, shape, budget):
        self.step, self.degree, self.shape, self.budget = step, degree, shape, budget
        super().__init__(f"step {step}, degree {degree}: slice of shape {shape} exceeds budget "
                         f"of {budget} entries")


class StructureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# weights


class _Weights:
    """Integer ids for weight classes; a single class when weights are off."""

    def __init__(self, alg: GradedAlgebra, enabled: bool):
        self.alg = alg
        self.enabled = enabled
        self.ids: dict[tuple, int] = {}
        self.keys: list[tuple] = []
        self._sum: dict[tuple[int, int], int] = {}
        zero = alg.lattice.reduce([0] * alg.nvars) if enabled else ()
        self.zero = self.id(zero)
        self.basis = np.array([self.id(w if enabled else ()) for w in alg.basis_weight], dtype=np.int64)
        self.var = [self.id(w if enabled else ()) for w in alg.var_weight]

    def id(self, w) -> int:
        w = tuple(w)
        k = self.ids.get(w)
        if k is None:
            k = self.ids[w] = len(self.keys)
            self.keys.append(w)
        return k

    def add(self, a: int, b: int) -> int:
        if not self.enabled:
            return self.zero
        k = self._sum.get((a, b))
        if k is None:
            k = self._sum[(a, b)] = self.id(self.alg.lattice.add(self.keys[a], self.keys[b]))
        return k

    def sub(self, a: int, b: int) -> int:
        if not self.enabled:
            return self.zero
        neg = self.id(self.alg.lattice.reduce([-x for x in self.keys[b]]))
        return self.add(a, neg)


# ---------------------------------------------------------------------------
# slice bookkeeping for a free module


class _FreeSlices:
    """Positions of the basis ``e_c * b_t`` inside their (degree, weight) slice."""

    def __init__(self, alg: GradedAlgebra, degs: np.ndarray, wids: np.ndarray, W: _Weights):
        self.alg = alg
        n = alg.dim
        ng = len(degs)
        self.ngens = ng
        C = np.repeat(np.arange(ng, dtype=np.int64), n)
        T = np.tile(np.arange(n, dtype=np.int64), ng)
        deg = degs[C] + alg.degree_of[T] if ng else np.zeros(0, dtype=np.int64)
        # combined weight ids
        gw = np.unique(wids) if ng else np.zeros(0, dtype=np.int64)
        comb = {}
        for g in gw:
            comb[int(g)] = np.array([W.add(int(g), int(b)) for b in W.basis], dtype=np.int64)
        wt = np.zeros(len(C), dtype=np.int64)
        for g, arr in comb.items():
            mask = wids[C] == g
            wt[mask] = arr[T[mask]]
        self.pos = np.zeros(ng * n, dtype=np.int64)
        self.slices: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
        if ng:
            order = np.lexsort((T, C, wt, deg))
            ds, ws = deg[order], wt[order]
            brk = np.flatnonzero((np.diff(ds) != 0) | (np.diff(ws) != 0)) + 1
            starts = np.concatenate([[0], brk])
            ends = np.concatenate([brk, [len(order)]])
            for s, e in zip(starts, ends):
                idx = order[s:e]
                self.slices[(int(ds[s]), int(ws[s]))] = (C[idx], T[idx])
                self.pos[idx] = np.arange(e - s)
        self._by_ring: dict = {}

    def size(self, key) -> int:
        s = self.slices.get(key)
        return 0 if s is None else len(s[0])

    def by_ring(self, key):
        """{t: (positions, gens)} for the slice ``key``."""
        out = self._by_ring.get(key)
        if out is None:
            gens, ring = self.slices[key]
            out = {}
            for t in np.unique(ring):
                p = np.flatnonzero(ring == t)
                out[int(t)] = (p, gens[p])
            self._by_ring[key] = out
        return out


def _free_multiply(field, alg, fs: _FreeSlices, key, X, u: int, out_size: int):
    """Rows X (in slice ``key``) times the basis element ``u`` of the algebra."""
    n = alg.dim
    Y = field.zeros((X.shape[0], out_size))
    if X.shape[0] == 0 or key not in fs.slices:
        return Y
    tab = alg.table[u]
    for t, (p, gens) in fs.by_ring(key).items():
        row = tab[t]
        for t2 in np.flatnonzero(row != 0):
            c = row[t2]
            tgt = fs.pos[gens * n + t2]
            if field.kind == "Fp":
                Y[:, tgt] += X[:, p] * c
            else:
                Y[:, tgt] = Y[:, tgt] + X[:, p] * c
    if field.kind == "Fp":
        Y %= field.p
    return Y


# ---------------------------------------------------------------------------
# results


@dataclass
class BettiTable:
    """b[i][j] = number of degree-j generators in homological step i."""

    entries: dict = dc_field(default_factory=dict)
    steps: int = 0

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def total(self, i: int) -> int:
        return sum(v for (a, _), v in self.entries.items() if a == i)

    def totals(self) -> list[int]:
        return [self.total(i) for i in range(self.steps + 1)]

    def internal_degrees(self, i: int) -> list[int]:
        return sorted(j for (a, j), v in self.entries.items() if a == i and v)

    def is_linear(self, p: int) -> bool:
        return is_linear_resolution(self, p)

    def to_csv(self) -> str:
        js = sorted({j for (_, j) in self.entries})
        lines = ["i," + ",".join(str(j) for j in js)]
        for i in range(self.steps + 1):
            lines.append(f"{i}," + ",".join(str(self[(i, j)]) for j in js))
        return "\n".join(lines) + "\n"

    def poincare(self) -> dict:
        return {k: v for k, v in self.entries.items() if v}


def is_linear_resolution(bt: BettiTable, p: int) -> bool:
    return all(v == 0 or j == i + p for (i, j), v in bt.entries.items())


@dataclass
class _Level:
    degrees: list
    wids: list
    # group key -> (first generator index, image rows in the target slice)
    images: dict


class Resolution:
    """Minimal free resolution F_H -> ... -> F_0 -> N."""

    def __init__(self, module: ExplicitModule, levels: list, weights: _Weights, complete: bool):
        self.module = module
        self.alg = module.alg
        self.levels = levels
        self.W = weights
        self.steps = len(levels) - 1
        self.complete = complete
        self._mats: dict[int, AlgebraMatrix] = {}
        bt = {}
        for i, lev in enumerate(levels):
            for d in lev.degrees:
                bt[(i, d)] = bt.get((i, d), 0) + 1
        self.betti = BettiTable(bt, self.steps)

    def free_module(self, i: int) -> FreeModule:
        if i < 0 or i > self.steps:
            return FreeModule(self.alg, [])
        return FreeModule(self.alg, self.levels[i].degrees)

    def augmentation(self) -> np.ndarray:
        """Matrix (dim N x rank F_0) sending generators to their images in N."""
        N = self.module
        f = self.alg.field
        lev = self.levels[0]
        out = f.zeros((N.dim, len(lev.degrees)))
        sl = _module_slices(N, self.W)
        for key, (start, rows) in lev.images.items():
            idx = sl[key]
            for k in range(rows.shape[0]):
                out[idx, start + k] = rows[k]
        return out

    def differential(self, i: int) -> AlgebraMatrix:
        """d_i : F_i -> F_{i-1} (zero map for i = 0 or beyond the computed range)."""
        if i in self._mats:
            return self._mats[i]
        alg = self.alg
        f = alg.field
        src, tgt = self.free_module(i), self.free_module(i - 1)
        ent = f.zeros((tgt.rank, src.rank, alg.dim))
        if 1 <= i <= self.steps:
            lev, prev = self.levels[i], self.levels[i - 1]
            if lev.images is None:
                raise StructureError(f"differential {i} was not kept")
            fs = _FreeSlices(alg, np.asarray(prev.degrees, dtype=np.int64),
                             np.asarray(prev.wids, dtype=np.int64), self.W)
            for key, (start, rows) in lev.images.items():
                gens, ring = fs.slices[key]
                for k in range(rows.shape[0]):
                    ent[gens, start + k, ring] = rows[k]
        m = AlgebraMatrix(tgt, src, ent, check=False)
        self._mats[i] = m
        return m

    def chain_complex(self) -> "ChainComplex":
        mods = {i: self.free_module(i) for i in range(self.steps + 1)}
        diffs = {i: self.differential(i) for i in range(1, self.steps + 1)}
        return ChainComplex(self.alg, mods, diffs, lo=0, hi=self.steps, resolves=self.module.name)

    def is_minimal(self) -> bool:
        return all(self.differential(i).is_minimal() for i in range(1, self.steps + 1))


def _module_slices(N: ExplicitModule, W: _Weights) -> dict:
    """(degree, weight id) -> basis indices of N."""
    degs = N.degree_of
    if W.enabled and N.weights is not None:
        wid = np.array([W.id(w) for w in N.weights], dtype=np.int64)
    else:
        wid = np.full(N.dim, W.zero, dtype=np.int64)
    out: dict = {}
    for i in range(N.dim):
        out.setdefault((int(degs[i]), int(wid[i])), []).append(i)
    return {k: np.asarray(v, dtype=np.int64) for k, v in sorted(out.items())}


def minimal_free_resolution(N: ExplicitModule, H: int = DEFAULT_STEPS, budget: int = DEFAULT_BUDGET,
                            weights: bool | str = "auto", keep_differentials: bool = True,
                            keep_last: bool = True, verbose: bool = False) -> Resolution:
    """Resolve ``N`` through homological step ``H``.

    ``keep_differentials=False`` drops each differential as soon as the next
    step no longer needs it (Betti numbers only); ``keep_last=False`` skips
    storing the images of the final generators.
    """
    if H < 0:
        raise ValueError("H must be nonnegative")
    alg = N.alg
    f = alg.field
    use_w = (weights is True) or (weights == "auto" and N.weights is not None)
    if use_w and N.weights is None:
        raise ModuleError("module carries no weight grading")
    W = _Weights(alg, use_w)
    nsl = _module_slices(N, W)
    tick = time.perf_counter()
    if f.kind == "Q":
        budget = max(1, budget // RATIONAL_COST)

    # step 0: lift a basis of N/mN
    X = N.variable_matrices
    degs, wids, images = [], [], {}
    for key in sorted(nsl):
        d, w = key
        idx = nsl[key]
        rows = []
        for l in range(alg.nvars):
            pk = (d - 1, W.sub(w, W.var[l]))
            if pk in nsl:
                rows.append(X[l][np.ix_(idx, nsl[pk])].T)
        rb = RowBasis(f, len(idx))
        if rows:
            rb.insert(np.concatenate(rows, axis=0))
        flags = rb.insert(f.eye(len(idx)))
        new = np.flatnonzero(flags)
        if new.size:
            images[key] = (len(degs), f.eye(len(idx))[new])
            degs += [d] * len(new)
            wids += [w] * len(new)
    levels = [_Level(degs, wids, images)]
    if verbose:
        print(f"[resolve] step 0: {len(degs)} generators")

    # rank of the map being resolved, per slice of its source: for the
    # augmentation this is dim N, later it is the kernel found one step back
    image_dims = {key: len(idx) for key, idx in nsl.items()}
    store = _compact_dtype(f)
    for i in range(1, H + 1):
        prev = levels[-1]
        if not prev.degrees:
            levels.append(_Level([], [], {}))
            image_dims = {}
            continue
        fs = _FreeSlices(alg, np.asarray(prev.degrees, dtype=np.int64),
                         np.asarray(prev.wids, dtype=np.int64), W)
        tfs = None
        if i >= 2:
            pp = levels[-2]
            tfs = _FreeSlices(alg, np.asarray(pp.degrees, dtype=np.int64),
                              np.asarray(pp.wids, dtype=np.int64), W)
        last = (i == H)
        degs, wids, images = [], [], {}
        kdims: dict = {}
        kernels_prev: dict = {}
        kernels_cur: dict = {}
        cur_degree = None
        top_degree = max(k[0] for k in fs.slices)
        for key in sorted(fs.slices):
            d, w = key
            if d != cur_degree:
                kernels_prev = kernels_cur if cur_degree == d - 1 else {}
                kernels_cur = {}
                cur_degree = d
            nsrc = fs.size(key)
            dim_k = nsrc - image_dims.get(key, 0)
            kdims[key] = dim_k
            if dim_k == 0:
                continue
            rb = RowBasis(f, nsrc)
            basis = None   # kernel basis when it is not held by rb
            # the part generated from lower degrees
            for l in range(alg.nvars):
                if rb.rank >= dim_k:
                    break
                pk = (d - 1, W.sub(w, W.var[l]))
                Kp = kernels_prev.get(pk)
                if Kp is None or not Kp.shape[0]:
                    continue
                if min(Kp.shape[0], dim_k) * nsrc > budget:
                    raise ResourceLimitError(i, d, (min(Kp.shape[0], dim_k), nsrc), budget)
                # in row blocks, so the products never all sit in memory at once
                for r0 in range(0, Kp.shape[0], ROW_CHUNK):
                    chunk = _free_multiply(f, alg, fs, pk, _widen(f, Kp[r0:r0 + ROW_CHUNK]),
                                           alg.var_index[l], nsrc)
                    rb.insert(chunk, stop=dim_k)
                    if rb.rank >= dim_k:
                        break
            if rb.rank < dim_k:
                ntgt = len(nsl.get(key, ())) if i == 1 else tfs.size(key)
                if nsrc * max(ntgt, 1) > budget:
                    raise ResourceLimitError(i, d, (nsrc, ntgt), budget)
                K = _slice_kernel(f, alg, N, nsl, fs, tfs, prev, W, key, nsrc, ntgt, i)
                if K.shape[0] != dim_k:
                    raise StructureError(f"step {i}, degree {d}: kernel dimension {K.shape[0]} "
                                         f"differs from the expected {dim_k}")
                if rb.rank == 0:
                    # nothing comes from lower degrees: the kernel basis is the new generators
                    new = np.arange(K.shape[0])
                    gens_here = basis = K
                else:
                    flags = rb.insert(K, stop=dim_k)
                    new = np.flatnonzero(flags)
                    gens_here = K[new]
                # minimality: no unit coefficient on generators of the same degree
                deg0 = np.flatnonzero(alg.degree_of[fs.slices[key][1]] == 0)
                if deg0.size and np.any(gens_here[:, deg0] != 0):
                    raise StructureError(f"non-minimal generator at step {i}, degree {d}")
                if not (last and not keep_last):
                    images[key] = (len(degs), gens_here)
                degs += [d] * len(new)
                wids += [w] * len(new)
            if d < top_degree:
                kernels_cur[key] = (rb.rows() if basis is None else basis).astype(store)
        levels.append(_Level(degs, wids, images if not (last and not keep_last) else None))
        image_dims = kdims
        if not keep_differentials:
            # the images of level i-1 are not needed once level i exists
            levels[-2].images = None
        if verbose:
            print(f"[resolve] step {i}: {len(degs)} generators "
                  f"({time.perf_counter() - tick:.1f}s)")
    return Resolution(N, levels, W, complete=True)


def _compact_dtype(f):
    if f.kind == "Q":
        return object
    if f.p < 2**15:
        return np.int16
    return np.int32


def _widen(f, a):
    return a if f.kind == "Q" else a.astype(np.int64)


def _slice_kernel(f, alg, N, nsl, fs, tfs, prev, W, key, nsrc, ntgt, i):
    """Kernel (rows) of the map on the source slice ``key``."""
    d, w = key
    if ntgt == 0:
        return f.eye(nsrc)
    S = f.zeros((nsrc, ntgt))
    for t, (p, gens) in fs.by_ring(key).items():
        gkey = (d - int(alg.degree_of[t]), W.sub(w, int(W.basis[t])))
        start, rows = prev.images[gkey]
        base = rows[gens - start]
        if i == 1:
            vec = f.zeros((len(p), N.dim))
            vec[:, nsl[gkey]] = base
            S[p] = f.matmul(vec, N.basis_action[t].T)[:, nsl[key]]
        else:
            S[p] = _free_multiply(f, alg, tfs, gkey, base, t, ntgt)
    return f.kernel(S.T).T


def betti_numbers(N: ExplicitModule, H: int, **kw) -> list[int]:
    kw.setdefault("keep_differentials", False)
    kw.setdefault("keep_last", False)
    return minimal_free_resolution(N, H, **kw).betti.totals()


def presentation_of(N: ExplicitModule) -> AlgebraMatrix:
    """Minimal presentation F_1 -> F_0 of N."""
    res = minimal_free_resolution(N, 1, weights=False)
    return res.differential(1)


# ---------------------------------------------------------------------------
# series


def series_expand(num: Sequence, den: Sequence, H: int) -> list:
    """Coefficients c_0..c_H of num/den as a formal power series."""
    den = list(den)
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator has zero constant term")
    num = list(num) + [0] * (H + 1)
    out = []
    for n in range(H + 1):
        acc = num[n]
        for k in range(1, min(n, len(den) - 1) + 1):
            acc -= den[k] * out[n - k]
        if isinstance(acc, int) and isinstance(den[0], int) and acc % den[0] == 0:
            out.append(acc // den[0])
        else:
            from fractions import Fraction
            out.append(Fraction(acc) / den[0])
    return out


# ---------------------------------------------------------------------------
# chain complexes


class ChainComplex:
    """Free modules C_i with differentials d_i : C_i -> C_{i-1} on [lo, hi]."""

    def __init__(self, alg: GradedAlgebra, modules: dict, differentials: dict, lo: int, hi: int,
                 resolves: str | None = None):
        self.alg = alg
        self.modules = modules
        self.differentials = differentials
        self.lo, self.hi = lo, hi
        self.resolves = resolves

    def module(self, i) -> FreeModule:
        return self.modules.get(i, FreeModule(self.alg, []))

    def d(self, i) -> AlgebraMatrix:
        m = self.differentials.get(i)
        if m is None:
            f = self.alg.field
            src, tgt = self.module(i), self.module(i - 1)
            m = AlgebraMatrix(tgt, src, f.zeros((tgt.rank, src.rank, self.alg.dim)), check=False)
        return m

    def check_squares(self, window=None):
        lo, hi = window if window else (self.lo, self.hi)
        for i in range(lo + 1, hi + 1):
            a, b = self.d(i - 1), self.d(i)
            if a.source.rank and a.target.rank and b.source.rank:
                if not a.compose(b).is_zero():
                    raise StructureError(f"d_{i - 1} o d_{i} != 0")
        return True

    def dual(self) -> "ChainComplex":
        """(C^*)_i = (C_{-i})^* with differential the transpose of d_{-i+1}."""
        mods = {-i: m.dual() for i, m in self.modules.items()}
        diffs = {}
        for i in range(-self.hi + 1, -self.lo + 1):
            j = -i + 1
            if j in self.differentials:
                diffs[i] = self.differentials[j].transpose()
        return ChainComplex(self.alg, mods, diffs, -self.hi, -self.lo)

    def change_ring(self, other: GradedAlgebra) -> "ChainComplex":
        proj = self.alg.projection_to(other)
        mods = {i: FreeModule(other, m.degrees) for i, m in self.modules.items()}
        diffs = {i: m.change_ring(other, proj) for i, m in self.differentials.items()}
        return ChainComplex(other, mods, diffs, self.lo, self.hi)

    def image_ranks(self, i: int) -> int:
        """rank of d_i, computed degreewise."""
        f = self.alg.field
        m = self.d(i)
        if not m.source.rank or not m.target.rank:
            return 0
        lo, hi = m.source.degree_range()
        return sum(f.rank(m.slice_matrix(e)) if m.slice_matrix(e).size else 0 for e in range(lo, hi + 1))

    def homology(self, i: int) -> int:
        dim = self.module(i).dim
        return dim - self.image_ranks(i) - self.image_ranks(i + 1)


def verify_exactness(C: ChainComplex, window) -> dict[int, int]:
    """Homology dimension at each index of the window (d o d checked first)."""
    lo, hi = window
    C.check_squares((lo - 1, hi + 1))
    return {i: C.homology(i) for i in range(lo, hi + 1)}
