"""Ext/Tor dimension tables, complete-resolution windows, vanishing patterns.

Every table is the homology of a complex of free modules tensored with
(or mapped into) an explicit module ``N``.  For a map ``d: F -> G`` with
entries ``E[r, c]`` the tensored map has blocks ``Act_N(E[r, c])`` and the
Hom map has the transposed block pattern.  Both preserve an internal
degree, so all ranks are taken one internal degree at a time.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .gradedalg import GradedAlgebra
from .gradedmod import AlgebraMatrix, ExplicitModule, FreeModule, ModuleError, star_dual
from .polyparse import parse
from .resolve import ChainComplex, Resolution, StructureError, minimal_free_resolution
from .scalar import order_of_unit

DEFAULT_FAMILY = (("x1", "a^i*x3"), ("x4", "x2"))


class AlgebraMismatchError(ModuleError):
    pass


# ---------------------------------------------------------------------------
# tables


@dataclass
class HomologyTable:
    functor: str          # "Ext", "Tor", "TateExt", "TateTor"
    left: str
    right: str
    lo: int
    hi: int
    dims: dict = dc_field(default_factory=dict)
    graded: dict | None = None   # i -> {internal degree: dim}
    method: str = ""

    def __getitem__(self, i):
        return self.dims[i]

    def nonzero(self, lo=None, hi=None) -> list[int]:
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        return [i for i in range(lo, hi + 1) if self.dims.get(i, 0)]

    def window(self, lo, hi) -> "HomologyTable":
        dims = {i: v for i, v in self.dims.items() if lo <= i <= hi}
        graded = None if self.graded is None else {i: v for i, v in self.graded.items() if lo <= i <= hi}
        return HomologyTable(self.functor, self.left, self.right, lo, hi, dims, graded, self.method)

    def to_csv(self, bigraded: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if bigraded:
            if self.graded is None:
                raise ValueError("table has no internal grading")
            w.writerow(["i", "j", "dim"])
            for i in range(self.lo, self.hi + 1):
                row = [(j, v) for j, v in sorted(self.graded.get(i, {}).items()) if v]
                # a zero row keeps vanishing indices in the window
                for j, v in row or [(0, 0)]:
                    w.writerow([i, j, v])
        else:
            w.writerow(["i", "dim"])
            for i in range(self.lo, self.hi + 1):
                w.writerow([i, self.dims.get(i, 0)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, functor="?", left="?", right="?") -> "HomologyTable":
        rows = list(csv.reader(io.StringIO(text)))
        head, body = rows[0], [r for r in rows[1:] if r]
        if head == ["i", "dim"]:
            dims = {int(i): int(v) for i, v in body}
            lo, hi = (min(dims), max(dims)) if dims else (0, -1)
            return cls(functor, left, right, lo, hi, dims)
        if head == ["i", "j", "dim"]:
            graded: dict = {}
            for i, j, v in body:
                g = graded.setdefault(int(i), {})
                if int(v):
                    g[int(j)] = int(v)
            dims = {i: sum(g.values()) for i, g in graded.items()}
            lo, hi = (min(dims), max(dims)) if dims else (0, -1)
            for i in range(lo, hi + 1):
                dims.setdefault(i, 0)
            return cls(functor, left, right, lo, hi, dims, graded)
        raise ValueError(f"unrecognized header {head}")


@dataclass
class VanishingPattern:
    lo: int
    hi: int
    nonzero: list
    modulus: int
    residues: list | None
    consistent: bool
    max_gap: int

    def summary(self) -> str:
        nz = "{" + ",".join(str(i) for i in self.nonzero) + "}"
        res = "n/a" if self.residues is None else "{" + ",".join(str(r) for r in self.residues) + f"}} mod {self.modulus}"
        return f"nonzero={nz} residues={res}"


def extract_pattern(t: HomologyTable, s: int, lo: int | None = None, hi: int | None = None) -> VanishingPattern:
    """Nonzero set, residues mod ``s`` (s = 0: literal set) and the longest inner gap."""
    lo = t.lo if lo is None else lo
    hi = t.hi if hi is None else hi
    nz = t.nonzero(lo, hi)
    residues = None
    consistent = True
    if s > 0:
        residues = sorted({i % s for i in nz})
        consistent = all((i % s in residues) == bool(t.dims.get(i, 0)) for i in range(lo, hi + 1))
    gap = 0
    for a, b in zip(nz, nz[1:]):
        gap = max(gap, b - a - 1)
    return VanishingPattern(lo, hi, nz, s, residues, consistent, gap)


# ---------------------------------------------------------------------------
# tensor and Hom of a free map with an explicit module


def _action_stack(N: ExplicitModule, support: np.ndarray) -> dict:
    return {int(t): N.basis_action[int(t)] for t in support}


def tensor_matrix(m: AlgebraMatrix, N: ExplicitModule):
    """(matrix, row degrees, column degrees) of m (x) N."""
    return _blocked(m, N, hom=False)


def hom_matrix(m: AlgebraMatrix, N: ExplicitModule):
    """(matrix, row degrees, column degrees) of Hom(m, N): Hom(target, N) -> Hom(source, N)."""
    return _blocked(m, N, hom=True)


def _blocked(m: AlgebraMatrix, N: ExplicitModule, hom: bool):
    f = m.alg.field
    e = N.dim
    R, C = m.target.rank, m.source.rank
    nd = N.degree_of
    tdeg = np.asarray(m.target.degrees, dtype=np.int64)
    sdeg = np.asarray(m.source.degrees, dtype=np.int64)
    if hom:
        rows_deg = (nd[None, :] - sdeg[:, None]).reshape(-1)   # (c, n')
        cols_deg = (nd[None, :] - tdeg[:, None]).reshape(-1)   # (r, n)
        shape = (C * e, R * e)
    else:
        rows_deg = (tdeg[:, None] + nd[None, :]).reshape(-1)   # (r, n')
        cols_deg = (sdeg[:, None] + nd[None, :]).reshape(-1)   # (c, n)
        shape = (R * e, C * e)
    out = f.zeros(shape)
    if e == 0 or R == 0 or C == 0:
        return out, rows_deg, cols_deg
    support = np.flatnonzero(np.any(m.entries != 0, axis=(0, 1)))
    acts = _action_stack(N, support)
    for t in support:
        coeff = m.entries[:, :, t]
        if hom:
            blk = f.kron(coeff.T.copy(), acts[t])
        else:
            blk = f.kron(coeff, acts[t])
        out = f.add(out, blk)
    return out, rows_deg, cols_deg


def graded_rank(mat, rows_deg, cols_deg, field) -> dict:
    """Rank of a degree-preserving matrix, per degree of its columns."""
    out = {}
    for j in np.unique(cols_deg):
        ci = np.flatnonzero(cols_deg == j)
        ri = np.flatnonzero(rows_deg == j)
        if ci.size == 0 or ri.size == 0:
            continue
        blk = mat[np.ix_(ri, ci)]
        if np.any(blk != 0):
            out[int(j)] = field.rank(blk)
    return out


def _degree_counts(deg) -> dict:
    vals, cnt = np.unique(deg, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, cnt)}


class _ComplexHomology:
    """Homology of ``C (x) N`` or ``Hom(C, N)`` for ``C`` given by a d-function."""

    def __init__(self, d: Callable[[int], AlgebraMatrix | None], module: Callable[[int], FreeModule],
                 N: ExplicitModule, hom: bool):
        self.d, self.module, self.N, self.hom = d, module, N, hom
        self._ranks: dict[int, dict] = {}

    def _rank(self, i: int) -> dict:
        """Graded rank of the map attached to d_i (zero when d_i is absent)."""
        if i not in self._ranks:
            m = self.d(i)
            if m is None or m.source.rank == 0 or m.target.rank == 0 or self.N.dim == 0:
                self._ranks[i] = {}
            else:
                mat, rd, cd = (hom_matrix if self.hom else tensor_matrix)(m, self.N)
                # degree labels agree on rows and columns because the map is homogeneous
                self._ranks[i] = graded_rank(mat, rd, cd, m.alg.field)
        return self._ranks[i]

    def _dims(self, i: int) -> dict:
        F = self.module(i)
        nd = self.N.degree_of
        g = np.asarray(F.degrees, dtype=np.int64)
        if F.rank == 0 or self.N.dim == 0:
            return {}
        if self.hom:
            return _degree_counts((nd[None, :] - g[:, None]).reshape(-1))
        return _degree_counts((g[:, None] + nd[None, :]).reshape(-1))

    def graded(self, i: int) -> dict:
        dims = self._dims(i)
        if self.hom:
            # Hom(C_{i-1},N) -> Hom(C_i,N) -> Hom(C_{i+1},N); ranks of d_i^*, d_{i+1}^*
            r_in, r_out = self._rank(i), self._rank(i + 1)
        else:
            r_in, r_out = self._rank(i + 1), self._rank(i)
        out = {}
        for j, n in dims.items():
            v = n - r_in.get(j, 0) - r_out.get(j, 0)
            if v < 0:
                raise StructureError("negative homology: the maps do not form a complex")
            if v:
                out[j] = v
        return out


def _table(functor, left, right, lo, hi, hom_obj, method, bigraded=True) -> HomologyTable:
    graded = {i: hom_obj.graded(i) for i in range(lo, hi + 1)}
    dims = {i: sum(g.values()) for i, g in graded.items()}
    return HomologyTable(functor, left, right, lo, hi, dims, graded if bigraded else None, method)


# ---------------------------------------------------------------------------
# the explicit complete resolution


class CompleteResolutionFamily:
    """Matrices d_i with entries depending on the integer ``i`` (through a^i).

    ``C_i`` is free on generators of degree ``i + shift``; d_i: C_i -> C_{i-1}.
    The default template is the 2x2 family with ``a^i`` in the corner; negative
    exponents use the inverse of a.
    """

    def __init__(self, alg: GradedAlgebra, template=DEFAULT_FAMILY, shift: int = 1, name="C"):
        if alg.alpha is None:
            raise ModuleError("the family needs a value for a")
        self.alg = alg
        self.template = tuple(tuple(r) for r in template)
        self.shift = shift
        self.name = name
        self._cache: dict[int, AlgebraMatrix] = {}

    def module(self, i: int) -> FreeModule:
        return FreeModule(self.alg, [i + self.shift] * len(self.template[0]))

    def d(self, i: int) -> AlgebraMatrix:
        m = self._cache.get(i)
        if m is None:
            rows = [[parse(e, self.alg.names, self.alg.field, alpha=self.alg.alpha, params={"i": i})
                     for e in row] for row in self.template]
            deg_t = [i - 1 + self.shift] * len(self.template)
            deg_s = [i + self.shift] * len(self.template[0])
            m = AlgebraMatrix.from_polynomials(self.alg, rows, target_degrees=deg_t, source_degrees=deg_s)
            self._cache[i] = m
        return m

    def over(self, other: GradedAlgebra) -> "CompleteResolutionFamily":
        return CompleteResolutionFamily(other, self.template, self.shift, self.name + "(x)")

    def check_squares(self, lo: int, hi: int) -> bool:
        for i in range(lo + 1, hi + 1):
            if not self.d(i - 1).compose(self.d(i)).is_zero():
                raise StructureError(f"d_{i - 1} d_{i} != 0")
        return True

    def window(self, lo: int, hi: int) -> ChainComplex:
        mods = {i: self.module(i) for i in range(lo - 1, hi + 1)}
        diffs = {i: self.d(i) for i in range(lo, hi + 1)}
        return ChainComplex(self.alg, mods, diffs, lo - 1, hi)

    def resolved_module(self, name="M") -> ExplicitModule:
        from .gradedmod import realize_image
        return realize_image(self.alg, self.d(0), name=name)

    def period(self) -> int:
        return order_of_unit(self.alg.alpha, self.alg.field)


# ---------------------------------------------------------------------------
# resolution cache (a pure memo keyed by module identity)

_RES_CACHE: dict = {}


def resolution_of(M: ExplicitModule, steps: int, **kw) -> Resolution:
    key = id(M)
    hit = _RES_CACHE.get(key)
    if hit is not None and hit[0] is M and hit[1].steps >= steps:
        return hit[1]
    res = minimal_free_resolution(M, steps, **kw)
    _RES_CACHE[key] = (M, res)
    return res


def _check_same(a, b):
    if a is not b:
        raise AlgebraMismatchError("modules live over different algebras")


def _side(M, H):
    """(d, module, label, method) for the left argument."""
    if isinstance(M, CompleteResolutionFamily):
        fam = M

        def d(i):
            return fam.d(i) if i >= 1 else None

        return d, fam.module, fam.name + "-resolved", "family", fam.alg
    if isinstance(M, Resolution):
        res = M
    else:
        res = resolution_of(M, H + 1)

    def d(i):
        return res.differential(i) if 1 <= i <= res.steps else None

    return d, res.free_module, res.module.name, "resolution", res.alg


def tor_table(M, N: ExplicitModule, H: int, lo: int = 0, bigraded=True) -> HomologyTable:
    """dim Tor_i(M, N) for lo <= i <= H."""
    d, mod, name, method, alg = _side(M, H)
    _check_same(alg, N.alg)
    h = _ComplexHomology(d, mod, N, hom=False)
    return _table("Tor", name, N.name, lo, H, h, method, bigraded)


def ext_table(M, N: ExplicitModule, H: int, lo: int = 0, bigraded=True) -> HomologyTable:
    """dim Ext^i(M, N) for lo <= i <= H."""
    d, mod, name, method, alg = _side(M, H)
    _check_same(alg, N.alg)
    h = _ComplexHomology(d, mod, N, hom=True)
    return _table("Ext", name, N.name, lo, H, h, method, bigraded)


def ext_into_M(N: ExplicitModule, fam: CompleteResolutionFamily, H: int, lo: int = 0) -> HomologyTable:
    """dim Ext^i(N, M) through Tor_i(M^*, N), using the dual of the negative half."""
    _check_same(fam.alg, N.alg)

    def d(i):
        # G^*_i = C_{-i-1}^*, with differential the transpose of d_{-i}
        return fam.d(-i).transpose() if i >= 1 else None

    def mod(i):
        return fam.module(-i - 1).dual()

    h = _ComplexHomology(d, mod, N, hom=False)
    t = _table("Ext", N.name, fam.name + "-resolved", lo, H, h, "dual-family")
    t.graded = None  # internal degrees of the dual pairing are not tracked
    return t


def tate_tables(fam: CompleteResolutionFamily, N: ExplicitModule, W: int, lo: int | None = None):
    """(Tate Tor, Tate Ext) on [-W, W] (or [lo, W])."""
    _check_same(fam.alg, N.alg)
    lo = -W if lo is None else lo
    fam.check_squares(lo - 1, W + 2)
    tor = _ComplexHomology(fam.d, fam.module, N, hom=False)
    ext = _ComplexHomology(fam.d, fam.module, N, hom=True)
    return (_table("TateTor", fam.name, N.name, lo, W, tor, "family"),
            _table("TateExt", fam.name, N.name, lo, W, ext, "family"))


def tate_image_ranks(fam: CompleteResolutionFamily, N: ExplicitModule, lo: int, hi: int) -> dict[int, int]:
    """Total rank of d_i (x) N for lo <= i <= hi."""
    h = _ComplexHomology(fam.d, fam.module, N, hom=False)
    return {i: sum(h._rank(i).values()) for i in range(lo, hi + 1)}


# ---------------------------------------------------------------------------
# rank scan for the rigidity bound


@dataclass
class OmegaScan:
    ranks: dict
    max_rank: int
    deficient: list
    c: int
    bound_ok: bool
    tor_nonzero: list | None = None
    tor_vanishing_exists: bool | None = None
    tor_bound_ok: bool | None = None


def omega_matrix(N: ExplicitModule, i: int, fam: CompleteResolutionFamily | None = None) -> np.ndarray:
    """The 2e x 2e block matrix of the action on N attached to d_i."""
    alg = N.alg
    fam = fam or CompleteResolutionFamily(alg)
    f = alg.field
    m = fam.d(i)
    e = N.dim
    R, C = m.target.rank, m.source.rank
    out = f.zeros((R * e, C * e))
    for r in range(R):
        for c in range(C):
            out[r * e:(r + 1) * e, c * e:(c + 1) * e] = N.ring_action(m.entries[r, c])
    return out


def omega_rank_scan(N: ExplicitModule, lo: int, hi: int, fam: CompleteResolutionFamily | None = None,
                    tor: HomologyTable | None = None, tor_window=(1, 15)) -> OmegaScan:
    f = N.field
    ranks = {i: f.rank(omega_matrix(N, i, fam)) if N.dim else 0 for i in range(lo, hi + 1)}
    mx = max(ranks.values()) if ranks else 0
    deficient = [i for i, r in ranks.items() if r < mx]
    c = N.c_invariant()
    scan = OmegaScan(ranks, mx, deficient, c, len(deficient) <= c)
    if tor is not None:
        a, b = tor_window
        nz = tor.nonzero(a, b)
        vanish = any(not tor.dims.get(j, 0) for j in range(a, b + 1))
        scan.tor_nonzero = nz
        scan.tor_vanishing_exists = vanish
        scan.tor_bound_ok = (not vanish) or len(nz) <= 2 * c
    return scan
