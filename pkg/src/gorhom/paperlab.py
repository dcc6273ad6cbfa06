"""Built-in objects of the construction and a one-shot reproduction suite.

:func:`build_scenario` realizes the rings ``A`` and ``B = A/(x5)``, the
modules ``M``, ``L``, their duals, ``T_q``, ``U``, ``V`` and the periodic
complex ``C`` over a chosen field and value of ``a``.  :func:`reproduce_all`
runs every quantitative check and returns a :class:`ReproductionReport`.

Each check records where its expected value comes from:

``PAPER``
    a published value the construction is expected to reproduce,
``DERIVED``
    a value produced by an independent computation (a series expansion,
    a second algorithm),
``TRIVIAL``
    a degenerate or textbook case.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .document import WorkspaceDocument, bundled, build_document
from .gradedalg import GradedAlgebra, check_basis
from .gradedmod import ExplicitModule, direct_sum, extend_scalars, matlis_dual, star_dual
from .homology import (CompleteResolutionFamily, ext_into_M, ext_table, extract_pattern, omega_rank_scan,
                       tate_image_ranks, tate_tables, tor_table)
from .resolve import ResourceLimitError, minimal_free_resolution, series_expand, verify_exactness
from .scalar import Field, field_from_spec, order_of_unit

# expected normal-form monomial bases of A and B
BASIS_A = ["1", "x1", "x2", "x3", "x4", "x5", "x1*x2", "x1*x3", "x1*x4", "x1*x5", "x2*x5", "x1*x2*x5"]
BASIS_B = ["1", "x1", "x2", "x3", "x4", "x1*x2", "x1*x3", "x1*x4"]

# Betti depths used by reproduce_all unless overridden
BETTI_DEPTHS = {"kA": 4, "kB": 5, "T": 3, "V": 3}
# depth of the direct resolution of T_q used to cross-check Ext(T_q, M)
DIRECT_DEPTH = 2


def residue_set(q: int, s: int, lo: int, hi: int, offsets=(-1, 0)) -> list[int]:
    """Indices i in [lo, hi] with i = q + o (mod s) for some offset o; s = 0 means equality."""
    out = []
    for i in range(lo, hi + 1):
        for o in offsets:
            if (s == 0 and i == q + o) or (s > 0 and (i - q - o) % s == 0):
                out.append(i)
                break
    return out


@dataclass
class PaperScenario:
    field: Field
    alpha: object
    s: int
    H: int
    W: int
    doc: WorkspaceDocument
    A: GradedAlgebra
    B: GradedAlgebra
    famA: CompleteResolutionFamily
    famB: CompleteResolutionFamily
    M: ExplicitModule
    L: ExplicitModule
    Mstar: ExplicitModule
    Lstar: ExplicitModule
    U: ExplicitModule
    V: ExplicitModule
    VB: ExplicitModule
    kA: ExplicitModule
    kB: ExplicitModule
    _T: dict = dc_field(default_factory=dict)

    def T(self, q: int, ring: str = "A") -> ExplicitModule:
        key = (q, ring)
        if key not in self._T:
            TA = self.doc.module(f"T{q}")
            self._T[key] = TA if ring == "A" else extend_scalars(TA, self.B, name=f"T{q}")
        return self._T[key]

    def N_ab(self, a: int, b: int) -> ExplicitModule:
        """Sum of T_q for a < q <= b."""
        return direct_sum([self.T(q) for q in range(a + 1, b + 1)], name=f"N{a},{b}")

    def Z_ab(self, a: int, b: int) -> ExplicitModule:
        return direct_sum([self.T(a), self.T(b + 1)], name=f"Z{a},{b}")

    def describe(self) -> dict:
        return {"field": str(self.field), "alpha": self.field.format(self.alpha), "s": self.s,
                "H": self.H, "W": self.W}


def build_scenario(field="Q", alpha=2, H: int = 15, W: int = 8, relations=None) -> PaperScenario:
    """All objects over ``field`` with parameter ``alpha``.

    ``relations`` replaces the defining relations of A (used for negative
    controls); everything else is derived from the bundled declarations.
    """
    fld = field if isinstance(field, Field) else field_from_spec(field)
    if relations is None:
        doc = bundled("A.json", field=fld, alpha=alpha)
    else:
        raw = json.loads(bundled("A.json").to_json())
        raw["relations"] = list(relations)
        doc = build_document(raw, field=fld, alpha=alpha)
    A = doc.algebra
    a = A.alpha
    B = A.quotient_by_variables(["x5"], name="B")
    famA = doc.family("C")
    famB = famA.over(B)
    M = doc.module("M")
    L = famB.resolved_module("L")
    Mstar = star_dual(M, famA.d(1), name="M*")
    Lstar = star_dual(L, famB.d(1), name="L*")
    V = doc.module("V")
    return PaperScenario(
        field=fld, alpha=a, s=order_of_unit(a, fld), H=H, W=W, doc=doc, A=A, B=B,
        famA=famA, famB=famB, M=M, L=L, Mstar=Mstar, Lstar=Lstar, U=doc.module("U"), V=V,
        VB=extend_scalars(V, B, name="V"), kA=doc.module("k"), kB=extend_scalars(doc.module("k"), B, name="k"),
    )


# ---------------------------------------------------------------------------
# report


@dataclass
class Check:
    name: str
    claim: str
    provenance: str
    expected: object
    actual: object
    passed: bool
    seconds: float = 0.0
    note: str = ""

    def as_dict(self, timing=False) -> dict:
        d = {"name": self.name, "claim": self.claim, "provenance": self.provenance,
             "expected": self.expected, "actual": self.actual, "passed": self.passed}
        if self.note:
            d["note"] = self.note
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class ReproductionReport:
    scenario: dict
    checks: list = dc_field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def by_name(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, timing=False) -> dict:
        d = {"scenario": self.scenario, "passed": self.passed, "total": len(self.checks),
             "failed": len(self.failures()), "checks": [c.as_dict(timing) for c in self.checks]}
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d

    def to_json(self, timing=False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False, default=_jsonable) + "\n"

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} [{c.provenance}] {c.name}: {c.claim}" for c in self.checks]


def _jsonable(x):
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    return str(x)


class _Runner:
    def __init__(self, report: ReproductionReport):
        self.report = report

    def check(self, name: str, claim: str, provenance: str, expected, actual_fn: Callable[[], object],
              compare: Callable[[object, object], bool] | None = None):
        t = time.perf_counter()
        note = ""
        try:
            actual = actual_fn()
            ok = (compare or (lambda e, a: e == a))(expected, actual)
        except ResourceLimitError as exc:
            actual, ok, note = None, False, f"resource limit: {exc}"
        except Exception as exc:  # failures are report entries
            actual, ok, note = None, False, f"{type(exc).__name__}: {exc}"
        c = Check(name, claim, provenance, expected, actual, bool(ok), time.perf_counter() - t, note)
        self.report.checks.append(c)
        return c


# ---------------------------------------------------------------------------
# the individual check groups


def _hilb(N: ExplicitModule, lowest=None) -> dict:
    lo = N.lo if lowest is None else lowest
    return {str(lo + i): n for i, n in enumerate(N.dims) if n}


def check_algebras(sc: PaperScenario, run: _Runner):
    A, B = sc.A, sc.B
    run.check("A.hilbert", "Hilbert function of A is 1,5,5,1", "PAPER", [1, 5, 5, 1], lambda: list(A.hilbert))
    run.check("A.dim", "A has dimension 12", "PAPER", 12, lambda: A.dim)
    run.check("A.gorenstein", "A is Gorenstein", "PAPER", True, A.is_gorenstein_artinian)
    run.check("A.socle", "socle of A is one-dimensional in degree 3", "DERIVED", {3: 1},
              lambda: {d: n for d, n in enumerate(A.socle_dims()) if n})
    run.check("A.basis", "the twelve listed monomials form a basis of A", "PAPER", True,
              lambda: check_basis(A, BASIS_A))
    run.check("B.hilbert", "Hilbert function of B is 1,4,3", "PAPER", [1, 4, 3], lambda: list(B.hilbert))
    run.check("B.dim", "B has dimension 8", "PAPER", 8, lambda: B.dim)
    run.check("B.gorenstein", "B is not Gorenstein", "DERIVED", False, B.is_gorenstein_artinian)
    run.check("B.socle", "socle of B is three-dimensional in degree 2", "DERIVED", {2: 3},
              lambda: {d: n for d, n in enumerate(B.socle_dims()) if n})
    run.check("B.basis", "the eight listed monomials form a basis of B", "PAPER", True,
              lambda: check_basis(B, BASIS_B))


def check_exactness(sc: PaperScenario, run: _Runner, window: int = 8):
    w = window
    zeros = {i: 0 for i in range(-w, w + 1)}
    CA = sc.famA.window(-w - 1, w + 1)
    CB = sc.famB.window(-w - 1, w + 1)
    for label, C in (("C", CA), ("C*", CA.dual()), ("C(x)B", CB), ("C*(x)B", CB.dual())):
        run.check(f"exact.{label}", f"{label} has zero homology on [-{w},{w}]", "PAPER", zeros,
                  lambda C=C: verify_exactness(C, (-w, w)))
    run.check("exact.rank12", f"rank of d_i over A is 12 for i in [-{w},{w}]", "PAPER",
              {i: 12 for i in range(-w, w + 1)}, lambda: {i: CA.image_ranks(i) for i in range(-w, w + 1)})


def check_hilbert(sc: PaperScenario, run: _Runner):
    run.check("hilb.M", "Hilb M = 2t+8t^2+2t^3", "PAPER", {"1": 2, "2": 8, "3": 2}, lambda: _hilb(sc.M))
    run.check("hilb.L", "Hilb L = 2t+6t^2", "PAPER", {"1": 2, "2": 6}, lambda: _hilb(sc.L))
    run.check("hilb.Mstar", "Hilb M* = 2t+8t^2+2t^3 after shifting to start in degree 1", "PAPER",
              {"1": 2, "2": 8, "3": 2}, lambda: _hilb(sc.Mstar, 1))
    run.check("hilb.Lstar", "Hilb L* = 2t+6t^2 after shifting to start in degree 1", "PAPER",
              {"1": 2, "2": 6}, lambda: _hilb(sc.Lstar, 1))
    for q in (0, 1, 3):
        run.check(f"hilb.T{q}.A", f"Hilb T_{q} = 1+t over A", "PAPER", {"0": 1, "1": 1}, lambda q=q: _hilb(sc.T(q)))
        run.check(f"hilb.T{q}.B", f"Hilb T_{q} = 1+t over B", "PAPER", {"0": 1, "1": 1},
                  lambda q=q: _hilb(sc.T(q, "B")))
    run.check("hilb.V", "Hilb V = 2+2t", "PAPER", {"0": 2, "1": 2}, lambda: _hilb(sc.V))
    run.check("c.T", "c(T_q) = 1", "DERIVED", 1, lambda: sc.T(1).c_invariant())
    run.check("c.V", "c(V) = 2", "DERIVED", 2, lambda: sc.V.c_invariant())
    run.check("c.k", "c(k) = 0", "TRIVIAL", 0, lambda: sc.kA.c_invariant())


def check_betti(sc: PaperScenario, run: _Runner, depths: dict | None = None, betti_field=None):
    """Betti numbers against series expansions; optionally over another field."""
    depths = {**BETTI_DEPTHS, **(depths or {})}
    H = sc.H
    bsc = sc if betti_field is None else build_scenario(betti_field, sc.field.format(sc.alpha), sc.H, sc.W)
    where = "" if betti_field is None else f" (over {bsc.field})"

    def betti(N, depth, p):
        r = minimal_free_resolution(N, depth, keep_differentials=False, keep_last=False)
        return {"betti": r.betti.totals(), "linear": r.betti.is_linear(p)}

    def exp(den, depth, scale=1):
        return {"betti": [scale * c for c in series_expand([1], den, depth)], "linear": True}

    n = depths["kA"]
    run.check("betti.kA", f"k over A: 1/(1-5t+5t^2-t^3) to step {n}, linear{where}", "DERIVED",
              exp([1, -5, 5, -1], n), lambda: betti(bsc.kA, n, 0))
    n = depths["kB"]
    run.check("betti.kB", f"k over B: 1/(1-4t+3t^2) to step {n}, linear{where}", "DERIVED",
              exp([1, -4, 3], n), lambda: betti(bsc.kB, n, 0))
    run.check("betti.M", f"M has b_i = 2 for i <= {H}, linear", "PAPER", {"betti": [2] * (H + 1), "linear": True},
              lambda: betti(sc.M, H, 1))
    run.check("betti.L", f"L has b_i = 2 for i <= {H}, linear", "PAPER", {"betti": [2] * (H + 1), "linear": True},
              lambda: betti(sc.L, H, 1))
    n = depths["T"]
    run.check("betti.T.A", f"T_q over A: 1/(1-4t+t^2) to step {n}, linear{where}", "PAPER",
              exp([1, -4, 1], n), lambda: betti(bsc.T(3), n, 0))
    run.check("betti.T.B", f"T_q over B has a linear resolution to step {n}{where}", "PAPER", True,
              lambda: betti(bsc.T(3, "B"), n, 0)["linear"])
    n = depths["V"]
    run.check("betti.V.A", f"V over A has a linear resolution to step {n}{where}", "PAPER", True,
              lambda: betti(bsc.V, n, 0)["linear"])
    run.check("betti.V.B", f"V over B has a linear resolution to step {n}{where}", "PAPER", True,
              lambda: betti(bsc.VB, n, 0)["linear"])


def _qs(sc: PaperScenario) -> tuple:
    return (1, 3, 5, 8) if sc.s == 0 else (0, 1, 2)


def check_patterns(sc: PaperScenario, run: _Runner):
    """Nonvanishing of Ext and Tor against T_q."""
    H, s = sc.H, sc.s
    tag = f"mod {s}" if s else "with s = 0"
    for q in _qs(sc):
        TA, TB = sc.T(q), sc.T(q, "B")
        exp_pos = residue_set(q, s, 1, H)
        ext_exp = ([0] if s == 0 else []) + exp_pos
        lo = 0 if s == 0 else 1
        run.check(f"ext.M.T{q}", f"Ext^i_A(M,T_{q}) != 0 exactly for i = q-1, q {tag} on [{lo},{H}]"
                  + (" and i = 0" if s == 0 else ""), "PAPER", ext_exp,
                  lambda T=TA, lo=lo: ext_table(sc.famA, T, H).nonzero(lo, H))
        run.check(f"tor.M.T{q}", f"Tor_i^A(M,T_{q}) != 0 exactly for i = q-1, q {tag} on [1,{H}]", "PAPER",
                  exp_pos, lambda T=TA: tor_table(sc.famA, T, H).nonzero(1, H))
        run.check(f"ext.L.T{q}", f"Ext^i_B(L,T_{q}) != 0 exactly for i = q-1, q {tag} on [{lo},{H}]"
                  + (" and i = 0" if s == 0 else ""), "PAPER", ext_exp,
                  lambda T=TB, lo=lo: ext_table(sc.famB, T, H).nonzero(lo, H))
        run.check(f"tor.L.T{q}", f"Tor_i^B(L,T_{q}) != 0 exactly for i = q-1, q {tag} on [1,{H}]", "PAPER",
                  exp_pos, lambda T=TB: tor_table(sc.famB, T, H).nonzero(1, H))
        neg = residue_set(-q, s, 1, H, offsets=(0, -1))
        run.check(f"ext.T{q}.M", f"Ext^i_A(T_{q},M) != 0 exactly for i = -q, -q-1 {tag} on [1,{H}]", "PAPER",
                  neg, lambda T=TA: ext_into_M(T, sc.famA, H).nonzero(1, H))
        run.check(f"tor.Lstar.T{q}", f"Tor_i^B(L*,T_{q}) != 0 exactly for i = -q, -q-1 {tag} on [1,{H}]",
                  "PAPER", neg, lambda T=TB: tor_table(sc.Lstar, T, H).nonzero(1, H))
    if s == 0:
        for q in (-3, -2):
            TA = sc.T(q)
            run.check(f"ext.T{q}.M", f"Ext^i_A(T_{q},M) != 0 exactly for i = -q, -q-1 on [1,{H}]", "PAPER",
                      residue_set(-q, 0, 1, H, offsets=(0, -1)),
                      lambda T=TA: ext_into_M(T, sc.famA, H).nonzero(1, H))
    if s == 4:
        run.check("ext.M.T0.display", f"Ext^i_A(M,T_0) = 0 exactly for i = 1, 2 mod 4 on [1,{H}]", "PAPER",
                  [i for i in range(1, H + 1) if i % 4 in (1, 2)],
                  lambda: [i for i in range(1, H + 1) if not ext_table(sc.famA, sc.T(0), H)[i]])
    # rank of d_i (x) T_q drops to 1 exactly when i = q mod s
    W = sc.W
    run.check("rank.dT", f"rank of d_i (x) T_3 is 1 iff i = 3 {tag}, else 2, on [-{W},{W}]", "PAPER",
              {i: 1 if i in residue_set(3, s, -W, W, offsets=(0,)) else 2 for i in range(-W, W + 1)},
              lambda: tate_image_ranks(sc.famA, sc.T(3), -W, W))


def check_intervals(sc: PaperScenario, run: _Runner, a: int = 2, b: int = 6):
    """Long runs of vanishing and of nonvanishing (only meaningful when s = 0)."""
    if sc.s != 0:
        return
    H = sc.H
    run.check(f"interval.N{a},{b}", f"Ext^i_A(M, N_{{{a},{b}}}) != 0 exactly for i = 0 and {a} <= i <= {b}",
              "PAPER", [0] + list(range(a, b + 1)), lambda: ext_table(sc.famA, sc.N_ab(a, b), H).nonzero(0, H))

    def z():
        t = ext_table(sc.famA, sc.Z_ab(a, b), H)
        return {"inner_zero": all(not t[i] for i in range(a + 1, b)), "ends": [bool(t[a]), bool(t[b])],
                "zero": bool(t[0])}

    run.check(f"interval.Z{a},{b}", f"Ext^i_A(M, Z_{{{a},{b}}}) = 0 for {a} < i < {b}, != 0 at {a}, {b} and 0",
              "PAPER", {"inner_zero": True, "ends": [True, True], "zero": True}, z)
    run.check(f"interval.gap.Z{a},{b}", f"longest run of vanishing Ext(M, Z_{{{a},{b}}}) has length {b - a - 1}",
              "DERIVED", b - a - 1, lambda: extract_pattern(ext_table(sc.famA, sc.Z_ab(a, b), H), 0, 0, H).max_gap)


def check_V(sc: PaperScenario, run: _Runner):
    H, W = sc.H, sc.W
    run.check("tor.M.V", f"Tor_i^A(M,V) = 0 for 1 <= i <= {H}", "PAPER", [],
              lambda: tor_table(sc.famA, sc.V, H).nonzero(1, H))
    run.check("ext.M.V", f"Ext^i_A(M,V) != 0 for 1 <= i <= {H}", "PAPER", list(range(1, H + 1)),
              lambda: ext_table(sc.famA, sc.V, H).nonzero(1, H))
    run.check("tor.L.V", f"Tor_i^B(L,V) = 0 for 1 <= i <= {H}", "PAPER", [],
              lambda: tor_table(sc.famB, sc.VB, H).nonzero(1, H))
    run.check("ext.L.V", f"Ext^i_B(L,V) != 0 for 1 <= i <= {H}", "PAPER", list(range(1, H + 1)),
              lambda: ext_table(sc.famB, sc.VB, H).nonzero(1, H))

    def tate():
        tt, te = tate_tables(sc.famA, sc.V, W)
        return {"tor_nonzero": tt.nonzero(), "ext_zero": [i for i in range(-W, W + 1) if not te[i]]}

    run.check("tate.M.V", f"Tate Tor_i(M,V) = 0 and Tate Ext^i(M,V) != 0 for all i in [-{W},{W}]", "PAPER",
              {"tor_nonzero": [], "ext_zero": []}, tate)
    Vd = matlis_dual(sc.V)
    run.check("matlis.M.V", f"dim Tor_i(M,V^v) = dim Ext^i(M,V) for 0 <= i <= {H}", "PAPER",
              ext_table(sc.famA, sc.V, H).dims, lambda: tor_table(sc.famA, Vd, H).dims)
    run.check("matlis.M.V.ext", f"dim Ext^i(M,V^v) = dim Tor_i(M,V) for 0 <= i <= {H}", "PAPER",
              tor_table(sc.famA, sc.V, H).dims, lambda: ext_table(sc.famA, Vd, H).dims)


def check_tate_T(sc: PaperScenario, run: _Runner):
    W, s = sc.W, sc.s
    tag = f"mod {s}" if s else "with s = 0"
    for q in _qs(sc)[:2]:
        exp = residue_set(q, s, -W, W)

        def both(q=q):
            tt, te = tate_tables(sc.famA, sc.T(q), W)
            return {"ext": te.nonzero(), "tor": tt.nonzero()}

        run.check(f"tate.M.T{q}", f"Tate Ext and Tor of (M,T_{q}) != 0 exactly for i = q-1, q {tag} on [-{W},{W}]",
                  "PAPER", {"ext": exp, "tor": exp}, both)


def check_paths(sc: PaperScenario, run: _Runner, hi: int = 12, direct_depth: int = DIRECT_DEPTH):
    """The explicit complex and general resolutions must give the same tables."""
    qs = _qs(sc)
    pairs = [(f"M,T{q}", sc.famA, sc.M, sc.T(q)) for q in qs]
    pairs += [("M,V", sc.famA, sc.M, sc.V), ("M,k", sc.famA, sc.M, sc.kA)]
    pairs += [(f"L,T{q}", sc.famB, sc.L, sc.T(q, "B")) for q in qs]
    pairs += [("L,V", sc.famB, sc.L, sc.VB)]
    for label, fam, Mod, N in pairs:
        for fn, tag in ((ext_table, "Ext"), (tor_table, "Tor")):
            run.check(f"paths.{tag}.{label}", f"{tag}({label}): resolution and complex agree on [1,{hi}]",
                      "DERIVED", fn(fam, N, hi).dims, lambda fn=fn, Mod=Mod, N=N: fn(Mod, N, hi).dims,
                      compare=lambda e, a: all(e[i] == a[i] for i in range(1, hi + 1)))
    # Ext(T_q, M): the dual-complex route against a resolution of the Matlis dual of M
    Mv = matlis_dual(sc.M, name="M^v")
    for q in qs[:2]:
        T = sc.T(q)
        run.check(f"paths.ExtTM.matlis.T{q}", f"Ext(T_{q},M) via M* equals Ext(M^v,T_{q}^v) on [1,{hi}]",
                  "DERIVED", ext_into_M(T, sc.famA, hi).dims,
                  lambda T=T: ext_table(Mv, matlis_dual(T), hi).dims,
                  compare=lambda e, a: all(e[i] == a[i] for i in range(1, hi + 1)))
    if direct_depth > 0:
        T = sc.T(qs[1])
        run.check(f"paths.ExtTM.direct.T{qs[1]}",
                  f"Ext(T_{qs[1]},M) via M* equals a direct resolution of T_{qs[1]} on [1,{direct_depth}]",
                  "DERIVED", ext_into_M(T, sc.famA, direct_depth).dims,
                  lambda: ext_table(T, sc.M, direct_depth).dims,
                  compare=lambda e, a: all(e[i] == a[i] for i in range(1, direct_depth + 1)))
    # Tate groups agree with absolute ones in positive degrees
    T = sc.T(qs[0])
    run.check("paths.tate.abs", f"Tate and absolute Ext(M,T_{qs[0]}) agree on [1,{sc.W}]", "PAPER",
              ext_table(sc.M, T, sc.W).dims, lambda: tate_tables(sc.famA, T, sc.W)[1].dims,
              compare=lambda e, a: all(e[i] == a[i] for i in range(1, sc.W + 1)))


def check_rigidity(sc: PaperScenario, run: _Runner, span: int = 15):
    """Window form of the rigidity bound; it needs a of infinite order."""
    if sc.s != 0:
        return
    for label, N in (("T1", sc.T(1)), ("T3", sc.T(3)), ("V", sc.V)):
        def scan(N=N):
            tor = tor_table(sc.famA, N, span)
            sc_ = omega_rank_scan(N, -span, span, sc.famA, tor=tor, tor_window=(1, span))
            return {"deficiency_ok": sc_.bound_ok, "tor_bound_ok": sc_.tor_bound_ok}

        run.check(f"rigidity.{label}", f"for N = {label}: rank drops at most c(N) times on [-{span},{span}]"
                  f" and at most 2c(N) nonzero Tor on [1,{span}] when one vanishes", "PAPER",
                  {"deficiency_ok": True, "tor_bound_ok": True}, scan)


def check_negative_control(run: _Runner, field="Q", alpha=2):
    """A perturbed relation set must break at least one structural check."""
    bad = list(bundled("A.json").relations)
    bad[1] = "x1*x4 - x2*x4"

    def broken():
        sc = build_scenario(field, alpha, relations=bad)
        inner = ReproductionReport(sc.describe())
        r = _Runner(inner)
        check_algebras(sc, r)
        check_exactness(sc, r, 2)
        return sorted(c.name for c in inner.failures())

    run.check("control.perturbed", "perturbing one relation breaks a Gorenstein or exactness check", "TRIVIAL",
              True, broken, compare=lambda e, a: any(n.startswith(("exact.", "A.gorenstein")) for n in a))


def reproduce_all(sc: PaperScenario, betti_depths: dict | None = None, betti_field=None,
                  direct_depth: int = DIRECT_DEPTH, negative_control: bool = True) -> ReproductionReport:
    t = time.perf_counter()
    rep = ReproductionReport(sc.describe())
    run = _Runner(rep)
    check_algebras(sc, run)
    check_exactness(sc, run, sc.W)
    check_hilbert(sc, run)
    check_betti(sc, run, betti_depths, betti_field)
    check_patterns(sc, run)
    check_intervals(sc, run)
    check_V(sc, run)
    check_tate_T(sc, run)
    check_paths(sc, run, min(12, sc.H), direct_depth)
    check_rigidity(sc, run, sc.H)
    if negative_control:
        check_negative_control(run)
    rep.seconds = time.perf_counter() - t
    return rep


def load_scenario(path, H=None, W=None) -> PaperScenario:
    """A scenario file: {"algebra": "A.json", "field": ..., "alpha": ..., "steps": H, "window": W}."""
    from pathlib import Path
    from .document import DocumentError, bundled_path
    p = Path(path)
    if not p.exists():
        p = bundled_path(p.name) or p
    try:
        raw = json.loads(p.read_text())
    except FileNotFoundError as exc:
        raise DocumentError("/", f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError("/", f"malformed JSON: {exc.msg}") from exc
    for key in ("field", "alpha"):
        if key not in raw:
            raise DocumentError(f"/{key}", "required property missing")
    return build_scenario(raw["field"], raw["alpha"], H or raw.get("steps", 15), W or raw.get("window", 8))


__all__ = ["PaperScenario", "ReproductionReport", "Check", "build_scenario", "reproduce_all", "residue_set",
           "load_scenario", "BASIS_A", "BASIS_B"]
