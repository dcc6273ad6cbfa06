"""Acceptance suite: one test (or group) per exit criterion.

All quantities are dimensions over the base field, so every comparison is
exact equality (TOL = 0).  The terminal summary prints one PASS/FAIL line
per criterion.
"""

import pytest

from gorhom.gradedalg import check_basis
from gorhom.gradedmod import matlis_dual
from gorhom.homology import ext_into_M, ext_table, omega_rank_scan, tate_tables, tor_table
from gorhom.paperlab import BASIS_A, BASIS_B, build_scenario, residue_set
from gorhom.resolve import minimal_free_resolution, series_expand, verify_exactness
from gorhom.scalar import GF, QQ

TOL = 0  # exact arithmetic: dimensions must agree exactly


def close(a, b):
    return abs(a - b) <= TOL


def betti(N, H, p):
    bt = minimal_free_resolution(N, H, keep_differentials=False, keep_last=False).betti
    return bt.totals(), bt.is_linear(p)


def hilb(N, lowest=None):
    lo = N.lo if lowest is None else lowest
    return {lo + i: n for i, n in enumerate(N.dims) if n}


# -- 1 ------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_c1_algebras(scQ):
    A, B = scQ.A, scQ.B
    assert list(A.hilbert) == [1, 5, 5, 1] and A.dim == 12
    assert A.is_gorenstein_artinian()
    assert [n for n in A.socle_dims()] == [0, 0, 0, 1]
    assert list(B.hilbert) == [1, 4, 3] and B.dim == 8
    assert not B.is_gorenstein_artinian()
    assert list(B.socle_dims()) == [0, 0, 3]
    assert check_basis(A, BASIS_A) and len(BASIS_A) == 12
    assert check_basis(B, BASIS_B) and len(BASIS_B) == 8


# -- 2 ------------------------------------------------------------------------


@pytest.mark.criterion(2)
@pytest.mark.parametrize("field", [QQ, GF(5)], ids=["Q", "F5"])
def test_c2_exactness(field):
    sc = build_scenario(field, 2, 8, 8)
    w = 8
    CA = sc.famA.window(-w - 1, w + 1)
    CB = sc.famB.window(-w - 1, w + 1)
    zeros = {i: 0 for i in range(-w, w + 1)}
    for C in (CA, CA.dual(), CB, CB.dual()):
        assert verify_exactness(C, (-w, w)) == zeros
    assert all(close(CA.image_ranks(i), 12) for i in range(-w, w + 1))


# -- 3 ------------------------------------------------------------------------


@pytest.mark.criterion(3)
def test_c3_hilbert(scQ):
    assert hilb(scQ.M) == {1: 2, 2: 8, 3: 2}
    assert hilb(scQ.L) == {1: 2, 2: 6}
    for q in (-2, 0, 1, 3, 8):
        assert hilb(scQ.T(q)) == {0: 1, 1: 1}
        assert hilb(scQ.T(q, "B")) == {0: 1, 1: 1}
    assert hilb(scQ.V) == {0: 2, 1: 2}
    # the duals, shifted to start in degree 1
    assert hilb(scQ.Mstar, 1) == {1: 2, 2: 8, 3: 2}
    assert hilb(scQ.Lstar, 1) == {1: 2, 2: 6}


# -- 4 ------------------------------------------------------------------------


@pytest.mark.criterion(4)
def test_c4_k_over_A(scP):
    got, linear = betti(scP.kA, 8, 0)
    assert got == series_expand([1], [1, -5, 5, -1], 8)
    assert linear


@pytest.mark.criterion(4)
def test_c4_k_over_B(scP):
    got, linear = betti(scP.kB, 8, 0)
    assert got == series_expand([1], [1, -4, 3], 8)
    assert linear


@pytest.mark.criterion(4)
def test_c4_M_and_L(scQ):
    for N in (scQ.M, scQ.L):
        got, linear = betti(N, 15, 1)
        assert got == [2] * 16 and linear


@pytest.mark.criterion(4)
def test_c4_T_and_V(scP):
    got, linear = betti(scP.T(3), 6, 0)
    assert got == series_expand([1], [1, -4, 1], 6) and linear
    assert betti(scP.V, 5, 0)[1]
    assert betti(scP.VB, 5, 0)[1]


# -- 5 ------------------------------------------------------------------------


@pytest.mark.criterion(5)
@pytest.mark.parametrize("q", [1, 3, 5, 8])
def test_c5_infinite_order(scQ, q):
    assert scQ.s == 0
    H = 15
    want = sorted({0, q - 1, q} & set(range(0, H + 1)))
    assert ext_table(scQ.famA, scQ.T(q), H).nonzero(0, H) == want
    assert ext_table(scQ.famB, scQ.T(q, "B"), H).nonzero(0, H) == want
    if q >= 2:
        assert tor_table(scQ.famA, scQ.T(q), H).nonzero(1, H) == [q - 1, q]


# -- 6 ------------------------------------------------------------------------


@pytest.mark.criterion(6)
@pytest.mark.parametrize("q", [0, 1, 2])
def test_c6_order_four(scF5, q):
    assert scF5.s == 4
    H = 20
    want = residue_set(q, 4, 1, H)
    for fam, T in ((scF5.famA, scF5.T(q)), (scF5.famB, scF5.T(q, "B"))):
        assert ext_table(fam, T, H).nonzero(1, H) == want
        assert tor_table(fam, T, H).nonzero(1, H) == want


@pytest.mark.criterion(6)
def test_c6_display_T0(scF5):
    t = ext_table(scF5.famA, scF5.T(0), 20)
    assert [i for i in range(1, 21) if not t[i]] == [i for i in range(1, 21) if i % 4 in (1, 2)]


# -- 7 ------------------------------------------------------------------------


@pytest.mark.criterion(7)
def test_c7_V(scQ):
    H, W = 20, 10
    tor = tor_table(scQ.famA, scQ.V, H)
    ext = ext_table(scQ.famA, scQ.V, H)
    assert tor.nonzero(1, H) == []
    assert ext.nonzero(1, H) == list(range(1, H + 1))
    tt, te = tate_tables(scQ.famA, scQ.V, W)
    assert tt.nonzero() == []
    assert te.nonzero() == list(range(-W, W + 1))
    Vd = matlis_dual(scQ.V)
    tor_d = tor_table(scQ.famA, Vd, H)
    assert all(close(tor_d[i], ext[i]) for i in range(0, H + 1))
    # and the other way round: V^v has vanishing Ext and nonvanishing Tor
    assert ext_table(scQ.famA, Vd, H).nonzero(1, H) == []
    assert tor_d.nonzero(1, H) == list(range(1, H + 1))


# -- 8 ------------------------------------------------------------------------


def _pairs(sc):
    qs = (1, 3, 5, 8) if sc.s == 0 else (0, 1, 2)
    out = [(sc.famA, sc.M, sc.T(q)) for q in qs] + [(sc.famB, sc.L, sc.T(q, "B")) for q in qs]
    out += [(sc.famA, sc.M, sc.V), (sc.famA, sc.M, matlis_dual(sc.V)), (sc.famB, sc.L, sc.VB)]
    return out


@pytest.mark.criterion(8)
@pytest.mark.parametrize("which", ["Q", "F5"])
def test_c8_family_vs_resolution(scQ, scF5, which):
    sc = scQ if which == "Q" else scF5
    hi = 12
    for fam, Mod, N in _pairs(sc):
        for fn in (ext_table, tor_table):
            a, b = fn(fam, N, hi), fn(Mod, N, hi)
            assert all(close(a[i], b[i]) for i in range(1, hi + 1)), (fn.__name__, N.name)


@pytest.mark.criterion(8)
@pytest.mark.parametrize("q", [1, 3])
def test_c8_ext_into_M_direct(scQ, q):
    """Ext(T_q, M) through M* against a resolution of T_q itself, to i = 12."""
    hi = 12
    T = scQ.T(q)
    via = ext_into_M(T, scQ.famA, hi)
    direct = ext_table(T, scQ.M, hi)
    assert all(close(via[i], direct[i]) for i in range(1, hi + 1))


# companions to criterion 8 (not criteria themselves)


@pytest.mark.parametrize("q", [1, 3])
def test_ext_into_M_matlis_route(scQ, q):
    hi = 12
    T = scQ.T(q)
    via = ext_into_M(T, scQ.famA, hi)
    other = ext_table(matlis_dual(scQ.M), matlis_dual(T), hi)
    assert all(via[i] == other[i] for i in range(1, hi + 1))


def test_ext_into_M_direct_shallow(scQ):
    hi = 3
    T = scQ.T(3)
    assert ext_into_M(T, scQ.famA, hi).dims == ext_table(T, scQ.M, hi).dims


# -- 9 ------------------------------------------------------------------------


@pytest.mark.criterion(9)
@pytest.mark.parametrize("name", ["T1", "T3", "V"])
def test_c9_rigidity(scQ, name):
    N = scQ.V if name == "V" else scQ.T(int(name[1:]))
    c = N.c_invariant()
    assert c == (2 if name == "V" else 1)
    span = 15
    tor = tor_table(scQ.famA, N, span)
    nz = tor.nonzero(1, span)
    if any(not tor[j] for j in range(1, span + 1)):
        assert len(nz) <= 2 * c
    scan = omega_rank_scan(N, -span, span, scQ.famA)
    assert len(scan.deficient) <= c


# -- 10 -----------------------------------------------------------------------


@pytest.mark.criterion(10)
def test_c10_property_suites():
    from test_properties import (test_matlis_identity, test_rank_nullity_matrices,
                                 test_resolution_exact_minimal_and_squares, test_tor_symmetry)
    for prop in (test_rank_nullity_matrices, test_resolution_exact_minimal_and_squares, test_tor_symmetry,
                 test_matlis_identity):
        prop()
