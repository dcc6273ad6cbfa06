import pytest

from gorhom.gradedmod import FreeModule, free_module_as_explicit, matlis_dual
from gorhom.homology import (AlgebraMismatchError, HomologyTable, ext_into_M, ext_table, extract_pattern,
                             omega_rank_scan, tate_image_ranks, tate_tables, tor_table)


def test_tor_and_ext_small(scQ):
    t = tor_table(scQ.famA, scQ.T(3), 15)
    assert t.nonzero(1, 15) == [2, 3]
    e = ext_table(scQ.famA, scQ.T(3), 15)
    assert e.nonzero() == [0, 2, 3]
    assert extract_pattern(e, 0).summary() == "nonzero={0,2,3} residues=n/a"


def test_free_left_argument(scQ):
    F = free_module_as_explicit(FreeModule(scQ.A, [0]))
    assert tor_table(F, scQ.V, 4).nonzero(1, 4) == []
    assert ext_table(F, scQ.T(1), 4).nonzero(1, 4) == []


def test_bigraded_csv_roundtrip(scQ):
    t = tor_table(scQ.M, scQ.T(2), 6)
    for big in (False, True):
        back = HomologyTable.from_csv(t.to_csv(bigraded=big))
        assert back.dims == t.dims
    assert sum(t.graded[2].values()) == t.dims[2]


def test_tor_symmetry(scQ):
    a = tor_table(scQ.M, scQ.V, 2).dims
    b = tor_table(scQ.V, scQ.M, 2).dims
    assert a == b


def test_matlis_identity(scQ):
    for N in (scQ.T(2), scQ.V):
        assert tor_table(scQ.M, matlis_dual(N), 6).dims == ext_table(scQ.M, N, 6).dims


def test_ext_into_M_residues(scF5):
    for q in (0, 1, 2):
        t = ext_into_M(scF5.T(q), scF5.famA, 12)
        want = [i for i in range(1, 13) if (i + q) % 4 in (0, 3)]
        assert t.nonzero(1, 12) == want


def test_tate_windows(scF5):
    tt, te = tate_tables(scF5.famA, scF5.T(1), 10)
    want = [i for i in range(-10, 11) if i % 4 in (0, 1)]
    assert te.nonzero() == want and tt.nonzero() == want
    A = free_module_as_explicit(FreeModule(scF5.A, [0]))
    tt, te = tate_tables(scF5.famA, A, 6)
    assert tt.nonzero() == [] and te.nonzero() == []


def test_rank_pattern(scF5):
    r = tate_image_ranks(scF5.famA, scF5.T(2), -6, 6)
    assert r == {i: 1 if (i - 2) % 4 == 0 else 2 for i in range(-6, 7)}


def test_pattern_extraction():
    t = HomologyTable("Ext", "M", "N", 0, 9, {i: int(i % 4 in (0, 3)) for i in range(10)})
    p = extract_pattern(t, 4)
    assert p.residues == [0, 3] and p.consistent and p.max_gap == 2
    z = HomologyTable("Ext", "M", "0", 0, 5, {i: 0 for i in range(6)})
    p = extract_pattern(z, 0)
    assert p.nonzero == [] and p.max_gap == 0


def test_omega_scan(scQ):
    for N in (scQ.T(1), scQ.V, scQ.kA):
        tor = tor_table(scQ.famA, N, 15)
        s = omega_rank_scan(N, -15, 15, scQ.famA, tor=tor)
        assert s.bound_ok and s.tor_bound_ok
    s = omega_rank_scan(scQ.kA, -5, 5, scQ.famA, tor=tor_table(scQ.famA, scQ.kA, 15))
    assert s.c == 0 and s.tor_vanishing_exists is False


def test_mismatch(scQ, scF5):
    with pytest.raises(AlgebraMismatchError):
        tor_table(scQ.famA, scF5.T(1), 3)
