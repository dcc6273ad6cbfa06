import pytest

from gorhom.gradedmod import FreeModule, free_module_as_explicit, zero_module
from gorhom.resolve import (BettiTable, ChainComplex, ResourceLimitError, StructureError, betti_numbers,
                            is_linear_resolution, minimal_free_resolution, presentation_of, series_expand,
                            verify_exactness)


def test_series_expand():
    assert series_expand([1], [1, -1], 5) == [1] * 6
    assert series_expand([1], [1, -4, 1], 3) == [1, 4, 15, 56]
    assert series_expand([1], [1, -4, 3], 3) == [1, 4, 13, 40]
    assert series_expand([1], [1, -5, 5, -1], 3) == [1, 5, 20, 76]
    with pytest.raises(ZeroDivisionError):
        series_expand([1], [0, 1], 3)


def test_residue_field_over_A(scQ):
    r = minimal_free_resolution(scQ.kA, 3)
    assert r.betti.totals() == [1, 5, 20, 76]
    assert r.betti.is_linear(0)
    assert r.is_minimal()
    r.chain_complex().check_squares()


def test_M_and_L_are_linear(scQ):
    for N in (scQ.M, scQ.L):
        r = minimal_free_resolution(N, 10)
        assert r.betti.totals() == [2] * 11
        assert is_linear_resolution(r.betti, 1)
        assert not is_linear_resolution(r.betti, 0)


def test_T_q_linear(scQ):
    r = minimal_free_resolution(scQ.T(3), 3)
    assert r.betti.totals() == [1, 4, 15, 56]
    assert r.betti.is_linear(0)


def test_zero_and_free(scQ):
    r = minimal_free_resolution(zero_module(scQ.A), 4)
    assert r.betti.totals() == [0] * 5
    F = free_module_as_explicit(FreeModule(scQ.A, [0, 1]))
    assert betti_numbers(F, 3) == [2, 0, 0, 0]


def test_nonlinear_table():
    bt = BettiTable({(0, 0): 1, (0, 1): 1}, 0)
    assert not is_linear_resolution(bt, 0)
    assert "0,1,1" in bt.to_csv()


def test_weighted_and_unweighted_agree(scP):
    a = minimal_free_resolution(scP.kA, 4, weights=True).betti.totals()
    b = minimal_free_resolution(scP.kA, 4, weights=False).betti.totals()
    assert a == b == [1, 5, 20, 76, 285]


def test_budget_guard(scQ):
    with pytest.raises(ResourceLimitError):
        minimal_free_resolution(scQ.kA, 6, budget=1000)


def test_presentation_of(scQ):
    p = presentation_of(scQ.V)
    assert p.target.rank == 2


def test_exactness_of_periodic_complex(scQ):
    C = scQ.famA.window(-5, 5)
    assert set(verify_exactness(C, (-4, 4)).values()) == {0}
    assert set(verify_exactness(C.dual(), (-4, 4)).values()) == {0}
    assert set(verify_exactness(C.change_ring(scQ.B), (-4, 4)).values()) == {0}
    assert all(C.image_ranks(i) == 12 for i in range(-4, 5))


def test_exactness_trivial(scQ):
    A = scQ.A
    F = FreeModule(A, [0])
    e = A.field.zeros((1, 1, A.dim))
    e[0, 0, 0] = A.field.one
    from gorhom.gradedmod import AlgebraMatrix
    C = ChainComplex(A, {0: F, 1: F}, {1: AlgebraMatrix(F, F, e)}, 0, 1)
    assert verify_exactness(C, (0, 1)) == {0: 0, 1: 0}


def test_broken_complex_detected(scQ):
    from gorhom.gradedmod import AlgebraMatrix
    A = scQ.A
    d1 = scQ.famA.d(1)
    # d_1 again, one degree up, in place of d_2: the square is not zero
    fake = AlgebraMatrix(FreeModule(A, [2, 2]), FreeModule(A, [3, 3]), d1.entries)
    C = ChainComplex(A, {0: d1.target, 1: d1.source, 2: fake.source}, {1: d1, 2: fake}, 0, 2)
    with pytest.raises(StructureError):
        verify_exactness(C, (1, 1))
