import numpy as np
import pytest

from gorhom.gradedmod import (AlgebraMatrix, FreeModule, HomogeneityError, ModuleError, cyclic_quotient,
                              direct_sum, extend_scalars, free_module_as_explicit, matlis_dual, quotient_by_ideal,
                              realize_cokernel, realize_image, realize_kernel, restrict_scalars, star_dual,
                              zero_module)
from gorhom.paperlab import build_scenario
from gorhom.scalar import GF, QQ

T_GENS = ["x1 - x2", "x1 - a^q*x3", "x1 - x4", "x5"]


@pytest.fixture(scope="module")
def sc():
    return build_scenario(QQ, 2)


def test_M_image_and_cokernel(sc):
    A = sc.A
    d0, d1 = sc.famA.d(0), sc.famA.d(1)
    M1 = realize_image(A, d0)
    M2 = realize_cokernel(A, d1)
    assert M1.hilbert() == {1: 2, 2: 8, 3: 2}
    assert M2.hilbert() == {1: 2, 2: 8, 3: 2}
    M1.check()
    M2.check()


def test_L_and_duals(sc):
    assert sc.L.hilbert() == {1: 2, 2: 6}
    assert sc.Mstar.normalized(1).hilbert() == {1: 2, 2: 8, 3: 2}
    assert sc.Lstar.normalized(1).hilbert() == {1: 2, 2: 6}
    assert sc.Mstar.dim == matlis_dual(sc.M).dim == 12


def test_T_q_and_k(sc):
    for q in (-2, 0, 3):
        T = cyclic_quotient(sc.A, T_GENS, params={"q": q})
        assert T.hilbert() == {0: 1, 1: 1}
        assert T.c_invariant() == 1
        assert {d: n for d, n in T.socle_dims().items() if n} == {1: 1}
        TB = extend_scalars(T, sc.B)
        assert TB.hilbert() == {0: 1, 1: 1}
    assert sc.kA.c_invariant() == 0


def test_U_and_V(sc):
    assert sc.U.hilbert() == {0: 2, 1: 4}
    assert sc.V.hilbert() == {0: 2, 1: 2}
    assert sc.V.c_invariant() == 2
    assert {d: n for d, n in sc.V.socle_dims().items() if n} == {1: 2}
    assert sc.VB.hilbert() == {0: 2, 1: 2}


def test_direct_sums(sc):
    N = direct_sum([sc.T(2), sc.T(3)])
    assert N.hilbert() == {0: 2, 1: 2}
    Z = direct_sum([sc.T(1), sc.T(4)])
    assert Z.hilbert() == {0: 2, 1: 2}
    Z.check()


def test_trivial_constructions(sc):
    A = sc.A
    F1 = FreeModule(A, [0])
    ident = AlgebraMatrix(F1, F1, _unit(A))
    assert realize_cokernel(A, ident).dim == 0
    zero = AlgebraMatrix(F1, F1, A.field.zeros((1, 1, A.dim)))
    assert realize_kernel(A, zero).hilbert() == {0: 1, 1: 5, 2: 5, 3: 1}
    Afree = free_module_as_explicit(F1)
    assert star_dual(Afree).dim == A.dim
    assert star_dual(realize_cokernel(A, ident), ident).dim == 0
    assert zero_module(A).dim == 0


def _unit(A):
    e = A.field.zeros((1, 1, A.dim))
    e[0, 0, 0] = A.field.one
    return e


def test_matlis_duality(sc):
    Ad = matlis_dual(free_module_as_explicit(FreeModule(sc.A, [0])))
    assert list(reversed(Ad.dims)) == [1, 5, 5, 1] and Ad.lo == -3
    k = sc.kA
    assert matlis_dual(k).hilbert() == {0: 1}
    Td = matlis_dual(sc.T(1))
    assert Td.hilbert() == {-1: 1, 0: 1}
    MM = matlis_dual(matlis_dual(sc.M))
    assert MM.hilbert() == sc.M.hilbert()
    MM.check()


def test_action_checks(sc):
    for N in (sc.M, sc.L, sc.V, sc.Mstar, sc.U):
        N.check()


def test_restrict_requires_annihilation(sc):
    with pytest.raises(ModuleError):
        restrict_scalars(sc.M, sc.B)


def test_homogeneity_enforced(sc):
    with pytest.raises((HomogeneityError, ModuleError, ValueError)):
        AlgebraMatrix.from_polynomials(sc.A, [["x1", "x1*x2"]], target_degrees=[0], source_degrees=[1, 1])


def test_quotient_with_power(sc):
    V = quotient_by_ideal(sc.U, ["x5"], 2)
    assert V.hilbert() == {0: 2, 1: 2}


def test_over_prime_field():
    sc = build_scenario(GF(5), 2)
    assert sc.M.hilbert() == {1: 2, 2: 8, 3: 2}
    assert sc.V.hilbert() == {0: 2, 1: 2}


def test_empty_sum(sc):
    assert direct_sum([], alg=sc.A).dim == 0
    with pytest.raises(ModuleError):
        direct_sum([])
    with pytest.raises(ModuleError):
        direct_sum([sc.M, sc.L])
