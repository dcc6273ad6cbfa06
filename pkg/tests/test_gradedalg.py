import itertools

import numpy as np
import pytest

from gorhom.gradedalg import (AlgebraPresentation, CapExceededError, GradedAlgebra, check_basis,
                              is_gorenstein_artinian, leading_term_hilbert, multiply, socle_of_algebra)
from gorhom.paperlab import BASIS_A, BASIS_B
from gorhom.polyparse import NotHomogeneousError
from gorhom.scalar import GF, QQ, InvalidUnitError

REL_A = ["a*x1*x3 + x2*x3", "x1*x4 + x2*x4", "x3^2 + a*x1*x5 - x2*x5", "x4^2 + x1*x5 - x2*x5",
         "x1^2", "x2^2", "x3*x4", "x3*x5", "x4*x5", "x5^2"]
VARS = ["x1", "x2", "x3", "x4", "x5"]


def algebra(field=QQ, alpha=2, rels=REL_A, names=VARS, cap=10):
    return GradedAlgebra(AlgebraPresentation.from_strings(field, names, rels, alpha, cap))


@pytest.mark.parametrize("field,alpha", [(QQ, 2), (QQ, 1), (QQ, -3), (GF(5), 2), (GF(32003), 7)])
def test_hilbert_of_A_and_B(field, alpha):
    A = algebra(field, alpha)
    assert list(A.hilbert) == [1, 5, 5, 1]
    B = A.quotient_by_variables(["x5"])
    assert list(B.hilbert) == [1, 4, 3]


def test_trivial_algebra():
    R = algebra(QQ, None, ["x^2"], ["x"])
    assert list(R.hilbert) == [1, 1]
    assert is_gorenstein_artinian(R)


def test_products():
    A = algebra()
    x = [A.var(l) for l in range(5)]
    assert not np.any(multiply(A, x[2], x[3]) != 0)
    assert np.array_equal(A.multiply(x[1], x[2]), A.element("-2*x1*x3"))
    assert np.array_equal(A.multiply(A.one(), x[0]), x[0])


def test_structure_constants_associative_commutative():
    A = algebra(GF(5))
    n = A.dim
    f = A.field
    E = [f.eye(n)[t] for t in range(n)]
    for a, b in itertools.product(range(n), repeat=2):
        assert np.array_equal(A.multiply(E[a], E[b]), A.multiply(E[b], E[a]))
    for a, b, c in itertools.product(range(n), repeat=3):
        assert np.array_equal(A.multiply(A.multiply(E[a], E[b]), E[c]), A.multiply(E[a], A.multiply(E[b], E[c])))
    assert A.relations_vanish()


def test_socle_and_gorenstein():
    A = algebra()
    B = A.quotient_by_variables(["x5"])
    assert socle_of_algebra(A) == [0, 0, 0, 1]
    assert B.socle_dims() == [0, 0, 3]
    assert A.is_gorenstein_artinian() and not B.is_gorenstein_artinian()


def test_listed_bases():
    A = algebra()
    assert check_basis(A, BASIS_A)
    assert check_basis(A.quotient_by_variables(["x5"]), BASIS_B)
    assert not check_basis(A, ["1", "x1"])
    # right count, dependent
    assert not check_basis(A, BASIS_A[:-1] + ["x3*x4"])


def test_relations_look_like_a_groebner_basis():
    A = algebra()
    assert leading_term_hilbert(A) == [1, 5, 5, 1]


def test_errors():
    with pytest.raises(NotHomogeneousError):
        algebra(QQ, None, ["x^2 + x"], ["x"])
    with pytest.raises(CapExceededError):
        algebra(QQ, None, ["x*y"], ["x", "y"], cap=6)
    with pytest.raises(InvalidUnitError):
        algebra(QQ, 0)


def test_fine_grading_weights():
    A = algebra()
    # every relation is weight homogeneous
    for r in A.presentation.relations:
        ws = {A.weight(e) for e in r.terms}
        assert len(ws) == 1
    B = A.quotient_by_variables(["x5"])
    assert B.lattice.rank == 1
