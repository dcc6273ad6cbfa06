from fractions import Fraction

import numpy as np
import pytest

from gorhom import kernels
from gorhom.scalar import GF, QQ, FieldError, InvalidUnitError, RowBasis, field_from_spec, order_of_unit


@pytest.mark.parametrize("f", [QQ, GF(5), GF(32003)])
def test_rank_nullity_small(f):
    a = f.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    r = f.rank(a)
    k = f.kernel(a)
    assert r + k.shape[1] == 3
    assert f.is_zero_array(f.matmul(a, k))


def test_rational_rref_exact():
    a = QQ.array([[2, 1], [1, 3]])
    rows, piv = QQ.rref(a)
    assert list(piv) == [0, 1]
    assert rows[0, 0] == 1 and rows[1, 1] == 1 and rows[0, 1] == 0
    x = QQ.solve(a, QQ.array([[1], [0]]))
    assert Fraction(str(x[0, 0])) == Fraction(3, 5)


def test_prime_field_inverse_and_parse():
    f = GF(7)
    assert f.mul(f(3), f.inv(f(3))) == 1
    assert f.parse("-1") == 6
    assert f("1/2") == 4
    with pytest.raises(InvalidUnitError):
        f.inv(f(0))


def test_field_specs():
    assert field_from_spec("Q") is QQ
    assert field_from_spec({"kind": "Fp", "p": 5}).p == 5
    assert field_from_spec("F5").p == 5
    with pytest.raises(FieldError):
        field_from_spec({"kind": "Fp", "p": 6})
    with pytest.raises(FieldError):
        field_from_spec("R")


def test_order_of_unit():
    assert order_of_unit(QQ(2), QQ) == 0
    assert order_of_unit(QQ(1), QQ) == 1
    assert order_of_unit(QQ(-1), QQ) == 2
    assert order_of_unit(GF(5)(2), GF(5)) == 4
    assert order_of_unit(GF(5)(4), GF(5)) == 2


@pytest.mark.parametrize("f", [QQ, GF(5), GF(32003)])
def test_rowbasis_insert_and_stop(f):
    rb = RowBasis(f, 4)
    rows = f.array([[1, 0, 0, 1], [2, 0, 0, 2], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 1]])
    flags = rb.insert(rows, stop=3)
    assert list(flags) == [True, False, True, True, False]
    assert rb.rank == 3
    assert rb.contains(f.array([[1, 1, 1, 1]]))[0]
    e, piv = rb.echelon()
    assert f.rank(e) == 3 and len(piv) == 3


def test_rowbasis_many_blocks_mod_p():
    f = GF(101)
    rng = np.random.default_rng(1)
    a = rng.integers(0, 101, size=(400, 300))
    rb = RowBasis(f, 300)
    for s in range(0, 400, 37):
        rb.insert(a[s:s + 37])
    assert rb.rank == f.rank(a)
    assert not np.any(rb.reduce(a))


def test_backends_agree():
    rng = np.random.default_rng(2)
    p = 32003
    a = rng.integers(0, p, size=(60, 80), dtype=np.int64)
    a[10] = (a[3] * 5 + a[4]) % p
    x, y = a.copy(), a.copy()
    r1, _ = kernels.rref_numpy(x, p)
    r2, _ = kernels.rref_modp(y, p)
    assert r1 == r2 == 59
    assert np.array_equal(x[:r1] % p, y[:r2] % p)


def test_matmul_modp_exact_large_prime():
    p = 2**31 - 1
    a = np.full((3, 50), p - 1, dtype=np.int64)
    b = np.full((50, 2), p - 1, dtype=np.int64)
    assert np.all(kernels.matmul_modp(a, b, p) == 50 % p)
