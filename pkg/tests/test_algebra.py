import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from descentkit.algebra import (
    Algebra,
    AlgebraMap,
    IdealData,
    check_local_augmented,
    ideal_generated,
    ideal_power,
    is_nilpotent_ideal,
    opposite_algebra,
    quotient_algebra,
    validate_algebra,
    validate_algebra_map,
)
from descentkit.errors import MissingAugmentation, NotTwoSided
from descentkit.field import make_field
from descentkit.gallery import cyclic_group_algebra, truncated_polynomial
from descentkit.linalg import Subspace

from conftest import upper_triangular_algebra

GF2 = make_field(2)
GF3 = make_field(3)


def y_squared_minus_one():
    # F3[y]/(y^2 - 1) on the basis {1, y}, augmentation y -> 1
    f = GF3
    mul = f.zeros(2, 2, 2)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 1] = mul[1, 1, 0] = 1
    return Algebra(f, mul, f.unit_vector(2, 0), ("1", "y"), f.array([1, 1]))


def test_truncated_valid_and_corrupted():
    b = truncated_polynomial(GF2, 4)
    assert validate_algebra(b).ok
    bad = truncated_polynomial(GF2, 4)
    bad.mul[1, 1] = GF2.unit_vector(4, 0)  # x * x = 1
    rep = validate_algebra(bad)
    assert "associativity" in rep.kinds()
    i, j, k = rep.violations[rep.kinds().index("associativity")].witness
    lhs = bad.multiply(bad.multiply(bad.basis_vector(i), bad.basis_vector(j)), bad.basis_vector(k))
    rhs = bad.multiply(bad.basis_vector(i), bad.multiply(bad.basis_vector(j), bad.basis_vector(k)))
    assert not np.array_equal(lhs, rhs)


def test_group_algebra_valid():
    assert validate_algebra(cyclic_group_algebra(4, GF2)).ok
    assert validate_algebra(cyclic_group_algebra(3, GF3)).ok


def test_opposite():
    b = truncated_polynomial(GF2, 4)
    assert np.array_equal(opposite_algebra(b).mul, b.mul)
    u = upper_triangular_algebra(GF2)
    assert np.array_equal(opposite_algebra(opposite_algebra(u)).mul, u.mul)
    op = opposite_algebra(u)
    # E11 E12 = E12 becomes E12 * E11 = E12 in the opposite order
    assert op.mul[1, 0, 1] == 1 and op.mul[0, 1, 1] == 0
    assert validate_algebra(op).ok


def test_ideal_generated():
    b = truncated_polynomial(GF2, 4)
    k = ideal_generated(b, Subspace.span(GF2, 4, GF2.array([[0, 0, 1, 0]])), "left")
    assert k.space.basis.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1]]
    assert ideal_generated(b, Subspace.span(GF2, 4, b.unit), "two_sided").dim == 4
    assert ideal_generated(b, Subspace.zero(GF2, 4), "left").dim == 0


def test_nilpotency():
    b = truncated_polynomial(GF2, 4)
    k = IdealData(b, Subspace.span(GF2, 4, GF2.array([[0, 0, 1, 0], [0, 0, 0, 1]])), "two_sided")
    assert is_nilpotent_ideal(b, k) == (True, 2)
    assert is_nilpotent_ideal(b, IdealData(b, Subspace.zero(GF2, 4), "two_sided")) == (True, 1)
    a = y_squared_minus_one()
    ym1 = IdealData(a, Subspace.span(GF3, 2, GF3.array([[-1, 1]])), "two_sided")
    # (y - 1)^2 = y^2 - 2y + 1 = 2 - 2y = -2 (y - 1)
    sq = a.multiply(GF3.array([2, 1]), GF3.array([2, 1]))
    assert sq.tolist() == GF3.array([2, -2]).tolist()
    assert is_nilpotent_ideal(a, ym1) == (False, None)


def test_check_local():
    assert check_local_augmented(truncated_polynomial(GF2, 4))
    assert not check_local_augmented(y_squared_minus_one())
    assert check_local_augmented(truncated_polynomial(GF3, 1))
    with pytest.raises(MissingAugmentation):
        check_local_augmented(upper_triangular_algebra(GF2))


def test_quotient_algebra():
    b = truncated_polynomial(GF2, 4)
    k = IdealData(b, Subspace.span(GF2, 4, GF2.array([[0, 0, 1, 0], [0, 0, 0, 1]])), "two_sided")
    c, g = quotient_algebra(b, k)
    assert c.dim == 2 and np.array_equal(c.mul, truncated_polynomial(GF2, 2).mul)
    assert g(b.basis_vector(1)).tolist() == [0, 1]
    assert validate_algebra(c).ok and validate_algebra_map(g).ok
    c0, g0 = quotient_algebra(b, IdealData(b, Subspace.zero(GF2, 4), "two_sided"))
    assert np.array_equal(c0.mul, b.mul) and np.array_equal(g0.matrix, GF2.eye(4))
    u = upper_triangular_algebra(GF2)
    left = ideal_generated(u, Subspace.span(GF2, 3, GF2.array([[1, 0, 0]])), "left")
    assert left.space.basis.tolist() == [[1, 0, 0]]
    # E11 . E12 = E12 escapes the left ideal span{E11}
    assert u.multiply(u.basis_vector(0), u.basis_vector(1)).tolist() == [0, 1, 0]
    with pytest.raises(NotTwoSided):
        quotient_algebra(u, left)


def test_algebra_maps():
    a = truncated_polynomial(GF2, 2, var="y")
    b = truncated_polynomial(GF2, 4)
    m = GF2.zeros(4, 2)
    m[0, 0] = m[2, 1] = 1
    assert validate_algebra_map(AlgebraMap(a, b, m)).ok
    assert validate_algebra_map(AlgebraMap(b, b, GF2.eye(4))).ok
    m2 = GF2.zeros(4, 2)
    m2[0, 0] = m2[1, 1] = 1  # y -> x: f(y)^2 = x^2 but f(y^2) = 0
    rep = validate_algebra_map(AlgebraMap(a, b, m2))
    assert rep.kinds() == ["multiplicative"]


def test_graded_validation():
    b = truncated_polynomial(GF2, 4, deg=1)
    assert validate_algebra(b).ok
    from descentkit.algebra import Grading

    b.grading = Grading.natural([0, 1, 3, 3])
    assert "grading_multiplication" in validate_algebra(b).kinds()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(0, 1), min_size=6, max_size=6))
def test_quotients_are_valid(t, gens):
    b = truncated_polynomial(GF2, t)
    rows = GF2.array(gens[:t]).reshape(1, t)
    k = ideal_generated(b, Subspace.span(GF2, t, rows), "two_sided")
    k2 = ideal_generated(b, k.space, "two_sided")
    assert k2.space == k.space  # idempotent
    c, g = quotient_algebra(b, k)
    assert validate_algebra(c).ok
    assert validate_algebra_map(g).ok
    ok, idx = is_nilpotent_ideal(b, k)
    if ok:
        dims = [ideal_power(b, k.space, n).dim for n in range(1, idx + 1)]
        assert dims[-1] == 0
        assert all(x > y for x, y in zip(dims, dims[1:]))
