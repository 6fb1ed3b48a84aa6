import json
from fractions import Fraction

import pytest

from siegeleis.cyclotomic import CycNum
from siegeleis.linalg import (CycMatrix, Poly, intersect_spans, poly_gcd,
                              poly_lcm)


def test_kernel_example():
    A = CycMatrix([[1, 1], [1, 1]])
    basis = A.kernel()
    assert len(basis) == 1
    v = basis[0]
    assert (v[0] + v[1]).is_zero() and not v[0].is_zero()
    for w in basis:
        assert all(e.is_zero() for e in A.mat_vec(w))


def test_min_poly_examples():
    D = CycMatrix.diagonal([1, 8, 32])
    assert D.min_poly() == Poly.from_roots([1, 8, 32])
    # repeated eigenvalue with a Jordan block: (x-2)^2 (x-5)
    B = CycMatrix([[2, 1, 0], [0, 2, 0], [0, 0, 5]])
    p = B.min_poly()
    assert p == Poly.from_roots([2, 2, 5])
    # the minimal polynomial annihilates the matrix exactly
    acc = CycMatrix.zeros(3, 3)
    power = CycMatrix.identity(3)
    for c in p.coeffs:
        acc = acc + power * c
        power = power @ B
    assert acc.is_zero()


def test_commutator():
    assert not CycMatrix.diagonal([1, 2]).commutes_with(CycMatrix([[0, 1], [0, 0]]))
    assert CycMatrix.diagonal([1, 2]).commutes_with(CycMatrix.diagonal([3, 4]))


def test_eigen_triangular():
    T = CycMatrix([[1, Fraction(1, 2), Fraction(1, 2)], [0, 8, 6], [0, 0, 32]])
    ed = T.eigen()
    assert ed.unsplit is None
    assert sorted(v.as_fraction() for v in ed.eigenvalues()) == [1, 8, 32]
    for lam, basis in ed.pairs:
        assert len(basis) == 1
        image = T.mat_vec(basis[0])
        assert all((x - lam * y).is_zero() for x, y in zip(image, basis[0]))


def test_eigen_unsplit_reported():
    # rotation by 90 degrees has eigenvalues +-i, invisible over Q
    R = CycMatrix([[0, -1], [1, 0]])
    ed = R.eigen()
    assert ed.pairs == [] and ed.unsplit is not None and ed.unsplit.degree == 2
    # with i in the working field the same matrix-shape splits
    i = CycNum.root_of_unity(4)
    ed2 = CycMatrix.diagonal([i, -i]).eigen()
    assert ed2.unsplit is None and len(ed2.pairs) == 2


def test_eigen_jordan_dimension():
    B = CycMatrix([[2, 1], [0, 2]])
    ed = B.eigen()
    assert len(ed.pairs) == 1
    lam, basis = ed.pairs[0]
    assert lam == 2 and len(basis) == 1  # geometric multiplicity 1


def test_matrix_shapes_and_errors():
    with pytest.raises(ValueError):
        CycMatrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        CycMatrix([[1, 2]]) @ CycMatrix([[1, 2]])
    with pytest.raises(ValueError):
        CycMatrix([[1, 2]]).min_poly()
    with pytest.raises(ValueError):
        CycMatrix([[1, 2]]) + CycMatrix([[1], [2]])


def test_poly_arithmetic():
    p = Poly.from_roots([1, 2])
    q = Poly.from_roots([2, 3])
    assert poly_gcd(p, q) == Poly.from_roots([2])
    assert poly_lcm(p, q) == Poly.from_roots([1, 2, 3])
    quo, rem = (p * q).divmod(q)
    assert quo == p and rem.is_zero()
    assert p(2).is_zero() and p(5) == 12


def test_vec_mat_row_action():
    M = CycMatrix([[1, 2], [0, 3]])
    assert [x.as_fraction() for x in M.vec_mat([1, 1])] == [1, 5]
    assert [x.as_fraction() for x in M.mat_vec([1, 1])] == [3, 3]


def test_intersect_spans():
    one = CycNum.one()
    zero = CycNum.zero()
    e1 = [one, zero, zero]
    e2 = [zero, one, zero]
    e3 = [zero, zero, one]
    plane_a = [e1, e2]
    plane_b = [e2, e3]
    inter = intersect_spans(plane_a, plane_b)
    assert len(inter) == 1
    v = inter[0]
    assert v[0].is_zero() and v[2].is_zero() and not v[1].is_zero()
    assert intersect_spans([e1], [e3]) == []


def test_matrix_json_round_trip():
    M = CycMatrix([[CycNum.root_of_unity(4), Fraction(1, 2)], [0, 7]])
    blob = json.dumps(M.to_json())
    assert CycMatrix.from_json(json.loads(blob)) == M
