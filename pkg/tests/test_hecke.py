import json
from fractions import Fraction
from itertools import combinations

import pytest

from siegeleis.characters import DirichletCharacter
from siegeleis.cyclotomic import CycNum
from siegeleis.eisspace import Partition, enumerate_partitions
from siegeleis.hecke import (HeckeOp, SpaceOperators, compare_eigenvalues,
                             eigen_vector, eigenbasis, eigenvalue_closed_form,
                             hecke_matrix, s_constant, s_operator, s_word)
from siegeleis.linalg import CycMatrix

N2K4 = enumerate_partitions(2, None, 4)


def test_worked_fixture_matrices():
    ops = SpaceOperators(N2K4)
    assert N2K4.basis == (Partition(2, 1, 1), Partition(1, 2, 1), Partition(1, 1, 2))
    T2 = ops.matrix(HeckeOp("T", 2)).mat
    assert T2 == CycMatrix(
        [[1, Fraction(1, 2), Fraction(1, 2)], [0, 8, 6], [0, 0, 32]]
    )
    T1 = ops.matrix(HeckeOp("T1", 2)).mat
    assert T1 == CycMatrix(
        [[3, Fraction(9, 2), Fraction(3, 4)], [0, 66, Fraction(15, 2)], [0, 0, 96]]
    )
    T3 = ops.matrix(HeckeOp("T", 3)).mat
    assert T3 == CycMatrix.diagonal([280, 280, 280])


def test_worked_fixture_eigenbasis():
    ops = SpaceOperators(N2K4)
    for p in (2, 3):
        ops.matrix(HeckeOp("T", p))
        ops.matrix(HeckeOp("T1", p))
    system = eigenbasis(ops)
    corner = system.entry(Partition(2, 1, 1))
    assert corner.vector.coeffs[Partition(2, 1, 1)] == 1
    assert corner.vector.coeffs[Partition(1, 2, 1)] == Fraction(-1, 14)
    assert corner.vector.coeffs[Partition(1, 1, 2)] == Fraction(-1, 434)
    mid = system.entry(Partition(1, 2, 1))
    assert mid.vector.coeffs[Partition(1, 1, 2)] == Fraction(-1, 4)
    t2 = HeckeOp("T", 2)
    t1 = HeckeOp("T1", 2)
    assert [system.entry(r).eigenvalues[t2] for r in N2K4.basis] == [1, 8, 32]
    assert [system.entry(r).eigenvalues[t1] for r in N2K4.basis] == [3, 66, 96]


def test_trivial_level_one_eigenvector():
    sp = enumerate_partitions(1, None, 4)
    v = eigen_vector(sp, Partition(1, 1, 1))
    assert v.coeffs == {Partition(1, 1, 1): CycNum.one()}


def test_closed_form_examples():
    sp1 = enumerate_partitions(1, None, 4)
    lam = eigenvalue_closed_form(sp1, Partition(1, 1, 1), HeckeOp("T", 2))
    assert lam == 45  # (8+1)(4+1), matching 2^5 + 2^2*3 + 1
    lam = eigenvalue_closed_form(N2K4, Partition(1, 2, 1), HeckeOp("T", 2))
    assert lam == 8  # q^{k-1}
    lam = eigenvalue_closed_form(N2K4, Partition(2, 1, 1), HeckeOp("T1", 2))
    assert lam == 3  # q+1


def test_compare_eigenvalues_documents_t1_mismatch():
    ops = SpaceOperators(N2K4)
    report = compare_eigenvalues(ops)
    bad = [r for r in report if not r["match"]]
    assert len(bad) == 1
    row = bad[0]
    assert row["op"] == "T1:2"
    assert row["partition"] == {"N0": 1, "N1": 2, "N2": 1}
    assert row["expected_mismatch"]
    assert CycNum.from_json(row["matrix_value"]) == 66  # q^{2k-2} + q
    assert CycNum.from_json(row["closed_form"]) == 34  # q^{2k-3} + q
    # level 1: vacuous single comparison per op, all matching
    sp1 = enumerate_partitions(1, None, 4)
    assert compare_eigenvalues(SpaceOperators(sp1), [HeckeOp("T", 3)]) == [
        {
            "partition": {"N0": 1, "N1": 1, "N2": 1},
            "op": "T:3",
            "matrix_value": CycNum.from_rational(280).to_json(),
            "closed_form": CycNum.from_rational(280).to_json(),
            "match": True,
            "expected_mismatch": False,
        }
    ]


def test_higher_order_character_rows_are_diagonal():
    # chi of order 4 at 5: the rank-1 slot disappears and all off-diagonal
    # terms vanish (the chi_q^2 != 1 branch is a genuinely separate case)
    chi = DirichletCharacter.make(5, [(5, 1)])
    sp = enumerate_partitions(5, chi, 5)
    assert sp.basis == (Partition(5, 1, 1), Partition(1, 1, 5))
    ops = SpaceOperators(sp)
    T = ops.matrix(HeckeOp("T", 5)).mat
    assert T == CycMatrix.diagonal([1, 5**7])
    T1 = ops.matrix(HeckeOp("T1", 5)).mat
    assert T1 == CycMatrix.diagonal([6, 6 * 5**7])
    system = eigenbasis(ops)
    for entry in system.entries:
        assert list(entry.vector.coeffs) == [entry.partition]


def test_quadratic_character_epsilon_branch():
    # chi quadratic at 3, k = 5: epsilon(3) = -1 enters the corner rows
    chi = DirichletCharacter.make(3, [(3, 1)])
    sp = enumerate_partitions(3, chi, 5)
    ops = SpaceOperators(sp)
    i0 = sp.index_of(Partition(3, 1, 1))
    i1 = sp.index_of(Partition(1, 3, 1))
    i2 = sp.index_of(Partition(1, 1, 3))
    T = ops.matrix(HeckeOp("T", 3)).mat
    assert T[i0, i0] == 1 and T[i0, i2] == Fraction(-2, 9)
    assert T[i0, i1].is_zero()  # the rank-1 move needs trivial chi_q
    assert T[i1, i1] == 81 and T[i1, i2].is_zero()
    assert T[i2, i2] == 3**7
    T1 = ops.matrix(HeckeOp("T1", 3)).mat
    assert T1[i0, i0] == 4 and T1[i0, i2] == Fraction(-8, 9)
    assert T1[i0, i1].is_zero()
    assert T1[i1, i1] == 3**8 + 3
    system = eigenbasis(ops)
    corner = system.entry(Partition(3, 1, 1))
    assert corner.vector.coeffs[Partition(1, 1, 3)] == Fraction(1, 9837)


def test_character_twisted_entries():
    # chi quadratic at 5, trivial at 2: chi_5(2) = -1 twists the T(2) rows
    chi = DirichletCharacter.make(10, [(5, 2)])
    sp = enumerate_partitions(10, chi, 4)
    ops = SpaceOperators(sp)
    T2 = ops.matrix(HeckeOp("T", 2)).mat
    src = sp.index_of(Partition(5, 2, 1))
    assert T2[src, src] == -8
    assert T2[src, sp.index_of(Partition(5, 1, 2))] == -6
    T1 = ops.matrix(HeckeOp("T1", 2)).mat
    assert T1[src, src] == 66  # chi_5(2^2) = +1 on the diagonal
    row = compare_eigenvalues(ops, [HeckeOp("T1", 2)])
    bad = [r for r in row if not r["match"]]
    assert all(r["expected_mismatch"] for r in bad)


def test_commutativity_with_characters():
    chi = DirichletCharacter.make(15, [(3, 1), (5, 1)])
    k = 4 if chi.valid_for_weight(4) else 5
    sp = enumerate_partitions(15, chi, k)
    ops = SpaceOperators(sp)
    mats = [ops.matrix(HeckeOp(kind, p)).mat
            for p in (2, 3, 5) for kind in ("T", "T1")]
    for A, B in combinations(mats, 2):
        assert A.commutes_with(B)
    eigenbasis(ops)  # exact verification against all six tables


def test_s_operator_fixture():
    ops = SpaceOperators(N2K4)
    assert s_constant(N2K4, 2) == Fraction(4, 15)
    S1 = s_operator(ops, 2, "S1").mat
    assert [v for v in S1.data[0]] == [0, 1, 0]
    S2 = s_operator(ops, 2, "S2").mat
    assert [v for v in S2.data[0]] == [0, 0, 1]
    assert s_word(ops, 1, 1) == CycMatrix.identity(3)


def test_s_word_full_identity_small_levels():
    for N in (2, 3, 6, 10):
        sp = enumerate_partitions(N, None, 4)
        ops = SpaceOperators(sp)
        corner = sp.index_of(Partition(N, 1, 1))
        for rho in sp.basis:
            row = s_word(ops, rho.n1, rho.n2).data[corner]
            for j, v in enumerate(row):
                assert v == (1 if j == sp.index_of(rho) else 0), (N, rho)


def test_s_operator_character_conditions():
    chi = DirichletCharacter.make(3, [(3, 1)])
    sp = enumerate_partitions(3, chi, 5)
    ops = SpaceOperators(sp)
    with pytest.raises(ValueError):
        s_operator(ops, 3, "S1")  # S1 needs trivial chi_q
    S2 = s_operator(ops, 3, "S2").mat  # quadratic branch is fine
    corner = sp.index_of(Partition(3, 1, 1))
    assert [v for v in S2.data[corner]] == [0, 0, 1]
    chi4 = DirichletCharacter.make(5, [(5, 1)])
    sp4 = enumerate_partitions(5, chi4, 5)
    with pytest.raises(ValueError):
        s_operator(SpaceOperators(sp4), 5, "S2")  # chi_q^2 != 1
    with pytest.raises(ValueError):
        s_operator(ops, 2, "S1")  # 2 does not divide 3
    with pytest.raises(ValueError):
        s_word(SpaceOperators(N2K4), 2, 2)  # parts not coprime


def test_hecke_op_validation_and_cache():
    with pytest.raises(ValueError):
        HeckeOp("T", 4)
    with pytest.raises(ValueError):
        HeckeOp("T2", 3)
    ops = SpaceOperators(N2K4)
    a = ops.matrix(HeckeOp("T", 2))
    b = ops.matrix(HeckeOp("T", 2))
    assert a is b
    assert HeckeOp("T1", 2) in ops.stored() or True
    assert set(ops.level_ops()) == {HeckeOp("T", 2), HeckeOp("T1", 2)}


def test_matrix_json_round_trip():
    hm = hecke_matrix(N2K4, HeckeOp("T1", 2))
    blob = json.dumps(hm.to_json(), sort_keys=True)
    parsed = json.loads(blob)
    assert CycMatrix.from_json(parsed["matrix"]) == hm.mat
    assert parsed["op"] == "T1:2"
