from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qweyl.linalg import inverse, matmul, nullspace, rank, rref, solve
from qweyl.qarith import ONE, Q, ExactScalar
from qweyl.sparse import Basis, SparseOperator, exp_nilpotent, from_dense, vec_add, vec_equal, vec_scale

small_int_matrix = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=80, deadline=None)
@given(small_int_matrix)
def test_rank_matches_numpy_and_nullspace(rows):
    r = rank(rows)
    assert r == np.linalg.matrix_rank(np.array(rows, dtype=float))
    ns, free = nullspace(rows, len(rows[0]))
    assert len(ns) == len(rows[0]) - r
    for vec in ns:
        for row in rows:
            assert sum(Fraction(a) * b for a, b in zip(row, vec)) == 0


@settings(max_examples=60, deadline=None)
@given(small_int_matrix)
def test_rref_is_idempotent(rows):
    R, piv = rref(rows)
    R2, piv2 = rref(R)
    assert piv == piv2
    assert R == R2


def test_inverse_and_solve_exact():
    A = [[2, 1], [1, 1]]
    Ai = inverse(A)
    assert matmul(A, Ai) == [[1, 0], [0, 1]]
    assert solve(A, [3, 2]) == [1, 1]
    with pytest.raises(Exception):
        inverse([[1, 2], [2, 4]])


def test_inverse_over_qfield():
    A = [[Q, ONE], [ONE * 0 + ExactScalar.coerce(0), Q]]
    Ai = inverse(A, one=ONE)
    prod = matmul(A, Ai)
    assert prod[0][0] == ONE and prod[1][1] == ONE
    assert not prod[0][1] and not prod[1][0]


def test_operator_algebra_and_dense_roundtrip():
    b = Basis("xyz")
    A = from_dense(b, [[1, 2, 0], [0, 1, 0], [3, 0, 1]])
    B = from_dense(b, [[0, 1, 0], [1, 0, 0], [0, 0, 2]])
    dA, dB = A.to_dense(), B.to_dense()
    assert np.allclose((A @ B).to_dense(), dA @ dB)
    assert np.allclose((A + B).to_dense(), dA + dB)
    assert np.allclose(A.commutator(B).to_dense(), dA @ dB - dB @ dA)
    assert np.allclose(A.transpose().to_dense(), dA.T)
    assert A.apply({"x": 1}) == {"x": 1, "z": 3}
    assert (A - A).is_zero()


def test_exp_nilpotent_matches_series():
    b = Basis(range(3))
    N = from_dense(b, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    E = exp_nilpotent(N)
    assert E.to_exact_dense() == [[1, 1, Fraction(1, 2)], [0, 1, 1], [0, 0, 1]]


def test_vectors():
    a = {"x": 1, "y": 2}
    b = vec_scale(a, -1)
    assert vec_add(a, b) == {}
    assert vec_equal(vec_add(a, {"x": 1}), {"x": 2, "y": 2})


def test_basis_rejects_duplicates():
    with pytest.raises(ValueError):
        Basis([1, 1])


def test_from_action_requires_closed_codomain():
    b = Basis([0, 1])
    with pytest.raises(KeyError):
        SparseOperator.from_action(b, lambda x: {x + 1: 1})
