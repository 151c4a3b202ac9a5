from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qweyl.glrep import (
    CapacityError,
    apply_poly,
    casimir_truncated,
    compositions,
    degree_basis,
    enumerate_basis,
    gl_generator,
    highest_weight_subspace,
    hook_content_dim,
    howe_components,
    k_action,
    n_action,
    omega_operators,
    partitions,
    sigma_matrix,
    sigma_operator,
    verify_howe_dims,
    verify_omega_kappa,
)

from oracles import gl_dimension, kostka, monomial_count

shapes = st.tuples(st.integers(1, 3), st.integers(1, 3)).flatmap(
    lambda kn: st.tuples(st.just(kn[0]), st.just(kn[1]), st.lists(st.integers(0, 2), min_size=kn[1], max_size=kn[1]))
)


@settings(max_examples=25, deadline=None)
@given(shapes)
def test_dual_pair_commutes(shape):
    k, n, mu = shape
    basis = degree_basis(k, n, sum(mu))
    for a, b in product(range(1, k + 1), repeat=2):
        A = gl_generator("k", a, b, basis)
        for i, j in product(range(1, n + 1), repeat=2):
            B = gl_generator("n", i, j, basis)
            assert A.commutator(B).is_zero()


@pytest.mark.parametrize("k,n,d", [(k, n, d) for k in (1, 2, 3) for n in (1, 2, 3) for d in range(5)])
def test_degree_basis_count(k, n, d):
    assert len(degree_basis(k, n, d)) == monomial_count(k, n, d)


@pytest.mark.parametrize("lam", [p for d in range(1, 6) for p in partitions(d, 3)])
def test_hook_content_matches_tableaux(lam):
    for N in (1, 2, 3, 4):
        assert hook_content_dim(lam, N) == gl_dimension(lam, N)


@pytest.mark.parametrize("k,n,d", [(k, n, d) for k in range(1, 5) for n in range(1, 5) for d in range(7)])
def test_howe_identity(k, n, d):
    assert verify_howe_dims(k, n, d).passed
    total = sum(a * b for _, a, b in howe_components(k, n, d))
    assert total == monomial_count(k, n, d)


@pytest.mark.parametrize("lam,mu", [((2, 1), (1, 1, 1)), ((2, 1), (2, 1, 0)), ((3,), (1, 1, 1)), ((1, 1, 1), (1, 1, 1)),
                                    ((2, 2), (1, 1, 2)), ((3, 1), (2, 1, 1))])
def test_highest_weight_multiplicity_is_kostka(lam, mu):
    for k in (3, 4):
        vecs = highest_weight_subspace(lam, mu, k)
        assert len(vecs) == kostka(lam, mu)
        for v in vecs:
            for a in range(k - 1):
                assert apply_poly(lambda m: k_action(a, a + 1, m), v) == {}


def test_omega_kappa_identity_small():
    assert verify_omega_kappa(2, 2, 3).passed
    basis = enumerate_basis(2, 2, (1, 1))
    lhs = omega_operators(1, 2, basis).scale(2)
    rhs = casimir_truncated(1, 2, basis) - gl_generator("n", 1, 1, basis) - gl_generator("n", 2, 2, basis)
    assert lhs == rhs


def test_omega_variants():
    basis = enumerate_basis(2, 2, (2, 3))
    diff = omega_operators(1, 2, basis, "gl") - omega_operators(1, 2, basis, "sl")
    assert diff == omega_operators(1, 2, basis, "gl").identity(basis, 3)
    b1 = enumerate_basis(1, 2, (2, 1))
    assert omega_operators(1, 2, b1, "sl").is_zero()
    with pytest.raises(ValueError):
        omega_operators(1, 2, basis, "so")


def test_kappa_on_vector_representation():
    basis = enumerate_basis(1, 3, (1, 0, 0))
    K = casimir_truncated(1, 2, basis)
    assert K.to_exact_dense() == [[1]]
    basis = degree_basis(1, 3, 1)
    D = casimir_truncated(1, 3, basis).to_exact_dense()
    # basis order x13, x12, x11
    assert [D[a][a] for a in range(3)] == [1, 0, 1]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sigma_braid_relations_vector(n):
    S = [np.array(sigma_matrix(j, n)) for j in range(1, n)]
    for a in range(len(S)):
        assert np.array_equal(np.linalg.matrix_power(S[a], 4), np.eye(n))
        for b in range(a + 1, len(S)):
            A, B = S[a], S[b]
            if b == a + 1:
                assert np.array_equal(A @ B @ A, B @ A @ B)
            else:
                assert np.array_equal(A @ B, B @ A)


@pytest.mark.parametrize("k,n,d", [(1, 2, 3), (2, 2, 2), (2, 3, 2), (3, 3, 2)])
def test_sigma_operator_is_signed_column_swap(k, n, d):
    basis = degree_basis(k, n, d)
    for j in range(1, n):
        S = sigma_operator(j, basis)
        for m in basis.elements:
            dj = sum(r[j - 1] for r in m)
            swapped = tuple(r[: j - 1] + (r[j], r[j - 1]) + r[j + 1:] for r in m)
            assert S.apply({m: 1}) == {swapped: (-1) ** dj}


def test_generators_shift_mu_basis():
    b = enumerate_basis(2, 3, (1, 1, 0))
    E = gl_generator("n", 3, 1, b)
    assert E.codomain.mu == (0, 1, 1)
    with pytest.raises(ValueError):
        gl_generator("x", 1, 1, b)
    with pytest.raises(ValueError):
        gl_generator("k", 3, 1, b)


def test_raw_actions_are_derivations():
    m = ((2, 1), (0, 1))
    assert n_action(0, 1, m) == {((3, 0), (0, 1)): 1, ((2, 1), (1, 0)): 1}
    assert k_action(0, 1, m) == {((2, 2), (0, 0)): 1}


def test_capacity_error():
    with pytest.raises(CapacityError):
        enumerate_basis(4, 4, (9, 9, 9, 9), cap=1000)
    with pytest.raises(ValueError):
        enumerate_basis(2, 2, (1,))


def test_compositions():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert highest_weight_subspace((2,), (1, 1), 1) == [{((1, 1),): Fraction(1)}]
