from fractions import Fraction

import pytest

from qweyl.braidops import (
    ContractError,
    StructureError,
    block_basis,
    correction_factor,
    full_degree_weyl_family,
    rmatrix_direct_k2,
    rvee_equivariant,
    rvee_scalar,
    s_mu_alpha_identity,
    s_mu_alpha_recursion_residual,
    string_module,
    vector_rvee_entries,
    verify_braid_family,
    verify_braid_relations,
    verify_RS,
    verify_s_mu_alpha,
    weyl_element_j,
    weyl_element_sl2,
)
from qweyl.glrep import degree_basis, sigma_operator
from qweyl.qarith import ONE, ZERO, q_power
from qweyl.qmatspace import hw_vector, qpoly_equal, qpoly_scale
from qweyl.sparse import SparseOperator

from oracles import RVEE_VECTOR_K2, S_STRING_2


def test_two_dim_weyl_element_frozen():
    S = weyl_element_sl2(*string_module(1)).op
    dense = S.to_exact_dense()
    expected = [[ONE if x == 1 else ZERO if x == 0 else -q_power(1) for x in row] for row in S_STRING_2]
    for r in range(2):
        for c in range(2):
            assert dense[r][c] == expected[r][c]


@pytest.mark.parametrize("L", range(0, 7))
def test_weyl_element_on_string_modules(L):
    S = weyl_element_sl2(*string_module(L)).op
    for k in range(L + 1):
        img = S.apply({k: ONE})
        expected = q_power((k + 1) * (L - k)) * (-1) ** (L - k)
        assert set(img) == {L - k}
        assert img[L - k] == expected


def test_weyl_element_rejects_non_integer_weights():
    E, F, H = string_module(1)
    H2 = H.map(lambda v: v * Fraction(1, 2))
    with pytest.raises((ContractError, StructureError, ValueError)):
        weyl_element_sl2(E, F, H2)


@pytest.mark.parametrize("i", [0, 1])
def test_vector_rvee_frozen(i):
    sign, expo = RVEE_VECTOR_K2[i]
    expected = q_power(expo) * (1 if sign == "+" else -1)
    assert rvee_scalar(1, 1, i, 2) == expected


@pytest.mark.parametrize("k", [2, 3])
def test_vector_r_matrix_is_hecke(k):
    R = vector_rvee_entries(k)
    one = SparseOperator.identity(R.basis, ONE)
    q = q_power(1)
    assert ((R - one.scale(q)) @ (R + one.scale(q_power(-1)))).is_zero()
    # rescaled by q^{-1/k} it is the normalised braiding on S^1 (x) S^1
    Rsl = R.scale(q_power(Fraction(-1, k)))
    Req = rvee_equivariant(1, 1, k).op
    for m in R.basis.elements:
        a = Rsl.apply({m: ONE})
        b = Req.apply({m: ONE})
        assert qpoly_equal(a, b)


@pytest.mark.parametrize("mu1,mu2", [(a, b) for a in range(4) for b in range(4)])
def test_direct_r_matches_equivariant(mu1, mu2):
    assert (rvee_equivariant(mu1, mu2, 2).op - rmatrix_direct_k2(mu1, mu2).op).is_zero()


@pytest.mark.parametrize("mu1,mu2,k", [(2, 1, 2), (2, 2, 2), (1, 3, 3), (2, 2, 3)])
def test_rvee_eigenvalues_on_highest_weight_vectors(mu1, mu2, k):
    R = rvee_equivariant(mu1, mu2, k).op
    for i in range(min(mu1, mu2) + 1):
        img = R.apply(hw_vector(mu1, mu2, i, k=k))
        assert qpoly_equal(img, qpoly_scale(hw_vector(mu2, mu1, i, k=k), rvee_scalar(mu1, mu2, i, k)))


@pytest.mark.parametrize("k,n,deg", [(2, 2, 4), (3, 2, 3), (2, 3, 3)])
def test_r_equals_s(k, n, deg):
    rep = verify_RS(k, n, deg)
    assert rep.passed, [c.block for c in rep.failures()]


def test_r_equals_s_fails_without_correction():
    basis = block_basis(2, 2, 1, 2)
    from qweyl.braidops import rvee_on_block

    R = rvee_on_block(2, basis, 1)
    S = weyl_element_j(1, basis).op
    assert not (R - S).is_zero()
    assert (R - S @ correction_factor(1, 2, basis)).is_zero()


@pytest.mark.parametrize("mu", range(0, 9))
def test_s_mu_alpha(mu):
    for alpha in range(mu + 1):
        assert s_mu_alpha_identity(mu, alpha) == ONE
        if alpha >= 1:
            assert s_mu_alpha_recursion_residual(mu, alpha) == ZERO
    with pytest.raises(ValueError):
        s_mu_alpha_identity(mu, mu + 1)


def test_s_mu_alpha_suite():
    assert verify_s_mu_alpha(4).passed


@pytest.mark.parametrize("k,n,d", [(1, 3, 3), (2, 3, 2), (2, 4, 2)])
def test_weyl_group_braid_relations(k, n, d):
    assert verify_braid_relations(full_degree_weyl_family(k, n, d)).passed


def test_braid_family_suite():
    assert verify_braid_family(2, 3, 2).passed


def test_braid_relation_failure_is_certified():
    basis = degree_basis(1, 3, 1)
    S1 = weyl_element_j(1, basis).op
    rep = verify_braid_relations([S1, S1 @ S1])
    assert not rep.passed
    assert rep.failures()[0].residual_certificate is not None


@pytest.mark.parametrize("k,n,d", [(1, 2, 2), (2, 2, 2), (2, 3, 2)])
def test_weyl_elements_specialise_to_sigma(k, n, d):
    basis = degree_basis(k, n, d)
    for j in range(1, n):
        S = weyl_element_j(j, basis).op.map(lambda v: v.at_one())
        assert (S - sigma_operator(j, basis)).is_zero()


def test_correction_factor_coefficient():
    cf = correction_factor(1, 2)
    m = ((1, 1), (0, 0))
    assert cf.coefficient(m) == -q_power(Fraction(-3, 2))
