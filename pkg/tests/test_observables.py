import numpy as np
import pytest

from tpskit import (
    complementary_pair,
    is_inner_product_compatible,
    observable_pair,
    schmidt,
    tpp_from_complementary,
    tps_equivalent,
    tps_from_observables,
    verify_complementary,
    verify_standard_complete,
)
from tpskit.algebra import contains
from tpskit.errors import (
    MultiplicityViolation,
    NotCommuting,
    NotDiagonalizable,
)
from tpskit.observables import _chain_matrix

from util import random_invertible, random_standard_pair, random_unitary


def test_pair_requires_commuting():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    with pytest.raises(NotCommuting):
        observable_pair(np.kron(sx, np.eye(2)), np.kron(sz, np.eye(2)))


def test_hermitian_detection():
    r = np.kron(np.diag([0.0, 1.0]), np.eye(2)).astype(complex)
    t = np.kron(np.eye(2), np.diag([0.0, 1.0])).astype(complex)
    assert observable_pair(r, t).hermitian
    assert not observable_pair(1j * r, t).hermitian


def test_standard_complete_grid_shape():
    rng = np.random.default_rng(40)
    for k, l in ((2, 2), (2, 3), (3, 3)):
        r, t = random_standard_pair(rng, k, l)
        cs = verify_standard_complete(observable_pair(r, t))
        assert (cs.k, cs.l) == (k, l)
        assert len(cs.M) == l and len(cs.N) == k
        assert cs.grid.shape == (k * l, k * l)
        # grid columns are unit joint eigenvectors
        for j in range(k):
            for i in range(l):
                v = cs.grid[:, j * l + i]
                assert abs(np.linalg.norm(v) - 1) <= 1e-10
                assert np.linalg.norm(r @ v - cs.r_eigenvalues[j] * v) <= 1e-7
                assert np.linalg.norm(t @ v - cs.t_eigenvalues[i] * v) <= 1e-7


def test_multiplicity_violation():
    r = np.diag([0.0, 0, 0, 1]).astype(complex)
    t = np.diag([0.0, 1, 2, 3]).astype(complex)
    with pytest.raises(MultiplicityViolation):
        verify_standard_complete(observable_pair(r, t))


def test_defective_operator_rejected():
    r = np.kron(np.array([[1, 1], [0, 1]]), np.eye(2)).astype(complex)
    t = np.kron(np.eye(2), np.diag([1.0, 2.0])).astype(complex)
    with pytest.raises(NotDiagonalizable):
        verify_standard_complete(observable_pair(r, t))


def test_non_hermitian_diagonalizable_pair():
    rng = np.random.default_rng(41)
    r, t = random_standard_pair(rng, 2, 3, unitary=False)
    pair = observable_pair(r, t)
    assert not pair.hermitian
    cs = verify_standard_complete(pair)
    assert (cs.k, cs.l) == (2, 3)
    tps = tps_from_observables(pair)
    assert tps.shape == (2, 3)


def test_hermitian_pair_gives_unitary_basis():
    rng = np.random.default_rng(42)
    r, t = random_standard_pair(rng, 3, 3)
    tps = tps_from_observables(observable_pair(r, t))
    assert is_inner_product_compatible(tps)


def test_constructed_basis_block_diagonalizes_r():
    rng = np.random.default_rng(43)
    k, l = 2, 3
    r, t = random_standard_pair(rng, k, l)
    tps = tps_from_observables(observable_pair(r, t))
    conj = np.linalg.solve(tps.basis, r @ tps.basis)
    # r acts on the first factor only: conj = a (x) identity
    blocks = conj.reshape(k, l, k, l)
    a = blocks[:, 0, :, 0]
    assert np.linalg.norm(conj - np.kron(a, np.eye(l))) <= 1e-8


def test_factor_states_are_products():
    rng = np.random.default_rng(44)
    r, t = random_standard_pair(rng, 2, 2)
    pair = observable_pair(r, t)
    cs = verify_standard_complete(pair)
    tps = tps_from_observables(pair)
    for col in range(4):
        assert schmidt(cs.grid[:, col], tps).rank == 1


def test_chain_matrix_two_point_spectrum():
    k = _chain_matrix(np.array([1.0, -1.0]))
    assert np.allclose(k, np.array([[1.0, -2.0], [0.0, -1.0]]))


def test_complementary_construction_verifies():
    rng = np.random.default_rng(45)
    for k, l in ((2, 2), (2, 3)):
        r, t = random_standard_pair(rng, k, l)
        p1 = observable_pair(r, t)
        cs = verify_standard_complete(p1)
        p2 = complementary_pair(p1, cs)
        assert verify_complementary(p1, p2)


def test_self_pair_not_complementary():
    sz = np.diag([1.0, -1.0]).astype(complex)
    p = observable_pair(np.kron(sz, np.eye(2)), np.kron(np.eye(2), sz))
    assert not verify_complementary(p, p)


def test_tpp_from_complementary_membership():
    rng = np.random.default_rng(46)
    r, t = random_standard_pair(rng, 2, 3)
    p1 = observable_pair(r, t)
    p2 = complementary_pair(p1, verify_standard_complete(p1))
    a1, a2, tps = tpp_from_complementary(p1, p2)
    assert a1.dim == 4 and a2.dim == 9
    assert tps.shape == (2, 3)
    assert contains(a1, p1.r) and contains(a1, p2.r)
    assert contains(a2, p1.t) and contains(a2, p2.t)


def test_same_pair_different_completions_equivalent():
    rng = np.random.default_rng(47)
    r, t = random_standard_pair(rng, 2, 2)
    p1 = observable_pair(r, t)
    cs = verify_standard_complete(p1)
    direct = tps_from_observables(p1)
    p2 = complementary_pair(p1, cs)
    _, _, via_complement = tpp_from_complementary(p1, p2)
    assert tps_equivalent(direct, via_complement).equivalent
