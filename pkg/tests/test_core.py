import numpy as np
import pytest

from tpskit.core import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_vector,
    cluster_values,
    complete_orthonormal,
    hermitian_eigendecompose,
    numeric_rank,
    phase_fix,
    svd,
)
from tpskit.errors import DimensionMismatch, NotHermitian

from util import random_invertible, random_unitary


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(eig_cluster=-1.0)
    with pytest.raises(ValueError):
        Tolerance(rank_rel=0.0)


def test_as_matrix_shape_and_finiteness():
    with pytest.raises(DimensionMismatch):
        as_matrix(np.zeros((2, 3)), rows=3, cols=2)
    with pytest.raises(ValueError):
        as_matrix(np.array([[np.inf, 0], [0, 0]]))
    m = as_matrix([[1, 2], [3, 4]])
    assert m.dtype == np.complex128


def test_as_vector():
    v = as_vector([1, 2j, 3])
    assert v.shape == (3,) and v.dtype == np.complex128
    with pytest.raises(DimensionMismatch):
        as_vector([1, 2], n=3)


def test_hermitian_reconstruction():
    rng = np.random.default_rng(1)
    for n in (2, 5, 9):
        z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = z + z.conj().T
        evals, vecs = hermitian_eigendecompose(m)
        resid = np.linalg.norm(vecs @ np.diag(evals) @ vecs.conj().T - m)
        assert resid <= 10 * DEFAULT_TOL.residual * np.linalg.norm(m)


def test_hermitian_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        hermitian_eigendecompose(np.array([[0, 1], [0, 0]], dtype=complex))


def test_svd_reconstruction_and_ordering():
    rng = np.random.default_rng(2)
    for n in (2, 4, 7):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        u, s, v = svd(m)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        resid = np.linalg.norm(u @ np.diag(s) @ v.conj().T - m)
        assert resid <= 10 * DEFAULT_TOL.residual * np.linalg.norm(m)


def test_numeric_rank_unitary_invariant():
    rng = np.random.default_rng(3)
    for trial in range(10):
        n = 6
        r = rng.integers(1, n + 1)
        a = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
        b = rng.normal(size=(r, n)) + 1j * rng.normal(size=(r, n))
        m = a @ b
        assert numeric_rank(m) == r
        u1 = random_unitary(rng, n)
        u2 = random_unitary(rng, n)
        assert numeric_rank(u1 @ m @ u2) == r


def test_complete_orthonormal():
    rng = np.random.default_rng(4)
    n = 6
    cols, _ = np.linalg.qr(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))
    u = complete_orthonormal(cols, n)
    assert np.array_equal(u[:, :2], cols)
    assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 10 * DEFAULT_TOL.residual


def test_cluster_values_grouping():
    vals = np.array([1.0, 1.0 + 1e-12, 5.0, 5.0 - 1e-12, 9.0])
    groups = cluster_values(vals, DEFAULT_TOL)
    assert [len(g) for g in groups] == [2, 2, 1]
    spread = cluster_values(np.array([0.0, 1.0, 2.0]), DEFAULT_TOL)
    assert len(spread) == 3


def test_cluster_values_complex():
    vals = np.array([1 + 1j, 1 + 1j + 1e-13, -1.0 + 0j])
    groups = cluster_values(vals, DEFAULT_TOL)
    assert sorted(len(g) for g in groups) == [1, 2]


def test_phase_fix():
    rng = np.random.default_rng(5)
    v = rng.normal(size=5) + 1j * rng.normal(size=5)
    w = phase_fix(v)
    idx = np.argmax(np.abs(w))
    assert abs(w[idx].imag) <= 1e-14 and w[idx].real > 0
    # already fixed vectors are left alone up to roundoff
    assert np.linalg.norm(phase_fix(w) - w) <= 1e-12 * np.linalg.norm(w)


def test_phase_fix_scale_consistency():
    rng = np.random.default_rng(6)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    z = np.exp(1j * 0.7)
    assert np.linalg.norm(phase_fix(v * z) - phase_fix(v)) <= 1e-12
