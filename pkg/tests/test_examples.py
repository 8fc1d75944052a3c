import numpy as np

from tpskit.examples import (
    bargmann_alpha,
    bell_states,
    example_bargmann,
    example_bell,
    example_center_of_mass,
    rotation_x_pi,
    total_sz_squared,
)


def test_bell_states_orthonormal():
    cols = np.column_stack(list(bell_states().values()))
    assert np.linalg.norm(cols.conj().T @ cols - np.eye(4)) <= 1e-14


def test_fixed_observables():
    r = rotation_x_pi()
    t = total_sz_squared()
    assert np.linalg.norm(r @ r.conj().T - np.eye(4)) <= 1e-14
    assert np.linalg.norm(t - np.diag([1.0, 0, 0, 1])) <= 1e-14
    assert np.linalg.norm(r @ t - t @ r) <= 1e-14


def test_example_bell_report():
    report = example_bell()
    assert set(report["god_given_ranks"].values()) == {2}
    assert set(report["constructed_ranks"].values()) == {1}
    assert max(report["eigen_residuals"].values()) <= 1e-12
    assert max(report["characteristic_residuals"].values()) <= 1e-10
    assert report["alternative_pair_equivalent"]
    assert report["alternative_pair_shape"] == [2, 2]
    assert all(report["tpp_checks"].values())


def test_example_bargmann_report():
    report = example_bargmann(3)
    assert report["plain_schmidt"]["rank"] == 1
    assert report["deformed_schmidt"]["rank"] == 2
    c = np.array([complex(re, im) for re, im in
                  report["deformed_coefficients"]["data"]]).reshape(3, 3)
    expected = np.zeros((3, 3), dtype=complex)
    expected[1:3, 1:3] = np.array([[1, 1], [1, 0.5]])
    assert np.max(np.abs(c - expected)) <= 1e-12


def test_bargmann_alpha_layout():
    a = bargmann_alpha(4)
    assert a[2, 2] == 2.0
    assert np.count_nonzero(a != 1.0) == 1


def test_example_center_of_mass_report():
    report = example_center_of_mass(4)
    assert report["plain_schmidt"]["rank"] == 1
    assert report["com_schmidt"]["rank"] == 2
    assert report["grid_shape"] == [4, 4]
    assert report["characteristic_residual"] <= 1e-10
