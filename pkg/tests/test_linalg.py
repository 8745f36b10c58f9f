import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from avekit import linalg
from avekit.exceptions import ConvergenceError, DimensionMismatch, SingularMatrix

from oracles import toeplitz_eigs


def test_matvec_examples():
    assert np.array_equal(linalg.matvec([[8, -1], [-1, 8]], [-1, 1]), [-9, 9])
    x = np.array([0.3, -2.0, 5.0])
    assert np.array_equal(linalg.matvec(np.eye(3), x), x)
    assert np.array_equal(linalg.matvec([[2.0]], [3.0]), [6.0])


def test_matvec_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.matvec(np.eye(2), [1.0, 2.0, 3.0])


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        linalg.as_matrix([[1.0, np.nan], [0.0, 1.0]])


def test_lu_identity():
    F = linalg.lu_factor(np.eye(4))
    assert np.array_equal(F.L, np.eye(4))
    assert np.array_equal(F.U, np.eye(4))
    assert np.array_equal(F.perm, np.arange(4))


def test_lu_solve_examples():
    F = linalg.lu_factor([[7.0, -1.0], [-1.0, 7.0]])
    np.testing.assert_allclose(linalg.solve(F, [6.0, 6.0]), [1.0, 1.0], rtol=1e-14)
    rhs = np.array([1.5, -2.0, 4.0])
    np.testing.assert_array_equal(linalg.solve(linalg.lu_factor(np.eye(3)), rhs), rhs)
    assert linalg.solve(linalg.lu_factor([[2.0]]), [1.0])[0] == 0.5


def test_lu_singular():
    with pytest.raises(SingularMatrix):
        linalg.lu_factor([[1.0, 1.0], [1.0, 1.0]])


def test_lu_reconstruction_with_pivoting():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 6))
    A[0, 0] = 0.0  # forces a row swap
    F = linalg.lu_factor(A)
    np.testing.assert_allclose(F.L @ F.U, A[F.perm], atol=1e-10 * np.linalg.norm(A, 2))
    assert np.all(np.abs(np.diag(F.U)) > 1e-12 * np.abs(A).sum(axis=1).max())


def test_solve_dimension_mismatch():
    F = linalg.lu_factor(np.eye(3))
    with pytest.raises(DimensionMismatch):
        linalg.solve(F, [1.0, 2.0])


def test_factorization_is_immutable():
    F = linalg.lu_factor(np.eye(2) * 3)
    with pytest.raises(ValueError):
        F.lu[0, 0] = 1.0


@pytest.mark.parametrize("method", ["svd", "power"])
def test_extremal_singular_values_2x2(method):
    A = [[8.0, -1.0], [-1.0, 8.0]]
    assert linalg.spectral_norm(A, method) == pytest.approx(9.0, rel=1e-10)
    assert linalg.sigma_min(A, method) == pytest.approx(7.0, rel=1e-10)


@pytest.mark.parametrize("method", ["svd", "power"])
def test_extremal_singular_values_identity(method):
    assert linalg.spectral_norm(np.eye(5), method) == pytest.approx(1.0, rel=1e-10)
    assert linalg.sigma_min(np.eye(5), method) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("method", ["svd", "power"])
def test_tridiag_n20_against_toeplitz_formula(method, tri_matrix):
    A = tri_matrix(20)
    assert linalg.spectral_norm(A, method) == pytest.approx(8 + 2 * np.cos(np.pi / 21), rel=1e-10)
    assert linalg.sigma_min(A, method) == pytest.approx(8 - 2 * np.cos(np.pi / 21), rel=1e-10)
    assert 8 - 2 * np.cos(np.pi / 21) == pytest.approx(6.0223, abs=5e-5)


def test_toeplitz_formula_matches_dense_eigensolver(tri_matrix):
    # keep the closed form honest against an independent eigensolver
    np.testing.assert_allclose(np.sort(toeplitz_eigs(12)), np.linalg.eigvalsh(tri_matrix(12)), rtol=1e-13)


def test_power_route_reports_nonconvergence(tri_matrix):
    # clustered top singular values converge slowly
    with pytest.raises(ConvergenceError):
        linalg.spectral_norm(tri_matrix(400), method="power", max_iter=50)


def test_sigma_min_singular():
    with pytest.raises(SingularMatrix):
        linalg.sigma_min([[1.0, 2.0], [2.0, 4.0]])


def test_symmetric_known_spectrum():
    rng = np.random.default_rng(11)
    Q, _ = np.linalg.qr(rng.standard_normal((8, 8)))
    eig = np.array([2.0, 2.5, 3.0, 4.0, 5.0, 6.5, 9.0, 12.0])
    A = (Q * eig) @ Q.T
    for method in ("svd", "power"):
        assert linalg.spectral_norm(A, method) == pytest.approx(12.0, rel=1e-9)
        assert linalg.sigma_min(A, method) == pytest.approx(2.0, rel=1e-9)


well_conditioned = st.integers(min_value=1, max_value=8).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-1, 1)).map(
        lambda M: M + (n + 1) * np.eye(n)
    )
)


@settings(max_examples=60, deadline=None)
@given(A=well_conditioned, data=st.data())
def test_solve_roundtrip(A, data):
    n = A.shape[0]
    x = data.draw(arrays(np.float64, (n,), elements=st.floats(-100, 100)))
    y = linalg.solve(linalg.lu_factor(A), linalg.matvec(A, x))
    np.testing.assert_allclose(y, x, rtol=1e-8, atol=1e-8 * (1 + np.abs(x).max()))


@settings(max_examples=60, deadline=None)
@given(A=well_conditioned, c=st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3))
def test_norm_homogeneity_and_ordering(A, c):
    s = linalg.spectral_norm(A)
    assert linalg.spectral_norm(c * A) == pytest.approx(abs(c) * s, rel=1e-10)
    assert s >= linalg.sigma_min(A) * (1 - 1e-12)


@settings(max_examples=40, deadline=None)
@given(A=well_conditioned, data=st.data())
def test_solve_residual_bound(A, data):
    n = A.shape[0]
    rhs = data.draw(arrays(np.float64, (n,), elements=st.floats(-1e3, 1e3)))
    y = linalg.solve(linalg.lu_factor(A), rhs)
    bound = 1e-9 * (np.linalg.norm(A, 2) * np.linalg.norm(y) + np.linalg.norm(rhs))
    assert np.linalg.norm(A @ y - rhs) <= bound + 1e-300
