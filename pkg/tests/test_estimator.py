import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from avekit import AVESolver, MODEL_NAMES
from avekit.exceptions import DimensionMismatch
from avekit.validation import check_initial_state, check_square_system


def test_get_set_params_and_clone():
    est = AVESolver(model="gao", gao_rho=4.0, rtol=1e-8)
    params = est.get_params()
    assert params["model"] == "gao" and params["gao_rho"] == 4.0 and params["rtol"] == 1e-8
    est.set_params(model="mee", mee_lambda=0.5)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert twin is not est


@pytest.mark.parametrize("model", MODEL_NAMES)
def test_fit_recovers_solution(model, tri20):
    est = AVESolver(model=model, event_residual_tol=1e-7, t_final=500.0)
    est.fit(tri20.A, tri20.b, x_star=tri20.known_solution)
    assert est.termination_ == "event"
    np.testing.assert_allclose(est.solution_, tri20.known_solution, atol=1e-6)
    assert est.residual_norm_ <= 1e-7
    assert est.n_iter_ == est.trajectory_.n_accepted
    assert est.trajectory_.energies is not None


def test_fit_without_known_solution(tri20):
    est = AVESolver().fit(tri20.A.tolist(), tri20.b.tolist())
    assert est.trajectory_.energies is None
    assert np.abs(est.residual(tri20.A, tri20.b)).max() <= 1e-6 * (1 + np.linalg.norm(tri20.b))


def test_settling_bound_from_estimator(tri20):
    est = AVESolver().fit(tri20.A, tri20.b)
    assert round(est.settling_bound().T_max, 4) == 0.7355
    assert est.event_time_ <= est.settling_bound().T_max


def test_not_fitted():
    with pytest.raises(NotFittedError):
        AVESolver().residual(np.eye(2) * 3, np.ones(2))


def test_unknown_model(tri20):
    with pytest.raises(ValueError, match="unknown model"):
        AVESolver(model="jlhh").fit(tri20.A, tri20.b)


def test_custom_initial_state(tri20):
    x0 = np.full(20, 5.0)
    est = AVESolver(model="inverse-free", x0=x0).fit(tri20.A, tri20.b)
    np.testing.assert_array_equal(est.trajectory_.outputs[0], x0)
    np.testing.assert_allclose(est.solution_, tri20.known_solution, atol=1e-5)


def test_validation_helpers():
    A, b = check_square_system([[1, 2], [3, 4]], [1, 2])
    assert A.dtype == np.float64 and b.shape == (2,)
    with pytest.raises(DimensionMismatch):
        check_square_system(np.ones((2, 3)), [1, 2])
    with pytest.raises(DimensionMismatch):
        check_square_system(np.eye(2), [1, 2, 3])
    with pytest.raises(ValueError):
        check_square_system([[np.inf, 0], [0, 1]], [1, 2])
    assert np.array_equal(check_initial_state(None, 3), np.zeros(3))
    with pytest.raises(DimensionMismatch):
        check_initial_state([1.0], 3)
