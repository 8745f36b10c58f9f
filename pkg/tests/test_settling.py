import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from avekit.dynamics import FixedTimeParams
from avekit.exceptions import PreconditionViolation
from avekit.problem import tridiag
from avekit.settling import SettlingReport, settling_bound, settling_constants, settling_table

# Published T_max rows; every entry was checked against an independent
# dense-SVD evaluation under both mu conventions.
TABLE = {
    "lambda1": (10, FixedTimeParams(gamma=5, rho1=5, rho2=5, lambda2=1.01),
                [0.001, 0.45, 0.6, 0.8], [157.3289, 137.0701, 134.7652, 135.0736]),
    "lambda2": (10, FixedTimeParams(gamma=1, rho1=2, rho2=2, lambda1=0.5),
                [1.2, 1.5, 2, 3], [254.8676, 212.1412, 203.5690, 219.5776]),
    "gamma": (20, FixedTimeParams(rho1=100, rho2=100, lambda1=0.5, lambda2=1.5),
              [0.5, 1, 2, 4], [8.8264, 4.4132, 2.2066, 1.1033]),
    "rho": (20, FixedTimeParams(gamma=6, lambda1=0.5, lambda2=1.5),
            [100, 150, 200, 400], [0.7355, 0.4904, 0.3678, 0.1839]),
}


def A(n):
    return tridiag(n, -1.0, 8.0, -1.0)


@pytest.mark.parametrize("row", list(TABLE))
def test_table_rows(row):
    n, base, values, expected = TABLE[row]
    got = [round(rep.T_max, 4) for _, rep in settling_table(A(n), base, row, values)]
    assert got == expected


def test_lemma_convention_does_not_reproduce_table():
    n, base, values, expected = TABLE["gamma"]
    got = [rep.T_max for _, rep in settling_table(A(n), base, "gamma", values, "lemma")]
    assert all(abs(g - e) > 1e-2 for g, e in zip(got, expected))


def test_section_value_n20():
    rep = settling_bound(A(20), 6, 100, 100, 0.5, 1.5)
    assert round(rep.T_max, 4) == 0.7355
    assert rep.mu_convention == "table"
    assert rep.n == 20


def test_gamma_one_is_six_times_gamma_six():
    t6 = settling_bound(A(20), 6, 100, 100, 0.5, 1.5).T_max
    t1 = settling_bound(A(20), 1, 100, 100, 0.5, 1.5).T_max
    assert t1 == pytest.approx(6 * t6, rel=1e-12)
    assert round(t1, 4) == 4.4132


def test_constants_2x2():
    rep = settling_bound([[8.0, -1.0], [-1.0, 8.0]], convention="lemma")
    assert (rep.L1, rep.L2) == pytest.approx((10.0, 8.0), rel=1e-14)
    assert rep.mu == pytest.approx(48.0, rel=1e-14)
    assert settling_bound([[8.0, -1.0], [-1.0, 8.0]]).mu == pytest.approx(6.0, rel=1e-14)


def test_constants_by_hand():
    # L1 + L2 = 18, mu = 6, gamma = rho = 1, lambda1 = 0.5, lambda2 = 1.5
    c1, c2, k1, k2, T = settling_constants(10.0, 8.0, 6.0, FixedTimeParams(1, 1, 1, 0.5, 1.5))
    assert c1 == pytest.approx(2 ** -0.25 * 36 / 18**2.5, rel=1e-14)
    assert c2 == pytest.approx(2 ** 0.25 * 6**2.5 / 18**2.5, rel=1e-14)
    assert (k1, k2) == (0.75, 1.25)
    assert T == pytest.approx(1 / (0.25 * c1) + 1 / (0.25 * c2), rel=1e-14)


@pytest.mark.parametrize("scale", [2.0, 3.5, 0.1])
def test_homogeneity(scale):
    a = settling_bound(A(20), 6, 100, 100, 0.5, 1.5)
    b = settling_bound(A(20), 6 * scale, 100, 100, 0.5, 1.5)
    c = settling_bound(A(20), 6, 100 * scale, 100 * scale, 0.5, 1.5)
    assert b.T_max == pytest.approx(a.T_max / scale, rel=1e-12)
    assert c.T_max == pytest.approx(a.T_max / scale, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(l1=st.floats(1e-3, 0.999), l2=st.floats(1.001, 6.0), conv=st.sampled_from(["table", "lemma"]))
def test_exponent_ranges_and_positivity(l1, l2, conv):
    rep = settling_bound(A(4), 1.0, 1.0, 1.0, l1, l2, conv)
    assert 0.5 < rep.kappa1 < 1 and rep.kappa2 > 1
    assert rep.c1 > 0 and rep.c2 > 0 and rep.T_max > 0


@pytest.mark.parametrize("l1,l2", [(0.5, 1.5), (0.1, 3.0), (0.9, 1.1)])
def test_bound_dominates_comparison_settling_time(l1, l2):
    """Time for dV/dt = -c1 V^k1 - c2 V^k2 to fall from V = inf to 0."""
    rep = settling_bound(A(10), 1.0, 2.0, 2.0, l1, l2)
    # substitute V = exp(s) to tame both ends
    f = lambda s: 1.0 / (rep.c1 * np.exp((rep.kappa1 - 1) * s) + rep.c2 * np.exp((rep.kappa2 - 1) * s))
    with np.errstate(over="ignore"):
        exact = scipy.integrate.quad(f, -np.inf, np.inf, limit=500)[0]
    assert exact <= rep.T_max


def test_precondition():
    with pytest.raises(PreconditionViolation):
        settling_bound(0.5 * np.eye(3))
    with pytest.raises(PreconditionViolation):
        settling_bound(np.eye(3))


def test_bad_inputs():
    with pytest.raises(ValueError):
        settling_bound(A(4), convention="other")
    with pytest.raises(ValueError):
        settling_bound(A(4), lambda1=1.2)
    with pytest.raises(ValueError):
        settling_table(A(4), FixedTimeParams(), "beta", [1.0])


def test_report_text_roundtrip():
    rep = settling_bound(A(20), 6, 100, 100, 0.5, 1.5)
    assert SettlingReport.from_text(rep.to_text()) == rep
