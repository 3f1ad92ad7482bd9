import math

import numpy as np
import pytest

from steerkit.cvgauss import (LOG2_PI_E, GaussianState, conditional_variance,
                              gaussian_differential_entropy, rescaled, steering_conditional_cv,
                              steering_symmetric_binned, steering_symmetric_cv, thermal_product, tmsv)
from steerkit.errors import InvalidGaussianState, NonpositiveVariance
from steerkit.infotheory import BinningSpec

R_GRID = [round(0.1 * k, 1) for k in range(21)]


def precision_oracle(g, target, given):
    """Conditional variance as 1 / (inverse covariance)_tt of the pair block."""
    idx = {"xA": 0, "kA": 1, "xB": 2, "kB": 3}
    i = [idx[target], idx[given]]
    return 1.0 / np.linalg.inv(g.cov[np.ix_(i, i)])[0, 0]


def test_tmsv_vacuum():
    np.testing.assert_array_equal(tmsv(0).cov, np.eye(4) / 2)


def test_tmsv_marginal_variance():
    assert tmsv(0.5).variance("xA") == pytest.approx(math.cosh(1.0) / 2, abs=1e-15)
    assert math.cosh(1.0) / 2 == pytest.approx(0.77154, abs=1e-5)


@pytest.mark.parametrize("r", R_GRID)
def test_tmsv_positive_definite(r):
    assert np.linalg.eigvalsh(tmsv(r).cov).min() > 0


def test_state_validation():
    with pytest.raises(InvalidGaussianState):
        GaussianState(np.zeros(4), np.eye(4) / 4)  # below vacuum
    with pytest.raises(InvalidGaussianState):
        GaussianState(np.zeros(4), -np.eye(4))
    with pytest.raises(InvalidGaussianState):
        GaussianState(np.zeros(3), np.eye(4))
    asym = np.eye(4) / 2
    asym[0, 2] = 0.1
    with pytest.raises(InvalidGaussianState):
        GaussianState(np.zeros(4), asym)
    with pytest.raises(ValueError):
        tmsv(-0.1)


def test_differential_entropy():
    assert gaussian_differential_entropy(1 / (2 * math.pi * math.e)) == pytest.approx(0.0, abs=1e-15)
    assert gaussian_differential_entropy(0.5) == pytest.approx(0.5 * math.log2(math.pi * math.e), abs=1e-15)
    assert gaussian_differential_entropy(0.5) == pytest.approx(1.5471, abs=1e-4)
    assert gaussian_differential_entropy(2 / (2 * math.pi * math.e)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(NonpositiveVariance):
        gaussian_differential_entropy(0.0)


@pytest.mark.parametrize("r", R_GRID)
def test_conditional_variance(r):
    g = tmsv(r)
    expected = 1 / (2 * math.cosh(2 * r))
    assert conditional_variance(g, "xB", "xA") == pytest.approx(expected, rel=1e-12)
    assert conditional_variance(g, "xB", "xA") == pytest.approx(precision_oracle(g, "xB", "xA"), rel=1e-10)
    assert conditional_variance(g, "kA", "kB") == pytest.approx(precision_oracle(g, "kA", "kB"), rel=1e-10)


def test_conditional_variance_limit():
    assert conditional_variance(tmsv(0), "xB", "xA") == pytest.approx(0.5, abs=1e-15)
    assert conditional_variance(tmsv(8.0), "xB", "xA") < 1e-6


def test_conditional_cv_examples():
    rep = steering_conditional_cv(tmsv(0))
    assert rep.lhs == pytest.approx(LOG2_PI_E, abs=1e-12) and rep.verdict == "saturated"
    rep = steering_conditional_cv(tmsv(0.5))
    assert rep.lhs == pytest.approx(LOG2_PI_E - math.log2(math.cosh(1)), abs=1e-12)
    assert rep.lhs == pytest.approx(2.4683, abs=1e-4)
    assert rep.verdict == "violated"
    assert LOG2_PI_E == pytest.approx(3.0942, abs=1e-4)


@pytest.mark.parametrize("r", R_GRID)
def test_cv_margins_on_grid(r):
    expected = -math.log2(math.cosh(2 * r))
    cond = steering_conditional_cv(tmsv(r))
    sym = steering_symmetric_cv(tmsv(r))
    assert cond.margin == pytest.approx(expected, abs=1e-9)
    assert sym.margin == pytest.approx(expected, abs=1e-9)
    assert sym.lhs == pytest.approx(2 * math.log2(math.cosh(2 * r)), abs=1e-9)
    if r > 0:
        assert cond.verdict == sym.verdict == "violated"


def test_symmetric_cv_examples():
    rep = steering_symmetric_cv(tmsv(0))
    assert rep.lhs == pytest.approx(0.0, abs=1e-12) and rep.bound == pytest.approx(0.0, abs=1e-12)
    assert rep.verdict == "saturated"
    rep = steering_symmetric_cv(tmsv(0.5))
    assert rep.lhs == pytest.approx(1.2517, abs=1e-4)
    assert rep.bound == pytest.approx(0.6259, abs=1e-4)
    rep = steering_symmetric_cv(thermal_product(1.3, 0.9))
    assert rep.lhs == pytest.approx(0.0, abs=1e-12) and rep.verdict == "satisfied"


def test_components_recombine():
    rep = steering_symmetric_cv(tmsv(0.7))
    c = rep.components
    assert rep.lhs == c["h(xA:xB)"] + c["h(kA:kB)"]
    assert rep.bound == max(c["bound_A"], c["bound_B"])
    rep = steering_conditional_cv(tmsv(0.7))
    assert rep.lhs == rep.components["h(xB|xA)"] + rep.components["h(kB|kA)"]


@pytest.mark.parametrize("s", [0.3, 2.0, 7.5])
@pytest.mark.parametrize("r", [0.0, 0.4, 1.3])
def test_symplectic_rescaling_invariance(r, s):
    g, h = tmsv(r), rescaled(tmsv(r), s)
    for fn in (steering_conditional_cv, steering_symmetric_cv):
        assert fn(h).margin == pytest.approx(fn(g).margin, abs=1e-9)


def test_binned_rescaling_invariance():
    g, h = tmsv(0.6), rescaled(tmsv(0.6), 3.0)
    assert steering_symmetric_binned(h, bins=24).margin == pytest.approx(
        steering_symmetric_binned(g, bins=24).margin, abs=1e-9)


def test_binned_vacuum():
    rep = steering_symmetric_binned(tmsv(0), bins=16)
    assert rep.lhs <= 1e-6 and rep.verdict != "violated"


def test_binned_two_bins_cap():
    spec = BinningSpec(-1.0, 1.0, 2)
    rep = steering_symmetric_binned(tmsv(1.5), spec, spec)
    assert rep.lhs <= 2.0


@pytest.mark.parametrize("r", [0.2, 0.8, 1.2])
def test_binned_refinement_approaches_continuous(r):
    g = tmsv(r)
    continuous = steering_symmetric_cv(g).lhs
    values = [steering_symmetric_binned(g, bins=b).lhs for b in (8, 16, 32, 64)]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert all(v <= continuous + 1e-9 for v in values)


def test_binned_thermal_state_is_uncorrelated():
    rep = steering_symmetric_binned(thermal_product(0.8, 1.7), bins=12)
    assert rep.lhs <= 1e-6
