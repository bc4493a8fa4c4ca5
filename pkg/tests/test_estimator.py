import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from embroidery_actuator import (
    EmbroideryDesign,
    Pattern,
    PressureAngleEstimator,
    TubeMaterial,
    make_actuator_model,
    pressure_to_angle,
)

TRUE_G_MPA = 2.7
TRUE_P0_KPA = 85.0


@pytest.fixture(scope="module")
def training_data():
    tube = TubeMaterial(l0=0.1, r_f=1e-3, d_f=0.5e-3, g_e=0.6e6)
    design = EmbroideryDesign(pattern=Pattern.ZIGZAG, w=7e-3)
    model = make_actuator_model(tube, design, g=TRUE_G_MPA * 1e6, p0=TRUE_P0_KPA * 1e3)
    pressures_kpa = np.linspace(TRUE_P0_KPA, TRUE_P0_KPA + 100.0, 11)
    angles_deg = np.array(
        [math.degrees(pressure_to_angle(p * 1e3, model)) for p in pressures_kpa]
    )
    return pressures_kpa, angles_deg


def test_sklearn_params_round_trip():
    est = PressureAngleEstimator(pattern="cross", alpha0_deg=60.0, g_mpa=2.9)
    params = est.get_params()
    assert params["pattern"] == "cross"
    est2 = clone(est)
    assert est2.get_params() == params
    est2.set_params(g_mpa=1.1)
    assert est2.g_mpa == 1.1


def test_predict_requires_fit():
    est = PressureAngleEstimator()
    with pytest.raises(NotFittedError):
        est.predict([[100.0]])


def test_fit_recovers_parameters(training_data):
    pressures, angles = training_data
    est = PressureAngleEstimator(
        pattern="zigzag", w_mm=7.0, g_mpa=1.5, p0_kpa=60.0
    )
    est.fit(pressures.reshape(-1, 1), angles)
    assert est.g_mpa_ == pytest.approx(TRUE_G_MPA, rel=1e-3)
    assert est.p0_kpa_ == pytest.approx(TRUE_P0_KPA, rel=1e-3)
    assert est.rmse_deg_ < 0.01
    assert est.converged_


def test_predict_matches_functional_path(training_data):
    pressures, angles = training_data
    est = PressureAngleEstimator(pattern="zigzag", w_mm=7.0, g_mpa=1.5, p0_kpa=60.0)
    est.fit(pressures, angles)
    pred = est.predict(pressures)
    direct = np.array(
        [math.degrees(pressure_to_angle(p * 1e3, est.model_)) for p in pressures]
    )
    assert np.allclose(pred, direct)
    # a good fit also reproduces the training curve
    assert np.max(np.abs(pred - angles)) < 0.05


def test_score_is_r2(training_data):
    pressures, angles = training_data
    est = PressureAngleEstimator(pattern="zigzag", w_mm=7.0, g_mpa=1.5, p0_kpa=60.0)
    est.fit(pressures, angles)
    assert est.score(pressures, angles) > 0.999


def test_shape_validation(training_data):
    pressures, angles = training_data
    est = PressureAngleEstimator()
    with pytest.raises(ValueError):
        est.fit(np.column_stack([pressures, pressures]), angles)
    with pytest.raises(ValueError):
        est.fit(pressures[:-1], angles)


def test_down_branch_samples_excluded_by_default(training_data):
    pressures, angles = training_data
    # append corrupted release-branch samples; the fit must not see them
    pressures = np.concatenate([pressures, pressures[:4]])
    angles = np.concatenate([angles, angles[:4] + 30.0])
    branch = ["up"] * 11 + ["down"] * 4
    est = PressureAngleEstimator(pattern="zigzag", w_mm=7.0, g_mpa=1.5, p0_kpa=60.0)
    est.fit(pressures, angles, branch=branch)
    assert est.g_mpa_ == pytest.approx(TRUE_G_MPA, rel=1e-3)
