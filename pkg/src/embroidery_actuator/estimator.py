"""Scikit-learn estimator wrapping the actuator model and its calibration.

``PressureAngleEstimator.fit(X, y)`` calibrates the effective shear modulus
and/or the transition pressure against measured pressures (kPa) and bending
angles (deg); ``predict(X)`` evaluates the quasi-static model.  Parameters
are in the display units of the CLI (mm, kPa, MPa, deg) since this is a
user-facing surface; conversion to SI happens internally.

The class follows the sklearn estimator contract (``get_params`` /
``set_params`` / ``clone``, fitted attributes with trailing underscores), so
it composes with pipelines, grid search and cross-validation.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array

from .calibration import CalibrationProblem, fit_pressure_angle
from .core import Beta0Mode, EmbroideryDesign, Pattern, TubeMaterial
from .deformation import pressure_to_angle
from .inflation import make_actuator_model
from .units import kpa_to_pa, mm_to_m, mpa_to_pa, pa_to_kpa, pa_to_mpa


class PressureAngleEstimator(BaseEstimator, RegressorMixin):
    """Predicts bending angle [deg] from applied pressure [kPa].

    Parameters
    ----------
    pattern : {"zigzag", "cross"}
    w_mm : embroidery width
    alpha0_deg : embroidery angle (cross only)
    l0_mm, rf_mm, df_mm, ge_mpa : tube geometry and rubber modulus; the
        defaults are calibrated placeholders, not published values
    g_mpa : effective shear modulus (initial guess when fitted)
    p0_kpa : transition pressure; None derives it from the tube and design
        (initial guess when fitted)
    beta0_mode : {"verbatim-mm", "sqrt-corrected"}
    orientation_sign : +1, -1 or None for the per-pattern default
    fit_params : subset of ("g", "p0") adjusted by :meth:`fit`
    g_bounds_mpa, p0_bounds_kpa : fit bounds
    loss : {"l2", "huber"}
    include_down_branch : fit release-branch samples too
    max_eval : objective evaluation budget
    """

    def __init__(
        self,
        pattern: str = "zigzag",
        w_mm: float = 7.0,
        alpha0_deg: Optional[float] = None,
        l0_mm: float = 100.0,
        rf_mm: float = 1.0,
        df_mm: float = 0.5,
        ge_mpa: float = 0.6,
        g_mpa: float = 1.0,
        p0_kpa: Optional[float] = None,
        beta0_mode: str = "verbatim-mm",
        orientation_sign: Optional[int] = None,
        fit_params: Sequence[str] = ("g", "p0"),
        g_bounds_mpa: Sequence[float] = (0.01, 50.0),
        p0_bounds_kpa: Sequence[float] = (0.0, 500.0),
        loss: str = "l2",
        include_down_branch: bool = False,
        max_eval: int = 5000,
    ):
        self.pattern = pattern
        self.w_mm = w_mm
        self.alpha0_deg = alpha0_deg
        self.l0_mm = l0_mm
        self.rf_mm = rf_mm
        self.df_mm = df_mm
        self.ge_mpa = ge_mpa
        self.g_mpa = g_mpa
        self.p0_kpa = p0_kpa
        self.beta0_mode = beta0_mode
        self.orientation_sign = orientation_sign
        self.fit_params = fit_params
        self.g_bounds_mpa = g_bounds_mpa
        self.p0_bounds_kpa = p0_bounds_kpa
        self.loss = loss
        self.include_down_branch = include_down_branch
        self.max_eval = max_eval

    # ------------------------------------------------------------------
    def _build_model(self, g_mpa: float, p0_kpa: Optional[float]):
        tube = TubeMaterial(
            l0=mm_to_m(self.l0_mm),
            r_f=mm_to_m(self.rf_mm),
            d_f=mm_to_m(self.df_mm),
            g_e=mpa_to_pa(self.ge_mpa),
        )
        design = EmbroideryDesign(
            pattern=Pattern(self.pattern),
            w=mm_to_m(self.w_mm),
            alpha0=math.radians(self.alpha0_deg) if self.alpha0_deg is not None else None,
            orientation_sign=self.orientation_sign,
        )
        return make_actuator_model(
            tube,
            design,
            g=mpa_to_pa(g_mpa),
            p0=kpa_to_pa(p0_kpa) if p0_kpa is not None else None,
            beta0_mode=Beta0Mode(self.beta0_mode),
        )

    @staticmethod
    def _pressures_kpa(X) -> np.ndarray:
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError(
                    f"expected a single pressure column, got shape {X.shape}"
                )
            X = X[:, 0]
        return X

    # ------------------------------------------------------------------
    def fit(self, X, y, branch: Optional[Sequence[str]] = None):
        """Calibrate the free parameters on (pressure [kPa], angle [deg]) data.

        ``branch`` optionally labels each sample "up" or "down"; unlabelled
        samples are treated as pressurisation-branch data.
        """
        pressures = self._pressures_kpa(X)
        angles = check_array(y, ensure_2d=False, dtype=float)
        if pressures.shape[0] != angles.shape[0]:
            raise ValueError(
                f"X and y disagree on sample count: {pressures.shape[0]} vs {angles.shape[0]}"
            )
        if branch is None:
            branch = ["up"] * len(pressures)
        observations = tuple(
            (kpa_to_pa(p), math.radians(a), str(b).lower())
            for p, a, b in zip(pressures, angles, branch)
        )
        model0 = self._build_model(self.g_mpa, self.p0_kpa)
        problem = CalibrationProblem(
            observations=observations,
            free_params=tuple(self.fit_params),
            bounds={
                "g": (mpa_to_pa(self.g_bounds_mpa[0]), mpa_to_pa(self.g_bounds_mpa[1])),
                "p0": (kpa_to_pa(self.p0_bounds_kpa[0]), kpa_to_pa(self.p0_bounds_kpa[1])),
            },
            loss=self.loss,
            include_down=self.include_down_branch,
            max_eval=self.max_eval,
        )
        result, fitted = fit_pressure_angle(problem, model0)
        self.model_ = fitted
        self.g_mpa_ = pa_to_mpa(fitted.g)
        self.p0_kpa_ = pa_to_kpa(fitted.p0)
        self.rmse_deg_ = math.degrees(result.rmse)
        self.n_eval_ = result.n_eval
        self.converged_ = result.converged
        return self

    def predict(self, X) -> np.ndarray:
        """Bending angles [deg] at the given pressures [kPa]."""
        if not hasattr(self, "model_"):
            raise NotFittedError(
                "PressureAngleEstimator is not fitted yet; call fit first or use "
                "embroidery_actuator.pressure_to_angle for direct evaluation"
            )
        pressures = self._pressures_kpa(X)
        return np.array(
            [math.degrees(pressure_to_angle(kpa_to_pa(p), self.model_)) for p in pressures]
        )
