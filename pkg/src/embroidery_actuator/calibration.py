"""Least-squares calibration of model parameters against measured data.

Two fits are provided:

* :func:`fit_pressure_angle` adjusts the effective shear modulus and/or the
  transition pressure of one actuator so its predicted pressure-angle curve
  matches measured (pressure, angle) pairs.
* :func:`fit_tube_geometry` recovers the tube rest radius and rubber shear
  modulus from published (width, transition pressure) pairs, which is how
  the unpublished tube properties are reconstructed.

Both use a bounded Nelder-Mead simplex on parameters normalised to their
bounds, with a fixed deterministic start, so identical problems always give
identical results.  The objective of the pressure-angle fit contains an
inner equilibrium solve per observation; derivative-free search avoids its
solver noise.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .core import ActuatorModel, DomainError, TubeMaterial, sleeve_radius
from .deformation import NoEquilibriumError, pressure_to_angle

FREE_PARAM_NAMES = ("g", "p0")
DEFAULT_BOUNDS = {
    "g": (0.01e6, 50e6),      # Pa
    "p0": (0.0, 500e3),       # Pa
}
HUBER_DELTA_DEFAULT = math.radians(5.0)

BRANCH_UP = "up"
BRANCH_DOWN = "down"


@dataclass(frozen=True)
class CalibrationProblem:
    """Observed pressure-angle data and the fit configuration.

    Attributes:
        observations: (pressure [Pa], angle [rad], branch) triples; branch is
            "up" (pressurisation) or "down" (release)
        free_params: subset of ("g", "p0") to adjust
        bounds: per-parameter (lo, hi) in SI units
        loss: "l2" or "huber"
        huber_delta: transition residual of the Huber loss [rad]
        include_down: also fit the release branch (off by default; the model
            has no hysteresis, so the down branch documents mismatch instead)
        max_eval: objective evaluation budget
    """

    observations: Tuple[Tuple[float, float, str], ...]
    free_params: Tuple[str, ...] = ("g", "p0")
    bounds: Dict[str, Tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_BOUNDS)
    )
    loss: str = "l2"
    huber_delta: float = HUBER_DELTA_DEFAULT
    include_down: bool = False
    max_eval: int = 5000

    def __post_init__(self):
        if len(self.observations) < 3:
            raise DomainError(
                f"need at least 3 observations, got {len(self.observations)}"
            )
        for name in self.free_params:
            if name not in FREE_PARAM_NAMES:
                raise DomainError(f"unknown free parameter {name!r}")
            lo, hi = self.bounds[name]
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise DomainError(f"bounds for {name!r} must be finite with lo < hi")
        if self.loss not in ("l2", "huber"):
            raise DomainError(f"loss must be 'l2' or 'huber', got {self.loss!r}")
        for p, th, br in self.observations:
            if br not in (BRANCH_UP, BRANCH_DOWN):
                raise DomainError(f"branch must be 'up' or 'down', got {br!r}")

    def fitted_observations(self) -> List[Tuple[float, float]]:
        return [
            (p, th)
            for p, th, br in self.observations
            if self.include_down or br == BRANCH_UP
        ]


@dataclass(frozen=True)
class FitResult:
    """Outcome of a parameter fit.

    ``params`` holds the fitted values in SI units; ``rmse`` is the
    root-mean-square angle residual [rad] over the fitted observations.
    """

    params: Dict[str, float]
    rmse: float
    n_eval: int
    converged: bool

    def with_units(self) -> Dict[str, float]:
        """Display-unit view: g in MPa, p0 in kPa, rmse in degrees."""
        out = {}
        if "g" in self.params:
            out["g_mpa"] = self.params["g"] / 1e6
        if "p0" in self.params:
            out["p0_kpa"] = self.params["p0"] / 1e3
        out["rmse_deg"] = math.degrees(self.rmse)
        return out


def _model_with(model: ActuatorModel, values: Dict[str, float]) -> ActuatorModel:
    kwargs = {}
    if "g" in values:
        kwargs["g"] = values["g"]
    if "p0" in values:
        kwargs["p0"] = values["p0"]
    return dataclasses.replace(model, **kwargs)


def _loss_value(residuals: np.ndarray, loss: str, delta: float) -> float:
    if loss == "l2":
        return float(np.sum(residuals**2))
    a = np.abs(residuals)
    quad = 0.5 * residuals**2
    lin = delta * (a - 0.5 * delta)
    return float(np.sum(np.where(a <= delta, quad, lin)))


def _rmse(model: ActuatorModel, obs: Sequence[Tuple[float, float]]) -> float:
    res = []
    for p, th in obs:
        res.append(pressure_to_angle(p, model) - th)
    return float(np.sqrt(np.mean(np.square(res))))


def _nelder_mead(objective, x0_norm: np.ndarray, max_eval: int, callback=None):
    """Deterministic simplex on [0, 1]-normalised coordinates."""
    n = len(x0_norm)
    simplex = np.tile(x0_norm, (n + 1, 1))
    for i in range(n):
        step = 0.05 if x0_norm[i] <= 0.9 else -0.05
        simplex[i + 1, i] = x0_norm[i] + step
    return minimize(
        objective,
        x0_norm,
        method="Nelder-Mead",
        callback=callback,
        options=dict(
            initial_simplex=simplex,
            xatol=1e-10,
            fatol=1e-14,
            maxfev=max_eval,
            adaptive=False,
        ),
    )


def fit_pressure_angle(
    problem: CalibrationProblem,
    model0: ActuatorModel,
    callback=None,
) -> Tuple[FitResult, ActuatorModel]:
    """Fit the free parameters of ``model0`` to the observed curve.

    ``model0`` supplies every fixed parameter and the initial guess for the
    free ones.  A solver failure at a trial point scores infinite loss, so
    such points are simply rejected.  Returns the fit summary and the model
    with fitted values installed.  ``callback(best_loss)`` is invoked after
    each simplex iteration (used to verify monotone descent).
    """
    obs = problem.fitted_observations()
    if not obs:
        raise DomainError("no observations on the fitted branch")
    names = tuple(problem.free_params)

    if not names:
        rmse = _rmse(model0, obs)
        return FitResult(params={}, rmse=rmse, n_eval=len(obs), converged=True), model0

    los = np.array([problem.bounds[n][0] for n in names])
    his = np.array([problem.bounds[n][1] for n in names])
    x0 = np.array([{"g": model0.g, "p0": model0.p0}[n] for n in names])
    x0_norm = np.clip((x0 - los) / (his - los), 0.0, 1.0)

    n_eval = 0
    cache: Dict[tuple, float] = {}

    def objective(z):
        nonlocal n_eval
        key = tuple(np.asarray(z, dtype=float))
        if key in cache:
            return cache[key]
        n_eval += 1
        if np.any(z < -1e-12) or np.any(z > 1.0 + 1e-12):
            cache[key] = float("inf")
            return cache[key]
        values = dict(zip(names, los + np.clip(z, 0.0, 1.0) * (his - los)))
        try:
            model = _model_with(model0, values)
            residuals = np.array(
                [pressure_to_angle(p, model) - th for p, th in obs]
            )
            cache[key] = _loss_value(residuals, problem.loss, problem.huber_delta)
        except (DomainError, NoEquilibriumError):
            cache[key] = float("inf")
        return cache[key]

    cb = None
    if callback is not None:
        def cb(xk):
            callback(objective(xk))  # cached: the best vertex was already scored

    result = _nelder_mead(objective, x0_norm, problem.max_eval, callback=cb)
    z = np.clip(result.x, 0.0, 1.0)
    values = dict(zip(names, los + z * (his - los)))
    fitted = _model_with(model0, values)
    rmse = _rmse(fitted, obs)
    fit = FitResult(
        params=values,
        rmse=rmse,
        n_eval=n_eval,
        converged=bool(result.success) and n_eval <= problem.max_eval,
    )
    return fit, fitted


@dataclass(frozen=True)
class TubeFitResult:
    r_f: float      # m
    g_e: float      # Pa
    rmse: float     # Pa, over the transition-pressure targets
    n_eval: int
    converged: bool


TUBE_RF_BOUNDS = (0.3e-3, 3.0e-3)     # m
TUBE_GE_BOUNDS = (0.05e6, 5.0e6)      # Pa


def _transition_for(w: float, r_f: float, g_e: float) -> float:
    r0 = sleeve_radius(w, r_f)
    if r0 <= r_f:
        return 0.0
    x = r0 / r_f
    return 0.5 * g_e * (x**2 + 1.0 / x**2 - 2.0)


def fit_tube_geometry(
    targets: Sequence[Tuple[float, float]],
    g_e: Optional[float] = None,
    rf_bounds: Tuple[float, float] = TUBE_RF_BOUNDS,
    ge_bounds: Tuple[float, float] = TUBE_GE_BOUNDS,
    grid: int = 24,
) -> TubeFitResult:
    """Recover (r_f, g_e) from (width, transition pressure) targets.

    Minimises the summed squared transition-pressure error over the bounded
    box, using a deterministic coarse grid pre-search followed by a simplex
    refinement from the best cell.  Pass ``g_e`` to pin the rubber modulus
    and fit the radius alone (one target then suffices).

    Raises :class:`DomainError` for degenerate targets (fewer than two
    distinct widths when both parameters are free).
    """
    targets = [(float(w), float(p)) for w, p in targets]
    if not targets:
        raise DomainError("no targets")
    widths = {w for w, _ in targets}
    if g_e is None and len(widths) < 2:
        raise DomainError(
            "degenerate targets: need at least two distinct widths to fit "
            "both r_f and g_e"
        )

    def sse(rf, ge):
        return sum((_transition_for(w, rf, ge) - p) ** 2 for w, p in targets)

    n_eval = 0

    if g_e is None:
        names_los = np.array([rf_bounds[0], ge_bounds[0]])
        names_his = np.array([rf_bounds[1], ge_bounds[1]])

        def objective(z):
            nonlocal n_eval
            n_eval += 1
            if np.any(z < -1e-12) or np.any(z > 1 + 1e-12):
                return float("inf")
            rf, ge = names_los + np.clip(z, 0, 1) * (names_his - names_los)
            return sse(rf, ge)

        # deterministic pre-search
        zs = np.linspace(0.0, 1.0, grid)
        best_z, best_f = None, float("inf")
        for z1 in zs:
            for z2 in zs:
                f = objective(np.array([z1, z2]))
                if f < best_f:
                    best_f, best_z = f, np.array([z1, z2])
        result = _nelder_mead(objective, best_z, 4000)
        rf, ge = names_los + np.clip(result.x, 0, 1) * (names_his - names_los)
    else:
        lo, hi = rf_bounds

        def objective(z):
            nonlocal n_eval
            n_eval += 1
            if z[0] < -1e-12 or z[0] > 1 + 1e-12:
                return float("inf")
            return sse(lo + np.clip(z[0], 0, 1) * (hi - lo), g_e)

        zs = np.linspace(0.0, 1.0, max(grid, 64))
        best_z = zs[int(np.argmin([objective(np.array([z])) for z in zs]))]
        result = _nelder_mead(objective, np.array([best_z]), 2000)
        rf = lo + float(np.clip(result.x[0], 0, 1)) * (hi - lo)
        ge = g_e

    rmse = math.sqrt(sse(rf, ge) / len(targets))
    return TubeFitResult(
        r_f=float(rf), g_e=float(ge), rmse=rmse, n_eval=n_eval,
        converged=bool(result.success),
    )


def calibrated_tube(
    targets: Sequence[Tuple[float, float]],
    l0: float,
    d_f: float = 0.5e-3,
) -> TubeMaterial:
    """Convenience: fit tube geometry and wrap it as a :class:`TubeMaterial`.

    Only r_f and g_e are identifiable from transition pressures; the rest
    inner radius ``d_f`` stays at its placeholder default and outputs built
    on this tube should flag the geometry as calibrated, not measured.
    """
    fit = fit_tube_geometry(targets)
    return TubeMaterial(l0=l0, r_f=fit.r_f, d_f=d_f, g_e=fit.g_e)
