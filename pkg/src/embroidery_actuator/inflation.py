"""Internal inflation phase: tube pressure-radius law and the transition state.

Below the transition pressure the tube inflates freely inside the sleeve and
no fabric deformation occurs.  The phase ends when the tube outer radius
reaches the sleeve cavity radius ``r0``; the pressure at that moment is the
transition pressure ``p0``.

Axial elongation is neglected during this phase (the axial stretch is
hard-coded to 1), matching the assumption under which the closed-form
pressure law below is derived.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .core import (
    ActuatorModel,
    Beta0Mode,
    DomainError,
    EmbroideryDesign,
    Pattern,
    TubeMaterial,
    braiding_angle0,
    sleeve_radius,
)

_RADIUS_TOL = 1e-12  # m, bisection tolerance for radius_at_pressure


def inflation_pressure(r, tube: TubeMaterial):
    """Pressure required to inflate the free tube to outer radius ``r``.

    Closed-form neo-Hookean thick-wall result with negligible axial
    elongation::

        P = (1/2) * g_e * (r^2/r_f^2 + r_f^2/r^2 - 2)

    Accepts scalars or arrays.  Raises :class:`DomainError` for r < r_f
    (the tube cannot shrink below its rest radius under positive pressure).
    """
    r_a = np.asarray(r, dtype=float)
    if np.any(r_a < tube.r_f * (1.0 - 1e-12)):
        raise DomainError(f"radius {np.min(r_a)} below rest radius {tube.r_f}")
    x = r_a / tube.r_f
    p = 0.5 * tube.g_e * (x**2 + 1.0 / x**2 - 2.0)
    return float(p) if np.ndim(r) == 0 else p


def radius_at_pressure(p: float, tube: TubeMaterial) -> float:
    """Tube outer radius at pressure ``p``: the inverse of :func:`inflation_pressure`.

    Found by bisection on [r_f, r_hi] with r_hi doubled from 2*r_f until the
    bracket holds; the pressure law is strictly increasing and unbounded for
    r > r_f, so a unique solution exists for every p >= 0.  Deterministic.
    Bisection continues past the 1e-12 m bracket until the round-trip
    pressure residual is below 1e-9 * max(p, 1 Pa); the pressure slope can
    exceed 1e9 Pa/m, so the radius tolerance alone would not guarantee that.
    """
    if p < 0.0:
        raise DomainError(f"pressure must be nonnegative, got {p}")
    if p == 0.0:
        return tube.r_f
    lo = tube.r_f
    hi = 2.0 * tube.r_f
    while inflation_pressure(hi, tube) < p:
        hi *= 2.0
    p_tol = 1e-9 * max(p, 1.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p_mid = inflation_pressure(mid, tube)
        if hi - lo <= _RADIUS_TOL and abs(p_mid - p) <= p_tol:
            return mid
        if mid == lo or mid == hi:  # bracket collapsed to adjacent floats
            return mid
        if p_mid < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def transition_pressure(tube: TubeMaterial, design: EmbroideryDesign) -> Tuple[float, float]:
    """(p0, r0): pressure and radius at which the tube fills the sleeve.

    ``r0`` comes from :func:`sleeve_radius`; ``p0`` is the free-inflation
    pressure at that radius.  If the cavity is no larger than the rest tube
    (r0 <= r_f) the sleeve is already filled at rest and p0 = 0.
    """
    r0 = sleeve_radius(design.w, tube.r_f)
    if r0 <= tube.r_f:
        return 0.0, r0
    return inflation_pressure(r0, tube), r0


def make_actuator_model(
    tube: TubeMaterial,
    design: EmbroideryDesign,
    g: float,
    p0: Optional[float] = None,
    r0: Optional[float] = None,
    beta0: Optional[float] = None,
    beta0_mode: Beta0Mode = Beta0Mode.VERBATIM_MM,
) -> ActuatorModel:
    """Assemble a runtime model, deriving the transition state where not given.

    ``r0`` defaults to the sleeve cavity radius, ``p0`` to the transition
    pressure at that radius, and (cross pattern only) ``beta0`` to the
    design braiding angle evaluated in ``beta0_mode``.  Pass explicit values
    to pin any of them, e.g. a fitted ``p0``.
    """
    derived_r0 = sleeve_radius(design.w, tube.r_f)
    if r0 is None:
        r0 = derived_r0
    if p0 is None:
        if r0 <= tube.r_f:
            p0 = 0.0
        else:
            p0 = inflation_pressure(r0, tube)
    mode_used: Optional[Beta0Mode] = None
    if design.pattern is Pattern.CROSS and beta0 is None:
        beta0 = braiding_angle0(design.w, design.alpha0, tube.r_f, beta0_mode)
        mode_used = beta0_mode
    return ActuatorModel(
        tube=tube, design=design, g=g, r0=r0, p0=p0, beta0=beta0, beta0_mode=mode_used
    )
