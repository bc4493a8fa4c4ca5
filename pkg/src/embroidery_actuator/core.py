"""Domain types and closed-form geometry of embroidery pneumatic actuators.

An actuator is an inflatable rubber tube stitched onto fabric; the stitched
thread and the fabric form a sleeve around the tube.  Pressurisation first
inflates the tube until it fills the sleeve cavity (radius ``r0``), then
deforms the fabric.  This module holds the immutable value objects shared by
both phases and the geometric relations between the design parameters and the
sleeve cavity.

Units are SI throughout (m, Pa, rad).  One deliberate exception is the
braiding-angle formula in :func:`braiding_angle0`, see its docstring.

All types are frozen dataclasses and all functions are pure, so everything
here is safe for concurrent use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .units import m_to_mm


class DomainError(ValueError):
    """An input lies outside the physically meaningful domain of an operation."""


class Pattern(enum.Enum):
    """Embroidery stitch pattern kind."""

    ZIGZAG = "zigzag"
    CROSS = "cross"


class Beta0Mode(enum.Enum):
    """Evaluation mode for the reference braiding angle formula.

    The printed design formula for the braiding angle is dimensionally
    inconsistent (a length divided by an area-like sum).  ``VERBATIM_MM``
    evaluates it exactly as printed with every length expressed in
    millimetres, which reproduces the regime the original designs were
    computed in.  ``SQRT_CORRECTED`` applies a square root over the
    denominator, restoring dimensional consistency, but rejects the
    documented 7 mm / 45 deg design point (its arcsine argument exceeds 1),
    which is why ``VERBATIM_MM`` is the default.
    """

    VERBATIM_MM = "verbatim-mm"
    SQRT_CORRECTED = "sqrt-corrected"


@dataclass(frozen=True)
class TubeMaterial:
    """Rubber tube geometry and stiffness in the unpressurised state.

    Attributes:
        l0:  axial length at rest [m]
        r_f: outer radius at rest [m]
        d_f: inner radius at rest [m]
        g_e: shear modulus of the tube rubber [Pa]
    """

    l0: float
    r_f: float
    d_f: float
    g_e: float

    def __post_init__(self):
        if not (0.0 < self.d_f < self.r_f):
            raise DomainError(
                f"tube radii must satisfy 0 < d_f < r_f, got d_f={self.d_f}, r_f={self.r_f}"
            )
        if self.l0 <= 0.0:
            raise DomainError(f"tube rest length must be positive, got l0={self.l0}")
        if self.g_e <= 0.0:
            raise DomainError(f"tube shear modulus must be positive, got g_e={self.g_e}")

    @property
    def wall_area_constant(self) -> float:
        """r_f**2 - d_f**2, the conserved wall cross-section measure [m^2]."""
        return self.r_f**2 - self.d_f**2


@dataclass(frozen=True)
class EmbroideryDesign:
    """Embroidery pattern kind and geometry.

    Attributes:
        pattern: stitch pattern kind
        w: embroidery width, the base of the thread/fabric triangle [m]
        alpha0: embroidery angle [rad], cross pattern only
        stitch_interval: stitch spacing [m], metadata only
        orientation_sign: +1 or -1 mapping the model's bending sign onto the
            front/back convention of the physical actuator; ``None`` selects
            the per-pattern default (see :func:`resolve_orientation_sign`)
    """

    pattern: Pattern
    w: float
    alpha0: Optional[float] = None
    stitch_interval: Optional[float] = None
    orientation_sign: Optional[int] = None

    def __post_init__(self):
        if self.w <= 0.0:
            raise DomainError(f"embroidery width must be positive, got w={self.w}")
        if self.pattern is Pattern.CROSS:
            if self.alpha0 is None or not (0.0 < self.alpha0 < math.pi / 2):
                raise DomainError(
                    f"cross pattern requires 0 < alpha0 < pi/2, got alpha0={self.alpha0}"
                )
        if self.orientation_sign not in (None, 1, -1):
            raise DomainError(
                f"orientation_sign must be +1, -1 or None, got {self.orientation_sign}"
            )


def resolve_orientation_sign(design: EmbroideryDesign) -> int:
    """Reported-angle sign for a design, applying per-pattern defaults.

    The equilibrium branch connected to the rest state elongates the
    embroidery side for every design expressible through the verbatim
    braiding-angle formula, so the model's raw bending angle is negative.
    The defaults map that branch onto the observed bending directions:
    zigzag actuators bend toward the fabric back side (reported positive),
    cross actuators bend backward for shallow embroidery angles and flip to
    the front side at steep angles.  The flip is placed at alpha0 = 45 deg,
    the lower edge of the angle range where front-side bending is observed.
    """
    if design.orientation_sign is not None:
        return design.orientation_sign
    if design.pattern is Pattern.ZIGZAG:
        return -1
    return 1 if design.alpha0 >= math.pi / 4 else -1


@dataclass(frozen=True)
class ActuatorModel:
    """Calibrated runtime model: design + tube + fitted stiffness + transition state.

    Attributes:
        tube: inflatable tube parameters
        design: embroidery pattern parameters
        g: effective shear modulus of the integrated actuator [Pa]; absorbs
           the combined tube/thread/fabric stiffness and is obtained by fit
        r0: sleeve cavity radius, the tube outer radius at the moment the
            deformation phase begins [m]
        p0: transition pressure at which the tube fills the sleeve [Pa]
        beta0: reference braiding angle at the transition state [rad],
               cross pattern only
        beta0_mode: how ``beta0`` was derived (recorded in all outputs);
               ``None`` means it was supplied explicitly
    """

    tube: TubeMaterial
    design: EmbroideryDesign
    g: float
    r0: float
    p0: float
    beta0: Optional[float] = None
    beta0_mode: Optional[Beta0Mode] = None

    def __post_init__(self):
        if self.g <= 0.0:
            raise DomainError(f"effective shear modulus must be positive, got g={self.g}")
        if self.r0 <= 0.0:
            raise DomainError(f"sleeve radius must be positive, got r0={self.r0}")
        if self.p0 < 0.0:
            raise DomainError(f"transition pressure must be nonnegative, got p0={self.p0}")
        if self.design.pattern is Pattern.CROSS:
            if self.beta0 is None or not (0.0 < self.beta0 < math.pi / 2):
                raise DomainError(
                    f"cross pattern requires 0 < beta0 < pi/2, got beta0={self.beta0}"
                )

    @property
    def orientation_sign(self) -> int:
        return resolve_orientation_sign(self.design)


def _as_float_or_array(x):
    a = np.asarray(x, dtype=float)
    return a


def _scalar_out(a, scalar_in: bool):
    if scalar_in:
        return float(a)
    return a


def sleeve_radius(w, r_f):
    """Sleeve cavity radius from embroidery width and tube rest radius.

    During fabrication the thread and fabric close around the tube in an
    isosceles triangle of base ``w`` and height ``2*r_f`` (the tube rest
    diameter); the cavity is the circle whose circumference equals that
    triangle's perimeter::

        r0 = (2*sqrt((w/2)^2 + (2*r_f)^2) + w) / (2*pi)

    Accepts scalars or numpy arrays.  Raises :class:`DomainError` for
    negative ``w`` or nonpositive ``r_f``.
    """
    w_a = _as_float_or_array(w)
    rf_a = _as_float_or_array(r_f)
    if np.any(w_a < 0.0):
        raise DomainError(f"embroidery width must be nonnegative, got w={w}")
    if np.any(rf_a <= 0.0):
        raise DomainError(f"tube rest radius must be positive, got r_f={r_f}")
    r0 = (2.0 * np.sqrt((w_a / 2.0) ** 2 + (2.0 * rf_a) ** 2) + w_a) / (2.0 * np.pi)
    return _scalar_out(r0, np.ndim(w) == 0 and np.ndim(r_f) == 0)


def braiding_angle0(w: float, alpha0: float, r_f: float,
                    mode: Beta0Mode = Beta0Mode.VERBATIM_MM) -> float:
    """Reference braiding angle of the cross-pattern threads at the transition state.

    Evaluates, with ``t = tan(alpha0)``::

        VERBATIM_MM:     beta0 = arcsin( w*t / (4*r_f^2 + w^2/4 + (w^2/4)*t^2) )
        SQRT_CORRECTED:  beta0 = arcsin( w*t / sqrt(4*r_f^2 + w^2/4 + (w^2/4)*t^2) )

    VERBATIM_MM converts ``w`` and ``r_f`` to millimetres before evaluating
    (the formula is not dimensionally consistent; millimetre evaluation is
    the regime the published designs were computed in).  See
    :class:`Beta0Mode` for why it is the default.

    Raises :class:`DomainError` when the arcsine argument leaves [-1, 1],
    naming the mode and the offending value.
    """
    if not (0.0 < alpha0 < math.pi / 2):
        raise DomainError(f"embroidery angle must satisfy 0 < alpha0 < pi/2, got {alpha0}")
    if w <= 0.0 or r_f <= 0.0:
        raise DomainError(f"w and r_f must be positive, got w={w}, r_f={r_f}")
    t = math.tan(alpha0)
    w_mm = m_to_mm(w)
    rf_mm = m_to_mm(r_f)
    denom = 4.0 * rf_mm**2 + w_mm**2 / 4.0 + (w_mm**2 / 4.0) * t**2
    if mode is Beta0Mode.SQRT_CORRECTED:
        denom = math.sqrt(denom)
    arg = w_mm * t / denom
    if not -1.0 <= arg <= 1.0:
        raise DomainError(
            f"braiding-angle arcsine argument {arg:.6g} outside [-1, 1] in mode "
            f"{mode.value} (w={w_mm:g} mm, alpha0={math.degrees(alpha0):g} deg, "
            f"r_f={rf_mm:g} mm)"
        )
    return math.asin(arg)


def axial_stretch_mean(l, l0):
    """Mean axial stretch of the tube wall, lambda_m = (l + l0) / (2*l0)."""
    return (_as_float_or_array(l) + l0) / (2.0 * l0)


def inner_radius(r, l, tube: TubeMaterial):
    """Tube inner radius from outer radius and embroidery-side length.

    Wall incompressibility conserves (r^2 - d^2) * lambda_m, so::

        d = sqrt(r^2 - (r_f^2 - d_f^2) / lambda_m)

    Accepts scalars or arrays.  Raises :class:`DomainError` when the wall
    would be thicker than the tube (r^2 < (r_f^2 - d_f^2) / lambda_m).
    """
    r_a = _as_float_or_array(r)
    l_a = _as_float_or_array(l)
    if np.any(r_a <= 0.0) or np.any(l_a <= 0.0):
        raise DomainError(f"r and l must be positive, got r={r}, l={l}")
    lam_m = axial_stretch_mean(l_a, tube.l0)
    d_sq = r_a**2 - tube.wall_area_constant / lam_m
    if np.any(d_sq < 0.0):
        raise DomainError(
            f"wall thicker than tube: r^2 = {np.min(r_a**2):.6g} m^2 < "
            f"(r_f^2 - d_f^2)/lambda_m = {np.max(tube.wall_area_constant / lam_m):.6g} m^2"
        )
    return _scalar_out(np.sqrt(d_sq), np.ndim(r) == 0 and np.ndim(l) == 0)


def internal_volume(l, d, l0: float):
    """Internal tube volume V = ((l + l0) / 2) * pi * d^2.

    ``l`` is the embroidery-side length, ``l0`` the fabric-side (rest)
    length; their mean is the effective axial extent of the cavity.
    """
    l_a = _as_float_or_array(l)
    d_a = _as_float_or_array(d)
    if np.any(l_a <= 0.0) or np.any(d_a < 0.0):
        raise DomainError(f"need l > 0 and d >= 0, got l={l}, d={d}")
    if l0 <= 0.0:
        raise DomainError(f"need l0 > 0, got l0={l0}")
    v = ((l_a + l0) / 2.0) * np.pi * d_a**2
    return _scalar_out(v, np.ndim(l) == 0 and np.ndim(d) == 0)
