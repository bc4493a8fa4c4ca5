"""Deformation phase: strain energy, pneumatic force, and quasi-static equilibrium.

Above the transition pressure the tube presses against the sleeve and further
pressurisation bends the fabric.  The fabric side keeps its rest length
``l0`` while the embroidery-side length ``l`` is the single generalised
coordinate.  Equilibrium balances the elastic resistance against the
pneumatic generalised force::

    dE/dl = (P - p0) * dV/dl

where ``E`` is the neo-Hookean strain energy of the constrained wall and
``V`` the internal volume.  The embroidery pattern enters through a
kinematic closure ``r(l)`` (zigzag: radius pinned at ``r0``; cross:
pantograph coupling), and the bending angle follows from the length
difference between the two sides.

Energy closed form (reference state l = l0, r = r0, wall between the
current inner radius ``d`` and outer radius ``r``)::

    E = (pi*G*l0/2) * [ (A^2 + r^2/r0^2 - 3)(r^2 - d^2)
                        + (B^2/4)(r^4 - d^4)
                        + (r0^2/r^2) * 2A/B^2 * ((A^2-B^2 r^2)^-1/2
                                                 - (A^2-B^2 d^2)^-1/2) ]
    A = (l + l0)/(2 l0),  B = (l - l0)/(2 r l0)

The 1/B^2 difference term is evaluated in the algebraically identical,
cancellation-free form

    2A (r^2 - d^2) / ( s_r s_d (s_r + s_d) ),    s_x = sqrt(A^2 - B^2 x^2)

which is regular through B = 0; below ``|B| < EPS_B_FACTOR / l0`` the
second-order series in B is used instead, and the two agree to machine
precision at the seam (unit-tested).  All formulas accept numpy arrays in
``l``, which the equilibrium scan exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import (
    ActuatorModel,
    DomainError,
    Pattern,
    axial_stretch_mean,
    inner_radius,
    resolve_orientation_sign,
)

EPS_B_FACTOR = 1e-6        # series branch threshold: |B| < EPS_B_FACTOR / l0
FD_STEP_FACTOR = 1e-7      # central-difference step: max(1e-7 * l0, 1e-10) m
SCAN_STEP_FACTOR = 1e-4    # outward scan step as a fraction of l0
BISECT_TOL = 1e-12         # m, bracket width at which bisection stops
THETA_INVERT_TOL = 1e-12   # rad, tolerance of the cross angle inversion
_SCAN_CHUNK = 1024         # scan grid points evaluated per vectorised block
_EXTENSION_CAP = 6.0       # solver search limit, l <= cap * l0


class NoEquilibriumError(RuntimeError):
    """The equilibrium residual does not change sign inside the valid domain."""


@dataclass(frozen=True)
class DeformationState:
    """Solved state of the deformation phase at one pressure.

    ``theta_model`` is the raw bending angle of the kinematic closure,
    before the design's orientation sign is applied.
    """

    l: float        # embroidery-side length [m]
    r: float        # outer radius [m]
    d: float        # inner radius [m]
    theta_model: float  # bending angle before orientation sign [rad]
    pressure: float     # applied pressure [Pa]


@dataclass(frozen=True)
class CurveSample:
    pressure: float            # Pa
    theta: float               # reported angle [rad]; NaN when status != "ok"
    l: float                   # m; NaN when failed
    r: float                   # m; NaN when failed
    status: str                # "ok" or a short failure reason


@dataclass(frozen=True)
class PressureAngleCurve:
    """Ordered pressure sweep samples plus the metadata they were produced with."""

    samples: Tuple[CurveSample, ...]
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def pressures(self) -> np.ndarray:
        return np.array([s.pressure for s in self.samples])

    @property
    def angles(self) -> np.ndarray:
        return np.array([s.theta for s in self.samples])


# ---------------------------------------------------------------------------
# pattern constraints
# ---------------------------------------------------------------------------

class ZigzagConstraint:
    """Zigzag closure: threads nearly perpendicular to the axis block radial
    expansion, so r = r0 and only axial extension occurs.  The bending angle
    is theta = (l0 - l) / (2 r0)."""

    def __init__(self, model: ActuatorModel):
        self.r0 = model.r0
        self.l0 = model.tube.l0
        # d^2 > 0 requires lambda_m > C / r0^2
        c = model.tube.wall_area_constant
        lo = self.l0 * (2.0 * c / self.r0**2 - 1.0)
        self._lo = max(lo * (1.0 + 1e-9), 1e-6 * self.l0)
        self._hi = _EXTENSION_CAP * self.l0

    def radius_of(self, l):
        return np.broadcast_to(np.float64(self.r0), np.shape(l)).copy() if np.ndim(l) else self.r0

    def radius_masked(self, l):
        return self.radius_of(l)

    def dradius_dl(self, l):
        return np.zeros(np.shape(l)) if np.ndim(l) else 0.0

    def theta_of(self, l):
        return (self.l0 - l) / (2.0 * self.r0)

    def l_of(self, theta):
        return self.l0 - 2.0 * self.r0 * theta

    def l_bounds(self) -> Tuple[float, float]:
        return self._lo, self._hi

    def scan_directions(self) -> Tuple[int, ...]:
        # extension expected: scan upward first, downward as fallback
        return (+1, -1)


class CrossConstraint:
    """Cross closure: the crossing threads form a pantograph, so radial
    expansion and axial length are coupled through the braiding angle::

        l / l0 = sin(beta) / sin(beta0),   r / r0 = cos(beta) / cos(beta0)

    The bending angle satisfies l = l0 - 2 r(l) theta, whose closed-form
    inversion is :meth:`l_of`; :meth:`theta_of` inverts it back numerically.
    """

    def __init__(self, model: ActuatorModel):
        if model.beta0 is None:
            raise DomainError("cross constraint requires beta0")
        self.r0 = model.r0
        self.l0 = model.tube.l0
        self.beta0 = model.beta0
        self._sin0 = math.sin(model.beta0)
        self._cos0 = math.cos(model.beta0)
        self.gamma = 2.0 * self.r0 / (self.l0 * self._cos0)
        self._lo = 1e-6 * self.l0
        self._hi = min(self.l0 / self._sin0 * (1.0 - 1e-9), _EXTENSION_CAP * self.l0)

    def radius_of(self, l):
        sinb = np.asarray(l, dtype=float) * self._sin0 / self.l0
        if np.any(sinb <= 0.0) or np.any(sinb > 1.0):
            raise DomainError(
                f"pantograph fully extended: l*sin(beta0)/l0 = {np.max(sinb):.6g} "
                "outside (0, 1]"
            )
        r = self.r0 * np.sqrt(1.0 - sinb**2) / self._cos0
        return float(r) if np.ndim(l) == 0 else r

    def radius_masked(self, l):
        """radius_of with NaN (not an error) off the kinematic branch."""
        sinb = np.asarray(l, dtype=float) * self._sin0 / self.l0
        with np.errstate(invalid="ignore"):
            sinb = np.where((sinb <= 0.0) | (sinb > 1.0), np.nan, sinb)
            r = self.r0 * np.sqrt(1.0 - sinb**2) / self._cos0
        return float(r) if np.ndim(l) == 0 else r

    def dradius_dl(self, l):
        sinb = np.asarray(l, dtype=float) * self._sin0 / self.l0
        with np.errstate(invalid="ignore"):
            sinb = np.where((sinb <= 0.0) | (sinb > 1.0), np.nan, sinb)
            cosb = np.sqrt(1.0 - sinb**2)
            dr = -(self.r0 / (self.l0 * self._cos0)) * self._sin0 * sinb / cosb
        return float(dr) if np.ndim(l) == 0 else dr

    def l_of(self, theta):
        """Embroidery-side length for a bending angle on the branch through l0.

        Raises :class:`DomainError` when the angle maps off the kinematic
        branch (l must satisfy 0 < l*sin(beta0)/l0 <= 1).
        """
        th = np.asarray(theta, dtype=float)
        g = th * self.gamma
        num = self.l0 * (1.0 - g * np.sqrt(self._cos0**2 + g**2 * self._sin0**2))
        l = num / (1.0 + g**2 * self._sin0**2)
        if np.any(l <= 0.0) or np.any(l * self._sin0 / self.l0 > 1.0):
            raise DomainError(
                f"bending angle {theta} maps outside the invertible branch "
                f"(l = {l}, valid 0 < l <= {self.l0 / self._sin0:.6g})"
            )
        return float(l) if np.ndim(theta) == 0 else l

    def _l_of_extended(self, theta: float) -> float:
        """l_of continued monotonically off the branch, for bracketing only."""
        try:
            return self.l_of(theta)
        except DomainError:
            return -math.inf if theta > 0.0 else math.inf

    def theta_of(self, l):
        """Bending angle for a length, by bisecting :meth:`l_of` (monotone branch)."""
        if np.ndim(l) != 0:
            return np.array([self.theta_of(float(x)) for x in np.asarray(l).ravel()]).reshape(
                np.shape(l)
            )
        l = float(l)
        if not (0.0 < l * self._sin0 / self.l0 <= 1.0):
            raise DomainError(f"length {l} outside the invertible pantograph branch")
        if l == self.l0:
            return 0.0
        # l_of is strictly decreasing in theta through theta = 0
        lo_th, hi_th = (0.0, 1.0) if l < self.l0 else (-1.0, 0.0)
        for _ in range(200):
            if l < self.l0 and self._l_of_extended(hi_th) < l:
                break
            if l > self.l0 and self._l_of_extended(lo_th) > l:
                break
            lo_th, hi_th = (lo_th, hi_th * 2.0) if l < self.l0 else (lo_th * 2.0, hi_th)
        else:
            raise DomainError(f"could not bracket bending angle for l={l}")
        while hi_th - lo_th > THETA_INVERT_TOL:
            mid = 0.5 * (lo_th + hi_th)
            if self._l_of_extended(mid) > l:
                lo_th = mid
            else:
                hi_th = mid
        return 0.5 * (lo_th + hi_th)

    def l_bounds(self) -> Tuple[float, float]:
        return self._lo, self._hi

    def scan_directions(self) -> Tuple[int, ...]:
        # contraction or extension depending on beta0: scan both ways
        return (+1, -1)


def constraint_for(model: ActuatorModel):
    if model.design.pattern is Pattern.ZIGZAG:
        return ZigzagConstraint(model)
    return CrossConstraint(model)


# convenience wrappers around the pattern closures --------------------------

def zigzag_theta_from_l(l, model: ActuatorModel):
    """Zigzag bending angle theta = (l0 - l) / (2 r0) (before orientation sign)."""
    if model.design.pattern is not Pattern.ZIGZAG:
        raise DomainError("zigzag_theta_from_l requires a zigzag model")
    return ZigzagConstraint(model).theta_of(l)


def cross_l_from_theta(theta, model: ActuatorModel):
    """Cross embroidery-side length for a bending angle (closed form)."""
    if model.design.pattern is not Pattern.CROSS:
        raise DomainError("cross_l_from_theta requires a cross model")
    return CrossConstraint(model).l_of(theta)


def cross_radius_from_l(l, model: ActuatorModel):
    """Cross outer radius r = r0 cos(beta)/cos(beta0), beta = arcsin(l sin(beta0)/l0)."""
    if model.design.pattern is not Pattern.CROSS:
        raise DomainError("cross_radius_from_l requires a cross model")
    return CrossConstraint(model).radius_of(l)


# ---------------------------------------------------------------------------
# strain energy and derivatives
# ---------------------------------------------------------------------------

def _third_term_stable(a, b, r_sq, d_sq, sr, sd):
    """2A/B^2 * ((A^2-B^2 r^2)^-1/2 - (A^2-B^2 d^2)^-1/2), resummed so the
    B^2 cancellation never happens numerically."""
    return 2.0 * a * (r_sq - d_sq) / (sr * sd * (sr + sd))


def _third_term_series(a, b, r_sq, d_sq):
    """Series of the same term about B = 0, through fourth order."""
    a2 = a * a
    b2 = b * b
    return (
        (r_sq - d_sq) / a2
        + 0.75 * b2 * (r_sq**2 - d_sq**2) / a2**2
        + 0.625 * b2 * b2 * (r_sq**3 - d_sq**3) / a2**3
    )


def _energy_pieces(l, model: ActuatorModel, constraint) -> dict:
    """All intermediate quantities of the energy at ``l`` (array-friendly).

    Invalid points (violated domain guards) carry NaN rather than raising,
    so the equilibrium scan can evaluate whole grids at once.
    """
    l0 = model.tube.l0
    l_a = np.asarray(l, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.asarray(constraint.radius_masked(l_a), dtype=float)
        drdl = np.asarray(constraint.dradius_dl(l_a), dtype=float)
        a = axial_stretch_mean(l_a, l0)
        d_sq = r**2 - model.tube.wall_area_constant / a
        b = (l_a - l0) / (2.0 * r * l0)
        sr_sq = l_a / l0                    # identity: A^2 - B^2 r^2 = l/l0
        sd_sq = a**2 - b**2 * d_sq
        bad = (d_sq <= 0.0) | (sr_sq <= 0.0) | (sd_sq <= 0.0) | ~np.isfinite(r)
        d_sq = np.where(bad, np.nan, d_sq)
        sr = np.sqrt(np.where(bad, np.nan, sr_sq))
        sd = np.sqrt(np.where(bad, np.nan, sd_sq))
    return dict(l=l_a, r=r, drdl=drdl, a=a, b=b, d_sq=d_sq, sr=sr, sd=sd, bad=bad)


def _energy_value(p: dict, model: ActuatorModel):
    l0 = model.tube.l0
    r, a, b, d_sq, sr, sd = p["r"], p["a"], p["b"], p["d_sq"], p["sr"], p["sd"]
    r0 = model.r0
    t1 = (a**2 + r**2 / r0**2 - 3.0) * (r**2 - d_sq)
    t2 = 0.25 * b**2 * (r**4 - d_sq**2)
    with np.errstate(invalid="ignore"):
        stable = _third_term_stable(a, b, r**2, d_sq, sr, sd)
        series = _third_term_series(a, b, r**2, d_sq)
        third = np.where(np.abs(b) < EPS_B_FACTOR / l0, series, stable)
    t3 = (r0**2 / r**2) * third
    return 0.5 * np.pi * model.g * l0 * (t1 + t2 + t3)


def _energy_gradient_value(p: dict, model: ActuatorModel):
    """Analytic dE/dl through the pattern closure (chain rule in r(l), d(l))."""
    l0 = model.tube.l0
    c = model.tube.wall_area_constant
    r0 = model.r0
    r, drdl, a, b, d_sq, sr, sd = (
        p["r"], p["drdl"], p["a"], p["b"], p["d_sq"], p["sr"], p["sd"],
    )
    ap = 1.0 / (2.0 * l0)
    d_sq_p = 2.0 * r * drdl + c * ap / a**2
    bp = 1.0 / (2.0 * r * l0) - b * drdl / r
    with np.errstate(invalid="ignore", divide="ignore"):
        srp = (1.0 / l0) / (2.0 * sr)
        sdp = (a * ap - b * bp * d_sq - 0.5 * b**2 * d_sq_p) / sd
        t1p = (2.0 * a * ap + 2.0 * r * drdl / r0**2) * (r**2 - d_sq) + (
            a**2 + r**2 / r0**2 - 3.0
        ) * (2.0 * r * drdl - d_sq_p)
        t2p = 0.5 * b * bp * (r**4 - d_sq**2) + 0.25 * b**2 * (
            4.0 * r**3 * drdl - 2.0 * d_sq * d_sq_p
        )
        num = 2.0 * a * (r**2 - d_sq)
        nump = 2.0 * ap * (r**2 - d_sq) + 2.0 * a * (2.0 * r * drdl - d_sq_p)
        den = sr * sd * (sr + sd)
        denp = srp * sd * (sr + sd) + sr * sdp * (sr + sd) + sr * sd * (srp + sdp)
        s = num / den
        sp = (nump * den - num * denp) / den**2
        t3p = (r0**2 / r**2) * (sp - 2.0 * drdl * s / r)
    return 0.5 * np.pi * model.g * l0 * (t1p + t2p + t3p)


def _volume_value(p: dict, model: ActuatorModel):
    # V = ((l+l0)/2) pi d^2 = pi l0 (A r^2 - C)
    l0 = model.tube.l0
    return np.pi * l0 * (p["a"] * p["r"] ** 2 - model.tube.wall_area_constant)


def _volume_gradient_value(p: dict, model: ActuatorModel):
    l0 = model.tube.l0
    return np.pi * l0 * (p["r"] ** 2 / (2.0 * l0) + 2.0 * p["a"] * p["r"] * p["drdl"])


def _raise_if_bad(p: dict, l, model: ActuatorModel):
    if np.any(p["bad"]):
        l0 = model.tube.l0
        raise DomainError(
            f"state outside the energy domain at l={l}: requires d^2 > 0, "
            f"A^2 - B^2 r^2 > 0 and A^2 - B^2 d^2 > 0 (l0={l0})"
        )


def strain_energy(l, model: ActuatorModel, constraint=None):
    """Neo-Hookean strain energy of the constrained wall at length ``l`` [J].

    Zero at the reference state l = l0 and positive elsewhere.  Raises
    :class:`DomainError` when a domain guard is violated.
    """
    constraint = constraint or constraint_for(model)
    p = _energy_pieces(l, model, constraint)
    _raise_if_bad(p, l, model)
    e = _energy_value(p, model)
    return float(e) if np.ndim(l) == 0 else e


def fd_step(model: ActuatorModel) -> float:
    return max(FD_STEP_FACTOR * model.tube.l0, 1e-10)


def strain_energy_gradient(l, model: ActuatorModel, constraint=None, method: str = "analytic"):
    """dE/dl including the chain-rule contributions of r(l) and d(r, l) [J/m].

    ``method="analytic"`` uses the closed-form derivative (the default;
    cross-validated against finite differences in the test suite),
    ``method="fd"`` a central difference with step max(1e-7*l0, 1e-10) m.
    """
    constraint = constraint or constraint_for(model)
    if method == "fd":
        h = fd_step(model)
        return (
            strain_energy(np.asarray(l) + h, model, constraint)
            - strain_energy(np.asarray(l) - h, model, constraint)
        ) / (2.0 * h)
    p = _energy_pieces(l, model, constraint)
    _raise_if_bad(p, l, model)
    g = _energy_gradient_value(p, model)
    return float(g) if np.ndim(l) == 0 else g


def internal_volume_gradient(l, model: ActuatorModel, constraint=None, method: str = "analytic"):
    """dV/dl through the pattern closure [m^2]."""
    constraint = constraint or constraint_for(model)
    p = _energy_pieces(l, model, constraint)
    _raise_if_bad(p, l, model)
    if method == "fd":
        h = fd_step(model)
        pp = _energy_pieces(np.asarray(l) + h, model, constraint)
        pm = _energy_pieces(np.asarray(l) - h, model, constraint)
        g = (_volume_value(pp, model) - _volume_value(pm, model)) / (2.0 * h)
    else:
        g = _volume_gradient_value(p, model)
    return float(g) if np.ndim(l) == 0 else g


def generalized_force(l, pressure, model: ActuatorModel, constraint=None,
                      method: str = "analytic"):
    """Pneumatic generalised force F = (P - p0) * dV/dl [N].

    The gauge is taken above the transition pressure: at P = p0 the pressure
    energy is fully consumed holding the tube against the sleeve and no
    force drives deformation.
    """
    dv = internal_volume_gradient(l, model, constraint, method)
    return (pressure - model.p0) * dv


# ---------------------------------------------------------------------------
# equilibrium
# ---------------------------------------------------------------------------

def _rest_state(model: ActuatorModel, pressure: float, constraint) -> DeformationState:
    l0 = model.tube.l0
    r = float(constraint.radius_of(l0))
    d = inner_radius(r, l0, model.tube)
    return DeformationState(l=l0, r=r, d=d, theta_model=0.0, pressure=pressure)


def equilibrium_length(
    pressure: float,
    model: ActuatorModel,
    method: str = "analytic",
    scan_step: Optional[float] = None,
    domain: Optional[Tuple[float, float]] = None,
) -> DeformationState:
    """Solve the static balance dE/dl = (P - p0) dV/dl for ``l``.

    For P <= p0 the undeformed state (l = l0, theta = 0) is returned
    exactly.  Otherwise the residual is scanned outward from l0 in steps of
    ``scan_step`` (default 1e-4 * l0) until it changes sign, preferring the
    nearest sign change so the returned root lies on the branch continuous
    from the rest state; the bracket is then bisected to 1e-12 m.  Zigzag
    scans the extension side first (extension expected); cross scans both
    sides and keeps the nearer root.

    ``domain`` optionally restricts the search interval (m).  Raises
    :class:`NoEquilibriumError` when no sign change exists inside the valid
    domain, reporting the domain edges and residual signs there.
    """
    constraint = constraint_for(model)
    if pressure <= model.p0:
        return _rest_state(model, pressure, constraint)

    l0 = model.tube.l0
    step = (scan_step if scan_step is not None else SCAN_STEP_FACTOR * l0)
    lo, hi = constraint.l_bounds()
    if domain is not None:
        lo, hi = max(lo, domain[0]), min(hi, domain[1])

    def residual(l):
        p = _energy_pieces(l, model, constraint)
        de = _energy_gradient_value(p, model)
        if method == "fd":
            h = fd_step(model)
            pp = _energy_pieces(np.asarray(l) + h, model, constraint)
            pm = _energy_pieces(np.asarray(l) - h, model, constraint)
            de = (_energy_value(pp, model) - _energy_value(pm, model)) / (2.0 * h)
            dv = (_volume_value(pp, model) - _volume_value(pm, model)) / (2.0 * h)
        else:
            dv = _volume_gradient_value(p, model)
        return de - (pressure - model.p0) * dv

    g0 = float(residual(l0))
    if g0 == 0.0:
        return _rest_state(model, pressure, constraint)

    brackets = []  # (distance from l0, l_lo, l_hi)
    edge_report = []
    for direction in constraint.scan_directions():
        edge = hi if direction > 0 else lo
        n_total = int(abs(edge - l0) / step)
        prev_l, prev_g = l0, g0
        found = False
        for start in range(1, n_total + 1, _SCAN_CHUNK):
            idx = np.arange(start, min(start + _SCAN_CHUNK, n_total + 1))
            ls = l0 + direction * step * idx
            gs = np.asarray(residual(ls))
            valid = np.isfinite(gs)
            stop_at = np.argmin(valid) if not valid.all() else len(idx)
            for k in range(stop_at):
                if gs[k] == 0.0:
                    brackets.append((abs(ls[k] - l0), ls[k], ls[k]))
                    found = True
                    break
                if np.sign(gs[k]) != np.sign(prev_g):
                    a, b = sorted((prev_l, ls[k]))
                    brackets.append((abs(0.5 * (a + b) - l0), a, b))
                    found = True
                    break
                prev_l, prev_g = ls[k], gs[k]
            if found or stop_at < len(idx):
                if not found:
                    edge_report.append(
                        f"direction {direction:+d}: domain edge at l={prev_l:.6g} m, "
                        f"residual sign {int(np.sign(prev_g))}"
                    )
                break
        else:
            edge_report.append(
                f"direction {direction:+d}: domain edge at l={edge:.6g} m, "
                f"residual sign {int(np.sign(prev_g))}"
            )
        if found and model.design.pattern is Pattern.ZIGZAG:
            break  # extension branch found; no need to scan downward

    if not brackets:
        raise NoEquilibriumError(
            f"no equilibrium at P={pressure:.6g} Pa (p0={model.p0:.6g} Pa): "
            + "; ".join(edge_report)
        )

    _, a, b = min(brackets, key=lambda t: t[0])
    if a != b:
        ga = float(residual(a))
        while b - a > BISECT_TOL:
            mid = 0.5 * (a + b)
            gm = float(residual(mid))
            if gm == 0.0:
                a = b = mid
                break
            if np.sign(gm) == np.sign(ga):
                a, ga = mid, gm
            else:
                b = mid
    l_star = 0.5 * (a + b)
    r = float(constraint.radius_of(l_star))
    d = inner_radius(r, l_star, model.tube)
    theta = float(constraint.theta_of(l_star))
    return DeformationState(l=l_star, r=r, d=d, theta_model=theta, pressure=pressure)


def pressure_to_angle(pressure: float, model: ActuatorModel, method: str = "analytic") -> float:
    """Reported bending angle [rad] at a pressure: orientation_sign * theta_model.

    Zero for all pressures at or below the transition pressure.
    """
    state = equilibrium_length(pressure, model, method=method)
    # + 0.0 normalises the signed zero below the transition pressure
    return resolve_orientation_sign(model.design) * state.theta_model + 0.0


def model_metadata(model: ActuatorModel) -> Dict[str, object]:
    """Flat description of a model, used as provenance in curve outputs."""
    md: Dict[str, object] = {
        "pattern": model.design.pattern.value,
        "w_mm": model.design.w * 1e3,
        "l0_mm": model.tube.l0 * 1e3,
        "rf_mm": model.tube.r_f * 1e3,
        "df_mm": model.tube.d_f * 1e3,
        "ge_mpa": model.tube.g_e / 1e6,
        "g_mpa": model.g / 1e6,
        "r0_mm": model.r0 * 1e3,
        "p0_kpa": model.p0 / 1e3,
        "orientation_sign": resolve_orientation_sign(model.design),
        "beta0_mode": model.beta0_mode.value if model.beta0_mode else None,
    }
    if model.design.pattern is Pattern.CROSS:
        md["alpha0_deg"] = math.degrees(model.design.alpha0)
        md["beta0_deg"] = math.degrees(model.beta0)
    return md


def sweep_curve(
    model: ActuatorModel,
    p_max: float,
    step: float,
    method: str = "analytic",
    metadata: Optional[Dict[str, object]] = None,
) -> PressureAngleCurve:
    """Sample the reported angle at P = 0, step, 2*step, ... up to ``p_max``.

    Per-sample solver failures are recorded in the sample's ``status`` and
    do not abort the sweep.  The curve carries the full model metadata plus
    any caller-supplied entries.
    """
    if step <= 0.0:
        raise DomainError(f"pressure step must be positive, got {step}")
    sign = resolve_orientation_sign(model.design)
    n = int(math.floor(p_max / step + 1e-9))
    samples: List[CurveSample] = []
    for i in range(n + 1):
        p = i * step
        try:
            st = equilibrium_length(p, model, method=method)
            samples.append(
                CurveSample(pressure=p, theta=sign * st.theta_model + 0.0, l=st.l,
                            r=st.r, status="ok")
            )
        except (DomainError, NoEquilibriumError) as exc:
            samples.append(
                CurveSample(pressure=p, theta=float("nan"), l=float("nan"),
                            r=float("nan"), status=type(exc).__name__)
            )
    md = model_metadata(model)
    if metadata:
        md.update(metadata)
    return PressureAngleCurve(samples=tuple(samples), metadata=md)
