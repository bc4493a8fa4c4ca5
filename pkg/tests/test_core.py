import math

import numpy as np
import pytest

from embroidery_actuator import (
    Beta0Mode,
    DomainError,
    EmbroideryDesign,
    Pattern,
    TubeMaterial,
    braiding_angle0,
    inner_radius,
    internal_volume,
    resolve_orientation_sign,
    sleeve_radius,
)
from embroidery_actuator.core import axial_stretch_mean


class TestTypes:
    def test_tube_invariants(self):
        with pytest.raises(DomainError):
            TubeMaterial(l0=0.1, r_f=0.5e-3, d_f=1.0e-3, g_e=1e6)  # d_f > r_f
        with pytest.raises(DomainError):
            TubeMaterial(l0=-0.1, r_f=1e-3, d_f=0.5e-3, g_e=1e6)
        with pytest.raises(DomainError):
            TubeMaterial(l0=0.1, r_f=1e-3, d_f=0.5e-3, g_e=0.0)

    def test_design_invariants(self):
        with pytest.raises(DomainError):
            EmbroideryDesign(pattern=Pattern.ZIGZAG, w=0.0)
        with pytest.raises(DomainError):
            EmbroideryDesign(pattern=Pattern.CROSS, w=7e-3)  # alpha0 missing
        with pytest.raises(DomainError):
            EmbroideryDesign(pattern=Pattern.CROSS, w=7e-3, alpha0=math.pi / 2)
        with pytest.raises(DomainError):
            EmbroideryDesign(pattern=Pattern.ZIGZAG, w=7e-3, orientation_sign=2)

    def test_types_are_immutable(self, default_tube):
        with pytest.raises(Exception):
            default_tube.r_f = 2e-3

    def test_orientation_sign_defaults(self):
        zig = EmbroideryDesign(pattern=Pattern.ZIGZAG, w=5e-3)
        assert resolve_orientation_sign(zig) == -1
        shallow = EmbroideryDesign(pattern=Pattern.CROSS, w=7e-3, alpha0=math.radians(30))
        steep = EmbroideryDesign(pattern=Pattern.CROSS, w=7e-3, alpha0=math.radians(60))
        assert resolve_orientation_sign(shallow) == -1
        assert resolve_orientation_sign(steep) == 1
        explicit = EmbroideryDesign(
            pattern=Pattern.CROSS, w=7e-3, alpha0=math.radians(60), orientation_sign=-1
        )
        assert resolve_orientation_sign(explicit) == -1


class TestSleeveRadius:
    def test_degenerate_triangle(self):
        # w = 0: perimeter is twice the height 2*r_f, so r0 = 2*r_f/pi
        assert sleeve_radius(0.0, 1e-3) == pytest.approx(2e-3 / math.pi, rel=1e-12)

    def test_hand_evaluated_example(self):
        # (2*sqrt(3.5^2 + 2^2) + 7) / (2*pi) mm, evaluated by hand
        expected = (2.0 * math.sqrt(12.25 + 4.0) + 7.0) / (2.0 * math.pi) * 1e-3
        assert expected == pytest.approx(2.397e-3, rel=1e-3)
        assert sleeve_radius(7e-3, 1e-3) == pytest.approx(expected, rel=1e-12)

    def test_monotone_in_w_and_rf(self):
        assert sleeve_radius(9e-3, 1e-3) > sleeve_radius(7e-3, 1e-3)
        ws = np.linspace(0.0, 12e-3, 40)
        r0s = sleeve_radius(ws, 1e-3)
        assert np.all(np.diff(r0s) > 0)
        rfs = np.linspace(0.4e-3, 3e-3, 40)
        assert np.all(np.diff(sleeve_radius(5e-3, rfs)) > 0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            sleeve_radius(-1e-3, 1e-3)
        with pytest.raises(DomainError):
            sleeve_radius(5e-3, 0.0)

    def test_pure(self):
        assert sleeve_radius(7e-3, 1e-3) == sleeve_radius(7e-3, 1e-3)


class TestBraidingAngle:
    def test_verbatim_mm_example(self):
        # denominator 4 + 49/4 + 49/4 = 28.5 (mm-based), arcsin(7/28.5)
        beta0 = braiding_angle0(7e-3, math.pi / 4, 1e-3, Beta0Mode.VERBATIM_MM)
        assert beta0 == pytest.approx(math.asin(7.0 / 28.5), rel=1e-12)
        assert math.degrees(beta0) == pytest.approx(14.22, abs=0.01)

    def test_small_angle_limit(self):
        beta0 = braiding_angle0(7e-3, 1e-9, 1e-3)
        assert abs(beta0) < 1e-6

    def test_sqrt_corrected_rejects_reference_design(self):
        # arcsin argument 7/sqrt(28.5) = 1.311 > 1: why verbatim-mm is default
        with pytest.raises(DomainError) as err:
            braiding_angle0(7e-3, math.pi / 4, 1e-3, Beta0Mode.SQRT_CORRECTED)
        msg = str(err.value)
        assert "sqrt-corrected" in msg
        assert "1.311" in msg

    def test_monotone_in_alpha0_where_defined(self):
        alphas = np.radians(np.linspace(5, 45, 30))
        betas = [braiding_angle0(7e-3, a, 1e-3) for a in alphas]
        assert all(b2 > b1 for b1, b2 in zip(betas, betas[1:]))

    def test_input_validation(self):
        with pytest.raises(DomainError):
            braiding_angle0(7e-3, 0.0, 1e-3)
        with pytest.raises(DomainError):
            braiding_angle0(-7e-3, 0.5, 1e-3)


class TestInnerRadius:
    def test_hand_evaluated_example(self, default_tube):
        # lambda_m = 1 at rest length; d = sqrt(r^2 - 0.75 mm^2)
        r = 2.397e-3
        d = inner_radius(r, default_tube.l0, default_tube)
        assert d == pytest.approx(2.235e-3, rel=5e-4)

    def test_rest_state_recovers_df(self, default_tube):
        d = inner_radius(default_tube.r_f, default_tube.l0, default_tube)
        assert d == pytest.approx(default_tube.d_f, rel=1e-12)

    def test_conservation_identity(self, default_tube):
        # (r^2 - d^2) * lambda_m == r_f^2 - d_f^2 for all valid states
        rng = np.random.default_rng(42)
        c = default_tube.wall_area_constant
        for _ in range(200):
            r = rng.uniform(1.0e-3, 4.0e-3)
            l = rng.uniform(0.8, 1.6) * default_tube.l0
            lam = axial_stretch_mean(l, default_tube.l0)
            if r**2 <= c / lam:
                continue
            d = inner_radius(r, l, default_tube)
            lhs = (r**2 - d**2) * lam
            assert abs(lhs - c) <= 1e-12 * c

    def test_wall_thicker_than_tube(self, default_tube):
        with pytest.raises(DomainError) as err:
            inner_radius(0.5e-3, default_tube.l0, default_tube)
        assert "wall thicker than tube" in str(err.value)


class TestInternalVolume:
    def test_hand_evaluated_example(self):
        # 100 mm * pi * (2.235 mm)^2 = 1569.29 mm^3
        v = internal_volume(0.1, 2.235e-3, 0.1)
        assert v == pytest.approx(1569.29e-9, rel=1e-4)

    def test_zero_inner_radius(self):
        assert internal_volume(0.1, 0.0, 0.1) == 0.0

    def test_monotone_in_d(self):
        ds = np.linspace(0.1e-3, 3e-3, 50)
        vs = internal_volume(0.1, ds, 0.1)
        assert np.all(np.diff(vs) > 0)
