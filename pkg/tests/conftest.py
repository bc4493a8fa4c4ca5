import math

import pytest

from embroidery_actuator import (
    EmbroideryDesign,
    Pattern,
    TubeMaterial,
    make_actuator_model,
)

L0 = 0.1  # m


@pytest.fixture
def default_tube():
    """Placeholder tube geometry (fitted defaults, not measured values)."""
    return TubeMaterial(l0=L0, r_f=1.0e-3, d_f=0.5e-3, g_e=0.6e6)


@pytest.fixture
def zigzag_model(default_tube):
    design = EmbroideryDesign(pattern=Pattern.ZIGZAG, w=7.0e-3)
    return make_actuator_model(default_tube, design, g=2.7e6, p0=85e3)


@pytest.fixture
def cross_model(default_tube):
    design = EmbroideryDesign(
        pattern=Pattern.CROSS, w=7.0e-3, alpha0=math.radians(45.0)
    )
    return make_actuator_model(default_tube, design, g=1.3e6, p0=170e3)
