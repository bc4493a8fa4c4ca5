"""Conversions between boundary units (kPa, MPa, mm) and SI (Pa, m).

All internal computation is SI; display units appear only at CLI and file
boundaries.  Angles use ``math.radians`` / ``math.degrees`` directly.
"""

MM = 1e-3     # m per mm
KPA = 1e3     # Pa per kPa
MPA = 1e6     # Pa per MPa


def mm_to_m(x):
    return x * MM


def m_to_mm(x):
    return x / MM


def kpa_to_pa(x):
    return x * KPA


def pa_to_kpa(x):
    return x / KPA


def mpa_to_pa(x):
    return x * MPA


def pa_to_mpa(x):
    return x / MPA
