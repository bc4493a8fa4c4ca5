"""Motion-capture post-processing: bending metric, plateaus, branch labels.

Experiments track 14 reflective markers glued in two rows of seven along the
actuator, with a synchronised pressure reading per capture frame.  This
module turns raw marker trajectories into quasi-static (pressure, angle)
pairs:

1. the bending angle of a frame is the sum of the five signed angles
   between consecutive chords of a seven-marker row;
2. quasi-static plateaus are detected as maximal windows of steady pressure
   and averaged over their settled tail;
3. the plateau sequence is split into pressurisation (up) and release
   (down) branches, one pair of branches per pressure cycle.

Marker CSV columns: ``t, px1, py1, pz1, ..., px14, py14, pz14,
pressure_kpa`` with coordinates in millimetres; missing markers are encoded
as empty fields and kept as NaN, never as zeros.  Markers 1-7 form the left
row (base to tip), markers 8-14 the right row.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .calibration import BRANCH_DOWN, BRANCH_UP
from .core import DomainError
from .units import kpa_to_pa, mm_to_m, pa_to_kpa

N_MARKERS = 14
ROW_SLICES = {"left": slice(0, 7), "right": slice(7, 14)}
DWELL_MIN_DEFAULT = 3.0        # s
PRESSURE_TOL_DEFAULT = 2e3     # Pa


class MocapError(ValueError):
    """Malformed marker data (missing marker, degenerate chord, bad file)."""


@dataclass(frozen=True)
class MarkerFrame:
    """One capture frame: timestamp, 14 marker positions, pressure reading.

    ``markers`` is a (14, 3) array in metres; a missing marker is a NaN row.
    """

    t: float
    markers: np.ndarray
    pressure: float

    def __post_init__(self):
        m = np.asarray(self.markers, dtype=float)
        if m.shape != (N_MARKERS, 3):
            raise MocapError(f"expected ({N_MARKERS}, 3) marker array, got {m.shape}")
        object.__setattr__(self, "markers", m)

    def present(self) -> np.ndarray:
        """Boolean mask of markers with complete coordinates."""
        return ~np.isnan(self.markers).any(axis=1)


@dataclass(frozen=True)
class Plateau:
    t_start: float
    t_end: float
    p_mean: float       # Pa
    theta_mean: float   # rad; NaN when no usable marker frames in the window


@dataclass(frozen=True)
class ExperimentDataset:
    frames: Tuple[MarkerFrame, ...]
    plateaus: Tuple[Plateau, ...]
    pairs: Tuple[Tuple[float, float, str], ...]  # (P [Pa], theta [rad], branch)


def _fit_plane_normal(points: np.ndarray) -> np.ndarray:
    """Unit normal of the least-squares plane through the points.

    The sign is made deterministic by flipping so the first component of
    magnitude above 1e-12 is positive; callers that need a physical sign
    convention pass a reference normal instead.
    """
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    n = vt[-1]
    for comp in n:
        if abs(comp) > 1e-12:
            if comp < 0:
                n = -n
            break
    return n


def _row_bending_angle(points: np.ndarray, reference_normal: Optional[np.ndarray]) -> float:
    chords = np.diff(points, axis=0)
    lengths = np.linalg.norm(chords, axis=1)
    if np.any(lengths <= 0.0) or np.any(~np.isfinite(lengths)):
        bad = int(np.argmin(np.where(np.isfinite(lengths), lengths, -1.0)))
        raise MocapError(f"degenerate (zero-length) chord between markers {bad + 1} and {bad + 2}")
    normal = _fit_plane_normal(points)
    if reference_normal is not None:
        ref = np.asarray(reference_normal, dtype=float)
        if float(np.dot(normal, ref)) < 0.0:
            normal = -normal
    total = 0.0
    for i in range(len(chords) - 1):
        v1, v2 = chords[i], chords[i + 1]
        total += math.atan2(float(np.dot(np.cross(v1, v2), normal)), float(np.dot(v1, v2)))
    return total


def marker_bending_angle(
    frame: MarkerFrame,
    row: str = "mean",
    reference_normal: Optional[np.ndarray] = None,
) -> float:
    """Bending angle [rad] of a frame: summed chord-to-chord turning angles.

    ``row`` selects the marker row: "left", "right", or "mean" (average of
    both).  Angles are signed about the row's best-fit plane normal; the
    normal's orientation is taken from ``reference_normal`` when given
    (e.g. the first frame of a sequence), otherwise from a fixed
    lexicographic convention.  Raises :class:`MocapError` for missing
    markers (naming the 1-based index) or degenerate chords.
    """
    if row not in ("left", "right", "mean"):
        raise MocapError(f"row must be 'left', 'right' or 'mean', got {row!r}")
    rows = ("left", "right") if row == "mean" else (row,)
    present = frame.present()
    angles = []
    for name in rows:
        sl = ROW_SLICES[name]
        missing = np.nonzero(~present[sl])[0]
        if missing.size:
            raise MocapError(
                f"missing marker {sl.start + int(missing[0]) + 1} in {name} row"
            )
        angles.append(_row_bending_angle(frame.markers[sl], reference_normal))
    return float(np.mean(angles))


def reference_normal_of(frames: Sequence[MarkerFrame], row: str = "mean") -> Optional[np.ndarray]:
    """Bending-plane normal of the first frame with complete markers.

    Used as the fixed sign reference for a whole capture sequence, so the
    angle sign cannot flip between frames when the actuator passes through
    the straight configuration.
    """
    rows = ("left", "right") if row == "mean" else (row,)
    for frame in frames:
        present = frame.present()
        if all(present[ROW_SLICES[name]].all() for name in rows):
            return _fit_plane_normal(frame.markers[ROW_SLICES[rows[0]]])
    return None


def detect_plateaus(
    frames: Sequence[MarkerFrame],
    dwell_min: float = DWELL_MIN_DEFAULT,
    pressure_tol: float = PRESSURE_TOL_DEFAULT,
    row: str = "mean",
) -> List[Plateau]:
    """Maximal steady-pressure windows held at least ``dwell_min`` seconds.

    A window qualifies while every pressure stays within ``pressure_tol``
    of the (final) window mean.  The reported angle is averaged over the
    last third of the window, after viscoelastic settling; the pressure is
    averaged over the whole window.  The empty result is allowed.
    """
    if dwell_min <= 0.0:
        raise DomainError(f"dwell_min must be positive, got {dwell_min}")
    n = len(frames)
    if n == 0:
        return []
    t = np.array([f.t for f in frames])
    p = np.array([f.pressure for f in frames])
    ref = reference_normal_of(frames, row)

    def frame_angle(i: int) -> float:
        try:
            return marker_bending_angle(frames[i], row, ref)
        except MocapError:
            return float("nan")

    plateaus: List[Plateau] = []
    i = 0
    while i < n:
        # grow the window while the steadiness test keeps passing
        s = p[i]
        pmin = pmax = p[i]
        j = i
        while j + 1 < n:
            s2 = s + p[j + 1]
            pmin2 = min(pmin, p[j + 1])
            pmax2 = max(pmax, p[j + 1])
            mean2 = s2 / (j + 2 - i)
            if pmax2 - mean2 > pressure_tol or mean2 - pmin2 > pressure_tol:
                break
            s, pmin, pmax = s2, pmin2, pmax2
            j += 1
        if t[j] - t[i] >= dwell_min - 1e-12:
            settle_from = t[i] + (2.0 / 3.0) * (t[j] - t[i])
            tail = [k for k in range(i, j + 1) if t[k] >= settle_from - 1e-12]
            angs = np.array([frame_angle(k) for k in tail])
            theta = float(np.nanmean(angs)) if np.any(np.isfinite(angs)) else float("nan")
            plateaus.append(
                Plateau(t_start=float(t[i]), t_end=float(t[j]),
                        p_mean=float(s / (j + 1 - i)), theta_mean=theta)
            )
            i = j + 1
        else:
            i += 1  # too short: retry from the next frame so a late start is not lost
    return plateaus


def split_branches(
    pairs: Sequence[Tuple[float, float]],
) -> List[Tuple[float, float, str]]:
    """Label time-ordered (pressure, angle) pairs as up/down branches.

    Pressures rising from the start are "up"; after the cycle peak they are
    "down", with peak ties assigned up.  A sawtooth log with several cycles
    is split at each trough, each cycle labelled independently.
    """
    pairs = list(pairs)
    if not pairs:
        return []
    p = [pr for pr, _ in pairs]
    # cycle boundaries: a rise after a fall starts a new cycle
    starts = [0]
    falling = False
    for i in range(1, len(p)):
        if p[i] < p[i - 1]:
            falling = True
        elif p[i] > p[i - 1] and falling:
            starts.append(i)
            falling = False
    starts.append(len(p))
    labeled: List[Tuple[float, float, str]] = []
    for a, b in zip(starts[:-1], starts[1:]):
        chunk = p[a:b]
        peak = max(chunk)
        last_peak = a + max(i for i, v in enumerate(chunk) if v == peak)
        for i in range(a, b):
            branch = BRANCH_UP if i <= last_peak else BRANCH_DOWN
            labeled.append((pairs[i][0], pairs[i][1], branch))
    return labeled


def process_frames(
    frames: Sequence[MarkerFrame],
    dwell_min: float = DWELL_MIN_DEFAULT,
    pressure_tol: float = PRESSURE_TOL_DEFAULT,
    row: str = "mean",
) -> ExperimentDataset:
    """Full pipeline: frames -> plateaus -> branch-labelled pairs."""
    plateaus = detect_plateaus(frames, dwell_min, pressure_tol, row)
    labeled = split_branches([(pl.p_mean, pl.theta_mean) for pl in plateaus])
    return ExperimentDataset(
        frames=tuple(frames), plateaus=tuple(plateaus), pairs=tuple(labeled)
    )


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------

_EXPECTED_HEADER = (
    ["t"]
    + [f"p{a}{i}" for i in range(1, N_MARKERS + 1) for a in ("x", "y", "z")]
    + ["pressure_kpa"]
)


def load_marker_csv(path) -> List[MarkerFrame]:
    """Read a marker trajectory CSV (mm, kPa) into frames (m, Pa).

    Raises :class:`MocapError` naming the row/column of the first schema
    violation; timestamps must be strictly increasing.
    """
    frames: List[MarkerFrame] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != _EXPECTED_HEADER:
            raise MocapError(
                f"bad marker CSV header in {path}: expected "
                f"{','.join(_EXPECTED_HEADER[:4])},...,{_EXPECTED_HEADER[-1]}"
            )
        prev_t = None
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(_EXPECTED_HEADER):
                raise MocapError(
                    f"{path}: row {row_no}: expected {len(_EXPECTED_HEADER)} "
                    f"columns, got {len(row)}"
                )
            try:
                t = float(row[0])
            except ValueError:
                raise MocapError(f"{path}: row {row_no}, column t: not a number: {row[0]!r}")
            coords = np.full((N_MARKERS, 3), np.nan)
            for m in range(N_MARKERS):
                vals = row[1 + 3 * m: 4 + 3 * m]
                if all(v.strip() == "" for v in vals):
                    continue  # missing marker stays NaN
                try:
                    coords[m] = [float(v) for v in vals]
                except ValueError:
                    raise MocapError(
                        f"{path}: row {row_no}, marker {m + 1}: bad coordinates {vals}"
                    )
            try:
                pressure = float(row[-1])
            except ValueError:
                raise MocapError(
                    f"{path}: row {row_no}, column pressure_kpa: not a number: {row[-1]!r}"
                )
            if prev_t is not None and t <= prev_t:
                raise MocapError(
                    f"{path}: row {row_no}: timestamps must be strictly increasing "
                    f"({t} after {prev_t})"
                )
            prev_t = t
            frames.append(
                MarkerFrame(t=t, markers=mm_to_m(coords), pressure=kpa_to_pa(pressure))
            )
    return frames


def write_pairs_csv(path, pairs: Iterable[Tuple[float, float, str]]) -> None:
    """Write branch-labelled pairs as ``pressure_kpa,theta_deg,branch``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pressure_kpa", "theta_deg", "branch"])
        for p, th, branch in pairs:
            writer.writerow([f"{pa_to_kpa(p):.9g}", f"{math.degrees(th):.9g}", branch])


def load_pairs_csv(path) -> List[Tuple[float, float, str]]:
    """Read ``pressure_kpa,theta_deg,branch`` rows into SI triples."""
    out: List[Tuple[float, float, str]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["pressure_kpa", "theta_deg", "branch"]:
            raise MocapError(
                f"bad pairs CSV header in {path}: expected pressure_kpa,theta_deg,branch"
            )
        for row_no, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise MocapError(f"{path}: row {row_no}: expected 3 columns, got {len(row)}")
            try:
                p = kpa_to_pa(float(row[0]))
                th = math.radians(float(row[1]))
            except ValueError:
                raise MocapError(f"{path}: row {row_no}: bad number in {row[:2]}")
            branch = row[2].strip().lower()
            if branch not in (BRANCH_UP, BRANCH_DOWN):
                raise MocapError(
                    f"{path}: row {row_no}, column branch: expected 'up' or 'down', "
                    f"got {row[2]!r}"
                )
            out.append((p, th, branch))
    return out
