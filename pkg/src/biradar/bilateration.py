"""2D localization from one range per radar.

With radar 1 at the origin and radar 2 at (d, 0), a target seen at
ranges R1 and R2 lies at

    x = (R1^2 - R2^2 + d^2) / (2 d)
    y = sqrt(R1^2 - x^2)

taking the positive root: the field of view is the upper half-plane.
Cross-pairings whose range difference exceeds the baseline cannot
intersect, so pairing is gated on |R1 - R2| <= d + slack; that gate is
what suppresses geometric ghosts before tracking even starts.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import hypot, sqrt

from .cfar import Detection
from .config import GeometryConfig


@dataclass(frozen=True)
class CandidatePoint:
    """One bilateration intersection from a (radar 1, radar 2) detection pair."""

    x_m: float
    y_m: float
    r1_m: float
    r2_m: float
    intensity: float = 0.0


def bilaterate(
    r1_m: float, r2_m: float, d_m: float, intensity: float = 0.0
) -> CandidatePoint | None:
    """Intersect the two range circles; None when they do not intersect.

    Radicands within -1e-12*R1^2 of zero (grazing geometry) are clamped
    to y = 0 instead of rejected.
    """
    if r1_m <= 0 or r2_m <= 0 or d_m <= 0:
        raise ValueError("ranges and baseline must be positive")
    x = (r1_m**2 - r2_m**2 + d_m**2) / (2.0 * d_m)
    radicand = r1_m**2 - x**2
    if radicand < -1e-12 * r1_m**2:
        return None
    y = sqrt(max(0.0, radicand))
    point = CandidatePoint(x_m=x, y_m=y, r1_m=r1_m, r2_m=r2_m, intensity=intensity)
    _check_consistency(point, d_m)
    return point


def _check_consistency(point: CandidatePoint, d_m: float) -> None:
    # every returned point must sit on both range circles
    tol = 1e-6 * max(point.r1_m, point.r2_m)
    err1 = abs(hypot(point.x_m, point.y_m) - point.r1_m)
    err2 = abs(hypot(point.x_m - d_m, point.y_m) - point.r2_m)
    if err1 > tol or err2 > tol:
        raise AssertionError(
            f"bilateration self-consistency violated: errors ({err1:.3e}, {err2:.3e})"
        )


def pair_detections(
    dets1: list[Detection],
    dets2: list[Detection],
    geometry: GeometryConfig,
    slack_m: float,
    counters: dict | None = None,
) -> list[CandidatePoint]:
    """Candidates from every cross-radar pair passing the range gate.

    Pairs are enumerated in (i, j) order; a detection may appear in several
    candidates (the tracker resolves surviving ghosts).  When `counters` is
    given, 'pairs', 'gated_out' and 'infeasible' tallies are accumulated.
    """
    d = geometry.baseline_m
    candidates = []
    for det1 in dets1:
        for det2 in dets2:
            if counters is not None:
                counters["pairs"] = counters.get("pairs", 0) + 1
            if abs(det1.range_m - det2.range_m) > d + slack_m:
                if counters is not None:
                    counters["gated_out"] = counters.get("gated_out", 0) + 1
                continue
            point = bilaterate(
                det1.range_m,
                det2.range_m,
                d,
                intensity=min(det1.intensity, det2.intensity),
            )
            if point is None:
                if counters is not None:
                    counters["infeasible"] = counters.get("infeasible", 0) + 1
                continue
            candidates.append(point)
    return candidates
