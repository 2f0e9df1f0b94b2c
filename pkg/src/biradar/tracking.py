"""Multi-target tracking over bilateration candidates.

Constant-velocity Kalman filters per track, chi-square gated global
nearest neighbor association (joint-cost optimal, not greedy), and
M-of-N confirmation with consecutive-miss deletion.  The confirmation
logic is the second half of ghost suppression: transient ghost
candidates spawn tentative tracks that die before ever being reported.

State vector is (x, y, vx, vy); measurements are candidate positions
(x, y).  Covariance updates use the Joseph form for numerical symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.optimize import linear_sum_assignment

from .bilateration import CandidatePoint
from .config import TrackerParams

_H = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])


class TrackStatus(Enum):
    TENTATIVE = "tentative"
    CONFIRMED = "confirmed"
    DEAD = "dead"


@dataclass(frozen=True)
class Track:
    track_id: int
    state: np.ndarray  # (x, y, vx, vy)
    covariance: np.ndarray  # 4x4
    status: TrackStatus = TrackStatus.TENTATIVE
    hit_history: tuple[bool, ...] = ()  # last confirm_n association outcomes
    consecutive_misses: int = 0

    @property
    def position(self) -> np.ndarray:
        return self.state[:2]

    @property
    def velocity(self) -> np.ndarray:
        return self.state[2:]


@dataclass(frozen=True)
class TrackSnapshot:
    track_id: int
    status: str
    x_m: float
    y_m: float
    vx_m_s: float
    vy_m_s: float


def transition_matrix(dt_s: float) -> np.ndarray:
    f = np.eye(4)
    f[0, 2] = dt_s
    f[1, 3] = dt_s
    return f


def process_noise(dt_s: float, intensity: float) -> np.ndarray:
    """White-noise-acceleration Q: per axis q*[[dt^4/4, dt^3/2], [dt^3/2, dt^2]]."""
    q = np.zeros((4, 4))
    dt2, dt3, dt4 = dt_s**2, dt_s**3, dt_s**4
    for axis in range(2):
        q[axis, axis] = dt4 / 4.0
        q[axis, axis + 2] = q[axis + 2, axis] = dt3 / 2.0
        q[axis + 2, axis + 2] = dt2
    return intensity * q


def measurement_covariance(params: TrackerParams) -> np.ndarray:
    return np.diag(
        [params.measurement_noise_std_x_m**2, params.measurement_noise_std_y_m**2]
    )


def kf_predict(track: Track, dt_s: float, params: TrackerParams) -> Track:
    """Propagate state and covariance through the constant-velocity model."""
    if dt_s <= 0:
        raise ValueError(f"dt_s must be > 0, got {dt_s}")
    f = transition_matrix(dt_s)
    state = f @ track.state
    cov = f @ track.covariance @ f.T + process_noise(dt_s, params.process_noise_intensity)
    return replace(track, state=state, covariance=_symmetrized(cov))


def innovation_covariance(track: Track, params: TrackerParams) -> np.ndarray:
    return _H @ track.covariance @ _H.T + measurement_covariance(params)


def mahalanobis_sq(track: Track, z: np.ndarray, params: TrackerParams) -> float:
    nu = np.asarray(z, dtype=float) - _H @ track.state
    s = innovation_covariance(track, params)
    return float(nu @ np.linalg.solve(s, nu))


def kf_update(track: Track, z, params: TrackerParams) -> tuple[Track, float]:
    """Joseph-form measurement update; returns the updated track and nu' S^-1 nu."""
    if track.status is TrackStatus.DEAD:
        raise ValueError(f"cannot update dead track {track.track_id}")
    z = np.asarray(z, dtype=float)
    r = measurement_covariance(params)
    nu = z - _H @ track.state
    s = innovation_covariance(track, params)
    try:
        s_inv = np.linalg.inv(s)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            f"singular innovation covariance on track {track.track_id}"
        ) from exc
    gain = track.covariance @ _H.T @ s_inv
    state = track.state + gain @ nu
    i_kh = np.eye(4) - gain @ _H
    cov = i_kh @ track.covariance @ i_kh.T + gain @ r @ gain.T
    distance = float(nu @ s_inv @ nu)
    return replace(track, state=state, covariance=_symmetrized(cov)), distance


def _symmetrized(cov: np.ndarray) -> np.ndarray:
    return (cov + cov.T) / 2.0


def validate_covariance(track: Track, floor: float = 1e-12) -> None:
    cov = track.covariance
    if not np.allclose(cov, cov.T, atol=1e-9):
        raise AssertionError(f"track {track.track_id} covariance not symmetric")
    if np.linalg.eigvalsh(cov).min() <= floor:
        raise AssertionError(f"track {track.track_id} covariance not positive-definite")


def solve_assignment(cost: np.ndarray, gate: float) -> list[tuple[int, int]]:
    """Joint-cost optimal one-to-one assignment with gating.

    Entries above `gate` are forbidden.  Among assignments using only
    allowed pairs, the result has maximum cardinality and, within that,
    minimum total cost.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.size == 0:
        return []
    # a finite penalty larger than any feasible total makes the solver
    # minimize the number of forbidden pairs first, then the real cost
    big = gate * (max(cost.shape) + 1.0) + 1.0
    padded = np.where(cost <= gate, cost, big)
    rows, cols = linear_sum_assignment(padded)
    return [(int(i), int(j)) for i, j in zip(rows, cols) if cost[i, j] <= gate]


def gnn_associate(
    tracks: list[Track],
    measurements: list[CandidatePoint],
    params: TrackerParams,
) -> tuple[dict[int, int], list[int], list[int]]:
    """Gated GNN assignment of measurements to (predicted) tracks.

    Returns (track index -> measurement index, unassigned track indices,
    unassigned measurement indices).
    """
    if not tracks or not measurements:
        return {}, list(range(len(tracks))), list(range(len(measurements)))
    cost = np.empty((len(tracks), len(measurements)))
    for i, track in enumerate(tracks):
        for j, meas in enumerate(measurements):
            cost[i, j] = mahalanobis_sq(track, (meas.x_m, meas.y_m), params)
    pairs = solve_assignment(cost, params.gate_threshold)
    assignment = dict(pairs)
    assigned_meas = set(assignment.values())
    unassigned_tracks = [i for i in range(len(tracks)) if i not in assignment]
    unassigned_meas = [j for j in range(len(measurements)) if j not in assigned_meas]
    return assignment, unassigned_tracks, unassigned_meas


def _record_outcome(track: Track, hit: bool, params: TrackerParams) -> Track:
    history = (track.hit_history + (hit,))[-params.confirm_n :]
    misses = 0 if hit else track.consecutive_misses + 1
    status = track.status
    if status is TrackStatus.TENTATIVE and sum(history) >= params.confirm_m:
        status = TrackStatus.CONFIRMED
    if misses >= params.delete_misses:
        status = TrackStatus.DEAD
    return replace(track, hit_history=history, consecutive_misses=misses, status=status)


def new_track(track_id: int, measurement: CandidatePoint, params: TrackerParams) -> Track:
    sx = params.measurement_noise_std_x_m
    sy = params.measurement_noise_std_y_m
    sv = params.initial_velocity_std_m_s
    track = Track(
        track_id=track_id,
        state=np.array([measurement.x_m, measurement.y_m, 0.0, 0.0]),
        covariance=np.diag([sx**2, sy**2, sv**2, sv**2]),
        hit_history=(True,),
        consecutive_misses=0,
    )
    if params.confirm_m <= 1:
        track = replace(track, status=TrackStatus.CONFIRMED)
    return track


def manage_lifecycle(
    tracks: list[Track],
    assignment: dict[int, int],
    unassigned_measurements: list[CandidatePoint],
    params: TrackerParams,
    next_id: int,
) -> tuple[list[Track], int]:
    """Hit/miss bookkeeping, M-of-N confirmation, deletion, and track birth."""
    survivors = []
    for i, track in enumerate(tracks):
        updated = _record_outcome(track, hit=i in assignment, params=params)
        if updated.status is not TrackStatus.DEAD:
            survivors.append(updated)
    for measurement in unassigned_measurements:
        survivors.append(new_track(next_id, measurement, params))
        next_id += 1
    return survivors, next_id


class Tracker:
    """Single-scenario tracker; step() must be called once per frame in order."""

    def __init__(self, params: TrackerParams):
        self.params = params
        self.tracks: list[Track] = []
        self.next_id = 1

    def step(self, measurements: list[CandidatePoint], dt_s: float) -> list[TrackSnapshot]:
        """Advance one frame; returns snapshots of the confirmed tracks."""
        params = self.params
        predicted = [kf_predict(t, dt_s, params) for t in self.tracks]
        assignment, _, unassigned_meas = gnn_associate(predicted, measurements, params)
        updated = []
        for i, track in enumerate(predicted):
            if i in assignment:
                z = measurements[assignment[i]]
                track, _ = kf_update(track, (z.x_m, z.y_m), params)
            validate_covariance(track)
            updated.append(track)
        self.tracks, self.next_id = manage_lifecycle(
            updated,
            assignment,
            [measurements[j] for j in unassigned_meas],
            params,
            self.next_id,
        )
        return self.snapshots(include_tentative=False)

    def snapshots(self, include_tentative: bool = False) -> list[TrackSnapshot]:
        wanted = (
            (TrackStatus.CONFIRMED, TrackStatus.TENTATIVE)
            if include_tentative
            else (TrackStatus.CONFIRMED,)
        )
        return [
            TrackSnapshot(
                track_id=t.track_id,
                status=t.status.value,
                x_m=float(t.state[0]),
                y_m=float(t.state[1]),
                vx_m_s=float(t.state[2]),
                vy_m_s=float(t.state[3]),
            )
            for t in self.tracks
            if t.status in wanted
        ]
