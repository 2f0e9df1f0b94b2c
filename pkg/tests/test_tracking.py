"""Kalman filtering, GNN association and track lifecycle."""

from itertools import permutations

import numpy as np
import pytest

from biradar import (
    CandidatePoint,
    Tracker,
    TrackerParams,
    TrackStatus,
    gnn_associate,
    kf_predict,
    kf_update,
    manage_lifecycle,
    solve_assignment,
)
from biradar.tracking import Track, new_track, validate_covariance


def _track(state, cov=None, track_id=1, status=TrackStatus.CONFIRMED) -> Track:
    if cov is None:
        cov = np.diag([0.01, 0.01, 1.0, 1.0])
    return Track(track_id=track_id, state=np.asarray(state, float),
                 covariance=np.asarray(cov, float), status=status)


def _cand(x, y) -> CandidatePoint:
    return CandidatePoint(x_m=x, y_m=y, r1_m=np.hypot(x, y), r2_m=np.hypot(x - 0.2, y))


def brute_force_assignment(cost: np.ndarray, gate: float) -> tuple[int, float]:
    """Max-cardinality, then min-cost assignment by full enumeration."""
    n, m = cost.shape
    best_count, best_total = 0, 0.0
    if n <= m:
        combos = ((tuple(enumerate(p))) for p in permutations(range(m), n))
    else:
        combos = ((tuple((i, j) for j, i in enumerate(p))) for p in permutations(range(n), m))
    for combo in combos:
        kept = [(i, j) for i, j in combo if cost[i, j] <= gate]
        total = sum(cost[i, j] for i, j in kept)
        if (len(kept), -total) > (best_count, -best_total):
            best_count, best_total = len(kept), total
    return best_count, best_total


class TestKfPredict:
    def test_stationary_position_unchanged(self):
        params = TrackerParams()
        track = _track([1.0, 2.0, 0.0, 0.0])
        out = kf_predict(track, 0.7, params)
        assert out.state[:2] == pytest.approx([1.0, 2.0])

    def test_linear_motion(self):
        params = TrackerParams()
        track = _track([0.0, 0.0, 1.0, -2.0])
        out = kf_predict(track, 0.5, params)
        assert out.state[:2] == pytest.approx([0.5, -1.0])
        assert out.state[2:] == pytest.approx([1.0, -2.0])

    def test_uncertainty_grows(self):
        params = TrackerParams(process_noise_intensity=1.0)
        track = _track([0.0, 1.0, 0.5, 0.5],
                       cov=np.diag([0.01, 0.02, 1.5, 2.5]))
        out = kf_predict(track, 0.1, params)
        assert np.trace(out.covariance) > np.trace(track.covariance)
        validate_covariance(out)

    def test_nonpositive_dt_rejected(self):
        with pytest.raises(ValueError):
            kf_predict(_track([0, 0, 0, 0]), 0.0, TrackerParams())


class TestKfUpdate:
    def test_perfect_prediction_is_noop_on_mean(self):
        params = TrackerParams()
        track = _track([1.0, 2.0, 0.3, -0.1])
        out, dist = kf_update(track, (1.0, 2.0), params)
        assert dist == 0.0
        assert out.state == pytest.approx(track.state)

    def test_equal_variances_give_midpoint(self):
        params = TrackerParams(measurement_noise_std_x_m=0.05,
                               measurement_noise_std_y_m=0.05)
        cov = np.diag([0.05**2, 0.05**2, 4.0, 4.0])
        track = _track([0.0, 1.0, 0.0, 0.0], cov=cov)
        out, _ = kf_update(track, (0.1, 1.2), params)
        assert out.state[:2] == pytest.approx([0.05, 1.1], rel=1e-9)

    def test_position_uncertainty_never_grows(self):
        params = TrackerParams()
        rng = np.random.default_rng(23)
        for _ in range(50):
            a = rng.standard_normal((4, 4))
            track = _track(rng.standard_normal(4), cov=a @ a.T + 0.01 * np.eye(4))
            out, _ = kf_update(track, rng.standard_normal(2), params)
            assert np.trace(out.covariance[:2, :2]) <= np.trace(track.covariance[:2, :2]) + 1e-12
            validate_covariance(out)

    def test_mahalanobis_matches_manual(self):
        params = TrackerParams()
        track = _track([0.0, 0.0, 0.0, 0.0], cov=np.diag([0.01, 0.04, 1.0, 1.0]))
        z = np.array([0.3, -0.2])
        s = np.diag([0.01 + params.measurement_noise_std_x_m**2,
                     0.04 + params.measurement_noise_std_y_m**2])
        expected = z @ np.linalg.inv(s) @ z
        _, dist = kf_update(track, z, params)
        assert dist == pytest.approx(expected, rel=1e-12)


class TestAssignment:
    def test_diagonal_optimum(self):
        cost = np.array([[1.0, 2.0], [2.0, 1.0]])
        pairs = solve_assignment(cost, gate=9.21)
        assert sorted(pairs) == [(0, 0), (1, 1)]

    def test_matches_brute_force_square(self):
        rng = np.random.default_rng(14)
        for n in (2, 3, 4):
            for _ in range(50):
                cost = rng.uniform(0, 10, (n, n))
                for gate in (np.inf, 6.0):
                    pairs = solve_assignment(cost, gate)
                    total = sum(cost[i, j] for i, j in pairs)
                    count, best = brute_force_assignment(cost, gate)
                    assert len(pairs) == count
                    assert total == pytest.approx(best, abs=1e-9)

    def test_matches_brute_force_rectangular(self):
        rng = np.random.default_rng(15)
        for shape in ((2, 4), (4, 2), (3, 5)):
            for _ in range(30):
                cost = rng.uniform(0, 10, shape)
                pairs = solve_assignment(cost, 7.5)
                total = sum(cost[i, j] for i, j in pairs)
                count, best = brute_force_assignment(cost, 7.5)
                assert len(pairs) == count
                assert total == pytest.approx(best, abs=1e-9)

    def test_fully_gated_is_empty(self):
        cost = np.full((3, 3), 100.0)
        assert solve_assignment(cost, gate=9.21) == []


class TestGnnAssociate:
    def test_single_pair_inside_gate(self):
        params = TrackerParams()
        track = _track([0.0, 2.0, 0.0, 0.0])
        assignment, unassigned_t, unassigned_m = gnn_associate(
            [track], [_cand(0.01, 2.01)], params)
        assert assignment == {0: 0}
        assert unassigned_t == [] and unassigned_m == []

    def test_out_of_gate_measurement_left_over(self):
        params = TrackerParams()
        track = _track([0.0, 2.0, 0.0, 0.0])
        assignment, unassigned_t, unassigned_m = gnn_associate(
            [track], [_cand(3.0, 4.0)], params)
        assert assignment == {}
        assert unassigned_t == [0] and unassigned_m == [0]

    def test_permutation_invariant(self):
        params = TrackerParams()
        rng = np.random.default_rng(40)
        tracks = [_track([x, y, 0, 0], track_id=i + 1)
                  for i, (x, y) in enumerate(rng.uniform(0, 4, (4, 2)))]
        cands = [_cand(t.state[0] + rng.normal(0, 0.02), t.state[1] + rng.normal(0, 0.02))
                 for t in tracks]
        base, _, _ = gnn_associate(tracks, cands, params)
        by_value = {i: (cands[j].x_m, cands[j].y_m) for i, j in base.items()}
        order = rng.permutation(len(cands))
        shuffled = [cands[k] for k in order]
        assignment, _, _ = gnn_associate(tracks, shuffled, params)
        assert {i: (shuffled[j].x_m, shuffled[j].y_m)
                for i, j in assignment.items()} == by_value


class TestLifecycle:
    def test_confirmation_after_three_hits(self):
        params = TrackerParams(confirm_m=3, confirm_n=5)
        tracks, next_id = manage_lifecycle([], {}, [_cand(1.0, 2.0)], params, next_id=1)
        assert next_id == 2
        assert tracks[0].status is TrackStatus.TENTATIVE
        for frame in range(2):
            tracks, next_id = manage_lifecycle(tracks, {0: 0}, [], params, next_id)
        assert tracks[0].status is TrackStatus.CONFIRMED
        assert tracks[0].hit_history == (True, True, True)

    def test_deletion_after_consecutive_misses(self):
        params = TrackerParams(delete_misses=5)
        track = new_track(1, _cand(1.0, 2.0), params)
        tracks = [track]
        for _ in range(4):
            tracks, _ = manage_lifecycle(tracks, {}, [], params, next_id=2)
            assert len(tracks) == 1
        tracks, _ = manage_lifecycle(tracks, {}, [], params, next_id=2)
        assert tracks == []

    def test_one_shot_spurious_never_confirms(self):
        params = TrackerParams()
        tracks, next_id = manage_lifecycle([], {}, [_cand(0.5, 1.0)], params, next_id=1)
        statuses = []
        while tracks:
            statuses.append(tracks[0].status)
            tracks, next_id = manage_lifecycle(tracks, {}, [], params, next_id)
        assert TrackStatus.CONFIRMED not in statuses
        assert len(statuses) == params.delete_misses

    def test_hits_reset_miss_counter(self):
        params = TrackerParams(delete_misses=3)
        tracks = [new_track(1, _cand(1.0, 2.0), params)]
        for _ in range(2):
            tracks, _ = manage_lifecycle(tracks, {}, [], params, next_id=2)
        tracks, _ = manage_lifecycle(tracks, {0: 0}, [], params, next_id=2)
        assert tracks[0].consecutive_misses == 0
        for _ in range(2):
            tracks, _ = manage_lifecycle(tracks, {}, [], params, next_id=2)
        assert len(tracks) == 1


class TestTracker:
    def test_empty_in_empty_out(self):
        tracker = Tracker(TrackerParams())
        assert tracker.step([], 0.05) == []

    def test_stationary_target_single_confirmed_track(self):
        params = TrackerParams()
        tracker = Tracker(params)
        rng = np.random.default_rng(77)
        truth = np.array([0.4, 1.8])
        raw_err, trk_err = [], []
        for frame in range(10):
            z = truth + rng.normal(0.0, 0.02, 2)
            snaps = tracker.step([_cand(*z)], 0.05)
            raw_err.append(np.sum((z - truth) ** 2))
            for s in snaps:
                trk_err.append(np.sum((np.array([s.x_m, s.y_m]) - truth) ** 2))
        assert len({t.track_id for t in tracker.tracks}) == 1
        assert tracker.tracks[0].status is TrackStatus.CONFIRMED
        assert np.sqrt(np.mean(trk_err)) <= np.sqrt(np.mean(raw_err))

    def test_velocity_converges_on_noiseless_cv(self):
        params = TrackerParams()
        tracker = Tracker(params)
        start = np.array([-0.5, 1.0])
        velocity = np.array([0.8, 0.6])
        dt = 0.05
        for frame in range(21):
            pos = start + velocity * dt * frame
            tracker.step([_cand(*pos)], dt)
        track = tracker.tracks[0]
        assert track.status is TrackStatus.CONFIRMED
        assert np.linalg.norm(track.velocity - velocity) < 1e-3

    def test_transient_ghosts_never_confirm(self):
        # two targets whose ranges coincide briefly: during the overlap the
        # pairing stage would emit 4 candidates (2 true + 2 ghosts)
        params = TrackerParams()
        tracker = Tracker(params)
        dt = 0.05
        confirmed_per_frame = []
        for frame in range(20):
            t1 = np.array([-0.5 + 0.05 * frame, 1.5])
            t2 = np.array([0.7 - 0.05 * frame, 2.4])
            cands = [_cand(*t1), _cand(*t2)]
            if frame in (8, 9):  # momentary range coincidence
                cands.append(_cand(0.1, 1.9))
                cands.append(_cand(0.1, 2.0 + 0.01 * frame))
            tracker.step(cands, dt)
            confirmed_per_frame.append(
                sorted(t.track_id for t in tracker.tracks
                       if t.status is TrackStatus.CONFIRMED))
        assert confirmed_per_frame[7] == [1, 2]
        for frame in range(15, 20):
            assert confirmed_per_frame[frame] == [1, 2]

    def test_track_ids_assigned_in_creation_order(self):
        tracker = Tracker(TrackerParams())
        tracker.step([_cand(0.0, 1.0), _cand(1.0, 2.0)], 0.05)
        assert [t.track_id for t in tracker.tracks] == [1, 2]
        # delete everything, then a new measurement must get a fresh id
        for _ in range(5):
            tracker.step([], 0.05)
        assert tracker.tracks == []
        tracker.step([_cand(0.0, 1.0)], 0.05)
        assert tracker.tracks[0].track_id == 3

    def test_far_measurement_always_spawns(self):
        params = TrackerParams()
        tracker = Tracker(params)
        tracker.step([_cand(0.0, 1.0)], 0.05)
        tracker.step([_cand(0.0, 1.0), _cand(2.0, 4.0)], 0.05)
        assert len(tracker.tracks) == 2
        assert tracker.tracks[1].status is TrackStatus.TENTATIVE

    def test_covariances_stay_spd_through_run(self):
        tracker = Tracker(TrackerParams())
        rng = np.random.default_rng(3)
        for frame in range(50):
            cands = [_cand(rng.uniform(-1, 1), rng.uniform(0.5, 3.0))
                     for _ in range(rng.integers(0, 4))]
            tracker.step(cands, 0.05)
            for track in tracker.tracks:
                assert np.allclose(track.covariance, track.covariance.T)
                assert np.linalg.eigvalsh(track.covariance).min() > 1e-12

    def test_deterministic_replay(self):
        def run():
            tracker = Tracker(TrackerParams())
            rng = np.random.default_rng(55)
            log = []
            for frame in range(30):
                cands = [_cand(0.2 + rng.normal(0, 0.03), 1.5 + rng.normal(0, 0.03))]
                if frame % 7 == 0:
                    cands.append(_cand(rng.uniform(-2, 2), rng.uniform(1, 4)))
                snaps = tracker.step(cands, 0.05)
                log.append([(s.track_id, s.x_m, s.y_m, s.vx_m_s, s.vy_m_s)
                            for s in snaps])
            return log

        assert run() == run()
