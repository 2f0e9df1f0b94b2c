"""Built-in release checks, runnable from the CLI without test tooling.

Each check compares the production path against an independent slow
reference (direct summation, forward geometry, Monte-Carlo statistics,
permutation enumeration) and prints one pass/fail line with the
measured value.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .bilateration import bilaterate
from .cfar import ca_cfar
from .config import CfarParams, RadarConfig
from .rangeproc import RangeProfile, range_profile, window
from .simulate import Frame
from .tracking import solve_assignment


def check_parseval(rng: np.random.Generator) -> tuple[bool, str]:
    """Sum of profile power must equal N * sum |w*x|^2 (direct summation)."""
    n = 128
    samples = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    frame = Frame(radar_id=1, frame_index=0, samples=samples)
    worst = 0.0
    for kind in ("rectangular", "hann"):
        profile = range_profile(frame, kind)
        lhs = profile.power.sum()
        rhs = n * np.sum(np.abs(window(kind, n) * samples) ** 2)
        worst = max(worst, abs(lhs - rhs) / rhs)
    return worst < 1e-12, f"max relative Parseval error {worst:.3e}"


def check_bilateration_roundtrip(rng: np.random.Generator) -> tuple[bool, str]:
    """Exact forward ranges must invert to the original position."""
    d = 0.2
    worst = 0.0
    for _ in range(1000):
        x = rng.uniform(-2.0, 2.0 + d)
        y = rng.uniform(0.1, 5.0)
        r1 = np.hypot(x, y)
        r2 = np.hypot(x - d, y)
        point = bilaterate(r1, r2, d)
        if point is None:
            return False, f"feasible target ({x:.3f}, {y:.3f}) reported infeasible"
        worst = max(worst, np.hypot(point.x_m - x, point.y_m - y))
    return worst < 1e-9, f"max round-trip error {worst:.3e} m"


def check_cfar_pfa(rng: np.random.Generator) -> tuple[bool, str]:
    """Measured false-alarm rate on exponential noise within [0.5x, 2x] design."""
    pfa = 1e-2
    n_cells = 100_000
    profile = RangeProfile(
        radar_id=1,
        frame_index=0,
        power=rng.exponential(1.0, n_cells),
        window_kind="rectangular",
    )
    params = CfarParams(probability_false_alarm=pfa)
    measured = len(ca_cfar(profile, params)) / n_cells
    ok = 0.5 * pfa <= measured <= 2.0 * pfa
    return ok, f"measured P_fa {measured:.4f} (design {pfa:.4f})"


def check_gnn_optimal(rng: np.random.Generator) -> tuple[bool, str]:
    """Assignment cost must equal the brute-force permutation minimum."""
    matches = 0
    trials = 100
    for _ in range(trials):
        cost = rng.uniform(0.0, 10.0, size=(4, 4))
        gate = 10.0 if rng.uniform() < 0.5 else 6.0
        pairs = solve_assignment(cost, gate)
        total = sum(cost[i, j] for i, j in pairs)
        best_count, best_total = _brute_force_assignment(cost, gate)
        if len(pairs) == best_count and abs(total - best_total) < 1e-9:
            matches += 1
    return matches == trials, f"{matches}/{trials} instances match brute force"


def _brute_force_assignment(cost: np.ndarray, gate: float) -> tuple[int, float]:
    n = cost.shape[0]
    best = (-1, float("inf"))
    for perm in permutations(range(n)):
        kept = [(i, j) for i, j in enumerate(perm) if cost[i, j] <= gate]
        total = sum(cost[i, j] for i, j in kept)
        key = (len(kept), -total)
        if key > (best[0], -best[1]):
            best = (len(kept), total)
    return best


def check_parameter_consistency() -> tuple[bool, str]:
    """Default radar derived values: 4.3 cm resolution, 5.5 m max range."""
    radar = RadarConfig()
    res = radar.range_resolution_m
    rmax = radar.max_range_m
    ok = abs(res - 0.0430) <= 0.0005 and abs(rmax - 5.50) <= 0.01
    return ok, f"resolution {res * 100:.2f} cm, max range {rmax:.3f} m"


def run_selftest() -> bool:
    """Run all checks, print one line each; True iff everything passed."""
    rng = np.random.default_rng(2024)
    checks = [
        ("parameter-consistency", lambda: check_parameter_consistency()),
        ("parseval", lambda: check_parseval(rng)),
        ("bilateration-roundtrip", lambda: check_bilateration_roundtrip(rng)),
        ("cfar-pfa", lambda: check_cfar_pfa(rng)),
        ("gnn-optimality", lambda: check_gnn_optimal(rng)),
    ]
    all_ok = True
    for name, fn in checks:
        ok, detail = fn()
        all_ok &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
