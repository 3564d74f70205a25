"""Integrate the Moser flow for the shipped torus families and watch the pullback error.

Run with ``python3 demos/moser_torus.py``.
"""

import numpy as np

from bisymplectic.moser import (convergence_study, integrate_flow, intertwining_check, sample_points,
                                t2_family, t4_pair_family)


def run(label, pair, n):
    points = sample_points(n, 64, 0)
    check = intertwining_check(pair, points)
    print(f"{label}: primitive mismatch {check.primitive:.1e}")
    flow = integrate_flow(pair, points, 200)
    for t, ew, ee, det in zip(flow.times, flow.omega_errors, flow.eta_errors, flow.min_det):
        print(f"  t={t:.2f}  |phi*w_t - w_0| {ew:.2e}  |phi*eta_t - eta_0| {ee:.2e}  min det {det:.3f}")
    rows = convergence_study(pair, points, 200, 2)
    ratios = [a.error / b.error for a, b in zip(rows, rows[1:])]
    print("  step halving ratios " + ", ".join(f"{r:.1f}" for r in ratios) + " (fourth order gives 16 until roundoff takes over)")
    print(f"  largest displacement {np.max(np.abs(flow.trajectories[-1] - points)):.3f}")
    print()


if __name__ == "__main__":
    run("T^2 area family", t2_family(0.05), 2)
    run("T^4 symplectic pair family", t4_pair_family(), 4)
