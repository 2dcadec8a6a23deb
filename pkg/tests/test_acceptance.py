"""Acceptance suite: one test per criterion, at the stated tolerances.

The expensive trajectories (the L=6 critical runs and the two L=9 runs) are
computed once as module fixtures and shared; their CSVs are exported to the
repository-level artifacts/ directory, where the figure generator's own
acceptance test picks them up. Run with ``pytest tests/test_acceptance.py -v -s``
to see one line per criterion.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from spinreduce.basis import enumerate_sector
from spinreduce.criticality import fixed_point_drift, scan_crossing
from spinreduce.eigensolver import EigenOptions, dense_spectrum, lowest_k
from spinreduce.hamiltonian import LadderConfig, build_ladder
from spinreduce.observables import ground_entropy
from spinreduce.reduction import (
    ReductionOptions,
    renormalize_coupling,
    run_reduction,
    write_trajectory_csv,
)
from test_reduction import explicit_zero_h0

ARTIFACTS = Path(__file__).resolve().parent.parent / "artifacts"

KEPT = {}  # criterion label -> wall time, for the summary printout


def _report(label, detail, elapsed=None):
    extra = f" [{elapsed:.1f} s]" if elapsed is not None else ""
    print(f"\nPASS {label} - {detail}{extra}")


@pytest.fixture(scope="module")
def artifacts_dir():
    ARTIFACTS.mkdir(exist_ok=True)
    return ARTIFACTS


@pytest.fixture(scope="module")
def crossing_report(artifacts_dir):
    t0 = time.perf_counter()
    template = LadderConfig(L=6, j_t=15.0, j_l=10.0, j_c=10.0)
    report = scan_crossing(
        template, 10.0, 14.0, points=41,
        csv_path=artifacts_dir / "a3_gap_curve.csv",
    )
    KEPT["A3"] = time.perf_counter() - t0
    return report


@pytest.fixture(scope="module")
def crossing_trajectory(crossing_report, artifacts_dir):
    t0 = time.perf_counter()
    cfg = LadderConfig(L=6, j_t=15.0, j_l=crossing_report.g_e,
                       j_c=crossing_report.g_e)
    traj = run_reduction(cfg, EigenOptions(k=3), ReductionOptions(n_min=50))
    KEPT["A4a"] = time.perf_counter() - t0
    write_trajectory_csv(traj, artifacts_dir / "a4_crossing_trajectory.csv")
    return traj


@pytest.fixture(scope="module")
def near_critical_trajectory(artifacts_dir):
    t0 = time.perf_counter()
    cfg = LadderConfig(L=6, j_t=15.0, j_l=12.21, j_c=11.0)
    traj = run_reduction(cfg, EigenOptions(k=3), ReductionOptions(n_min=150))
    KEPT["A4b"] = time.perf_counter() - t0
    write_trajectory_csv(traj, artifacts_dir / "a4_near_critical_trajectory.csv")
    return traj


def _l9_options(n_min):
    # batch > 1 only above n = 2000; the checked window runs single steps
    return ReductionOptions(n_min=n_min, batch_frac=0.05, batch_floor=2000)


@pytest.fixture(scope="module")
def l9_strong_rung_trajectory(artifacts_dir):
    t0 = time.perf_counter()
    cfg = LadderConfig(L=9, j_t=15.0, j_l=5.0, j_c=3.0)
    traj = run_reduction(cfg, EigenOptions(k=3), _l9_options(60))
    KEPT["A5a"] = time.perf_counter() - t0
    write_trajectory_csv(traj, artifacts_dir / "a5_jt15_trajectory.csv")
    return traj


@pytest.fixture(scope="module")
def l9_weak_rung_trajectory(artifacts_dir):
    t0 = time.perf_counter()
    cfg = LadderConfig(L=9, j_t=2.5, j_l=5.0, j_c=3.0)
    traj = run_reduction(cfg, EigenOptions(k=3), _l9_options(450))
    KEPT["A5b"] = time.perf_counter() - t0
    write_trajectory_csv(traj, artifacts_dir / "a5_jt25_trajectory.csv")
    return traj


def test_a1_sector_dimensions():
    t0 = time.perf_counter()
    n6 = enumerate_sector(6, 0).dim
    n9 = enumerate_sector(9, 0).dim
    elapsed = time.perf_counter() - t0
    assert n6 == 924
    assert n9 == 48620
    assert elapsed < 1.0
    _report("A1", f"sector dimensions 924 (L=6) and 48620 (L=9)", elapsed)


def test_a2_critical_point_energies():
    t0 = time.perf_counter()
    cfg = LadderConfig(L=6, j_t=15.0, j_l=12.21, j_c=12.21, boundary="open")
    _, H = build_ladder(cfg)
    res = lowest_k(H, cfg.j_t, EigenOptions(k=3))
    e = res.values / cfg.L
    elapsed = time.perf_counter() - t0
    # open boundary is the validated choice: the periodic ladder puts the
    # lowest per-site energies near -13.8/-12.3, nowhere close to -11.25
    assert abs(e[0] - (-11.25)) <= 0.02
    assert abs(e[1] - (-11.25)) <= 0.02
    assert abs(e[2] - (-10.7)) <= 0.1
    assert elapsed < 10.0
    _report("A2", f"critical energies e1={e[0]:.4f}, e2={e[1]:.4f}, e3={e[2]:.4f} (open boundary)", elapsed)


def test_a3_crossing_location(crossing_report):
    ratio = crossing_report.ratio
    assert abs(ratio - 1.23) / 1.23 <= 0.02
    assert crossing_report.is_crossing
    assert KEPT["A3"] < 60.0
    _report("A3", f"crossing at J_l=J_c={crossing_report.g_e:.5f}, "
                  f"J_t/J_l={ratio:.4f} (target 1.23 within 2%)", KEPT["A3"])


def test_a4_fixed_point_constancy(crossing_trajectory, near_critical_trajectory):
    drift_crossing = fixed_point_drift(crossing_trajectory, n_floor=100).drift
    drift_near = fixed_point_drift(near_critical_trajectory, n_floor=250).drift
    assert drift_crossing <= 0.01
    assert drift_near <= 0.01
    assert KEPT["A4a"] + KEPT["A4b"] < 120.0
    _report("A4", f"coupling drift {100 * drift_crossing:.4f}% (crossing, n>=100), "
                  f"{100 * drift_near:.4f}% (J_c=11, n>=250)",
            KEPT["A4a"] + KEPT["A4b"])


def test_a5_l9_accuracy_profile(l9_strong_rung_trajectory, l9_weak_rung_trajectory):
    strong = l9_strong_rung_trajectory
    assert strong.stop_reason == "reached_n_min"
    window = [s for s in strong.steps if s.n >= 500]
    assert window, "no recorded steps above n=500"
    worst_p1 = max(s.p[0] for s in window)
    assert worst_p1 <= 0.5
    # the profile in fact stays flat through the whole reported window
    assert max(s.p[0] for s in strong.steps if s.n >= 80) <= 0.5

    weak = l9_weak_rung_trajectory
    near_500 = [s for s in weak.steps if abs(s.n - 500) <= 10]
    assert near_500, "no recorded steps near n=500"
    # 'at n ~ 500': some step in the +-10 neighbourhood carries both excited
    # accuracy losses inside the 0.5%..5% band
    ok = [s for s in near_500
          if 0.5 <= s.p[1] <= 5.0 and 0.5 <= s.p[2] <= 5.0]
    assert ok, f"p2/p3 out of band near n=500: " \
               f"{[(s.n, round(s.p[1], 3), round(s.p[2], 3)) for s in near_500]}"
    picked = ok[0]
    _report("A5", f"J_t=15: max p1={worst_p1:.2e}% for n>=500; "
                  f"J_t=2.5 at n={picked.n}: p2={picked.p[1]:.2f}%, p3={picked.p[2]:.2f}%",
            KEPT["A5a"] + KEPT["A5b"])


def test_a4_a5_contrast_off_critical_drift(crossing_trajectory,
                                           l9_weak_rung_trajectory):
    """The crossing is a fixed point; the strongly off-critical run is not."""
    drift_crossing = fixed_point_drift(crossing_trajectory, n_floor=100).drift
    floor = round(48620 * 100 / 924)  # same relative window as the L=6 check
    drift_off = fixed_point_drift(l9_weak_rung_trajectory, n_floor=floor).drift
    assert drift_crossing <= 0.01
    assert drift_off > 0.01
    _report("A4/A5 contrast",
            f"drift {100 * drift_crossing:.4f}% at crossing vs "
            f"{100 * drift_off:.2f}% off-critical (n>={floor})")


class TestA6PropertySuite:
    def test_pinning_invariant(self, crossing_trajectory, near_critical_trajectory,
                               l9_strong_rung_trajectory):
        for traj in (crossing_trajectory, near_critical_trajectory,
                     l9_strong_rung_trajectory):
            lam1 = traj.lambda_target
            for s in traj.steps:
                assert abs(s.lambdas[0] - lam1) <= 1e-10 * abs(lam1)

    def test_closed_form_equivalence(self):
        _, H = build_ladder(LadderConfig(L=2, j_t=9.0, j_l=4.0, j_c=2.0))
        lam1 = float(lowest_k(H, 9.0, EigenOptions(k=1)).values[0])
        for target in (lam1, 1.1 * lam1, 1.31 * lam1):
            g_closed = renormalize_coupling(H, target, 9.0)
            g_root = renormalize_coupling(explicit_zero_h0(H), target, 9.0)
            assert abs(g_root - g_closed) <= 1e-9 * abs(g_closed)

    def test_coupling_monotone_under_interlacing(self, crossing_trajectory,
                                                 near_critical_trajectory):
        for traj in (crossing_trajectory, near_critical_trajectory):
            gs = [traj.g_initial] + [s.g for s in traj.steps]
            assert all(b >= a * (1 - 1e-9) for a, b in zip(gs, gs[1:]))

    def test_dense_vs_lanczos_all_small_sectors(self):
        worst = 0.0
        for L in range(1, 7):
            for m_tot in range(-L, L + 1):
                basis = enumerate_sector(L, m_tot)
                if basis.dim > 1024:
                    continue
                cfg = LadderConfig(L=L, j_t=15.0, j_l=5.0, j_c=3.0, m_tot=m_tot)
                _, H = build_ladder(cfg, basis)
                k = min(3, H.dim)
                res = lowest_k(H, 15.0, EigenOptions(k=k))
                dense = dense_spectrum(H, 15.0)[:k]
                worst = max(worst, float(np.max(np.abs(res.values - dense))))
        assert worst <= 1e-8

    def test_entropy_bounds_on_every_step(self, crossing_trajectory,
                                          l9_strong_rung_trajectory):
        for traj, L in ((crossing_trajectory, 6), (l9_strong_rung_trajectory, 9)):
            for s in traj.steps:
                assert 0.0 <= s.entropy <= math.log(s.n) / (2 * L) + 1e-12

    def test_single_rung_analytics(self):
        cfg = LadderConfig(L=1, j_t=15.0, j_l=0.0, j_c=0.0)
        _, H = build_ladder(cfg)
        res = lowest_k(H, 15.0, EigenOptions(k=2))
        assert res.values[0] == pytest.approx(-3 * 15.0 / 4, rel=1e-12)

        traj = run_reduction(cfg, EigenOptions(k=2), ReductionOptions(n_min=1))
        assert traj.steps[-1].g == pytest.approx(45.0, rel=1e-10)
        assert traj.steps[-1].lambdas[0] == pytest.approx(-11.25, rel=1e-10)
        assert ground_entropy(traj.initial.ground, 1) == pytest.approx(
            math.log(2) / 2, rel=1e-10
        )
        _report("A6", "property suite (pinning, closed form, monotone g, "
                      "dense-vs-Lanczos, entropy bounds, single-rung analytics)")
