"""Level-crossing location in coupling space and the fixed-point drift metric.

Degeneracies of the two lowest eigenvalues are located as minima of the gap
lambda_2 - lambda_1 along a one-parameter path through coupling space (the
default path varies J_l = J_c at fixed J_t, the rung-dimer-to-Haldane
transition line). A coarse scan brackets the minimum, golden-section search
refines it, and a crossing is flagged when the refined gap is negligible
against |lambda_1|. The drift metric quantifies how far the renormalized
coupling moves during a reduction -- at a crossing it should not move at
all.
"""

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .eigensolver import EigenOptions, lowest_k
from .errors import EmptyWindowError, NoCrossingError
from .hamiltonian import CouplingHamiltonian, LadderConfig, build_ladder
from .reduction import ReductionTrajectory

# A refined minimum counts as a true crossing below this fraction of |l1|.
CROSSING_GAP_RTOL = 1e-6

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CrossingReport:
    parameter_path: str
    g_e: float              # scanned-parameter value at the gap minimum
    min_gap: float
    bracket: tuple          # final (lo, hi) parameter interval
    ratio: float            # J_t / parameter at the minimum
    lambda1: float          # ground energy at g_e
    is_crossing: bool


@dataclass(frozen=True)
class FixedPointCheck:
    drift: float            # max over steps n >= n_floor of |g - g_N| / g_N
    n_floor: int


def set_jl_jc(cfg: LadderConfig, x: float) -> LadderConfig:
    """Default scan path: J_l = J_c = x at fixed J_t."""
    return replace(cfg, j_l=x, j_c=x)


def degeneracy_gap(H: CouplingHamiltonian, g: float,
                   eopts: EigenOptions | None = None) -> float:
    """Gap lambda_2 - lambda_1 of h0 + g*h1, clamped at zero.

    Uses the deflated two-pair solve, which resolves exact degeneracies
    instead of skipping the second copy.
    """
    if H.dim < 2:
        raise ValueError("gap needs dimension >= 2")
    eopts = eopts or EigenOptions()
    opts = EigenOptions(k=2, tol=eopts.tol, max_iter=eopts.max_iter, seed=eopts.seed)
    res = lowest_k(H, g, opts)
    return max(0.0, float(res.values[1] - res.values[0]))


def _solve_pair(cfg_template, x, setter, eopts, basis):
    cfg = setter(cfg_template, x)
    basis, H = build_ladder(cfg, basis)
    opts = EigenOptions(k=2, tol=eopts.tol, max_iter=eopts.max_iter, seed=eopts.seed)
    res = lowest_k(H, cfg.j_t, opts)
    l1, l2 = float(res.values[0]), float(res.values[1])
    return l1, l2, max(0.0, l2 - l1)


def scan_crossing(cfg_template: LadderConfig, lo: float, hi: float,
                  points: int = 41, setter=set_jl_jc,
                  eopts: EigenOptions | None = None,
                  refine_rtol: float = 1e-10,
                  csv_path=None,
                  parameter_path: str = "J_l = J_c varied, J_t fixed") -> CrossingReport:
    """Locate the gap minimum on [lo, hi] and refine it.

    Raises NoCrossingError when the coarse scan has no interior minimum
    (monotone gap across the range). The report flags a true crossing when
    the refined gap is below CROSSING_GAP_RTOL * |lambda_1|.
    """
    if points < 3:
        raise ValueError("scan needs at least 3 points")
    if not hi > lo:
        raise ValueError("scan range must have hi > lo")
    eopts = eopts or EigenOptions()
    basis, _ = build_ladder(cfg_template)  # sector reused across points

    cache = {}

    def f(x):
        if x not in cache:
            cache[x] = _solve_pair(cfg_template, x, setter, eopts, basis)
        return cache[x]

    xs = np.linspace(lo, hi, points)
    rows = [(float(x), *f(float(x))) for x in xs]
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["param", "lambda1", "lambda2", "gap"])
            for x, l1, l2, gap in rows:
                w.writerow([repr(x), repr(l1), repr(l2), repr(gap)])

    gaps = [r[3] for r in rows]
    i_min = int(np.argmin(gaps))
    # The dip must be genuinely interior: strictly below both endpoint gaps
    # by more than eigensolver noise, else monotone or flat gap curves would
    # be refined into fake crossings.
    noise = 1e-9 * max(1.0, abs(rows[i_min][1]))
    if (i_min == 0 or i_min == len(rows) - 1
            or gaps[i_min] >= min(gaps[0], gaps[-1]) - noise):
        raise NoCrossingError(
            f"gap has no interior minimum on [{lo}, {hi}] "
            f"(min {gaps[i_min]:.6g} at {rows[i_min][0]:.6g})"
        )

    a, b = rows[i_min - 1][0], rows[i_min + 1][0]
    scale = max(abs(a), abs(b), 1e-12)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    while (b - a) > refine_rtol * scale:
        if f(c)[2] < f(d)[2]:
            b, d = d, c
            c = b - _INVPHI * (b - a)
        else:
            a, c = c, d
            d = a + _INVPHI * (b - a)

    candidates = [(x, *vals) for x, vals in cache.items() if a <= x <= b]
    x_best, l1, l2, gap = min(candidates, key=lambda r: r[3])
    return CrossingReport(
        parameter_path=parameter_path,
        g_e=float(x_best),
        min_gap=float(gap),
        bracket=(float(a), float(b)),
        ratio=cfg_template.j_t / float(x_best),
        lambda1=l1,
        is_crossing=bool(gap < CROSSING_GAP_RTOL * abs(l1)),
    )


def fixed_point_drift(traj: ReductionTrajectory, n_floor: int) -> FixedPointCheck:
    """Maximum relative coupling drift over steps with dimension >= n_floor."""
    g0 = traj.g_initial
    window = [s.g for s in traj.steps if s.n >= n_floor]
    if not window:
        raise EmptyWindowError(f"no reduction steps with n >= {n_floor}")
    drift = max(abs(g - g0) / abs(g0) for g in window)
    return FixedPointCheck(drift=float(drift), n_floor=int(n_floor))
