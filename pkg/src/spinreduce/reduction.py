"""The space-reduction loop: eliminate low-amplitude basis states, renormalize g.

Each step orders the current ground-state amplitudes, drops the smallest
ones, restricts both matrices to the survivors, and re-solves the coupling
so the lowest eigenvalue of the reduced problem equals the full-space ground
energy. For the ladder (h0 = 0) the renormalization is the closed form
g = lambda_1 / mu_min with mu_min the lowest eigenvalue of the restricted
h1, so one eigensolve per step yields the new coupling, the pinned spectrum
and the amplitudes for the next elimination in a single shot. The generic
h0 != 0 path solves the same constraint with a bracketing root finder.
"""

import csv
import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np
import scipy.optimize

from .basis import SpinBasis
from .eigensolver import EigenOptions, EigenResult, lowest_k
from .errors import BracketError, ConvergenceError, NoRootError
from .hamiltonian import CouplingHamiltonian, LadderConfig, build_ladder, restrict
from .observables import accuracy_loss, ground_entropy, per_site_energy

TRAJECTORY_COLUMNS = (
    "step,n,g,lambda1,lambda2,lambda3,e1,e2,e3,p1,p2,p3,"
    "entropy,eliminated,elim_amp,root_iters"
)

STOP_REACHED_N_MIN = "reached_n_min"
STOP_ACCURACY = "accuracy_exceeded"
STOP_ROOT_FAILURE = "root_failure"
STOP_POSITIVE_GROUND = "positive_ground"


@dataclass
class ReductionOptions:
    n_min: int = 8
    p_max: float = 5.0            # stop when p(1) exceeds this percentage
    batch: int = 1                # states eliminated per step above batch_floor
    batch_frac: float = 0.0       # optional geometric schedule: also remove this fraction of n
    batch_floor: int = 0          # below this dimension eliminations are single
    g_bracket_factor: float = 2.0
    lambda_rtol: float = 1e-10    # pinning tolerance relative to |lambda_1|

    def __post_init__(self):
        if self.n_min < 1:
            raise ValueError("n_min must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if not 0.0 <= self.batch_frac < 1.0:
            raise ValueError("batch_frac must be in [0, 1)")
        if self.g_bracket_factor <= 1.0:
            raise ValueError("g_bracket_factor must exceed 1")
        if self.lambda_rtol <= 0:
            raise ValueError("lambda_rtol must be positive")

    def batch_at(self, n: int) -> int:
        """States to eliminate at current dimension n (never below n_min,
        and single eliminations once n is at or below batch_floor)."""
        if n > self.batch_floor:
            b = max(self.batch, int(self.batch_frac * n))
            b = min(b, n - self.batch_floor) if self.batch_floor else b
        else:
            b = 1
        return max(1, min(b, n - self.n_min))


@dataclass
class ReductionStep:
    n: int
    g: float
    lambdas: tuple                 # (l1, l2, l3), nan-padded below k
    per_site: tuple                # lambdas / L
    p: tuple                       # accuracy-loss percentages vs full space
    entropy: float
    eliminated: tuple              # original basis ordinals removed this step
    eliminated_amplitude: float    # largest |a| among the removed states
    root_iterations: int


@dataclass
class ReductionTrajectory:
    config: LadderConfig
    g_initial: float
    lambda_target: float
    initial: EigenResult = field(repr=False)
    steps: list = field(default_factory=list)
    stop_reason: str = STOP_REACHED_N_MIN

    @property
    def initial_dim(self) -> int:
        return self.initial.vectors.shape[0]


def order_by_amplitude(ground: np.ndarray) -> np.ndarray:
    """Positions sorted by descending |amplitude|; ties keep ascending order."""
    a = np.abs(np.asarray(ground, dtype=float))
    return np.argsort(-a, kind="stable")


def _lambda_min(H: CouplingHamiltonian, g: float, eopts: EigenOptions) -> float:
    one = EigenOptions(k=1, tol=eopts.tol, max_iter=eopts.max_iter, seed=eopts.seed)
    return float(lowest_k(H, g, one).values[0])


def renormalize_coupling(H: CouplingHamiltonian, lambda_target: float,
                         g_prev: float, opts: ReductionOptions | None = None,
                         eopts: EigenOptions | None = None) -> float:
    """Coupling g with lambda_min(h0 + g*h1) = lambda_target.

    For h0 = 0 this is the closed form lambda_target / mu_min (mu_min < 0
    required for a negative target); otherwise a bracketing root solve on
    f(g) = lambda_min(g) - lambda_target, starting from a geometric bracket
    around g_prev.
    """
    return _renormalize_counted(H, lambda_target, g_prev, opts, eopts)[0]


def _renormalize_counted(H, lambda_target, g_prev, opts=None, eopts=None):
    """renormalize_coupling plus the number of lambda_min evaluations."""
    opts = opts or ReductionOptions()
    eopts = eopts or EigenOptions()

    if H.h0.nnz == 0:
        if g_prev >= 0:
            mu_min = _lambda_min(H, 1.0, eopts)
            if mu_min >= 0 and lambda_target < 0:
                raise NoRootError(
                    f"lowest h1 eigenvalue {mu_min:.6g} is non-negative; "
                    f"target {lambda_target:.6g} unreachable with g >= 0"
                )
            if mu_min == 0:
                raise NoRootError("lowest h1 eigenvalue is zero")
            return lambda_target / mu_min, 0
        # g_prev < 0 pins through the other end of the h1 spectrum.
        mu_max = -_lambda_min(_negated(H), 1.0, eopts)
        if mu_max <= 0 and lambda_target < 0:
            raise NoRootError("target unreachable with g < 0")
        return lambda_target / mu_max, 0

    calls = [0]

    def f(g):
        calls[0] += 1
        return _lambda_min(H, g, eopts) - lambda_target

    fac = opts.g_bracket_factor
    lo, hi = g_prev / fac, g_prev * fac
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    expansions = 0
    while flo * fhi > 0:
        expansions += 1
        if expansions > 60:
            raise BracketError(
                f"no sign change after {expansions - 1} bracket expansions "
                f"around g={g_prev:.6g}"
            )
        lo, hi = lo / fac, hi * fac
        flo, fhi = f(lo), f(hi)
    g_new = scipy.optimize.brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16)
    return float(g_new), calls[0]


def _negated(H: CouplingHamiltonian) -> CouplingHamiltonian:
    return CouplingHamiltonian(h0=H.h0, h1=-H.h1, labels=H.labels)


def _nan_pad(values, k=3):
    out = [float("nan")] * k
    for i, v in enumerate(values[:k]):
        out[i] = float(v)
    return tuple(out)


def _observable_tuple(lambdas, ref_per_site, L):
    e = tuple(per_site_energy(l, L) if not math.isnan(l) else float("nan")
              for l in lambdas)
    p = tuple(
        accuracy_loss(er, en) if not (math.isnan(er) or math.isnan(en)) else float("nan")
        for er, en in zip(ref_per_site, e)
    )
    return e, p


def reduce_step(H: CouplingHamiltonian, g: float, lambda1: float, L: int,
                eopts: EigenOptions, ropts: ReductionOptions,
                current: EigenResult | None = None,
                ref_per_site=None, n_remove: int | None = None):
    """One elimination step: returns (restricted H, ReductionStep, EigenResult).

    ``current`` carries the eigenpairs of (H, g) if the caller already has
    them; otherwise they are recomputed here. ``ref_per_site`` supplies the
    full-space per-site energies that the accuracy-loss percentages compare
    against (defaults to the pre-step ones, making this step's p relative).
    """
    n = H.dim
    k_eff = min(eopts.k, n)
    sopts = EigenOptions(k=k_eff, tol=eopts.tol, max_iter=eopts.max_iter,
                         seed=eopts.seed)
    if current is None:
        current = lowest_k(H, g, sopts)
    if ref_per_site is None:
        ref_per_site = tuple(
            per_site_energy(l, L) if not math.isnan(l) else float("nan")
            for l in _nan_pad(current.values)
        )
    if n_remove is None:
        n_remove = ropts.batch_at(n)

    order = order_by_amplitude(current.ground)
    removed_pos = np.sort(order[n - n_remove:])
    keep_pos = np.sort(order[: n - n_remove])
    eliminated = tuple(int(x) for x in H.labels[removed_pos])
    elim_amp = float(np.max(np.abs(current.ground[removed_pos])))

    H_new = restrict(H, keep_pos)
    k_new = min(eopts.k, H_new.dim)
    nopts = EigenOptions(k=k_new, tol=eopts.tol, max_iter=eopts.max_iter,
                         seed=eopts.seed)
    warm = current.vectors[keep_pos, :k_new]

    if H.h0.nnz == 0 and g > 0:
        # Closed form: one h1 eigensolve gives the new coupling and, after
        # scaling, the pinned spectrum and fresh amplitudes.
        eig1 = lowest_k(H_new, 1.0, nopts, v0=warm)
        mu_min = float(eig1.values[0])
        if mu_min >= 0 and lambda1 < 0:
            raise NoRootError(
                f"lowest h1 eigenvalue {mu_min:.6g} non-negative at n={H_new.dim}"
            )
        g_new = lambda1 / mu_min
        if g_new < 0:
            raise NoRootError(f"closed-form coupling {g_new:.6g} changed sign")
        root_iters = 0
        new = EigenResult(
            values=g_new * eig1.values,
            vectors=eig1.vectors,
            residuals=abs(g_new) * eig1.residuals,
            iterations=eig1.iterations,
            degenerate=eig1.degenerate,
        )
    else:
        g_new, root_iters = _renormalize_counted(H_new, lambda1, g, ropts, eopts)
        new = lowest_k(H_new, g_new, nopts, v0=warm)

    lambdas = _nan_pad(new.values)
    e, p = _observable_tuple(lambdas, ref_per_site, L)
    step = ReductionStep(
        n=H_new.dim,
        g=float(g_new),
        lambdas=lambdas,
        per_site=e,
        p=p,
        entropy=ground_entropy(new.ground, L),
        eliminated=eliminated,
        eliminated_amplitude=elim_amp,
        root_iterations=root_iters,
    )
    return H_new, step, new


def run_reduction(cfg: LadderConfig, eopts: EigenOptions | None = None,
                  ropts: ReductionOptions | None = None,
                  basis: SpinBasis | None = None,
                  H: CouplingHamiltonian | None = None) -> ReductionTrajectory:
    """Full reduction flow from the sector dimension down to n_min.

    The initial coupling is g = J_t; the full-space ground energy computed
    there is the pinning target for every later step. Steps are recorded
    in decreasing dimension until n_min, an accuracy stop (p(1) > p_max) or
    a renormalization failure.
    """
    eopts = eopts or EigenOptions()
    ropts = ropts or ReductionOptions()
    if H is None:
        basis, H = build_ladder(cfg, basis)
    L = cfg.L
    g0 = cfg.j_t

    k_eff = min(eopts.k, H.dim)
    sopts = EigenOptions(k=k_eff, tol=eopts.tol, max_iter=eopts.max_iter,
                         seed=eopts.seed)
    if H.h0.nnz == 0:
        eig1 = lowest_k(H, 1.0, sopts)
        initial = EigenResult(
            values=g0 * eig1.values,
            vectors=eig1.vectors,
            residuals=g0 * eig1.residuals,
            iterations=eig1.iterations,
            degenerate=eig1.degenerate,
        )
    else:
        initial = lowest_k(H, g0, sopts)

    lambda1 = float(initial.values[0])
    ref_per_site = tuple(per_site_energy(l, L) for l in _nan_pad(initial.values))
    traj = ReductionTrajectory(
        config=cfg, g_initial=g0, lambda_target=lambda1, initial=initial
    )

    g = g0
    current = initial
    while H.dim > ropts.n_min:
        try:
            H, step, current = reduce_step(
                H, g, lambda1, L, eopts, ropts,
                current=current, ref_per_site=ref_per_site,
            )
        except NoRootError:
            traj.stop_reason = STOP_POSITIVE_GROUND
            return traj
        except (BracketError, ConvergenceError):
            traj.stop_reason = STOP_ROOT_FAILURE
            return traj
        g = step.g
        traj.steps.append(step)
        if not math.isnan(step.p[0]) and step.p[0] > ropts.p_max:
            traj.stop_reason = STOP_ACCURACY
            return traj
    traj.stop_reason = STOP_REACHED_N_MIN
    return traj


def _fmt(x) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def write_trajectory_csv(traj: ReductionTrajectory, path) -> None:
    """CSV with one row per recorded state, the initial solve first.

    Floats are written with full round-trip precision so downstream plotting
    and regression comparisons are exact.
    """
    L = traj.config.L
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_COLUMNS.split(","))
        lam0 = _nan_pad(traj.initial.values)
        e0 = tuple(per_site_energy(l, L) if not math.isnan(l) else float("nan")
                   for l in lam0)
        p0 = tuple(0.0 if not math.isnan(l) else float("nan") for l in lam0)
        s0 = ground_entropy(traj.initial.ground, L)
        w.writerow([
            0, traj.initial_dim, _fmt(traj.g_initial),
            *map(_fmt, lam0), *map(_fmt, e0), *map(_fmt, p0),
            _fmt(s0), "", "nan", 0,
        ])
        for i, st in enumerate(traj.steps, start=1):
            w.writerow([
                i, st.n, _fmt(st.g),
                *map(_fmt, st.lambdas), *map(_fmt, st.per_site), *map(_fmt, st.p),
                _fmt(st.entropy),
                ";".join(str(o) for o in st.eliminated),
                _fmt(st.eliminated_amplitude), st.root_iterations,
            ])


def write_trajectory_summary(traj: ReductionTrajectory, path) -> None:
    """JSON companion: config echo, stop reason, initial spectrum."""
    cfg = asdict(traj.config)
    summary = {
        "config": cfg,
        "stop_reason": traj.stop_reason,
        "g_initial": traj.g_initial,
        "lambda_target": traj.lambda_target,
        "initial_dim": traj.initial_dim,
        "initial_values": [float(v) for v in traj.initial.values],
        "steps": len(traj.steps),
        "final_n": traj.steps[-1].n if traj.steps else traj.initial_dim,
        "final_g": traj.steps[-1].g if traj.steps else traj.g_initial,
    }
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
