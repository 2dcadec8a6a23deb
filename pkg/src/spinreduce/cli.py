"""Command-line driver: spectrum, reduce, scan and oracle-check experiments.

Every command reads one flat key = value config file, writes its artifacts
plus a resolved_config.txt echo into --out, and exits 0 on success or
nonzero with a machine-readable error JSON on stdout.
"""

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import __version__
from .basis import enumerate_sector
from .config import RunConfig, echo_text, load_config
from .criticality import scan_crossing
from .eigensolver import EigenOptions, dense_spectrum, lowest_k
from .errors import ConfigError, SpinReduceError
from .hamiltonian import LadderConfig, build_ladder
from .reduction import (
    ReductionOptions,
    run_reduction,
    write_trajectory_csv,
    write_trajectory_summary,
)

ORACLE_TOLERANCE = 1e-8


@dataclass
class RunManifest:
    command: str
    config_path: str
    out_dir: str
    echo: RunConfig


def _ladder_config(cfg: RunConfig) -> LadderConfig:
    return LadderConfig(L=cfg.L, j_t=cfg.j_t, j_l=cfg.j_l, j_c=cfg.j_c,
                        boundary=cfg.boundary, m_tot=cfg.m_tot)


def _eigen_options(cfg: RunConfig) -> EigenOptions:
    return EigenOptions(k=cfg.k, tol=cfg.tol, max_iter=cfg.max_iter, seed=cfg.seed)


def _reduction_options(cfg: RunConfig) -> ReductionOptions:
    return ReductionOptions(n_min=cfg.n_min, p_max=cfg.p_max, batch=cfg.batch,
                            batch_frac=cfg.batch_frac, batch_floor=cfg.batch_floor)


def _write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _run_spectrum(cfg: RunConfig, out: Path) -> None:
    basis, H = build_ladder(_ladder_config(cfg))
    res = lowest_k(H, cfg.j_t, _eigen_options(cfg))
    payload = {
        "dim": H.dim,
        "g": cfg.j_t,
        "lanczos": {
            "values": [float(v) for v in res.values],
            "residuals": [float(r) for r in res.residuals],
            "iterations": res.iterations,
            "degenerate": res.degenerate,
        },
        "dense_lowest": None,
        "max_deviation": None,
    }
    if H.dim <= 4096:
        dense = dense_spectrum(H, cfg.j_t)[: cfg.k]
        payload["dense_lowest"] = [float(v) for v in dense]
        payload["max_deviation"] = float(np.max(np.abs(dense - res.values)))
    _write_json(out / "spectrum.json", payload)


def _run_reduce(cfg: RunConfig, out: Path) -> None:
    traj = run_reduction(_ladder_config(cfg), _eigen_options(cfg),
                         _reduction_options(cfg))
    write_trajectory_csv(traj, out / "trajectory.csv")
    write_trajectory_summary(traj, out / "summary.json")


def _run_scan(cfg: RunConfig, out: Path) -> None:
    report = scan_crossing(
        _ladder_config(cfg), cfg.scan_from, cfg.scan_to, cfg.scan_points,
        eopts=_eigen_options(cfg), csv_path=out / "gap_curve.csv",
    )
    _write_json(out / "crossing.json", {
        "parameter_path": report.parameter_path,
        "g_e": report.g_e,
        "min_gap": report.min_gap,
        "bracket": list(report.bracket),
        "ratio": report.ratio,
        "lambda1": report.lambda1,
        "is_crossing": report.is_crossing,
    })


def _run_oracle_check(cfg: RunConfig, out: Path) -> None:
    checks = []
    worst = 0.0
    for L in (1, 2, 3):
        for m_tot in range(-L, L + 1):
            basis = enumerate_sector(L, m_tot)
            lcfg = LadderConfig(L=L, j_t=cfg.j_t, j_l=cfg.j_l, j_c=cfg.j_c,
                                boundary=cfg.boundary, m_tot=m_tot)
            _, H = build_ladder(lcfg, basis)
            k = min(cfg.k, H.dim)
            opts = EigenOptions(k=k, tol=cfg.tol, max_iter=cfg.max_iter,
                                seed=cfg.seed)
            lanczos = lowest_k(H, cfg.j_t, opts).values
            dense = dense_spectrum(H, cfg.j_t)[:k]
            dev = float(np.max(np.abs(lanczos - dense)))
            worst = max(worst, dev)
            checks.append({"L": L, "M_tot": m_tot, "dim": H.dim, "max_dev": dev})
    passed = worst <= ORACLE_TOLERANCE
    _write_json(out / "oracle_check.json", {
        "checks": checks,
        "max_deviation": worst,
        "tolerance": ORACLE_TOLERANCE,
        "passed": passed,
    })
    if not passed:
        raise SpinReduceError(
            f"dense-vs-Lanczos deviation {worst:.3e} exceeds {ORACLE_TOLERANCE:.0e}"
        )


_RUNNERS = {
    "spectrum": _run_spectrum,
    "reduce": _run_reduce,
    "scan": _run_scan,
    "oracle-check": _run_oracle_check,
}


def execute(manifest: RunManifest) -> int:
    """Run one command; returns the process exit status."""
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "resolved_config.txt", "w") as fh:
        fh.write(echo_text(manifest.echo))
    _RUNNERS[manifest.command](manifest.echo, out)
    return 0


def _dispatch(command: str, config_path: str, out_dir: str, seed) -> None:
    try:
        cfg = load_config(config_path, command)
        if seed is not None:
            cfg.seed = seed
        manifest = RunManifest(command=command, config_path=str(config_path),
                               out_dir=str(out_dir), echo=cfg)
        code = execute(manifest)
    except ConfigError as exc:
        click.echo(json.dumps({"error": {"type": "ConfigError", "message": str(exc)}}))
        sys.exit(2)
    except (SpinReduceError, ValueError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        click.echo(json.dumps(
            {"error": {"type": type(exc).__name__, "message": str(exc)}}
        ))
        sys.exit(1)
    sys.exit(code)


def _common_options(fn):
    fn = click.option("--config", "config_path", required=True,
                      type=click.Path(), help="Flat key = value config file.")(fn)
    fn = click.option("--out", "out_dir", required=True, type=click.Path(),
                      help="Output directory (created if absent).")(fn)
    fn = click.option("--seed", type=int, default=None,
                      help="Override the config seed.")(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="spinreduce")
def main():
    """Hilbert-space reduction experiments on frustrated spin ladders."""


@main.command()
@_common_options
def spectrum(config_path, out_dir, seed):
    """Lowest eigenvalues by Lanczos, with a dense cross-check if feasible."""
    _dispatch("spectrum", config_path, out_dir, seed)


@main.command()
@_common_options
def reduce(config_path, out_dir, seed):
    """Run the space-reduction flow; writes trajectory.csv and summary.json."""
    _dispatch("reduce", config_path, out_dir, seed)


@main.command()
@_common_options
def scan(config_path, out_dir, seed):
    """Scan the gap along J_l = J_c and locate a level crossing."""
    _dispatch("scan", config_path, out_dir, seed)


@main.command(name="oracle-check")
@_common_options
def oracle_check(config_path, out_dir, seed):
    """Dense-vs-Lanczos agreement over every small sector (L <= 3)."""
    _dispatch("oracle-check", config_path, out_dir, seed)


if __name__ == "__main__":
    main()
