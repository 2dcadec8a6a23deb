"""Hilbert-space reduction with coupling renormalization for spin ladders."""

__version__ = "0.1.0"

from .basis import SpinBasis, enumerate_sector, magnetization, sector_dimension
from .criticality import (
    CrossingReport,
    FixedPointCheck,
    degeneracy_gap,
    fixed_point_drift,
    scan_crossing,
)
from .eigensolver import EigenOptions, EigenResult, dense_spectrum, lowest_k
from .hamiltonian import (
    CouplingHamiltonian,
    LadderConfig,
    apply,
    build_ladder,
    diagonal,
    dump_matrix,
    restrict,
)
from .observables import accuracy_loss, ground_entropy, per_site_energy
from .reduction import (
    ReductionOptions,
    ReductionStep,
    ReductionTrajectory,
    order_by_amplitude,
    reduce_step,
    renormalize_coupling,
    run_reduction,
    write_trajectory_csv,
    write_trajectory_summary,
)

__all__ = [
    "SpinBasis", "enumerate_sector", "magnetization", "sector_dimension",
    "LadderConfig", "CouplingHamiltonian", "build_ladder", "apply",
    "diagonal", "restrict", "dump_matrix",
    "EigenOptions", "EigenResult", "lowest_k", "dense_spectrum",
    "accuracy_loss", "ground_entropy", "per_site_energy",
    "ReductionOptions", "ReductionStep", "ReductionTrajectory",
    "order_by_amplitude", "renormalize_coupling", "reduce_step",
    "run_reduction", "write_trajectory_csv", "write_trajectory_summary",
    "CrossingReport", "FixedPointCheck", "degeneracy_gap",
    "fixed_point_drift", "scan_crossing",
]
