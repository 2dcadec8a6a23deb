"""Accuracy-loss percentages and the amplitude entropy of the ground state."""

import numpy as np

from .errors import NormalizationError


def per_site_energy(lam: float, L: int) -> float:
    """Reported energy density e = lambda / L (one unit per rung).

    This is the normalization under which the rung-singlet product state of
    the L-rung ladder sits at exactly -(3/4) J_t, the reference value the
    critical-point diagnostics are calibrated against.
    """
    return lam / L


def accuracy_loss(e_ref: float, e_now: float) -> float:
    """Percentage deviation |(e_ref - e_now)/e_ref| * 100."""
    if abs(e_ref) < 1e-30:
        raise ZeroDivisionError("reference energy too close to zero")
    return abs((e_ref - e_now) / e_ref) * 100.0


def ground_entropy(ground: np.ndarray, L: int) -> float:
    """Shannon entropy of the amplitude weights, in nats per site (2L sites).

    s = -(1/2L) sum_i P_i ln P_i with P_i = |a_i|^2; zero weights contribute
    zero by continuity.
    """
    a = np.asarray(ground, dtype=float)
    nrm = np.linalg.norm(a)
    if abs(nrm - 1.0) > 1e-8:
        raise NormalizationError(f"amplitude vector has norm {nrm!r}, expected 1")
    p = a * a
    p = p[p > 0.0]
    return float(-(p @ np.log(p)) / (2 * L))
