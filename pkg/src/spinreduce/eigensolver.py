"""Lanczos eigensolver with full reorthogonalization, plus a dense oracle.

``lowest_k`` computes the k lowest eigenpairs of h0 + g*h1 one at a time:
each pair comes from its own Lanczos run on the operator deflated against
the pairs already locked. Sequential deflation is what makes degenerate
pairs resolvable at all -- a single Krylov sequence started from one vector
only ever sees one copy of a degenerate eigenvalue, while the deflated
restart converges to the orthogonal partner directly. The cost (k short
runs instead of one) is acceptable at desk scale and is what the level
crossing diagnostics rely on.

Full reorthogonalization (two sweeps against all stored Lanczos vectors and
all locked eigenvectors) is applied at every step; selective schemes lose
orthogonality exactly in the near-degenerate spectra this package cares
about.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DimensionOverflowError, DimensionTooSmallError
from .hamiltonian import CouplingHamiltonian

DENSE_CAP = 4096

# Relative gap below which a pair is flagged degenerate for the criticality
# diagnostics.
DEGENERACY_RTOL = 1e-8


@dataclass
class EigenOptions:
    k: int = 3
    tol: float = 1e-10            # residual tolerance, relative to max(1, |lambda|)
    max_iter: int | None = None   # Krylov cap per deflation run; None -> min(dim, 500)
    seed: int = 1234

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")

    def resolved_max_iter(self, dim: int) -> int:
        return min(dim, 500) if self.max_iter is None else min(self.max_iter, dim)


@dataclass(eq=False)
class EigenResult:
    values: np.ndarray                      # ascending, shape (k,)
    vectors: np.ndarray = field(repr=False)  # (dim, k), orthonormal columns
    residuals: np.ndarray                   # ||H v - lambda v|| per pair
    iterations: int                         # total Lanczos steps over all runs
    degenerate: bool = False                # |l2 - l1| < DEGENERACY_RTOL * |l1|

    @property
    def ground(self) -> np.ndarray:
        """Ground-state amplitudes over the current basis (unit norm)."""
        return self.vectors[:, 0]


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Deterministic sign: the largest-magnitude component is positive.

    Magnitude ties within a relative 1e-12 resolve to the lowest index, so
    symmetric states like (1, -1)/sqrt(2) get a stable orientation.
    """
    a = np.abs(v)
    i = int(np.argmax(a >= a.max() * (1.0 - 1e-12)))
    return -v if v[i] < 0 else v


def _orthogonalize(w: np.ndarray, basis_rows: np.ndarray) -> np.ndarray:
    if basis_rows.shape[0]:
        w = w - basis_rows.T @ (basis_rows @ w)
    return w


def _lowest_ritz(alphas, betas):
    """Lowest eigenpair of the current tridiagonal T."""
    if len(alphas) == 1:
        return alphas[0], np.array([1.0])
    w, v = scipy.linalg.eigh_tridiagonal(
        np.asarray(alphas), np.asarray(betas), select="i", select_range=(0, 0)
    )
    return w[0], v[:, 0]


def _lanczos_lowest(matvec, dim, tol, max_iter, rng, locked, v0=None):
    """One deflated Lanczos run: lowest eigenpair orthogonal to ``locked``.

    Returns (theta, x, iterations). Raises ConvergenceError when max_iter is
    exhausted with the residual estimate still above tolerance.
    """
    free_dim = dim - locked.shape[0]
    max_iter = min(max_iter, free_dim)

    def fresh_vector(forbidden):
        for _ in range(100):
            q = rng.standard_normal(dim)
            q = _orthogonalize(q, locked)
            q = _orthogonalize(q, forbidden)
            nrm = np.linalg.norm(q)
            if nrm > 1e-8:
                return q / nrm
        raise ConvergenceError("could not draw a start vector orthogonal to locked space")

    if v0 is not None:
        q = _orthogonalize(np.array(v0, dtype=float), locked)
        nrm = np.linalg.norm(q)
        q = q / nrm if nrm > 1e-8 else fresh_vector(np.empty((0, dim)))
    else:
        q = fresh_vector(np.empty((0, dim)))

    V = np.empty((max_iter, dim))
    alphas, betas = [], []
    beta_prev = 0.0
    theta, s = np.inf, None
    converged = False

    for j in range(max_iter):
        V[j] = q
        w = matvec(q)
        alpha = float(q @ w)
        alphas.append(alpha)
        w = w - alpha * q
        if j > 0:
            w = w - beta_prev * V[j - 1]
        for _ in range(2):
            w = _orthogonalize(w, locked)
            w = _orthogonalize(w, V[: j + 1])

        theta, s = _lowest_ritz(alphas, betas)
        beta = float(np.linalg.norm(w))
        scale = max(1.0, max(abs(a) for a in alphas))
        if beta <= 1e-13 * scale:
            # Invariant subspace. A zero-residual Ritz pair here proves only
            # that the pair is exact within the subspace reached so far, not
            # that it is extremal, so restart with a fresh seeded vector
            # (recorded as a zero coupling in T) and keep exploring. The
            # vector converged on a previous block is accepted one step
            # later through the block-decoupled residual estimate.
            if j + 1 == max_iter:
                break
            betas.append(0.0)
            beta_prev = 0.0
            q = fresh_vector(V[: j + 1])
            continue
        resid_est = beta * abs(s[-1])
        if resid_est <= tol * max(1.0, abs(theta)):
            converged = True
            break
        if j + 1 == max_iter:
            break
        betas.append(beta)
        beta_prev = beta
        q = w / beta

    iterations = len(alphas)
    # A Krylov space that spans the whole deflated space is exact there.
    if not converged and iterations < free_dim:
        raise ConvergenceError(
            f"Lanczos did not converge in {iterations} iterations "
            f"(residual estimate above tolerance)",
            residuals=np.array([beta * abs(s[-1])]),
        )
    x = V[:iterations].T @ s
    x = _orthogonalize(x, locked)
    x /= np.linalg.norm(x)
    return float(theta), x, iterations


def lowest_k(H: CouplingHamiltonian, g: float, opts: EigenOptions | None = None,
             v0=None) -> EigenResult:
    """k lowest eigenpairs of h0 + g*h1 by deflated Lanczos.

    ``v0`` optionally provides start vectors (shape (dim,) or (dim, m)) for
    the successive deflation runs -- used by the reduction loop to warm-start
    from the previous step's eigenvectors. Results are deterministic for
    fixed options, seed and start vectors.
    """
    opts = opts or EigenOptions()
    dim = H.dim
    if opts.k > dim:
        raise DimensionTooSmallError(f"k={opts.k} exceeds dimension {dim}")

    if H.h0.nnz == 0:
        op = (g * H.h1).tocsr() if g != 1.0 else H.h1
    else:
        op = (H.h0 + g * H.h1).tocsr()
    matvec = op.dot

    starts = None
    if v0 is not None:
        starts = np.atleast_2d(np.asarray(v0, dtype=float).T).T  # (dim, m)

    rng = np.random.default_rng(opts.seed)
    max_iter = opts.resolved_max_iter(dim)
    values, vectors = [], []
    total_iters = 0
    locked = np.empty((0, dim))
    for r in range(opts.k):
        start = None
        if starts is not None and r < starts.shape[1]:
            start = starts[:, r]
        theta, x, iters = _lanczos_lowest(
            matvec, dim, opts.tol, max_iter, rng, locked, v0=start
        )
        values.append(theta)
        vectors.append(x)
        total_iters += iters
        locked = np.vstack([locked, x])

    order = np.argsort(np.asarray(values), kind="stable")
    values = np.asarray(values)[order]
    vectors = np.column_stack([_fix_sign(vectors[i]) for i in order])
    residuals = np.array(
        [np.linalg.norm(matvec(vectors[:, i]) - values[i] * vectors[:, i])
         for i in range(opts.k)]
    )
    degenerate = bool(
        opts.k >= 2 and values[1] - values[0] < DEGENERACY_RTOL * max(abs(values[0]), 1e-300)
    )
    return EigenResult(
        values=values,
        vectors=vectors,
        residuals=residuals,
        iterations=total_iters,
        degenerate=degenerate,
    )


def dense_spectrum(H: CouplingHamiltonian, g: float) -> np.ndarray:
    """Full ascending spectrum by dense diagonalization (oracle path)."""
    if H.dim > DENSE_CAP:
        raise DimensionOverflowError(
            f"dense solve capped at {DENSE_CAP}, got dim {H.dim}"
        )
    m = (H.h0 + g * H.h1).toarray()
    return np.linalg.eigvalsh(m)
