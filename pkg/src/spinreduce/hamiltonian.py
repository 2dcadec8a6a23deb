"""Sparse ladder Hamiltonians H = H0 + g*H1 and principal-submatrix restriction.

H1 carries the coupling-free matrix elements (rung bonds with coefficient 1,
leg bonds with gamma_tl = J_l/J_t, diagonal cross bonds with gamma_c =
J_c/J_t); the scalar coupling g is applied at evaluation time so that
renormalizing g never rebuilds a matrix. H0 is carried explicitly even though
it is identically zero for the ladder, keeping the reduction engine generic
in H = H0 + g*H1.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .basis import SpinBasis, enumerate_sector

BOUNDARIES = ("open", "periodic")


@dataclass(frozen=True)
class LadderConfig:
    """Geometry and couplings of the frustrated two-leg ladder."""

    L: int
    j_t: float          # rung coupling, sets the energy scale; the renormalized g
    j_l: float          # leg coupling
    j_c: float          # diagonal cross coupling
    boundary: str = "open"
    m_tot: int = 0

    def __post_init__(self):
        if self.j_t <= 0:
            raise ValueError(f"J_t must be positive, got {self.j_t}")
        if self.j_l < 0 or self.j_c < 0:
            raise ValueError("J_l and J_c must be non-negative")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")

    @property
    def gamma_tl(self) -> float:
        return self.j_l / self.j_t

    @property
    def gamma_c(self) -> float:
        return self.j_c / self.j_t


@dataclass(eq=False)
class CouplingHamiltonian:
    """Pair of sparse symmetric matrices evaluated as h0 + g*h1.

    ``labels`` records which ordinals of the *original* basis survive in
    this space; a freshly built Hamiltonian has labels = 0..dim-1.
    """

    h0: sp.csr_matrix = field(repr=False)
    h1: sp.csr_matrix = field(repr=False)
    labels: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.h1.shape[0]


def ladder_bonds(L: int, boundary: str):
    """(bit_a, bit_b, kind) for every bond; kind in {'rung', 'leg', 'diag'}."""
    bonds = [(2 * i, 2 * i + 1, "rung") for i in range(L)]
    pairs = [(i, i + 1) for i in range(L - 1)]
    if boundary == "periodic" and L > 1:
        pairs.append((L - 1, 0))
    for i, j in pairs:
        bonds.append((2 * i, 2 * j, "leg"))
        bonds.append((2 * i + 1, 2 * j + 1, "leg"))
        bonds.append((2 * i, 2 * j + 1, "diag"))
        bonds.append((2 * i + 1, 2 * j, "diag"))
    return bonds


def build_h1(basis: SpinBasis, gamma_tl: float, gamma_c: float,
             boundary: str = "open") -> sp.csr_matrix:
    """Assemble <a|H1|b> over the sector basis.

    Each bond contributes sz_i sz_j on the diagonal and a 1/2 flip term
    between configurations that are anti-aligned on the bond. Both (a, b)
    and (b, a) entries of a bond are generated in the same vectorized pass,
    so the matrix is symmetric exactly, not just to rounding.
    """
    bits = basis.configs
    dim = len(bits)
    coeff = {"rung": 1.0, "leg": gamma_tl, "diag": gamma_c}

    diag = np.zeros(dim)
    rows, cols, vals = [], [], []
    for a, b, kind in ladder_bonds(basis.L, boundary):
        c = coeff[kind]
        if c == 0.0:
            continue
        za = (bits >> np.uint64(a)) & np.uint64(1)
        zb = (bits >> np.uint64(b)) & np.uint64(1)
        aligned = za == zb
        diag += np.where(aligned, 0.25, -0.25) * c
        src = np.nonzero(~aligned)[0]
        if len(src) == 0:
            continue
        mask = np.uint64((1 << a) | (1 << b))
        flipped = bits[src] ^ mask
        tgt = np.searchsorted(bits, flipped)
        rows.append(src.astype(np.int64))
        cols.append(tgt.astype(np.int64))
        vals.append(np.full(len(src), 0.5 * c))

    rows.append(np.arange(dim, dtype=np.int64))
    cols.append(np.arange(dim, dtype=np.int64))
    vals.append(diag)
    h1 = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
    h1.sum_duplicates()
    h1.sort_indices()
    return h1


def build_ladder(cfg: LadderConfig, basis: SpinBasis | None = None):
    """Build the sector basis (unless given) and the ladder's (H0, H1).

    With g = J_t, g*h1 is the full ladder Hamiltonian in the sector; h0 is
    identically zero.
    """
    if basis is None:
        basis = enumerate_sector(cfg.L, cfg.m_tot)
    h1 = build_h1(basis, cfg.gamma_tl, cfg.gamma_c, cfg.boundary)
    h0 = sp.csr_matrix((basis.dim, basis.dim))
    H = CouplingHamiltonian(h0=h0, h1=h1, labels=np.arange(basis.dim, dtype=np.int64))
    return basis, H


def apply(H: CouplingHamiltonian, g: float, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product (h0 + g*h1) @ v."""
    v = np.asarray(v, dtype=float)
    if v.shape != (H.dim,):
        raise ValueError(f"vector length {v.shape} does not match dim {H.dim}")
    return H.h0 @ v + g * (H.h1 @ v)


def diagonal(H: CouplingHamiltonian, g: float) -> np.ndarray:
    """Diagonal entries of h0 + g*h1."""
    return H.h0.diagonal() + g * H.h1.diagonal()


def restrict(H: CouplingHamiltonian, keep) -> CouplingHamiltonian:
    """Principal submatrix on the kept positions (strictly increasing)."""
    keep = np.asarray(keep, dtype=np.int64)
    if keep.size == 0:
        raise ValueError("keep must be nonempty")
    if np.any(keep < 0) or np.any(keep >= H.dim):
        raise ValueError("keep positions out of range")
    if np.any(np.diff(keep) <= 0):
        raise ValueError("keep must be strictly increasing")
    h0 = H.h0[keep][:, keep].tocsr()
    h1 = H.h1[keep][:, keep].tocsr()
    h0.sort_indices()
    h1.sort_indices()
    return CouplingHamiltonian(h0=h0, h1=h1, labels=H.labels[keep])


def dump_matrix(H: CouplingHamiltonian, g: float, path) -> None:
    """Write h0 + g*h1 as coordinate-format text: header 'dim nnz', then rows.

    Entries are emitted in row-major order with full float precision, for
    cross-checking against independent tools.
    """
    m = (H.h0 + g * H.h1).tocoo()
    order = np.lexsort((m.col, m.row))
    with open(path, "w") as fh:
        fh.write(f"{H.dim} {m.nnz}\n")
        for i in order:
            fh.write(f"{m.row[i]} {m.col[i]} {float(m.data[i])!r}\n")
