"""Bit-encoded spin-1/2 product bases in a fixed total-magnetization sector.

Encoding: the ladder has L rungs and two legs; site i of leg k (i in [0, L),
k in {1, 2}) lives on bit 2*i + (k - 1), so the two sites of a rung occupy
adjacent bits. Bit value 1 means m = +1/2, bit value 0 means m = -1/2. A
configuration is just a Python int / np.uint64 of its bits; there is no
wrapper class.

A sector is the set of all configurations with a given total S^z projection
M_tot = (#up - #down)/2 = popcount(bits) - L, enumerated in strictly
increasing bit order.
"""

from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np

from .errors import DimensionOverflowError, EmptySectorError

# Safety cap on sector sizes; enumeration and matrix build are desk-scale.
DIMENSION_CAP = 10_000_000

# Hardware guard: bits must fit comfortably in uint64 and dense tooling.
MAX_LEG_LENGTH = 16

#: A spin configuration is a plain unsigned integer of its bits.
SpinConfig = int


def site_bit(i: int, k: int) -> int:
    """Bit position of site i on leg k (k in {1, 2})."""
    return 2 * i + (k - 1)


def magnetization(bits: SpinConfig, L: int) -> int:
    """Total S^z of a configuration: sum of m_i = popcount - L."""
    bits = int(bits)
    if bits < 0 or bits >> (2 * L):
        raise ValueError(f"configuration {bits:#x} has bits outside 2L={2 * L} sites")
    return bits.bit_count() - L


@dataclass(eq=False)
class SpinBasis:
    """Ordered sector basis: all configurations with fixed M_tot.

    ``configs`` is strictly increasing, so positional lookup is binary
    search; ``index`` materializes the inverse map lazily.
    """

    L: int
    m_tot: int
    configs: np.ndarray = field(repr=False)  # uint64, strictly increasing

    @property
    def dim(self) -> int:
        return len(self.configs)

    def __len__(self) -> int:
        return len(self.configs)

    @cached_property
    def index(self) -> dict:
        """Map bits -> ordinal position (inverse of ``configs``)."""
        return {int(b): p for p, b in enumerate(self.configs)}

    def position(self, bits: SpinConfig) -> int:
        """Ordinal of a configuration, raising KeyError if absent."""
        p = int(np.searchsorted(self.configs, np.uint64(bits)))
        if p == len(self.configs) or int(self.configs[p]) != int(bits):
            raise KeyError(f"configuration {int(bits):#x} not in sector")
        return p


def sector_dimension(L: int, m_tot) -> int:
    """Number of configurations with magnetization m_tot (0 if unreachable)."""
    n_up = L + m_tot
    if n_up != int(n_up):
        return 0
    n_up = int(n_up)
    if not 0 <= n_up <= 2 * L:
        return 0
    return comb(2 * L, n_up)


def enumerate_sector(L: int, m_tot, cap: int = DIMENSION_CAP) -> SpinBasis:
    """Enumerate the M_tot sector in strictly increasing bit order.

    Uses Gosper's hack to walk all 2L-bit words with fixed popcount
    L + m_tot, which visits them in ascending order by construction.
    """
    if not 1 <= L <= MAX_LEG_LENGTH:
        raise ValueError(f"L must be in [1, {MAX_LEG_LENGTH}], got {L}")
    if abs(m_tot) > L:
        raise EmptySectorError(f"|M_tot|={abs(m_tot)} exceeds L={L}")
    dim = sector_dimension(L, m_tot)
    if dim == 0:
        raise EmptySectorError(f"M_tot={m_tot} is not reachable for L={L}")
    if dim > cap:
        raise DimensionOverflowError(
            f"sector size {dim} exceeds cap {cap} (L={L}, M_tot={m_tot})"
        )

    n_up = int(L + m_tot)
    configs = np.empty(dim, dtype=np.uint64)
    if n_up == 0:
        configs[0] = 0
    else:
        x = (1 << n_up) - 1
        for p in range(dim):
            configs[p] = x
            # Gosper's hack: next integer with the same popcount.
            u = x & (-x)
            v = x + u
            x = v | (((x ^ v) >> 2) // u)
    return SpinBasis(L=L, m_tot=m_tot, configs=configs)
