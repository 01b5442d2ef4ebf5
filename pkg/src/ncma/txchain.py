"""Transmit chain: bit-to-symbol mapping and per-user differential encoding.

Each frame carries T data symbols preceded by a fixed reference sample
1+0j; information rides on phase transitions between consecutive samples,
so the receiver never needs instantaneous channel state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import IndividualConstellation


@dataclass(frozen=True, eq=False)
class SymbolFrame:
    """One user's stream of constellation indices (length T >= 1)."""

    user_id: int
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1 or len(idx) < 1:
            raise ValueError("frame needs at least one data symbol")
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)


@dataclass(frozen=True, eq=False)
class DiffFrame:
    """Differentially encoded samples, length T+1, samples[0] = 1+0j."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or len(s) < 2:
            raise ValueError("differential frame needs reference plus data")
        if abs(s[0] - 1.0) > 1e-12:
            raise ValueError("reference sample must be 1+0j")
        if np.max(np.abs(np.abs(s) - 1.0)) > 1e-12:
            raise ValueError("samples must stay on the unit circle")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)


def map_bits(bits, c: IndividualConstellation) -> SymbolFrame:
    """Group bits log2(M) at a time and map each group through c.bit_map."""
    bits = np.asarray(list(bits), dtype=np.int64)
    b = c.bits_per_symbol
    if len(bits) == 0 or len(bits) % b != 0:
        raise ValueError(
            f"bit count {len(bits)} is not a positive multiple of {b}"
        )
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    groups = bits.reshape(-1, b)
    weights = 1 << np.arange(b - 1, -1, -1)
    patterns = groups @ weights
    index_of_pattern = np.empty(c.order, dtype=np.int64)
    for idx, label in enumerate(c.bit_map):
        index_of_pattern[int(label, 2)] = idx
    return SymbolFrame(user_id=c.user_id, indices=index_of_pattern[patterns])


def diff_encode(frame: SymbolFrame, c: IndividualConstellation) -> DiffFrame:
    """samples[0] = 1; samples[t] = samples[t-1] * exp(j*phase(indices[t-1])).

    Implemented as exp(j*cumsum(phases)) so the unit modulus is exact along
    arbitrarily long frames.
    """
    idx = frame.indices
    if np.any(idx < 0) or np.any(idx >= c.order):
        raise ValueError("symbol index out of range for this constellation")
    phases = np.asarray(c.phases)[idx]
    total = np.concatenate([[0.0], np.cumsum(phases)])
    return DiffFrame(samples=np.exp(1j * total))


def random_bits(rng: np.random.Generator, count: int) -> np.ndarray:
    """Seeded pseudorandom bit source used by the CLI and the harness."""
    return rng.integers(0, 2, size=count)
