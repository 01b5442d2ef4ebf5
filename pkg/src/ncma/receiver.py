"""Non-coherent detection from antenna-averaged differential correlation.

The statistic z[t] = (1/R) * sum_r conj(Y[t-1][r]) * Y[t][r] concentrates
on the transmitted joint-constellation point as the antenna count R grows,
with no channel state information. Detection is nearest joint point, then
per-user symbol indices through the demap table, then inverse Gray bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import DEFAULT_TOL, JointConstellation


@dataclass(frozen=True, eq=False)
class DetectionStat:
    """Point-cloud samples z (length T) and the antenna count that made them."""

    z: np.ndarray
    R_used: int

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        if z.ndim != 1 or len(z) < 1:
            raise ValueError("need at least one correlation sample")
        if not np.all(np.isfinite(z)):
            raise ValueError("non-finite correlation samples")
        z.flags.writeable = False
        object.__setattr__(self, "z", z)


@dataclass(frozen=True, eq=False)
class DetectionResult:
    joint_indices: np.ndarray
    per_user_indices: np.ndarray  # (K, T)
    per_user_bits: tuple[np.ndarray, ...] | None = None


def correlate(Y: np.ndarray, R: int | None = None) -> DetectionStat:
    """Average conj(Y[t-1])*Y[t] over the first R antennas, t = 1..T."""
    Y = np.asarray(Y)
    if Y.ndim != 2 or Y.shape[0] < 2:
        raise ValueError("received matrix needs >= 2 time samples")
    if R is None:
        R = Y.shape[1]
    if not 1 <= R <= Y.shape[1]:
        raise ValueError(f"antenna count {R} out of range")
    Yr = Y[:, :R]
    z = np.mean(np.conj(Yr[:-1]) * Yr[1:], axis=1)
    return DetectionStat(z=z, R_used=R)


def demap(stat: DetectionStat, joint: JointConstellation) -> DetectionResult:
    """Nearest-joint-point decision; ties break to the lowest point index."""
    if joint.min_distance <= DEFAULT_TOL:
        raise ValueError("joint constellation is not injective")
    d = np.abs(stat.z[:, None] - joint.points[None, :])
    ji = np.argmin(d, axis=1)
    demap_arr = np.asarray(joint.demap, dtype=np.int64)  # (P, K)
    per_user = np.ascontiguousarray(demap_arr[ji].T)
    ji.flags.writeable = False
    per_user.flags.writeable = False
    return DetectionResult(joint_indices=ji, per_user_indices=per_user)


def decide_bits(result: DetectionResult, constellations) -> list[np.ndarray]:
    """Per-user bit lists, the inverse of the transmit-side bit mapping."""
    consts = list(constellations)
    if len(consts) != result.per_user_indices.shape[0]:
        raise ValueError("need one constellation per detected user")
    out = []
    for k, c in enumerate(consts):
        b = c.bits_per_symbol
        pattern_of_index = np.array(
            [int(label, 2) for label in c.bit_map], dtype=np.int64
        )
        patterns = pattern_of_index[result.per_user_indices[k]]
        shifts = np.arange(b - 1, -1, -1)
        bits = ((patterns[:, None] >> shifts) & 1).ravel()
        out.append(bits)
    return out


def detect(
    Y: np.ndarray,
    joint: JointConstellation,
    constellations,
    R: int | None = None,
) -> DetectionResult:
    """Full chain correlate -> demap -> decide_bits."""
    stat = correlate(Y, R)
    result = demap(stat, joint)
    bits = tuple(decide_bits(result, constellations))
    return DetectionResult(
        joint_indices=result.joint_indices,
        per_user_indices=result.per_user_indices,
        per_user_bits=bits,
    )


def dump_cloud_csv(stat: DetectionStat, path, comment: str | None = None) -> None:
    """Write z samples as CSV (t, re, im) for point-cloud plots."""
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append("t,re,im")
    for t, z in enumerate(stat.z):
        lines.append(f"{t},{float(z.real)!r},{float(z.imag)!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
