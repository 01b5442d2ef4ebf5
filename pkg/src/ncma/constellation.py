"""Per-user unit-circle constellations and the additive joint constellation.

Every user modulates a phase-only constellation on the unit circle. The
receiver sees the superposition of one symbol per user, so a multi-user
design is usable only if every combination of per-user symbols lands on a
distinct joint point. This module designs per-user constellations under
equal (EEP) and unequal (UEP) error-protection criteria, builds the joint
constellation, and checks/characterizes it (uniqueness, minimum distance,
peak-to-average power ratio).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

TWO_PI = 2.0 * math.pi

# Absolute tolerance for joint-point collisions (unit-scale constellations)
# and for angular distinctness of per-user phases.
DEFAULT_TOL = 1e-9
PHASE_TOL = 1e-9


class CollisionError(ValueError):
    """Two symbol tuples map to the same joint point."""

    def __init__(self, tuple_a, tuple_b, distance):
        super().__init__(
            f"joint constellation collision: tuples {tuple_a} and {tuple_b} "
            f"coincide (distance {distance:.3e})"
        )
        self.tuple_a = tuple(tuple_a)
        self.tuple_b = tuple(tuple_b)
        self.distance = float(distance)


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


def gray_code(n: int) -> int:
    return n ^ (n >> 1)


def gray_bit_map(phases) -> tuple[str, ...]:
    """Gray-coded bit labels for a phase list.

    Labels are assigned by angular rank so that adjacent phases (sorted by
    angle, including the wrap-around pair) differ in exactly one bit. The
    returned tuple is indexed like ``phases``.
    """
    M = len(phases)
    if not _is_power_of_two(M):
        raise ValueError(f"constellation order must be a power of two, got {M}")
    width = M.bit_length() - 1
    order = np.argsort(np.asarray(phases, dtype=float))
    labels = [""] * M
    for rank, idx in enumerate(order):
        labels[int(idx)] = format(gray_code(rank), f"0{width}b")
    return tuple(labels)


def _min_circular_gap(phases: np.ndarray) -> float:
    s = np.sort(phases)
    gaps = np.diff(s)
    wrap = TWO_PI - (s[-1] - s[0])
    return float(min(gaps.min(), wrap)) if len(s) > 1 else TWO_PI


@dataclass(frozen=True)
class IndividualConstellation:
    """One user's unit-circle symbol set with Gray bit labels.

    phases are radians in [0, 2*pi), pairwise distinct; bit_map holds one
    log2(M)-bit string per phase index and is a bijection onto all patterns.
    """

    user_id: int
    phases: tuple[float, ...]
    bit_map: tuple[str, ...]
    amplitude: float = 1.0

    def __post_init__(self):
        M = len(self.phases)
        if not _is_power_of_two(M):
            raise ValueError(f"order must be a power of two >= 2, got {M}")
        ph = np.asarray(self.phases, dtype=float)
        if np.any(ph < 0.0) or np.any(ph >= TWO_PI):
            raise ValueError("phases must lie in [0, 2*pi)")
        if _min_circular_gap(ph) <= PHASE_TOL:
            raise ValueError(
                f"user {self.user_id}: phases not pairwise distinct "
                f"within {PHASE_TOL} rad"
            )
        if self.amplitude != 1.0:
            raise ValueError("amplitude is fixed at 1.0 (unit-circle symbols)")
        width = M.bit_length() - 1
        if len(self.bit_map) != M or len(set(self.bit_map)) != M:
            raise ValueError("bit_map must be a bijection over phase indices")
        for label in self.bit_map:
            if len(label) != width or set(label) - {"0", "1"}:
                raise ValueError(f"bad bit label {label!r}, want {width} bits")
        # Gray property: one-bit change between angular neighbours.
        order = np.argsort(ph)
        for a, b in zip(order[:-1], order[1:]):
            la, lb = int(self.bit_map[a], 2), int(self.bit_map[b], 2)
            if bin(la ^ lb).count("1") != 1:
                raise ValueError(
                    f"bit_map is not Gray over sorted phases "
                    f"(labels {self.bit_map[a]} and {self.bit_map[b]} adjacent)"
                )

    @property
    def order(self) -> int:
        return len(self.phases)

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    def points(self) -> np.ndarray:
        """Complex symbols amplitude * exp(j*phase), indexed like phases."""
        return self.amplitude * np.exp(1j * np.asarray(self.phases))


@dataclass(frozen=True, eq=False)
class JointConstellation:
    """Additive superposition of per-user constellations.

    points[p] = sum_k gains[k] * exp(j*phase_k(demap[p][k])) over all symbol
    tuples in lexicographic order (user 0 most significant). min_distance is
    the exact minimum pairwise Euclidean distance, computed exhaustively.
    """

    points: np.ndarray
    demap: tuple[tuple[int, ...], ...]
    gains: tuple[float, ...]
    min_distance: float
    orders: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def n_users(self) -> int:
        return len(self.orders)

    def index_of(self, symbol_tuple) -> int:
        """Lexicographic index of a per-user symbol tuple."""
        idx = 0
        for t, M in zip(symbol_tuple, self.orders):
            idx = idx * M + int(t)
        return idx


@dataclass(frozen=True, eq=False)
class DesignReport:
    """Bundle of a validated multi-user design and its figures of merit."""

    constellations: tuple[IndividualConstellation, ...]
    joint: JointConstellation
    unique: bool
    min_distance: float
    papr: float
    criterion: str


def _pairwise_min(points: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Exact minimum pairwise distance and the first (lexicographic) pair
    attaining it."""
    n = len(points)
    xy = np.column_stack([points.real, points.imag])
    d = pdist(xy)
    k = int(np.argmin(d))
    # Condensed index -> (i, j), i < j. Row i contributes n-1-i pairs.
    row_len = np.arange(n - 1, 0, -1)
    cum = np.cumsum(row_len)
    i = int(np.searchsorted(cum, k, side="right"))
    j = int(k - (cum[i - 1] if i > 0 else 0) + i + 1)
    return float(d[k]), (i, j)


def build_joint(constellations, gains) -> JointConstellation:
    """Enumerate all symbol tuples and superpose them into joint points.

    Tuples are enumerated in lexicographic order with user 0 most
    significant; every point satisfies the reconstruction identity
    point = sum_k gains[k] * exp(j*phase_k).
    """
    consts = list(constellations)
    gains = tuple(float(g) for g in gains)
    if len(gains) != len(consts):
        raise ValueError("need one gain per constellation")
    if any(g <= 0.0 for g in gains):
        raise ValueError("gains must be positive")
    if not consts:
        raise ValueError("need at least one constellation")

    acc = np.zeros(1, dtype=complex)
    for c, g in zip(consts, gains):
        contrib = g * c.points()
        acc = (acc[:, None] + contrib[None, :]).ravel()
    orders = tuple(c.order for c in consts)
    demap = tuple(itertools.product(*(range(M) for M in orders)))
    dmin, _ = _pairwise_min(acc) if len(acc) > 1 else (math.inf, (0, 0))
    acc.flags.writeable = False
    return JointConstellation(
        points=acc, demap=demap, gains=gains, min_distance=dmin, orders=orders
    )


def validate_unique(joint: JointConstellation, tol: float = DEFAULT_TOL):
    """Return None when all joint points are distinct beyond tol, otherwise
    the first colliding pair of symbol tuples (lexicographic pair order)."""
    if joint.min_distance > tol:
        return None
    _, (i, j) = _pairwise_min(joint.points)
    return (joint.demap[i], joint.demap[j])


def min_distance(joint: JointConstellation, tol: float = DEFAULT_TOL) -> float:
    """Exact minimum pairwise distance; 0.0 when a collision exists."""
    return joint.min_distance if joint.min_distance > tol else 0.0


def papr(joint: JointConstellation) -> float:
    """Peak-to-average power ratio of the joint points (linear)."""
    p2 = np.abs(joint.points) ** 2
    return float(p2.max() / p2.mean())


def papr_db(joint: JointConstellation) -> float:
    return 10.0 * math.log10(papr(joint))


def design_eep(K: int, M: int) -> list[IndividualConstellation]:
    """Equal-error-protection design: all users get uniformly spaced
    M-ary phases; user k is user 0 rotated by k * (2*pi/M) / K.

    Raises CollisionError if the resulting joint constellation (unit gains)
    has coincident points; choose different (K, M) or use optimize_offsets.
    """
    if K < 1:
        raise ValueError(f"need at least one user, got K={K}")
    if not _is_power_of_two(M):
        raise ValueError(f"order must be a power of two >= 2, got M={M}")
    step = TWO_PI / M
    rot = step / K
    consts = []
    for k in range(K):
        phases = tuple((k * rot + m * step) % TWO_PI for m in range(M))
        consts.append(
            IndividualConstellation(
                user_id=k, phases=phases, bit_map=gray_bit_map(phases)
            )
        )
    joint = build_joint(consts, [1.0] * K)
    if joint.min_distance <= DEFAULT_TOL:
        _, (i, j) = _pairwise_min(joint.points)
        raise CollisionError(joint.demap[i], joint.demap[j], joint.min_distance)
    return consts


def design_uep(K: int, M: int, gammas, offsets) -> list[IndividualConstellation]:
    """Unequal-error-protection design: user k gets phases
    offsets[k] + m * gammas[k] * (2*pi/M), m = 0..M-1.

    A smaller gamma shrinks the user's intra-constellation spacing and so
    weakens its protection. Joint uniqueness is NOT checked here; run
    validate_unique (or build a DesignReport) on the result.
    """
    gammas = [float(g) for g in gammas]
    offsets = [float(o) for o in offsets]
    if len(gammas) != K or len(offsets) != K:
        raise ValueError("need one gamma and one offset per user")
    for g in gammas:
        if not 0.0 < g <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {g}")
    step = TWO_PI / M
    consts = []
    for k in range(K):
        phases = tuple((offsets[k] + m * gammas[k] * step) % TWO_PI for m in range(M))
        consts.append(
            IndividualConstellation(
                user_id=k, phases=phases, bit_map=gray_bit_map(phases)
            )
        )
    return consts


def design_report(
    constellations, gains=None, criterion: str = "EEP", tol: float = DEFAULT_TOL
) -> DesignReport:
    """Build the joint constellation and collect design figures of merit."""
    consts = tuple(constellations)
    if gains is None:
        gains = [1.0] * len(consts)
    joint = build_joint(consts, gains)
    unique = joint.min_distance > tol
    return DesignReport(
        constellations=consts,
        joint=joint,
        unique=unique,
        min_distance=joint.min_distance if unique else 0.0,
        papr=papr(joint),
        criterion=criterion.upper(),
    )


def optimize_offsets(
    K: int, M: int, gammas, grid_resolution: float, tol: float = DEFAULT_TOL
):
    """Exhaustive grid search for base angles maximizing joint min distance.

    offsets[0] is pinned to 0; offsets[1..K-1] range over [0, 2*pi/M) in
    steps of grid_resolution, which must divide 2*pi/M evenly. Ties resolve
    to the lexicographically smallest offset vector. Unit gains are assumed.

    Returns (offsets, achieved_min_distance).
    """
    gammas = [float(g) for g in gammas]
    if len(gammas) != K:
        raise ValueError("need one gamma per user")
    if K == 1:
        consts = design_uep(1, M, gammas, [0.0])
        joint = build_joint(consts, [1.0])
        return [0.0], joint.min_distance
    span = TWO_PI / M
    n_steps = span / grid_resolution
    if abs(n_steps - round(n_steps)) > 1e-9 or round(n_steps) < 1:
        raise ValueError(
            f"grid_resolution must divide 2*pi/M evenly, got {grid_resolution}"
        )
    candidates = [i * grid_resolution for i in range(int(round(n_steps)))]
    best_offsets = None
    best_d = 0.0
    for rest in itertools.product(candidates, repeat=K - 1):
        offsets = (0.0,) + rest
        try:
            consts = design_uep(K, M, gammas, offsets)
        except ValueError:
            continue
        joint = build_joint(consts, [1.0] * K)
        d = joint.min_distance
        # Strict improvement beyond float noise keeps the first (smallest)
        # offset vector on mathematical ties.
        if d > tol and d > best_d + 1e-12:
            best_d = d
            best_offsets = offsets
    if best_offsets is None:
        raise ValueError("no injective design found")
    return list(best_offsets), best_d


# ---------------------------------------------------------------------------
# Catalog / CSV export
# ---------------------------------------------------------------------------


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def catalog_records(constellations) -> dict:
    """Design catalog as a JSON-ready dict (phases in degrees, 12 significant
    digits)."""
    records = []
    for c in constellations:
        records.append(
            {
                "user_id": c.user_id,
                "order": c.order,
                "phases_deg": [_sig12(math.degrees(p)) for p in c.phases],
                "bit_map": list(c.bit_map),
            }
        )
    return {"records": records}


def export_catalog(constellations, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(catalog_records(constellations), f, indent=2, sort_keys=True)
        f.write("\n")


def load_catalog(path) -> list[IndividualConstellation]:
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    consts = []
    for rec in doc["records"]:
        phases = tuple(math.radians(p) % TWO_PI for p in rec["phases_deg"])
        if len(phases) != rec["order"]:
            raise ValueError(f"record {rec['user_id']}: order/phase mismatch")
        consts.append(
            IndividualConstellation(
                user_id=int(rec["user_id"]),
                phases=phases,
                bit_map=tuple(rec["bit_map"]),
            )
        )
    return consts


def export_joint_csv(joint: JointConstellation, path, comment: str | None = None):
    """Joint constellation as CSV with columns tuple, re, im; the tuple is
    |-joined per-user symbol indices."""
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append("tuple,re,im")
    for tup, pt in zip(joint.demap, joint.points):
        tup_s = "|".join(str(t) for t in tup)
        lines.append(f"{tup_s},{float(pt.real)!r},{float(pt.imag)!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
