"""Seeded Monte-Carlo harness for per-user SER/BER with Wilson intervals.

Every trial derives its own random stream from (seed, stream_index,
trial_index), so serial and parallel execution produce bit-identical
counts. Trials run in fixed-size batches; the stopping rule (every user
reached min_errors symbol errors, or max_trials) is evaluated only at
batch boundaries so the executed trial set never depends on worker count.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import channel as chan
from . import receiver, txchain
from .constellation import DesignReport, design_eep, design_report

SWEEP_AXES = ("snr_db", "R", "rho", "kappa", "K")

_BATCH_TRIALS = 8  # stopping-rule granularity, independent of worker count
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SimPoint:
    design: DesignReport
    channel: chan.ChannelConfig
    frames_per_trial: int = 10
    max_trials: int = 1000
    min_errors: int = 100
    seed: int = 0
    symbols_per_frame: int = 100

    def __post_init__(self):
        if self.min_errors < 1 or self.max_trials < 1:
            raise ValueError("min_errors and max_trials must be >= 1")
        if self.frames_per_trial < 1 or self.symbols_per_frame < 1:
            raise ValueError("frames_per_trial and symbols_per_frame must be >= 1")


@dataclass(frozen=True, eq=False)
class SimResult:
    per_user_ser: np.ndarray
    per_user_ber: np.ndarray
    ci95_halfwidth: np.ndarray
    symbols_counted: np.ndarray
    errors_counted: np.ndarray
    bits_counted: np.ndarray
    bit_errors_counted: np.ndarray
    trials_run: int
    wall_time: float

    @property
    def n_users(self) -> int:
        return len(self.per_user_ser)


def wilson_interval(errors: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson 95% score interval for an error proportion."""
    if n <= 0:
        return 0.0, 1.0
    p = errors / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == n else min(1.0, center + half)
    return lo, hi


def _run_trial(point: SimPoint, stream_index: int, trial_index: int):
    """One independent trial; returns per-user (errors, bit_errors) counts."""
    rng = np.random.default_rng([point.seed, stream_index, trial_index])
    consts = point.design.constellations
    joint = point.design.joint
    K = len(consts)
    T = point.symbols_per_frame
    errors = np.zeros(K, dtype=np.int64)
    bit_errors = np.zeros(K, dtype=np.int64)
    for _ in range(point.frames_per_trial):
        tx_indices = []
        tx_bits = []
        frames = []
        for c in consts:
            bits = txchain.random_bits(rng, T * c.bits_per_symbol)
            sf = txchain.map_bits(bits, c)
            frames.append(txchain.diff_encode(sf, c))
            tx_indices.append(sf.indices)
            tx_bits.append(bits)
        realization = chan.realize(point.channel, T + 1, rng)
        Y = chan.apply(realization, frames, rng)
        det = receiver.detect(Y, joint, consts)
        for k in range(K):
            errors[k] += int(np.count_nonzero(det.per_user_indices[k] != tx_indices[k]))
            bit_errors[k] += int(np.count_nonzero(det.per_user_bits[k] != tx_bits[k]))
    return errors, bit_errors


def run_point(point: SimPoint, stream_index: int = 0, workers: int = 1) -> SimResult:
    """Accumulate trials until every user has min_errors symbol errors or
    max_trials is reached; refuses non-injective designs."""
    if not point.design.unique:
        raise ValueError("non-injective design")
    if len(point.design.constellations) != point.channel.K:
        raise ValueError("design and channel disagree on the user count")
    t0 = time.perf_counter()
    K = point.channel.K
    errors = np.zeros(K, dtype=np.int64)
    bit_errors = np.zeros(K, dtype=np.int64)
    trials_run = 0
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while trials_run < point.max_trials:
            batch = range(trials_run, min(trials_run + _BATCH_TRIALS, point.max_trials))
            if executor is not None:
                outs = list(
                    executor.map(lambda i: _run_trial(point, stream_index, i), batch)
                )
            else:
                outs = [_run_trial(point, stream_index, i) for i in batch]
            for e, be in outs:
                errors += e
                bit_errors += be
            trials_run = batch.stop
            if int(errors.min()) >= point.min_errors:
                break
    finally:
        if executor is not None:
            executor.shutdown()

    symbols_per_user = trials_run * point.frames_per_trial * point.symbols_per_frame
    symbols = np.full(K, symbols_per_user, dtype=np.int64)
    bits = np.array(
        [symbols_per_user * c.bits_per_symbol for c in point.design.constellations],
        dtype=np.int64,
    )
    ser = errors / symbols
    ber = bit_errors / bits
    half = np.array(
        [
            (lambda lo_hi: (lo_hi[1] - lo_hi[0]) / 2.0)(
                wilson_interval(int(errors[k]), int(symbols[k]))
            )
            for k in range(K)
        ]
    )
    return SimResult(
        per_user_ser=ser,
        per_user_ber=ber,
        ci95_halfwidth=half,
        symbols_counted=symbols,
        errors_counted=errors,
        bits_counted=bits,
        bit_errors_counted=bit_errors,
        trials_run=trials_run,
        wall_time=time.perf_counter() - t0,
    )


def _point_on_axis(base: SimPoint, axis: str, value) -> SimPoint:
    cfg = base.channel
    if axis == "snr_db":
        return replace(base, channel=replace(cfg, snr_db=float(value)))
    if axis == "R":
        return replace(base, channel=replace(cfg, R=int(value)))
    if axis == "rho":
        return replace(base, channel=replace(cfg, model="gauss_markov", rho=float(value)))
    if axis == "kappa":
        return replace(base, channel=replace(cfg, model="rician", kappa=float(value)))
    if axis == "K":
        # Redesign for the new user count: EEP at the base order, unit gains.
        K = int(value)
        M = base.design.constellations[0].order
        report = design_report(design_eep(K, M), criterion="EEP")
        return replace(
            base,
            design=report,
            channel=replace(cfg, K=K, gains=(1.0,) * K),
        )
    raise ValueError(f"unknown sweep axis {axis!r}, want one of {SWEEP_AXES}")


def sweep(base: SimPoint, axis: str, values, workers: int = 1):
    """One run_point per axis value; point i uses random stream index i."""
    values = list(values)
    if not values:
        raise ValueError("values must be non-empty")
    if values != sorted(values):
        raise ValueError("values must be sorted ascending")
    results = []
    for i, v in enumerate(values):
        point = _point_on_axis(base, axis, v)
        results.append((v, run_point(point, stream_index=i, workers=workers)))
    return results


def write_results_csv(path, results, config: dict | None = None) -> None:
    """Result table as CSV: axis_value, user_id, ser, ber, ci95, symbols,
    errors. Deterministic row order; optional leading config comment."""
    lines = []
    if config is not None:
        lines.append("# config: " + json.dumps(config, sort_keys=True))
    lines.append("axis_value,user_id,ser,ber,ci95,symbols,errors")
    for value, res in results:
        value_s = repr(float(value)) if isinstance(value, float) else str(value)
        for k in range(res.n_users):
            lines.append(
                ",".join(
                    [
                        value_s,
                        str(k),
                        repr(float(res.per_user_ser[k])),
                        repr(float(res.per_user_ber[k])),
                        repr(float(res.ci95_halfwidth[k])),
                        str(int(res.symbols_counted[k])),
                        str(int(res.errors_counted[k])),
                    ]
                )
            )
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
