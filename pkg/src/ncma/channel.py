"""Massive-MIMO fading generation and the multi-user uplink channel.

Small-scale models:

* ``rayleigh``      h ~ CN(0, alpha_k), constant over the frame.
* ``rician``        h = sqrt(alpha*kappa/(kappa+1)) * exp(j*phi_k)
                      + sqrt(alpha/(kappa+1)) * g, with g Rayleigh and a
                    per-user LOS phase phi_k drawn once per realization.
                    kappa = 0 reproduces rayleigh draw-for-draw.
* ``gauss_markov``  h[t] = rho*h[t-1] + sqrt(1-rho^2)*w[t], stationary
                    variance alpha_k per (antenna, user) path.

The per-antenna SNR convention fixes the total complex noise power:
sigma^2 = sum_k alpha_k / 10^(snr_db/10).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

MODELS = ("rayleigh", "rician", "gauss_markov")


@dataclass(frozen=True)
class ChannelConfig:
    K: int
    R: int
    model: str
    gains: tuple[float, ...]
    snr_db: float
    seed: int = 0
    kappa: float = 0.0
    rho: float = 1.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown channel model {self.model!r}")
        if self.K < 1 or self.R < 1:
            raise ValueError("K and R must be >= 1")
        gains = tuple(float(g) for g in self.gains)
        if len(gains) != self.K or any(g <= 0.0 for g in gains):
            raise ValueError("need K positive per-user gains")
        object.__setattr__(self, "gains", gains)
        if self.kappa < 0.0:
            raise ValueError("kappa must be >= 0")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must be in [0, 1]")

    @property
    def noise_variance(self) -> float:
        """Total complex noise power sigma^2 per antenna sample."""
        if math.isinf(self.snr_db):
            return 0.0
        return sum(self.gains) / 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Per-sample complex gains H[time][antenna][user] plus noise power."""

    H: np.ndarray
    noise_variance: float

    @property
    def n_samples(self) -> int:
        return self.H.shape[0]

    @property
    def R(self) -> int:
        return self.H.shape[1]

    @property
    def K(self) -> int:
        return self.H.shape[2]


def _cn(rng: np.random.Generator, shape) -> np.ndarray:
    """Circularly-symmetric unit-variance complex Gaussian draws."""
    return math.sqrt(0.5) * (
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    )


def realize(
    cfg: ChannelConfig, T_plus_1: int, rng: np.random.Generator | None = None
) -> ChannelRealization:
    """Draw one channel realization spanning T_plus_1 samples.

    Deterministic given (cfg, seed): without an explicit generator the
    stream is seeded from cfg.seed.
    """
    if T_plus_1 < 2:
        raise ValueError("need at least reference plus one data sample")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    amp = np.sqrt(np.asarray(cfg.gains))  # (K,)

    if cfg.model in ("rayleigh", "rician"):
        kappa = cfg.kappa if cfg.model == "rician" else 0.0
        los_phase = rng.uniform(0.0, TWO_PI, size=cfg.K)
        g = _cn(rng, (cfg.R, cfg.K))
        los = math.sqrt(kappa / (kappa + 1.0)) * np.exp(1j * los_phase)
        h = amp[None, :] * (los[None, :] + math.sqrt(1.0 / (kappa + 1.0)) * g)
        H = np.broadcast_to(h, (T_plus_1, cfg.R, cfg.K))
    else:  # gauss_markov
        rho = cfg.rho
        H = np.empty((T_plus_1, cfg.R, cfg.K), dtype=complex)
        H[0] = amp[None, :] * _cn(rng, (cfg.R, cfg.K))
        w = amp[None, None, :] * _cn(rng, (T_plus_1 - 1, cfg.R, cfg.K))
        c = math.sqrt(1.0 - rho * rho)
        for t in range(1, T_plus_1):
            H[t] = rho * H[t - 1] + c * w[t - 1]
        H.flags.writeable = False

    return ChannelRealization(H=H, noise_variance=cfg.noise_variance)


def apply(
    ch: ChannelRealization, frames, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Received matrix Y[t][r] = sum_k H[t][r][k]*s_k[t] + n[t][r].

    All users transmit simultaneously; every antenna collects the
    superposition. Noise is circularly-symmetric complex Gaussian with
    total variance ch.noise_variance (skipped entirely when it is zero).
    """
    frames = list(frames)
    if len(frames) != ch.K:
        raise ValueError(f"need {ch.K} frames, got {len(frames)}")
    S = np.stack([np.asarray(f.samples) for f in frames])  # (K, T+1)
    if S.shape[1] != ch.n_samples:
        raise ValueError("frame length does not match the realization")
    Y = np.einsum("trk,kt->tr", ch.H, S)
    if ch.noise_variance > 0.0:
        if rng is None:
            raise ValueError("noise_variance > 0 requires a random stream")
        Y = Y + math.sqrt(ch.noise_variance) * _cn(rng, Y.shape)
    return Y
