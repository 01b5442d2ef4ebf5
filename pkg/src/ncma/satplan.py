"""Multibeam frequency plans with the constellation set as a third color
dimension, plus scenario presets for satellite deployments.

A classic reuse color is (frequency, polarization); adding a constellation
set index multiplies the distinguishable colors and the per-beam capacity
without touching the bandwidth per beam.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .channel import ChannelConfig

POLARIZATIONS = ("RHCP", "LHCP")

PRESET_NAMES = (
    "vsat_uplink",
    "mega_leo_gw",
    "mega_leo_maritime",
    "terrestrial_ntn",
)

# Preset numeric values (K, kappa, rho, R, SNR) are illustrative defaults
# for desk-scale runs, not measured or published figures.
PRESET_NOTE = "numeric values are illustrative defaults, not performance claims"


@dataclass(frozen=True)
class Color:
    freq_index: int
    polarization: str
    const_set_index: int

    def __post_init__(self):
        if self.freq_index < 0 or self.const_set_index < 0:
            raise ValueError("color indices must be nonnegative")
        if self.polarization not in POLARIZATIONS:
            raise ValueError(f"unknown polarization {self.polarization!r}")


@dataclass(frozen=True, eq=False)
class FrequencyPlan:
    n_freq: int
    n_pol: int
    n_const_sets: int
    beams: tuple[tuple[int, Color], ...]
    bandwidth_per_beam: float
    base_capacity_per_beam: float

    def __post_init__(self):
        if self.n_pol not in (1, 2):
            raise ValueError("n_pol must be 1 or 2")
        if self.n_freq < 1 or self.n_const_sets < 1:
            raise ValueError("n_freq and n_const_sets must be >= 1")
        for _, color in self.beams:
            if (
                color.freq_index >= self.n_freq
                or POLARIZATIONS.index(color.polarization) >= self.n_pol
                or color.const_set_index >= self.n_const_sets
            ):
                raise ValueError(f"beam color {color} out of plan bounds")

    @property
    def n_colors(self) -> int:
        return self.n_freq * self.n_pol * self.n_const_sets


def _color_from_index(i: int, n_freq: int, n_pol: int) -> Color:
    # Pattern order: frequency fastest, then polarization, then set.
    freq = i % n_freq
    pol = (i // n_freq) % n_pol
    cset = i // (n_freq * n_pol)
    return Color(freq_index=freq, polarization=POLARIZATIONS[pol], const_set_index=cset)


def build_plan(
    n_freq: int,
    n_pol: int,
    n_const_sets: int,
    beam_ids,
    assignment=None,
    bandwidth_per_beam: float = 250e6,
    base_capacity_per_beam: float = 500e6,
) -> FrequencyPlan:
    """Assign colors to beams cyclically.

    assignment, when given, is a repeat pattern of color indices (each in
    [0, n_freq*n_pol*n_const_sets)); the default cycles through all colors
    in order.
    """
    beam_ids = list(beam_ids)
    if not beam_ids:
        raise ValueError("need at least one beam")
    if n_freq < 1 or n_const_sets < 1 or n_pol not in (1, 2):
        raise ValueError("need n_freq, n_const_sets >= 1 and n_pol in {1, 2}")
    n_colors = n_freq * n_pol * n_const_sets
    if assignment is None:
        pattern = list(range(n_colors))
    else:
        pattern = [int(a) for a in assignment]
        if not pattern or any(not 0 <= a < n_colors for a in pattern):
            raise ValueError("assignment entries must be valid color indices")
    beams = tuple(
        (bid, _color_from_index(pattern[i % len(pattern)], n_freq, n_pol))
        for i, bid in enumerate(beam_ids)
    )
    return FrequencyPlan(
        n_freq=n_freq,
        n_pol=n_pol,
        n_const_sets=n_const_sets,
        beams=beams,
        bandwidth_per_beam=float(bandwidth_per_beam),
        base_capacity_per_beam=float(base_capacity_per_beam),
    )


def beam_capacity(plan: FrequencyPlan) -> tuple[float, float]:
    """(per-beam, total) capacity. Every beam multiplies its base capacity
    by the number of constellation sets; bandwidth per beam is unchanged."""
    per_beam = plan.base_capacity_per_beam * plan.n_const_sets
    return per_beam, per_beam * len(plan.beams)


def write_plan_csv(plan: FrequencyPlan, path, config: dict | None = None) -> None:
    per_beam, _ = beam_capacity(plan)
    lines = []
    if config is not None:
        lines.append("# config: " + json.dumps(config, sort_keys=True))
    lines.append("beam_id,freq_index,polarization,const_set_index,capacity")
    for bid, color in plan.beams:
        lines.append(
            f"{bid},{color.freq_index},{color.polarization},"
            f"{color.const_set_index},{per_beam!r}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ScenarioPreset:
    """Bundled simulation plus plan configuration for one deployment."""

    name: str
    orbit: str
    link: str
    receiver_site: str
    criterion: str
    users: int
    order: int
    gammas: tuple[float, ...] | None
    offsets_deg: tuple[float, ...] | None
    channel: ChannelConfig
    n_freq: int
    n_pol: int
    n_const_sets: int
    n_beams: int
    note: str = PRESET_NOTE


def scenario_preset(name: str) -> ScenarioPreset:
    """Preset configs for the supported deployment scenarios."""
    if name == "vsat_uplink":
        return ScenarioPreset(
            name=name,
            orbit="GEO",
            link="uplink",
            receiver_site="payload",
            criterion="EEP",
            users=4,
            order=4,
            gammas=None,
            offsets_deg=None,
            channel=ChannelConfig(
                K=4, R=128, model="rician", gains=(1.0,) * 4, snr_db=10.0, kappa=10.0
            ),
            n_freq=2,
            n_pol=2,
            n_const_sets=2,
            n_beams=8,
        )
    if name == "mega_leo_gw":
        return ScenarioPreset(
            name=name,
            orbit="LEO",
            link="uplink",
            receiver_site="payload",
            criterion="EEP",
            users=2,
            order=4,
            gammas=None,
            offsets_deg=None,
            channel=ChannelConfig(
                K=2, R=256, model="rician", gains=(1.0,) * 2, snr_db=10.0, kappa=5.0
            ),
            n_freq=2,
            n_pol=2,
            n_const_sets=2,
            n_beams=8,
        )
    if name == "mega_leo_maritime":
        return ScenarioPreset(
            name=name,
            orbit="LEO",
            link="uplink",
            receiver_site="payload",
            criterion="EEP",
            users=4,
            order=4,
            gammas=None,
            offsets_deg=None,
            channel=ChannelConfig(
                K=4, R=128, model="gauss_markov", gains=(1.0,) * 4, snr_db=10.0,
                rho=0.99,
            ),
            n_freq=2,
            n_pol=2,
            n_const_sets=2,
            n_beams=8,
        )
    if name == "terrestrial_ntn":
        # One terrestrial and one NTN user with tiered protection.
        return ScenarioPreset(
            name=name,
            orbit="LEO",
            link="uplink",
            receiver_site="ground",
            criterion="UEP",
            users=2,
            order=4,
            gammas=(1.0, 0.7),
            offsets_deg=(0.0, 22.5),
            channel=ChannelConfig(
                K=2, R=64, model="rayleigh", gains=(1.0,) * 2, snr_db=10.0
            ),
            n_freq=2,
            n_pol=2,
            n_const_sets=2,
            n_beams=8,
        )
    raise ValueError(f"unknown scenario preset {name!r}, want one of {PRESET_NAMES}")


def preset_to_config(preset: ScenarioPreset) -> dict:
    """Complete config document: a flat key space per command."""
    ch = preset.channel
    simulate = {
        "criterion": preset.criterion.lower(),
        "users": preset.users,
        "order": preset.order,
        "model": ch.model,
        "antennas": ch.R,
        "snr_db": ch.snr_db,
        "kappa": ch.kappa,
        "rho": ch.rho,
        "gains": list(ch.gains),
    }
    if preset.gammas is not None:
        simulate["gammas"] = list(preset.gammas)
    if preset.offsets_deg is not None:
        simulate["offsets"] = list(preset.offsets_deg)
    plan = {
        "freq": preset.n_freq,
        "pol": preset.n_pol,
        "constellations": preset.n_const_sets,
        "beams": preset.n_beams,
    }
    return {
        "name": preset.name,
        "orbit": preset.orbit,
        "link": preset.link,
        "receiver_site": preset.receiver_site,
        "note": preset.note,
        "simulate": simulate,
        "plan": plan,
    }


def export_preset(preset: ScenarioPreset, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(preset_to_config(preset), f, indent=2, sort_keys=True)
        f.write("\n")
