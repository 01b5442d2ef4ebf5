#!/usr/bin/env python3
"""Frequency plans with the constellation set as a third color dimension.

The classic multibeam reuse color is the pair (frequency, polarization).
Treating the constellation set as one more coordinate multiplies the
distinguishable colors and the per-beam capacity while the bandwidth per
beam stays put. Scenario presets bundle ready-to-run simulation configs
for the satellite deployments this targets.
"""

import os

from ncma import satplan

OUT = os.path.join(os.path.dirname(__file__), "..", "demo_out")
os.makedirs(OUT, exist_ok=True)

print("classic four-colour scheme vs constellation-extended plan (8 beams)")
print(f"{'const sets':>10} {'colors':>7} {'BW/beam':>10} {'cap/beam':>10} {'total':>10}")
for n_sets in (1, 2):
    plan = satplan.build_plan(
        n_freq=2, n_pol=2, n_const_sets=n_sets, beam_ids=range(8),
        bandwidth_per_beam=250e6, base_capacity_per_beam=500e6,
    )
    per_beam, total = satplan.beam_capacity(plan)
    print(f"{n_sets:>10} {plan.n_colors:>7} {plan.bandwidth_per_beam/1e6:>8.0f}MHz "
          f"{per_beam/1e6:>8.0f}Mb/s {total/1e9:>8.1f}Gb/s")
print()

plan = satplan.build_plan(2, 2, 2, beam_ids=range(8))
print("beam coloring (frequency, polarization, constellation set):")
for bid, color in plan.beams:
    print(f"  beam {bid}: f{color.freq_index} {color.polarization} c{color.const_set_index}")
csv_path = os.path.join(OUT, "frequency_plan.csv")
satplan.write_plan_csv(plan, csv_path)
print(f"plan CSV: {csv_path}\n")

print("scenario presets (numbers are illustrative defaults):")
for name in satplan.PRESET_NAMES:
    p = satplan.scenario_preset(name)
    ch = p.channel
    extras = f" gammas={list(p.gammas)}" if p.gammas else ""
    print(f"  {name:18s} {p.orbit:3s} {p.link:6s} rx@{p.receiver_site:7s} "
          f"{p.criterion} K={p.users} {ch.model}(R={ch.R}){extras}")
    satplan.export_preset(p, os.path.join(OUT, f"preset_{name}.json"))
print(f"preset configs written under {OUT}")
