#!/usr/bin/env python3
"""Hybrid access: share slots orthogonally, multiplex constellations inside.

Four users over one TDMA frame. Pure TDMA (group size 1) gives each user a
quarter of the air time. Grouping two users per slot, separated only by
their constellations, halves the slot count and doubles every user's rate
with the same bandwidth. The threshold search answers "how far can I push
the group size before the SER target breaks?" by simulating one
representative group per candidate.
"""

from ncma import hybrid
from ncma.channel import ChannelConfig

N, M = 4, 4

print("group-size accounting for 4 users, QPSK, T = 100 symbols/frame")
print(f"{'g':>3} {'groups':>8} {'slot':>6} {'rate/user':>10} {'sum rate':>9}")
for g in (1, 2, 4):
    plan = hybrid.make_plan(N, g, M)
    r = hybrid.rates(plan, symbols_per_frame=100)
    print(f"{g:>3} {len(plan.groups):>8} {plan.slot_fractions[0]:>6.2f} "
          f"{float(r[0]):>10.4f} {hybrid.sum_rate(plan, 100):>9.4f}")
print()

print("threshold search, candidates {1, 2, 4}, target SER 0.05")
for snr_db in (30.0, 10.0, -60.0):
    channel = ChannelConfig(K=1, R=64, model="rayleigh", gains=(1.0,), snr_db=snr_db)
    report = hybrid.threshold_search(
        N, [1, 2, 4], M, channel, target_ser=0.05,
        seed=42, min_errors=100, max_trials=60,
    )
    rows = "  ".join(
        f"g={row.g}: ser={row.worst_ser:.4f} rate={row.sum_rate:.2f}"
        for row in report.rows
    )
    verdict = f"best g = {report.best_g}" + (" (fallback)" if report.fallback else "")
    print(f"  snr {snr_db:6.1f} dB -> {verdict}")
    print(f"    {rows}")
