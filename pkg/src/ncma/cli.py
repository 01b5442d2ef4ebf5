"""Command-line front end.

Subcommands: design, validate, simulate, sweep, hybrid, plan, preset,
dump-cloud. Exit codes: 0 success, 1 domain refusal (e.g. a colliding
design), 2 usage error. Angles are degrees on the command line and radians
internally. The default seed comes from --seed, then the NCMA_SEED
environment variable, then 12345; every output CSV records the resolved
configuration and seed in a leading comment line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import channel as chan
from . import hybrid as hyb
from . import satplan, simkit, txchain
from .constellation import (
    CollisionError,
    design_eep,
    design_report,
    design_uep,
    export_catalog,
    export_joint_csv,
    load_catalog,
    papr_db,
    validate_unique,
)
from .receiver import correlate, dump_cloud_csv

DEFAULT_SEED = 12345
SEED_ENV_VAR = "NCMA_SEED"

_AXIS_MAP = {"snr": "snr_db", "R": "R", "rho": "rho", "kappa": "kappa", "K": "K"}


class Refusal(Exception):
    """Domain refusal: valid request, unusable configuration (exit 1)."""


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip() != ""]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip() != ""]


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_SEED


# ---------------------------------------------------------------------------
# Config documents (flat key space per command; flags override file values)
# ---------------------------------------------------------------------------

_DESIGN_KEYS = {"criterion", "users", "order", "gammas", "offsets", "gains"}
_CHANNEL_KEYS = {"model", "antennas", "snr_db", "kappa", "rho"}
_SIM_KEYS = {"frames", "symbols_per_frame", "min_errors", "max_trials", "seed"}
_SIMULATE_KEYS = _DESIGN_KEYS | _CHANNEL_KEYS | _SIM_KEYS
_SWEEP_KEYS = _SIMULATE_KEYS | {"axis", "values"}


def _load_config(path, allowed: set[str]) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    if "simulate" in doc and isinstance(doc["simulate"], dict):
        doc = doc["simulate"]  # preset documents bundle per-command sections
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return doc


def _merge(args, config: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


# ---------------------------------------------------------------------------
# Shared argument groups
# ---------------------------------------------------------------------------


def _add_design_args(p):
    p.add_argument("--criterion", choices=["eep", "uep"], default=None)
    p.add_argument("--users", type=int, default=None, help="user count K")
    p.add_argument("--order", type=int, default=None, help="constellation order M")
    p.add_argument("--gammas", type=str, default=None,
                   help="UEP spacing factors, comma separated, each in (0,1]")
    p.add_argument("--offsets", type=str, default=None,
                   help="UEP base angles in degrees, comma separated")
    p.add_argument("--gains", type=str, default=None,
                   help="per-user superposition gains (default all 1)")


def _add_channel_args(p):
    p.add_argument("--model", choices=list(chan.MODELS), default=None)
    p.add_argument("--antennas", type=int, default=None, help="receive antennas R")
    p.add_argument("--snr", dest="snr_db", type=float, default=None,
                   help="per-antenna SNR in dB (inf for noiseless)")
    p.add_argument("--kappa", type=float, default=None, help="Rician K-factor")
    p.add_argument("--rho", type=float, default=None,
                   help="Gauss-Markov lag-1 correlation")


def _add_sim_args(p):
    p.add_argument("--frames", type=int, default=None, help="frames per trial")
    p.add_argument("--symbols-per-frame", dest="symbols_per_frame", type=int,
                   default=None)
    p.add_argument("--min-errors", dest="min_errors", type=int, default=None)
    p.add_argument("--max-trials", dest="max_trials", type=int, default=None)


def _design_from(args, config: dict):
    criterion = _merge(args, config, "criterion", "eep")
    K = _merge(args, config, "users", None)
    M = _merge(args, config, "order", None)
    if K is None or M is None:
        raise ValueError("both --users and --order are required")
    K, M = int(K), int(M)
    gains = _merge(args, config, "gains", None)
    if isinstance(gains, str):
        gains = _floats(gains)
    if gains is None:
        gains = [1.0] * K
    if criterion == "uep":
        gammas = _merge(args, config, "gammas", None)
        offsets = _merge(args, config, "offsets", None)
        if gammas is None or offsets is None:
            raise ValueError("UEP designs need --gammas and --offsets")
        if isinstance(gammas, str):
            gammas = _floats(gammas)
        if isinstance(offsets, str):
            offsets = _floats(offsets)
        offsets_rad = [math.radians(o) for o in offsets]
        consts = design_uep(K, M, gammas, offsets_rad)
    else:
        consts = design_eep(K, M)
    return design_report(consts, gains, criterion=criterion.upper()), gains


def _channel_from(args, config: dict, K: int, gains, seed: int) -> chan.ChannelConfig:
    return chan.ChannelConfig(
        K=K,
        R=int(_merge(args, config, "antennas", 128)),
        model=_merge(args, config, "model", "rayleigh"),
        gains=tuple(gains),
        snr_db=float(_merge(args, config, "snr_db", 10.0)),
        seed=seed,
        kappa=float(_merge(args, config, "kappa", 0.0)),
        rho=float(_merge(args, config, "rho", 1.0)),
    )


def _point_from(args, config: dict, design, channel, seed: int) -> simkit.SimPoint:
    return simkit.SimPoint(
        design=design,
        channel=channel,
        frames_per_trial=int(_merge(args, config, "frames", 10)),
        max_trials=int(_merge(args, config, "max_trials", 1000)),
        min_errors=int(_merge(args, config, "min_errors", 100)),
        seed=seed,
        symbols_per_frame=int(_merge(args, config, "symbols_per_frame", 100)),
    )


def _resolved_config(design_report_, channel, point, extra=None) -> dict:
    cfg = {
        "criterion": design_report_.criterion,
        "users": channel.K,
        "order": design_report_.constellations[0].order,
        "gains": list(channel.gains),
        "model": channel.model,
        "antennas": channel.R,
        "snr_db": channel.snr_db,
        "kappa": channel.kappa,
        "rho": channel.rho,
        "frames": point.frames_per_trial,
        "symbols_per_frame": point.symbols_per_frame,
        "min_errors": point.min_errors,
        "max_trials": point.max_trials,
        "seed": point.seed,
    }
    if extra:
        cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_design(args) -> int:
    report, _ = _design_from(args, {})
    for c in report.constellations:
        degs = ", ".join(f"{math.degrees(p):.6g}" for p in c.phases)
        print(f"user {c.user_id}: M={c.order} phases_deg=[{degs}]")
    print(f"joint points: {report.joint.size}")
    if not report.unique:
        witness = validate_unique(report.joint)
        raise Refusal(f"design collision: tuples {witness[0]} and {witness[1]} coincide")
    print("unique: yes")
    print(f"min_distance: {report.min_distance!r}")
    print(f"papr: {report.papr!r} ({papr_db(report.joint):.4f} dB)")
    if args.catalog:
        export_catalog(report.constellations, args.catalog)
        print(f"catalog written: {args.catalog}")
    if args.joint_csv:
        cfg = {
            "criterion": report.criterion,
            "users": len(report.constellations),
            "order": report.constellations[0].order,
            "gains": list(report.joint.gains),
        }
        export_joint_csv(report.joint, args.joint_csv,
                         comment="config: " + json.dumps(cfg, sort_keys=True))
        print(f"joint constellation written: {args.joint_csv}")
    return 0


def cmd_validate(args) -> int:
    consts = load_catalog(args.catalog)
    gains = _floats(args.gains) if args.gains else [1.0] * len(consts)
    report = design_report(consts, gains)
    print(f"joint points: {report.joint.size}")
    if not report.unique:
        witness = validate_unique(report.joint)
        raise Refusal(f"collision: tuples {witness[0]} and {witness[1]} coincide")
    print("unique: yes")
    print(f"min_distance: {report.min_distance!r}")
    return 0


def _run_simulation(args, sweep_mode: bool) -> int:
    allowed = _SWEEP_KEYS if sweep_mode else _SIMULATE_KEYS
    config = _load_config(args.config, allowed) if args.config else {}
    seed = _resolve_seed(args.seed if args.seed is not None else config.get("seed"))
    report, gains = _design_from(args, config)
    if not report.unique:
        witness = validate_unique(report.joint)
        raise Refusal(f"non-injective design: {witness[0]} vs {witness[1]}")
    channel = _channel_from(args, config, len(report.constellations), gains, seed)
    point = _point_from(args, config, report, channel, seed)

    if sweep_mode:
        axis_flag = _merge(args, config, "axis", None)
        values = _merge(args, config, "values", None)
        if axis_flag is None or values is None:
            raise ValueError("sweep needs --axis and --values")
        if isinstance(values, str):
            values = _floats(values)
        axis = _AXIS_MAP.get(axis_flag, axis_flag)
        if axis in ("R", "K"):
            values = [int(v) for v in values]
        results = simkit.sweep(point, axis, values, workers=args.workers)
        extra = {"axis": axis, "values": list(values)}
    else:
        res = simkit.run_point(point, workers=args.workers)
        results = [(channel.snr_db, res)]
        extra = {"axis": "snr_db"}

    cfg = _resolved_config(report, channel, point, extra)
    if args.output:
        simkit.write_results_csv(args.output, results, cfg)
        print(f"results written: {args.output}")
    for value, res in results:
        for k in range(res.n_users):
            print(
                f"axis={value} user={k} ser={float(res.per_user_ser[k]):.6g} "
                f"ber={float(res.per_user_ber[k]):.6g} "
                f"ci95={float(res.ci95_halfwidth[k]):.3g} "
                f"errors={int(res.errors_counted[k])}"
            )
    return 0


def cmd_simulate(args) -> int:
    return _run_simulation(args, sweep_mode=False)


def cmd_sweep(args) -> int:
    return _run_simulation(args, sweep_mode=True)


def cmd_hybrid(args) -> int:
    N = args.users
    M = args.order if args.order is not None else 4
    if args.search:
        if not args.candidates:
            raise ValueError("--search needs --candidates")
        seed = _resolve_seed(args.seed)
        gains_unused = [1.0]
        channel = _channel_from(args, {}, 1, gains_unused, seed)
        report = hyb.threshold_search(
            N,
            _ints(args.candidates),
            M,
            channel,
            args.target_ser,
            seed=seed,
            frames_per_trial=args.frames if args.frames is not None else 4,
            symbols_per_frame=(
                args.symbols_per_frame if args.symbols_per_frame is not None else 100
            ),
            min_errors=args.min_errors if args.min_errors is not None else 100,
            max_trials=args.max_trials if args.max_trials is not None else 200,
            workers=args.workers,
        )
        for row in report.rows:
            print(
                f"g={row.g} worst_ser={row.worst_ser:.6g} "
                f"sum_rate={row.sum_rate:.6g} selected={int(row.selected)}"
            )
        if report.fallback:
            print(f"no group size met target_ser={args.target_ser}; fallback g=1")
        print(f"best_g: {report.best_g}")
        if args.output:
            cfg = {
                "users": N, "order": M, "candidates": _ints(args.candidates),
                "target_ser": args.target_ser, "seed": seed,
                "model": channel.model, "antennas": channel.R,
                "snr_db": channel.snr_db, "kappa": channel.kappa,
                "rho": channel.rho,
            }
            hyb.write_search_csv(report, args.output, cfg)
            print(f"search report written: {args.output}")
        return 0

    if args.group is None:
        raise ValueError("--group is required (or use --search)")
    plan = hyb.make_plan(N, args.group, M, resource=args.resource)
    fractions = ",".join(f"{f:g}" for f in plan.slot_fractions)
    print(f"groups: {[list(g) for g in plan.groups]}")
    print(f"slot_fractions: {fractions}")
    T = args.symbols_per_frame if args.symbols_per_frame is not None else 100
    per_user = hyb.rates(plan, T)
    print(f"per_user_rate: {[round(float(r), 6) for r in per_user]}")
    print(f"sum_rate: {hyb.sum_rate(plan, T)!r}")
    if args.plan_out:
        hyb.export_plan(plan, args.plan_out, T)
        print(f"plan written: {args.plan_out}")
    return 0


def cmd_plan(args) -> int:
    plan = satplan.build_plan(
        args.freq,
        args.pol,
        args.constellations,
        beam_ids=list(range(args.beams)),
        bandwidth_per_beam=args.bandwidth,
        base_capacity_per_beam=args.capacity,
    )
    per_beam, total = satplan.beam_capacity(plan)
    print(f"colors: {plan.n_colors}")
    print(f"bandwidth_per_beam: {plan.bandwidth_per_beam!r}")
    print(f"capacity_per_beam: {per_beam!r}")
    print(f"total_capacity: {total!r}")
    if args.output:
        cfg = {
            "freq": args.freq, "pol": args.pol,
            "constellations": args.constellations, "beams": args.beams,
            "bandwidth": args.bandwidth, "capacity": args.capacity,
        }
        satplan.write_plan_csv(plan, args.output, cfg)
        print(f"plan written: {args.output}")
    return 0


def cmd_preset(args) -> int:
    preset = satplan.scenario_preset(args.name)
    print(f"name: {preset.name}")
    print(f"orbit: {preset.orbit}  link: {preset.link}  receiver: {preset.receiver_site}")
    print(f"criterion: {preset.criterion}  users: {preset.users}  order: {preset.order}")
    ch = preset.channel
    print(f"channel: {ch.model} R={ch.R} snr_db={ch.snr_db} kappa={ch.kappa} rho={ch.rho}")
    print(f"note: {preset.note}")
    if args.output:
        satplan.export_preset(preset, args.output)
        print(f"config written: {args.output}")
    return 0


def cmd_dump_cloud(args) -> int:
    seed = _resolve_seed(args.seed)
    report, gains = _design_from(args, {})
    if not report.unique:
        witness = validate_unique(report.joint)
        raise Refusal(f"non-injective design: {witness[0]} vs {witness[1]}")
    channel = _channel_from(args, {}, len(report.constellations), gains, seed)
    T = args.symbols
    rng = np.random.default_rng(seed)
    frames = []
    for c in report.constellations:
        bits = txchain.random_bits(rng, T * c.bits_per_symbol)
        frames.append(txchain.diff_encode(txchain.map_bits(bits, c), c))
    realization = chan.realize(channel, T + 1, rng)
    Y = chan.apply(realization, frames, rng)
    stat = correlate(Y)
    cfg = {
        "criterion": report.criterion,
        "users": channel.K,
        "order": report.constellations[0].order,
        "model": channel.model,
        "antennas": channel.R,
        "snr_db": channel.snr_db,
        "kappa": channel.kappa,
        "rho": channel.rho,
        "symbols": T,
        "seed": seed,
    }
    dump_cloud_csv(stat, args.output, comment="config: " + json.dumps(cfg, sort_keys=True))
    print(f"point cloud written: {args.output} ({len(stat.z)} samples)")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncma",
        description="Constellation-domain multiple access design and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design and characterize a constellation set")
    _add_design_args(p)
    p.add_argument("--catalog", type=str, default=None, help="write catalog JSON here")
    p.add_argument("--joint-csv", dest="joint_csv", type=str, default=None)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("validate", help="validate a design catalog for uniqueness")
    p.add_argument("--catalog", type=str, required=True)
    p.add_argument("--gains", type=str, default=None)
    p.set_defaults(func=cmd_validate)

    for name, fn in (("simulate", cmd_simulate), ("sweep", cmd_sweep)):
        p = sub.add_parser(name, help=f"{name} SER/BER over the fading channel")
        _add_design_args(p)
        _add_channel_args(p)
        _add_sim_args(p)
        p.add_argument("--config", type=str, default=None, help="JSON config document")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--output", type=str, default=None, help="CSV output path")
        if name == "sweep":
            p.add_argument("--axis", choices=list(_AXIS_MAP), default=None)
            p.add_argument("--values", type=str, default=None,
                           help="comma-separated axis values, ascending")
        p.set_defaults(func=fn)

    p = sub.add_parser("hybrid", help="hybrid slot/constellation planning & search")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--group", type=int, default=None, help="users per group g")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--resource", choices=list(hyb.RESOURCES), default="time")
    p.add_argument("--plan-out", dest="plan_out", type=str, default=None)
    p.add_argument("--search", action="store_true", help="search the best group size")
    p.add_argument("--candidates", type=str, default=None)
    p.add_argument("--target-ser", dest="target_ser", type=float, default=0.1)
    _add_channel_args(p)
    _add_sim_args(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", type=str, default=None)
    p.set_defaults(func=cmd_hybrid)

    p = sub.add_parser("plan", help="multibeam frequency plan with color triplets")
    p.add_argument("--freq", type=int, required=True)
    p.add_argument("--pol", type=int, required=True)
    p.add_argument("--constellations", type=int, required=True)
    p.add_argument("--beams", type=int, default=8)
    p.add_argument("--bandwidth", type=float, default=250e6)
    p.add_argument("--capacity", type=float, default=500e6)
    p.add_argument("--output", type=str, default=None)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("preset", help="bundled scenario configurations")
    p.add_argument("--name", choices=list(satplan.PRESET_NAMES), required=True)
    p.add_argument("--output", type=str, default=None)
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("dump-cloud", help="dump detection-statistic samples as CSV")
    _add_design_args(p)
    _add_channel_args(p)
    p.add_argument("--symbols", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", type=str, required=True)
    p.set_defaults(func=cmd_dump_cloud)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CollisionError, Refusal) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
