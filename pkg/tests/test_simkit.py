import math

import numpy as np
import pytest

from ncma import channel as chan
from ncma import simkit
from ncma.constellation import design_eep, design_report, design_uep


def eep_point(K=2, M=4, R=32, snr_db=10.0, **kw):
    report = design_report(design_eep(K, M))
    cfg = chan.ChannelConfig(
        K=K, R=R, model="rayleigh", gains=(1.0,) * K, snr_db=snr_db
    )
    defaults = dict(frames_per_trial=5, max_trials=40, min_errors=200, seed=5,
                    symbols_per_frame=100)
    defaults.update(kw)
    return simkit.SimPoint(design=report, channel=cfg, **defaults)


def intervals_overlap(res, k0=0, k1=1):
    lo0, hi0 = simkit.wilson_interval(
        int(res.errors_counted[k0]), int(res.symbols_counted[k0])
    )
    lo1, hi1 = simkit.wilson_interval(
        int(res.errors_counted[k1]), int(res.symbols_counted[k1])
    )
    return max(lo0, lo1) <= min(hi0, hi1)


def test_wilson_interval_reference_values():
    # 5 errors in 100 trials: the standard Wilson 95% interval.
    lo, hi = simkit.wilson_interval(5, 100)
    assert lo == pytest.approx(0.021543, abs=1e-5)
    assert hi == pytest.approx(0.111751, abs=1e-5)
    assert simkit.wilson_interval(0, 0) == (0.0, 1.0)
    lo0, hi0 = simkit.wilson_interval(0, 50)
    assert lo0 == 0.0 and 0.0 < hi0 < 0.1


def test_run_point_reproducible_bit_identical():
    point = eep_point(min_errors=50, max_trials=10)
    a = simkit.run_point(point)
    b = simkit.run_point(point)
    assert np.array_equal(a.errors_counted, b.errors_counted)
    assert np.array_equal(a.bit_errors_counted, b.bit_errors_counted)
    assert a.trials_run == b.trials_run


def test_run_point_worker_count_does_not_change_counts():
    point = eep_point(min_errors=50, max_trials=10)
    serial = simkit.run_point(point, workers=1)
    threaded = simkit.run_point(point, workers=4)
    assert np.array_equal(serial.errors_counted, threaded.errors_counted)
    assert np.array_equal(serial.bit_errors_counted, threaded.bit_errors_counted)
    assert serial.trials_run == threaded.trials_run


def test_run_point_refuses_non_injective_design():
    report = design_report(design_uep(2, 4, [1.0, 1.0], [0.0, 0.0]))
    cfg = chan.ChannelConfig(K=2, R=8, model="rayleigh", gains=(1.0, 1.0), snr_db=10.0)
    point = simkit.SimPoint(design=report, channel=cfg)
    with pytest.raises(ValueError, match="non-injective"):
        simkit.run_point(point)


def test_run_point_stops_on_min_errors():
    point = eep_point(snr_db=0.0, min_errors=100, max_trials=1000)
    res = simkit.run_point(point)
    assert int(res.errors_counted.min()) >= 100
    assert res.trials_run < 1000
    assert res.trials_run % 8 == 0  # batch granularity


def test_noise_dominated_limit_is_random_guessing():
    # At -60 dB every user's SER sits at 1 - 1/M inside its own CI.
    point = eep_point(snr_db=-60.0, min_errors=2000, max_trials=50,
                      frames_per_trial=5, seed=21)
    res = simkit.run_point(point)
    for k in range(2):
        lo, hi = simkit.wilson_interval(
            int(res.errors_counted[k]), int(res.symbols_counted[k])
        )
        assert lo <= 0.75 <= hi


def test_single_qpsk_noise_dominated():
    report = design_report(design_eep(1, 4))
    cfg = chan.ChannelConfig(K=1, R=16, model="rayleigh", gains=(1.0,), snr_db=-60.0)
    point = simkit.SimPoint(design=report, channel=cfg, frames_per_trial=5,
                            max_trials=50, min_errors=2000, seed=23)
    res = simkit.run_point(point)
    lo, hi = simkit.wilson_interval(
        int(res.errors_counted[0]), int(res.symbols_counted[0])
    )
    assert lo <= 0.75 <= hi


def test_ber_never_exceeds_ser():
    for snr in (-10.0, 5.0):
        res = simkit.run_point(eep_point(snr_db=snr, min_errors=50, max_trials=20))
        assert np.all(res.per_user_ber <= res.per_user_ser + 1e-15)
        assert np.all(res.errors_counted <= res.symbols_counted)


def test_eep_fairness_cis_overlap():
    point = eep_point(min_errors=500, max_trials=100)
    results = simkit.sweep(point, "snr_db", [0.0, 5.0, 10.0])
    for _, res in results:
        assert intervals_overlap(res)


def test_uep_ordering_with_tight_intervals():
    # Weaker protection (smaller gamma) must cost symbol errors, with
    # non-overlapping Wilson intervals once >= 1e4 errors are collected.
    report = design_report(
        design_uep(2, 4, [1.0, 0.5], [0.0, math.pi / 8]), criterion="UEP"
    )
    cfg = chan.ChannelConfig(K=2, R=32, model="rayleigh", gains=(1.0, 1.0), snr_db=10.0)
    point = simkit.SimPoint(design=report, channel=cfg, frames_per_trial=10,
                            max_trials=400, min_errors=10_000, seed=3,
                            symbols_per_frame=100)
    res = simkit.run_point(point)
    assert int(res.errors_counted.min()) >= 10_000
    assert float(res.per_user_ser[0]) < float(res.per_user_ser[1])
    assert not intervals_overlap(res)


def test_sweep_single_value_equals_run_point():
    point = eep_point(min_errors=50, max_trials=10)
    ((value, swept),) = simkit.sweep(point, "snr_db", [10.0])
    direct = simkit.run_point(point, stream_index=0)
    assert value == 10.0
    assert np.array_equal(swept.errors_counted, direct.errors_counted)


def test_sweep_rejects_bad_values():
    point = eep_point()
    with pytest.raises(ValueError):
        simkit.sweep(point, "snr_db", [])
    with pytest.raises(ValueError):
        simkit.sweep(point, "snr_db", [10.0, 0.0])
    with pytest.raises(ValueError):
        simkit.sweep(point, "bandwidth", [1.0])


def test_sweep_snr_monotone_two_points():
    point = eep_point(min_errors=300, max_trials=100)
    results = simkit.sweep(point, "snr_db", [0.0, 10.0])
    assert results[1][1].per_user_ser.mean() < results[0][1].per_user_ser.mean()


def test_sweep_axis_rho_and_kappa_switch_models():
    point = eep_point(min_errors=20, max_trials=8, frames_per_trial=2,
                      symbols_per_frame=20)
    for _, res in simkit.sweep(point, "rho", [0.9, 1.0]):
        assert res.trials_run >= 1
    for _, res in simkit.sweep(point, "kappa", [0.0, 5.0]):
        assert res.trials_run >= 1


def test_sweep_axis_K_redesigns():
    point = eep_point(min_errors=20, max_trials=8, frames_per_trial=2,
                      symbols_per_frame=20)
    results = simkit.sweep(point, "K", [1, 2])
    assert results[0][1].n_users == 1
    assert results[1][1].n_users == 2


def test_results_csv_deterministic_and_well_formed(tmp_path):
    point = eep_point(min_errors=30, max_trials=8, frames_per_trial=2,
                      symbols_per_frame=50)
    results = simkit.sweep(point, "snr_db", [0.0, 10.0])
    cfg = {"seed": point.seed, "axis": "snr_db"}
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    simkit.write_results_csv(p1, results, cfg)
    simkit.write_results_csv(p2, results, cfg)
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().strip().split("\n")
    assert lines[0].startswith("# config:")
    assert lines[1] == "axis_value,user_id,ser,ber,ci95,symbols,errors"
    assert len(lines) == 2 + 2 * 2  # two axis values x two users
    row = lines[2].split(",")
    assert row[0] == "0.0" and row[1] == "0"
    assert 0.0 <= float(row[2]) <= 1.0
