import itertools
import math

import numpy as np
import pytest

from ncma import constellation as con

SQRT2 = math.sqrt(2.0)


def oracle_min_distance(points):
    """Independent exhaustive pairwise scan (row-chunked, no scipy)."""
    points = np.asarray(points)
    best = math.inf
    for i in range(len(points) - 1):
        best = min(best, float(np.min(np.abs(points[i + 1 :] - points[i]))))
    return best


def oracle_all_distinct(points, tol=1e-9):
    return oracle_min_distance(points) > tol


# ---------------------------------------------------------------------------
# EEP design
# ---------------------------------------------------------------------------


def test_eep_2_4_user1_is_user0_rotated_45_degrees():
    c0, c1 = con.design_eep(2, 4)
    assert np.allclose(np.degrees(c0.phases), [0.0, 90.0, 180.0, 270.0])
    assert np.allclose(np.degrees(c1.phases), [45.0, 135.0, 225.0, 315.0])
    rot = (np.asarray(c1.phases) - np.asarray(c0.phases)) % (2 * math.pi)
    assert np.allclose(rot, math.pi / 4)


def test_eep_single_user_is_standard_qpsk():
    (c,) = con.design_eep(1, 4)
    assert np.allclose(np.degrees(c.phases), [0.0, 90.0, 180.0, 270.0])


def test_eep_2_2_joint_is_square():
    consts = con.design_eep(2, 2)
    assert np.allclose(np.degrees(consts[0].phases), [0.0, 180.0])
    assert np.allclose(np.degrees(consts[1].phases), [90.0, 270.0])
    joint = con.build_joint(consts, [1.0, 1.0])
    # Oracle: enumerate all four sums directly.
    expected = sorted(
        (a + b for a in (1, -1) for b in (1j, -1j)),
        key=lambda z: (round(z.real, 12), round(z.imag, 12)),
    )
    got = sorted(joint.points, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    assert np.allclose(got, expected)
    assert oracle_all_distinct(joint.points)


def test_eep_user0_is_always_standard_mpsk():
    # Combos where the EEP joint is injective (three equally rotated users
    # cancel pairwise and are rejected, see test_eep_reports_collision).
    for K, M in [(1, 2), (2, 4), (2, 8), (4, 4), (4, 2)]:
        consts = con.design_eep(K, M)
        expected = [m * 2 * math.pi / M for m in range(M)]
        assert np.allclose(consts[0].phases, expected)


def test_eep_rejects_bad_arguments():
    with pytest.raises(ValueError):
        con.design_eep(0, 4)
    with pytest.raises(ValueError):
        con.design_eep(-1, 4)
    with pytest.raises(ValueError):
        con.design_eep(2, 3)
    with pytest.raises(ValueError):
        con.design_eep(2, 1)


def test_eep_reports_collision():
    # Three BPSK users at 0, 60, 120 degrees: opposite sign patterns cancel.
    with pytest.raises(con.CollisionError) as exc:
        con.design_eep(3, 2)
    assert exc.value.tuple_a != exc.value.tuple_b


# ---------------------------------------------------------------------------
# UEP design
# ---------------------------------------------------------------------------


def test_uep_spacing_controls_protection():
    consts = con.design_uep(2, 4, [1.0, 0.5], [0.0, math.pi / 8])
    # Oracle: intra-user minimum chord by direct pairwise scan.
    intra = [oracle_min_distance(c.points()) for c in consts]
    assert intra[0] == pytest.approx(2 * math.sin(math.pi / 4), abs=1e-12)  # 1.41421
    assert intra[1] == pytest.approx(2 * math.sin(math.pi / 8), abs=1e-12)  # 0.76537
    assert intra[1] < intra[0]  # smaller gamma => weaker protection


def test_uep_gamma_one_reduces_to_eep():
    (u,) = con.design_uep(1, 4, [1.0], [0.0])
    (e,) = con.design_eep(1, 4)
    assert u.phases == e.phases
    assert u.bit_map == e.bit_map


def test_uep_identical_users_collide_by_symmetry():
    consts = con.design_uep(2, 4, [1.0, 1.0], [0.0, 0.0])
    joint = con.build_joint(consts, [1.0, 1.0])
    witness = con.validate_unique(joint)
    assert witness == ((0, 1), (1, 0))


def test_uep_rejects_bad_gammas():
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            con.design_uep(2, 4, [1.0, bad], [0.0, 0.0])


def test_uep_rejects_coincident_phases():
    # Spacing gamma*(2*pi/M) below the angular tolerance collapses phases.
    with pytest.raises(ValueError):
        con.design_uep(1, 4, [1e-10], [0.0])


def test_uep_requires_matching_lengths():
    with pytest.raises(ValueError):
        con.design_uep(2, 4, [1.0], [0.0, 0.0])


# ---------------------------------------------------------------------------
# Joint constellation
# ---------------------------------------------------------------------------


def test_build_joint_contains_direct_sum():
    consts = con.design_eep(2, 4)
    joint = con.build_joint(consts, [1.0, 1.0])
    assert joint.points[0] == pytest.approx(1.0 + np.exp(1j * math.pi / 4), abs=1e-12)
    assert joint.demap[0] == (0, 0)


def test_build_joint_eep_2_4_all_distinct():
    joint = con.build_joint(con.design_eep(2, 4), [1.0, 1.0])
    assert joint.size == 16
    assert oracle_all_distinct(joint.points)


def test_build_joint_single_user_is_identity():
    (c,) = con.design_eep(1, 4)
    joint = con.build_joint([c], [1.0])
    assert np.allclose(joint.points, c.points())
    assert joint.demap == ((0,), (1,), (2,), (3,))


def test_build_joint_lexicographic_demap():
    joint = con.build_joint(con.design_eep(2, 4), [1.0, 1.0])
    assert joint.demap == tuple(itertools.product(range(4), range(4)))
    assert joint.index_of((2, 3)) == 11


def test_build_joint_validates_gains():
    consts = con.design_eep(2, 4)
    with pytest.raises(ValueError):
        con.build_joint(consts, [1.0])
    with pytest.raises(ValueError):
        con.build_joint(consts, [1.0, 0.0])
    with pytest.raises(ValueError):
        con.build_joint(consts, [1.0, -2.0])


def test_reconstruction_identity():
    rng = np.random.default_rng(42)
    for _ in range(5):
        K = int(rng.integers(1, 4))
        M = int(rng.choice([2, 4, 8]))
        gammas = rng.uniform(0.3, 1.0, K)
        offsets = rng.uniform(0.0, 2 * math.pi, K)
        gains = rng.uniform(0.5, 2.0, K)
        consts = con.design_uep(K, M, gammas, offsets)
        joint = con.build_joint(consts, gains)
        for p, tup in zip(joint.points, joint.demap):
            rebuilt = sum(
                g * math.e ** (1j * c.phases[t])
                for g, c, t in zip(gains, consts, tup)
            )
            assert abs(p - rebuilt) <= 1e-12


# ---------------------------------------------------------------------------
# validate_unique / min_distance / papr
# ---------------------------------------------------------------------------


def test_validate_unique_ok_on_eep():
    joint = con.build_joint(con.design_eep(2, 4), [1.0, 1.0])
    assert con.validate_unique(joint) is None
    assert oracle_all_distinct(joint.points)


def test_validate_unique_single_user_always_ok():
    joint = con.build_joint(con.design_eep(1, 8), [1.0])
    assert con.validate_unique(joint) is None


def test_min_distance_eep_2_4():
    joint = con.build_joint(con.design_eep(2, 4), [1.0, 1.0])
    assert con.min_distance(joint) == pytest.approx(2.0 - SQRT2, abs=1e-9)
    assert oracle_min_distance(joint.points) == pytest.approx(2.0 - SQRT2, abs=1e-9)


def test_min_distance_single_qpsk():
    joint = con.build_joint(con.design_eep(1, 4), [1.0])
    assert con.min_distance(joint) == pytest.approx(SQRT2, abs=1e-12)


def test_min_distance_eep_2_2():
    joint = con.build_joint(con.design_eep(2, 2), [1.0, 1.0])
    assert con.min_distance(joint) == pytest.approx(2.0, abs=1e-12)
    assert oracle_min_distance(joint.points) == pytest.approx(2.0, abs=1e-12)


def test_min_distance_zero_on_collision():
    consts = con.design_uep(2, 4, [1.0, 1.0], [0.0, 0.0])
    joint = con.build_joint(consts, [1.0, 1.0])
    assert con.min_distance(joint) == 0.0


def test_papr_single_psk_is_one():
    for M in (2, 4, 8, 16):
        joint = con.build_joint(con.design_eep(1, M), [1.0])
        assert con.papr(joint) == pytest.approx(1.0, abs=1e-12)


def test_papr_eep_2_4():
    joint = con.build_joint(con.design_eep(2, 4), [1.0, 1.0])
    # Oracle: direct enumeration of |p|^2.
    p2 = np.abs(joint.points) ** 2
    assert float(p2.max()) == pytest.approx(2.0 + SQRT2, abs=1e-12)
    assert float(p2.mean()) == pytest.approx(2.0, abs=1e-12)
    assert con.papr(joint) == pytest.approx((2.0 + SQRT2) / 2.0, abs=1e-9)
    assert con.papr_db(joint) == pytest.approx(10 * math.log10((2 + SQRT2) / 2), abs=1e-9)


def test_papr_eep_2_2_constant_envelope():
    joint = con.build_joint(con.design_eep(2, 2), [1.0, 1.0])
    assert con.papr(joint) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# Invariance properties
# ---------------------------------------------------------------------------


def test_rotation_invariance():
    gammas = [1.0, 0.5]
    for phi in (0.3, 1.7, 5.1):
        base = con.build_joint(con.design_uep(2, 4, gammas, [0.0, math.pi / 8]), [1.0, 1.0])
        rot = con.build_joint(
            con.design_uep(2, 4, gammas, [phi, math.pi / 8 + phi]), [1.0, 1.0]
        )
        assert rot.min_distance == pytest.approx(base.min_distance, abs=1e-12)
        assert con.papr(rot) == pytest.approx(con.papr(base), abs=1e-12)


def test_scaling_covariance():
    consts = con.design_eep(2, 4)
    base = con.build_joint(consts, [1.0, 1.0])
    for c in (0.5, 2.0, 7.25):
        scaled = con.build_joint(consts, [c, c])
        assert scaled.min_distance == pytest.approx(c * base.min_distance, rel=1e-12)
        assert con.papr(scaled) == pytest.approx(con.papr(base), rel=1e-12)


def test_gray_property_all_orders():
    for M in (2, 4, 8, 16):
        (c,) = con.design_eep(1, M)
        order = np.argsort(c.phases)
        labels = [int(c.bit_map[i], 2) for i in order]
        for a, b in zip(labels, labels[1:]):
            assert bin(a ^ b).count("1") == 1


def test_gray_qpsk_bit_map():
    (c,) = con.design_eep(1, 4)
    assert c.bit_map == ("00", "01", "11", "10")


def test_constructor_rejects_invalid_constellations():
    with pytest.raises(ValueError):  # phase out of range
        con.IndividualConstellation(0, (0.0, 7.0), ("0", "1"))
    with pytest.raises(ValueError):  # duplicate phases
        con.IndividualConstellation(0, (0.5, 0.5), ("0", "1"))
    with pytest.raises(ValueError):  # amplitude fixed at 1
        con.IndividualConstellation(0, (0.0, math.pi), ("0", "1"), amplitude=2.0)
    with pytest.raises(ValueError):  # non-bijective labels
        con.IndividualConstellation(0, (0.0, math.pi), ("0", "0"))
    with pytest.raises(ValueError):  # not Gray over sorted phases
        con.IndividualConstellation(
            0, (0.0, math.pi / 2, math.pi, 3 * math.pi / 2), ("00", "11", "01", "10")
        )


# ---------------------------------------------------------------------------
# Offset optimization
# ---------------------------------------------------------------------------


def oracle_grid_search(K, M, gammas, step, tol=1e-9):
    """Independent grid oracle with the same objective and tie-break."""
    span = 2 * math.pi / M
    n = int(round(span / step))
    candidates = [i * step for i in range(n)]
    best_offsets, best_d = None, 0.0
    for rest in itertools.product(candidates, repeat=K - 1):
        offsets = (0.0,) + rest
        pts = []
        for tup in itertools.product(*(range(M) for _ in range(K))):
            pts.append(
                sum(
                    math.e ** (1j * (offsets[k] + tup[k] * gammas[k] * 2 * math.pi / M))
                    for k in range(K)
                )
            )
        d = oracle_min_distance(np.asarray(pts))
        if d > tol and d > best_d + 1e-12:
            best_offsets, best_d = offsets, d
    return best_offsets, best_d


def test_optimize_offsets_2_4_matches_grid_oracle():
    offsets, d = con.optimize_offsets(2, 4, [1.0, 1.0], math.pi / 16)
    oracle_offsets, oracle_d = oracle_grid_search(2, 4, [1.0, 1.0], math.pi / 16)
    assert offsets == pytest.approx(list(oracle_offsets), abs=1e-12)
    assert d == pytest.approx(oracle_d, abs=1e-12)
    # Frozen oracle values: the grid maximum sits at 3*pi/16 (its mirror
    # 5*pi/16 ties and loses the lexicographic tie-break).
    assert offsets == pytest.approx([0.0, 3 * math.pi / 16], abs=1e-12)
    assert d == pytest.approx(0.6721909094233646, abs=1e-9)


def test_optimize_offsets_2_2_matches_grid_oracle():
    offsets, d = con.optimize_offsets(2, 2, [1.0, 1.0], math.pi / 8)
    oracle_offsets, oracle_d = oracle_grid_search(2, 2, [1.0, 1.0], math.pi / 8)
    assert offsets == pytest.approx(list(oracle_offsets), abs=1e-12)
    assert d == pytest.approx(oracle_d, abs=1e-12)
    # Frozen: 3*pi/8, pi/2 and 5*pi/8 all reach min distance 2.0 exactly;
    # lexicographic tie-break keeps the smallest offset.
    assert offsets == pytest.approx([0.0, 3 * math.pi / 8], abs=1e-12)
    assert d == pytest.approx(2.0, abs=1e-9)


def test_optimize_offsets_single_user_trivial():
    offsets, d = con.optimize_offsets(1, 4, [1.0], math.pi / 16)
    assert offsets == [0.0]
    assert d == pytest.approx(SQRT2, abs=1e-12)


def test_optimize_offsets_rejects_bad_grid():
    with pytest.raises(ValueError):
        con.optimize_offsets(2, 4, [1.0, 1.0], 0.33)


def test_optimize_offsets_no_injective_design():
    # Single candidate offset 0 makes both BPSK users identical.
    with pytest.raises(ValueError, match="no injective design"):
        con.optimize_offsets(2, 2, [1.0, 1.0], math.pi)


# ---------------------------------------------------------------------------
# Catalog / CSV round trips
# ---------------------------------------------------------------------------


def test_catalog_round_trip(tmp_path):
    consts = con.design_uep(2, 4, [1.0, 0.5], [0.0, math.pi / 8])
    path = tmp_path / "catalog.json"
    con.export_catalog(consts, path)
    loaded = con.load_catalog(path)
    assert len(loaded) == 2
    for a, b in zip(consts, loaded):
        assert a.user_id == b.user_id
        assert a.bit_map == b.bit_map
        assert np.allclose(a.phases, b.phases, atol=1e-9)


def test_export_joint_csv(tmp_path):
    joint = con.build_joint(con.design_eep(2, 2), [1.0, 1.0])
    path = tmp_path / "joint.csv"
    con.export_joint_csv(joint, path, comment="config: {}")
    lines = path.read_text().strip().split("\n")
    assert lines[0].startswith("#")
    assert lines[1] == "tuple,re,im"
    assert len(lines) == 2 + joint.size
    tup, re, im = lines[2].split(",")
    assert tup == "0|0"
    assert complex(float(re), float(im)) == pytest.approx(joint.points[0], abs=1e-12)
