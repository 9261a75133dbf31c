import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ychl.gaussian import (
    GAP,
    ChannelConfig,
    build_inner_target_region,
    build_outer_region_g,
    cap,
    cap_plus,
    check_gap,
    gap_check_batch,
    region_arrays,
)
from ychl.regions import contains
from ychl.sweep import sample_in_region


def C(x):
    return 0.5 * math.log2(1 + x)


def cfg_from_snr(s1, s2, s3, signs=(1, 1, 1)):
    return ChannelConfig(*(sg * math.sqrt(s) for sg, s in zip(signs, (s1, s2, s3))), 1.0)


SMALL = cfg_from_snr(63, 15, 3)
LARGE = cfg_from_snr(2**20 - 1, 2**16 - 1, 2**12 - 1)

snr_st = st.lists(st.floats(1e-2, 1e8), min_size=3, max_size=3).map(lambda v: sorted(v, reverse=True))


def test_cap():
    assert cap(0) == 0
    assert cap(3) == 1 and cap(15) == 2 and cap(63) == 3
    assert cap_plus(-5) == 0 and cap_plus(3) == 1
    with pytest.raises(ValueError):
        cap(-1)


def test_config_validation_and_normalize():
    with pytest.raises(ValueError):
        ChannelConfig(1, 2, 0, 1)
    with pytest.raises(ValueError):
        ChannelConfig(2, 1, 0, -1)
    cfg = ChannelConfig.normalize([1.0, -3.0, 2.0], 5.0)
    assert cfg.gains == (-3.0, 2.0, 1.0) and cfg.perm == (2, 3, 1)
    r = (1, 2, 3, 4, 5, 6)  # caller labels
    n = cfg.to_normalized_rates(r)
    # normalized user 1 is caller user 2, normalized 2 is caller 3
    assert n.r12 == 4 and n.r21 == 6
    assert cfg.to_caller_rates(n) == r


def test_outer_rhs_values():
    rhs = build_outer_region_g(SMALL).rhs
    assert len(rhs) == 14
    assert rhs[0] == rhs[1] == pytest.approx(1.0)
    assert rhs[2] == rhs[3] == pytest.approx(2.0)
    for expected in (2.1240, 3.0324, 3.1520, 2.5091):
        assert min(abs(v - expected) for v in rhs) < 1e-3
    assert rhs[5] == pytest.approx(C(18)) and rhs[10] == pytest.approx(C(66))
    assert rhs[12] == pytest.approx(C(78))
    assert rhs[7] == pytest.approx(C((math.sqrt(15) + math.sqrt(3)) ** 2))


def test_zero_power_and_sign_symmetry():
    assert all(v == 0 for v in build_outer_region_g(ChannelConfig(3, 2, 1, 0)).rhs)
    flipped = cfg_from_snr(63, 15, 3, signs=(1, -1, 1))
    assert build_outer_region_g(flipped).rhs == build_outer_region_g(SMALL).rhs
    assert build_inner_target_region(flipped).rhs == build_inner_target_region(SMALL).rhs
    assert build_inner_target_region(ChannelConfig(3, 2, 1, 0)).rhs == (-2, -2, -3, -3, -3, -3, -3.5, -3.5)


def test_inner_target_values():
    rhs = build_inner_target_region(SMALL).rhs
    assert rhs[:2] == pytest.approx((-1.0, -1.0))
    assert rhs[2] == pytest.approx(-0.876, abs=1e-3) and rhs[3] == rhs[2]
    s1, s2, s3 = 2**20 - 1, 2**16 - 1, 2**12 - 1
    c23 = (math.sqrt(s2) + math.sqrt(s3)) ** 2
    expected = (
        C(s3) - 2, C(s3) - 2, C(s2 + s3) - 3, C(s2 + s3) - 3,
        C(s1 + s2) - 3, C(s1 + s3) - 3, C(c23) - 3.5, C(c23) - 3.5,
    )
    got = build_inner_target_region(LARGE).rhs
    assert got == pytest.approx(expected, abs=1e-12)
    assert got[:2] == pytest.approx((4.0, 4.0))
    assert got[2] == pytest.approx(5.0437, abs=1e-4) and got[4] == pytest.approx(7.0437, abs=1e-4)


def test_gap_examples():
    inside = check_gap(SMALL, (2, 0, 0, 0, 0, 0))
    assert inside.in_outer_bound and inside.passed and len(inside.slacks) == 8
    key = next(k for k in inside.slacks if k.startswith("3:"))
    assert inside.slacks[key] == pytest.approx((C(18) - 3) - (2 - 3 * GAP))
    assert inside.achievable == (2 - GAP, 0, 0, 0, 0, 0)
    zero = check_gap(SMALL, (0,) * 6)
    assert zero.passed and zero.verdict == "pass"
    # R12 alone is capped by C(h2²P) = 2 < C(18)
    outside = check_gap(SMALL, (C(18), 0, 0, 0, 0, 0))
    assert outside.verdict == "not in outer bound" and "cutset-R12+R32" in outside.outer_violations


@settings(max_examples=60, deadline=None)
@given(snr_st, st.integers(0, 2**32 - 1))
def test_gap_soundness(snr, seed):
    cfg = cfg_from_snr(*snr)
    a, b = region_arrays(build_outer_region_g(cfg))
    rng = np.random.default_rng(seed)
    for r in sample_in_region(rng, a, b, 20, boundary_share=0.5):
        assert check_gap(cfg, r).passed


@settings(max_examples=60, deadline=None)
@given(snr_st, st.integers(0, 2**32 - 1))
def test_target_inside_outer(snr, seed):
    cfg = cfg_from_snr(*snr)
    a, b = region_arrays(build_inner_target_region(cfg))
    if b.min() < 0:
        return
    outer = build_outer_region_g(cfg)
    rng = np.random.default_rng(seed)
    for r in sample_in_region(rng, a, b, 20, boundary_share=0.5):
        assert contains(outer, r, 1e-9)


@settings(max_examples=60, deadline=None)
@given(snr_st, st.floats(1.0, 100.0))
def test_rhs_monotone_in_power(snr, factor):
    lo = cfg_from_snr(*snr)
    hi = ChannelConfig(lo.h1, lo.h2, lo.h3, lo.P * factor)
    for build in (build_outer_region_g, build_inner_target_region):
        assert all(x <= y + 1e-12 for x, y in zip(build(lo).rhs, build(hi).rhs))


@settings(max_examples=40, deadline=None)
@given(st.permutations([0, 1, 2]), snr_st, st.integers(0, 2**32 - 1))
def test_ordering_invariance(perm, snr, seed):
    base = cfg_from_snr(*snr)
    caller_gains = [base.gains[perm.index(i)] for i in range(3)]
    cfg = ChannelConfig.normalize(caller_gains, 1.0)
    assert [g * g for g in cfg.gains] == pytest.approx([g * g for g in base.gains])
    a, b = region_arrays(build_outer_region_g(base))
    rng = np.random.default_rng(seed)
    for r in sample_in_region(rng, a, b, 5):
        caller_r = cfg.to_caller_rates(r)
        assert cfg.to_normalized_rates(caller_r) == pytest.approx(tuple(r))
        assert contains(build_outer_region_g(cfg), cfg.to_normalized_rates(caller_r), 1e-9)


def test_batch_matches_scalar():
    rng = np.random.default_rng(7)
    cfg = cfg_from_snr(1e4, 50, 0.3)
    rates = rng.uniform(0, 3, size=(200, 6))
    passed, slack = gap_check_batch(cfg, rates)
    for r, p, s in zip(rates, passed, slack):
        rep = check_gap(cfg, r)
        assert p == rep.passed
        if rep.in_outer_bound:
            assert s == pytest.approx(rep.min_slack)
        else:
            assert math.isnan(s)
