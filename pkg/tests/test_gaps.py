import math
import random

import numpy as np
import pytest

from factorgaps import (
    EmptySampleError,
    empirical_density,
    empty_summary,
    factorize,
    gap_profile,
    merge_summaries,
    partial_alternating_sum,
    scan_range,
    segment_factor_scan,
    theoretical_density,
)
from factorgaps import oracle
from factorgaps.gaps import MODE_PER_RANGE, MOMENT_SCALE


def summaries_equal(a, b):
    return (
        a.ranges == b.ranges
        and a.total == b.total
        and a.eligible == b.eligible
        and np.array_equal(a.hist, b.hist)
        and a.exceed == b.exceed
        and a.sum_gap_fp == b.sum_gap_fp
        and a.sum_gap_sq_fp == b.sum_gap_sq_fp
    )


# ---------------------------------------------------------------- profiles


def test_profile_12(table_small):
    pr = gap_profile(factorize(12, table_small))
    assert pr.omega == 2
    assert pr.argmax_index == 1
    assert pr.gap == pytest.approx(oracle.naive_f(12), rel=1e-15)
    assert pr.gap == pytest.approx(0.4605607481983634, rel=1e-13)
    assert pr.ratio == pytest.approx(math.exp(pr.gap), rel=1e-15)


def test_profile_absent_for_prime_powers(table_small):
    for n in (17, 128, 1 << 10, 3**7):
        pr = gap_profile(factorize(n, table_small))
        assert pr.gap is None and pr.ratio is None and pr.argmax_index is None
        assert oracle.naive_f(n) is None


def test_profile_34(table_small):
    pr = gap_profile(factorize(34, table_small))
    assert pr.gap == pytest.approx(1.407924445356445, rel=1e-13)
    assert pr.ratio == pytest.approx(4.08746284125034, rel=1e-13)


def test_profile_30_ties_to_first(table_small):
    pr = gap_profile(factorize(30, table_small))
    # ratios (1.58496, 1.46497): the first wins
    assert pr.argmax_index == 1
    assert pr.gap == pytest.approx(0.4605607481983634, rel=1e-13)


def test_profile_argmax_later_pair(table_small):
    # 3*5*61: ln61/ln5 beats ln5/ln3
    pr = gap_profile(factorize(3 * 5 * 61, table_small))
    assert pr.argmax_index == 2
    assert pr.ratio == pytest.approx(math.log(61) / math.log(5), rel=1e-15)


def test_profile_radical_invariance(table_small):
    rng = random.Random(7)
    for _ in range(400):
        n = rng.randrange(2, 100_001)
        fact = factorize(n, table_small)
        rad = 1
        for p in fact.primes:
            rad *= p
        assert gap_profile(factorize(rad, table_small)).gap == gap_profile(fact).gap


def test_profile_vs_oracle_sample(table_small):
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randrange(2, 100_001)
        got = gap_profile(factorize(n, table_small)).gap
        ref = oracle.naive_f(n)
        if ref is None:
            assert got is None
        else:
            assert got == pytest.approx(ref, rel=1e-12)


# ---------------------------------------------------------------- scans


def test_scan_single_prime_power(table_small):
    s = scan_range(16, 17, [1.0], table_small)
    assert s.total == 1 and s.eligible == 0
    assert s.exceed == {1.0: 0}
    assert s.hist.sum() == 0


def test_scan_33_35(table_small):
    # both 33 = 3*11 and 34 = 2*17 exceed c=1: ratios 2.183 and 4.087
    # against thresholds ln ln 33 = 1.2518 and ln ln 34 = 1.2599
    s = scan_range(33, 35, [1.0], table_small)
    assert s.total == 2
    assert s.eligible == 2
    assert s.exceed == {1.0: 2}
    assert empirical_density(s, 1.0).empirical == 1.0


def test_scan_totals_reconcile(table_small):
    s = scan_range(16, 100_000, [0.5, 1.0, 2.0], table_small)
    assert s.total == 99_984
    assert 0 < s.eligible < s.total
    assert int(s.hist.sum()) == s.eligible
    for c, cnt in s.exceed.items():
        assert cnt <= s.eligible


def test_scan_matches_profile_path(table_small):
    a, b = 16, 30_000
    s = scan_range(a, b, [0.5, 1.0, 2.0], table_small, segment_size=7_777)
    hist = np.zeros(402, dtype=np.int64)
    exceed = {0.5: 0, 1.0: 0, 2.0: 0}
    eligible = 0
    sum_fp = 0
    sum_sq_fp = 0
    for fact in segment_factor_scan(a, b, table_small):
        pr = gap_profile(fact)
        if pr.omega < 2:
            continue
        eligible += 1
        lnln = math.log(math.log(fact.n))
        v = pr.gap - math.log(lnln)
        bi = min(max(math.floor((v + 10.0) * 20.0), -1), 400)
        hist[bi + 1] += 1
        for c in exceed:
            if pr.ratio > c * lnln:
                exceed[c] += 1
        sum_fp += round(pr.gap * MOMENT_SCALE)
        sum_sq_fp += round(pr.gap * pr.gap * MOMENT_SCALE)
    assert s.eligible == eligible
    assert np.array_equal(s.hist, hist)
    assert s.exceed == exceed
    assert s.sum_gap_fp == sum_fp
    assert s.sum_gap_sq_fp == sum_sq_fp


def test_scan_deterministic_and_segment_independent(table_small):
    base = scan_range(16, 50_000, [1.0], table_small)
    again = scan_range(16, 50_000, [1.0], table_small)
    assert summaries_equal(base, again)
    for size in (999, 4096, 1 << 20):
        assert summaries_equal(
            base, scan_range(16, 50_000, [1.0], table_small, segment_size=size)
        )


def test_merge_partition_law(table_small):
    thr = (0.5, 1.0)
    direct = scan_range(16, 40_000, thr, table_small)
    rng = random.Random(2)
    for _ in range(3):
        cuts = sorted(rng.sample(range(17, 40_000), 3))
        parts = [
            scan_range(a, b, thr, table_small)
            for a, b in zip([16] + cuts, cuts + [40_000])
        ]
        merged = parts[0]
        for p in parts[1:]:
            merged = merge_summaries(merged, p)
        assert summaries_equal(merged, direct)
        assert merged.ranges == ((16, 40_000),)


def test_merge_commutes_and_has_identity(table_small):
    s1 = scan_range(16, 1_000, [1.0], table_small)
    s2 = scan_range(5_000, 6_000, [1.0], table_small)
    ab = merge_summaries(s1, s2)
    ba = merge_summaries(s2, s1)
    assert summaries_equal(ab, ba)
    assert ab.ranges == ((16, 1_000), (5_000, 6_000))  # disjoint, not adjacent
    ident = merge_summaries(s1, empty_summary([1.0]))
    assert summaries_equal(ident, s1)


def test_merge_rejects_mismatch_and_overlap(table_small):
    s1 = scan_range(16, 100, [1.0], table_small)
    s2 = scan_range(100, 200, [2.0], table_small)
    with pytest.raises(ValueError):
        merge_summaries(s1, s2)
    s3 = scan_range(50, 150, [1.0], table_small)
    with pytest.raises(ValueError):
        merge_summaries(s1, s3)


def test_scan_mode_per_range(table_small):
    s = scan_range(33, 35, [1.0], table_small, mode=MODE_PER_RANGE)
    assert s.range_point == 34
    assert s.exceed == {1.0: 2}  # both ratios beat ln ln 34
    # per-range and per-n genuinely differ on a longer stretch
    a = scan_range(16, 10_000, [1.0], table_small)
    b = scan_range(16, 10_000, [1.0], table_small, mode=MODE_PER_RANGE)
    assert a.exceed != b.exceed


def test_scan_exceed_monotone_in_c(table_small):
    s = scan_range(16, 50_000, [0.25, 0.5, 1.0, 2.0, 4.0], table_small)
    counts = [s.exceed[c] for c in (0.25, 0.5, 1.0, 2.0, 4.0)]
    assert counts == sorted(counts, reverse=True)


def test_scan_validates_arguments(table_small):
    with pytest.raises(ValueError):
        scan_range(10, 20, [1.0], table_small)  # below the floor
    with pytest.raises(ValueError):
        scan_range(20, 20, [1.0], table_small)
    with pytest.raises(ValueError):
        scan_range(16, 100, [0.0], table_small)
    with pytest.raises(ValueError):
        scan_range(16, 100, [1.0], table_small, mode="sideways")


def test_scan_moments_match_floats(table_small):
    s = scan_range(16, 20_000, [1.0], table_small)
    gaps = []
    for fact in segment_factor_scan(16, 20_000, table_small):
        pr = gap_profile(fact)
        if pr.omega >= 2:
            gaps.append(pr.gap)
    assert s.mean_gap == pytest.approx(sum(gaps) / len(gaps), abs=1e-9)
    mean = sum(gaps) / len(gaps)
    var = sum(g * g for g in gaps) / len(gaps) - mean * mean
    assert s.var_gap == pytest.approx(var, abs=1e-9)


# ---------------------------------------------------------------- densities


def test_theoretical_density_values():
    assert theoretical_density(1.0) == pytest.approx(0.6321205588285577, rel=1e-15)
    assert theoretical_density(2.0) == pytest.approx(1 - math.exp(-0.5), rel=1e-15)
    # large c: series 1/c - 1/(2c^2) + ...
    assert theoretical_density(1000.0) == pytest.approx(0.0009995001666, rel=1e-9)
    with pytest.raises(ValueError):
        theoretical_density(0.0)


def test_partial_alternating_sum_values():
    assert partial_alternating_sum(1.0, 0) == 1.0
    assert partial_alternating_sum(1.0, 3) == pytest.approx(1 / 3, rel=1e-14)
    assert partial_alternating_sum(1.0, 8) == pytest.approx(0.3678819444444445, rel=1e-14)
    with pytest.raises(ValueError):
        partial_alternating_sum(-1.0, 3)
    with pytest.raises(ValueError):
        partial_alternating_sum(1.0, -1)


@pytest.mark.parametrize("c", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_partial_sums_bracket_limit(c):
    lim = math.exp(-1.0 / c)
    for K in range(11):
        s = partial_alternating_sum(c, K)
        if K % 2 == 0:
            assert s >= lim - 1e-15
        else:
            assert s <= lim + 1e-15


def test_empirical_density_report(table_small):
    s = scan_range(16, 100_000, [0.5, 1.0], table_small)
    rep = empirical_density(s, 1.0)
    assert rep.x == 99_999
    assert 0.0 <= rep.empirical <= 1.0
    assert rep.theoretical == pytest.approx(0.6321205588285577, rel=1e-15)
    assert rep.deviation == rep.empirical - rep.theoretical
    assert len(rep.partial_sums) == 9
    # consecutive partial sums bracket the limit
    lim = math.exp(-1.0)
    for K in range(8):
        lo, hi = sorted((rep.partial_sums[K], rep.partial_sums[K + 1]))
        assert lo - 1e-15 <= lim <= hi + 1e-15


def test_empirical_density_errors(table_small):
    s = scan_range(16, 100, [1.0], table_small)
    with pytest.raises(ValueError):
        empirical_density(s, 3.0)
    empty = scan_range(16, 17, [1.0], table_small)
    with pytest.raises(EmptySampleError):
        empirical_density(empty, 1.0)


def test_pinned_density_at_1e6(table_small):
    # frozen from the first verified full run; exact integer regression
    s = scan_range(16, 10**6, [1.0], table_small)
    assert s.total == 999_984
    assert s.eligible == 921_259
    assert s.exceed == {1.0: 695_369}
    r = scan_range(16, 10**6, [1.0], table_small, mode=MODE_PER_RANGE)
    assert r.exceed == {1.0: 679_873}
