import math
from itertools import combinations

import pytest
from mpmath import mp

from factorgaps import (
    InsufficientTableError,
    all_isolated,
    boundary,
    build_prime_table,
    count_isolated_set,
    direct_counts,
    factorize,
    inclusion_exclusion,
    is_gap_form,
    is_isolated,
    make_params,
    segment_factor_scan,
    tuple_reciprocal_sum,
    wide_squarefree_set,
    window_coprime_density,
    window_set,
)
from factorgaps import oracle


@pytest.fixture(scope="module")
def pars30():
    return make_params(30, 1.0)


# ---------------------------------------------------------------- params


def test_params_30(pars30):
    with mp.workdps(40):
        z = mp.mpf(1.0) * mp.log(mp.log(30))
        y = mp.e ** (mp.log(30) / z)
    assert pars30.gap_exp == pytest.approx(float(z), rel=1e-12)
    assert pars30.small_prime_bound == pytest.approx(float(y), rel=1e-12)
    assert pars30.gap_exp == pytest.approx(1.2241275407015419, rel=1e-13)
    assert pars30.small_prime_bound == pytest.approx(16.094321610556097, rel=1e-13)


def test_params_1e6():
    pars = make_params(10**6, 1.0)
    with mp.workdps(40):
        z = mp.log(mp.log(10**6))
        y = mp.e ** (mp.log(10**6) / z)
    assert pars.gap_exp == pytest.approx(float(z), rel=1e-12)
    assert pars.small_prime_bound == pytest.approx(float(y), rel=1e-12)
    assert pars.small_prime_bound == pytest.approx(192.7635587332766, rel=1e-12)


def test_params_capped_cutoff():
    pars = make_params(16, 1e-3)
    assert pars.gap_exp < 1
    assert pars.small_prime_bound == 16.0


@pytest.mark.parametrize("x,c", [(30, 0.5), (100, 1.0), (2000, 2.0), (10**6, 1.0)])
def test_params_recompute_consistency(x, c):
    pars = make_params(x, c)
    with mp.workdps(40):
        z = mp.mpf(c) * mp.log(mp.log(x))
        y = mp.mpf(x) if z <= 1 else mp.e ** (mp.log(x) / z)
    assert pars.gap_exp == pytest.approx(float(z), rel=1e-12)
    assert pars.small_prime_bound == pytest.approx(float(y), rel=1e-12)
    assert pars.small_prime_bound <= x
    assert (pars.small_prime_bound == x) == (pars.gap_exp <= 1)


def test_params_rejects_bad_input():
    with pytest.raises(ValueError):
        make_params(15, 1.0)
    with pytest.raises(ValueError):
        make_params(30, 0.0)
    with pytest.raises(ValueError):
        make_params(30, -2.0)


# ---------------------------------------------------------------- predicates


def test_isolated_examples(table_small, pars30):
    cases = [
        (10, 5, True),  # window (5, 7.17] holds 7, and 7 does not divide 10
        (30, 5, True),
        (14, 2, True),  # window (2, 2.34] holds no prime at all
        (14, 7, True),
        (20, 2, True),
        (15, 2, False),  # 2 does not divide 15
        (10, 2, True),
        (35, 5, False),  # 7 | 35 and 7 <= 5**E
    ]
    for n, p, expect in cases:
        assert is_isolated(factorize(n, table_small), p, pars30) is expect


def test_all_isolated_examples(table_small, pars30):
    assert all_isolated(factorize(20, table_small), (2, 5), pars30)
    assert not all_isolated(factorize(15, table_small), (2, 5), pars30)
    assert all_isolated(factorize(7, table_small), (), pars30)  # empty product


def test_gap_form_examples(table_small, pars30):
    assert is_gap_form(factorize(25, table_small), pars30)  # omega = 1, vacuous
    assert is_gap_form(factorize(1, table_small), pars30)
    assert not is_gap_form(factorize(6, table_small), pars30)  # 3 > 2**E
    assert not is_gap_form(factorize(30, table_small), pars30)


# ---------------------------------------------------------------- direct counts


def test_direct_counts_30(table_small, pars30):
    d = direct_counts(pars30, table_small)
    assert d.n_direct == 5
    assert d.n_direct_gapform == 17
    assert d.smooth_gap_count == 12
    assert d.n_direct + d.smooth_gap_count == d.n_direct_gapform

    # the counted set, re-derived from the public predicates
    counted = []
    for fact in segment_factor_scan(1, 31, table_small):
        smalls = [p for p in fact.primes if boundary.le_root(p, 30, 1.0)]
        if all(not is_isolated(fact, p, pars30) for p in smalls):
            counted.append(fact.n)
    assert counted == [1, 17, 19, 23, 29]


def test_direct_counts_vacuous_when_no_small_primes(table_small):
    pars = make_params(16, 100.0)
    assert pars.small_prime_bound < 2
    d = direct_counts(pars, table_small)
    assert d.n_direct == 16
    assert d.n_direct_gapform == 16
    assert d.smooth_gap_count == 0


@pytest.mark.parametrize("x,c", [(30, 1.0), (100, 0.5), (100, 2.0), (300, 1.0)])
def test_gapform_splits_exactly(table_small, x, c):
    # gap-form integers are the direct set plus the smooth gap-form ones
    pars = make_params(x, c)
    d = direct_counts(pars, table_small)
    assert d.n_direct + d.smooth_gap_count == d.n_direct_gapform
    smooth = 0
    for fact in segment_factor_scan(2, x + 1, table_small):
        if is_gap_form(fact, pars) and boundary.le_root(fact.largest_prime, x, c):
            smooth += 1
    assert smooth == d.smooth_gap_count


# ---------------------------------------------------------------- the wide set


def test_wide_set_30(table_small, pars30):
    members = wide_squarefree_set(pars30, table_small)
    by_k = {}
    for w in members:
        by_k.setdefault(w.k, []).append(w.m)
    assert len(members) == 15
    assert by_k[0] == [1]
    assert by_k[1] == [2, 3, 5, 7, 11, 13]
    assert by_k[2] == [6, 10, 14, 15, 21, 22, 26]
    assert by_k[3] == [30]
    # ascending by (k, m)
    keys = [(w.k, w.m) for w in members]
    assert keys == sorted(keys)


def test_wide_set_member_invariants(table_small, pars30):
    for w in wide_squarefree_set(pars30, table_small):
        prod = 1
        for p in w.primes:
            prod *= p
        assert prod == w.m
        assert len(set(w.primes)) == w.k
        assert w.m <= pars30.x
        for p in w.primes:
            assert boundary.le_root(p, pars30.x, pars30.c)
        for a, b in zip(w.primes, w.primes[1:]):
            assert boundary.gt_power(b, a, pars30.x, pars30.c)
        assert window_set(w, pars30).is_disjoint()


def test_wide_set_30_c3(table_small):
    pars = make_params(30, 3.0)
    assert [w.m for w in wide_squarefree_set(pars, table_small)] == [1, 2]


@pytest.mark.parametrize("x,c", [(30, 1.0), (100, 0.5), (100, 2.0), (300, 1.0)])
def test_wide_set_matches_bruteforce(table_small, x, c):
    pars = make_params(x, c)
    got = [(w.m, w.primes) for w in wide_squarefree_set(pars, table_small)]
    assert got == oracle.naive_wide_squarefree(x, c)


def test_wide_set_requires_table_reach():
    pars = make_params(10**6, 1.0)  # cutoff ~192.76
    with pytest.raises(InsufficientTableError):
        wide_squarefree_set(pars, build_prime_table(100))


# ---------------------------------------------------------------- inner counts


def test_inner_count_examples(table_small, pars30):
    by_m = {w.m: w for w in wide_squarefree_set(pars30, table_small)}
    assert count_isolated_set(by_m[5], pars30, table_small) == 6
    assert count_isolated_set(by_m[22], pars30, table_small) == 1
    assert count_isolated_set(by_m[1], pars30, table_small) == 30


def test_inner_count_strategies_agree(table_small, pars30):
    for w in wide_squarefree_set(pars30, table_small):
        a = count_isolated_set(w, pars30, table_small, strategy="stream")
        b = count_isolated_set(w, pars30, table_small, strategy="sieve")
        assert a == b == oracle.naive_chi_count(w.primes, 30, 1.0)
    with pytest.raises(ValueError):
        count_isolated_set(w, pars30, table_small, strategy="guess")


def test_inner_count_auto_sieve_path(table_1e6):
    # x/m large enough that the default picks the sieve; stream must agree
    pars = make_params(150_001, 1.0)
    members = wide_squarefree_set(pars, table_1e6)
    one = next(w for w in members if w.m == 1)
    two = next(w for w in members if w.m == 2)
    for w in (one, two):
        assert count_isolated_set(w, pars, table_1e6) == count_isolated_set(
            w, pars, table_1e6, strategy="stream"
        )


# ---------------------------------------------------------------- breakdown


def test_breakdown_30(table_small, pars30):
    bd = inclusion_exclusion(pars30, table_small)
    assert [(l.k, l.m_count, l.count) for l in bd.per_k] == [
        (0, 1, 30),
        (1, 6, 39),
        (2, 7, 15),
        (3, 1, 1),
    ]
    assert bd.bonferroni == ((0, 30), (1, -9), (2, 6), (3, 5))
    assert bd.n_inclusion_exclusion == 5 == bd.n_direct


def test_breakdown_16_large_c(table_small):
    bd = inclusion_exclusion(make_params(16, 100.0), table_small)
    assert [(l.k, l.m_count, l.count) for l in bd.per_k] == [(0, 1, 16)]
    assert bd.n_inclusion_exclusion == 16 == bd.n_direct


def test_breakdown_degenerate_exponent(table_small):
    # E < 1: every window is empty, so only n = 1 survives and the
    # alternating sum collapses to the classical floor-sum identity
    pars = make_params(100, 0.5)
    assert pars.gap_exp < 1
    bd = inclusion_exclusion(pars, table_small)
    assert bd.n_direct == 1
    assert bd.n_inclusion_exclusion == 1
    assert bd.n_inclusion_exclusion == oracle.naive_N(100, 0.5)


def test_breakdown_matches_oracle_small_grid(table_small):
    for x, c in ((30, 0.5), (30, 2.0), (100, 1.0)):
        bd = inclusion_exclusion(make_params(x, c), table_small)
        assert bd.n_inclusion_exclusion == bd.n_direct == oracle.naive_N(x, c)


def test_boundary_robustness(table_small):
    for x, c in ((30, 1.0), (1000, 0.5), (300, 2.0)):
        pars = make_params(x, c)
        fast = inclusion_exclusion(pars, table_small)
        with boundary.force_extended():
            slow = inclusion_exclusion(pars, table_small)
        assert fast == slow


# ---------------------------------------------------------------- densities


def test_window_density_trivial(table_small, pars30):
    by_m = {w.m: w for w in wide_squarefree_set(pars30, table_small)}
    prod, pred = window_coprime_density(by_m[1], pars30, table_small)
    assert prod == 1.0 and pred == 1.0


def test_window_density_m5(table_small, pars30):
    by_m = {w.m: w for w in wide_squarefree_set(pars30, table_small)}
    prod, pred = window_coprime_density(by_m[5], pars30, table_small)
    assert prod == pytest.approx(6 / 7, rel=1e-15)
    assert pred == pytest.approx(1 / pars30.gap_exp, rel=1e-15)


def test_window_density_mertens_spot(table_1e6):
    pars = make_params(10**6, 1.0)
    by_m = {w.m: w for w in wide_squarefree_set(pars, table_1e6)}
    prod, pred = window_coprime_density(by_m[53], pars, table_1e6)
    assert abs(prod * pars.gap_exp - 1.0) <= 4.0 / math.log(53)
    # independent recomputation of the product over the window primes
    z = pars.gap_exp
    direct = 1.0
    for q in range(54, int(math.exp(z * math.log(53))) + 1):
        if oracle.naive_factorize(q).omega == 1 and oracle.naive_factorize(q).factors[0][1] == 1:
            if math.log(q) <= z * math.log(53):
                direct *= 1.0 - 1.0 / q
    assert prod == pytest.approx(direct, rel=1e-9)


# ---------------------------------------------------------------- tuple sums


def test_tuple_sum_k0(table_small, pars30):
    assert tuple_reciprocal_sum(pars30, 0, table_small) == 1.0


def test_tuple_sum_30_frozen(table_small, pars30):
    # sums of the listed members: 1/2+1/3+1/5+1/7+1/11+1/13 and the seven pairs
    s1 = tuple_reciprocal_sum(pars30, 1, table_small)
    assert s1 == pytest.approx(1.344022644022644, rel=1e-13)
    s2 = tuple_reciprocal_sum(pars30, 2, table_small)
    assert s2 == pytest.approx(
        1 / 6 + 1 / 10 + 1 / 14 + 1 / 15 + 1 / 21 + 1 / 22 + 1 / 26, rel=1e-13
    )
    assert tuple_reciprocal_sum(pars30, 3, table_small) == pytest.approx(1 / 30, rel=1e-13)


def test_tuple_sum_unconstrained(table_small, pars30):
    # recompute both variants with a plain double loop over prime pairs
    yp = [
        int(p)
        for p in table_small.primes
        if boundary.le_root(int(p), 30, 1.0)
    ]
    free = sum(
        1.0 / (p * q)
        for p, q in combinations(yp, 2)
        if boundary.gt_power(q, p, 30, 1.0)
    )
    capped = sum(
        1.0 / (p * q)
        for p, q in combinations(yp, 2)
        if boundary.gt_power(q, p, 30, 1.0) and p * q <= 30
    )
    assert tuple_reciprocal_sum(pars30, 2, table_small, constrain_product=False) == (
        pytest.approx(free, rel=1e-13)
    )
    assert tuple_reciprocal_sum(pars30, 2, table_small) == pytest.approx(capped, rel=1e-13)
    assert free > capped


def test_tuple_sum_rejects_negative_k(table_small, pars30):
    with pytest.raises(ValueError):
        tuple_reciprocal_sum(pars30, -1, table_small)


def test_tuple_sum_agrees_with_layer_membership(table_small, pars30):
    members = wide_squarefree_set(pars30, table_small)
    for k in (1, 2, 3):
        direct = math.fsum(1.0 / w.m for w in members if w.k == k)
        assert tuple_reciprocal_sum(pars30, k, table_small) == pytest.approx(
            direct, rel=1e-13
        )
