import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import factor, naive_theta, omega_table, trial_primes
from upsilon.errors import SizingError
from upsilon.primecount import build_prime_count_table
from upsilon.sieve import (
    PrimeList,
    count_primes,
    map_indexed_prime_blocks,
    omega_segment,
    pi_two,
    primes_up_to,
    step_sweep,
    theta,
    theta_at_points,
)


@pytest.mark.parametrize(
    "limit, expected",
    [(10, [2, 3, 5, 7]), (1, []), (2, [2]), (0, [])],
)
def test_primes_up_to_examples(limit, expected):
    assert primes_up_to(limit).primes.tolist() == expected


def test_primes_up_to_matches_trial_division():
    got = primes_up_to(5000).primes.tolist()
    assert got == trial_primes(5000)


@pytest.mark.parametrize("segment_size", [1, 2, 7, 64, 1000])
def test_primes_independent_of_segment_size(segment_size):
    assert primes_up_to(3000, segment_size=segment_size).primes.tolist() == trial_primes(3000)


def test_prime_list_invariants():
    pl = primes_up_to(10_000)
    ps = pl.primes
    assert pl.limit == 10_000
    assert np.all(np.diff(ps) > 0)
    assert ps[-1] <= 10_000
    assert len(pl) == 1229


def test_count_primes():
    assert [count_primes(n) for n in (0, 1, 2, 10, 100, 1000)] == [0, 0, 1, 4, 25, 168]
    assert count_primes(10**6, segment_size=1 << 12, threads=3) == 78498


def test_primes_up_to_rejects_negative():
    with pytest.raises(ValueError):
        primes_up_to(-1)


# -- omega ---------------------------------------------------------------------


def test_omega_segment_examples():
    assert omega_segment(2, 11, primes_up_to(3)).omega.tolist() == [1, 1, 2, 1, 2, 1, 3, 2, 2]
    assert omega_segment(4, 5, primes_up_to(2)).omega.tolist() == [2]
    assert omega_segment(9973, 9974, primes_up_to(99)).omega.tolist() == [1]


def test_omega_segment_sizing_error():
    with pytest.raises(SizingError):
        omega_segment(2, 100, primes_up_to(5))


def test_omega_segment_bad_window():
    with pytest.raises(ValueError):
        omega_segment(5, 5, primes_up_to(5))
    with pytest.raises(ValueError):
        omega_segment(1, 5, primes_up_to(5))


@settings(max_examples=60, deadline=None)
@given(lo=st.integers(2, 10**12), width=st.integers(1, 300))
def test_omega_segment_matches_factorization(lo, width):
    hi = lo + width
    base = primes_up_to(math.isqrt(hi - 1))
    got = omega_segment(lo, hi, base).omega.tolist()
    assert got == [len(factor(n)) for n in range(lo, hi)]


def test_omega_segment_stitching():
    base = primes_up_to(math.isqrt(50_000))
    whole = omega_segment(2, 50_000, base).omega
    cuts = [2, 17, 1024, 1025, 30_000, 50_000]
    stitched = np.concatenate(
        [omega_segment(a, b, base).omega for a, b in zip(cuts[:-1], cuts[1:])]
    )
    assert np.array_equal(whole, stitched)


def test_omega_segment_is_read_only():
    seg = omega_segment(2, 20, primes_up_to(4))
    assert isinstance(seg, type(seg)) and len(seg) == 18
    with pytest.raises(ValueError):
        seg.omega[0] = 9


# -- theta -----------------------------------------------------------------------


def test_theta_examples():
    assert theta(1) == 0.0
    assert theta(2) == math.log(2)
    assert theta(10) == pytest.approx(math.log(210), rel=1e-15)


@pytest.mark.parametrize("x", [0, 3, 97, 100, 1000, 7919, 12_345, 100_000])
def test_theta_matches_trial_division(x):
    assert theta(x) == pytest.approx(naive_theta(x), rel=1e-9, abs=0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_theta_oracle_property(x):
    assert theta(x) == pytest.approx(naive_theta(x), rel=1e-9, abs=0)


def test_theta_monotone_and_threads_reproducible():
    xs = list(range(0, 400, 7))
    vals = [theta(x) for x in xs]
    assert vals == sorted(vals)
    assert theta(10**6, threads=1, segment_size=1 << 14) == theta(10**6, threads=4, segment_size=1 << 14)


# -- pi_two --------------------------------------------------------------------


def test_pi_two_examples():
    assert pi_two(3) == 0
    assert pi_two(10) == 4
    assert pi_two(100) == 34


def test_pi_two_brute_force_to_1e5():
    om = omega_table(100_000)
    running = np.cumsum(np.array(om) == 2)
    for x in list(range(0, 200)) + [999, 1000, 4095, 65_536, 99_999, 100_000]:
        assert pi_two(x) == running[x]


def test_pi_two_monotone():
    vals = [pi_two(x) for x in range(0, 300)]
    assert vals == sorted(vals)


def test_pi_two_against_prime_pair_count():
    # Independent route: semiprimes p*q with p <= q counted through pi(x // p).
    x = 10**6
    table = build_prime_count_table(x)
    ps = primes_up_to(math.isqrt(x)).primes.tolist()
    expected = sum(table.lookup(x // p) - i for i, p in enumerate(ps))
    assert pi_two(x) == expected == 210_035
    assert pi_two(x, segment_size=1 << 13, threads=3) == expected


# -- threshold sweeps ----------------------------------------------------------------


def test_theta_at_points_examples():
    res = theta_at_points(10, [1, 5, 10])
    assert res.theta_values[1] == pytest.approx(math.log(210), rel=1e-15)
    assert res.theta_values[5] == math.log(2)
    assert res.theta_values[10] == 0.0
    assert res.x == 10 and res.divisors == (1, 5, 10)


@settings(max_examples=40, deadline=None)
@given(x=st.integers(2, 200_000), ks=st.lists(st.integers(1, 5000), min_size=1, max_size=40))
def test_theta_at_points_agrees_with_theta(x, ks):
    res = theta_at_points(x, ks)
    for k in ks:
        assert res.theta_values[k] == pytest.approx(theta(x // k), rel=1e-9, abs=0)
    ordered = sorted(set(ks))
    vals = [res.theta_values[k] for k in ordered]
    assert vals == sorted(vals, reverse=True)


def test_theta_at_points_validation():
    with pytest.raises(ValueError):
        theta_at_points(1, [1])
    with pytest.raises(ValueError):
        theta_at_points(10, [0])


def test_step_sweep_last_prime_and_validation():
    sweep = step_sweep([0, 1, 2, 3, 4, 10, 11])
    assert sweep.last_prime.tolist() == [0, 0, 2, 3, 3, 7, 11]
    with pytest.raises(ValueError):
        step_sweep([5, 5])
    with pytest.raises(ValueError):
        step_sweep([[1, 2]])


def test_step_sweep_segment_independence():
    pts = [2, 3, 100, 101, 4096, 4097, 70_000]
    a = step_sweep(pts, with_integral=True)
    b = step_sweep(pts, with_integral=True, segment_size=97)
    np.testing.assert_allclose(a.theta, b.theta, rtol=1e-13)
    np.testing.assert_allclose(a.integral, b.integral, rtol=1e-13)
    assert a.last_prime.tolist() == b.last_prime.tolist()


def test_indexed_blocks_give_prime_ranks():
    out = map_indexed_prime_blocks(lambda ps, idx: list(zip(ps.tolist(), idx.tolist())), 2, 200, 2, 16)
    pairs = [pair for block in out for pair in block]
    assert pairs == [(p, i + 1) for i, p in enumerate(trial_primes(199))]
    tail = map_indexed_prime_blocks(lambda ps, idx: idx.tolist(), 100, 200, 1, 16)
    assert [i for block in tail for i in block][0] == 26


def test_prime_list_container_protocol():
    pl = PrimeList(limit=7, primes=np.array([2, 3, 5, 7]))
    assert list(pl) == [2, 3, 5, 7] and pl[2] == 5
