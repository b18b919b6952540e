import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_is_squarefree, brute_mobius, brute_squarefree_part
from psquares.errors import LimitTooLarge, PreconditionError
from psquares.sieves import (
    count_squarefree_upto,
    icbrt,
    is_squarefree,
    isqrt_array,
    mobius_sieve,
    squarefree_mask,
    squarefree_part,
    squarefree_parts,
)


def test_mobius_examples():
    assert mobius_sieve(6).tolist() == [1, -1, -1, 0, -1, 1]
    t = mobius_sieve(30)
    assert t[4] == 0 and t[30] == -1 and t[1] == 1


def test_mobius_matches_brute_force():
    t = mobius_sieve(2000)
    assert t.tolist() == [brute_mobius(n) for n in range(1, 2001)]


def test_mobius_table_is_immutable():
    t = mobius_sieve(10)
    with pytest.raises(ValueError):
        t.values[3] = 5


def test_mobius_budget():
    with pytest.raises(LimitTooLarge):
        mobius_sieve(1000, budget=100)
    with pytest.raises(PreconditionError):
        mobius_sieve(0)


def test_mobius_divisor_sum_detects_squarefree():
    mu = mobius_sieve(400).values
    for n in range(1, 10**5, 37):
        total = sum(int(mu[d]) for d in range(1, math.isqrt(n) + 1) if n % (d * d) == 0)
        assert total == int(brute_is_squarefree(n))


@pytest.mark.parametrize("k,s,m", [(12, 3, 2), (1, 1, 1), (360, 10, 6), (2021, 2021, 1), (49, 1, 7)])
def test_squarefree_part_examples(k, s, m):
    d = squarefree_part(k)
    assert (d.s, d.m) == (s, m)


def test_is_squarefree_examples():
    assert is_squarefree(1) and not is_squarefree(18) and is_squarefree(2021)


def test_squarefree_part_matches_brute_force():
    for k in range(1, 3000):
        d = squarefree_part(k)
        assert (d.s, d.m) == brute_squarefree_part(k)


@given(st.integers(1, 10**12))
def test_squarefree_part_reconstructs(k):
    d = squarefree_part(k)
    assert d.s * d.m**2 == k
    assert brute_is_squarefree(d.s) if d.s < 10**7 else True


def test_squarefree_part_large_prime_square_cofactor():
    p, q = 1_000_003, 999_983
    assert squarefree_part(6 * p * p) == squarefree_part(6 * p * p)
    d = squarefree_part(6 * p * p)
    assert (d.s, d.m) == (6, p)
    d = squarefree_part(p * q)
    assert (d.s, d.m) == (p * q, 1)


def test_vectorised_parts_match_scalar():
    ks = np.arange(1, 10**6 + 1, dtype=np.int64)
    s, m = squarefree_parts(ks)
    assert np.array_equal(s * m * m, ks)
    for k in range(1, 10**6 + 1, 997):
        d = squarefree_part(k)
        assert (s[k - 1], m[k - 1]) == (d.s, d.m)
    big = np.array([6 * 1_000_003**2, 2**40, 3**25 * 5, 999_999_999_989], dtype=np.int64)
    s, m = squarefree_parts(big)
    for k, si, mi in zip(big.tolist(), s.tolist(), m.tolist()):
        d = squarefree_part(k)
        assert (si, mi) == (d.s, d.m)


def test_count_squarefree_examples():
    assert count_squarefree_upto(10) == 7
    assert count_squarefree_upto(1) == 1
    assert count_squarefree_upto(100) == 61


def test_count_squarefree_matches_enumeration():
    mask = squarefree_mask(np.arange(1, 10**5 + 1))
    running = np.cumsum(mask)
    for x in list(range(1, 500)) + list(range(500, 10**5 + 1, 613)):
        assert count_squarefree_upto(x) == running[x - 1]


def test_count_squarefree_density():
    for x in [10**3, 10**4, 10**5, 10**6, 10**7]:
        assert abs(count_squarefree_upto(x) - 6 * x / math.pi**2) <= 3 * math.sqrt(x)


def test_root_helpers():
    assert [icbrt(k) for k in (0, 1, 7, 8, 26, 27, 10**18, 10**18 - 1)] == [0, 1, 1, 2, 2, 3, 10**6, 10**6 - 1]
    assert icbrt(10**60 + 5) == 10**20
    v = np.array([0, 1, 3, 4, 10**12, 10**12 - 1, 2**52 + 1])
    assert isqrt_array(v).tolist() == [math.isqrt(int(x)) for x in v]
