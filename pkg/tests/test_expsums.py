import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import decimal_pow
from psquares.errors import BudgetExceeded, DegenerateExponents, PreconditionError
from psquares.exppairs import TRIVIAL
from psquares.expsums import (
    DyadicBox,
    alpha_near_two,
    choose_H,
    compare,
    e1_truncated,
    e2_bound_as_stated,
    e2_bound_symmetric,
    load_calibration,
    pair_bound_single,
    psi_sum_direct,
    rs_bound,
    triple_sum,
)

G = 2 / 3
ALPHAS = (G, 2 * G, 2 * G)


def direct_triple(X, alphas, box):
    """Unvectorised definition for cross-checking."""
    Ms = (box.M1, box.M2, box.M3)
    total = 0.0
    for m2 in range(box.M2 + 1, 2 * box.M2 + 1):
        for m3 in range(box.M3 + 1, 2 * box.M3 + 1):
            inner = 0j
            for m1 in range(box.M1 + 1, 2 * box.M1 + 1):
                t = X
                for m, M, a in zip((m1, m2, m3), Ms, alphas):
                    t *= (m / M) ** a
                inner += complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
            total += abs(inner)
    return total


def test_triple_sum_small_X_limit():
    box = DyadicBox(3, 2, 5)
    assert triple_sum(1e-12, ALPHAS, box) == pytest.approx(box.size, rel=1e-9)


def test_triple_sum_example_range_and_direct():
    box = DyadicBox(4, 4, 4)
    v = triple_sum(1.0, ALPHAS, box)
    assert 0 < v <= 64
    assert v == pytest.approx(direct_triple(1.0, ALPHAS, box), abs=1e-10)


def test_triple_sum_single_inner_sum():
    box = DyadicBox(7, 1, 1)
    X = 13.7
    m = np.arange(8, 15)
    phase = X * (m / 7) ** G * 2**ALPHAS[1] * 2**ALPHAS[2]
    assert triple_sum(X, ALPHAS, box) == pytest.approx(abs(np.exp(2j * np.pi * phase).sum()), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    st.floats(0.1, 500),
    st.integers(1, 6),
    st.integers(1, 6),
    st.integers(1, 6),
    st.sampled_from([F(4, 7), F(2, 3), F(4, 5)]),
    st.floats(0.3, 1.7),
)
def test_triple_sum_swap_symmetry_and_trivial_bound(X, M1, M2, M3, g, a3):
    a = (float(g), 2 * float(g), a3)
    v = triple_sum(X, a, DyadicBox(M1, M2, M3))
    w = triple_sum(X, (a[0], a[2], a[1]), DyadicBox(M1, M3, M2))
    assert v == pytest.approx(w, rel=1e-12, abs=1e-12)
    assert 0 <= v <= M1 * M2 * M3 + 1e-9


def test_triple_sum_errors():
    with pytest.raises(DegenerateExponents):
        triple_sum(1.0, (1.0, 1.5, 1.5), DyadicBox(2, 2, 2))
    with pytest.raises(DegenerateExponents):
        triple_sum(1.0, (0.5, 2.0, 1.5), DyadicBox(2, 2, 2))
    with pytest.raises(BudgetExceeded):
        triple_sum(1.0, ALPHAS, DyadicBox(100, 100, 100), budget=1000)
    with pytest.raises(PreconditionError):
        DyadicBox(0, 1, 1)
    assert alpha_near_two((0.5, 2.0 + 1e-12, 1.0))
    assert not alpha_near_two(ALPHAS)


def test_rs_bound_examples():
    assert rs_bound(100.0, DyadicBox(10, 10, 10)) == pytest.approx(2 * 10**2.5 + 10, rel=1e-12)
    assert rs_bound(1.0, DyadicBox(1, 1, 1)) == 3.0
    box = DyadicBox(4, 4, 4)
    assert (1e12 * 4**8) ** 0.25 / rs_bound(1e12, box) > 0.99


def test_pair_bound_single_examples():
    e = (F(11, 18) + 2 * F(2, 9) * F(2, 3)) / F(11, 9)
    assert pair_bound_single(1, 1000, 2, 0, F(2, 3)) == pytest.approx(1000 ** float(e) + 0.1, rel=1e-12)
    assert pair_bound_single(1, 1, 1, 0, F(2, 3)) == 2.0
    assert pair_bound_single(1, 500, 1, 0, F(2, 3), TRIVIAL) == pytest.approx(500 + 500 ** (1 / 3))
    with pytest.raises(PreconditionError):
        pair_bound_single(1, 10, 3, 0, F(2, 3))
    with pytest.raises(PreconditionError):
        pair_bound_single(1, 10, 1, 0, F(1, 3))


def test_psi_sum_direct_example():
    v = decimal_pow(2, F(2, 3), 60)
    expected = float(v - int(v)) - 0.5
    assert psi_sum_direct(1, 1, 1, 0, F(2, 3)) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.0874, abs=1e-4)


def test_psi_sum_direct_against_decimal_oracle():
    y, N, d, sigma, g = F(3, 7), 40, 2, F(1), F(4, 5)
    total = 0.0
    for n in range(N + 1, 2 * N + 1):
        base = F(n**d) + sigma
        v = decimal_pow(base.numerator, g, 60) * 3 / 7  # base is an integer here
        total += float(v - int(v)) - 0.5
    # bulk fractional parts are good to a few ulps of the value (about 500 here)
    assert psi_sum_direct(y, N, d, sigma, g) == pytest.approx(total, abs=N * 500 * 2.0**-44)


def test_psi_per_term_antisymmetry():
    # psi(-x) = -psi(x) off the integers; integer arguments give -1/2 both ways
    for N in (1, 2, 5, 11, 30):
        cubes = sum(1 for t in range(1, 10) if N < t**3 <= 2 * N)
        a = psi_sum_direct(1, N, 1, 0, F(2, 3))
        b = psi_sum_direct(-1, N, 1, 0, F(2, 3))
        assert a + b == pytest.approx(-cubes, abs=1e-12)


def test_psi_sum_small_y_limit():
    assert psi_sum_direct(F(1, 10**12), 50, 1, 0, F(2, 3)) == pytest.approx(-25, abs=1e-6)


def test_psi_sum_budget():
    with pytest.raises(BudgetExceeded):
        psi_sum_direct(1, 10**6, 1, 0, F(2, 3), budget=1000)


def test_compare():
    c = compare(-3.0, 6.0)
    assert c.exact_abs_sum == 3.0 and c.ratio == 0.5
    assert compare(1.0, 0.0).ratio == math.inf


def test_choose_H_and_trivial_truncation():
    assert choose_H(F(3, 2), 10, 1000) == math.floor(10**0.3 * 1000 ** (0.15 - 0.2))
    assert choose_H(F(3, 2), 1, 10) == 0
    t = e1_truncated(F(3, 2), 1, 10, 0)
    assert t.trivial and t.total == t.remainder == pytest.approx(10**0.75)


def test_e1_truncated_remainder_decreases():
    reps = [e1_truncated(F(3, 2), 10, 1000, H) for H in (1, 2, 4, 8)]
    assert reps[2].H == 4 and math.isfinite(reps[2].total) and not reps[2].trivial
    rems = [r.remainder for r in reps]
    assert rems == sorted(rems, reverse=True)


def test_e1_truncated_single_d_box_is_double_sum():
    # S = 1: only d = r = 1, so every inner sum has modulus 1
    c = F(3, 2)
    N, H = 100, 5
    mcount = math.isqrt(math.floor(N**1.5))
    t = e1_truncated(c, 1, N, H)
    assert t.fourier_part == pytest.approx(mcount * sum(1 / h for h in range(1, H + 1)), rel=1e-12)


def test_e2_evaluators_differ():
    assert e2_bound_as_stated(F(3, 2), 1, 10**4) == pytest.approx(10**3.25 + 10**-2)
    assert e2_bound_symmetric(F(3, 2), 1, 10**4) == pytest.approx(10**3.2 + 10**-2)


def test_packaged_calibration_is_pinned():
    cal = load_calibration()
    assert 0 < cal["rs_max_ratio"] <= 10
    assert 0 < cal["pair_max_ratio"] <= 10
    assert cal["pair"] == ["2/9", "11/18"] and cal["regression_tolerance"] == 0.05
