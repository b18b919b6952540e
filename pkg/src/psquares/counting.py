"""Exact counts of square classes in ``[n^c]`` and the S0 - E1 + E2 split.

``Q_c(s, N)`` counts ``n <= N`` with ``[n^c] = s m^2``; the averaged count
``Qfrak_c(S, N)`` sums it over square-free ``s <= S``.  Scans over ``n``
run in fixed-size blocks and merge in block order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import gmpy2
import numpy as np

from .arith import certified_fracs, floor_pow, floor_pow_array, parse_c
from .bounds import (
    DEFAULT_PAIR,
    BoundProfile,
    error_bound_Q,
    error_bound_theorem,
    main_term_Q,
    main_term_Qfrak,
)
from .errors import BudgetExceeded, PreconditionError
from .exppairs import ExponentPair
from .sieves import isqrt_array, mobius_sieve, squarefree_parts

BLOCK = 1 << 18
PAIR_BUDGET = 50_000_000
RESIDUAL_BOUND = 2


@dataclass(frozen=True)
class CountReport:
    kind: str  # "Q" or "Qfrak"
    c: Fraction
    s_or_S: int
    N: int
    exact_count: int
    main_term: float
    deviation: float
    bound: Optional[BoundProfile] = field(default=None, repr=False)


@dataclass(frozen=True)
class DecompositionReport:
    c: Fraction
    S: int
    N: int
    S0: float
    E1: float
    E2: float
    Qfrak_exact: int
    residual: float
    pairs: int


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if int(value) != value or value < 1:
            raise PreconditionError(f"{name} must be a positive integer, got {value}")


def iter_floor_blocks(c, N: int, block: int = BLOCK) -> Iterator[np.ndarray]:
    """Certified ``[n^c]`` for ``n = 1..N`` in consecutive blocks."""
    for start in range(1, N + 1, block):
        ns = np.arange(start, min(start + block, N + 1), dtype=np.int64)
        yield floor_pow_array(ns, c)


def q_indicator(c, s: int, N: int) -> np.ndarray:
    """Boolean array over ``n = 1..N``: is ``[n^c]`` of the form ``s m^2``?"""
    c = parse_c(c)
    _check_positive(s=s, N=N)
    parts = []
    for k in iter_floor_blocks(c, N):
        div = k % s == 0
        t = k // s
        r = isqrt_array(t)
        parts.append(div & (r * r == t) & (t > 0))
    return np.concatenate(parts)


def squarefree_kernels(c, N: int) -> np.ndarray:
    """Square-free part of ``[n^c]`` for ``n = 1..N``."""
    c = parse_c(c)
    _check_positive(N=N)
    return np.concatenate([squarefree_parts(k)[0] for k in iter_floor_blocks(c, N)])


def count_Q(c, s: int, N: int, pair: ExponentPair = DEFAULT_PAIR) -> CountReport:
    c = parse_c(c)
    count = int(np.count_nonzero(q_indicator(c, s, N)))
    main = main_term_Q(c, s, N)
    return CountReport("Q", c, s, N, count, main, count - main, error_bound_Q(c, s, N, pair))


def count_Q_by_m(c, s: int, N: int) -> int:
    """Same count as :func:`count_Q`, enumerating ``m`` instead of ``n``.

    ``[n^c] = k`` iff ``k^(1/c) <= n < (k+1)^(1/c)``, so each ``k = s m^2``
    contributes ``ceil((k+1)^g) - ceil(k^g)`` with ``g = 1/c``.
    """
    c = parse_c(c)
    _check_positive(s=s, N=N)
    top = floor_pow(N, c).floor_value
    p, q = c.numerator, c.denominator  # g = q/p

    def ceil_root(k: int) -> int:
        r, exact = gmpy2.iroot(gmpy2.mpz(k) ** q, p)
        return int(r) if exact else int(r) + 1

    total, m = 0, 1
    while s * m * m <= top:
        k = s * m * m
        total += ceil_root(k + 1) - ceil_root(k)
        m += 1
    return total


def clamp_S(c, S: int, N: int) -> int:
    top = floor_pow(N, parse_c(c)).floor_value
    if S > top:
        warnings.warn(f"S={S} exceeds [N^c]={top}; clamping", stacklevel=3)
        return top
    return S


def count_Qfrak(c, S: int, N: int, pair: ExponentPair = DEFAULT_PAIR) -> CountReport:
    c = parse_c(c)
    _check_positive(S=S, N=N)
    S = clamp_S(c, S, N)
    count = 0
    for k in iter_floor_blocks(c, N):
        count += int(np.count_nonzero(squarefree_parts(k)[0] <= S))
    main = main_term_Qfrak(c, S, N)
    return CountReport("Qfrak", c, S, N, count, main, count - main, error_bound_theorem(c, S, N, pair))


def count_squarefree_values(c, x: int) -> int:
    """``#{n <= x : [n^c] square-free}``."""
    c = parse_c(c)
    _check_positive(x=x)
    total = 0
    for k in iter_floor_blocks(c, x):
        total += int(np.count_nonzero(squarefree_parts(k)[0] == k))
    return total


def squarefree_upto(limit: int) -> np.ndarray:
    mu = mobius_sieve(limit).values
    return np.flatnonzero(mu != 0).astype(np.int64)


def pair_count(c, S: int, N: int) -> int:
    """Number of ``(s, m)`` with ``s <= S`` square-free and ``s m^2 <= N^c``."""
    top = floor_pow(N, parse_c(c)).floor_value
    s = squarefree_upto(S)
    return int(isqrt_array(top // s).sum())


def decompose_S0_E1_E2(c, S: int, N: int, budget: int = PAIR_BUDGET) -> DecompositionReport:
    """Evaluate S0, E1, E2 by enumerating ``(s, m)`` pairs.

    With ``a = (s m^2)^g`` and ``b = (s m^2 + 1)^g`` each pair contributes
    ``b - a`` to S0, ``psi(-a)`` to E1 and ``psi(-b)`` to E2; the number of
    integers in ``[a, b)`` is exactly ``(b - a) - psi(-a) + psi(-b)``.
    """
    c = parse_c(c)
    _check_positive(S=S, N=N)
    S = clamp_S(c, S, N)
    g = 1 / c
    gf = float(g)
    top = floor_pow(N, c).floor_value
    if top >= 2**62:
        raise BudgetExceeded(f"[N^c] = {top} exceeds the int64 range of the enumeration")
    s_values = squarefree_upto(S)
    m_max = isqrt_array(top // s_values)
    pairs = int(m_max.sum())
    if pairs > budget:
        raise BudgetExceeded(f"{pairs} pairs exceed the budget of {budget}")
    s0_parts, e1_parts, e2_parts = [], [], []
    for s, mm in zip(s_values.tolist(), m_max.tolist()):
        m = np.arange(1, mm + 1, dtype=np.int64)
        x = s * m * m
        _, fa, ia = certified_fracs(x, g)
        _, fb, ib = certified_fracs(x + 1, g)
        a = np.power(x.astype(np.float64), gf)
        width = a * np.expm1(gf * np.log1p(1.0 / x))
        s0_parts.append(float(np.sum(width)))
        e1_parts.append(float(np.sum(np.where(ia, -0.5, 0.5 - fa))))
        e2_parts.append(float(np.sum(np.where(ib, -0.5, 0.5 - fb))))
    S0, E1, E2 = math.fsum(s0_parts), math.fsum(e1_parts), math.fsum(e2_parts)
    exact = count_Qfrak(c, S, N).exact_count
    return DecompositionReport(c, S, N, S0, E1, E2, exact, exact - (S0 - E1 + E2), pairs)
