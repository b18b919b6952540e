"""Exponential sums behind E1/E2 and the bounds used to control them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .arith import certified_fracs, parse_c, parse_exponent
from .bounds import DEFAULT_PAIR
from .errors import BudgetExceeded, DegenerateExponents, PreconditionError
from .exppairs import ExponentPair
from .sieves import mobius_sieve

SUM_BUDGET = 10_000_000
_FSUM_THRESHOLD = 100_000
_NEAR_TWO = 1e-9


@dataclass(frozen=True)
class DyadicBox:
    """Ranges ``(M_i, 2 M_i]`` for the three summation variables."""

    M1: int
    M2: int
    M3: int

    def __post_init__(self):
        for m in (self.M1, self.M2, self.M3):
            if int(m) != m or m < 1:
                raise PreconditionError(f"box sizes must be positive integers, got {self}")

    @property
    def size(self) -> int:
        return self.M1 * self.M2 * self.M3


@dataclass(frozen=True)
class SumComparison:
    exact_abs_sum: float
    bound_value: float
    ratio: float


def _dyadic(M: int) -> np.ndarray:
    return np.arange(M + 1, 2 * M + 1, dtype=np.float64)


def _abs_exp_sum(phase: np.ndarray) -> float:
    """``|sum e(phase)|`` over the last axis-free 1-D array of phases."""
    t = 2.0 * np.pi * (phase - np.floor(phase))
    if phase.size > _FSUM_THRESHOLD:
        return math.hypot(math.fsum(np.cos(t)), math.fsum(np.sin(t)))
    return abs(np.exp(1j * t).sum())


def alpha_near_two(alphas) -> bool:
    """Flag (not reject) second exponents within 1e-9 of the excluded value 2."""
    return abs(float(alphas[1]) - 2.0) < _NEAR_TWO


def triple_sum(X: float, alphas: Sequence[float], box: DyadicBox, budget: int = SUM_BUDGET) -> float:
    """``sum_{m2, m3} |sum_{m1} e(X prod (m_i/M_i)^alpha_i)|`` over the box."""
    a1, a2, a3 = (float(a) for a in alphas)
    if a1 * a2 * a3 * (a1 - 1) * (a2 - 2) == 0:
        raise DegenerateExponents(f"alphas {alphas} violate the nondegeneracy condition")
    if X <= 0:
        raise PreconditionError(f"X must be positive, got {X}")
    if box.size > budget:
        raise BudgetExceeded(f"box of {box.size} terms exceeds budget {budget}")
    u1 = (_dyadic(box.M1) / box.M1) ** a1
    u2 = (_dyadic(box.M2) / box.M2) ** a2
    u3 = (_dyadic(box.M3) / box.M3) ** a3
    total = []
    for v2 in u2:
        for v3 in u3:
            total.append(_abs_exp_sum(X * v2 * v3 * u1))
    return math.fsum(total)


def rs_bound(X: float, box: DyadicBox) -> float:
    """``(X M1^2 M2^3 M3^3)^(1/4) + M1^(1/2) M2 M3 + X^-1 M1 M2 M3``."""
    if X <= 0:
        raise PreconditionError(f"X must be positive, got {X}")
    M1, M2, M3 = box.M1, box.M2, box.M3
    return (X * M1**2 * M2**3 * M3**3) ** 0.25 + math.sqrt(M1) * M2 * M3 + M1 * M2 * M3 / X


def pair_bound_single(y: float, N: int, d: int, sigma: float, gamma, pair: ExponentPair = DEFAULT_PAIR) -> float:
    """``|y|^(k/(1+k)) N^((l + d k g)/(1+k)) + |y|^-1 N^(1 - d g)``."""
    _check_single(y, N, d, sigma, gamma)
    g = float(parse_exponent(gamma))
    k, l = float(pair.kappa), float(pair.lam)
    y = abs(float(y))
    return y ** (k / (1 + k)) * N ** ((l + d * k * g) / (1 + k)) + N ** (1 - d * g) / y


def _check_single(y, N, d, sigma, gamma):
    if y == 0:
        raise PreconditionError("y must be nonzero")
    if int(N) != N or N < 1:
        raise PreconditionError(f"N must be a positive integer, got {N}")
    if d not in (1, 2):
        raise PreconditionError(f"d must be 1 or 2, got {d}")
    if not -1 <= sigma <= 1:
        raise PreconditionError(f"sigma must lie in [-1, 1], got {sigma}")
    if not Fraction(1, 2) < parse_exponent(gamma) < 1:
        raise PreconditionError(f"gamma must lie in (1/2, 1), got {gamma}")


def psi_sum_direct(y, N: int, d: int, sigma, gamma, budget: int = SUM_BUDGET) -> float:
    """``sum_{N < n <= 2N} psi(y (n^d + sigma)^gamma)`` with certified fractional parts.

    ``y``, ``sigma`` and ``gamma`` are taken as exact rationals (decimal
    literals are read exactly).
    """
    y, sigma, gamma = parse_rational(y), parse_rational(sigma), parse_exponent(gamma)
    _check_single(y, N, d, sigma, gamma)
    if N > budget:
        raise BudgetExceeded(f"N={N} exceeds budget {budget}")
    n = np.arange(N + 1, 2 * N + 1, dtype=np.int64)
    _, frac, _ = certified_fracs(n**d, gamma, offset=sigma, scale=y)
    return math.fsum((frac - 0.5).tolist())


def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"cannot parse {value!r} as a rational") from exc


def compare(exact: float, bound: float) -> SumComparison:
    exact = abs(exact)
    return SumComparison(exact, bound, exact / bound if bound > 0 else math.inf)


def choose_H(c, S: int, N: int) -> int:
    """``[S^(3/10) N^(c/10 - 1/5)]``."""
    c = float(parse_c(c))
    return math.floor(S**0.3 * N ** (c / 10 - 0.2))


@dataclass(frozen=True)
class TruncatedE1:
    H: int
    fourier_part: float
    remainder: float
    total: float
    trivial: bool
    terms: int


def e1_truncated(c, S: int, N: int, H: int, budget: int = SUM_BUDGET) -> TruncatedE1:
    """Fourier surrogate of |E1| after truncating psi at frequency ``H``.

    Evaluates ``sum_{h <= H} h^-1 sum_{m, d} |sum_r e(-h r^g d^2g m^2g)|``
    over every ``(m, d, r)`` with ``mu(d) != 0``, ``r d^2 <= S`` and
    ``r d^2 m^2 <= N^c``, plus the remainder ``S^(1/2) N^(c/2) / H``.  For
    ``H < 1`` the remainder is the trivial bound ``S^(1/2) N^(c/2)``.
    """
    c = parse_c(c)
    g = 1.0 / float(c)
    cap = S**0.5 * N ** (float(c) / 2)
    if H < 1:
        return TruncatedE1(H, 0.0, cap, cap, True, 0)
    Nc = float(N) ** float(c)
    dmax = math.isqrt(S)
    mu = mobius_sieve(max(dmax, 1)).values
    blocks = []
    for d in range(1, dmax + 1):
        if mu[d] == 0:
            continue
        m = 1
        while (d * m) ** 2 <= Nc:
            R = min(S // (d * d), int(Nc // (d * m) ** 2))
            if R >= 1:
                blocks.append((d * m, R))
            m += 1
    terms = H * sum(R for _, R in blocks)
    if terms > budget:
        raise BudgetExceeded(f"{terms} phase evaluations exceed budget {budget}")
    h = np.arange(1, H + 1, dtype=np.float64)
    fourier = []
    for t, R in blocks:
        r = np.arange(1, R + 1, dtype=np.float64)
        base = r**g * float(t) ** (2 * g)
        phases = np.multiply.outer(h, base)
        t_ = 2.0 * np.pi * (phases - np.floor(phases))
        sums = np.abs(np.exp(-1j * t_).sum(axis=1))
        fourier.append(float(np.sum(sums / h)))
    fp = math.fsum(fourier)
    rem = cap / H
    return TruncatedE1(H, fp, rem, fp + rem, False, terms)


def e2_bound_as_stated(c, S, N) -> float:
    """E2 bound as written after the truncation argument: S^(1/8) N^((2+3c)/8) + S N^(1-c)."""
    c = float(parse_c(c))
    return S ** 0.125 * N ** ((2 + 3 * c) / 8) + S * N ** (1 - c)


def e2_bound_symmetric(c, S, N) -> float:
    """E2 bound by symmetry with E1: S^(1/5) N^((1+2c)/5) + S N^(1-c)."""
    c = float(parse_c(c))
    return S**0.2 * N ** ((1 + 2 * c) / 5) + S * N ** (1 - c)


# ---- calibration of implicit constants ------------------------------------

RS_X = (1.0, 10.0, 100.0, 1000.0)
RS_M = (4, 8, 16, 32)
RS_GAMMAS = (Fraction(4, 7), Fraction(2, 3), Fraction(4, 5))

PAIR_N = (10, 100, 1000, 10_000)
PAIR_D = (1, 2)
PAIR_SIGMA = (Fraction(0), Fraction(1))
PAIR_Y = (Fraction(1), Fraction(-1))

REGRESSION_TOLERANCE = 0.05
CALIBRATION_FILE = "calibration.json"


def rs_ratio_grid():
    """Rows ``(X, M, gamma, ratio)`` over the 4 x 4 x 3 Robert-Sargos grid."""
    rows = []
    for g in RS_GAMMAS:
        alphas = (float(g), 2 * float(g), 2 * float(g))
        for M in RS_M:
            box = DyadicBox(M, M, M)
            for X in RS_X:
                rows.append((X, M, g, triple_sum(X, alphas, box) / rs_bound(X, box)))
    return rows


def pair_ratio_grid(pair: ExponentPair = DEFAULT_PAIR):
    """Rows ``(y, N, d, sigma, gamma, ratio)`` for |psi sum| / pair bound."""
    rows = []
    for g in RS_GAMMAS:
        for N in PAIR_N:
            for d in PAIR_D:
                for sigma in PAIR_SIGMA:
                    for y in PAIR_Y:
                        val = abs(psi_sum_direct(y, N, d, sigma, g))
                        bound = pair_bound_single(float(y), N, d, float(sigma), g, pair)
                        rows.append((y, N, d, sigma, g, val / bound))
    return rows


def calibrate() -> dict:
    return {
        "rs_max_ratio": max(r[-1] for r in rs_ratio_grid()),
        "pair_max_ratio": max(r[-1] for r in pair_ratio_grid()),
        "pair": [str(DEFAULT_PAIR.kappa), str(DEFAULT_PAIR.lam)],
        "regression_tolerance": REGRESSION_TOLERANCE,
    }


def load_calibration(path: Optional[str] = None) -> dict:
    if path is None:
        text = resources.files("psquares").joinpath("data", CALIBRATION_FILE).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def write_calibration(path: str) -> dict:
    data = calibrate()
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return data
