"""Closed-form main terms, competing error terms and the tau thresholds.

Error terms are sums of monomials ``S**a * N**(b + eps)``.  The default
``eps = 0`` replaces the proofs' ``N**eps`` losses; each profile also
carries a ``(log N)**3`` slack factor for callers that want it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arith import parse_c
from .errors import HypothesisViolated
from .exppairs import ExponentPair, apply_word, check_theorem_hypothesis, derived_exponents

DEFAULT_PAIR = apply_word("BABAAB")


def gamma_of(c) -> Fraction:
    return 1 / parse_c(c)


def main_term_Q(c, s, N) -> float:
    g = float(gamma_of(c))
    return g / (2 * g - 1) * float(s) ** -0.5 * float(N) ** (1 - float(parse_c(c)) / 2)


def main_term_Qfrak(c, S, N) -> float:
    g = float(gamma_of(c))
    return 12 * g / (math.pi**2 * (2 * g - 1)) * math.sqrt(S) * float(N) ** (1 - float(parse_c(c)) / 2)


@dataclass(frozen=True)
class BoundTerm:
    label: str
    monomials: tuple[tuple[Fraction, Fraction], ...]  # (S-exponent, N-exponent)
    value: float

    def n_exponent(self, beta=0) -> Fraction:
        """Growth exponent in N once ``S = N**beta`` is substituted."""
        beta = Fraction(beta)
        return max(a * beta + b for a, b in self.monomials)


def _term(label, monomials, S, N, eps) -> BoundTerm:
    mono = tuple((Fraction(a), Fraction(b)) for a, b in monomials)
    value = sum(math.exp(float(a) * math.log(S) + (float(b) + eps) * math.log(N)) for a, b in mono)
    return BoundTerm(label, mono, value)


@dataclass(frozen=True)
class BoundProfile:
    terms: tuple[BoundTerm, ...]
    additive: Optional[BoundTerm]
    combine: str  # "min" or "sum"
    min_label: str
    total: float
    slack: float
    epsilon: float = 0.0

    @property
    def term_values(self) -> list[tuple[str, float]]:
        return [(t.label, t.value) for t in self.terms]

    def term(self, label: str) -> BoundTerm:
        for t in self.terms:
            if t.label == label:
                return t
        if self.additive is not None and self.additive.label == label:
            return self.additive
        raise KeyError(label)

    @property
    def total_with_slack(self) -> float:
        return self.total * self.slack

    def n_exponent(self, beta=0, label: Optional[str] = None) -> Fraction:
        """N-exponent of the whole bound (or of one term) under ``S = N**beta``."""
        if label is not None:
            picked = [self.term(label)]
        elif self.combine == "min":
            picked = [min(self.terms, key=lambda t: t.n_exponent(beta))]
        else:
            picked = list(self.terms)
        if self.additive is not None:
            picked.append(self.additive)
        return max(t.n_exponent(beta) for t in picked)


def _profile(terms: Sequence[BoundTerm], additive, combine, N, eps) -> BoundProfile:
    best = min(terms, key=lambda t: t.value)
    if combine == "min":
        total = best.value
    else:
        total = sum(t.value for t in terms)
    if additive is not None:
        total += additive.value
    slack = max(math.log(N), 1.0) ** 3
    return BoundProfile(tuple(terms), additive, combine, best.label, total, slack, eps)


def error_bound_theorem(c, S, N, pair: ExponentPair = DEFAULT_PAIR, epsilon: float = 0.0) -> BoundProfile:
    """Minimum of the three competing terms plus ``S N**(1-c)``."""
    if not check_theorem_hypothesis(pair):
        raise HypothesisViolated(f"(1 - kappa)/2 > lambda - kappa for {pair}")
    c = parse_c(c)
    g = 1 / c
    k, l = pair.kappa, pair.lam
    terms = [
        _term("S^(1/5)N^((1+2c)/5)", [(Fraction(1, 5), (1 + 2 * c) / 5)], S, N, epsilon),
        _term("S^(1/8)N^((2+3c)/8)", [(Fraction(1, 8), (2 + 3 * c) / 8)], S, N, epsilon),
        _term(
            "pair",
            [(l / (1 + k) - Fraction(1, 2), k / (1 + k) + c / 2), (1 - g, Fraction(0))],
            S,
            N,
            epsilon,
        ),
    ]
    additive = _term("S*N^(1-c)", [(Fraction(1), 1 - c)], S, N, epsilon)
    return _profile(terms, additive, "min", N, epsilon)


def error_bound_lsz(c, S, N, epsilon: float = 0.0) -> BoundProfile:
    """The earlier four-term sum bound for the averaged count."""
    c = parse_c(c)
    terms = [
        _term("S^(1/5)N^((1+2c)/5)", [(Fraction(1, 5), (1 + 2 * c) / 5)], S, N, epsilon),
        _term("S^(1/8)N^((2+3c)/8)", [(Fraction(1, 8), (2 + 3 * c) / 8)], S, N, epsilon),
        _term("S^(5/8)N^(3c/8)", [(Fraction(5, 8), 3 * c / 8)], S, N, epsilon),
        _term("S*N^(1-c)", [(Fraction(1), 1 - c)], S, N, epsilon),
    ]
    return _profile(terms, None, "sum", N, epsilon)


def error_bound_Q(c, s, N, pair: ExponentPair = DEFAULT_PAIR, epsilon: float = 0.0) -> BoundProfile:
    """``s**-rho1 N**theta1 + s**-rho2 N**theta2`` for a fixed square class."""
    c = parse_c(c)
    d = derived_exponents(pair)
    terms = [
        _term("rho1/theta1", [(-d.rho1, d.theta1(c))], s, N, epsilon),
        _term("rho2/theta2", [(-d.rho2, d.theta2(c))], s, N, epsilon),
    ]
    return _profile(terms, None, "sum", N, epsilon)


def tau_lsz(c) -> Fraction:
    c = parse_c(c)
    return (8 - 3 * c) / 5 if c <= Fraction(12, 7) else 2 * (2 - c)


def tau_new(c) -> Fraction:
    """Threshold from the improved bound; the first branch is ``c - eps``.

    The value returned on that branch is ``c`` itself; see
    :func:`tau_new_has_epsilon`.
    """
    c = parse_c(c)
    return c if c <= Fraction(18, 11) else 3 * (2 - c)


def tau_new_has_epsilon(c) -> bool:
    return parse_c(c) <= Fraction(18, 11)
