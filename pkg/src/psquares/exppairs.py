"""Exact van der Corput exponent-pair calculus.

Pairs are generated from the trivial pair ``(0, 1)`` by the A and B
processes.  A word such as ``"BABAAB"`` is applied right to left, like
function composition, so ``apply_word("BA", p) == process_B(process_A(p))``.
All arithmetic uses :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from .errors import NoFeasiblePair, PreconditionError, RangeViolation

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ExponentPair:
    kappa: Fraction
    lam: Fraction
    provenance: str = field(default="axiom", compare=False)
    caveat: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kappa", Fraction(self.kappa))
        object.__setattr__(self, "lam", Fraction(self.lam))
        if not (0 <= self.kappa <= HALF <= self.lam <= 1):
            raise RangeViolation(f"({self.kappa}, {self.lam}) outside 0 <= kappa <= 1/2 <= lambda <= 1")

    def __iter__(self):
        yield self.kappa
        yield self.lam

    def __str__(self):
        return f"({self.kappa}, {self.lam})"


TRIVIAL = ExponentPair(Fraction(0), Fraction(1), "axiom")
# Bourgain's (13/84 + eps, 55/84 + eps) with eps dropped
BOURGAIN = ExponentPair(
    Fraction(13, 84),
    Fraction(55, 84),
    "external constant",
    caveat="epsilon dropped; derived ranges are suprema, not attained",
)


def _compose(letter: str, p: ExponentPair) -> str:
    if p.provenance == "axiom":
        return letter
    if set(p.provenance) <= {"A", "B"}:
        return letter + p.provenance
    return f"{letter}[{p.provenance}]"


def process_A(p: ExponentPair) -> ExponentPair:
    k, l = p.kappa, p.lam
    d = 2 * k + 2
    return ExponentPair(k / d, (k + l + 1) / d, _compose("A", p))


def process_B(p: ExponentPair) -> ExponentPair:
    if p.lam < HALF:
        raise RangeViolation(f"B needs lambda >= 1/2, got {p}")
    return ExponentPair(p.lam - HALF, p.kappa + HALF, _compose("B", p))


_PROCESSES = {"A": process_A, "B": process_B}


def apply_word(word: str, start: ExponentPair = TRIVIAL) -> ExponentPair:
    """Apply ``word`` to ``start``, rightmost letter first."""
    word = word.strip().upper()
    if not word or set(word) - set(_PROCESSES):
        raise PreconditionError(f"word must be a nonempty string over {{A, B}}, got {word!r}")
    p = start
    for letter in reversed(word):
        p = _PROCESSES[letter](p)
    return p


def parse_pair(text: str) -> ExponentPair:
    """Parse ``"BABAAB"`` (applied to (0, 1)) or an explicit ``"k/l,m/n"``."""
    text = text.strip()
    if "," in text:
        a, b = text.split(",", 1)
        try:
            return ExponentPair(Fraction(a.strip()), Fraction(b.strip()), "external constant")
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"cannot parse pair {text!r}") from exc
    return apply_word(text)


class Affine(NamedTuple):
    """``slope * c + intercept``."""

    slope: Fraction
    intercept: Fraction

    def __call__(self, c) -> Fraction:
        return self.slope * Fraction(c) + self.intercept


@dataclass(frozen=True)
class DerivedExponents:
    rho1: Fraction
    rho2: Fraction
    theta1: Affine
    theta2: Affine


def derived_exponents(p: ExponentPair) -> DerivedExponents:
    k, l = p.kappa, p.lam
    return DerivedExponents(
        rho1=l / (2 * (1 + k)),
        rho2=(l - k) / 2,
        theta1=Affine(l / (2 * (1 + k)), 2 * k / (2 * (1 + k))),
        theta2=Affine((l - k) / 2, k),
    )


def check_theorem_hypothesis(p: ExponentPair) -> bool:
    """Exact test of ``(1 - kappa)/2 <= lambda - kappa``."""
    return (1 - p.kappa) / 2 <= p.lam - p.kappa


def c_range_from_a(a) -> Fraction:
    """Upper end ``(6a + 5)/(4a + 3)`` of the c-range obtained from the pair (a, 1/2 + a)."""
    a = Fraction(a)
    if not 0 <= a <= HALF:
        raise PreconditionError(f"a must lie in [0, 1/2], got {a}")
    return (6 * a + 5) / (4 * a + 3)


def baba_closed_form(a) -> tuple[Fraction, Fraction]:
    a = Fraction(a)
    return (2 * a + 1) / (6 * a + 5), (4 * a + 3) / (6 * a + 5)


def half_ratio(p: ExponentPair) -> bool:
    """Constraint ``lambda / (1 + kappa) == 1/2``."""
    return p.lam / (1 + p.kappa) == HALF


def iter_words(max_word_len: int, start: ExponentPair = TRIVIAL) -> Iterable[tuple[str, ExponentPair]]:
    """Yield ``(word, pair)`` for the preferred word of each distinct pair.

    Words come in (length, lexicographic) order.  A word is dropped when an
    earlier word already produced its pair; left extensions of a dropped
    word would also lose every tie, so pruning is exact.
    """
    seen = {(start.kappa, start.lam)}
    level = [("", start)]
    yield level[0]
    for _ in range(max_word_len):
        nxt = []
        for letter in "AB":
            op = _PROCESSES[letter]
            for word, p in level:
                if letter == "B" and p.lam < HALF:
                    continue
                q = op(p)
                key = (q.kappa, q.lam)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((letter + word, q))
        level = nxt
        yield from level


@dataclass(frozen=True)
class SearchResult:
    word: str
    pair: ExponentPair
    value: Fraction


def search_pairs(
    objective: Callable[[ExponentPair], Fraction],
    constraints: Sequence[Callable[[ExponentPair], bool]] = (),
    max_word_len: int = 8,
    start: ExponentPair = TRIVIAL,
) -> SearchResult:
    """Minimise ``objective`` over words of length ``<= max_word_len``.

    Ties go to the shorter word, then the lexicographically smaller one.
    """
    if not 0 <= max_word_len <= 24:
        raise PreconditionError(f"max_word_len must lie in [0, 24], got {max_word_len}")
    best = None
    for word, p in iter_words(max_word_len, start):
        if not all(ok(p) for ok in constraints):
            continue
        value = objective(p)
        # enumeration order already encodes the tie-break
        if best is None or value < best.value:
            best = SearchResult(word, p, value)
    if best is None:
        raise NoFeasiblePair(f"no pair within {max_word_len} letters satisfies the constraints")
    return best
