"""Certified integer and fractional parts of rational powers.

Every exponent handled here is an exact rational ``p/q``.  Enclosures of
``x**(p/q)`` are built from exact integer ``q``-th roots of scaled powers,
so each returned floor is correct for all inputs, not merely likely.

Two entry styles exist.  The scalar functions (:func:`floor_pow`,
:func:`pow_interval`, :func:`frac_part_certified`) follow the refinement
loop literally.  The array kernel :func:`certified_fracs` evaluates in
float64, accepts a result only when it is far from an integer relative to
the float error, and routes everything else through the exact path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import gmpy2
import numpy as np

from .errors import PrecisionExhausted, PreconditionError, DomainError

ExponentLike = Union[Fraction, int, str, float]

# float64 pow is within a few ulp; this accepts a float floor only when the
# value is ~2**12 ulp away from the nearest integer.
_REL_MARGIN = 2.0**-40
_FLOAT_LIMIT = 2.0**50
_FRAC_BITS = 60


def parse_exponent(value: ExponentLike) -> Fraction:
    """Convert ``value`` to an exact positive rational.

    Strings may be ``"p/q"`` or decimal literals (``"1.41"`` is 141/100).
    Floats are read through their shortest repr, so ``1.41`` also gives
    141/100 rather than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        out = value
    elif isinstance(value, bool):
        raise PreconditionError(f"not an exponent: {value!r}")
    elif isinstance(value, (int, Rational)):
        out = Fraction(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise PreconditionError(f"not an exponent: {value!r}")
        out = Fraction(repr(value))
    elif isinstance(value, str):
        try:
            out = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"cannot parse exponent {value!r}") from exc
    else:
        raise PreconditionError(f"not an exponent: {value!r}")
    if out <= 0:
        raise PreconditionError(f"exponent must be positive, got {out}")
    return out


def parse_c(value: ExponentLike, *, strict: bool = True) -> Fraction:
    """Parse the sequence exponent ``c``; enforce ``1 < c < 2`` by default."""
    c = parse_exponent(value)
    if c <= 1:
        raise DomainError(f"c must exceed 1, got {c}")
    if strict and c >= 2:
        raise DomainError(f"c must lie in (1, 2), got {c}")
    return c


@dataclass(frozen=True)
class PrecisionPolicy:
    """Refinement schedule for :func:`floor_pow`."""

    initial_bits: int = 96
    growth: int = 2
    max_bits: int = 4096

    def __post_init__(self):
        if self.initial_bits < 16 or self.growth < 2 or self.max_bits < self.initial_bits:
            raise PreconditionError(f"invalid precision policy {self}")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class CertifiedFloorResult:
    n: int
    c: Fraction
    floor_value: int
    certifying_bits: int
    is_exact_integer: bool


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _scaled_floor(x: Fraction, e: Fraction, k: int, scale: Fraction = Fraction(1)):
    """Return ``(floor(scale * x**e * 2**k), exact)``.

    ``exact`` is true iff ``scale * x**e * 2**k`` is itself an integer.
    Uses ``floor(Y**(1/q)) == iroot(floor(Y), q)`` for real ``Y >= 0``.
    """
    if scale == 0:
        return 0, True
    a, b = x.numerator, x.denominator
    p, q = e.numerator, e.denominator
    u, v = abs(scale.numerator), scale.denominator
    num = u**q * a**p
    den = v**q * b**p
    if k >= 0:
        num <<= q * k
    else:
        den <<= -q * k
    whole, rem = divmod(num, den)
    root, is_root = gmpy2.iroot(gmpy2.mpz(whole), q)
    root = int(root)
    exact = rem == 0 and bool(is_root)
    if scale > 0:
        return root, exact
    return (-root, True) if exact else (-root - 1, False)


def _dyadic(m: int, k: int) -> Fraction:
    return Fraction(m, 1 << k) if k >= 0 else Fraction(m << -k)


def _log2_lower(x: Fraction, e: Fraction) -> int:
    # x > 2**t, hence x**e > 2**(e*t) >= 2**floor(e*t)
    t = x.numerator.bit_length() - x.denominator.bit_length() - 1
    return math.floor(e * t)


def pow_interval(x, c: ExponentLike, bits: int) -> tuple[Fraction, Fraction]:
    """Enclose ``x**c`` in a dyadic interval ``[lo, hi]``.

    The width is at most ``2**(4 - bits) * x**c``; the interval collapses to
    a point when ``x**c`` is an exact dyadic rational.  Raising ``bits``
    yields nested intervals.
    """
    x = _as_fraction(x)
    if x <= 0:
        raise PreconditionError(f"base must be positive, got {x}")
    if bits < 16:
        raise PreconditionError(f"bits must be >= 16, got {bits}")
    e = parse_exponent(c)
    k = bits - 4 - _log2_lower(x, e)
    low, exact = _scaled_floor(x, e, k)
    lo = _dyadic(low, k)
    return (lo, lo) if exact else (lo, _dyadic(low + 1, k))


def _is_exact_power(n: int, e: Fraction):
    root, ok = gmpy2.iroot(gmpy2.mpz(n) ** e.numerator, e.denominator)
    return int(root), bool(ok)


def floor_pow(n: int, c: ExponentLike, policy: PrecisionPolicy = DEFAULT_POLICY) -> CertifiedFloorResult:
    """Certified ``[n**c]`` for a positive integer ``n`` and rational ``c > 1``.

    Refines :func:`pow_interval` until ``floor(lo) == floor(hi)``.  Whenever
    an interval straddles an integer the exact-power test runs first, since
    an exact integer value can never be separated from itself.
    """
    n = int(n)
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    e = parse_c(c, strict=False)
    bits = policy.initial_bits
    while bits <= policy.max_bits:
        lo, hi = pow_interval(n, e, bits)
        f_lo, f_hi = math.floor(lo), math.floor(hi)
        if f_lo == f_hi:
            exact = lo == hi and lo.denominator == 1
            return CertifiedFloorResult(n, e, f_lo, bits, exact)
        root, ok = _is_exact_power(n, e)
        if ok:
            return CertifiedFloorResult(n, e, root, bits, True)
        bits *= policy.growth
    raise PrecisionExhausted(f"could not certify floor of {n}^{e} within {policy.max_bits} bits")


def certified_floor_frac(x, e: ExponentLike, scale=1, frac_bits: int = _FRAC_BITS):
    """Floor and fractional part of ``scale * x**e`` for rational ``x > 0``.

    Returns ``(floor, frac, is_integer)`` where ``frac`` is a Fraction within
    ``2**-frac_bits`` of the true fractional part (and exactly 0 when the
    value is an integer).
    """
    x = _as_fraction(x)
    if x <= 0:
        raise PreconditionError(f"base must be positive, got {x}")
    e = parse_exponent(e)
    scale = _as_fraction(scale)
    big, exact = _scaled_floor(x, e, frac_bits, scale)
    whole = big >> frac_bits
    frac = Fraction(big - (whole << frac_bits), 1 << frac_bits)
    return whole, frac, exact and frac == 0


def frac_part_certified(n: int, c: ExponentLike, policy: PrecisionPolicy = DEFAULT_POLICY) -> Fraction:
    """``{n**c}`` with absolute error below ``2**-53``; consistent with :func:`floor_pow`."""
    res = floor_pow(n, c, policy)
    if res.is_exact_integer:
        return Fraction(0)
    big, _ = _scaled_floor(Fraction(n), res.c, _FRAC_BITS)
    return Fraction(big - (res.floor_value << _FRAC_BITS), 1 << _FRAC_BITS)


def certified_fracs(base, e: ExponentLike, offset=0, scale=1):
    """Vectorised floor/fractional part of ``scale * (base + offset)**e``.

    Args:
        base: integer array; ``base + offset`` must be positive.
        e: positive rational exponent.
        offset: rational shift added to every base.
        scale: nonzero rational multiplier.

    Returns:
        ``(floors, fracs, is_integer)`` as int64, float64 and bool arrays.
        Entries decided in float64 carry fractional parts accurate to about
        ``2**-44`` relative to the value; the rest are exact to ``2**-60``.
    """
    e = parse_exponent(e)
    offset = _as_fraction(offset)
    scale = _as_fraction(scale)
    base = np.asarray(base, dtype=np.int64)
    with np.errstate(all="ignore"):
        v = float(scale) * np.power(base.astype(np.float64) + float(offset), float(e))
    nearest = np.rint(v)
    ok = np.isfinite(v) & (np.abs(v) < _FLOAT_LIMIT)
    ok &= np.abs(v - nearest) > _REL_MARGIN * np.abs(v) + 2.0**-60
    floors = np.zeros(base.shape, dtype=np.int64)
    fracs = np.zeros(base.shape, dtype=np.float64)
    is_int = np.zeros(base.shape, dtype=bool)
    fl = np.floor(v[ok])
    floors[ok] = fl.astype(np.int64)
    fracs[ok] = v[ok] - fl
    for i in np.flatnonzero(~ok):
        whole, frac, integral = certified_floor_frac(Fraction(int(base.flat[i])) + offset, e, scale)
        floors.flat[i] = whole
        fracs.flat[i] = float(frac)
        is_int.flat[i] = integral
    return floors, fracs, is_int


def floor_pow_array(ns, c: ExponentLike) -> np.ndarray:
    """``[n**c]`` for every entry of an integer array, certified."""
    floors, _, _ = certified_fracs(ns, parse_c(c, strict=False))
    return floors
