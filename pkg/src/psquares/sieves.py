"""Moebius function, square-free tests and square-free kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LimitTooLarge, PreconditionError

MEMORY_BUDGET = 2_000_000_000  # int8 entries


@dataclass(frozen=True)
class MobiusTable:
    """Immutable table of mu(n) for 1 <= n <= limit (index 0 holds 0)."""

    limit: int
    values: np.ndarray

    def __getitem__(self, n):
        return self.values[n]

    def tolist(self) -> list[int]:
        return self.values[1:].tolist()


@dataclass(frozen=True)
class SquarefreeDecomposition:
    k: int
    s: int
    m: int


def prime_sieve(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> tuple[int, ...]:
    return tuple(prime_sieve(limit).tolist())


def mobius_sieve(limit: int, budget: int = MEMORY_BUDGET) -> MobiusTable:
    if limit < 1:
        raise PreconditionError(f"limit must be >= 1, got {limit}")
    if limit + 1 > budget:
        raise LimitTooLarge(f"mobius table of {limit} entries exceeds budget {budget}")
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in prime_sieve(limit).tolist():
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    mu.flags.writeable = False
    return MobiusTable(limit, mu)


def icbrt(k: int) -> int:
    """Integer cube root, exact for arbitrarily large ``k >= 0``."""
    if k < 2:
        return k
    r = round(k ** (1.0 / 3.0)) if k < 2**60 else 1 << ((k.bit_length() + 2) // 3)
    # Newton from above
    if r**3 < k:
        r += 1
        while r**3 < k:
            r *= 2
    while True:
        nxt = (2 * r + k // (r * r)) // 3
        if nxt >= r:
            break
        r = nxt
    while r**3 > k:
        r -= 1
    while (r + 1) ** 3 <= k:
        r += 1
    return r


def squarefree_part(k: int) -> SquarefreeDecomposition:
    """Unique ``k = s * m**2`` with ``s`` square-free.

    Trial division by primes up to the cube root of ``k``; the remaining
    cofactor is 1, a prime, a prime square or a product of two distinct
    primes, and only the square case contributes to ``m``.
    """
    k = int(k)
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    s, m, r = 1, 1, k
    for p in _small_primes(max(icbrt(k), 2)):
        if p * p > r:
            break
        if r % p:
            continue
        e = 0
        while r % p == 0:
            r //= p
            e += 1
        m *= p ** (e // 2)
        if e % 2:
            s *= p
    t = math.isqrt(r)
    if t * t == r:
        m *= t
    else:
        s *= r
    return SquarefreeDecomposition(k, s, m)


def is_squarefree(k: int) -> bool:
    return squarefree_part(k).s == k


def isqrt_array(values) -> np.ndarray:
    """Exact floor square roots of a non-negative int64 array."""
    v = np.asarray(values, dtype=np.int64)
    r = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    r -= (r * r > v).astype(np.int64)
    r -= (r * r > v).astype(np.int64)
    r += ((r + 1) * (r + 1) <= v).astype(np.int64)
    return r


def _cbrt_bound(kmax: int) -> int:
    return max(icbrt(max(int(kmax), 1)), 2)


def squarefree_parts(values) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`squarefree_part`; returns arrays ``(s, m)``.

    Values must be positive and below 2**62.
    """
    k = np.asarray(values, dtype=np.int64)
    if k.size == 0:
        return k.copy(), k.copy()
    if k.min() < 1:
        raise PreconditionError("values must be positive")
    s = np.ones_like(k)
    m = np.ones_like(k)
    r = k.copy()
    for p in _small_primes(_cbrt_bound(k.max())):
        idx = np.flatnonzero(r % p == 0)
        if idx.size == 0:
            continue
        sub = r[idx] // p
        odd = np.ones(idx.size, dtype=bool)
        mult = np.ones(idx.size, dtype=np.int64)
        while True:
            hit = sub % p == 0
            if not hit.any():
                break
            sub[hit] //= p
            # every second extra factor completes a square
            mult[hit & odd] *= p
            odd[hit] = ~odd[hit]
        r[idx] = sub
        m[idx] *= mult
        s[idx] *= np.where(odd, p, 1)
    t = isqrt_array(r)
    square = t * t == r
    m = np.where(square, m * t, m)
    s = np.where(square, s, s * r)
    return s, m


def squarefree_mask(values) -> np.ndarray:
    s, _ = squarefree_parts(values)
    return s == np.asarray(values, dtype=np.int64)


def count_squarefree_upto(x: int) -> int:
    """Exact ``#{k <= x : k square-free}`` via ``sum mu(d) * floor(x / d**2)``."""
    x = int(x)
    if x < 1:
        raise PreconditionError(f"x must be >= 1, got {x}")
    root = math.isqrt(x)
    mu = mobius_sieve(root).values[1:].astype(np.int64)
    d = np.arange(1, root + 1, dtype=np.int64)
    return int(np.sum(mu * (x // (d * d))))
