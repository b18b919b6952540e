"""Sawtooth function and Vaaler's trigonometric approximation.

Convention: ``psi(x) = x - floor(x) - 1/2``.  With it the approximant is

    psi*(x) = -sum_{1 <= |h| <= H} (2 pi i h)^-1 W(h/(H+1)) e(hx)
            = -sum_{h=1}^{H} W(h/(H+1)) sin(2 pi h x) / (pi h)

and ``|psi*(x) - psi(x)| <= delta(x)`` with the Fejer-type majorant

    delta(x) = (2H+2)^-1 sum_{|h| <= H} (1 - |h|/(H+1)) e(hx).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError

_SERIES_CUTOFF = 1e-4


def psi(x):
    x = np.asarray(x, dtype=np.float64)
    out = x - np.floor(x) - 0.5
    return out if out.ndim else float(out)


def vaaler_weight(t):
    """``W(t) = pi t (1 - |t|) cot(pi t) + |t|`` for ``0 < |t| < 1``."""
    t = np.abs(np.asarray(t, dtype=np.float64))
    if np.any((t <= 0) | (t >= 1)):
        raise PreconditionError("W is defined for 0 < |t| < 1")
    z = np.pi * t
    with np.errstate(divide="ignore", invalid="ignore"):
        zcot = np.where(t < _SERIES_CUTOFF, 1.0, z / np.tan(z))
    small = t < _SERIES_CUTOFF
    if np.any(small):
        z2 = z[small] ** 2
        zcot[small] = 1.0 - z2 / 3.0 - z2 * z2 / 45.0
    out = (1.0 - t) * zcot + t
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class VaalerApprox:
    """Precomputed coefficients of psi* and delta for truncation ``H``."""

    H: int
    coefficients: np.ndarray
    fejer_weights: np.ndarray

    @classmethod
    def build(cls, H: int) -> "VaalerApprox":
        if H < 1:
            raise PreconditionError(f"H must be >= 1, got {H}")
        h = np.arange(1, H + 1, dtype=np.float64)
        coeffs = vaaler_weight(h / (H + 1)) / (np.pi * h)
        weights = 1.0 - h / (H + 1)
        return cls(H, coeffs, weights)

    def _harmonics(self, x):
        x = np.asarray(x, dtype=np.float64)
        h = np.arange(1, self.H + 1, dtype=np.float64)
        # reduce first so large x does not lose phase accuracy
        return 2.0 * np.pi * np.multiply.outer(x - np.floor(x), h)

    def psi_star(self, x):
        out = -(np.sin(self._harmonics(x)) @ self.coefficients)
        return out if np.ndim(out) else float(out)

    def psi_star_complex(self, x):
        """The two-sided sum evaluated literally in complex arithmetic."""
        x = np.asarray(x, dtype=np.float64)
        h = np.arange(1, self.H + 1, dtype=np.float64)
        w = self.coefficients * np.pi * h  # W(h/(H+1))
        phase = self._harmonics(x)
        pos = np.exp(1j * phase) @ (w / (2j * np.pi * h))
        neg = np.exp(-1j * phase) @ (w / (-2j * np.pi * h))
        return -(pos + neg)

    def delta(self, x):
        out = (1.0 + 2.0 * (np.cos(self._harmonics(x)) @ self.fejer_weights)) / (2 * self.H + 2)
        return out if np.ndim(out) else float(out)


def psi_star(x, H: int):
    return VaalerApprox.build(H).psi_star(x)


def fejer_delta(x, H: int):
    return VaalerApprox.build(H).delta(x)


def fejer_delta_closed(x, H: int):
    """Closed form ``(H+1)/(2H+2) * (sin(pi(H+1)x) / ((H+1) sin(pi x)))**2``."""
    if H < 1:
        raise PreconditionError(f"H must be >= 1, got {H}")
    x = np.asarray(x, dtype=np.float64)
    r = x - np.round(x)
    den = (H + 1) * np.sin(np.pi * r)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(r == 0, 1.0, np.sin(np.pi * (H + 1) * r) / den)
    out = 0.5 * ratio**2
    return out if out.ndim else float(out)


def adversarial_points(count: int = 100) -> np.ndarray:
    """Points clustered on both sides of the jump of psi at the integers."""
    half = count // 2
    eps = np.logspace(-15, -1, half)
    return np.concatenate([eps, 1.0 - eps[: count - half]])


def verify_vaaler(H: int, grid_size: int = 10_000, extra_points: int = 100) -> float:
    """Largest ``|psi* - psi| - delta`` over a uniform grid plus jump points."""
    if grid_size < 10:
        raise PreconditionError(f"grid_size must be >= 10, got {grid_size}")
    x = np.concatenate([np.arange(grid_size) / grid_size, adversarial_points(extra_points)])
    approx = VaalerApprox.build(H)
    gap = np.abs(approx.psi_star(x) - psi(x)) - approx.delta(x)
    return float(gap.max())
