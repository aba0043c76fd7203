"""Chirp-rate estimation from a ridge: smooth, differentiate, smooth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

BSPLINE_TAPS = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0

# one-sided fourth-order stencils, coefficients over f0..f4 (divide by 12 h)
_FORWARD_0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])
_FORWARD_1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0])


@dataclass(frozen=True)
class ChirpRateSeries:
    raw: np.ndarray
    smoothed: np.ndarray


def _check(series) -> np.ndarray:
    f = np.asarray(series, dtype=float)
    if f.ndim != 1 or f.size < 5:
        raise ValueError("need a 1-D series of length >= 5")
    return f


def bspline_smooth(series) -> np.ndarray:
    """Cubic B-spline filter ``[1 4 6 4 1]/16`` with mirror extension at the ends."""
    f = _check(series)
    return correlate1d(f, BSPLINE_TAPS, mode="mirror")


def five_point_derivative(series, dt: float) -> np.ndarray:
    """Fourth-order derivative: central five-point stencil, one-sided at the ends."""
    f = _check(series)
    if not dt > 0:
        raise ValueError("dt must be positive")
    d = np.empty_like(f)
    d[2:-2] = f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]
    d[0] = _FORWARD_0 @ f[:5]
    d[1] = _FORWARD_1 @ f[:5]
    d[-1] = -(_FORWARD_0 @ f[::-1][:5])
    d[-2] = -(_FORWARD_1 @ f[::-1][:5])
    return d / (12.0 * dt)


def estimate_chirp_rate(eta_hat, dt: float) -> ChirpRateSeries:
    raw = five_point_derivative(bspline_smooth(eta_hat), dt)
    return ChirpRateSeries(raw=raw, smoothed=bspline_smooth(raw))
