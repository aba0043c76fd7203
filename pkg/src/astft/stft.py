"""Adaptive STFT by direct windowed quadrature.

``V(t_m, eta) = dt * sum_j x(t_j) g_sigma(t_j - t_m) exp(-i 2 pi eta (t_j - t_m))``
with ``g_sigma(tau) = g(tau / sigma(t_m)) / sigma(t_m)``, summed over
``|t_j - t_m| <= L sigma(t_m)`` and zero beyond the record.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .signals import SampledSignal
from .window import g_value

DEFAULT_OVERSAMPLING = 4
DEFAULT_TRUNCATION = 5.0


@dataclass(frozen=True)
class SigmaSeries:
    values: np.ndarray
    source: str = "constant"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("sigma series must be one-dimensional")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError("sigma values must be finite and positive")
        if self.source not in ("constant", "user_file", "sigma1_rule"):
            raise ValueError(f"unknown sigma source {self.source!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, sigma: float, n: int) -> "SigmaSeries":
        return cls(np.full(n, float(sigma)), "constant")

    @classmethod
    def from_file(cls, path, n: int | None = None) -> "SigmaSeries":
        """Read one sigma per line (a ``t,sigma`` CSV is also accepted)."""
        data = np.loadtxt(Path(path), delimiter=",", ndmin=2, comments="#")
        if data.shape[1] > 1:
            data = data[:, -1]
        values = np.ravel(data)
        if n is not None and values.size != n:
            raise ValueError(f"sigma file has {values.size} values, signal has {n}")
        return cls(values, "user_file")

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class FreqGrid:
    eta_min: float
    delta_eta: float
    n_bins: int

    def __post_init__(self):
        if not self.delta_eta > 0:
            raise ValueError("delta_eta must be positive")
        if self.n_bins < 8:
            raise ValueError("need at least 8 frequency bins")

    @property
    def etas(self) -> np.ndarray:
        return self.eta_min + self.delta_eta * np.arange(self.n_bins)

    @classmethod
    def default(cls, rate: float, n: int, oversampling: int = DEFAULT_OVERSAMPLING) -> "FreqGrid":
        """Bins ``k * rate / (F N)`` for ``k = 1 .. F N / 2``, covering (0, rate/2]."""
        d = rate / (oversampling * n)
        return cls(d, d, (oversampling * n) // 2)

    @classmethod
    def symmetric(cls, rate: float, n: int, oversampling: int = DEFAULT_OVERSAMPLING) -> "FreqGrid":
        """Grid over [-rate/2, rate/2] with 0 at a bin centre (for symmetry checks)."""
        d = rate / (oversampling * n)
        half = (oversampling * n) // 2
        return cls(-half * d, d, 2 * half + 1)

    def nearest_bin(self, eta: float) -> int:
        return int(np.clip(np.rint((eta - self.eta_min) / self.delta_eta), 0, self.n_bins - 1))


@dataclass(frozen=True)
class TFMatrix:
    """``values[m, n] = V(t_m, eta_n)``."""

    values: np.ndarray
    grid: FreqGrid
    sigma: SigmaSeries
    times: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.times.size, self.grid.n_bins):
            raise ValueError("TF matrix shape does not match times x bins")
        if len(self.sigma) != self.times.size:
            raise ValueError("sigma series length does not match frames")

    @property
    def etas(self) -> np.ndarray:
        return self.grid.etas

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def _half_width(sigma_m: float, dt: float, truncation: float) -> int:
    # small slack so that L*sigma landing on a sample is included
    return int(np.floor(truncation * sigma_m / dt + 1e-9))


def _phase_table(grid: FreqGrid, dt: float, jmax: int) -> np.ndarray:
    """``exp(-i 2 pi eta_n j dt)`` for ``j = -jmax .. jmax``; row ``j + jmax``."""
    j = np.arange(-jmax, jmax + 1)
    return np.exp(-2j * np.pi * np.outer(j * dt, grid.etas))


def _frame(x, m, sigma_m, dt, truncation, table, jmax):
    n = x.size
    half = _half_width(sigma_m, dt, truncation)
    lo, hi = max(0, m - half), min(n - 1, m + half)
    j = np.arange(lo, hi + 1) - m
    w = g_value(j * dt / sigma_m) / sigma_m
    return dt * ((x[lo : hi + 1] * w) @ table[j + jmax])


def stft_frame(
    signal: SampledSignal,
    m: int,
    sigma_m: float,
    grid: FreqGrid,
    truncation: float = DEFAULT_TRUNCATION,
) -> np.ndarray:
    """One row ``V(t_m, eta_n)`` over the grid."""
    if not sigma_m > 0:
        raise ValueError("sigma_m must be positive")
    if not 0 <= m < signal.n:
        raise IndexError("frame index out of range")
    dt = signal.dt
    jmax = _half_width(sigma_m, dt, truncation)
    table = _phase_table(grid, dt, jmax)
    return _frame(signal.samples, m, sigma_m, dt, truncation, table, jmax)


def stft_all(
    signal: SampledSignal,
    sigma: SigmaSeries | float,
    grid: FreqGrid | None = None,
    truncation: float = DEFAULT_TRUNCATION,
) -> TFMatrix:
    """Adaptive STFT over every sample time.

    Rows are computed exactly as :func:`stft_frame` computes them, so each
    row is bit-identical to a standalone frame evaluation.
    """
    if not isinstance(sigma, SigmaSeries):
        sigma = SigmaSeries.constant(sigma, signal.n)
    if len(sigma) != signal.n:
        raise ValueError(f"sigma series has {len(sigma)} values, signal has {signal.n}")
    if grid is None:
        grid = FreqGrid.default(signal.sample_rate, signal.n)
    dt = signal.dt
    x = signal.samples
    out = np.empty((signal.n, grid.n_bins), dtype=complex)
    tables: dict[int, np.ndarray] = {}
    for m, s in enumerate(sigma.values):
        jmax = _half_width(s, dt, truncation)
        if jmax not in tables:
            tables[jmax] = _phase_table(grid, dt, jmax)
        out[m] = _frame(x, m, s, dt, truncation, tables[jmax], jmax)
    return TFMatrix(out, grid, sigma, signal.times)


def stft_at(
    signal: SampledSignal,
    sigma: SigmaSeries | float,
    etas: np.ndarray,
    truncation: float = DEFAULT_TRUNCATION,
) -> np.ndarray:
    """``V(t_m, etas[m])`` for one frequency per frame (e.g. a ridge or 0 Hz)."""
    if not isinstance(sigma, SigmaSeries):
        sigma = SigmaSeries.constant(sigma, signal.n)
    etas = np.broadcast_to(np.asarray(etas, dtype=float), (signal.n,))
    dt = signal.dt
    x = signal.samples
    out = np.empty(signal.n, dtype=complex)
    for m, (s, eta) in enumerate(zip(sigma.values, etas)):
        half = _half_width(s, dt, truncation)
        lo, hi = max(0, m - half), min(signal.n - 1, m + half)
        j = np.arange(lo, hi + 1) - m
        w = g_value(j * dt / s) / s
        out[m] = dt * np.sum(x[lo : hi + 1] * w * np.exp(-2j * np.pi * eta * j * dt))
    return out
