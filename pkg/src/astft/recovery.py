"""Component reconstruction from the ridge.

Sinusoidal model: ``x_l(t) ~ V(t, eta_l(t))``.
Linear-chirp model: ``x_l(t) ~ V(t, eta_l(t)) / G_l(0)``, which for the
Gaussian window is ``sqrt(1 - i 2 pi r_l sigma^2) V(t, eta_l(t))``.
Real records use twice the real part of either.

Frames flagged by the tracker hold the previous frame's ridge frequency;
recovery still evaluates ``V`` there and keeps the flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ridges import RidgeSet
from .signals import SampledSignal
from .stft import SigmaSeries, TFMatrix, stft_at
from .window import chirp_factor


@dataclass(frozen=True)
class ComponentRecovery:
    """Arrays are ``(K, n_frames)``; row order follows the ridge set."""

    x_hat: np.ndarray
    A_hat: np.ndarray
    eta_hat: np.ndarray
    model: str
    chirp_rate_used: str
    chirp_rates: Optional[np.ndarray]
    flagged: np.ndarray

    def __post_init__(self):
        if self.model not in ("sinusoidal", "linear_chirp"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.model == "linear_chirp" and self.chirp_rates is None:
            raise ValueError("linear-chirp recovery needs a chirp-rate series")


def ridge_values(tf: TFMatrix, ridges: RidgeSet) -> np.ndarray:
    """``V(t_m, eta_hat_l(t_m))`` for the oscillatory rows of ``ridges``."""
    sl = ridges.oscillatory()
    m = np.arange(tf.values.shape[0])
    return tf.values[m[None, :], ridges.bins[sl]]


def estimate_amplitude(tf: TFMatrix, ridges: RidgeSet) -> np.ndarray:
    return np.abs(ridge_values(tf, ridges))


def recover_sinusoidal(tf: TFMatrix, ridges: RidgeSet, real_input: bool = True) -> ComponentRecovery:
    v = ridge_values(tf, ridges)
    flagged = ridges.flagged[ridges.oscillatory()]
    x = 2.0 * v.real if real_input else v
    return ComponentRecovery(
        x_hat=x,
        A_hat=np.abs(v),
        eta_hat=ridges.eta_hat[ridges.oscillatory()].copy(),
        model="sinusoidal",
        chirp_rate_used="none",
        chirp_rates=None,
        flagged=flagged,
    )


def recover_linear_chirp(
    tf: TFMatrix,
    ridges: RidgeSet,
    chirp_rates: np.ndarray,
    real_input: bool = True,
    chirp_source: str = "estimated",
) -> ComponentRecovery:
    """Chirp-corrected recovery; ``chirp_rates`` is ``(K, n_frames)`` in Hz/s."""
    if chirp_source not in ("estimated", "ground_truth"):
        raise ValueError(f"unknown chirp-rate source {chirp_source!r}")
    v = ridge_values(tf, ridges)
    rates = np.broadcast_to(np.asarray(chirp_rates, dtype=float), v.shape)
    sigma = tf.sigma.values[None, :]
    corrected = chirp_factor(2.0 * np.pi * rates * sigma**2) * v
    flagged = ridges.flagged[ridges.oscillatory()]
    x = 2.0 * corrected.real if real_input else corrected
    return ComponentRecovery(
        x_hat=x,
        A_hat=np.abs(v),
        eta_hat=ridges.eta_hat[ridges.oscillatory()].copy(),
        model="linear_chirp",
        chirp_rate_used=chirp_source,
        chirp_rates=np.array(rates),
        flagged=flagged,
    )


def recover_trend(signal: SampledSignal, sigma: SigmaSeries | float, truncation: float = 5.0) -> np.ndarray:
    """Trend estimate ``V(t, 0)``; real part for real records."""
    v = stft_at(signal, sigma, np.zeros(signal.n), truncation)
    return v if signal.is_complex else v.real
