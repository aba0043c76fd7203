"""Gaussian window, its Fourier transform and the chirp-modulated kernel.

Conventions: ``g(tau) = exp(-tau^2/2) / sqrt(2 pi)`` so that ``int g = 1``
and ``g_hat(xi) = exp(-2 pi^2 xi^2)``.  The chirp kernel for a component
with chirp rate ``r`` analysed at window width ``sigma`` is

    G(xi) = int exp(i pi sigma^2 r tau^2) g(tau) exp(-i 2 pi xi tau) dtau,

with closed form ``(1 - i b)^(-1/2) exp(-2 pi^2 xi^2 (1 + i b) / (1 + b^2))``
where ``b = 2 pi r sigma^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

SQRT_2PI = np.sqrt(2.0 * np.pi)

# quadrature defaults for the oracle routines
QUAD_HALF_WIDTH = 8.0
QUAD_STEP = 1e-3


@dataclass(frozen=True)
class WindowSpec:
    kind: str = "gaussian"
    tau0: float = 0.2
    truncation: float = 5.0

    def __post_init__(self):
        if self.kind != "gaussian":
            raise ValueError(f"unsupported window kind {self.kind!r}")
        if not 0.0 < self.tau0 < 1.0:
            raise ValueError("tau0 must lie in (0, 1)")
        if self.truncation < 3.0:
            raise ValueError("truncation must be at least 3")

    @property
    def alpha(self) -> float:
        return alpha_from_tau0(self.tau0)


@dataclass(frozen=True)
class KernelParams:
    """Window width ``sigma`` (s) and chirp rate (Hz/s) of one component."""

    sigma: float
    chirp_rate: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def lam(self) -> float:
        """The product ``chirp_rate * sigma^2``."""
        return self.chirp_rate * self.sigma**2

    @property
    def b(self) -> float:
        return 2.0 * np.pi * self.lam


def g_value(tau):
    tau = np.asarray(tau, dtype=float)
    return np.exp(-0.5 * tau**2) / SQRT_2PI


def g_hat(xi):
    xi = np.asarray(xi, dtype=float)
    return np.exp(-2.0 * np.pi**2 * xi**2)


def g_hat_inverse(y):
    """Inverse of ``g_hat`` on ``xi >= 0``; defined for ``0 < y <= 1``."""
    y = np.asarray(y, dtype=float)
    if np.any((y <= 0) | (y > 1)):
        raise ValueError("g_hat inverse needs 0 < y <= 1")
    return np.sqrt(-np.log(y)) / (np.pi * np.sqrt(2.0))


def alpha_from_tau0(tau0: float) -> float:
    """Radius ``alpha`` with ``g_hat(alpha) = tau0``."""
    if not 0.0 < tau0 < 1.0:
        raise ValueError("tau0 must lie in (0, 1)")
    return float(np.sqrt(2.0 * np.log(1.0 / tau0)) / (2.0 * np.pi))


def _quad_nodes(half_width: float, step: float) -> np.ndarray:
    n = int(np.ceil(2 * half_width / step))
    return np.linspace(-half_width, half_width, n + 1)


def breve_g(xi, lam: float, half_width: float = QUAD_HALF_WIDTH, step: float = QUAD_STEP):
    """``int g(tau) exp(-i 2 pi xi tau - i pi lam tau^2) dtau`` by trapezoid rule."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    tau = _quad_nodes(half_width, step)
    base = g_value(tau) * np.exp(-1j * np.pi * lam * tau**2)
    out = np.empty(xi_arr.shape, dtype=complex)
    flat = xi_arr.ravel()
    res = out.ravel()
    # chunk to bound memory on long xi grids
    for i in range(0, flat.size, 256):
        phase = np.exp(-2j * np.pi * np.outer(flat[i : i + 256], tau))
        res[i : i + 256] = trapezoid(phase * base, tau, axis=1)
    out = res.reshape(xi_arr.shape)
    return out if np.ndim(xi) else complex(out[0])


def G_numeric(xi, params: KernelParams, half_width: float = QUAD_HALF_WIDTH, step: float = QUAD_STEP):
    """Direct quadrature of the chirp kernel; the oracle for :func:`G_closed`."""
    return breve_g(xi, -params.lam, half_width, step)


def chirp_factor(b):
    """``sqrt(1 - i b)`` on the principal branch (same quadrant as ``1 - i b``)."""
    return np.sqrt(1.0 - 1j * np.asarray(b, dtype=float))


def G_closed(xi, params: KernelParams):
    b = params.b
    xi = np.asarray(xi, dtype=float)
    expo = -2.0 * np.pi**2 * xi**2 * (1.0 + 1j * b) / (1.0 + b**2)
    return np.exp(expo) / chirp_factor(b)


def abs_G0(b) -> np.ndarray:
    """``|G(0)| = (1 + b^2)^(-1/4)``."""
    return (1.0 + np.asarray(b, dtype=float) ** 2) ** -0.25


def abs_G(xi, b):
    """``|G(xi)|`` for a kernel with ``b = 2 pi r sigma^2``; vectorised in both."""
    b = np.asarray(b, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return abs_G0(b) * np.exp(-2.0 * np.pi**2 * xi**2 / (1.0 + b**2))


def abs_G_inverse(y, params: KernelParams):
    """``xi >= 0`` with ``|G(xi)| = y``; needs ``0 < y <= |G(0)|``."""
    g0 = float(abs_G0(params.b))
    y = np.asarray(y, dtype=float)
    if np.any((y <= 0) | (y > g0 * (1 + 1e-15))):
        raise ValueError("abs_G_inverse needs 0 < y <= |G(0)|")
    ratio = np.minimum(y / g0, 1.0)
    return np.sqrt(-np.log(ratio)) / (np.pi * np.sqrt(2.0) * g0**2)


def alpha_k(params: KernelParams, alpha: float) -> float:
    """Chirp-widened radius ``alpha (1 + 2 pi |r| sigma^2)``."""
    return alpha * (1.0 + abs(params.b))


def xi_k(params: KernelParams, tau0: float) -> float:
    """Exact radius where ``|G| = tau0``; requires ``tau0 (1+b^2)^(1/4) <= 1``."""
    s = 1.0 + params.b**2
    inner = 2.0 * np.log(1.0 / tau0) - 0.5 * np.log(s)
    if inner < 0:
        raise ValueError("tau0 exceeds |G(0)|; radius undefined")
    return float(np.sqrt(s) * np.sqrt(inner) / (2.0 * np.pi))


_ABS_MOMENTS = {
    1: np.sqrt(2.0 / np.pi),
    2: 1.0,
    3: 2.0 * np.sqrt(2.0 / np.pi),
}


def abs_moment(n: int) -> float:
    """``I_n = int |tau^n g(tau)| dtau`` for the standard Gaussian, n in {1, 2, 3}."""
    try:
        return float(_ABS_MOMENTS[n])
    except KeyError:
        raise ValueError(f"absolute moment only available for n in 1..3, got {n}") from None
