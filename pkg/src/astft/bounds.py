"""Error bounds and well-separation conditions for the two local models.

Everything here is evaluated from ground truth; it is a certification
harness, not an estimator.  Bounds whose preconditions fail are reported as
NaN together with a ``False`` entry in the matching ``*_defined`` mask.

For a real record ``A cos(2 pi phi)`` the positive-frequency term analysed
by the STFT is ``(A/2) exp(i 2 pi phi)``, so real records are certified
with halved component amplitudes (the trend keeps its full amplitude).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .signals import GroundTruth, ModelAssumptions
from .stft import SigmaSeries
from .window import abs_G, abs_G0, abs_moment, alpha_from_tau0, g_hat

I1 = abs_moment(1)
I2 = abs_moment(2)
I3 = abs_moment(3)

CONDITIONS = (
    "theo1_cond1",
    "cond_ep1",
    "separated_cond_1st",
    "theo2_cond1",
    "cond_no_overlapping",
    "cond_ep_2nd",
)


def lambda0(eps1: float, eps2: float, sigma):
    """Remainder scale of the sinusoidal model: ``eps1 I1 sigma + pi eps2 I2 sigma^2``."""
    sigma = np.asarray(sigma, dtype=float)
    return eps1 * I1 * sigma + np.pi * eps2 * I2 * sigma**2


def pi0(eps1: float, eps3: float, sigma):
    """Remainder scale of the chirp model: ``eps1 I1 sigma + (pi/3) eps3 I3 sigma^3``."""
    sigma = np.asarray(sigma, dtype=float)
    return eps1 * I1 * sigma + np.pi / 3.0 * eps3 * I3 * sigma**3


def err_l(l: int, amplitudes: Sequence[float], alpha: float, lam0: float) -> float:
    """Sinusoidal-model error level for component ``l`` at one time.

    ``amplitudes`` lists every component present (trend first, if any) in
    IF order; ``l`` indexes that list.
    """
    a = np.asarray(amplitudes, dtype=float)
    k = np.arange(a.size)
    others = k != l
    leak = a[others] * g_hat(alpha * (2 * np.abs(l - k[others]) - 1))
    return float(a.sum() * lam0 + leak.sum())


def upsilon(alphas: Sequence[float]) -> np.ndarray:
    """Table ``U[k, l]``: guaranteed ``sigma |IF_k - IF_l|`` under disjoint zones.

    ``alpha_k + alpha_l + 2 * (sum of the radii strictly between k and l)``;
    the diagonal is left at zero.
    """
    a = np.asarray(alphas, dtype=float)
    n = a.size
    csum = np.concatenate(([0.0], np.cumsum(a)))
    u = np.zeros((n, n))
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            lo, hi = min(k, l), max(k, l)
            u[k, l] = a[k] + a[l] + 2.0 * (csum[hi] - csum[lo + 1])
    return u


def Err_l(
    l: int,
    amplitudes: Sequence[float],
    bs: Sequence[float],
    ups: np.ndarray,
    alphas: Sequence[float],
    pi_0: float,
) -> float:
    """Chirp-model error level for component ``l``.

    ``bs`` are the kernel parameters ``2 pi r_k sigma^2`` of every
    component and ``alphas`` their radii.
    """
    a = np.asarray(amplitudes, dtype=float)
    b = np.asarray(bs, dtype=float)
    total = a.sum() * pi_0
    for k in range(a.size):
        if k != l:
            total += a[k] * float(abs_G(ups[k, l] - alphas[l], b[k]))
    return float(total)


def _ghat_inv(y):
    return np.sqrt(-np.log(y)) / (np.pi * np.sqrt(2.0))


def theorem1_bounds(err: float, amplitude: float, sigma: float) -> dict:
    """IF bound ``bd1`` and recovery bound ``bd2``, exact and Gaussian-simplified.

    The exact pair needs ``err < A/2``; the simplified pair ``err < A/4``.
    """
    out = dict(bd1=np.nan, bd2=np.nan, gbd1=np.nan, gbd2=np.nan, defined=False, gauss_defined=False)
    if err < amplitude / 2.0:
        r = _ghat_inv(1.0 - 2.0 * err / amplitude)
        out.update(bd1=r / sigma, bd2=err + 2.0 * np.pi * I1 * amplitude * r, defined=True)
    if err < amplitude / 4.0:
        out.update(
            gbd1=np.sqrt(2.0) / (sigma * np.pi) * np.sqrt(err / amplitude),
            gbd2=err + 2.0 * np.sqrt(2.0) * I1 * np.sqrt(amplitude * err),
            gauss_defined=True,
        )
    return out


def theorem2_bounds(Err: float, amplitude: float, sigma: float, b: float) -> dict:
    """Chirp-model bounds ``Bd1``/``Bd2`` and their Gaussian forms.

    ``Bd2`` bounds ``|V(t, eta) - G(0) x(t)|``.  The Gaussian ``gBd2`` bounds
    the corrected recovery ``|x(t) - sqrt(1 - i b) V(t, eta)|``.
    """
    g0 = float(abs_G0(b))
    s = 1.0 + b * b
    out = dict(Bd1=np.nan, Bd2=np.nan, gBd1=np.nan, gBd2=np.nan, defined=False, gauss_defined=False)
    if Err < g0 * amplitude / 2.0:
        y = g0 - 2.0 * Err / amplitude
        r = np.sqrt(-np.log(y / g0)) / (np.pi * np.sqrt(2.0) * g0**2)
        out.update(Bd1=r / sigma, Bd2=Err + 2.0 * np.pi * I1 * amplitude * r, defined=True)
    if Err < g0 * amplitude / 4.0:
        out.update(
            gBd1=np.sqrt(2.0) / (sigma * np.pi) * s**0.625 * np.sqrt(Err / amplitude),
            gBd2=s**0.25 * Err + 2.0 * np.sqrt(2.0) * I1 * s**0.875 * np.sqrt(amplitude * Err),
            gauss_defined=True,
        )
    return out


@dataclass
class BoundReport:
    """Per-frame theory quantities; per-component arrays are ``(C, n_frames)``.

    Rows follow ``components`` order: the trend (if present) then the
    oscillatory components in IF order.
    """

    times: np.ndarray
    sigma: np.ndarray
    tau0: float
    alpha: float
    assumptions: ModelAssumptions
    has_trend: bool
    lambda0: np.ndarray
    pi0: np.ndarray
    mu: np.ndarray
    M: np.ndarray
    M_l: np.ndarray
    g0: np.ndarray
    amplitude: np.ndarray
    alpha_k: np.ndarray
    upsilon: np.ndarray
    err: np.ndarray
    Err: np.ndarray
    bd1: np.ndarray
    bd2: np.ndarray
    gbd1: np.ndarray
    gbd2: np.ndarray
    Bd1: np.ndarray
    Bd2: np.ndarray
    gBd1: np.ndarray
    gBd2: np.ndarray
    bd_defined: np.ndarray
    gbd_defined: np.ndarray
    Bd_defined: np.ndarray
    gBd_defined: np.ndarray
    conditions: dict = field(default_factory=dict)
    eps_tilde: Optional[np.ndarray] = None

    @property
    def n_components(self) -> int:
        return self.err.shape[0]

    def oscillatory(self) -> slice:
        return slice(1 if self.has_trend else 0, self.n_components)

    def all_pass(self, frames=slice(None)) -> dict:
        return {name: bool(np.all(flag[frames])) for name, flag in self.conditions.items()}

    def failed(self, m: int) -> list[str]:
        return [name for name, flag in self.conditions.items() if not flag[m]]


def _component_table(truth: GroundTruth):
    """Amplitudes, IFs and chirp rates with the trend (if any) as row 0."""
    scale = 0.5 if truth.real else 1.0
    amp = scale * truth.amplitude
    ifs = truth.if_series
    crs = truth.chirp_rate_series
    if truth.has_trend:
        n = truth.trend.size
        amp = np.vstack([np.abs(truth.trend)[None, :], amp])
        ifs = np.vstack([np.zeros((1, n)), ifs])
        crs = np.vstack([np.zeros((1, n)), crs])
    return amp, ifs, crs


def check_separation(sigma, truth: GroundTruth, tau0: float, model: str = "sinusoidal") -> np.ndarray:
    """Per-frame well-separation flag for the sinusoidal or chirp model."""
    if model not in ("sinusoidal", "linear_chirp"):
        raise ValueError(f"unknown model {model!r}")
    s = sigma.values if isinstance(sigma, SigmaSeries) else np.broadcast_to(np.asarray(sigma, float), truth.trend.shape)
    _, ifs, crs = _component_table(truth)
    if ifs.shape[0] < 2:
        return np.ones(s.size, dtype=bool)
    alpha = alpha_from_tau0(tau0)
    gaps = np.diff(ifs, axis=0)
    if model == "sinusoidal":
        return np.all(s[None, :] * gaps >= 2.0 * alpha, axis=0)
    ak = alpha * (1.0 + np.abs(2.0 * np.pi * crs * s[None, :] ** 2))
    return np.all(s[None, :] * gaps >= ak[1:] + ak[:-1], axis=0)


def bound_report(
    truth: GroundTruth,
    sigma,
    tau0: float = 0.2,
    assumptions: Optional[ModelAssumptions] = None,
    eps_tilde=None,
    times: Optional[np.ndarray] = None,
    dt: Optional[float] = None,
) -> BoundReport:
    """Evaluate every bound and condition frame by frame.

    ``eps_tilde`` is the absolute threshold used for the support sets (a
    scalar or per-frame array).  When omitted, the threshold conditions
    report whether their feasible window is non-empty.
    """
    n = truth.trend.size
    s = sigma.values if isinstance(sigma, SigmaSeries) else np.full(n, float(sigma))
    if assumptions is None:
        from .signals import assumptions_from_truth

        if dt is None:
            raise ValueError("dt is required to derive assumptions from ground truth")
        assumptions = assumptions_from_truth(truth, dt)
    if times is None:
        times = np.arange(n) * (dt if dt else 1.0)
    amp, ifs, crs = _component_table(truth)
    C = amp.shape[0]
    alpha = alpha_from_tau0(tau0)
    lam = lambda0(assumptions.eps1, assumptions.eps2, s)
    p0 = pi0(assumptions.eps1, assumptions.eps3, s)
    M = amp.sum(axis=0)
    mu = amp.min(axis=0)
    M_l = M[None, :] - amp
    b = 2.0 * np.pi * crs * s[None, :] ** 2
    ak = alpha * (1.0 + np.abs(b))
    g0 = np.minimum(1.0, abs_G0(b).min(axis=0))

    shape = (C, n)
    err = np.empty(shape)
    Err = np.empty(shape)
    ups = np.empty((n, C, C))
    res = {key: np.full(shape, np.nan) for key in ("bd1", "bd2", "gbd1", "gbd2", "Bd1", "Bd2", "gBd1", "gBd2")}
    masks = {key: np.zeros(shape, dtype=bool) for key in ("bd", "gbd", "Bd", "gBd")}
    for m in range(n):
        ups[m] = upsilon(ak[:, m])
        for l in range(C):
            err[l, m] = err_l(l, amp[:, m], alpha, lam[m])
            Err[l, m] = Err_l(l, amp[:, m], b[:, m], ups[m], ak[:, m], p0[m])
            t1 = theorem1_bounds(err[l, m], amp[l, m], s[m])
            t2 = theorem2_bounds(Err[l, m], amp[l, m], s[m], b[l, m])
            for key in ("bd1", "bd2", "gbd1", "gbd2"):
                res[key][l, m] = t1[key]
            for key in ("Bd1", "Bd2", "gBd1", "gBd2"):
                res[key][l, m] = t2[key]
            masks["bd"][l, m] = t1["defined"]
            masks["gbd"][l, m] = t1["gauss_defined"]
            masks["Bd"][l, m] = t2["defined"]
            masks["gBd"][l, m] = t2["gauss_defined"]

    lo1 = M * (tau0 + lam)
    hi1 = mu - lo1
    lo2 = M * (tau0 + p0)
    hi2 = g0 * mu - lo2
    if eps_tilde is None:
        ep1 = lo1 <= hi1
        ep2 = lo2 <= hi2
        et = None
    else:
        et = np.broadcast_to(np.asarray(eps_tilde, dtype=float), (n,)).copy()
        ep1 = (lo1 <= et) & (et <= hi1)
        ep2 = (lo2 <= et) & (et <= hi2)
    theo2 = (2.0 * M * (tau0 + p0) <= g0 * mu) & np.all(Err < abs_G0(b) * amp / 2.0, axis=0)
    conditions = {
        "theo1_cond1": 2.0 * M * (tau0 + lam) <= mu,
        "cond_ep1": ep1,
        "separated_cond_1st": check_separation(s, truth, tau0, "sinusoidal"),
        "theo2_cond1": theo2,
        "cond_no_overlapping": check_separation(s, truth, tau0, "linear_chirp"),
        "cond_ep_2nd": ep2,
    }
    return BoundReport(
        times=np.asarray(times, dtype=float),
        sigma=s,
        tau0=tau0,
        alpha=alpha,
        assumptions=assumptions,
        has_trend=truth.has_trend,
        lambda0=lam,
        pi0=p0,
        mu=mu,
        M=M,
        M_l=M_l,
        g0=g0,
        amplitude=amp,
        alpha_k=ak,
        upsilon=ups,
        err=err,
        Err=Err,
        bd_defined=masks["bd"],
        gbd_defined=masks["gbd"],
        Bd_defined=masks["Bd"],
        gBd_defined=masks["gBd"],
        conditions=conditions,
        eps_tilde=et,
        **res,
    )


def feasible_threshold(report: BoundReport) -> np.ndarray:
    """Midpoint of the intersection of both threshold windows (NaN if empty)."""
    lo = np.maximum(report.M * (report.tau0 + report.lambda0), report.M * (report.tau0 + report.pi0))
    hi = np.minimum(
        report.mu - report.M * (report.tau0 + report.lambda0),
        report.g0 * report.mu - report.M * (report.tau0 + report.pi0),
    )
    return np.where(lo <= hi, 0.5 * (lo + hi), np.nan)
