"""Thresholded supports, per-frame clusters and ridge tracking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .stft import SigmaSeries, TFMatrix
from .window import alpha_from_tau0


@dataclass(frozen=True)
class ThresholdPolicy:
    """``absolute``: bins with ``|V| > value``; ``relative``: ``|V| > value * max|V|`` per frame."""

    mode: str = "relative"
    value: float = 0.3

    def __post_init__(self):
        if self.mode not in ("absolute", "relative"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if not self.value > 0:
            raise ValueError("threshold must be positive")
        if self.mode == "relative" and not self.value < 1:
            raise ValueError("relative threshold must be below 1")

    def level(self, row_abs: np.ndarray) -> float:
        if self.mode == "absolute":
            return float(self.value)
        return float(self.value * row_abs.max()) if row_abs.size else 0.0


@dataclass
class RidgeSet:
    """Per-component ridge estimates over frames.

    Arrays have shape ``(n_components, n_frames)``.  When ``has_trend`` is
    set, row 0 is the trend with ``eta_hat = 0``.  ``flagged`` marks frames
    where a component had no cluster and its previous estimate was carried.
    """

    eta_hat: np.ndarray
    bins: np.ndarray
    cluster_lo: np.ndarray
    cluster_hi: np.ndarray
    flagged: np.ndarray
    clusters: list = field(default_factory=list)
    k_detected: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    has_trend: bool = False

    @property
    def n_components(self) -> int:
        return self.eta_hat.shape[0]

    def oscillatory(self) -> slice:
        """Rows holding the oscillatory components (skips the trend row)."""
        return slice(1 if self.has_trend else 0, self.n_components)


def threshold_support(tf_row: np.ndarray, policy: ThresholdPolicy) -> np.ndarray:
    """Sorted bin indices where ``|V|`` exceeds the resolved threshold."""
    a = np.abs(np.asarray(tf_row))
    if not np.all(np.isfinite(a)):
        raise ValueError("TF row has non-finite entries")
    if a.size == 0 or a.max() == 0:
        return np.zeros(0, dtype=int)
    return np.flatnonzero(a > policy.level(a))


def cluster_frame(support) -> list[tuple[int, int]]:
    """Split a set of bins into maximal contiguous runs ``(lo, hi)``, ascending."""
    s = np.unique(np.asarray(list(support) if not isinstance(support, np.ndarray) else support, dtype=int))
    if s.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(s) > 1)
    starts = np.concatenate(([s[0]], s[breaks + 1]))
    ends = np.concatenate((s[breaks], [s[-1]]))
    return [(int(a), int(b)) for a, b in zip(starts, ends)]


def _peak(row_abs, run):
    lo, hi = run
    # np.argmax takes the first maximum -> lower frequency on ties
    return lo + int(np.argmax(row_abs[lo : hi + 1]))


def track_ridges(
    tf: TFMatrix,
    policy: ThresholdPolicy = ThresholdPolicy(),
    k_expected: Optional[int] = None,
    trend: bool = False,
) -> RidgeSet:
    """Argmax ridges inside per-frame clusters, linked greedily across frames.

    Tracking starts at the frame of maximal energy (among frames with at
    least ``k_expected`` clusters, when given), where the ``K`` strongest
    clusters (``K`` = ``k_expected`` or the cluster count there)
    seed the components in frequency order.  Each later (and earlier) frame
    assigns clusters to components by nearest peak to the previous estimate.
    With ``trend`` the cluster closest to 0 Hz is reserved for the trend.
    """
    absv = np.abs(tf.values)
    n_frames = absv.shape[0]
    etas = tf.etas
    runs_per_frame = [cluster_frame(threshold_support(row, policy)) for row in tf.values]
    k_detected = np.array([len(r) for r in runs_per_frame], dtype=int)

    def split_trend(m):
        runs = runs_per_frame[m]
        if trend and runs and runs[0][0] == 0:
            return runs[0], runs[1:]
        return None, runs

    energy = np.sum(absv**2, axis=1)
    if k_expected is not None:
        n_osc = np.array([len(split_trend(m)[1]) for m in range(n_frames)])
        energy = np.where(n_osc >= k_expected, energy, -1.0)
    seed = int(np.argmax(energy))
    _, seed_runs = split_trend(seed)
    k = k_expected if k_expected is not None else len(seed_runs)
    if k < 1:
        raise ValueError("no components detected at the seed frame")
    if len(seed_runs) < k:
        raise ValueError(f"seed frame has {len(seed_runs)} clusters, expected {k}")

    strongest = sorted(seed_runs, key=lambda r: -absv[seed, _peak(absv[seed], r)])[:k]
    strongest.sort()

    rows = k + (1 if trend else 0)
    off = 1 if trend else 0
    bins = np.zeros((rows, n_frames), dtype=int)
    lo = np.full((rows, n_frames), -1, dtype=int)
    hi = np.full((rows, n_frames), -1, dtype=int)
    flagged = np.zeros((rows, n_frames), dtype=bool)

    def assign(m, prev_bins):
        trend_run, runs = split_trend(m)
        if trend:
            if trend_run is None:
                flagged[0, m] = True
            else:
                lo[0, m], hi[0, m] = trend_run
        peaks = [_peak(absv[m], r) for r in runs]
        pairs = sorted(
            (abs(etas[p] - etas[prev_bins[c]]), c, i)
            for c in range(k)
            for i, p in enumerate(peaks)
        )
        used_c, used_r = set(), set()
        for _, c, i in pairs:
            if c in used_c or i in used_r:
                continue
            used_c.add(c)
            used_r.add(i)
            bins[c + off, m] = peaks[i]
            lo[c + off, m], hi[c + off, m] = runs[i]
        for c in range(k):
            if c not in used_c:
                bins[c + off, m] = prev_bins[c]
                flagged[c + off, m] = True

    seed_bins = [_peak(absv[seed], r) for r in strongest]
    for c, r in enumerate(strongest):
        bins[c + off, seed] = seed_bins[c]
        lo[c + off, seed], hi[c + off, seed] = r
    if trend:
        trend_run, _ = split_trend(seed)
        if trend_run is None:
            flagged[0, seed] = True
        else:
            lo[0, seed], hi[0, seed] = trend_run

    for m in range(seed + 1, n_frames):
        assign(m, bins[off:, m - 1])
    for m in range(seed - 1, -1, -1):
        assign(m, bins[off:, m + 1])

    eta_hat = etas[bins].astype(float)
    if trend:
        eta_hat[0] = 0.0
        bins[0] = -1
    return RidgeSet(
        eta_hat=eta_hat,
        bins=bins,
        cluster_lo=lo,
        cluster_hi=hi,
        flagged=flagged,
        clusters=runs_per_frame,
        k_detected=k_detected,
        has_trend=trend,
    )


def sigma1_rule(if_series: np.ndarray, tau0: float = 0.2) -> SigmaSeries:
    """``sigma_1(t) = 2 alpha / min_k (IF_k(t) - IF_{k-1}(t))``.

    ``if_series`` is ``(K, N)`` with rows in increasing IF order.  A single
    row is read as an already-computed gap series only if passed as 1-D.
    """
    f = np.asarray(if_series, dtype=float)
    if f.ndim == 1:
        gaps = f
    else:
        if f.shape[0] < 2:
            raise ValueError("sigma_1 rule needs at least two components")
        gaps = np.min(np.diff(f, axis=0), axis=0)
    if np.any(gaps <= 0):
        raise ValueError("IF gaps must be positive")
    return SigmaSeries(2.0 * alpha_from_tau0(tau0) / gaps, "sigma1_rule")
