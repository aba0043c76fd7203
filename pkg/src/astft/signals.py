"""Sampled signals, ground truth and the synthetic test signals.

Signals are stored as plain sample arrays.  Real records stay real; the
complex harmonic model is recovered downstream with the ``2 Re`` formulas.
Phases are always evaluated in closed form so ground truth is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

Evaluator = Callable[[np.ndarray], np.ndarray]

MIN_LENGTH = 16


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled real or complex record."""

    samples: np.ndarray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.samples)
        if not np.iscomplexobj(x):
            x = x.astype(float)
        if x.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if x.size < MIN_LENGTH:
            raise ValueError(f"need at least {MIN_LENGTH} samples, got {x.size}")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n) / self.sample_rate

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.samples)


@dataclass(frozen=True)
class ComponentSpec:
    """One AHM component ``A(t) exp(i 2 pi phi(t))``.

    ``phase`` is in cycles, so ``dphase`` is the IF in Hz and ``ddphase`` the
    chirp rate in Hz/s.  ``dddphase`` is optional and only feeds the
    third-derivative bound used by the chirp-model error analysis.
    """

    amplitude: Evaluator
    phase: Evaluator
    dphase: Evaluator
    ddphase: Evaluator
    dddphase: Optional[Evaluator] = None


@dataclass(frozen=True)
class GroundTruth:
    """Per-component ground truth, arrays of shape ``(K, N)``.

    ``components`` holds the complex AHM terms ``A_k exp(i 2 pi phi_k)``;
    for a real record the true real component is their real part.
    """

    amplitude: np.ndarray
    if_series: np.ndarray
    chirp_rate_series: np.ndarray
    components: np.ndarray
    trend: np.ndarray
    real: bool = True
    phase3_series: Optional[np.ndarray] = None

    @property
    def k(self) -> int:
        return self.if_series.shape[0]

    @property
    def has_trend(self) -> bool:
        return bool(np.any(self.trend != 0))

    def component_truth(self) -> np.ndarray:
        """Component samples in the record's own domain (real or complex)."""
        return self.components.real if self.real else self.components


@dataclass(frozen=True)
class ModelAssumptions:
    """Slow-variation bounds: eps1 (1/s), eps2 (Hz/s), eps3 (Hz/s^2), dprime (Hz)."""

    eps1: float = 0.0
    eps2: float = 0.0
    eps3: float = 0.0
    dprime: float = 0.0

    def __post_init__(self):
        for name in ("eps1", "eps2", "eps3", "dprime"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def _as_array(f: Evaluator, t: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(t), dtype=float), t.shape).copy()


def synth_ahm(
    components: Sequence[ComponentSpec],
    trend: Optional[Evaluator] = None,
    n: int = 128,
    rate: float = 128.0,
    real: bool = True,
    t0: float = 0.0,
) -> tuple[SampledSignal, GroundTruth]:
    """Sample ``A0(t) + sum_k A_k(t) exp(i 2 pi phi_k(t))``.

    With ``real=True`` the cosine form is emitted.  IFs must be strictly
    increasing in ``k`` at every sample.
    """
    if not components and trend is None:
        raise ValueError("need at least one component or a trend")
    t = t0 + np.arange(n) / rate
    k = len(components)
    amp = np.zeros((k, n))
    ifs = np.zeros((k, n))
    crs = np.zeros((k, n))
    ph3 = np.zeros((k, n))
    comps = np.zeros((k, n), dtype=complex)
    for i, c in enumerate(components):
        amp[i] = _as_array(c.amplitude, t)
        ifs[i] = _as_array(c.dphase, t)
        crs[i] = _as_array(c.ddphase, t)
        if c.dddphase is not None:
            ph3[i] = _as_array(c.dddphase, t)
        else:
            ph3[i] = np.gradient(crs[i], 1.0 / rate)
        comps[i] = amp[i] * np.exp(2j * np.pi * _as_array(c.phase, t))
    if k > 1 and np.any(np.diff(ifs, axis=0) <= 0):
        raise ValueError("component IFs must be strictly increasing in k at every sample")
    trend_s = np.zeros(n) if trend is None else _as_array(trend, t)

    if real:
        x = trend_s + comps.real.sum(axis=0)
    else:
        x = trend_s + comps.sum(axis=0)
    truth = GroundTruth(
        amplitude=amp,
        if_series=ifs,
        chirp_rate_series=crs,
        components=comps,
        trend=trend_s,
        real=real,
        phase3_series=ph3,
    )
    return SampledSignal(x, rate, t0), truth


def linear_chirp_spec(c: float, r: float, amplitude: float = 1.0) -> ComponentSpec:
    """Component with phase ``c t + r t^2 / 2`` (chirp rate ``r``)."""
    return ComponentSpec(
        amplitude=lambda t: np.full_like(t, amplitude, dtype=float),
        phase=lambda t: c * t + 0.5 * r * t**2,
        dphase=lambda t: c + r * t,
        ddphase=lambda t: np.full_like(t, r, dtype=float),
        dddphase=lambda t: np.zeros_like(t, dtype=float),
    )


def one_chirp_spec() -> ComponentSpec:
    return linear_chirp_spec(9.0, 10.0)


def one_cosine_spec() -> ComponentSpec:
    return ComponentSpec(
        amplitude=lambda t: np.log(10.0 + np.sqrt(t)),
        phase=lambda t: 16.0 * t + 0.5 * np.cos(4.0 * t),
        dphase=lambda t: 16.0 - 2.0 * np.sin(4.0 * t),
        ddphase=lambda t: -8.0 * np.cos(4.0 * t),
        dddphase=lambda t: 32.0 * np.sin(4.0 * t),
    )


def two_lfm_specs() -> list[ComponentSpec]:
    return [linear_chirp_spec(10.0, 10.0), linear_chirp_spec(20.0, 18.0)]


def gen_linear_chirp(real: bool = True) -> tuple[SampledSignal, GroundTruth]:
    """cos(2 pi (9t + 5t^2)) on [0, 4), N=512 at 128 Hz."""
    return synth_ahm([one_chirp_spec()], n=512, rate=128.0, real=real)


def gen_cosine_if(real: bool = True) -> tuple[SampledSignal, GroundTruth]:
    """ln(10 + sqrt t) cos(2 pi (16t + 0.5 cos 4t)) on [0, 8), N=1024 at 128 Hz."""
    return synth_ahm([one_cosine_spec()], n=1024, rate=128.0, real=real)


def gen_two_lfm(real: bool = True) -> tuple[SampledSignal, GroundTruth]:
    """cos(2 pi (10t + 5t^2)) + cos(2 pi (20t + 9t^2)) on [0, 1), N=128 at 128 Hz."""
    return synth_ahm(two_lfm_specs(), n=128, rate=128.0, real=real)


GENERATORS: dict[str, Callable[..., tuple[SampledSignal, GroundTruth]]] = {
    "one_chirp": gen_linear_chirp,
    "one_cosine": gen_cosine_if,
    "two_lfm": gen_two_lfm,
}


def add_noise(signal: SampledSignal, snr_db: float, seed: int) -> SampledSignal:
    """Add white Gaussian noise at exactly ``snr_db`` over the whole record.

    The drawn noise is rescaled so that ``10 log10(sum|x|^2 / sum|n|^2)``
    equals ``snr_db``.  ``snr_db = inf`` returns the signal unchanged.
    Complex records get circular complex noise.
    """
    x = signal.samples
    if not np.all(np.isfinite(x)):
        raise ValueError("signal has non-finite samples")
    if np.isposinf(snr_db):
        return signal
    energy = float(np.sum(np.abs(x) ** 2))
    if energy == 0.0:
        raise ValueError("SNR is undefined for an all-zero signal")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(x.size)
    if signal.is_complex:
        noise = noise + 1j * rng.standard_normal(x.size)
    noise = noise - noise.mean()
    target = energy / 10.0 ** (snr_db / 10.0)
    noise *= np.sqrt(target / np.sum(np.abs(noise) ** 2))
    return SampledSignal(x + noise, signal.sample_rate, signal.t0)


def measured_snr_db(clean: np.ndarray, noisy: np.ndarray) -> float:
    n = np.asarray(noisy) - np.asarray(clean)
    return 10.0 * np.log10(np.sum(np.abs(clean) ** 2) / np.sum(np.abs(n) ** 2))


def assumptions_from_truth(truth: GroundTruth, dt: float) -> ModelAssumptions:
    """Bounds eps1..eps3 and the IF gap d' measured on the sampled record.

    eps1 is taken as ``max |A'| / min A`` per component, which dominates
    ``|A(t+tau) - A(t)| / (|tau| A(t))`` on the record.
    """
    eps1 = 0.0
    for a in truth.amplitude:
        da = np.gradient(a, dt)
        eps1 = max(eps1, float(np.max(np.abs(da)) / np.min(a)))
    if truth.has_trend:
        da = np.gradient(truth.trend, dt)
        eps1 = max(eps1, float(np.max(np.abs(da)) / np.min(np.abs(truth.trend))))
    eps2 = float(np.max(np.abs(truth.chirp_rate_series)))
    ph3 = truth.phase3_series
    if ph3 is None:
        ph3 = np.gradient(truth.chirp_rate_series, dt, axis=1)
    eps3 = float(np.max(np.abs(ph3)))
    dprime = float(np.min(np.diff(truth.if_series, axis=0))) if truth.k > 1 else 0.0
    # snap floating noise from gradients of constants
    eps1 = 0.0 if eps1 < 1e-12 else eps1
    eps3 = 0.0 if eps3 < 1e-9 else eps3
    return ModelAssumptions(eps1=eps1, eps2=eps2, eps3=eps3, dprime=dprime)
