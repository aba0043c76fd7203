"""Adaptive-STFT separation of multicomponent signals with sinusoidal and
linear-chirp local models, plus the matching error bounds."""

from .signals import (
    ComponentSpec,
    GroundTruth,
    ModelAssumptions,
    SampledSignal,
    add_noise,
    gen_cosine_if,
    gen_linear_chirp,
    gen_two_lfm,
    synth_ahm,
)
from .stft import FreqGrid, SigmaSeries, TFMatrix, stft_all, stft_frame
from .ridges import RidgeSet, ThresholdPolicy, sigma1_rule, track_ridges
from .chirp_rate import estimate_chirp_rate
from .recovery import recover_linear_chirp, recover_sinusoidal
from .evaluation import SeparationConfig, separate

__all__ = [
    "ComponentSpec",
    "FreqGrid",
    "GroundTruth",
    "ModelAssumptions",
    "RidgeSet",
    "SampledSignal",
    "SeparationConfig",
    "SigmaSeries",
    "TFMatrix",
    "ThresholdPolicy",
    "add_noise",
    "estimate_chirp_rate",
    "gen_cosine_if",
    "gen_linear_chirp",
    "gen_two_lfm",
    "recover_linear_chirp",
    "recover_sinusoidal",
    "separate",
    "sigma1_rule",
    "stft_all",
    "stft_frame",
    "synth_ahm",
    "track_ridges",
]
