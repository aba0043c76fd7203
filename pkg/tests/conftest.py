import functools

import pytest
from hypothesis import settings

from astft.evaluation import SeparationConfig, certify, separate
from astft.signals import GENERATORS

settings.register_profile("astft", deadline=None, max_examples=40)
settings.load_profile("astft")

# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def cached_separation(name: str, real: bool = True, sigma: float = 1.0 / 16.0, oversampling: int = 4):
    signal, truth = GENERATORS[name](real=real)
    cfg = SeparationConfig(sigma=sigma, k_expected=truth.k, oversampling=oversampling)
    return signal, truth, separate(signal, cfg, truth)


@functools.lru_cache(maxsize=None)
def cached_certification(name: str, real: bool = True):
    return certify(name, real=real)


@pytest.fixture
def two_lfm_sep():
    return cached_separation("two_lfm")


@pytest.fixture
def one_chirp_sep():
    return cached_separation("one_chirp")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
