"""Acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL|SKIP`` line; the lines
are echoed in pytest's terminal summary.  The file also runs as a script:
``python3 tests/test_acceptance.py``.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, cached_certification  # noqa: E402

from astft.chirp_rate import bspline_smooth, five_point_derivative  # noqa: E402
from astft.evaluation import (  # noqa: E402
    TABLE1_CONST,
    SeparationConfig,
    interior_slice,
    noisy_ordering,
    run_table1,
    separate,
)
from astft.ridges import cluster_frame, threshold_support  # noqa: E402
from astft.signals import gen_linear_chirp  # noqa: E402
from astft.stft import SigmaSeries  # noqa: E402
from astft.window import G_closed, G_numeric, KernelParams, abs_G0, chirp_factor  # noqa: E402

SIGMA2_ENV = "ASTFT_SIGMA2_FILE"
TABLE_TOL = 0.25
N_SEEDS = 11


def record(n, ok, detail):
    status = "PASS" if ok else "FAIL"
    line = f"criterion {n}: {status}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_table_constant_sigma():
    reps = run_table1("const_1_16")
    got = {m: r.rmse_sum for m, r in reps.items()}
    within = {m: abs(got[m] - TABLE1_CONST[m]) <= TABLE_TOL * TABLE1_CONST[m] for m in got}
    ordered = got["lc-true-cr"] < got["lc"] < got["si"]
    cells = ", ".join(f"{m}={got[m]:.4f} (target {TABLE1_CONST[m]})" for m in got)
    means = ", ".join(f"{m}={r.rmse:.4f}" for m, r in reps.items())
    ok = record(
        1,
        all(within.values()) and ordered,
        f"sigma=1/16 summed over components {cells}; per-component mean {means}; "
        f"ordering {'holds' if ordered else 'broken'}",
    )
    assert ok


def test_criterion_2_table_user_sigma():
    from astft.evaluation import TABLE1_SIGMA2  # noqa: F401  (targets are informational)

    path = os.environ.get(SIGMA2_ENV)
    if not path:
        line = f"criterion 2: SKIP  no sigma_2 series supplied (set {SIGMA2_ENV})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        pytest.skip(line)
    series = SigmaSeries.from_file(path, 128)
    const = {m: r.rmse_sum for m, r in run_table1("const_1_16").items()}
    got = {m: r.rmse_sum for m, r in run_table1("user_series", series).items()}
    ordered = got["lc-true-cr"] < got["lc"] < got["si"]
    below = all(got[m] < const[m] for m in got)
    cells = ", ".join(f"{m}={got[m]:.4f} (sigma=1/16: {const[m]:.4f})" for m in got)
    ok = record(2, ordered and below, f"user sigma {cells}")
    assert ok


def test_criterion_3_kernel_oracle():
    xi = np.round(np.arange(-2.0, 2.0 + 1e-9, 0.01), 10)
    worst = 0.0
    for lam in (0.0, 10 / 256, 18 / 256, 0.5):
        p = KernelParams(1.0, lam)
        worst = max(worst, float(np.max(np.abs(G_closed(xi, p) - G_numeric(xi, p)))))
    ok = record(3, worst < 1e-6, f"max |G_closed - G_numeric| = {worst:.2e}")
    assert ok


def test_criterion_4_exact_linear_chirp():
    s, truth = gen_linear_chirp(real=False)
    sep = separate(s, SeparationConfig(k_expected=1), truth, models=("lc-true-cr",))
    sl = interior_slice(s.n)
    err = float(np.max(np.abs(sep.recoveries["lc-true-cr"].x_hat[0, sl] - s.samples[sl])))
    ok = record(4, err < 1e-2, f"complex one_chirp interior max error {err:.2e}")
    assert ok


def test_criterion_5_certification():
    parts = []
    for name in ("one_chirp", "two_lfm"):
        c = cached_certification(name)
        failed = [k for k, v in c.conditions.items() if not v]
        if failed:
            parts.append(f"{name}: condition flags fail {failed}")
        if not c.if_ok.all():
            undefined = int((~c.if_defined).sum())
            parts.append(f"{name}: IF bound fails on {int((~c.if_ok).sum())} cells ({undefined} with bd1 undefined)")
        if not c.amp_ok.all():
            parts.append(f"{name}: amplitude bound fails on {int((~c.amp_ok).sum())} cells")
        if not c.lc_ok.all():
            parts.append(f"{name}: chirp-model bound fails on {int((~c.lc_ok).sum())} cells")
    ok = record(5, not parts, "; ".join(parts) if parts else "one_chirp and two_lfm: flags, IF, amplitude and chirp-model bounds hold")
    assert ok, "; ".join(parts)


def test_criterion_6_noisy_ordering():
    seeds = range(N_SEEDS)
    parts, ok = [], True
    for name, snr in (("one_chirp", 10.0), ("one_cosine", 15.0)):
        res = noisy_ordering(name, snr, seeds)
        good = res["median_lc"] < res["median_si"]
        ok &= good
        parts.append(f"{name}@{snr:g}dB median lc={res['median_lc']:.4f} si={res['median_si']:.4f}")
    ok = record(6, ok, f"{N_SEEDS} seeds; " + "; ".join(parts))
    assert ok


def test_criterion_7_numerics():
    rng = np.random.default_rng(0)
    worst_d = 0.0
    for dt in (1e-3, 1e-2, 1.0 / 128):
        t = dt * np.arange(64)
        for deg in range(5):
            p = np.polynomial.Polynomial(rng.uniform(-3, 3, deg + 1))
            ref = p.deriv()(t)
            d = five_point_derivative(p(t), dt)
            worst_d = max(worst_d, float(np.max(np.abs(d - ref)) / max(np.max(np.abs(ref)), 1.0)))
    f = 3.0 * np.arange(40) - 7.0
    const_ok = np.allclose(bspline_smooth(np.full(40, 2.5)), 2.5, rtol=1e-15, atol=0)
    lin_ok = np.allclose(bspline_smooth(f)[2:-2], f[2:-2], rtol=1e-13, atol=1e-12)
    r = np.linspace(-200, 200, 81)[:, None]
    sig = np.linspace(0.01, 0.5, 50)[None, :]
    b = 2 * np.pi * r * sig**2
    worst_f = float(np.max(np.abs(np.abs(chirp_factor(b)) * abs_G0(b) - 1.0)))
    ok = worst_d <= 1e-9 and const_ok and lin_ok and worst_f <= 1e-12
    record(
        7,
        ok,
        f"differentiator rel err {worst_d:.1e}; spline constants {'ok' if const_ok else 'broken'}, "
        f"linears {'ok' if lin_ok else 'broken'}; factor identity err {worst_f:.1e}",
    )
    assert ok


def test_criterion_8_ridges_at_midpoint():
    c = cached_certification("two_lfm")
    sep, rep = c.separation, c.report
    m = 64
    assert sep.signal.times[m] == 0.5
    runs = cluster_frame(threshold_support(sep.tf.values[m], sep.config.threshold))
    half = sep.tf.grid.delta_eta / 2
    eta = sep.ridges.eta_hat[:, m]
    dev = np.abs(eta - np.array([15.0, 29.0]))
    bd1 = rep.bd1[:, m]
    ok = len(runs) == 2 and bool(np.all(dev <= bd1 + half))  # NaN bd1 compares False
    detail = (
        f"{len(runs)} clusters, eta_hat={eta[0]:.3f},{eta[1]:.3f} Hz, |dev|={dev.max():.3f} Hz, "
        f"bd1={'undefined' if np.any(np.isnan(bd1)) else np.array2string(bd1, precision=3)} "
        f"(err={rep.err[0, m]:.3f} vs A/2={rep.amplitude[0, m] / 2:.3f}); Bd1={np.array2string(rep.Bd1[:, m], precision=3)}"
    )
    record(8, ok, detail)
    assert ok


if __name__ == "__main__":
    failures = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
            except pytest.skip.Exception:
                pass
    sys.exit(1 if failures else 0)
