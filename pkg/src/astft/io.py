"""CSV / JSON readers and writers for every file format the CLI emits."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .bounds import BoundReport
from .recovery import ComponentRecovery
from .ridges import RidgeSet
from .signals import GroundTruth, SampledSignal
from .stft import TFMatrix


def _f(v) -> str:
    # repr round-trips doubles exactly
    return repr(float(v))


def write_signal_csv(path, signal: SampledSignal) -> None:
    t = signal.times
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if signal.is_complex:
            w.writerow(["t", "re", "im"])
            for ti, x in zip(t, signal.samples):
                w.writerow([_f(ti), _f(x.real), _f(x.imag)])
        else:
            w.writerow(["t", "value"])
            for ti, x in zip(t, signal.samples):
                w.writerow([_f(ti), _f(x)])


def read_signal_csv(path, sample_rate: float | None = None) -> SampledSignal:
    """Read ``t,value`` or ``t,re,im``; the rate is inferred from ``t`` if not given."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty signal file")
    header = [h.strip() for h in rows[0]]
    data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    if header == ["t", "value"]:
        x = data[:, 1]
    elif header == ["t", "re", "im"]:
        x = data[:, 1] + 1j * data[:, 2]
    else:
        raise ValueError(f"{path}: expected header 't,value' or 't,re,im', got {','.join(header)}")
    t = data[:, 0]
    if sample_rate is None:
        steps = np.diff(t)
        if steps.size == 0 or not np.allclose(steps, steps[0], rtol=1e-6, atol=0):
            raise ValueError(f"{path}: samples are not uniformly spaced")
        sample_rate = 1.0 / float(np.mean(steps))
    return SampledSignal(x, sample_rate, float(t[0]))


def write_truth_csv(path, signal: SampledSignal, truth: GroundTruth) -> None:
    t = signal.times
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "k", "A", "if", "cr", "re", "im"])
        if truth.has_trend:
            for m, ti in enumerate(t):
                w.writerow([_f(ti), 0, _f(truth.trend[m]), _f(0), _f(0), _f(truth.trend[m]), _f(0)])
        for k in range(truth.k):
            for m, ti in enumerate(t):
                c = truth.components[k, m]
                w.writerow(
                    [
                        _f(ti),
                        k + 1,
                        _f(truth.amplitude[k, m]),
                        _f(truth.if_series[k, m]),
                        _f(truth.chirp_rate_series[k, m]),
                        _f(c.real),
                        _f(c.imag),
                    ]
                )


def write_tf_csv(path, tf: TFMatrix) -> None:
    etas = tf.etas
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "n", "t", "eta", "re", "im"])
        for m, row in enumerate(tf.values):
            for n, v in enumerate(row):
                w.writerow([m, n, _f(tf.times[m]), _f(etas[n]), _f(v.real), _f(v.imag)])


def write_ridges_csv(path, ridges: RidgeSet, times) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "t", "l", "eta_hat", "cluster_lo", "cluster_hi"])
        first = 0 if ridges.has_trend else 1
        for m, t in enumerate(times):
            for r in range(ridges.n_components):
                w.writerow(
                    [m, _f(t), r + first, _f(ridges.eta_hat[r, m]), ridges.cluster_lo[r, m], ridges.cluster_hi[r, m]]
                )


def write_components_csv(path, rec: ComponentRecovery, times, r_tilde=None) -> None:
    """``r_tilde`` is written empty when the recovery used no chirp rate."""
    x = np.asarray(rec.x_hat)
    rates = r_tilde if r_tilde is not None else rec.chirp_rates
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "t", "l", "xhat_re", "xhat_im", "A_hat", "eta_hat", "r_tilde", "flag"])
        for l in range(x.shape[0]):
            for m, t in enumerate(times):
                v = complex(x[l, m])
                w.writerow(
                    [
                        m,
                        _f(t),
                        l + 1,
                        _f(v.real),
                        _f(v.imag),
                        _f(rec.A_hat[l, m]),
                        _f(rec.eta_hat[l, m]),
                        "" if rates is None else _f(rates[l][m]),
                        int(rec.flagged[l, m]),
                    ]
                )


def _opt(v) -> str:
    return "" if not np.isfinite(v) else _f(v)


def write_bounds_csv(path, report: BoundReport) -> None:
    """One row per (frame, component); ``flags`` lists failed conditions or ``ok``.

    Undefined bounds are written as empty cells and add an ``undefined_*`` flag.
    """
    first = 0 if report.has_trend else 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "l", "lambda0", "pi0", "err", "Err", "bd1", "bd2", "Bd1", "Bd2", "flags"])
        for m, t in enumerate(report.times):
            failed = report.failed(m)
            for l in range(report.n_components):
                flags = list(failed)
                if not report.bd_defined[l, m]:
                    flags.append("undefined_bd")
                if not report.Bd_defined[l, m]:
                    flags.append("undefined_Bd")
                w.writerow(
                    [
                        _f(t),
                        l + first,
                        _f(report.lambda0[m]),
                        _f(report.pi0[m]),
                        _f(report.err[l, m]),
                        _f(report.Err[l, m]),
                        _opt(report.bd1[l, m]),
                        _opt(report.bd2[l, m]),
                        _opt(report.Bd1[l, m]),
                        _opt(report.Bd2[l, m]),
                        ";".join(flags) if flags else "ok",
                    ]
                )


def write_error_series_csv(path, report, times) -> None:
    sl_start = report.interior[0] - 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "t", "l", "abs_error"])
        for l, row in enumerate(report.abs_error):
            for i, e in enumerate(row):
                m = sl_start + i
                w.writerow([m, _f(times[m]), l + 1, _f(e)])


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_csv_dicts(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
