"""Command-line interface: ``astft {synth,separate,bounds,table1,figures}``.

Settings come from an optional JSON config (``--config``) overridden by
flags.  Output goes to ``--out``, else ``$ASTFT_OUTDIR``, else the config's
``output``, else ``./out``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import io
from .bounds import bound_report
from .evaluation import (
    MODELS,
    TABLE1_CONST,
    TABLE1_OVERSAMPLING,
    TABLE1_SIGMA2,
    SeparationConfig,
    evaluate,
    interior_slice,
    run_figures,
    run_table1,
    separate,
)
from .ridges import ThresholdPolicy, sigma1_rule
from .signals import GENERATORS, add_noise
from .stft import SigmaSeries

OUTDIR_ENV = "ASTFT_OUTDIR"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    input: str = "two_lfm"
    sample_rate: Optional[float] = None
    sigma: str | float = 1.0 / 16.0
    tau0: float = 0.2
    threshold: str = "relative:0.3"
    k_expected: Optional[int] = None
    model: str = "all"
    oversampling: int = 4
    truncation: float = 5.0
    seed: int = 0
    snr_db: Optional[float] = None
    complex: bool = False
    output: Optional[str] = None

    def policy(self) -> ThresholdPolicy:
        try:
            mode, value = str(self.threshold).split(":")
            return ThresholdPolicy(mode, float(value))
        except ValueError as exc:
            raise ConfigError(f"bad threshold {self.threshold!r}: use relative:RHO or absolute:EPS ({exc})") from None

    def models(self) -> tuple[str, ...]:
        if self.model == "all":
            return MODELS
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)} or all")
        return (self.model,)


def _load_config(args) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {args.config}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**data)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg


def _outdir(args, cfg: Optional[RunConfig] = None) -> Path:
    if getattr(args, "out", None):
        out = Path(args.out)
    elif os.environ.get(OUTDIR_ENV):
        out = Path(os.environ[OUTDIR_ENV])
    elif cfg is not None and cfg.output:
        out = Path(cfg.output)
    else:
        out = Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_input(cfg: RunConfig):
    """Generator name or signal CSV; returns (signal, truth or None)."""
    if cfg.input in GENERATORS:
        signal, truth = GENERATORS[cfg.input](real=not cfg.complex)
    else:
        path = Path(cfg.input)
        if not path.exists():
            raise ConfigError(f"input is neither a generator ({', '.join(GENERATORS)}) nor a file: {cfg.input}")
        signal, truth = io.read_signal_csv(path, cfg.sample_rate), None
    if cfg.snr_db is not None:
        signal = add_noise(signal, cfg.snr_db, cfg.seed)
    return signal, truth


def _sigma(cfg: RunConfig, signal, truth):
    s = cfg.sigma
    if isinstance(s, str):
        if s == "sigma1":
            if truth is None:
                raise ConfigError("sigma1 needs ground-truth IFs (use a generator input)")
            return sigma1_rule(truth.if_series, cfg.tau0)
        try:
            return float(s)
        except ValueError:
            path = Path(s)
            if not path.exists():
                raise ConfigError(f"sigma file not found: {s}") from None
            return SigmaSeries.from_file(path, signal.n)
    return float(s)


def cmd_synth(args) -> int:
    if args.name not in GENERATORS:
        raise ConfigError(f"unknown signal {args.name!r}; choose from {', '.join(GENERATORS)}")
    out = _outdir(args)
    signal, truth = GENERATORS[args.name](real=not args.complex)
    io.write_signal_csv(out / f"{args.name}_signal.csv", signal)
    io.write_truth_csv(out / f"{args.name}_truth.csv", signal, truth)
    print(f"wrote {signal.n} samples at {signal.sample_rate:g} Hz to {out}")
    return 0


def cmd_separate(args) -> int:
    cfg = _load_config(args)
    models = cfg.models()
    signal, truth = _load_input(cfg)
    if "lc-true-cr" in models and truth is None:
        if cfg.model == "all":
            models = tuple(m for m in models if m != "lc-true-cr")
        else:
            raise ConfigError("model lc-true-cr needs ground truth (use a generator input)")
    sigma = _sigma(cfg, signal, truth)
    k = cfg.k_expected if cfg.k_expected is not None else (truth.k if truth is not None else None)
    sep_cfg = SeparationConfig(
        sigma=sigma,
        tau0=cfg.tau0,
        threshold=cfg.policy(),
        k_expected=k,
        oversampling=cfg.oversampling,
        truncation=cfg.truncation,
    )
    sep = separate(signal, sep_cfg, truth, models)
    out = _outdir(args, cfg)
    times = signal.times
    io.write_ridges_csv(out / "ridges.csv", sep.ridges, times)
    report = {"config": {**asdict(cfg), "separation": sep_cfg.echo()}, "models": {}}
    for m, rec in sep.recoveries.items():
        io.write_components_csv(out / f"components_{m}.csv", rec, times)
        entry = {"flagged_frames": int(rec.flagged.sum())}
        if truth is not None:
            ev = evaluate(cfg.input, sep, truth, m)
            entry.update(ev.to_dict())
            io.write_error_series_csv(out / f"errors_{m}.csv", ev, times)
        report["models"][m] = entry
    if args.dump_tf:
        io.write_tf_csv(out / "tf.csv", sep.tf)
    io.write_json(out / "report.json", report)
    print(f"separated {sep.ridges.n_components} component(s); outputs in {out}")
    return 0


def cmd_bounds(args) -> int:
    cfg = _load_config(args)
    if cfg.input not in GENERATORS:
        raise ConfigError("bounds need a generator input (ground truth required)")
    signal, truth = GENERATORS[cfg.input](real=not cfg.complex)
    sigma = _sigma(cfg, signal, truth)
    rep = bound_report(truth, sigma, cfg.tau0, dt=signal.dt, times=signal.times)
    out = _outdir(args, cfg)
    io.write_bounds_csv(out / "bounds.csv", rep)
    sl = interior_slice(signal.n)
    summary = {
        "input": cfg.input,
        "tau0": cfg.tau0,
        "alpha": rep.alpha,
        "assumptions": asdict(rep.assumptions),
        "conditions_all_frames": rep.all_pass(),
        "conditions_interior": rep.all_pass(sl),
    }
    io.write_json(out / "bounds_summary.json", summary)
    for name, ok in summary["conditions_interior"].items():
        print(f"{name:22s} {'pass' if ok else 'FAIL'} (interior)")
    return 0


def cmd_table1(args) -> int:
    out = _outdir(args)
    rows = {"sigma_1_16": ("const_1_16", None, TABLE1_CONST)}
    if args.sigma_file:
        series = SigmaSeries.from_file(args.sigma_file, 128)
        rows["sigma_user"] = ("user_series", series, TABLE1_SIGMA2)
    result = {}
    for label, (mode, series, target) in rows.items():
        reps = run_table1(mode, series, args.oversampling)
        result[label] = {m: {**r.to_dict(), "table_value": target[m]} for m, r in reps.items()}
        for m, r in reps.items():
            io.write_error_series_csv(out / f"table1_{label}_{m}.csv", r, np.arange(128) / 128.0)
            print(f"{label:11s} {m:11s} rmse={r.rmse:.4f} sum={r.rmse_sum:.4f} table={target[m]:.4f}")
    io.write_json(out / "table1.json", result)
    return 0


def cmd_figures(args) -> int:
    out = _outdir(args)
    res = run_figures(seed=args.seed)
    summary = {}
    for case, reps in res.items():
        summary[case] = {m: r.to_dict() for m, r in reps.items()}
        name = case.split("_")[0] + "_" + case.split("_")[1]
        n = GENERATORS[name]()[0].n
        for m, r in reps.items():
            io.write_error_series_csv(out / f"fig_{case}_{m}.csv", r, np.arange(n) / 128.0)
        print(
            f"{case:18s} median |err| si={np.median(reps['si'].abs_error):.4f} "
            f"lc={np.median(reps['lc'].abs_error):.4f} lc-true-cr={np.median(reps['lc-true-cr'].abs_error):.4f}"
        )
    io.write_json(out / "figures.json", summary)
    return 0


def _add_run_options(p):
    p.add_argument("--config", help="JSON file with RunConfig fields")
    p.add_argument("--input", help="generator name or signal CSV")
    p.add_argument("--sample-rate", dest="sample_rate", type=float)
    p.add_argument("--sigma", help="window width in seconds, a sigma file, or 'sigma1'")
    p.add_argument("--tau0", type=float)
    p.add_argument("--threshold", help="relative:RHO or absolute:EPS")
    p.add_argument("--k", dest="k_expected", type=int)
    p.add_argument("--model", help="si, lc, lc-true-cr or all")
    p.add_argument("--oversampling", type=int)
    p.add_argument("--truncation", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--snr-db", dest="snr_db", type=float)
    p.add_argument("--complex", action="store_const", const=True, default=None)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="astft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a test signal and its ground truth")
    p.add_argument("name", help=", ".join(GENERATORS))
    p.add_argument("--complex", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("separate", help="run the full separation pipeline")
    _add_run_options(p)
    p.add_argument("--dump-tf", action="store_true", help="also write the TF matrix")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("bounds", help="evaluate error bounds and separation conditions")
    _add_run_options(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table1", help="two-LFM RMSE table")
    p.add_argument("--sigma-file", help="user sigma series for the time-varying row")
    p.add_argument("--oversampling", type=int, default=TABLE1_OVERSAMPLING)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("figures", help="single-component clean/noisy experiments")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"astft {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
