"""Two-LFM RMSE table at sigma = 1/16 and, optionally, a user sigma series.

    python3 scripts/run_table1.py [--sigma-file SIGMA.csv] [--oversampling 8]
"""

import argparse

from astft.evaluation import TABLE1_CONST, TABLE1_OVERSAMPLING, TABLE1_SIGMA2, run_table1, sigma1_series_two_lfm
from astft.stft import SigmaSeries


def show(label, reps, target):
    print(f"{label}")
    print(f"  {'model':11s} {'mean':>8s} {'sum':>8s} {'target':>8s}   per-component")
    for m, r in reps.items():
        t = f"{target[m]:.4f}" if target else "-"
        comps = " ".join(f"{v:.4f}" for v in r.rel_l2)
        print(f"  {m:11s} {r.rmse:8.4f} {r.rmse_sum:8.4f} {t:>8s}   {comps}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sigma-file")
    ap.add_argument("--oversampling", type=int, default=TABLE1_OVERSAMPLING)
    ap.add_argument("--with-sigma1", action="store_true", help="also run the sigma_1 rule series")
    args = ap.parse_args()

    show("sigma = 1/16", run_table1("const_1_16", oversampling=args.oversampling), TABLE1_CONST)
    if args.sigma_file:
        series = SigmaSeries.from_file(args.sigma_file, 128)
        show(f"sigma from {args.sigma_file}", run_table1("user_series", series, args.oversampling), TABLE1_SIGMA2)
    if args.with_sigma1:
        show("sigma = sigma_1(t)", run_table1("user_series", sigma1_series_two_lfm(), args.oversampling), None)


if __name__ == "__main__":
    main()
