#!/usr/bin/env python3
"""Sweep the concentration bound over sigma and delta for the shipped
statistics and print one row per cell.

    python3 scripts/bound_sweep.py [--dim 16] [--samples 10000] [--seed 0]
"""

import argparse
import sys

import numpy as np

from vicaug.rng import RngState
from vicaug.theory import identity_statistic, linear_statistic, quadratic_statistic, verify_bound


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--samples", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    d = args.dim
    statistics = {
        "identity": identity_statistic(d),
        "linear": linear_statistic(rng.standard_normal((d, d))),
        "quadratic": quadratic_statistic([np.diag(1.0 + rng.random(d)) for _ in range(3)]),
    }
    x = 0.5 * rng.standard_normal(d)

    print(f"{'statistic':<10} {'sigma':>6} {'delta':>6} {'radius':>10} {'violation':>10} result")
    cell = 0
    for name, psi in statistics.items():
        for sigma in (0.01, 0.05, 0.1):
            for delta in (0.1, 0.3, 0.5):
                report = verify_bound(
                    psi, x, sigma=sigma, delta=delta, n_samples=args.samples,
                    rng=RngState(args.seed).substream(cell),
                )
                cell += 1
                print(
                    f"{name:<10} {sigma:>6.2f} {delta:>6.1f} {report.radius:>10.4f} "
                    f"{report.violation_rate:>10.4f} {'PASS' if report.passed else 'FAIL'}"
                )
    return 0


if __name__ == "__main__":
    sys.exit(main())
