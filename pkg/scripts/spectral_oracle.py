#!/usr/bin/env python3
"""Random antichain-induced filtrations: compare E-infinity with the f-complex homology."""

from __future__ import annotations

import argparse
import statistics

from finspaces.experiments import OracleConfig, oracle_trials


def main() -> int:
    defaults = OracleConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=defaults.seed)
    ap.add_argument("--count", type=int, default=defaults.count)
    ap.add_argument("--max-size", type=int, default=defaults.max_size)
    args = ap.parse_args()

    trials = oracle_trials(OracleConfig(args.seed, args.count, args.max_size))
    bad = [k for k, t in enumerate(trials) if not (t.converges and t.chi_constant)]
    times = [t.seconds for t in trials]
    print(f"trials: {len(trials)}  mismatches: {len(bad)}")
    print(f"levels: mean {statistics.mean(t.levels for t in trials):.2f}, max {max(t.levels for t in trials)}")
    print(f"time per trial: median {statistics.median(times):.4f} s, max {max(times):.4f} s")
    for k in bad:
        print(f"  trial {k}: {trials[k]}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
