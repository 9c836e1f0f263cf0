#!/usr/bin/env python3
"""Chains vs quasicellular vs Morse generator counts on random barycentric subdivisions.

Writes a text table and a JSON file with one row per sample.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict
from pathlib import Path

from finspaces.experiments import SubdivisionBenchConfig, bench_table, rows_json, subdivision_benchmark


def main() -> int:
    defaults = SubdivisionBenchConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=defaults.seed)
    ap.add_argument("--count", type=int, default=defaults.count)
    ap.add_argument("--max-base", type=int, default=defaults.max_base)
    ap.add_argument("--max-height", type=int, default=defaults.max_height)
    ap.add_argument("--density", type=float, default=defaults.density)
    ap.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    args = ap.parse_args()

    cfg = SubdivisionBenchConfig(args.seed, args.count, args.max_base, args.max_height, args.density)
    rows = subdivision_benchmark(cfg)
    table = bench_table(rows)
    print(table)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "bench_subdivisions.txt").write_text(table + "\n", encoding="utf-8")
    payload = {"config": asdict(cfg), "rows": rows_json(rows)}
    (args.out / "bench_subdivisions.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    strict = sum(r.strictly_decreasing for r in rows)
    return 0 if all(r.agree for r in rows) and strict >= 0.8 * len(rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
