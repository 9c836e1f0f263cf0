#!/usr/bin/env python3
"""Run the worked examples from the fixture corpus through the command line front end."""

from __future__ import annotations

import argparse
from pathlib import Path

from finspaces.cli import main as cli

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"

EXAMPLES = [
    ("projective plane model: homology", ["homology", "rp2.json"]),
    ("projective plane model: spectral sequence", ["spectral", "rp2.json", "--filtration", "standard"]),
    ("projective plane model: universal cover and pi2",
     ["cover", "rp2.json", "--coloring", "z2", "--filtration", "standard"]),
    ("projective plane model: greedy Morse complex", ["morse", "rp2.json", "--greedy"]),
    ("Z poset relative to U_a", ["quasicell", "z-wedge.json", "--relative", "Ua"]),
    ("Z poset without a subspace (expected witness)", ["quasicell", "z-wedge.json"]),
    ("sphere model with a Morse matching (forced complex)",
     ["morse", "morse-remark.json", "--matching", "M", "--force"]),
    ("suspension of two points", ["spectral", "suspension.json", "--filtration", "suspension"]),
    ("three-point chain: Mobius function", ["mobius", "chain3.json", "--method", "all"]),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixtures", type=Path, default=FIX)
    args = ap.parse_args()
    for title, argv in EXAMPLES:
        argv = [argv[0], str(args.fixtures / argv[1])] + argv[2:]
        print(f"== {title}")
        print(f"$ finspaces {' '.join(argv)}")
        code = cli(argv)
        print(f"(exit {code})\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
