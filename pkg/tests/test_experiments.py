import json
import subprocess
import sys
from pathlib import Path

from finspaces.experiments import (OracleConfig, SubdivisionBenchConfig, bench_table, oracle_trials,
                                   subdivision_bases, subdivision_benchmark)

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def test_bases_are_never_discrete():
    bases = subdivision_bases(SubdivisionBenchConfig(seed=1, count=20, max_base=5))
    assert len(bases) == 20
    assert all(b.sorted_covers and b.height() <= 3 for b in bases)


def test_benchmark_is_seeded():
    cfg = SubdivisionBenchConfig(seed=2, count=4, max_base=5)
    a = [(r.points, r.chains, r.quasicell, r.morse) for r in subdivision_benchmark(cfg)]
    b = [(r.points, r.chains, r.quasicell, r.morse) for r in subdivision_benchmark(cfg)]
    assert a == b
    assert "strictly decreasing" in bench_table(subdivision_benchmark(cfg))


def test_oracle_trials_small():
    trials = oracle_trials(OracleConfig(seed=3, count=10, max_size=6))
    assert all(t.converges and t.chi_constant for t in trials)


def test_bench_script_writes_report(tmp_path):
    out = subprocess.run([sys.executable, str(SCRIPTS / "bench_subdivisions.py"), "--count", "5",
                          "--max-base", "5", "--out", str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    data = json.loads((tmp_path / "bench_subdivisions.json").read_text())
    assert len(data["rows"]) == 5 and data["config"]["count"] == 5


def test_examples_script_runs():
    out = subprocess.run([sys.executable, str(SCRIPTS / "run_examples.py")], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert "H0=Z, H1=0, H2=Z; pi2=Z" in out.stdout
