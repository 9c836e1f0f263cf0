"""Seeded experiment drivers shared by the scripts and the acceptance suite."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass

from .complexes import f_complex, homology
from .generators import random_antichain_filtration, random_poset
from .intlinalg import AbelianGroup
from .morse import greedy_matching, morse_complex, verify_matching
from .poset import Poset, barycentric_subdivision
from .reductions import find_quasicellular, quasicellular_complex
from .spectral import spectral_sequence, validate_filtration


def _nonzero(groups: dict) -> dict:
    return {n: g for n, g in groups.items() if not g.is_trivial}


@dataclass
class SubdivisionBenchConfig:
    seed: int = 606
    count: int = 30
    max_base: int = 8
    max_height: int = 3
    density: float = 0.6


@dataclass
class BenchRow:
    base: int
    points: int
    chains: int
    quasicell: int
    morse: int
    agree: bool
    seconds_f: float
    seconds_q: float
    seconds_m: float

    @property
    def strictly_decreasing(self) -> bool:
        return self.morse < self.quasicell < self.chains

    @property
    def ordered(self) -> bool:
        return self.morse <= self.quasicell <= self.chains


def subdivision_bases(cfg: SubdivisionBenchConfig) -> list[Poset]:
    """Random bases with at least one relation.

    A base without relations is its own subdivision and nothing can shrink
    it, so such draws are skipped.
    """
    rng = random.Random(cfg.seed)
    out: list[Poset] = []
    while len(out) < cfg.count:
        base = random_poset(rng, rng.randint(2, cfg.max_base), cfg.density, max_height=cfg.max_height)
        if base.sorted_covers:
            out.append(base)
    return out


def bench_subdivision(base: Poset) -> BenchRow:
    P = barycentric_subdivision(base)
    t0 = time.perf_counter()
    oracle = _nonzero(homology(f_complex(P), representatives=False).groups)
    t1 = time.perf_counter()
    qc = quasicellular_complex(P, find_quasicellular(P))
    hq = _nonzero(qc.homology())
    t2 = time.perf_counter()
    M = greedy_matching(P)
    ok = verify_matching(P, M).ok
    mc = morse_complex(P, M)
    hm = _nonzero(mc.homology())
    t3 = time.perf_counter()
    return BenchRow(len(base), len(P), sum(P.chain_counts()), qc.size, mc.size,
                    ok and hq == oracle == hm, t1 - t0, t2 - t1, t3 - t2)


def subdivision_benchmark(cfg: SubdivisionBenchConfig | None = None) -> list[BenchRow]:
    cfg = cfg or SubdivisionBenchConfig()
    return [bench_subdivision(b) for b in subdivision_bases(cfg)]


def bench_table(rows: list[BenchRow]) -> str:
    head = f"{'base':>4} {'points':>6} {'chains':>6} {'quasi':>5} {'morse':>5} {'t_f':>8} {'t_q':>8} {'t_m':>8}  agree"
    lines = [head]
    for r in rows:
        lines.append(f"{r.base:>4} {r.points:>6} {r.chains:>6} {r.quasicell:>5} {r.morse:>5} "
                     f"{r.seconds_f:8.4f} {r.seconds_q:8.4f} {r.seconds_m:8.4f}  {r.agree}")
    strict = sum(r.strictly_decreasing for r in rows)
    lines.append(f"strictly decreasing: {strict}/{len(rows)}; all groups agree: {all(r.agree for r in rows)}")
    return "\n".join(lines)


def rows_json(rows: list[BenchRow]) -> list[dict]:
    return [dict(asdict(r), strictly_decreasing=r.strictly_decreasing) for r in rows]


# ---------------------------------------------------------------------------
# spectral sequence against the oracle


@dataclass
class OracleConfig:
    seed: int = 505
    count: int = 100
    max_size: int = 10


@dataclass
class OracleResult:
    size: int
    levels: int
    pages: int
    converges: bool
    chi_constant: bool
    seconds: float


def oracle_trials(cfg: OracleConfig | None = None) -> list[OracleResult]:
    """Random antichain-induced filtrations: E-infinity against the f-complex."""
    cfg = cfg or OracleConfig()
    rng = random.Random(cfg.seed)
    out = []
    for _ in range(cfg.count):
        P = random_poset(rng, rng.randint(1, cfg.max_size), rng.choice([0.2, 0.35, 0.5]))
        t = time.perf_counter()
        F = validate_filtration(P, random_antichain_filtration(rng, P))
        ss = spectral_sequence(F)
        H = homology(f_complex(P), representatives=False).groups
        rank, tors = ss.report.degree_rank, ss.report.degree_torsion_order
        ok = all(rank.get(n, 0) == H.get(n, AbelianGroup()).rank
                 and tors.get(n, 1) == H.get(n, AbelianGroup()).torsion_order for n in set(H) | set(rank))
        out.append(OracleResult(len(P), F.N + 1, len(ss.pages), ok,
                                len(set(ss.euler_characteristics())) == 1, time.perf_counter() - t))
    return out

