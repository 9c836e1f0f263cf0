"""Homological discrete Morse theory on Hasse diagrams."""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable

from .complexes import cone, homology, is_acyclic, reduced_homology, relative_f_complex, strip_point
from .errors import (ClassExpressionFailed, NotACover, NotAdmissible, NotQuasicellular, PreconditionFailed,
                     RhoMismatch)
from .intlinalg import IntMatrix, determinant, solve
from .poset import Poset
from .reductions import Infeasible, ReducedComplex, _greedy, find_quasicellular, forced_levels
from .spectral import FilteredComplex, Filtration

Edge = tuple[str, str]


@dataclass
class MatchingReport:
    is_matching: bool
    is_morse: bool
    admissible_edges: dict[Edge, bool]
    critical_points: tuple[str, ...]
    cycle: tuple[str, ...] | None = None

    @property
    def admissible(self) -> bool:
        return all(self.admissible_edges.values())

    @property
    def ok(self) -> bool:
        return self.is_matching and self.is_morse and self.admissible


def _check_edges(P: Poset, M: Iterable[Edge]) -> list[Edge]:
    covers = P.covers
    edges = [tuple(e) for e in M]
    for e in edges:
        if e not in covers:
            raise NotACover(f"{e} is not an edge of the Hasse diagram", e)
    return sorted(set(edges), key=lambda e: (P._id(e[0]), P._id(e[1])))


def edge_admissible(P: Poset, a: str, b: str) -> bool:
    """U^_b - {a} is acyclic."""
    return is_acyclic(P.subposet([y for y in P.down_set(b, strict=True) if y != a]))


def _morse_graph(P: Poset, M: set) -> TopologicalSorter:
    ts: TopologicalSorter = TopologicalSorter()
    for x in P.elements:
        ts.add(x)
    for a, b in P.sorted_covers:
        if (a, b) in M:
            ts.add(b, a)  # a -> b, edge reversed upward
        else:
            ts.add(a, b)  # b -> a
    return ts


def is_morse(P: Poset, M: Iterable[Edge]) -> tuple[bool, tuple[str, ...] | None]:
    try:
        tuple(_morse_graph(P, set(M)).static_order())
    except CycleError as err:
        return False, tuple(err.args[1])
    return True, None


def verify_matching(P: Poset, M: Iterable[Edge]) -> MatchingReport:
    edges = _check_edges(P, M)
    seen: set = set()
    matching = True
    for a, b in edges:
        if a in seen or b in seen:
            matching = False
        seen.update((a, b))
    morse, cyc = is_morse(P, edges)
    adm = {e: edge_admissible(P, *e) for e in edges}
    critical = tuple(x for x in P.elements if x not in seen)
    return MatchingReport(matching, morse, adm, critical, cyc)


def greedy_matching(P: Poset) -> list[Edge]:
    """Scan Hasse edges in element order, keeping admissible ones that leave H_M acyclic.

    A rejected edge can never become acceptable later (the matching only
    grows), so one pass gives the same result as repeated scanning.
    """
    M: list[Edge] = []
    used: set = set()
    for a, b in P.sorted_covers:
        if a in used or b in used or not edge_admissible(P, a, b):
            continue
        if is_morse(P, M + [(a, b)])[0]:
            M.append((a, b))
            used.update((a, b))
    return M


# ---------------------------------------------------------------------------
# Morse complex


@dataclass
class MorseComplex(ReducedComplex):
    rho: dict = field(default_factory=dict)
    matching: list = field(default_factory=list)
    forced: bool = False


def _filtration_levels(P: Poset, rho: dict, M: list[Edge]) -> list[tuple[str, ...]]:
    top = max(rho.values(), default=0)
    levels = []
    for n in range(top + 1):
        xs = {x for x, r in rho.items() if r <= n} | {z for y, z in M if rho[y] == n}
        levels.append(P.sort(xs))
    return levels


def _cone_class(sigma: dict, x: str, P: Poset, n: int) -> dict:
    """(-1)^n * cone over sigma with apex x; its boundary is sigma."""
    sign = -1 if n % 2 else 1
    return {c: sign * a for c, a in cone(sigma, x, P).items()}


def morse_complex(P: Poset, M: Iterable[Edge], force: bool = False) -> MorseComplex:
    """Complex on the critical points of a homologically admissible Morse matching.

    With ``force=True`` the construction runs even when P is not quasicellular:
    rho takes the forced concentration levels and the differential is the
    point-deletion formula between critical points.  Its homology then need
    not agree with that of P.
    """
    report = verify_matching(P, M)
    if not report.is_matching:
        raise PreconditionFailed("edges share a vertex", tuple(M))
    if not report.is_morse:
        raise PreconditionFailed("H_M has a directed cycle", report.cycle)
    for e, ok in report.admissible_edges.items():
        if not ok:
            raise NotAdmissible(f"U^_{e[1]} - {{{e[0]}}} is not acyclic", e)
    edges = list(report.admissible_edges)
    critical = set(report.critical_points)
    qm = find_quasicellular(P)
    if isinstance(qm, Infeasible):
        if not force:
            raise NotQuasicellular(qm.reason, qm.witness)
        return _forced_complex(P, edges, critical)
    rho = qm.rho
    for a, b in edges:
        if rho[b] != rho[a] + 1:
            raise RhoMismatch(f"rho({b}) = {rho[b]} but rho({a}) = {rho[a]}", (a, b))

    levels = _filtration_levels(P, rho, edges)
    F = Filtration(P, tuple(levels))
    fc = FilteredComplex.from_filtration(F)
    top = len(levels) - 1
    gens: dict[int, list] = {}
    classes: dict[int, list] = {}   # per degree: (point, H~ rep, relative cycle)
    T: dict[int, IntMatrix] = {}
    for n in range(top + 1):
        pts = [x for x in P.elements if x in critical and rho[x] == n]
        cyc = []
        for x in pts:
            H = reduced_homology(P.subposet(P.down_set(x, strict=True)))
            for k, sigma in enumerate(H.representatives.get(n - 1, [])):
                if H.orders(n - 1)[k]:
                    raise ClassExpressionFailed("torsion in a critical link is not supported", x)
                cyc.append((x, sigma, _cone_class(sigma, x, P, n)))
        classes[n] = cyc
        gens[n] = [(x, 0) for x, _, _ in cyc]
        sq = fc.E(1, n, 0)
        width = len(sq.orders) if sq is not None else 0
        if width != len(cyc) or (sq is not None and any(sq.orders)):
            raise ClassExpressionFailed(f"E^1 at level {n} does not match the critical points", n)
        if not cyc:
            continue
        cols = [sq.coordinates(fc.C.vector(n, rel)) for _, _, rel in cyc]
        if any(c is None for c in cols):
            raise ClassExpressionFailed("a critical cone is not a relative cycle", n)
        T[n] = IntMatrix.from_columns(cols, len(cyc))
        if abs(determinant(T[n])) != 1:
            raise ClassExpressionFailed(f"critical cones do not form a basis at level {n}", n)
    diffs: dict[int, IntMatrix] = {}
    for n in range(1, top + 1):
        if not classes[n] or not classes[n - 1]:
            continue
        sq = fc.E(1, n - 1, 0)
        cols = []
        for _, sigma, _ in classes[n]:
            c = sq.coordinates(fc.C.vector(n - 1, sigma))
            x = solve(T[n - 1], c) if c is not None else None
            if x is None:
                raise ClassExpressionFailed("boundary of a critical cone is not a class", n)
            cols.append(x)
        diffs[n] = IntMatrix.from_columns(cols, len(classes[n - 1]))
    return MorseComplex(gens, diffs, None, rho, edges, False)


def _forced_complex(P: Poset, edges: list[Edge], critical: set) -> MorseComplex:
    domain = list(P.elements)
    forced, _ = forced_levels(P, domain)
    rho, _ = _greedy(P, set(domain), forced)
    reps: dict[int, list] = {}
    gens: dict[int, list] = {}
    for x in P.elements:
        if x not in critical:
            continue
        n = rho[x]
        H = reduced_homology(P.subposet(P.down_set(x, strict=True)))
        for k, sigma in enumerate(H.representatives.get(n - 1, [])):
            reps.setdefault(n, []).append((x, sigma))
            gens.setdefault(n, []).append((x, H.orders(n - 1)[k]))
    diffs: dict[int, IntMatrix] = {}
    for n, items in reps.items():
        lower = reps.get(n - 1)
        if not lower:
            continue
        cols = []
        for _, sigma in items:
            col = []
            for y in dict.fromkeys(y for y, _ in lower):
                H = reduced_homology(P.subposet(P.down_set(y, strict=True)))
                c = H.coordinates(n - 2, strip_point(sigma, y))
                if c is None:
                    raise ClassExpressionFailed("stripped cycle is not a cycle", (n, y))
                col.extend(c)
            cols.append(col)
        diffs[n] = IntMatrix.from_columns(cols, len(lower))
    return MorseComplex(gens, diffs, None, rho, edges, True)


def single_edge_collapse_check(P: Poset, a: str, b: str) -> bool:
    """H_*(X, X - {a, b}) = 0 for an admissible edge with b maximal and F^_a = {b}."""
    if (a, b) not in P.covers:
        raise PreconditionFailed(f"({a}, {b}) is not a Hasse edge", (a, b))
    if P.up_set(b, strict=True):
        raise PreconditionFailed(f"{b} is not maximal", b)
    if P.up_set(a, strict=True) != (b,):
        raise PreconditionFailed(f"the strict up-set of {a} is not {{{b}}}", a)
    if not edge_admissible(P, a, b):
        raise PreconditionFailed(f"({a}, {b}) is not homologically admissible", (a, b))
    rest = [x for x in P.elements if x not in (a, b)]
    groups = homology(relative_f_complex(P, rest), representatives=False).groups
    return all(g.is_trivial for g in groups.values())


def _pair_order(P: Poset, S: list[Edge]) -> list[Edge]:
    """Linear extension of (a, b) <= (a', b') iff a < b', ties broken by element order."""
    import heapq
    key = {e: (P._id(e[0]), P._id(e[1])) for e in S}
    preds = {e: {f for f in S if f != e and P.lt(f[0], e[1])} for e in S}
    heap = [key[e] + (e,) for e in S if not preds[e]]
    heapq.heapify(heap)
    done: list[Edge] = []
    while heap:
        e = heapq.heappop(heap)[-1]
        done.append(e)
        for f in S:
            if e in preds[f]:
                preds[f].discard(e)
                if not preds[f]:
                    heapq.heappush(heap, key[f] + (f,))
    if len(done) != len(S):
        raise PreconditionFailed("matched pairs are cyclically ordered", tuple(S))
    return done


def collapse_sequence(P: Poset, M: Iterable[Edge]) -> list[tuple[Edge, bool]]:
    """Replay the removal order behind the Morse complex.

    For each level n the matched pairs (y, z) with rho(y) = n are added to
    X_{n-1} plus the critical points of level n one at a time, and the
    single-edge check runs on each intermediate space B_r for the pair (y_r, z_r).
    """
    edges = _check_edges(P, M)
    qm = find_quasicellular(P)
    if isinstance(qm, Infeasible):
        raise NotQuasicellular(qm.reason, qm.witness)
    rho = qm.rho
    critical = set(verify_matching(P, edges).critical_points)
    levels = _filtration_levels(P, rho, edges)
    out = []
    for n in range(len(levels)):
        base = set(levels[n - 1]) if n else set()
        base |= {x for x in critical if rho[x] == n}
        for y, z in _pair_order(P, [e for e in edges if rho[e[0]] == n]):
            base |= {y, z}
            B = P.subposet(base)
            out.append(((y, z), single_edge_collapse_check(B, y, z)))
    return out
