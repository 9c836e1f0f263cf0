"""Spectral sequences of antichain-induced filtrations.

Two independent routes live here:

* :func:`e1_stars` / :func:`d1_stars` build the first page directly from the
  reduced homology of the punctured stars ``C^_x`` (restricted to the
  filtration level of x) and the closed-form differential obtained by
  deleting points from representative cycles.
* :func:`spectral_sequence` is a generic filtered-chain-complex engine over Z:
  ``E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})`` with
  ``Z^r_p = {x in F_p : dx in F_{p-r}}``, computed on integer lattices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .complexes import (ChainComplex, HomologyResult, absolute_homology, f_complex, homology,
                        reduced_homology, relative_f_complex, strip_point)
from .errors import ClassExpressionFailed, NotAntichainInduced
from .intlinalg import AbelianGroup, IntMatrix, Subquotient, image_basis, kernel_basis
from .poset import Poset


@dataclass(frozen=True)
class Filtration:
    """Levels X_0 <= X_1 <= ... <= X_N = X; ``relative=True`` reads X_0 as the subspace A."""

    poset: Poset
    levels: tuple[tuple[str, ...], ...]
    relative: bool = False

    @property
    def N(self) -> int:
        return len(self.levels) - 1

    def level(self, p: int) -> tuple[str, ...]:
        if p < 0:
            return ()
        return self.levels[min(p, self.N)]

    def D(self, p: int) -> tuple[str, ...]:
        """X_p - X_{p-1} (for p >= 1)."""
        if p < 1 or p > self.N:
            return ()
        prev = set(self.levels[p - 1])
        return tuple(x for x in self.levels[p] if x not in prev)

    @cached_property
    def level_of(self) -> dict[str, int]:
        out = {}
        for p, lv in enumerate(self.levels):
            for x in lv:
                out.setdefault(x, p)
        return out

    def punctured_star(self, x: str) -> Poset:
        """C^_x computed inside X_p, p the level where x appears."""
        p = self.level_of[x]
        Xp = set(self.level(p))
        return self.poset.subposet([y for y in self.poset.punctured_star(x) if y in Xp])

    # finite levels: condition (*) on eventual vanishing holds trivially
    condition_star: bool = field(default=True, init=False)


def validate_filtration(P: Poset, levels: Sequence[Iterable[str]], relative: bool = False) -> Filtration:
    """Check that the levels are nested, end at X, and add antichains after X_0."""
    lv = [P.sort(level) for level in levels]
    if not lv:
        raise ValueError("a filtration needs at least one level")
    for p in range(1, len(lv)):
        if not set(lv[p - 1]) <= set(lv[p]):
            raise ValueError(f"level {p - 1} is not contained in level {p}")
    if set(lv[-1]) != set(P.elements):
        raise ValueError("the last level must be the whole poset")
    F = Filtration(P, tuple(lv), relative)
    for p in range(1, len(lv)):
        if not P.is_antichain(F.D(p)):
            raise NotAntichainInduced(f"X_{p} - X_{p - 1} is not an antichain", p)
    return F


# ---------------------------------------------------------------------------
# pages


@dataclass
class SpectralPage:
    """One page: groups E^r_{p,q}, generator data and the matrices of d^r.

    ``differentials[(p, q)]`` has one column per generator of E^r_{p,q} and
    one row per generator of E^r_{p-r, q+r-1}; torsion coordinates are
    reduced modulo the generator orders.
    """

    r: int
    entries: dict[tuple[int, int], AbelianGroup]
    orders: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    differentials: dict[tuple[int, int], IntMatrix] = field(default_factory=dict)
    # per entry: list of (owner point or None, representative cycle as {chain: coeff})
    generators: dict[tuple[int, int], list] = field(default_factory=dict, repr=False)

    def entry(self, p: int, q: int) -> AbelianGroup:
        return self.entries.get((p, q), AbelianGroup())

    def nonzero(self) -> dict[tuple[int, int], AbelianGroup]:
        return {k: g for k, g in sorted(self.entries.items()) if not g.is_trivial}

    def euler_characteristic(self) -> int:
        return sum((-1) ** (p + q) * g.rank for (p, q), g in self.entries.items())

    def target(self, p: int, q: int) -> tuple[int, int]:
        return p - self.r, q + self.r - 1


@dataclass
class E1Component:
    """Piece of E^1_{p,q} coming from one point x (or from X_0 when x is None)."""

    point: str | None
    degree: int
    homology: HomologyResult

    @property
    def orders(self) -> list[int]:
        return self.homology.orders(self.degree)

    @property
    def cycles(self) -> list[dict]:
        return self.homology.representatives.get(self.degree, [])


@dataclass
class StarPage(SpectralPage):
    filtration: Filtration | None = None
    components: dict[tuple[int, int], list[E1Component]] = field(default_factory=dict, repr=False)

    def coordinates(self, p: int, q: int, point, cycle: dict) -> list[int]:
        """Coordinates in E^1_{p,q} of a cycle placed in the summand of ``point``.

        Use ``point=None`` for the column p = 0.
        """
        out: list[int] = []
        for comp in self.components.get((p, q), []):
            if comp.point == point:
                out.extend(_component_coordinates(comp, cycle, f"summand {point}"))
            else:
                out.extend([0] * len(comp.orders))
        return out


def e1_stars(F: Filtration) -> StarPage:
    """First page from the homology of the punctured stars."""
    P = F.poset
    entries: dict = {}
    comps: dict = {}
    if not F.relative:
        X0 = P.subposet(F.level(0))
        H0 = absolute_homology(X0)
        for q in range(0, X0.height() + 1):
            comps[(0, q)] = [E1Component(None, q, H0)]
    for p in range(1, F.N + 1):
        for x in F.D(p):
            star = F.punctured_star(x)
            H = reduced_homology(star)
            for k in range(-1, star.height() + 1):
                comps.setdefault((p, k - p + 1), []).append(E1Component(x, k, H))
    orders_map: dict = {}
    gens: dict = {}
    for key, cs in comps.items():
        orders = [o for c in cs for o in c.orders]
        if not orders:
            continue
        orders_map[key] = orders
        entries[key] = AbelianGroup.from_orders(0, orders)
        gens[key] = [(c.point, cyc) for c in cs for cyc in c.cycles]
    comps = {k: v for k, v in comps.items() if k in entries}
    return StarPage(1, entries, orders_map, {}, gens, filtration=F, components=comps)


def _component_coordinates(comp: E1Component, cycle: dict, where: str) -> list[int]:
    c = comp.homology.coordinates(comp.degree, cycle)
    if c is None:
        raise ClassExpressionFailed(f"image cycle is not a cycle of {where}", cycle)
    return c


def d1_stars(F: Filtration, page: StarPage | None = None) -> StarPage:
    """Attach the first-page differentials computed by point deletion."""
    if page is None:
        page = e1_stars(F)
    diffs: dict = {}
    for (p, q), gens in page.generators.items():
        if p < 1 or (F.relative and p < 2):
            continue
        tgt = (p - 1, q)
        tcomps = page.components.get(tgt)
        if not tcomps:
            continue
        rows = len(page.orders[tgt])
        cols = []
        for x, sigma in gens:
            col = []
            for comp in tcomps:
                if p == 1:
                    image = sigma  # inclusion C^_x -> X_0
                    where = "X_0"
                else:
                    y = comp.point
                    image = strip_point(sigma, y)
                    where = f"C^_{y}"
                c = _component_coordinates(comp, image, where)
                col.extend(c)
            cols.append(col)
        diffs[(p, q)] = IntMatrix.from_columns(cols, rows)
    page.differentials = diffs
    return page


def star_page(F: Filtration) -> StarPage:
    return d1_stars(F, e1_stars(F))


# ---------------------------------------------------------------------------
# homology of a page (groups may have torsion)


def _presented_kernel(F: IntMatrix, target_orders: Sequence[int]) -> IntMatrix:
    """Basis of {x : F x = 0 in the presented target}."""
    k = F.cols
    rel_cols = [[o if i == j else 0 for i in range(F.rows)] for j, o in enumerate(target_orders) if o]
    R = IntMatrix.from_columns(rel_cols, F.rows)
    K = kernel_basis(F.hstack(R))
    proj = IntMatrix([K.data[i] for i in range(k)], k, K.cols)
    return image_basis(proj)


def presented_homology(orders: Sequence[int], outgoing: IntMatrix | None, target_orders: Sequence[int],
                       incoming: IntMatrix | None) -> AbelianGroup:
    """Homology at a spot of a complex of presented groups Z^k / (orders).

    ``outgoing`` maps the spot to a target with ``target_orders``; ``incoming``
    maps into the spot.  Zero orders stand for free generators.
    """
    k = len(orders)
    if k == 0:
        return AbelianGroup()
    if outgoing is None:
        outgoing = IntMatrix.zeros(len(target_orders), k)
    num = _presented_kernel(outgoing, target_orders)
    rels = [[o if i == j else 0 for i in range(k)] for j, o in enumerate(orders) if o]
    if incoming is not None:
        rels += incoming.columns()
    return Subquotient(num, IntMatrix.from_columns(rels, k)).group


def page_homology(page: SpectralPage, p: int, q: int) -> AbelianGroup:
    """Homology at (p, q) of the page viewed as a complex under d^r."""
    tp, tq = page.target(p, q)
    return presented_homology(page.orders.get((p, q), []), page.differentials.get((p, q)),
                              page.orders.get((tp, tq), []),
                              page.differentials.get((p + page.r, q - page.r + 1)))


# ---------------------------------------------------------------------------
# generic engine


@dataclass
class ConvergenceReport:
    degree_rank: dict[int, int]
    degree_torsion_order: dict[int, int]
    homology: dict[int, AbelianGroup]

    @property
    def converges(self) -> bool:
        for n in set(self.degree_rank) | set(self.homology):
            g = self.homology.get(n, AbelianGroup())
            if self.degree_rank.get(n, 0) != g.rank or self.degree_torsion_order.get(n, 1) != g.torsion_order:
                return False
        return True


@dataclass
class SpectralSequence:
    filtration: Filtration
    pages: list[SpectralPage]
    infinity: SpectralPage
    report: ConvergenceReport

    def euler_characteristics(self) -> list[int]:
        return [pg.euler_characteristic() for pg in self.pages] + [self.infinity.euler_characteristic()]


class FilteredComplex:
    """A chain complex whose basis elements carry a filtration degree."""

    def __init__(self, C: ChainComplex, fdeg: dict[int, list[int]], top: int, bottom: int = 0):
        self.C = C
        self.fdeg = fdeg
        self.top = top
        self.bottom = bottom
        self._z: dict = {}
        self._sq: dict = {}

    @classmethod
    def from_filtration(cls, F: Filtration) -> "FilteredComplex":
        P = F.poset
        if F.relative:
            C = relative_f_complex(P, F.level(0))
        else:
            C = f_complex(P)
        lvl = F.level_of
        fdeg = {n: [max(lvl[v] for v in s) for s in b] for n, b in C.basis.items()}
        return cls(C, fdeg, F.N, 1 if F.relative else 0)

    def _cols_upto(self, n: int, p: int) -> list[int]:
        return [j for j, f in enumerate(self.fdeg.get(n, [])) if f <= p]

    def Z(self, r: int, p: int, n: int) -> IntMatrix:
        """Basis (columns, in C_n coordinates) of {x in F_p C_n : dx in F_{p-r} C_{n-1}}."""
        lo = max(p - r, self.bottom - 1)
        p = min(p, self.top)
        key = (lo, p, n)
        if key not in self._z:
            dim = self.C.rank(n)
            J = self._cols_upto(n, p)
            if r <= 0:
                cols = [[int(i == j) for i in range(dim)] for j in J]
            else:
                rows = [i for i, f in enumerate(self.fdeg.get(n - 1, [])) if f > lo]
                D = self.C.differential(n)
                sub = IntMatrix([[D.data[i][j] for j in J] for i in rows], len(rows), len(J))
                K = kernel_basis(sub)
                cols = []
                for kc in K.columns():
                    v = [0] * dim
                    for j, a in zip(J, kc):
                        v[j] = a
                    cols.append(v)
            self._z[key] = IntMatrix.from_columns(cols, dim)
        return self._z[key]

    def E(self, r: int, p: int, q: int) -> Subquotient | None:
        if p < self.bottom or p > self.top:
            return None
        n = p + q
        if self.C.rank(n) == 0:
            return None
        key = (r, p, q)
        if key not in self._sq:
            num = self.Z(r, p, n)
            rel = self.Z(r - 1, p - 1, n).columns() if p - 1 >= self.bottom else []
            if self.C.rank(n + 1):
                Zup = self.Z(r - 1, p + r - 1, n + 1)
                D = self.C.differential(n + 1)
                rel += (D @ Zup).columns()
            self._sq[key] = Subquotient(num, IntMatrix.from_columns(rel, self.C.rank(n)))
        return self._sq[key]

    def page(self, r: int) -> SpectralPage:
        entries, orders, gens, diffs = {}, {}, {}, {}
        for p in range(self.bottom, self.top + 1):
            for n in self.C.degrees:
                q = n - p
                sq = self.E(r, p, q)
                if sq is None or not sq.orders:
                    continue
                entries[(p, q)] = sq.group
                orders[(p, q)] = list(sq.orders)
                gens[(p, q)] = [(None, self.C.combination(n, g)) for g in sq.generators]
        for (p, q) in entries:
            tp, tq = p - r, q + r - 1
            if (tp, tq) not in entries:
                continue
            n = p + q
            tgt = self.E(r, tp, tq)
            D = self.C.differential(n)
            cols = []
            for g in self.E(r, p, q).generators:
                c = tgt.coordinates(D.apply(g))
                if c is None:
                    raise ClassExpressionFailed("d maps a page generator outside Z^r", (p, q, r))
                cols.append(c)
            diffs[(p, q)] = IntMatrix.from_columns(cols, len(tgt.orders))
        return SpectralPage(r, entries, orders, diffs, gens)


def spectral_sequence(F: Filtration) -> SpectralSequence:
    """All pages E^1 .. E^{N+1} of the filtered f-complex plus E^infinity."""
    fc = FilteredComplex.from_filtration(F)
    last = max(F.N + 1 - fc.bottom, 1)
    pages = [fc.page(r) for r in range(1, last + 1)]
    # d^r vanishes from r = last on, so the last page already is E^infinity
    top = pages[-1]
    inf = SpectralPage(-1, dict(top.entries), dict(top.orders), {}, dict(top.generators))
    H = homology(fc.C, representatives=False).groups
    ranks: dict[int, int] = {}
    tors: dict[int, int] = {}
    for (p, q), g in inf.entries.items():
        ranks[p + q] = ranks.get(p + q, 0) + g.rank
        tors[p + q] = tors.get(p + q, 1) * g.torsion_order
    return SpectralSequence(F, pages, inf, ConvergenceReport(ranks, tors, H))
