"""Group colorings of Hasse diagrams and the regular covers they define.

A coloring labels each Hasse edge x < y with a group element.  It is admissible
when the product of labels along an increasing path (read left to right,
bottom to top) depends only on the endpoints.  The cover E(c) has points (x, g)
with (x, g) <= (y, g c(x <= y)); G acts on it by h (x, g) = (x, h g).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .complexes import absolute_homology, f_complex, homology, reduced_homology, strip_point
from .errors import (ClassExpressionFailed, ColoringNotAdmissible, NotACover, NotHomologySimplyConnected,
                     SchemaError)
from .intlinalg import AbelianGroup, IntMatrix
from .poset import Poset
from .spectral import E1Component, Filtration, StarPage, SpectralSequence, page_homology, spectral_sequence


# ---------------------------------------------------------------------------
# finite groups


@dataclass(frozen=True)
class FiniteGroup:
    """Group on indices 0..n-1 given by its multiplication table."""

    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    label: str = "G"

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or len(self.names) != n or len(set(self.names)) != n:
            raise SchemaError("a group needs one distinct name per table row", self.names)
        for row in self.table:
            if len(row) != n or any(not 0 <= v < n for v in row):
                raise SchemaError("multiplication table is not closed", row)
        e = self.identity
        if e is None:
            raise SchemaError("multiplication table has no identity", None)
        for a in range(n):
            if sorted(self.table[a]) != list(range(n)):
                raise SchemaError("multiplication table row is not a permutation", self.names[a])
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise SchemaError("multiplication is not associative",
                                  (self.names[a], self.names[b], self.names[c]))

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def identity(self) -> int | None:
        n = len(self.table)
        for e in range(n):
            if all(self.table[e][a] == a and self.table[a][e] == a for a in range(n)):
                return e
        return None

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(next(b for b in range(self.order) if self.table[a][b] == e) for a in range(self.order))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def index(self, name) -> int:
        name = str(name)
        try:
            return self.names.index(name)
        except ValueError:
            raise SchemaError(f"unknown group element {name!r}", name) from None

    def __iter__(self):
        return iter(range(self.order))


def cyclic(n: int) -> FiniteGroup:
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(table, tuple(str(a) for a in range(n)), f"Z/{n}")


def symmetric(n: int) -> FiniteGroup:
    """Permutations of 0..n-1, named by their one-line form; (p q)(i) = p(q(i))."""
    perms = list(itertools.permutations(range(n)))
    idx = {p: k for k, p in enumerate(perms)}
    table = tuple(tuple(idx[tuple(p[q[i]] for i in range(n))] for q in perms) for p in perms)
    return FiniteGroup(table, tuple("".join(map(str, p)) for p in perms), f"S{n}")


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def parse_group(spec) -> FiniteGroup:
    """``"cyclic:n"``, ``"symmetric:n"``, ``"trivial"`` or ``{"names": [...], "table": [[...]]}``."""
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind == "trivial":
            return trivial_group()
        try:
            n = int(arg)
        except ValueError:
            raise SchemaError(f"bad group spec {spec!r}", spec) from None
        if kind == "cyclic" and n >= 1:
            return cyclic(n)
        if kind == "symmetric" and n >= 1:
            return symmetric(n)
        raise SchemaError(f"bad group spec {spec!r}", spec)
    if isinstance(spec, Mapping) and "table" in spec:
        table = spec["table"]
        names = [str(x) for x in spec.get("names", range(len(table)))]
        pos = {nm: k for k, nm in enumerate(names)}
        try:
            rows = tuple(tuple(pos[str(v)] for v in row) for row in table)
        except KeyError as err:
            raise SchemaError(f"table entry {err.args[0]!r} is not a group element", err.args[0]) from None
        return FiniteGroup(rows, tuple(names), spec.get("label", "G"))
    raise SchemaError("group must be a string spec or a table object", spec)


# ---------------------------------------------------------------------------
# colorings


@dataclass
class Coloring:
    poset: Poset
    group: FiniteGroup
    labels: dict[tuple[str, str], int]
    values: dict[tuple[str, str], int] = field(repr=False, default_factory=dict)

    def c(self, x: str, y: str) -> int:
        """c(x <= y); for y < x this is c(y <= x)^-1."""
        if x == y:
            return self.group.identity
        if (x, y) in self.values:
            return self.values[(x, y)]
        if (y, x) in self.values:
            return self.group.inv(self.values[(y, x)])
        raise ValueError(f"{x} and {y} are not comparable")

    def name(self, g: int) -> str:
        return self.group.names[g]


def validate_coloring(P: Poset, G: FiniteGroup, labels: Iterable[tuple[str, str, object]] | Mapping) -> Coloring:
    """Build c on every relation from Hasse edge labels and check path independence."""
    covers = P.covers
    lab: dict = {}
    items = labels.items() if isinstance(labels, Mapping) else ((tuple(t[:2]), t[2]) for t in labels)
    for (a, b), g in items:
        if (a, b) not in covers:
            raise NotACover(f"({a}, {b}) is not a Hasse edge", (a, b))
        lab[(a, b)] = G.index(g)
    e = G.identity
    values: dict = {}
    for y in P.linear_extension:
        for w in P.lower_covers(y):
            step = lab.get((w, y), e)
            candidates = [(w, step)] + [(x, G.mul(values[(x, w)], step)) for x in P.down_set(w, strict=True)]
            for x, g in candidates:
                old = values.get((x, y))
                if old is None:
                    values[(x, y)] = g
                elif old != g:
                    raise ColoringNotAdmissible(
                        f"paths from {x} to {y} give {G.names[old]} and {G.names[g]}",
                        (x, y, G.names[old], G.names[g]))
    return Coloring(P, G, {k: lab.get(k, e) for k in P.sorted_covers}, values)


# ---------------------------------------------------------------------------
# the cover


@dataclass
class CoverSpace:
    coloring: Coloring
    total: Poset
    points: list[tuple[str, int]]

    @cached_property
    def _index(self) -> dict:
        return {pt: self.total.elements[k] for k, pt in enumerate(self.points)}

    @cached_property
    def _pair(self) -> dict:
        return {self.total.elements[k]: pt for k, pt in enumerate(self.points)}

    def name(self, x: str, g: int) -> str:
        return self._index[(x, g)]

    def pair(self, name: str) -> tuple[str, int]:
        return self._pair[name]

    def projection(self, name: str) -> str:
        return self._pair[name][0]

    def deck(self, h: int, name: str) -> str:
        x, g = self._pair[name]
        return self._index[(x, self.coloring.group.mul(h, g))]

    def lift(self, chain: Sequence[str], x: str, g: int) -> tuple[str, ...]:
        """Lift a chain of the star of x to the star of (x, g)."""
        col = self.coloring
        return self.total.order_chain(self.name(z, col.group.mul(g, col.c(x, z))) for z in chain)

    def lifted_levels(self, levels: Sequence[Sequence[str]]) -> list[tuple[str, ...]]:
        G = self.coloring.group
        return [self.total.sort(self.name(x, g) for x in lv for g in G) for lv in levels]

    def verify(self) -> bool:
        """Projection is |G|-to-1 and order preserving; the deck action is free and order preserving."""
        G = self.coloring.group
        fibers: dict = {}
        for nm in self.total.elements:
            fibers.setdefault(self.projection(nm), []).append(nm)
        if any(len(v) != G.order for v in fibers.values()) or len(fibers) != len(self.coloring.poset):
            return False
        P = self.coloring.poset
        for a, b in self.total.relations:
            if not P.lt(self.projection(a), self.projection(b)):
                return False
        for h in G:
            if h == G.identity:
                continue
            if any(self.deck(h, nm) == nm for nm in self.total.elements):
                return False
            for a, b in self.total.relations:
                if not self.total.lt(self.deck(h, a), self.deck(h, b)):
                    return False
        return True


def _point_name(x: str, gname: str, single: bool) -> str:
    return x if single else f"{x}.{gname}"


def build_cover(col: Coloring) -> CoverSpace:
    P, G = col.poset, col.group
    points = [(x, g) for x in P.elements for g in G]
    names = [_point_name(x, G.names[g], G.order == 1) for x, g in points]
    pos = {pt: k for k, pt in enumerate(points)}
    below = [0] * len(points)
    for x, y in P.relations:
        cxy = col.c(x, y)
        for g in G:
            below[pos[(y, G.mul(g, cxy))]] |= 1 << pos[(x, g)]
    return CoverSpace(col, Poset(names, below), points)


def is_connected(col: Coloring) -> bool:
    """Operative criterion: the cover E(c) is a connected poset."""
    return build_cover(col).total.is_connected()


# ---------------------------------------------------------------------------
# cover spectral sequence


@dataclass
class CoverSpectral:
    cover: CoverSpace
    base: Filtration
    page: StarPage
    generic: SpectralSequence

    def e1_agrees(self) -> bool:
        first = self.generic.pages[0]
        keys = set(self.page.nonzero()) | set(first.nonzero())
        return all(self.page.entry(*k) == first.entry(*k) for k in keys)

    def e2_agrees(self) -> bool:
        second = self.generic.pages[1] if len(self.generic.pages) > 1 else self.generic.infinity
        keys = set(self.page.entries) | set(second.nonzero())
        return all(page_homology(self.page, *k) == second.entry(*k) for k in keys)

    def e2(self, p: int, q: int) -> AbelianGroup:
        return page_homology(self.page, p, q)

    def class_coordinates(self, p: int, q: int, point: tuple[str, int] | None, cycle: dict) -> list[int]:
        """Coordinates of a class given by a base cycle sitting at summand ``point`` = (x, g).

        For p = 0 pass ``point=None`` and a cycle written on cover point names.
        """
        return self.page.coordinates(p, q, point, cycle)


def cover_spectral(col: Coloring, F: Filtration) -> CoverSpectral:
    """First page and differential of the lifted filtration, plus the generic engine on E(c)."""
    cov = build_cover(col)
    G = col.group
    lifted = Filtration(cov.total, tuple(cov.lifted_levels(F.levels)), F.relative)
    comps: dict = {}
    if not F.relative:
        X0 = cov.total.subposet(lifted.level(0))
        H0 = absolute_homology(X0)
        for q in range(0, X0.height() + 1):
            comps[(0, q)] = [E1Component(None, q, H0)]
    for p in range(1, F.N + 1):
        for x in F.D(p):
            star = F.punctured_star(x)
            H = reduced_homology(star)
            for g in G:
                for k in range(-1, star.height() + 1):
                    comps.setdefault((p, k - p + 1), []).append(E1Component((x, g), k, H))
    entries, orders_map, gens = {}, {}, {}
    for key, cs in comps.items():
        orders = [o for c in cs for o in c.orders]
        if orders:
            orders_map[key] = orders
            entries[key] = AbelianGroup.from_orders(0, orders)
            gens[key] = [(c.point, cyc) for c in cs for cyc in c.cycles]
    comps = {k: v for k, v in comps.items() if k in entries}

    diffs: dict = {}
    for (p, q), glist in gens.items():
        if p < 1 or (F.relative and p < 2):
            continue
        tgt = (p - 1, q)
        tcomps = comps.get(tgt)
        if not tcomps:
            continue
        cols = []
        for (x, g), sigma in glist:
            col_vec: list[int] = []
            for comp in tcomps:
                if p == 1:
                    image = {cov.lift(s, x, g): a for s, a in sigma.items()}
                    c = comp.homology.coordinates(comp.degree, image)
                else:
                    y, h = comp.point
                    if not F.poset.comparable(x, y) or G.mul(g, col.c(x, y)) != h:
                        col_vec.extend([0] * len(comp.orders))
                        continue
                    c = comp.homology.coordinates(comp.degree, strip_point(sigma, y))
                if c is None:
                    raise ClassExpressionFailed("routed image is not a cycle of its summand", (p, q, x, g))
                col_vec.extend(c)
            cols.append(col_vec)
        diffs[(p, q)] = IntMatrix.from_columns(cols, len(orders_map[tgt]))
    page = StarPage(1, entries, orders_map, diffs, gens, filtration=lifted, components=comps)
    generic = spectral_sequence(lifted)
    return CoverSpectral(cov, F, page, generic)


# ---------------------------------------------------------------------------
# pi_2


@dataclass(frozen=True)
class Pi2Report:
    group: AbelianGroup
    cover_homology: dict
    hypotheses: tuple[str, ...]
    tensor_check: bool | None = None


def pi2_report(col: Coloring, A: Iterable[str] | None = None) -> Pi2Report:
    """H_2 of the cover, which is pi_2 when the coloring is the universal one.

    Universality is user-asserted; only H_1 of the cover is checked.  With A
    given and every component of A having vanishing H~_1, the report also
    compares H_2 of the cover with |G| copies of H_2 of the base.
    """
    cov = build_cover(col)
    H = homology(f_complex(cov.total), representatives=False).groups
    if not H.get(1, AbelianGroup()).is_trivial or not cov.total.is_connected():
        raise NotHomologySimplyConnected("the cover has nonzero H_1 or is disconnected",
                                         str(H.get(1, AbelianGroup())))
    hyps = ["coloring corresponds to the universal cover (user-asserted)"]
    check = None
    if A is not None:
        P = col.poset
        A = P.sort(A)
        ok = bool(A) and len(A) < len(P)
        for comp in P.subposet(A).components():
            groups = reduced_homology(P.subposet(comp)).groups
            ok = ok and all(groups.get(i, AbelianGroup()).is_trivial for i in (0, 1))
        hyps.append("components of A have vanishing H~_0 and H~_1 (checked)" if ok
                    else "components of A fail the homology hypotheses (checked)")
        hyps.append("pi_1 maps from components of X - A are trivial (user-asserted)")
        if ok:
            base = homology(f_complex(P), representatives=False).groups.get(2, AbelianGroup())
            expect = AbelianGroup.from_orders(0, [o for _ in range(col.group.order)
                                                  for o in [0] * base.rank + list(base.torsion)])
            check = H.get(2, AbelianGroup()) == expect
    return Pi2Report(H.get(2, AbelianGroup()), H, tuple(hyps), check)


def pi2_symbolic(P: Poset) -> str:
    """Text form of H_2(X) (x) Z[pi_1(X)] for bases whose fundamental group is not finite."""
    H2 = homology(f_complex(P), representatives=False).groups.get(2, AbelianGroup())
    if H2.is_trivial:
        return "0"
    return f"({H2}) (x) Z[pi_1]"
