"""Finite posets (equivalently finite T0-spaces) and the order-theoretic
constructions used throughout the package.

Elements are strings.  The declaration order of the elements is the global
tie-break order: every set-valued result is returned as a tuple sorted by it.
Internally the strict order is stored as bitmasks, ``_below[i]`` holding the
indices of the elements strictly smaller than element ``i``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CycleDetected, DuplicateName, UnknownElement

Chain = tuple  # members in increasing poset order; () is the empty chain


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable finite strict partial order on named elements."""

    def __init__(self, elements: Sequence[str], below: Sequence[int]):
        # trusted constructor: `below` must already be a transitive, irreflexive relation
        self.elements: tuple[str, ...] = tuple(elements)
        self.index: dict[str, int] = {x: i for i, x in enumerate(self.elements)}
        self._below = list(below)
        above = [0] * len(self.elements)
        for i, m in enumerate(self._below):
            for j in _bits(m):
                above[j] |= 1 << i
        self._above = above

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, elements: Iterable[str], relations: Iterable[tuple[str, str]] = ()) -> "Poset":
        """Poset generated by ``a < b`` for every pair in ``relations``."""
        elements = list(elements)
        seen = set()
        for x in elements:
            if x in seen:
                raise DuplicateName(f"duplicate element name {x!r}", x)
            seen.add(x)
        idx = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        succ: list[set[int]] = [set() for _ in range(n)]
        for a, b in relations:
            for v in (a, b):
                if v not in idx:
                    raise UnknownElement(f"relation mentions undeclared element {v!r}", v)
            if a == b:
                raise CycleDetected(f"relation {a!r} < {a!r}", (a, a))
            succ[idx[a]].add(idx[b])
        indeg = [0] * n
        for s in succ:
            for j in s:
                indeg[j] += 1
        heap = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            i = heapq.heappop(heap)
            order.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        if len(order) < n:
            stuck = [elements[i] for i in range(n) if indeg[i] > 0]
            raise CycleDetected("relation closure contains a cycle", tuple(stuck))
        below = [0] * n
        for i in order:
            for j in succ[i]:
                below[j] |= below[i] | (1 << i)
        return cls(elements, below)

    def subposet(self, subset: Iterable[str]) -> "Poset":
        """Induced subposet, elements kept in the ambient order."""
        ids = sorted(self._ids(subset))
        pos = {i: k for k, i in enumerate(ids)}
        below = []
        for i in ids:
            m = 0
            for j in _bits(self._below[i]):
                if j in pos:
                    m |= 1 << pos[j]
            below.append(m)
        return Poset([self.elements[i] for i in ids], below)

    def renamed(self, mapping: dict[str, str]) -> "Poset":
        return Poset([mapping.get(x, x) for x in self.elements], self._below)

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.elements == other.elements and self._below == other._below

    def __hash__(self) -> int:
        return hash((self.elements, tuple(self._below)))

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    def _id(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r}", x) from None

    def _ids(self, xs: Iterable[str]) -> set[int]:
        return {self._id(x) for x in xs}

    def _names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in _bits(mask))

    def _mask(self, xs: Iterable[str]) -> int:
        m = 0
        for i in self._ids(xs):
            m |= 1 << i
        return m

    def lt(self, a: str, b: str) -> bool:
        return bool(self._below[self._id(b)] >> self._id(a) & 1)

    def leq(self, a: str, b: str) -> bool:
        return a == b or self.lt(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.lt(b, a)

    @cached_property
    def relations(self) -> tuple[tuple[str, str], ...]:
        """All strict pairs a < b."""
        return tuple((self.elements[j], self.elements[i])
                     for i in range(len(self)) for j in _bits(self._below[i]))

    @cached_property
    def covers(self) -> frozenset[tuple[str, str]]:
        """Hasse diagram edges (a, b): a < b with nothing strictly between."""
        return frozenset((self.elements[j], self.elements[i])
                         for i in range(len(self)) for j in _bits(self._lower_cover_mask(i)))

    def _lower_cover_mask(self, i: int) -> int:
        m = self._below[i]
        out = m
        for j in _bits(m):
            out &= ~self._below[j]
        return out

    def _upper_cover_mask(self, i: int) -> int:
        m = self._above[i]
        out = m
        for j in _bits(m):
            out &= ~self._above[j]
        return out

    def lower_covers(self, x: str) -> tuple[str, ...]:
        return self._names(self._lower_cover_mask(self._id(x)))

    def upper_covers(self, x: str) -> tuple[str, ...]:
        return self._names(self._upper_cover_mask(self._id(x)))

    @cached_property
    def sorted_covers(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(self.covers, key=lambda e: (self.index[e[0]], self.index[e[1]])))

    @cached_property
    def linear_extension(self) -> tuple[str, ...]:
        """Topological order with declaration order as tie-break."""
        n = len(self)
        indeg = [bin(self._lower_cover_mask(i)).count("1") for i in range(n)]
        heap = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            i = heapq.heappop(heap)
            out.append(i)
            for j in _bits(self._upper_cover_mask(i)):
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        return tuple(self.elements[i] for i in out)

    @cached_property
    def _rank_in_extension(self) -> dict[str, int]:
        return {x: k for k, x in enumerate(self.linear_extension)}

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(x for i, x in enumerate(self.elements) if not self._below[i])

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(x for i, x in enumerate(self.elements) if not self._above[i])

    # -- U_x, F_x, C_x ----------------------------------------------------

    def down_set(self, x: str, strict: bool = False) -> tuple[str, ...]:
        """U_x (or the strict version with ``strict=True``)."""
        i = self._id(x)
        return self._names(self._below[i] | (0 if strict else 1 << i))

    def up_set(self, x: str, strict: bool = False) -> tuple[str, ...]:
        """F_x (or the strict version with ``strict=True``)."""
        i = self._id(x)
        return self._names(self._above[i] | (0 if strict else 1 << i))

    def star(self, x: str) -> tuple[str, ...]:
        i = self._id(x)
        return self._names(self._below[i] | self._above[i] | 1 << i)

    def punctured_star(self, x: str) -> tuple[str, ...]:
        i = self._id(x)
        return self._names(self._below[i] | self._above[i])

    def down_closure(self, xs: Iterable[str]) -> tuple[str, ...]:
        m = 0
        for i in self._ids(xs):
            m |= self._below[i] | 1 << i
        return self._names(m)

    def up_closure(self, xs: Iterable[str]) -> tuple[str, ...]:
        m = 0
        for i in self._ids(xs):
            m |= self._above[i] | 1 << i
        return self._names(m)

    # -- subsets ----------------------------------------------------------

    def sort(self, xs: Iterable[str]) -> tuple[str, ...]:
        return self._names(self._mask(xs))

    def is_open(self, xs: Iterable[str]) -> bool:
        m = self._mask(xs)
        return all(self._below[i] & ~m == 0 for i in _bits(m))

    def is_closed(self, xs: Iterable[str]) -> bool:
        m = self._mask(xs)
        return all(self._above[i] & ~m == 0 for i in _bits(m))

    def is_antichain(self, xs: Iterable[str]) -> bool:
        m = self._mask(xs)
        return all(self._below[i] & m == 0 for i in _bits(m))

    def is_chain(self, xs: Iterable[str]) -> bool:
        m = self._mask(xs)
        return all((self._below[i] | self._above[i] | 1 << i) & m == m for i in _bits(m))

    def is_convex(self, xs: Iterable[str]) -> bool:
        m = self._mask(xs)
        for i in _bits(m):
            for k in _bits(self._above[i] & m):
                if self._above[i] & self._below[k] & ~m:
                    return False
        return True

    def components(self) -> list[tuple[str, ...]]:
        """Connected components of the comparability graph."""
        n = len(self)
        seen = 0
        out = []
        for i in range(n):
            if seen >> i & 1:
                continue
            comp = 1 << i
            frontier = comp
            while frontier:
                nxt = 0
                for j in _bits(frontier):
                    nxt |= self._below[j] | self._above[j]
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            out.append(self._names(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    # -- chains -----------------------------------------------------------

    @cached_property
    def all_chains(self) -> tuple[Chain, ...]:
        """Every chain including the empty one, sorted by (dimension, element order)."""
        out: list[Chain] = [()]
        stack = [((i,), self._above[i]) for i in range(len(self))]
        while stack:
            ids, up = stack.pop()
            out.append(tuple(self.elements[i] for i in ids))
            for j in _bits(up):
                stack.append((ids + (j,), up & self._above[j]))
        idx = self.index
        out.sort(key=lambda c: (len(c), [idx[v] for v in c]))
        return tuple(out)

    def chains(self, n: int, relative_to: Iterable[str] | None = None) -> list[Chain]:
        """n-chains (n + 1 elements); with ``relative_to=A`` only those not inside A."""
        if n < -1:
            return []
        out = [c for c in self.all_chains if len(c) == n + 1]
        if relative_to is not None:
            A = self._mask(relative_to)
            out = [c for c in out if self._mask(c) & ~A]
        return out

    def chain_counts(self) -> list[int]:
        counts: list[int] = []
        for c in self.all_chains[1:]:
            d = len(c) - 1
            while len(counts) <= d:
                counts.append(0)
            counts[d] += 1
        return counts

    def order_chain(self, xs: Iterable[str]) -> Chain:
        """Sort a set of pairwise comparable elements increasingly."""
        xs = list(xs)
        if not self.is_chain(xs):
            raise ValueError(f"{xs} is not a chain")
        ext = self._rank_in_extension
        return tuple(sorted(xs, key=ext.__getitem__))

    def height(self) -> int:
        """Maximum chain cardinality minus one (-1 for the empty poset)."""
        longest = [0] * len(self)
        for x in self.linear_extension:
            i = self.index[x]
            longest[i] = 1 + max((longest[j] for j in _bits(self._lower_cover_mask(i))), default=-1)
        return max(longest, default=-1)

    def opposite(self) -> "Poset":
        return Poset(self.elements, self._above)


# ---------------------------------------------------------------------------
# module-level operations


def build(elements: Iterable[str], relations: Iterable[tuple[str, str]] = ()) -> Poset:
    return Poset.build(elements, relations)


def chains(P: Poset, n: int, relative_to: Iterable[str] | None = None) -> list[Chain]:
    return P.chains(n, relative_to)


def beat_points(P: Poset) -> list[tuple[str, str]]:
    """``(x, 'up')`` when the strict up-set of x has a minimum, ``(x, 'down')``
    when the strict down-set has a maximum; element order."""
    out = []
    for i, x in enumerate(P.elements):
        if bin(P._upper_cover_mask(i)).count("1") == 1:
            out.append((x, "up"))
        if bin(P._lower_cover_mask(i)).count("1") == 1:
            out.append((x, "down"))
    return out


def core(P: Poset) -> Poset:
    """Delete the first beat point (element order) until none is left."""
    while True:
        bp = beat_points(P)
        if not bp:
            return P
        x = bp[0][0]
        P = P.subposet([y for y in P.elements if y != x])


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def suspension(P: Poset, plus: str = "+", minus: str = "-") -> Poset:
    """Non-Hausdorff suspension: two new maximal points above everything."""
    taken = set(P.elements)
    plus = _fresh(plus, taken)
    taken.add(plus)
    minus = _fresh(minus, taken)
    n = len(P)
    everything = (1 << n) - 1
    return Poset(P.elements + (plus, minus), P._below + [everything, everything])


def iterated_suspension(P: Poset, times: int) -> Poset:
    for _ in range(times):
        P = suspension(P)
    return P


def join(P: Poset, Q: Poset) -> Poset:
    """Non-Hausdorff join: P below Q; clashing names of Q get primes."""
    taken = set(P.elements)
    names = []
    for y in Q.elements:
        y2 = _fresh(y, taken)
        taken.add(y2)
        names.append(y2)
    n = len(P)
    everything = (1 << n) - 1
    below = list(P._below) + [everything | (m << n) for m in Q._below]
    return Poset(P.elements + tuple(names), below)


def opposite(P: Poset) -> Poset:
    return P.opposite()


def discrete(n: int, prefix: str = "p") -> Poset:
    """Antichain on n points (D_n)."""
    return Poset([f"{prefix}{i}" for i in range(n)], [0] * n)


def total_order(n: int, prefix: str = "t") -> Poset:
    return Poset([f"{prefix}{i}" for i in range(n)], [(1 << i) - 1 for i in range(n)])


def chain_name(c: Chain) -> str:
    return "[" + ",".join(c) + "]"


def barycentric_subdivision(P: Poset) -> Poset:
    """Poset of nonempty chains of P ordered by inclusion."""
    cs = P.all_chains[1:]
    masks = [P._mask(c) for c in cs]
    below = []
    for m in masks:
        b = 0
        for k, m2 in enumerate(masks):
            if m2 != m and m2 & m == m2:
                b |= 1 << k
        below.append(b)
    return Poset([chain_name(c) for c in cs], below)


@dataclass(frozen=True)
class SubsetWitness:
    subset: tuple[str, ...]
    is_open: bool
    is_closed: bool
    is_antichain: bool
    is_convex: bool
    is_chain: bool

    @property
    def kinds(self) -> tuple[str, ...]:
        flags = [("open", self.is_open), ("closed", self.is_closed), ("antichain", self.is_antichain),
                 ("convex", self.is_convex), ("chain", self.is_chain)]
        return tuple(k for k, v in flags if v) or ("none",)

    @property
    def kind(self) -> str:
        return self.kinds[0]


def classify_subset(P: Poset, S: Iterable[str]) -> SubsetWitness:
    S = P.sort(S)
    return SubsetWitness(S, P.is_open(S), P.is_closed(S), P.is_antichain(S), P.is_convex(S), P.is_chain(S))


def degree_map(P: Poset) -> dict[str, int] | None:
    """deg(x) = dim U_x when P is graded, else None."""
    deg: dict[str, int] = {}
    for x in P.linear_extension:
        lows = {deg[y] for y in P.lower_covers(x)}
        if len(lows) > 1:
            return None
        deg[x] = lows.pop() + 1 if lows else 0
    return {x: deg[x] for x in P.elements}


def is_graded(P: Poset) -> bool:
    return degree_map(P) is not None


def height(P: Poset) -> int:
    return P.height()
