"""f-chain complexes of posets (absolute, reduced, relative) and their homology.

The f-chain complex of P has the n-chains of P as basis in degree n and
differential ``d[v_0..v_n] = sum_i (-1)^i [v_0..^v_i..v_n]``; it is the
simplicial chain complex of the order complex written on chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ElementNotInChain, NotAComplex, NotARelativeCycle
from .intlinalg import AbelianGroup, IntMatrix, Subquotient, invariant_factors, kernel_basis
from .poset import Chain, Poset

Cycle = dict  # basis label -> integer coefficient (zero coefficients omitted)


class ChainComplex:
    """Free graded abelian group with labelled bases and integer differentials.

    ``basis[n]`` lists the labels of degree n.  The differential out of
    degree n is kept sparse (``{col: {row: value}}``); ``differential(n)``
    returns it densely as an :class:`IntMatrix` of shape
    ``(len(basis[n-1]), len(basis[n]))``.
    """

    def __init__(self, basis: Mapping[int, Sequence[Hashable]], sparse: Mapping[int, dict] | None = None,
                 check: bool = True):
        self.basis: dict[int, list] = {n: list(b) for n, b in basis.items() if len(b)}
        self._sparse: dict[int, dict] = {}
        for n, cols in (sparse or {}).items():
            cols = {j: {i: v for i, v in c.items() if v} for j, c in cols.items()}
            cols = {j: c for j, c in cols.items() if c}
            if cols:
                self._sparse[n] = cols
        self._index = {n: {lab: k for k, lab in enumerate(b)} for n, b in self.basis.items()}
        self._dense: dict[int, IntMatrix] = {}
        for n, cols in self._sparse.items():
            nc, nr = len(self.basis.get(n, ())), len(self.basis.get(n - 1, ()))
            for j, c in cols.items():
                if not 0 <= j < nc or any(not 0 <= i < nr for i in c):
                    raise ValueError(f"differential {n} does not match the basis sizes")
        if check:
            bad = self.composition_defect()
            if bad is not None:
                raise NotAComplex(f"d{bad - 1} . d{bad} != 0", bad)

    @classmethod
    def from_matrices(cls, basis: Mapping[int, Sequence[Hashable]], diff: Mapping[int, IntMatrix]) -> "ChainComplex":
        sparse = {}
        for n, M in diff.items():
            if M.shape != (len(basis.get(n - 1, ())), len(basis.get(n, ()))):
                raise ValueError(f"differential {n} has shape {M.shape}")
            cols: dict = {}
            for i, r in enumerate(M.data):
                for j, v in enumerate(r):
                    if v:
                        cols.setdefault(j, {})[i] = v
            sparse[n] = cols
        return cls(basis, sparse)

    @property
    def degrees(self) -> range:
        if not self.basis:
            return range(0)
        return range(min(self.basis), max(self.basis) + 1)

    def rank(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def index(self, n: int, label) -> int:
        return self._index[n][label]

    def sparse_differential(self, n: int) -> dict:
        return self._sparse.get(n, {})

    def differential(self, n: int) -> IntMatrix:
        if n not in self._dense:
            M = IntMatrix.zeros(self.rank(n - 1), self.rank(n))
            for j, c in self._sparse.get(n, {}).items():
                for i, v in c.items():
                    M.data[i][j] = v
            self._dense[n] = M
        return self._dense[n]

    def composition_defect(self) -> int | None:
        """Smallest n with d_{n-1} d_n != 0, or None."""
        for n in sorted(self._sparse):
            lower = self._sparse.get(n - 1)
            if not lower:
                continue
            for c in self._sparse[n].values():
                acc: dict[int, int] = {}
                for i, v in c.items():
                    for k, w in lower.get(i, {}).items():
                        acc[k] = acc.get(k, 0) + v * w
                if any(acc.values()):
                    return n
        return None

    def boundary(self, n: int, chain: Mapping) -> Cycle:
        """Apply d_n to a labelled combination."""
        out: dict = {}
        cols = self._sparse.get(n, {})
        lower = self.basis.get(n - 1, [])
        for lab, a in chain.items():
            if not a:
                continue
            for i, v in cols.get(self._index[n][lab], {}).items():
                out[lower[i]] = out.get(lower[i], 0) + a * v
        return {k: v for k, v in out.items() if v}

    def vector(self, n: int, chain: Mapping) -> list[int]:
        v = [0] * self.rank(n)
        idx = self._index.get(n, {})
        for lab, a in chain.items():
            if a:
                v[idx[lab]] += a
        return v

    def combination(self, n: int, vec: Sequence[int]) -> Cycle:
        return {lab: a for lab, a in zip(self.basis.get(n, []), vec) if a}

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(b) for n, b in self.basis.items())

    def __repr__(self) -> str:
        sizes = ", ".join(f"{n}:{self.rank(n)}" for n in self.degrees)
        return f"ChainComplex({sizes})"


# ---------------------------------------------------------------------------
# f-complexes


def _face_sparse(chains_n: Sequence[Chain], lower_index: Mapping[Chain, int]) -> dict:
    cols = {}
    for j, s in enumerate(chains_n):
        c = {}
        for k in range(len(s)):
            face = s[:k] + s[k + 1:]
            i = lower_index.get(face)
            if i is not None:
                c[i] = c.get(i, 0) + (-1) ** k
        if c:
            cols[j] = c
    return cols


def f_complex(P: Poset, mode: str = "absolute") -> ChainComplex:
    """Chain complex on the chains of P; ``mode='reduced'`` adds the empty chain in degree -1."""
    if mode not in ("absolute", "reduced"):
        raise ValueError(f"unknown mode {mode!r}")
    by_dim: dict[int, list[Chain]] = {}
    for c in P.all_chains:
        if c or mode == "reduced":
            by_dim.setdefault(len(c) - 1, []).append(c)
    return _complex_from_chains(by_dim)


def relative_f_complex(P: Poset, A: Iterable[str]) -> ChainComplex:
    """C(P)/C(A): chains not contained in A, faces inside A dropped."""
    A = set(P.sort(A))
    by_dim: dict[int, list[Chain]] = {}
    for c in P.all_chains[1:]:
        if not A.issuperset(c):
            by_dim.setdefault(len(c) - 1, []).append(c)
    return _complex_from_chains(by_dim)


def _complex_from_chains(by_dim: dict[int, list[Chain]]) -> ChainComplex:
    index = {n: {c: k for k, c in enumerate(cs)} for n, cs in by_dim.items()}
    sparse = {n: _face_sparse(cs, index.get(n - 1, {})) for n, cs in by_dim.items()}
    # d.d = 0 holds by construction; the check is cheap enough to keep on
    return ChainComplex(by_dim, sparse)


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyResult:
    """Homology groups with representative cycles.

    ``representatives[n]`` lists one cycle per generator of ``groups[n]``:
    free generators first, then torsion generators.  ``subquotients[n]``
    allows expressing any cycle in these generators.
    """

    complex: ChainComplex
    groups: dict[int, AbelianGroup]
    representatives: dict[int, list[Cycle]] = field(default_factory=dict)
    subquotients: dict[int, Subquotient] = field(default_factory=dict, repr=False)

    def group(self, n: int) -> AbelianGroup:
        return self.groups.get(n, AbelianGroup())

    def betti(self, n: int) -> int:
        return self.group(n).rank

    def orders(self, n: int) -> list[int]:
        sq = self.subquotients.get(n)
        return list(sq.orders) if sq else []

    def coordinates(self, n: int, cycle: Mapping) -> list[int] | None:
        """Coordinates of the class of ``cycle`` in the representative basis;
        None if ``cycle`` is not a cycle of the complex."""
        sq = self.subquotients.get(n)
        if sq is None:
            return None if any(cycle.values()) else []
        labels = self.complex._index.get(n, {})
        if any(lab not in labels for lab, a in cycle.items() if a):
            return None
        return sq.coordinates(self.complex.vector(n, cycle))

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * g.rank for n, g in self.groups.items())

    def nonzero(self) -> dict[int, AbelianGroup]:
        return {n: g for n, g in sorted(self.groups.items()) if not g.is_trivial}

    def summary(self) -> str:
        return format_groups(self.groups)


def format_groups(groups: Mapping[int, AbelianGroup], letter: str = "H") -> str:
    """``"H0=Z, H1=0, H2=Z"``: degrees from the lowest to the highest nonzero group."""
    live = [n for n, g in groups.items() if not g.is_trivial]
    if not live:
        return "all trivial"
    return ", ".join(f"{letter}{n}={groups.get(n, AbelianGroup())}" for n in range(min(live), max(live) + 1))


def homology(C: ChainComplex, representatives: bool = True) -> HomologyResult:
    """H_n = ker d_n / im d_{n+1} for every degree of C.

    With ``representatives=False`` only the groups are computed, using sparse
    unit-pivot elimination; this is the route for large complexes.
    """
    bad = C.composition_defect()
    if bad is not None:
        raise NotAComplex(f"d{bad - 1} . d{bad} != 0", bad)
    groups: dict[int, AbelianGroup] = {}
    if not representatives:
        factors = {n: invariant_factors(C.sparse_differential(n)) for n in C.degrees}
        for n in C.degrees:
            out_rank = len(factors[n])
            inc = factors.get(n + 1, [])
            groups[n] = AbelianGroup(C.rank(n) - out_rank - len(inc), tuple(f for f in inc if f > 1))
        return HomologyResult(C, groups)
    reps: dict[int, list[Cycle]] = {}
    sqs: dict[int, Subquotient] = {}
    for n in C.degrees:
        K = kernel_basis(C.differential(n))
        B = C.differential(n + 1) if C.rank(n + 1) else IntMatrix.zeros(C.rank(n), 0)
        sq = Subquotient(K, B)
        groups[n] = sq.group
        reps[n] = [C.combination(n, g) for g in sq.generators]
        sqs[n] = sq
    return HomologyResult(C, groups, reps, sqs)


@lru_cache(maxsize=4096)
def reduced_homology(P: Poset) -> HomologyResult:
    """Reduced homology of P with representatives (cached per poset)."""
    return homology(f_complex(P, "reduced"))


@lru_cache(maxsize=1024)
def absolute_homology(P: Poset) -> HomologyResult:
    return homology(f_complex(P, "absolute"))


def homology_groups(P: Poset, mode: str = "absolute", relative_to: Iterable[str] | None = None) -> dict[int, AbelianGroup]:
    """Groups only (sparse route), keyed by degree, zero groups included."""
    C = relative_f_complex(P, relative_to) if relative_to is not None else f_complex(P, mode)
    return homology(C, representatives=False).groups


def is_acyclic(P: Poset) -> bool:
    return all(g.is_trivial for g in reduced_homology(P).groups.values())


def concentration_degrees(P: Poset) -> list[int]:
    """Degrees n with nonzero reduced homology of P."""
    return [n for n, g in sorted(reduced_homology(P).groups.items()) if not g.is_trivial]


# ---------------------------------------------------------------------------
# signs and connecting maps


def chain_sign(s: Chain, x: str) -> int:
    """(-1) ** (position of x in the increasing chain s)."""
    try:
        k = s.index(x)
    except ValueError:
        raise ElementNotInChain(f"{x!r} is not in chain {s}", (s, x)) from None
    return -1 if k % 2 else 1


def strip_point(cycle: Mapping[Chain, int], y: str) -> Cycle:
    """sum over chains s containing y of a_s * sgn_s(y) * (s - {y})."""
    out: dict = {}
    for s, a in cycle.items():
        if a and y in s:
            t = tuple(v for v in s if v != y)
            out[t] = out.get(t, 0) + a * chain_sign(s, y)
    return {k: v for k, v in out.items() if v}


def cone(cycle: Mapping[Chain, int], x: str, P: Poset) -> Cycle:
    """Join x to every chain of the cycle (x comparable to all of them)."""
    out: dict = {}
    for s, a in cycle.items():
        if a:
            c = P.order_chain(s + (x,))
            out[c] = out.get(c, 0) + a
    return out


def connecting_boundary(P: Poset, x: str, sigma: Mapping[Chain, int]) -> Cycle:
    """Connecting map H_n(C_x, C^_x) -> H~_{n-1}(C^_x) on a relative cycle.

    Returns ``sum a_i sgn_{s_i}(x) (s_i - {x})`` over the chains containing x.
    """
    star = set(P.star(x))
    for s, a in sigma.items():
        if a and not star.issuperset(s):
            raise NotARelativeCycle(f"chain {s} is not inside the star of {x!r}", s)
        if a and not P.is_chain(s):
            raise NotARelativeCycle(f"{s} is not a chain", s)
    # relative boundary: faces that still contain x must cancel
    rel: dict = {}
    for s, a in sigma.items():
        if a and x in s:
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                if x in face:
                    rel[face] = rel.get(face, 0) + a * (-1) ** k
    if any(rel.values()):
        raise NotARelativeCycle(f"not a relative cycle of (C_{x}, C^_{x})", {k: v for k, v in rel.items() if v})
    return strip_point(sigma, x)
