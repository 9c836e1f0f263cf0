"""Quasicellular morphisms and the reduced complexes they induce.

A quasicellular morphism rho is a strictly increasing level map such that the
reduced homology of every punctured down-set U^_x is concentrated in degree
rho(x) - 1.  The reduced complex has one summand H~_{n-1}(U^_x) for every x
with rho(x) = n, and its differential is the first-page differential of the
filtration by levels of rho.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complexes import ChainComplex, concentration_degrees, reduced_homology
from .errors import NotOpen, NotQuasicellular
from .intlinalg import AbelianGroup, IntMatrix
from .poset import Poset, degree_map
from .spectral import Filtration, StarPage, star_page, presented_homology


@dataclass(frozen=True)
class QuasicellularMorphism:
    poset: Poset
    rho: dict
    relative_part: tuple[str, ...] | None = None

    @property
    def top(self) -> int:
        return max(self.rho.values(), default=-1)

    def level(self, n: int) -> tuple[str, ...]:
        return tuple(x for x in self.poset.elements if self.rho.get(x) == n)

    def filtration(self) -> Filtration:
        """X_p = {rho <= p - 1}, preceded by A in relative mode."""
        base = list(self.relative_part or ())
        levels = [tuple(base)]
        for p in range(1, self.top + 2):
            levels.append(self.poset.sort(base + [x for x, r in self.rho.items() if r <= p - 1]))
        if len(levels) == 1:
            levels.append(levels[0])
        return Filtration(self.poset, tuple(levels), self.relative_part is not None)


@dataclass(frozen=True)
class Infeasible:
    """No quasicellular morphism exists; ``witness`` is the first element that breaks."""

    witness: str
    reason: str
    degrees: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return False


def _check_open(P: Poset, A: Iterable[str] | None) -> tuple[str, ...] | None:
    if A is None:
        return None
    A = P.sort(A)
    if not P.is_open(A):
        bad = [y for x in A for y in P.down_set(x) if y not in set(A)]
        raise NotOpen("the subspace must be down-closed", bad[0] if bad else A)
    return A


def forced_levels(P: Poset, domain: Sequence[str]) -> tuple[dict, dict]:
    """Concentration degree + 1 for each element with a unique nonzero degree.

    Returns (forced, bad) where ``bad`` maps elements whose U^_x has homology
    in several degrees to those degrees.
    """
    forced, bad = {}, {}
    for x in domain:
        degs = concentration_degrees(P.subposet(P.down_set(x, strict=True)))
        if len(degs) == 1:
            forced[x] = degs[0] + 1
        elif len(degs) > 1:
            bad[x] = tuple(degs)
    return forced, bad


def _greedy(P: Poset, domain: set, forced: dict) -> tuple[dict, list]:
    """Smallest strictly increasing extension of the forced values.

    Acyclic elements take one more than the largest value below them.  This is
    optimal: lowering a free value never hurts anything above it, so a forced
    value that is not above every value below it admits no fix.
    """
    rho: dict = {}
    violations = []
    for x in P.linear_extension:
        if x not in domain:
            continue
        floor = max((rho[y] + 1 for y in P.down_set(x, strict=True) if y in rho), default=0)
        if x in forced:
            rho[x] = forced[x]
            if forced[x] < floor:
                violations.append(x)
        else:
            rho[x] = floor
    return rho, violations


def find_quasicellular(P: Poset, A: Iterable[str] | None = None) -> QuasicellularMorphism | Infeasible:
    """Decide quasicellularity of P (or of the pair (P, A)) and return a witness either way."""
    A = _check_open(P, A)
    skip = set(A or ())
    domain = [x for x in P.elements if x not in skip]
    forced, bad = forced_levels(P, domain)
    rho, violations = _greedy(P, set(domain), forced)
    culprits = set(bad) | set(violations)
    for x in domain:
        if x in culprits:
            if x in bad:
                return Infeasible(x, "reduced homology of the punctured down-set is not concentrated", bad[x])
            return Infeasible(x, f"forced level {forced[x]} is not above the levels below it",
                              (forced[x] - 1,))
    return QuasicellularMorphism(P, {x: rho[x] for x in domain}, A)


def is_quasicellular_morphism(P: Poset, rho: dict, A: Iterable[str] | None = None) -> bool:
    """Check a user supplied level map against the definition."""
    A = _check_open(P, A)
    domain = [x for x in P.elements if x not in set(A or ())]
    if set(rho) != set(domain):
        return False
    for x in domain:
        for y in P.down_set(x, strict=True):
            if y in rho and rho[y] >= rho[x]:
                return False
        if concentration_degrees(P.subposet(P.down_set(x, strict=True))) not in ([rho[x] - 1], []):
            return False
    return True


# ---------------------------------------------------------------------------
# reduced complexes


@dataclass
class ReducedComplex:
    """Complex of presented groups: generators carry an owner point and an order (0 = free).

    ``differentials[n]`` maps the generators of degree n to those of degree n - 1.
    """

    generators: dict[int, list[tuple[str, int]]]
    differentials: dict[int, IntMatrix] = field(default_factory=dict)
    page: StarPage | None = field(default=None, repr=False)

    def orders(self, n: int) -> list[int]:
        return [o for _, o in self.generators.get(n, [])]

    def group(self, n: int) -> AbelianGroup:
        return AbelianGroup.from_orders(0, self.orders(n))

    def generator_counts(self) -> dict[int, int]:
        return {n: len(g) for n, g in sorted(self.generators.items()) if g}

    @property
    def size(self) -> int:
        return sum(len(g) for g in self.generators.values())

    def homology(self) -> dict[int, AbelianGroup]:
        out = {}
        for n in sorted(self.generators):
            out[n] = presented_homology(self.orders(n), self.differentials.get(n), self.orders(n - 1),
                                        self.differentials.get(n + 1))
        return out

    def is_free(self) -> bool:
        return all(o == 0 for g in self.generators.values() for _, o in g)

    def chain_complex(self) -> ChainComplex:
        """The same complex as a ChainComplex (only when every generator is free)."""
        if not self.is_free():
            raise ValueError("the reduced complex has torsion generators")
        basis = {n: [f"{x}#{k}" for k, (x, _) in enumerate(g)] for n, g in self.generators.items()}
        return ChainComplex.from_matrices(basis, {n: m for n, m in self.differentials.items()
                                                  if n in basis and n - 1 in basis})


def quasicellular_complex(P: Poset, qm: QuasicellularMorphism) -> ReducedComplex:
    """Reduced complex of a quasicellular morphism, read off the q = -1 row of the first page."""
    F = qm.filtration()
    page = star_page(F)
    for (p, q), g in page.nonzero().items():
        if q != -1:
            raise NotQuasicellular(f"first page has a nonzero entry off the row q = -1 at {(p, q)}", (p, q))
    gens: dict[int, list] = {}
    diffs: dict[int, IntMatrix] = {}
    for n in range(0, qm.top + 1):
        key = (n + 1, -1)
        gens[n] = [(x, o) for (x, _), o in zip(page.generators.get(key, []), page.orders.get(key, []))]
        if key in page.differentials:
            diffs[n] = page.differentials[key]
    return ReducedComplex(gens, diffs, page)


# ---------------------------------------------------------------------------
# cellular recognition


@dataclass(frozen=True)
class CellularReport:
    cellular: bool
    degrees: dict | None
    witness: str | None = None


def is_cellular(P: Poset) -> CellularReport:
    """Graded, and every U^_x has the homology of a sphere of dimension deg(x) - 1."""
    deg = degree_map(P)
    if deg is None:
        return CellularReport(False, None, None)
    sphere = AbelianGroup(1)
    for x in P.elements:
        groups = reduced_homology(P.subposet(P.down_set(x, strict=True))).groups
        for n, g in groups.items():
            expect = sphere if n == deg[x] - 1 else AbelianGroup()
            if g != expect:
                return CellularReport(False, deg, x)
    return CellularReport(True, deg)
