"""The Mobius function mu(P) = reduced Euler characteristic of P, by several routes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .complexes import is_acyclic
from .errors import NotConvex, NotOpen, PreconditionFailed
from .poset import Poset, join


@dataclass(frozen=True)
class MobiusReport:
    value: int
    method: str
    decomposition: dict = field(default_factory=dict)


def mu(P: Poset) -> int:
    """Incidence-algebra value; the default fast route."""
    return mobius_incidence(P).value


def mobius_chains(P: Poset) -> MobiusReport:
    """Chains of odd cardinality minus chains of even cardinality (the empty chain is even)."""
    odd = even = 0
    for c in P.all_chains:
        if len(c) % 2:
            odd += 1
        else:
            even += 1
    return MobiusReport(odd - even, "chains", {"odd": odd, "even": even})


def mobius_incidence(P: Poset) -> MobiusReport:
    """mu(0^, 1^) of P with a bottom and a top adjoined.

    m[x] = mu(0^, x) = -(1 + sum of m[z] for z < x); the answer is
    -(1 + sum of all m[x]).
    """
    m: dict[str, int] = {}
    for x in P.linear_extension:
        m[x] = -(1 + sum(m[z] for z in P.down_set(x, strict=True)))
    return MobiusReport(-(1 + sum(m.values())), "incidence", {"mu(0,x)": {x: m[x] for x in P.elements}})


def _punctured_down(P: Poset, x: str) -> Poset:
    return P.subposet(P.down_set(x, strict=True))


def _punctured_up(P: Poset, y: str) -> Poset:
    return P.subposet(P.up_set(y, strict=True))


def mobius_open(P: Poset, V: Iterable[str]) -> MobiusReport:
    """mu(X) = mu(V) - sum over x outside V of mu(U^_x), for V open."""
    V = P.sort(V)
    if not P.is_open(V):
        raise NotOpen("V must be down-closed", V)
    inside = set(V)
    terms = {x: mu(_punctured_down(P, x)) for x in P.elements if x not in inside}
    base = mu(P.subposet(V))
    return MobiusReport(base - sum(terms.values()), "open", {"mu(V)": base, "mu(U^_x)": terms})


def mobius_contractible_open(P: Poset, A: Iterable[str]) -> MobiusReport:
    """mu(X) = -sum over x outside A of mu(U^_x), for A open and acyclic."""
    A = P.sort(A)
    if not P.is_open(A):
        raise NotOpen("A must be down-closed", A)
    if not A or not is_acyclic(P.subposet(A)):
        raise PreconditionFailed("A must be nonempty with vanishing reduced homology", A)
    rep = mobius_open(P, A)
    return MobiusReport(rep.value, "contractible-open", rep.decomposition)


def mobius_minimal_points(P: Poset) -> MobiusReport:
    """mu(X) = #X_0 - 1 - sum over non-minimal x of mu(U^_x)."""
    X0 = P.minimal_elements()
    terms = {x: mu(_punctured_down(P, x)) for x in P.elements if x not in set(X0)}
    return MobiusReport(len(X0) - 1 - sum(terms.values()), "minimal-points",
                        {"minimal": X0, "mu(U^_x)": terms})


@dataclass(frozen=True)
class JoinReport:
    direct: int
    product: int

    @property
    def agrees(self) -> bool:
        return self.direct == self.product


def mobius_join(P: Poset, Q: Poset) -> JoinReport:
    """mu of the non-Hausdorff join, directly and as -mu(P) mu(Q)."""
    return JoinReport(mu(join(P, Q)), -mu(P) * mu(Q))


def auxiliary_identity(P: Poset, C: Iterable[str], a: str) -> tuple[int, int]:
    """Both sides of mu(F^_a - C) = sum over y in C, y >= a of mu(F^_y)."""
    C = set(C)
    left = mu(P.subposet([y for y in P.up_set(a, strict=True) if y not in C]))
    right = sum(mu(_punctured_up(P, y)) for y in P.up_set(a) if y in C)
    return left, right


def bjorner_walker(P: Poset, C: Iterable[str]) -> MobiusReport:
    """mu(P) = mu(P - C) + sum over x <= y in C of mu(U^_x) mu(F^_y), C convex.

    The decomposition also records both sides of the auxiliary identity for
    every a in C under ``"identity"``.
    """
    C = P.sort(C)
    if not P.is_convex(C):
        raise NotConvex("C must be convex", C)
    inside = set(C)
    rest = mu(P.subposet([x for x in P.elements if x not in inside]))
    down = {x: mu(_punctured_down(P, x)) for x in C}
    up = {y: mu(_punctured_up(P, y)) for y in C}
    terms = {(x, y): down[x] * up[y] for x in C for y in C if P.leq(x, y)}
    identity = {a: auxiliary_identity(P, C, a) for a in C}
    return MobiusReport(rest + sum(terms.values()), "bjorner-walker",
                        {"mu(P-C)": rest, "terms": terms, "identity": identity})


def all_methods(P: Poset, V: Iterable[str] | None = None, C: Iterable[str] | None = None) -> dict[str, int]:
    """Values from every route; V defaults to the minimal points and C to the empty set."""
    V = P.minimal_elements() if V is None else V
    C = () if C is None else C
    return {
        "chains": mobius_chains(P).value,
        "incidence": mobius_incidence(P).value,
        "open": mobius_open(P, V).value,
        "bjorner-walker": bjorner_walker(P, C).value,
    }
