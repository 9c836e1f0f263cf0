"""Seeded random posets and subsets for experiments and property tests."""

from __future__ import annotations

import random

from .poset import Poset, build


def random_poset(rng: random.Random, n: int, density: float = 0.35, max_height: int | None = None) -> Poset:
    """Random order on n points from a random DAG on a hidden linear order.

    With ``max_height`` the points are first put on at most ``max_height + 1``
    layers and edges only go upward between layers.
    """
    names = [f"v{k}" for k in range(n)]
    if max_height is None:
        pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    else:
        layer = [rng.randint(0, max_height) for _ in range(n)]
        pairs = [(names[i], names[j]) for i in range(n) for j in range(n)
                 if layer[i] < layer[j] and rng.random() < density]
    P = build(names, pairs)
    if max_height is not None and P.height() > max_height:
        raise AssertionError("layered construction exceeded the height bound")
    return P


def random_subset(rng: random.Random, P: Poset, p: float = 0.5) -> tuple[str, ...]:
    return tuple(x for x in P.elements if rng.random() < p)


def random_open(rng: random.Random, P: Poset, p: float = 0.4) -> tuple[str, ...]:
    return P.down_closure(random_subset(rng, P, p))


def random_convex(rng: random.Random, P: Poset, p: float = 0.3) -> tuple[str, ...]:
    """Intersection of a random down-set and a random up-set."""
    down = set(P.down_closure(random_subset(rng, P, p)))
    up = set(P.up_closure(random_subset(rng, P, p)))
    return P.sort(down & up)


def random_antichain_filtration(rng: random.Random, P: Poset, p0: float = 0.4) -> list[tuple[str, ...]]:
    """Random X_0 followed by random antichains until the whole poset is used."""
    X0 = list(random_subset(rng, P, p0))
    levels = [P.sort(X0)]
    rest = [x for x in P.elements if x not in set(X0)]
    current = list(X0)
    while rest:
        rng.shuffle(rest)
        chosen: list[str] = []
        for x in rest:
            if all(not P.comparable(x, y) for y in chosen) and (not chosen or rng.random() < 0.7):
                chosen.append(x)
        rest = [x for x in rest if x not in set(chosen)]
        current += chosen
        levels.append(P.sort(current))
    return levels
