import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from finspaces.document import load
from finspaces.poset import Poset, build

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def fixture_doc(name: str):
    return load(FIXTURES / f"{name}.json")


def fixture_poset(name: str) -> Poset:
    return fixture_doc(name).poset()


def expected(name: str) -> dict:
    return json.loads((FIXTURES / "expected" / f"{name}.json").read_text())


def nonzero(groups: dict) -> dict:
    return {n: g for n, g in groups.items() if not g.is_trivial}


@st.composite
def posets(draw, max_size: int = 7, min_size: int = 0):
    """Orders generated from random DAGs on a hidden linear order."""
    n = draw(st.integers(min_size, max_size))
    names = [f"v{k}" for k in range(n)]
    pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    perm = draw(st.permutations(names))
    return build(perm, pairs)


@pytest.fixture
def rp2():
    return fixture_poset("rp2")


@pytest.fixture
def rp2_doc():
    return fixture_doc("rp2")


def loop_cycle(P: Poset, names) -> dict:
    """1-cycle of a closed path x0, x1, ..., x0 written on oriented 1-chains."""
    out: dict = {}
    names = list(names)
    for u, v in zip(names, names[1:] + names[:1]):
        s = P.order_chain((u, v))
        out[s] = out.get(s, 0) + (1 if s == (u, v) else -1)
    return out


@pytest.fixture
def rp2_filtration(rp2_doc):
    from finspaces.spectral import validate_filtration
    return validate_filtration(rp2_doc.poset(), rp2_doc.filtrations["standard"])
