import random

import pytest

from conftest import fixture_doc, nonzero
from finspaces.complexes import absolute_homology, f_complex
from finspaces.errors import NotACover, NotAdmissible, NotQuasicellular, PreconditionFailed
from finspaces.generators import random_poset
from finspaces.intlinalg import AbelianGroup
from finspaces.morse import (collapse_sequence, edge_admissible, greedy_matching, is_morse, morse_complex,
                             single_edge_collapse_check, verify_matching)
from finspaces.poset import barycentric_subdivision, build
from finspaces.reductions import find_quasicellular, quasicellular_complex

Z = AbelianGroup(1)


@pytest.fixture
def sphere_model():
    doc = fixture_doc("morse-remark")
    return doc.poset(), doc.matchings["M"]


def test_sphere_model_matching_verifies(sphere_model):
    P, M = sphere_model
    rep = verify_matching(P, M)
    assert rep.ok
    assert rep.critical_points == ("a", "b")


def test_sphere_model_rejects_unforced_complex(sphere_model):
    P, M = sphere_model
    with pytest.raises(NotQuasicellular) as info:
        morse_complex(P, M)
    assert info.value.witness == "h"


def test_sphere_model_forced_complex_differs_from_sphere(sphere_model):
    P, M = sphere_model
    mc = morse_complex(P, M, force=True)
    assert mc.forced
    assert nonzero(mc.homology()) == {0: AbelianGroup(2)}
    assert nonzero(absolute_homology(P).groups) == {0: Z, 2: Z}


def test_rp2_greedy_morse_complex(rp2):
    M = greedy_matching(rp2)
    assert verify_matching(rp2, M).ok
    mc = morse_complex(rp2, M)
    assert mc.generator_counts() == {0: 1, 1: 1, 2: 1}
    assert nonzero(mc.homology()) == {0: Z, 1: AbelianGroup(0, (2,))}
    assert mc.differentials[2].data in ([[2]], [[-2]])


def test_rp2_collapse_sequence(rp2):
    steps = collapse_sequence(rp2, greedy_matching(rp2))
    assert len(steps) == 5
    assert all(ok for _, ok in steps)


def test_non_cover_edge_rejected(rp2):
    with pytest.raises(NotACover):
        verify_matching(rp2, [("a", "j")])


def test_shared_vertex_is_not_a_matching(rp2):
    rep = verify_matching(rp2, [("a", "d"), ("a", "e")])
    assert not rep.is_matching and not rep.ok
    with pytest.raises(PreconditionFailed):
        morse_complex(rp2, [("a", "d"), ("a", "e")])


def test_cycle_detection():
    # a crown: two minimal and two maximal points all related
    P = build(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    ok, cyc = is_morse(P, [("a", "c"), ("b", "d")])
    assert not ok and cyc is not None
    assert is_morse(P, [("a", "c")])[0]


def test_inadmissible_edge():
    P = build(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    assert edge_admissible(P, "a", "c")
    Q = build(["a", "b", "c", "t"], [("a", "t"), ("b", "t"), ("c", "t")])
    assert not edge_admissible(Q, "a", "t")
    with pytest.raises(NotAdmissible):
        morse_complex(Q, [("a", "t")])


def test_single_edge_check():
    P = build(["a", "b", "c"], [("a", "c"), ("b", "c")])
    assert single_edge_collapse_check(P, "a", "c")
    with pytest.raises(PreconditionFailed):
        single_edge_collapse_check(P, "a", "b")


def test_random_subdivisions_three_way_agreement():
    rng = random.Random(21)
    for _ in range(10):
        base = random_poset(rng, rng.randint(2, 6), 0.5, max_height=2)
        P = barycentric_subdivision(base)
        oracle = nonzero(absolute_homology(P).groups)
        qc = quasicellular_complex(P, find_quasicellular(P))
        M = greedy_matching(P)
        mc = morse_complex(P, M)
        assert nonzero(qc.homology()) == oracle
        assert nonzero(mc.homology()) == oracle
        chains = sum(f_complex(P).rank(n) for n in f_complex(P).degrees)
        assert mc.size <= qc.size <= chains
        assert all(ok for _, ok in collapse_sequence(P, M))
