import random

import pytest
from hypothesis import given, settings

from conftest import fixture_doc, loop_cycle, nonzero, posets
from finspaces.complexes import absolute_homology, f_complex, homology
from finspaces.errors import NotAntichainInduced
from finspaces.generators import random_antichain_filtration, random_poset
from finspaces.intlinalg import AbelianGroup
from finspaces.poset import build, suspension
from finspaces.spectral import (FilteredComplex, page_homology, star_page, spectral_sequence,
                                validate_filtration)

Z = AbelianGroup(1)
Z2 = AbelianGroup(0, (2,))


def test_rp2_first_page_shape(rp2_filtration):
    page = star_page(rp2_filtration)
    assert page.nonzero() == {(0, 0): Z, (1, 0): AbelianGroup(2), (2, 0): AbelianGroup(2)}
    assert page.differentials[(1, 0)].data == [[0, 0]]


def test_rp2_beta_on_named_cycles(rp2, rp2_filtration):
    page = star_page(rp2_filtration)
    g0 = loop_cycle(rp2, "djhlekim")
    g1 = loop_cycle(rp2, "fjhlgmik")
    # both loops generate their summands
    assert page.coordinates(2, 0, "b", g0) == [1, 0]
    assert page.coordinates(2, 0, "c", g1) == [0, -1]
    # generators of the h and i summands are [l]-[j] and [m]-[k]
    assert page.coordinates(1, 0, "h", {("l",): 1, ("j",): -1}) == [1, 0]
    assert page.coordinates(1, 0, "i", {("m",): 1, ("k",): -1}) == [0, 1]
    beta = page.differentials[(2, 0)]
    assert beta.apply(page.coordinates(2, 0, "b", g0)) == [1, 1]
    assert beta.apply(page.coordinates(2, 0, "c", g1)) == [1, -1]


def test_rp2_second_page_and_limit(rp2_filtration):
    page = star_page(rp2_filtration)
    assert page_homology(page, 1, 0) == Z2
    assert page_homology(page, 2, 0).is_trivial
    assert page_homology(page, 0, 0) == Z
    ss = spectral_sequence(rp2_filtration)
    assert ss.pages[1].nonzero() == {(0, 0): Z, (1, 0): Z2}
    assert ss.infinity.nonzero() == {(0, 0): Z, (1, 0): Z2}
    assert ss.report.converges
    assert len(set(ss.euler_characteristics())) == 1


def test_suspension_fixture_relative_and_absolute():
    doc = fixture_doc("suspension")
    P = doc.poset()
    F = validate_filtration(P, doc.filtrations["suspension"])
    ss = spectral_sequence(F)
    assert ss.report.converges
    assert nonzero(ss.report.homology) == {0: Z, 1: Z}
    R = validate_filtration(P, doc.filtrations["suspension"], relative=True)
    rel = spectral_sequence(R)
    assert rel.report.converges
    assert nonzero(rel.report.homology) == {1: Z}


def test_trivial_filtration_is_degenerate():
    P = build(["t0", "t1", "t2"], [("t0", "t1"), ("t1", "t2")])
    F = validate_filtration(P, [P.elements])
    ss = spectral_sequence(F)
    assert ss.pages[0].nonzero() == {(0, 0): Z}
    assert ss.report.converges


def test_rejects_non_antichain_step(rp2):
    with pytest.raises(NotAntichainInduced) as info:
        validate_filtration(rp2, [["a"], rp2.elements])
    assert info.value.witness == 1


def test_rejects_bad_nesting(rp2):
    with pytest.raises(ValueError):
        validate_filtration(rp2, [["a", "b"], ["a"], rp2.elements])
    with pytest.raises(ValueError):
        validate_filtration(rp2, [["a"]])


def test_repeated_levels_are_allowed(rp2, rp2_filtration):
    levels = list(rp2_filtration.levels)
    F = validate_filtration(rp2, [levels[0], levels[0], levels[1], levels[2], levels[2]])
    ss = spectral_sequence(F)
    assert ss.report.converges
    assert nonzero(ss.report.homology) == {0: Z, 1: Z2}


def test_filtered_complex_first_page_matches_star_page(rp2_filtration):
    fc = FilteredComplex.from_filtration(rp2_filtration)
    assert fc.page(1).nonzero() == star_page(rp2_filtration).nonzero()


def test_suspension_of_rp2_via_two_columns(rp2):
    S = suspension(rp2)
    F = validate_filtration(S, [[x for x in S.elements if x != "-"], S.elements])
    ss = spectral_sequence(F)
    assert ss.report.converges
    assert nonzero(ss.report.homology) == {0: Z, 2: Z2}


@settings(max_examples=40)
@given(posets(max_size=7, min_size=1))
def test_star_page_agrees_with_generic_engine(P):
    rng = random.Random(len(P) * 7919 + len(P.sorted_covers))
    F = validate_filtration(P, random_antichain_filtration(rng, P))
    page = star_page(F)
    ss = spectral_sequence(F)
    assert page.nonzero() == ss.pages[0].nonzero()
    second = ss.pages[1] if len(ss.pages) > 1 else ss.infinity
    for key in set(page.entries) | set(second.nonzero()):
        assert page_homology(page, *key) == second.entry(*key)
    assert ss.report.converges
    assert len(set(ss.euler_characteristics())) == 1


def test_random_relative_filtrations_converge():
    rng = random.Random(11)
    for _ in range(25):
        P = random_poset(rng, rng.randint(2, 8))
        A = P.down_closure([x for x in P.elements if rng.random() < 0.3])
        levels = [A]
        rest = [x for x in P.linear_extension if x not in set(A)]
        current = list(A)
        for x in rest:
            current.append(x)
            levels.append(tuple(current))
        F = validate_filtration(P, levels, relative=True)
        ss = spectral_sequence(F)
        assert ss.report.converges
        if len(levels) > 2:
            assert len(set(ss.euler_characteristics())) == 1


def test_convergence_report_matches_oracle(rp2):
    H = homology(f_complex(rp2), representatives=False).groups
    assert nonzero(H) == nonzero(absolute_homology(rp2).groups)
