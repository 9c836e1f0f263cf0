import random

import pytest

from conftest import fixture_doc, fixture_poset, nonzero
from finspaces.complexes import absolute_homology, reduced_homology
from finspaces.errors import NotOpen, NotQuasicellular
from finspaces.generators import random_poset
from finspaces.intlinalg import AbelianGroup
from finspaces.poset import barycentric_subdivision, build, suspension
from finspaces.reductions import (Infeasible, QuasicellularMorphism, find_quasicellular, is_cellular,
                                  is_quasicellular_morphism, quasicellular_complex)

Z = AbelianGroup(1)


@pytest.fixture
def zwedge():
    doc = fixture_doc("z-wedge")
    return doc.poset(), doc.subsets["Ua"]


def test_relative_pair_levels(zwedge):
    P, Ua = zwedge
    qm = find_quasicellular(P, Ua)
    assert qm.rho == {"b": 2, "c": 1}
    assert is_quasicellular_morphism(P, qm.rho, Ua)


def test_relative_reduced_complex(zwedge):
    P, Ua = zwedge
    rc = quasicellular_complex(P, find_quasicellular(P, Ua))
    assert rc.generator_counts() == {1: 1, 2: 1}
    assert rc.differentials[2].data == [[0]]
    assert nonzero(rc.homology()) == {1: Z, 2: Z}
    assert nonzero(rc.homology()) == nonzero(reduced_homology(P).groups)


def test_absolute_z_is_infeasible(zwedge):
    P, _ = zwedge
    res = find_quasicellular(P)
    assert isinstance(res, Infeasible) and not res
    assert res.witness == "a"
    assert res.degrees == (0, 1)


def test_subspace_must_be_open(zwedge):
    P, _ = zwedge
    with pytest.raises(NotOpen):
        find_quasicellular(P, ["a"])


def test_rp2_is_cellular_and_quasicellular(rp2):
    rep = is_cellular(rp2)
    assert rep.cellular
    assert rep.degrees["a"] == 0 and rep.degrees["j"] == 2
    qm = find_quasicellular(rp2)
    rc = quasicellular_complex(rp2, qm)
    assert rc.generator_counts() == {0: 3, 1: 6, 2: 4}
    assert rc.is_free()
    assert nonzero(rc.homology()) == nonzero(absolute_homology(rp2).groups)
    assert rc.chain_complex().composition_defect() is None


def test_morse_remark_not_quasicellular():
    P = fixture_poset("morse-remark")
    res = find_quasicellular(P)
    assert not res and res.witness == "h"
    assert not is_cellular(P).cellular


def test_user_level_map_checks(rp2):
    qm = find_quasicellular(rp2)
    assert is_quasicellular_morphism(rp2, qm.rho)
    bad = dict(qm.rho)
    bad["j"] = 1
    assert not is_quasicellular_morphism(rp2, bad)
    assert not is_quasicellular_morphism(rp2, {k: v for k, v in qm.rho.items() if k != "a"})


def test_reduced_complex_refuses_off_row_entries(zwedge):
    P, _ = zwedge
    fake = QuasicellularMorphism(P, {x: 0 if not P.down_set(x, strict=True) else 1 + max(
        0, len(P.down_set(x, strict=True)) > 2) for x in P.elements})
    with pytest.raises(NotQuasicellular):
        quasicellular_complex(P, fake)


def test_cone_point_over_rp2_is_rejected():
    # the new top point has link H~_1 = Z/2 but sits above level-2 points
    rp = fixture_poset("rp2")
    P = build(list(rp.elements) + ["top"], list(rp.sorted_covers) + [(m, "top") for m in "jklm"])
    res = find_quasicellular(P)
    assert not res and res.witness == "top" and res.degrees == (1,)


def test_random_subdivisions_match_oracle():
    rng = random.Random(5)
    for _ in range(12):
        base = random_poset(rng, rng.randint(1, 6), 0.5, max_height=2)
        P = barycentric_subdivision(base)
        qm = find_quasicellular(P)
        assert qm, qm
        rc = quasicellular_complex(P, qm)
        assert nonzero(rc.homology()) == nonzero(absolute_homology(P).groups)


def test_random_posets_either_reduce_or_give_witness():
    rng = random.Random(8)
    for _ in range(40):
        P = random_poset(rng, rng.randint(1, 8))
        qm = find_quasicellular(P)
        if qm:
            rc = quasicellular_complex(P, qm)
            assert nonzero(rc.homology()) == nonzero(absolute_homology(P).groups)
        else:
            assert qm.witness in P.elements


def test_suspension_of_sphere_model_stays_cellular():
    S = suspension(fixture_poset("suspension"))
    qm = find_quasicellular(S)
    assert qm and qm.rho["+'"] == 2
    assert is_cellular(S).cellular
    assert nonzero(quasicellular_complex(S, qm).homology()) == nonzero(absolute_homology(S).groups)
