import pytest

from conftest import fixture_doc, loop_cycle, nonzero
from finspaces.complexes import absolute_homology
from finspaces.errors import ColoringNotAdmissible, NotACover, NotHomologySimplyConnected, SchemaError
from finspaces.intlinalg import AbelianGroup
from finspaces.poset import build
from finspaces.covering import (FiniteGroup, build_cover, cover_spectral, cyclic, is_connected, parse_group,
                                pi2_report, pi2_symbolic, symmetric, trivial_group, validate_coloring)

Z = AbelianGroup(1)


@pytest.fixture
def rp2_coloring(rp2_doc):
    spec = rp2_doc.colorings["z2"]
    return validate_coloring(rp2_doc.poset(), parse_group(spec["group"]), spec["labels"])


def test_groups():
    assert cyclic(5).order == 5 and cyclic(5).inv(2) == 3
    S3 = symmetric(3)
    assert S3.order == 6 and S3.names[S3.identity] == "012"
    assert trivial_group().order == 1
    G = parse_group({"names": ["e", "s"], "table": [["e", "s"], ["s", "e"]]})
    assert G.inv(G.index("s")) == G.index("s")


@pytest.mark.parametrize("spec", ["cyclic:0", "dihedral:3", "cyclic:x", 7,
                                  {"table": [["0", "1"], ["0", "1"]]}])
def test_bad_group_specs(spec):
    with pytest.raises(SchemaError):
        parse_group(spec)


def test_non_associative_table():
    table = ((0, 1, 2), (1, 0, 1), (2, 2, 0))
    with pytest.raises(SchemaError):
        FiniteGroup(table, ("e", "a", "b"))


def test_rp2_cover_shape(rp2_coloring):
    cov = build_cover(rp2_coloring)
    assert len(cov.total) == 26
    assert cov.verify()
    assert is_connected(rp2_coloring)
    assert nonzero(absolute_homology(cov.total).groups) == {0: Z, 2: Z}
    assert cov.projection(cov.deck(1, "a.0")) == "a"
    assert cov.deck(1, "a.0") == "a.1"


def test_rp2_cover_first_page(rp2, rp2_coloring, rp2_filtration):
    cs = cover_spectral(rp2_coloring, rp2_filtration)
    assert cs.page.nonzero() == {(0, 0): AbelianGroup(2), (1, 0): AbelianGroup(4), (2, 0): AbelianGroup(4)}
    assert cs.e1_agrees() and cs.e2_agrees()
    assert cs.e2(2, 0) == Z
    assert cs.e2(1, 0).is_trivial

    a = [cs.class_coordinates(0, 0, None, {(f"a.{g}",): 1}) for g in (0, 1)]
    assert a == [[1, 0], [0, 1]]
    alpha = cs.page.differentials[(1, 0)]
    lj = {("l",): 1, ("j",): -1}
    mk = {("m",): 1, ("k",): -1}
    # alpha-bar on the four summand generators, base-point major
    expected_alpha = [("h", 0, lj, [-1, 1]), ("h", 1, lj, [1, -1]), ("i", 0, mk, [-1, 1]), ("i", 1, mk, [1, -1])]
    for x, g, cyc, value in expected_alpha:
        assert alpha.apply(cs.class_coordinates(1, 0, (x, g), cyc)) == value

    beta = cs.page.differentials[(2, 0)]
    g0 = loop_cycle(rp2, "djhlekim")
    g1 = loop_cycle(rp2, "fjhlgmik")
    expected_beta = {("b", 0, 0): [0, 1, 1, 0], ("b", 1, 0): [1, 0, 0, 1],
                     ("c", 0, 1): [1, 0, -1, 0], ("c", 1, 1): [0, 1, 0, -1]}
    for (x, g, which), value in expected_beta.items():
        cyc = g0 if which == 0 else g1
        assert beta.apply(cs.class_coordinates(2, 0, (x, g), cyc)) == value


def test_rp2_pi2(rp2_coloring):
    rep = pi2_report(rp2_coloring)
    assert rep.group == Z
    assert any("user-asserted" in h for h in rep.hypotheses)


def test_pi2_refuses_non_simply_connected(rp2_doc):
    P = rp2_doc.poset()
    col = validate_coloring(P, trivial_group(), [])
    with pytest.raises(NotHomologySimplyConnected):
        pi2_report(col)
    assert pi2_symbolic(P) == "0"


def test_pi2_tensor_check_on_sphere_model():
    # a 2-sphere model with the trivial coloring; A = one closed hemisphere
    P = build(["x", "y", "p", "q", "s", "t"],
              [(u, v) for u in "xy" for v in "pq"] + [(u, v) for u in "pq" for v in "st"])
    col = validate_coloring(P, trivial_group(), [])
    rep = pi2_report(col, ["x", "y", "p", "q", "s"])
    assert rep.group == Z
    assert rep.tensor_check is True


def test_path_dependent_labels_rejected(rp2):
    with pytest.raises(ColoringNotAdmissible) as info:
        validate_coloring(rp2, cyclic(2), [("a", "d", "1")])
    x, y, g1, g2 = info.value.witness
    assert {g1, g2} == {"0", "1"}


def test_labels_must_be_edges(rp2):
    with pytest.raises(NotACover):
        validate_coloring(rp2, cyclic(2), [("a", "j", "1")])


def test_disconnected_cover():
    P = build(["a", "b"], [("a", "b")])
    col = validate_coloring(P, cyclic(3), [])
    assert not is_connected(col)
    assert len(build_cover(col).total.components()) == 3


def test_trivial_cover_keeps_names():
    doc = fixture_doc("suspension")
    P = doc.poset()
    col = validate_coloring(P, parse_group("trivial"), [])
    cov = build_cover(col)
    assert cov.total.elements == P.elements
