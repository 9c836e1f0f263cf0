"""Every fixture against its hand-checked golden file in fixtures/expected."""

import pytest

from conftest import expected, fixture_doc
from finspaces.complexes import absolute_homology, reduced_homology
from finspaces.covering import build_cover, cover_spectral, parse_group, pi2_report, validate_coloring
from finspaces.mobius import all_methods
from finspaces.morse import greedy_matching, morse_complex, verify_matching
from finspaces.reductions import find_quasicellular, is_cellular, quasicellular_complex
from finspaces.spectral import page_homology, star_page, spectral_sequence, validate_filtration

NAMES = ["rp2", "z-wedge", "suspension", "morse-remark", "chain3"]


def as_text(groups: dict) -> dict:
    return {str(n): str(g) for n, g in sorted(groups.items()) if not g.is_trivial}


def page_text(entries: dict) -> dict:
    return {f"{p},{q}": str(g) for (p, q), g in sorted(entries.items()) if not g.is_trivial}


def counts(d: dict) -> dict:
    return {str(n): c for n, c in d.items()}


@pytest.mark.parametrize("name", NAMES)
def test_basic_invariants(name):
    doc, exp = fixture_doc(name), expected(name)
    P = doc.poset()
    assert P.chain_counts() == exp["chain_counts"]
    assert as_text(absolute_homology(P).groups) == exp["homology"]
    assert as_text(reduced_homology(P).groups) == exp["reduced_homology"]
    assert set(all_methods(P).values()) == {exp["mobius"]}
    assert is_cellular(P).cellular == exp["cellular"]


@pytest.mark.parametrize("name", NAMES)
def test_quasicellular(name):
    doc, exp = fixture_doc(name), expected(name)
    P = doc.poset()
    qm = find_quasicellular(P)
    if "witness" in exp["quasicellular"]:
        assert not qm and qm.witness == exp["quasicellular"]["witness"]
    else:
        rc = quasicellular_complex(P, qm)
        assert counts(rc.generator_counts()) == exp["quasicellular"]["generators"]
        assert as_text(rc.homology()) == exp["homology"]
    if "greedy_morse" in exp:
        mc = morse_complex(P, greedy_matching(P))
        assert counts(mc.generator_counts()) == exp["greedy_morse"]["generators"]
    if "relative" in exp:
        rel = exp["relative"]
        qm = find_quasicellular(P, doc.subsets[rel["subset"]])
        assert qm.rho == rel["rho"]
        rc = quasicellular_complex(P, qm)
        assert counts(rc.generator_counts()) == rel["generators"]
        assert {str(n): m.tolist() for n, m in rc.differentials.items()} == rel["differentials"]
        assert as_text(rc.homology()) == rel["homology"]


@pytest.mark.parametrize("name", [n for n in NAMES if "spectral" in expected(n)])
def test_spectral(name):
    doc, exp = fixture_doc(name), expected(name)["spectral"]
    F = validate_filtration(doc.poset(), doc.filtrations[exp["filtration"]])
    page = star_page(F)
    assert page_text(page.entries) == exp["e1"]
    if "d1" in exp:
        assert {f"{p},{q}": m.tolist() for (p, q), m in page.differentials.items()} == exp["d1"]
    assert page_text({k: page_homology(page, *k) for k in page.entries}) == exp["e2"]
    ss = spectral_sequence(F)
    assert ss.report.converges
    second = ss.pages[1] if len(ss.pages) > 1 else ss.infinity
    assert page_text(second.entries) == exp["e2"]


def test_relative_spectral_suspension():
    doc, exp = fixture_doc("suspension"), expected("suspension")["relative_spectral"]
    F = validate_filtration(doc.poset(), doc.filtrations[exp["filtration"]], relative=True)
    ss = spectral_sequence(F)
    assert ss.report.converges
    assert as_text(ss.report.homology) == exp["homology"]


def test_cover_golden():
    doc, exp = fixture_doc("rp2"), expected("rp2")["cover"]
    P = doc.poset()
    spec = doc.colorings[exp["coloring"]]
    col = validate_coloring(P, parse_group(spec["group"]), spec["labels"])
    assert len(build_cover(col).total) == exp["points"]
    rep = pi2_report(col)
    assert as_text(rep.cover_homology) == exp["homology"]
    assert str(rep.group) == exp["pi2"]
    cs = cover_spectral(col, validate_filtration(P, doc.filtrations["standard"]))
    assert page_text(cs.page.entries) == exp["e1"]
    assert page_text({k: cs.e2(*k) for k in cs.page.entries}) == exp["e2"]


def test_matching_golden():
    doc, exp = fixture_doc("morse-remark"), expected("morse-remark")["matching"]
    P = doc.poset()
    M = doc.matchings[exp["name"]]
    rep = verify_matching(P, M)
    assert (rep.is_matching, rep.is_morse, rep.admissible) == (exp["is_matching"], exp["is_morse"],
                                                               exp["admissible"])
    assert list(rep.critical_points) == exp["critical"]
    assert as_text(morse_complex(P, M, force=True).homology()) == exp["forced_homology"]
