"""Command line front end.

Exit codes: 0 success, 1 domain error (the witness is printed), 2 schema or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import covering, mobius, morse, poset as posets, reductions, spectral
from .complexes import f_complex, format_groups, homology, relative_f_complex
from .document import SCHEMA, PosetDocument, load
from .errors import FinSpacesError, SchemaError
from .intlinalg import AbelianGroup
from .poset import Poset


class DomainFailure(Exception):
    """Raised by a subcommand that produced output but must exit with status 1."""


# ---------------------------------------------------------------------------
# helpers


def _groups_json(groups: dict) -> dict:
    return {str(n): {"rank": g.rank, "torsion": list(g.torsion), "text": str(g)} for n, g in sorted(groups.items())}


def _jsonable(value):
    """Tuple keys become comma joined strings so the value can go through json."""
    if isinstance(value, dict):
        return {",".join(k) if isinstance(k, tuple) else str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _subset(doc: PosetDocument, P: Poset, ref: str) -> tuple[str, ...]:
    """A named subset of the document, or a comma separated element list."""
    if ref in doc.subsets:
        return tuple(doc.subsets[ref])
    names = [x.strip() for x in ref.split(",") if x.strip()]
    for x in names:
        if x not in P:
            raise SchemaError(f"{ref!r} is neither a subset name nor a list of elements", ref)
    return tuple(names)


def _named(table: dict, key: str, kind: str):
    if key not in table:
        raise SchemaError(f"no {kind} named {key!r} (have: {', '.join(sorted(table)) or 'none'})", key)
    return table[key]


def _matrix_text(M) -> list[str]:
    return ["    [" + " ".join(f"{v:3d}" for v in row) + " ]" for row in M.data]


def _page_json(page: spectral.SpectralPage) -> dict:
    return {
        "r": page.r,
        "entries": {f"{p},{q}": str(g) for (p, q), g in page.nonzero().items()},
        "differentials": {f"{p},{q}": M.tolist() for (p, q), M in sorted(page.differentials.items())
                          if not M.is_zero()},
    }


def _page_lines(page: spectral.SpectralPage, title: str) -> list[str]:
    lines = [title]
    nz = page.nonzero()
    if not nz:
        lines.append("  (all zero)")
    for (p, q), g in nz.items():
        lines.append(f"  E[{p},{q}] = {g}")
    for (p, q), M in sorted(page.differentials.items()):
        if M.is_zero() or M.rows == 0 or M.cols == 0:
            continue
        tp, tq = page.target(p, q)
        lines.append(f"  d[{p},{q}] -> [{tp},{tq}]:")
        lines.extend(_matrix_text(M))
    return lines


def dot(P: Poset, matching: Sequence = (), labels: dict | None = None, name: str = "poset") -> str:
    """Graphviz text of the Hasse diagram drawn bottom-up."""
    matched = {tuple(e) for e in matching}
    out = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=circle];"]
    for x in P.elements:
        out.append(f'  "{x}";')
    for a, b in P.sorted_covers:
        attrs = []
        if (a, b) in matched:
            attrs.append('color="red", penwidth=2')
        if labels and labels.get((a, b)) is not None:
            attrs.append(f'label="{labels[(a, b)]}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f'  "{a}" -> "{b}"{suffix};')
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# subcommands; each returns (text lines, json payload)


def cmd_homology(doc, P, args):
    if args.relative:
        A = _subset(doc, P, args.relative)
        groups = homology(relative_f_complex(P, A), representatives=False).groups
        mode = "relative"
    else:
        mode = "reduced" if args.reduced else "absolute"
        groups = homology(f_complex(P, mode), representatives=False).groups
    return [format_groups(groups)], {"mode": mode, "homology": _groups_json(groups)}


def cmd_spectral(doc, P, args):
    levels = _named(doc.filtrations, args.filtration, "filtration")
    F = spectral.validate_filtration(P, levels, relative=args.relative)
    page = spectral.star_page(F)
    ss = spectral.spectral_sequence(F)
    lines = _page_lines(page, "first page (punctured stars):")
    for pg in ss.pages:
        lines += _page_lines(pg, f"E^{pg.r} (filtered complex):")
    lines += _page_lines(ss.infinity, "E^inf:")
    rep = ss.report
    lines.append(f"homology: {format_groups(rep.homology)}")
    lines.append(f"converges: {'yes' if rep.converges else 'NO'}")
    lines.append("euler characteristics: " + " ".join(str(c) for c in ss.euler_characteristics()))
    payload = {
        "first_page": _page_json(page),
        "pages": [_page_json(pg) for pg in ss.pages],
        "infinity": _page_json(ss.infinity),
        "homology": _groups_json(rep.homology),
        "converges": rep.converges,
        "euler": ss.euler_characteristics(),
    }
    return lines, payload


def cmd_quasicell(doc, P, args):
    A = _subset(doc, P, args.relative) if args.relative else None
    qm = reductions.find_quasicellular(P, A)
    if isinstance(qm, reductions.Infeasible):
        raise DomainFailure(f"not quasicellular: witness {qm.witness} ({qm.reason})",
                            {"feasible": False, "witness": qm.witness, "reason": qm.reason})
    rc = reductions.quasicellular_complex(P, qm)
    H = rc.homology()
    C = relative_f_complex(P, A) if A is not None else f_complex(P)
    chain_counts = {n: C.rank(n) for n in C.degrees if n >= 0}
    gens = rc.generator_counts()
    lines = ["rho: " + ", ".join(f"{x}={r}" for x, r in qm.rho.items())]
    for n in sorted(rc.generators):
        owners = ", ".join(x for x, _ in rc.generators[n])
        lines.append(f"  C{n} = {rc.group(n)}  [{owners}]")
        if n in rc.differentials and not rc.differentials[n].is_zero():
            lines.append(f"  d{n}:")
            lines.extend(_matrix_text(rc.differentials[n]))
    lines.append(f"homology: {format_groups(H)}")
    lines.append(f"generators: {sum(gens.values())} (chains: {sum(chain_counts.values())})")
    payload = {"feasible": True, "rho": qm.rho, "generators": gens, "chains": chain_counts,
               "differentials": {str(n): m.tolist() for n, m in rc.differentials.items()},
               "homology": _groups_json(H)}
    return lines, payload


def cmd_morse(doc, P, args):
    if args.greedy:
        M = morse.greedy_matching(P)
    else:
        if not args.matching:
            raise SchemaError("give --matching NAME or --greedy", None)
        M = _named(doc.matchings, args.matching, "matching")
    rep = morse.verify_matching(P, M)
    lines = [
        f"matching: {'yes' if rep.is_matching else 'no'}",
        f"acyclic (Morse): {'yes' if rep.is_morse else 'no'}",
        "admissible edges: " + ", ".join(f"({a},{b})={'yes' if ok else 'no'}"
                                         for (a, b), ok in rep.admissible_edges.items()),
        "critical points: " + ", ".join(rep.critical_points),
    ]
    payload: dict[str, Any] = {"matching": [list(e) for e in M], "is_matching": rep.is_matching,
                               "is_morse": rep.is_morse,
                               "admissible": {f"{a},{b}": ok for (a, b), ok in rep.admissible_edges.items()},
                               "critical": list(rep.critical_points)}
    mc = morse.morse_complex(P, M, force=args.force)
    H = mc.homology()
    lines.append(("forced " if mc.forced else "") + "Morse complex: "
                 + ", ".join(f"C{n}={mc.group(n)}" for n in sorted(mc.generators) if mc.generators[n]))
    lines.append(f"Morse complex homology: {format_groups(H)}")
    truth = homology(f_complex(P), representatives=False).groups
    lines.append(f"poset homology: {format_groups(truth)}")
    payload.update(forced=mc.forced, generators=mc.generator_counts(), homology=_groups_json(H),
                   poset_homology=_groups_json(truth))
    return lines, payload


def cmd_mobius(doc, P, args):
    m = args.method
    if m == "chains":
        rep = mobius.mobius_chains(P)
    elif m == "incidence":
        rep = mobius.mobius_incidence(P)
    elif m == "minimal":
        rep = mobius.mobius_minimal_points(P)
    elif m == "open":
        rep = mobius.mobius_open(P, _subset(doc, P, args.subset) if args.subset else P.minimal_elements())
    elif m == "bjorner-walker":
        rep = mobius.bjorner_walker(P, _subset(doc, P, args.subset) if args.subset else ())
    else:
        values = mobius.all_methods(P)
        return [str(values["incidence"])] + [f"  {k}: {v}" for k, v in values.items()], {"values": values}
    lines = [str(rep.value)]
    if args.details:
        lines += [f"  {k}: {v}" for k, v in rep.decomposition.items()]
    return lines, {"value": rep.value, "method": rep.method, "decomposition": _jsonable(rep.decomposition)}


def _coloring(doc, P, name):
    spec = _named(doc.colorings, name, "coloring")
    G = covering.parse_group(spec["group"])
    return covering.validate_coloring(P, G, spec.get("labels", []))


def cmd_cover(doc, P, args):
    col = _coloring(doc, P, args.coloring)
    cov = covering.build_cover(col)
    H = homology(f_complex(cov.total), representatives=False).groups
    payload: dict[str, Any] = {"points": len(cov.total), "connected": cov.total.is_connected(),
                               "homology": _groups_json(H)}
    extra: list[str] = []
    if args.filtration:
        F = spectral.validate_filtration(P, _named(doc.filtrations, args.filtration, "filtration"))
        cs = covering.cover_spectral(col, F)
        extra = _page_lines(cs.page, "cover first page:")
        extra.append("E^2 from the first page: " + ", ".join(
            f"[{p},{q}]={cs.e2(p, q)}" for (p, q) in sorted(cs.page.entries) if not cs.e2(p, q).is_trivial))
        extra.append(f"agrees with the filtered cover: E1 {'yes' if cs.e1_agrees() else 'NO'}, "
                     f"E2 {'yes' if cs.e2_agrees() else 'NO'}")
        payload["first_page"] = _page_json(cs.page)
        payload["e1_agrees"], payload["e2_agrees"] = cs.e1_agrees(), cs.e2_agrees()
    try:
        pi2 = covering.pi2_report(col).group
    except FinSpacesError as err:
        payload["pi2"] = None
        lines = [f"{format_groups(H)}; pi2 unavailable ({err})"] + extra
        raise DomainFailure("\n".join(lines), payload) from None
    payload["pi2"] = str(pi2)
    return [f"{format_groups(H)}; pi2={pi2}"] + extra, payload


def _emit_document(Q: Poset, name: str, args):
    doc = PosetDocument.from_poset(Q, name)
    if args.output:
        Path(args.output).write_text(doc.dumps(), encoding="utf-8")
        return [f"wrote {args.output} ({len(Q)} elements)"], {"output": args.output, "elements": len(Q)}
    return [doc.dumps().rstrip("\n")], doc.to_dict()


def cmd_reduce(doc, P, args):
    return _emit_document(posets.core(P), f"{doc.name or 'poset'}-core", args)


def cmd_subdivide(doc, P, args):
    return _emit_document(posets.barycentric_subdivision(P), f"{doc.name or 'poset'}-sd", args)


def cmd_suspend(doc, P, args):
    return _emit_document(posets.suspension(P), f"{doc.name or 'poset'}-susp", args)


def cmd_info(doc, P, args):
    deg = posets.degree_map(P)
    cell = reductions.is_cellular(P)
    counts = P.chain_counts()
    beats = posets.beat_points(P)
    info = {
        "elements": len(P),
        "covers": len(P.covers),
        "height": P.height(),
        "graded": deg is not None,
        "cellular": cell.cellular,
        "connected": P.is_connected(),
        "chain_counts": counts,
        "beat_points": [x for x, _ in beats],
        "mobius": mobius.mu(P),
    }
    lines = [f"{k}: {v}" for k, v in info.items()]
    return lines, info


def _bench_one(P: Poset) -> dict:
    row: dict[str, Any] = {"elements": len(P)}
    t = time.perf_counter()
    H = homology(f_complex(P), representatives=False).groups
    row["f_time"] = time.perf_counter() - t
    row["chains"] = sum(P.chain_counts())
    t = time.perf_counter()
    qm = reductions.find_quasicellular(P)
    if isinstance(qm, reductions.Infeasible):
        row.update(quasicell=None, morse=None)
        return row
    rc = reductions.quasicellular_complex(P, qm)
    row["q_time"] = time.perf_counter() - t
    row["quasicell"] = rc.size
    t = time.perf_counter()
    mc = morse.morse_complex(P, morse.greedy_matching(P))
    row["m_time"] = time.perf_counter() - t
    row["morse"] = mc.size
    row["agree"] = rc.homology() == mc.homology() == {n: H.get(n, AbelianGroup()) for n in mc.homology()}
    return row


def cmd_bench(args):
    rows = []
    for path in sorted(Path(args.directory).glob("*.json")):
        doc = load(path)
        P = doc.poset()
        if args.subdivide:
            P = posets.barycentric_subdivision(P)
        row = _bench_one(P)
        row["file"] = path.name
        rows.append(row)
    head = f"{'file':<22}{'elems':>6}{'chains':>8}{'quasi':>7}{'morse':>7}{'t_f':>9}{'t_q':>9}{'t_m':>9}  agree"
    lines = [head]
    for r in rows:
        fmt = lambda k: f"{r[k]:9.3f}" if r.get(k) is not None else f"{'-':>9}"
        lines.append(f"{r['file']:<22}{r['elements']:>6}{r['chains']:>8}"
                     f"{str(r.get('quasicell') if r.get('quasicell') is not None else '-'):>7}"
                     f"{str(r.get('morse') if r.get('morse') is not None else '-'):>7}"
                     f"{fmt('f_time')}{fmt('q_time')}{fmt('m_time')}  {r.get('agree', '-')}")
    return lines, {"rows": rows}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="finspaces", description="Homology of finite spaces (posets).")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file", help="poset document (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--dot", metavar="PATH", help="also write the Hasse diagram as Graphviz text")
        return p

    p = with_file("homology", "homology of the f-chain complex")
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--relative", metavar="SUBSET", help="subset name or comma separated elements")

    p = with_file("spectral", "spectral sequence of a filtration induced by antichains")
    p.add_argument("--filtration", required=True)
    p.add_argument("--relative", action="store_true", help="read level 0 as the subspace A")

    p = with_file("quasicell", "quasicellular morphism and reduced complex")
    p.add_argument("--relative", metavar="SUBSET")

    p = with_file("morse", "Morse matching report and Morse complex")
    p.add_argument("--matching")
    p.add_argument("--greedy", action="store_true", help="use the greedy admissible matching")
    p.add_argument("--force", action="store_true", help="build the complex even when not quasicellular")

    p = with_file("mobius", "Mobius function")
    p.add_argument("--method", default="incidence",
                   choices=["chains", "incidence", "open", "minimal", "bjorner-walker", "all"])
    p.add_argument("--subset", help="open set V or convex set C")
    p.add_argument("--details", action="store_true")

    p = with_file("cover", "regular cover of a group coloring")
    p.add_argument("--coloring", required=True)
    p.add_argument("--filtration")

    for name, helptext in (("reduce", "beat-point core"), ("subdivide", "barycentric subdivision"),
                           ("suspend", "non-Hausdorff suspension")):
        p = with_file(name, helptext)
        p.add_argument("-o", "--output", help="write the document here instead of stdout")

    with_file("info", "basic invariants")

    p = sub.add_parser("bench", help="compare the f-complex, quasicellular and Morse routes")
    p.add_argument("directory")
    p.add_argument("--subdivide", action="store_true", help="benchmark the barycentric subdivisions")
    p.add_argument("--json", action="store_true")

    sub.add_parser("schema", help="print the JSON schema of poset documents")
    return ap


COMMANDS = {
    "homology": cmd_homology, "spectral": cmd_spectral, "quasicell": cmd_quasicell, "morse": cmd_morse,
    "mobius": cmd_mobius, "cover": cmd_cover, "reduce": cmd_reduce, "subdivide": cmd_subdivide,
    "suspend": cmd_suspend, "info": cmd_info,
}


def _print(lines, payload, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    else:
        stream.write("\n".join(lines) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "schema":
        print(json.dumps(SCHEMA, indent=2))
        return 0
    try:
        if args.command == "bench":
            lines, payload = cmd_bench(args)
            _print(lines, payload, args.json)
            return 0
        doc = load(args.file)
        P = doc.poset()
        if args.dot:
            matching = doc.matchings.get(getattr(args, "matching", None) or "", [])
            labels = None
            if getattr(args, "coloring", None):
                col = _coloring(doc, P, args.coloring)
                labels = {e: col.name(g) for e, g in col.labels.items() if g != col.group.identity}
            Path(args.dot).write_text(dot(P, matching, labels, doc.name or "poset"), encoding="utf-8")
        lines, payload = COMMANDS[args.command](doc, P, args)
        _print(lines, payload, args.json)
        return 0
    except DomainFailure as fail:
        text, payload = fail.args
        _print([text], payload, args.json)
        return 1
    except SchemaError as err:
        print(f"schema error: {err}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    except FinSpacesError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        if err.witness is not None:
            print(f"witness: {err.witness}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
