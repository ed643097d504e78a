"""``bcwb`` command line.

Exit codes: 0 success, 1 a structural or invariance check failed,
2 usage, parse, schema or missing-input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus
from .cohomology import bott_chern, hyper_bc, hyper_truncated, map_C, map_I
from .diamond import (
    AsymmetricDiamond,
    MissingTableEntry,
    TableError,
    blowup_predict,
    invariance_check,
    kahler_tables,
    point_tables,
    surface_invariants,
    tables_from_model,
)
from .dsl import parse_model
from .exterior import LieModel, ModelError, validate_model
from .invariants import InvariantReport, consistency_report, parallel_map, thread_count
from .io import (
    ResultDocument,
    SchemaError,
    detect_kind,
    diamond_from_json,
    dumps,
    group_json,
    loads,
    map_json,
    source_hash,
    surface_from_json,
    tables_from_json,
    tables_to_json,
    vector_json,
)


class UsageError(Exception):
    """Reported on stderr with exit code 2."""


# ---------------------------------------------------------------------------
# input resolution


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: no such file")
    return p.read_text(encoding="utf-8")


def load_model(source: str) -> LieModel:
    if source.startswith("corpus:"):
        try:
            return corpus.load(source[len("corpus:"):])
        except corpus.UnknownCorpusEntry as e:
            raise UsageError(str(e)) from None
    return parse_model(_read(source))


def load_json(source: str):
    if source.startswith("corpus:"):
        try:
            return loads(corpus.data(source[len("corpus:"):]))
        except corpus.UnknownCorpusEntry as e:
            raise UsageError(str(e)) from None
    return loads(_read(source))


def load_tables(source: str):
    """Tables from ``point``, a corpus model, a ``.lie`` file or a JSON file."""
    if source == "point":
        return point_tables()
    if source.startswith("corpus:") and source[len("corpus:"):] in corpus.names():
        return tables_from_model(load_model(source))
    if source.endswith(".lie"):
        return tables_from_model(load_model(source))
    doc = load_json(source)
    if detect_kind(doc) == "hodge_diamond":
        return kahler_tables(diamond_from_json(doc))
    return tables_from_json(doc)


def _validated(m: LieModel) -> LieModel:
    rep = validate_model(m)
    if not rep.ok:
        raise ModelError("model fails validation: " + "; ".join(f"{n}: {d}" for n, d in rep.failures()))
    return m


# ---------------------------------------------------------------------------
# documents


def _model_block(m: LieModel) -> dict:
    return {"name": m.name, "n": m.n, "source_sha256": source_hash(m.source)}


def _tables_block(r: InvariantReport) -> dict:
    return {
        "betti": vector_json(r.betti, 0),
        "hodge": r.hodge,
        "bc": r.bc,
        "aeppli": r.aeppli,
        "hyper_c1": vector_json(r.hyper_c1, 1),
        "hyper_bc11": vector_json(r.hyper_bc11, 1),
        "spade": vector_json(r.spade, 1),
        "club": vector_json(r.club, 1),
        "delta_bc_dol": r.delta_bc_dol,
        "nk_degree": vector_json(r.nk_degree, 0),
        "ddbar_lemma": r.ddbar_lemma,
        "frolicher_e1": r.frolicher_e1,
    }


def _checks_block(r: InvariantReport) -> list:
    return [{"name": c.name, "passed": c.passed, "structural": c.structural, "detail": c.detail} for c in r.checks]


def _maps_block(m: LieModel, which, threads) -> dict:
    n = m.n
    out = {}
    if "C" in which:
        ks = list(range(1, 2 * n + 1))
        out["C"] = dict(zip(map(str, ks), parallel_map(lambda k: map_json(map_C(m, k)), ks, threads)))
    if "I" in which:
        pqs = [(p, q) for p in range(n + 1) for q in range(n + 1)]
        vals = parallel_map(lambda pq: map_json(map_I(m, *pq)), pqs, threads)
        out["I"] = {f"{p},{q}": v for (p, q), v in zip(pqs, vals)}
    return out


def build_document(m: LieModel, args=None, threads: int | None = None) -> ResultDocument:
    bc = getattr(args, "bc", None) or []
    hyper = getattr(args, "hyper", None) or []
    trunc = getattr(args, "trunc", None) or []
    maps = getattr(args, "maps", None) or []
    doc = ResultDocument(model=_model_block(m))
    selective = bool(bc or hyper or trunc or maps)
    if not selective:
        r = consistency_report(m, threads)
        doc.tables = _tables_block(r)
        doc.maps = _maps_block(m, ("C", "I"), threads)
        doc.checks = _checks_block(r)
        return doc
    _validated(m)
    groups = {}
    for p, q in bc:
        groups[f"bc:{p},{q}"] = group_json(bott_chern(m, p, q))
    for k, p, q in hyper:
        groups[f"hyper_bc:{k},{p},{q}"] = group_json(hyper_bc(m, k, p, q))
    for k, p in trunc:
        groups[f"hyper_c:{k},{p}"] = group_json(hyper_truncated(m, k, p))
    if groups:
        doc.groups = groups
    if maps:
        doc.maps = _maps_block(m, sorted(set(maps)), threads)
    return doc


# ---------------------------------------------------------------------------
# text rendering


def _row(label: str, values) -> str:
    return f"{label}: " + " ".join(str(v) for v in values)


def _grid(label: str, grid) -> list[str]:
    w = max(len(str(v)) for r in grid for v in r)
    lines = [f"{label} (rows p, columns q):"]
    for p, r in enumerate(grid):
        lines.append(f"  p={p}: " + " ".join(str(v).rjust(w) for v in r))
    return lines


def render_table(doc: ResultDocument) -> str:
    lines = []
    if doc.model:
        lines.append(f"model: {doc.model['name']} (n={doc.model['n']})")
    t = doc.tables
    if t:
        lines.append(_row("betti", t["betti"]["values"]) + "   (k = 0..)")
        lines.append(_row("hyper_c1", t["hyper_c1"]["values"]) + "   (k = 1..)")
        lines.append(_row("hyper_bc11", t["hyper_bc11"]["values"]) + "   (k = 1..)")
        lines.append(_row("spade", t["spade"]["values"]))
        lines.append(_row("club", t["club"]["values"]))
        lines.append(_row("nk_degree", t["nk_degree"]["values"]) + "   (k = 0..)")
        lines.append(f"ddbar_lemma: {str(t['ddbar_lemma']).lower()}")
        lines.append(f"frolicher_e1: {str(t['frolicher_e1']).lower()}")
        for key in ("hodge", "bc", "aeppli", "delta_bc_dol"):
            lines.extend(_grid(key, t[key]))
    for key, g in (doc.groups or {}).items():
        lines.append(f"{key}: dim {g['dim']}")
        lines.extend(f"  [{s}]" for s in g["generators"])
    for kind, entries in (doc.maps or {}).items():
        for idx, s in entries.items():
            lines.append(f"map {kind}[{idx}]: rank {s['rank']}, ker {s['ker_dim']}, coker {s['coker_dim']}")
            if s["ker_generators"]:
                lines.append("  ker: " + ", ".join(f"[{g}]" for g in s["ker_generators"]))
            if s["coker_generators"]:
                lines.append("  coker: " + ", ".join(f"[{g}]" for g in s["coker_generators"]))
    for c in doc.checks or []:
        tag = "PASS" if c["passed"] else "FAIL"
        kind = "" if c["structural"] else " (informational)"
        lines.append(f"{tag} {c['name']}{kind}: {c['detail']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _emit(doc: ResultDocument, fmt: str, out: str | None):
    text = doc.to_json() if fmt == "json" else render_table(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    m = load_model(args.model)
    doc = build_document(m, args, thread_count())
    _emit(doc, args.format, args.output)
    return 0


def cmd_invariants(args) -> int:
    m = load_model(args.model)
    r = consistency_report(m, thread_count())
    doc = ResultDocument(model=_model_block(m), tables=_tables_block(r))
    _emit(doc, args.format, args.output)
    return 0


def cmd_check(args) -> int:
    m = load_model(args.model)
    val = validate_model(m)
    if not val.ok:
        for name, detail in val.failures():
            print(f"FAIL {name}: {detail}")
        return 1
    r = consistency_report(m, thread_count())
    for c in r.checks:
        tag = "PASS" if c.passed else "FAIL"
        kind = "" if c.structural else " (informational)"
        print(f"{tag} {c.name}{kind}: {c.detail}")
    print(f"verdict ddbar-lemma: {str(r.ddbar_lemma).lower()}")
    failed = r.failed(structural_only=True)
    if failed:
        print("failed structural checks: " + ", ".join(c.name for c in failed))
        return 1
    return 0


def cmd_diamond(args) -> int:
    doc = load_json(args.input)
    kind = detect_kind(doc)
    mode = args.mode or {"hodge_diamond": "kahler", "surface": "surface"}.get(kind)
    if mode == "kahler":
        if kind != "hodge_diamond":
            raise SchemaError("kahler mode needs a hodge_diamond document")
        T = kahler_tables(diamond_from_json(doc))
        block = {
            "mode": "kahler",
            "tables": tables_to_json(T, doc.get("name")),
            "spade": vector_json(T.spade(), 1),
            "club": vector_json(T.club(), 1),
        }
    elif mode == "surface":
        if kind != "surface":
            raise SchemaError("surface mode needs a surface document")
        block = {"mode": "surface", "spade": vector_json(list(surface_invariants(surface_from_json(doc))), 1)}
    else:
        raise SchemaError(f"no diamond mode for a {kind} document")
    res = ResultDocument(diamond=block)
    if args.format == "json":
        sys.stdout.write(res.to_json())
    else:
        sys.stdout.write(_row("spade", block["spade"]["values"]) + "\n")
        if "club" in block:
            sys.stdout.write(_row("club", block["club"]["values"]) + "\n")
    return 0


def cmd_blowup(args) -> int:
    if args.codim < 2:
        raise UsageError("codimension ≥ 2 required")
    X = load_tables(args.base)
    Z = load_tables(args.center)
    if args.all:
        blowup_predict(X, Z, args.codim)  # raises on holes before anything is printed
    rep = invariance_check(X, Z, args.codim)
    full = blowup_predict(X, Z, args.codim) if args.all else rep.predicted
    block = {
        "codim": args.codim,
        "predicted": tables_to_json(full),
        "spade": {"base": rep.spade_before, "blowup": rep.spade_after},
        "club": {"base": rep.club_before, "blowup": rep.club_after},
        "betti_gain": vector_json(rep.betti_gain, 0),
        "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in rep.checks],
        "verdict": rep.passed,
    }
    res = ResultDocument(blowup=block)
    if args.format == "json":
        sys.stdout.write(res.to_json())
    else:
        sys.stdout.write(_row("spade base", rep.spade_before) + "\n")
        sys.stdout.write(_row("spade blowup", rep.spade_after) + "\n")
        sys.stdout.write(_row("club base", rep.club_before) + "\n")
        sys.stdout.write(_row("club blowup", rep.club_after) + "\n")
        sys.stdout.write(_row("betti gain", rep.betti_gain) + "\n")
        for n, p, d in rep.checks:
            sys.stdout.write(f"{'PASS' if p else 'FAIL'} {n}: {d}\n")
        sys.stdout.write(f"verdict: {'pass' if rep.passed else 'fail'}\n")
    return 0 if rep.passed else 1


def cmd_models(args) -> int:
    if args.action == "list":
        for name in corpus.names():
            print(name)
        return 0
    if not args.name:
        raise UsageError("models show needs a NAME")
    try:
        sys.stdout.write(corpus.source(args.name))
    except corpus.UnknownCorpusEntry as e:
        raise UsageError(str(e)) from None
    return 0


def _ints(n):
    return {"nargs": n, "type": int, "action": "append"}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bcwb", description="Bott–Chern hypercohomology workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("json", "table"), default="json")

    c = sub.add_parser("compute", help="cohomology tables, maps and checks for a model")
    c.add_argument("model", help="path to a .lie file or corpus:NAME")
    fmt(c)
    c.add_argument("--bc", metavar=("P", "Q"), **_ints(2), help="Bott–Chern group H^{P,Q}_BC")
    c.add_argument("--hyper", metavar=("K", "P", "Q"), **_ints(3), help="H^K_BC(C(P,Q))")
    c.add_argument("--trunc", metavar=("K", "P"), **_ints(2), help="hypercohomology of C(P) in degree K")
    c.add_argument("--maps", choices=("C", "I"), action="append", help="comparison maps to include")
    c.add_argument("-o", "--output", help="write to a file instead of stdout")
    c.set_defaults(func=cmd_compute)

    i = sub.add_parser("invariants", help="numerical invariants only")
    i.add_argument("model")
    fmt(i)
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_invariants)

    k = sub.add_parser("check", help="run the consistency suite")
    k.add_argument("model")
    k.set_defaults(func=cmd_check)

    d = sub.add_parser("diamond", help="Kähler- or surface-mode closed forms")
    d.add_argument("input", help="JSON file or corpus:NAME")
    d.add_argument("--mode", choices=("kahler", "surface"))
    fmt(d)
    d.set_defaults(func=cmd_diamond)

    b = sub.add_parser("blowup", help="blow-up prediction and invariance verdicts")
    b.add_argument("base", help="tables: JSON, .lie, corpus:NAME or 'point'")
    b.add_argument("center", help="tables of the center, same forms as base")
    b.add_argument("--codim", type=int, required=True)
    b.add_argument("--all", action="store_true", help="predict every table of the base, not only (1,1)")
    fmt(b)
    b.set_defaults(func=cmd_blowup)

    m = sub.add_parser("models", help="list or show bundled models")
    m.add_argument("action", choices=("list", "show"))
    m.add_argument("name", nargs="?")
    m.set_defaults(func=cmd_models)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ModelError, SchemaError, TableError, AsymmetricDiamond, MissingTableEntry) as e:
        print(f"bcwb: error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:  # e.g. bad BCWB_THREADS
        print(f"bcwb: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
