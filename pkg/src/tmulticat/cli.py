"""Command line: ``tmulticat <command> [options]``.

Every command prints one JSON report (sorted keys) on stdout, except
``export --format dot``.  Exit status: 0 all checks pass, 1 a check failed,
2 bad input, 3 an enumeration guard tripped.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter

from . import documents as docs
from .algebras import (
    algebra_operad_correspondence, check_algebra, enumerate_algebras, endomorphism_operad,
    slice_multicat,
)
from .errors import DEFAULT_CAP, GuardError, MalformedError
from .finset import Element, FiniteMap, FiniteSet, Pair, Seq, Tag, TreeNode, Verdict
from .free import free_multicat, free_terms_for, opetope_enumerate, opetope_size
from .monads import (
    Exceptions, FreeMonoid, MonadPlugin, Writer, check_cartesian, check_monad_laws,
    check_pullback_preservation, pullback_battery,
)
from .multicat import check_axioms, check_map
from .spans import canonical_iso, compose_spans
from .transport import (
    exceptions_to_words, free_structured, identity_trans, monad_data, recover_multicat,
    table_trans, transport_by_composition, transport_by_pullback, tree_to_leaves,
    unit_embedding, writer_inclusion,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


def plain(x):
    """Render kernel values (elements, sets, maps, witnesses) as JSON data."""
    if isinstance(x, Element):
        return docs.encode(x)
    if isinstance(x, FiniteSet):
        return docs.encode_set(x)
    if isinstance(x, FiniteMap):
        return docs.encode_map(x)
    if isinstance(x, Verdict):
        return {"ok": x.ok, "witness": plain(x.witness)}
    if isinstance(x, dict):
        if all(isinstance(k, str) for k in x):
            return {k: plain(v) for k, v in x.items()}
        return [[plain(k), plain(v)] for k, v in sorted(x.items(), key=lambda kv: repr(plain(kv[0])))]
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


# -- input helpers -------------------------------------------------------------

def _read(args) -> dict:
    if args.input is None:
        raise MalformedError("this command needs --input (a path, or - for stdin)")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise MalformedError(f"cannot read {args.input}: {e.strerror}") from None
    doc = docs.load_document(text)
    if not isinstance(doc, dict):
        raise MalformedError("a document is a JSON object")
    return doc


def _plugin(doc: dict) -> MonadPlugin:
    if "monad" not in doc:
        raise MalformedError("document is missing 'monad'")
    return docs.decode_monad(doc["monad"])


def _multicat(doc: dict, key: str = "multicategory"):
    if key not in doc:
        raise MalformedError(f"document is missing {key!r}")
    return docs.decode_multicat(doc[key], docs.decode_monad(doc["monad"]) if "monad" in doc else None)


def _verdict(report: dict, name: str, v) -> bool:
    ok = bool(v.ok)
    report["checks"][name] = ok
    if not ok and "witness" not in report:
        report["witness"] = {"check": name, "detail": plain(v.witness)}
    return ok


def _axiom_summary(rep) -> dict:
    return {"ok": rep.ok, "checked": plain(rep.checked), "truncated": rep.truncated, "bound": rep.bound}


# -- commands ------------------------------------------------------------------------

def cmd_check_monad(args, report):
    if args.name is not None:
        params = {}
        if args.E is not None:
            params["E"] = docs.load_document(args.E)
        if args.table is not None:
            params["table"] = docs.load_document(args.table)
        plugin = docs.decode_monad({"name": args.name, **params})
    else:
        plugin = _plugin(_read(args))
    report["monad"] = docs.encode_monad(plugin)
    report["bounds"] = {"size": args.bound, "carrier": args.carrier}
    xs = FiniteSet.range(args.carrier)
    plugin.enumerate_telements(xs, args.bound, cap=args.cap)
    laws = check_monad_laws(plugin, xs, args.bound)
    report["checks"]["laws"] = laws.ok
    report["counts"]["laws"] = plain(laws.checked)
    if not laws.ok:
        report["witness"] = {"check": "laws", "detail": plain(laws.failures[0])}
    bound = max(args.bound, 2)
    squares = {}
    for n in range(args.carrier + 1):
        rep = check_cartesian(plugin, FiniteSet.range(n), bound, battery=[])
        squares[str(n)] = rep.ok
        if not rep.ok and "witness" not in report:
            name = next(iter(rep.witnesses))
            report["witness"] = {"check": f"cartesian.{name}", "detail": plain(rep.witnesses[name])}
    report["checks"]["cartesian_squares"] = all(squares.values())
    report["counts"]["squares_by_carrier"] = squares
    battery = pullback_battery()
    report["counts"]["pullback_battery"] = len(battery)
    for f, g in battery:
        v = check_pullback_preservation(plugin, f, g, bound)
        if not v:
            report["checks"]["pullback_preservation"] = False
            if "witness" not in report:
                report["witness"] = {"check": "pullback_preservation",
                                     "detail": {"f": plain(f), "g": plain(g), "detail": plain(v.witness)}}
            break
    else:
        report["checks"]["pullback_preservation"] = True


def cmd_check_multicat(args, report):
    m = _multicat(_read(args))
    rep = check_axioms(m)
    report["counts"] = {"objects": len(m.objects), "arrows": len(m.arrows), "comp": len(m.comp)}
    report["axioms"] = _axiom_summary(rep)
    report["checks"]["axioms"] = rep.ok
    if not rep.ok:
        report["witness"] = {"check": "axioms", "detail": plain(rep.witness)}


def cmd_check_map(args, report):
    doc = _read(args)
    m, m2 = _multicat(doc, "source"), _multicat(doc, "target")
    f = docs.decode_map_doc(doc.get("map"), m, m2)
    _verdict(report, "map", check_map(f, m, m2))


def cmd_check_algebra(args, report):
    doc = _read(args)
    m = _multicat(doc)
    alg = docs.decode_algebra(doc.get("algebra"), m)
    report["counts"] = {"carrier": len(alg.carrier.X), "blob": len(alg.h.source)}
    _verdict(report, "algebra", check_algebra(m, alg))


def cmd_compose_spans(args, report):
    doc = _read(args)
    plugin = _plugin(doc)
    raw = doc.get("spans")
    if not isinstance(raw, list) or not raw:
        raise MalformedError("'spans' must be a non-empty list, first span first")
    spans = [docs.decode_span(s, plugin) for s in raw]
    total = spans[0]
    for s in spans[1:]:
        total = compose_spans(s, total)[0]
    report["composite"] = docs.encode_span(total)
    report["counts"] = {"apex": len(total.apex)}
    if len(spans) == 3:
        a, b, c = spans
        canonical_iso("associator", c, b, a)
        report["checks"]["associator_bijective"] = True


def cmd_free(args, report):
    doc = _read(args)
    plugin = _plugin(doc)
    g = docs.decode_graph(doc.get("graph"), plugin)
    report["bounds"] = {"depth": args.depth, "size": args.size}
    free_terms_for(g).enumerate_terms(g.source, g.apex, args.size, args.depth, cap=args.cap)
    ft, fm = free_multicat(g, args.depth, args.size)
    by_size = Counter(ft.size(a) for a in fm.arrows)
    report["counts"] = {"arrows": len(fm.arrows), "by_size": {str(k): by_size[k] for k in sorted(by_size)}}
    if args.list:
        report["arrows"] = docs.encode_set(fm.arrows)
    rep = check_axioms(fm)
    report["axioms"] = _axiom_summary(rep)
    report["checks"]["axioms"] = rep.ok


def cmd_opetopes(args, report):
    from .free import opetope_plugin
    if args.dim < 0 or args.size < 0:
        raise MalformedError("dimension and size must be natural numbers")
    report["bounds"] = {"dim": args.dim, "size": args.size, "size_measure": "weighted node count"}
    if args.dim >= 2:
        # Dry run with the cap before the cached enumeration.
        from .free import _opetopes
        plugin = opetope_plugin(args.dim - 1)
        plugin.enumerate_terms(_opetopes(args.dim - 2, args.size),
                               _opetopes(args.dim - 1, max(args.size - 1, 0)) if args.size else (),
                               budget=args.size, ident_cost=opetope_size, gen_cost=opetope_size,
                               cap=args.cap)
    ops = opetope_enumerate(args.dim, args.size)
    by_size = Counter(opetope_size(o) for o in ops)
    report["counts"] = {"opetopes": len(ops), "by_size": {str(k): by_size[k] for k in sorted(by_size)}}
    if args.list:
        report["opetopes"] = [docs.encode(o) for o in ops]


def cmd_algebras(args, report):
    m = _multicat(_read(args))
    report["bounds"] = {"max_carrier": args.max_carrier}
    algs = enumerate_algebras(m, args.max_carrier, cap=args.cap)
    by_size = Counter(len(a.carrier.X) for a in algs)
    report["counts"] = {"algebras": len(algs),
                        "by_carrier": {str(n): by_size[n] for n in range(args.max_carrier + 1)}}
    if args.list:
        report["algebras"] = [docs.encode_algebra(a) for a in algs]


def cmd_endo(args, report):
    xs = FiniteSet.range(args.carrier)
    report["bounds"] = {"carrier": args.carrier, "arity": args.arity}
    end = endomorphism_operad(xs, args.arity, cap=args.cap)
    by_arity = Counter(len(end.dom[a]) for a in end.arrows)
    report["counts"] = {"arrows": len(end.arrows),
                        "by_arity": {str(n): by_arity[n] for n in range(args.arity + 1)}}
    if args.input is not None:
        a_op = _multicat(_read(args))
        arity = max([args.arity] + [a_op.plugin.size(a_op.dom[a]) for a in a_op.arrows])
        corr = algebra_operad_correspondence(a_op, xs, arity)
        report["counts"]["algebras"] = len(corr.algebras)
        report["counts"]["maps"] = len(corr.maps)
        report["checks"]["correspondence"] = corr.ok
        if not corr.ok:
            report["witness"] = {"check": "correspondence", "detail": plain(corr.witness)}


def cmd_slice(args, report):
    doc = _read(args)
    m = _multicat(doc)
    alg = docs.decode_algebra(doc.get("algebra"), m)
    v = check_algebra(m, alg)
    if not _verdict(report, "algebra", v):
        return
    s = slice_multicat(m, alg)
    rep = check_axioms(s)
    report["checks"]["axioms"] = rep.ok
    report["axioms"] = _axiom_summary(rep)
    report["counts"] = {"objects": len(s.objects), "arrows": len(s.arrows)}
    report["multicategory"] = docs.encode_multicat(s)


def _transformation(d) -> object:
    if not isinstance(d, dict) or "name" not in d:
        raise MalformedError("transformation needs a name")
    name = d["name"]
    if name == "identity":
        return identity_trans(docs.decode_monad(d.get("monad")))
    if name == "unit_embedding":
        return unit_embedding(docs.decode_monad(d.get("target")))
    if name == "tree_to_leaves":
        return tree_to_leaves()
    if name == "exceptions_to_words":
        p = docs.decode_monad(d.get("source"))
        if not isinstance(p, Exceptions):
            raise MalformedError("exceptions_to_words starts at an exceptions monad")
        return exceptions_to_words(p)
    if name == "writer_inclusion":
        sub, big = docs.decode_monad(d.get("source")), docs.decode_monad(d.get("target"))
        if not isinstance(sub, Writer) or not isinstance(big, Writer):
            raise MalformedError("writer_inclusion relates two writer monads")
        emb = d.get("embedding")
        if not isinstance(emb, list) or len(emb) != len(sub.M):
            raise MalformedError("embedding must list an image for each monoid element")
        return writer_inclusion(sub, big, emb)
    if name == "table":
        src, tgt = docs.decode_monad(d.get("source")), docs.decode_monad(d.get("target"))
        rows = d.get("table")
        if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != 2 for r in rows):
            raise MalformedError("table must be a list of [shape, shape] rows")
        return table_trans(src, tgt, {docs.decode(a): docs.decode(b) for a, b in rows})
    raise MalformedError(f"unknown transformation {name!r}")


def cmd_transport(args, report):
    doc = _read(args)
    m = _multicat(doc)
    phi = _transformation(doc.get("transformation"))
    report["bounds"] = {"direction": args.direction, "size": args.bound}
    if args.direction == "compose":
        out = transport_by_composition(phi, m)
    else:
        out = transport_by_pullback(phi, m, args.bound)
    rep = check_axioms(out)
    report["checks"]["axioms"] = rep.ok
    report["axioms"] = _axiom_summary(rep)
    report["counts"] = {"objects": len(out.objects), "arrows": len(out.arrows)}
    report["multicategory"] = docs.encode_multicat(out)


def _object_term(text: str, m, plugin):
    try:
        n = int(text)
    except ValueError:
        return docs.decode(docs.load_document(text))
    if not isinstance(plugin, FreeMonoid) or len(m.objects) != 1:
        raise MalformedError("integer objects need a one-object free monoid multicategory")
    return Seq((m.objects.elements[0],) * n)


def cmd_structured(args, report):
    m = _multicat(_read(args))
    p = m.plugin
    homs = [_object_term(h, m, p) for h in args.hom] if args.hom else []
    size = args.size if args.size is not None else max([p.size(h) for h in homs] + [1])
    report["bounds"] = {"size": size}
    p.enumerate_telements(m.arrows, size, cap=args.cap)
    b = free_structured(m, size)
    report["counts"] = {"objects": len(b.objects), "arrows": len(b.arrows)}
    if homs:
        x, y = homs
        for t in homs:
            if t not in b.objects:
                raise MalformedError(f"{t} is not an object within the size bound")
        report["counts"]["hom"] = len(b.hom(x, y))
    if args.check:
        _verdict(report, "structured", b.check())


def cmd_recover(args, report):
    m = _multicat(_read(args))
    back = recover_multicat(monad_data(m))
    report["counts"] = {"objects": len(m.objects), "arrows": len(m.arrows)}
    report["checks"]["round_trip"] = back == m
    if back != m:
        report["witness"] = {"check": "round_trip", "detail": "recovered multicategory differs"}


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _term_label(x: Element) -> str:
    import json
    return json.dumps(docs.encode(x), sort_keys=True)


def dot_multicat(m) -> str:
    lines = ["digraph multicategory {", "  rankdir=LR;"]
    for s in m.objects:
        lines.append(f'  "o:{_dot_escape(_term_label(s))}" [shape=ellipse, label="{_dot_escape(_term_label(s))}"];')
    for a in m.arrows:
        name = _dot_escape(_term_label(a))
        lines.append(f'  "a:{name}" [shape=box, label="{name}"];')
        for i, s in enumerate(m.plugin.labels(m.dom[a])):
            lines.append(f'  "o:{_dot_escape(_term_label(s))}" -> "a:{name}" [label="{i}"];')
        lines.append(f'  "a:{name}" -> "o:{_dot_escape(_term_label(m.cod(a)))}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_tree(t: Element) -> str:
    """Tree shape of a term: one vertex per subterm, numbered in preorder."""
    lines = ["digraph term {"]
    counter = [0]

    def go(x) -> int:
        i = counter[0]
        counter[0] += 1
        if isinstance(x, TreeNode):
            label, kids = _term_label(x.label), list(x.children)
        elif isinstance(x, Tag):
            label, kids = x.label, [x.value]
        elif isinstance(x, Pair):
            label, kids = "pair", [x.fst, x.snd]
        elif isinstance(x, Seq):
            label, kids = "seq", list(x.items)
        else:
            label, kids = _term_label(x), []
        lines.append(f'  n{i} [label="{_dot_escape(label)}"];')
        for k in kids:
            j = go(k)
            lines.append(f"  n{i} -> n{j};")
        return i

    go(t)
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export(args, report):
    doc = _read(args)
    if "multicategory" in doc:
        m = _multicat(doc)
        if args.format == "dot":
            return dot_multicat(m)
        report["document"] = {"multicategory": docs.encode_multicat(m)}
    elif "term" in doc:
        t = docs.decode(doc["term"])
        if args.format == "dot":
            return dot_tree(t)
        report["document"] = {"term": docs.encode(t)}
    else:
        raise MalformedError("export needs a 'multicategory' or a 'term'")
    return None


COMMANDS = {
    "check-monad": cmd_check_monad,
    "check-multicat": cmd_check_multicat,
    "check-map": cmd_check_map,
    "check-algebra": cmd_check_algebra,
    "compose-spans": cmd_compose_spans,
    "free": cmd_free,
    "opetopes": cmd_opetopes,
    "algebras": cmd_algebras,
    "endo": cmd_endo,
    "slice": cmd_slice,
    "transport": cmd_transport,
    "structured": cmd_structured,
    "recover": cmd_recover,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tmulticat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {}
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="document path, or - for stdin")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration guard")
        parsers[name] = sp
    p = parsers["check-monad"]
    p.add_argument("--name")
    p.add_argument("--E", help="JSON list of exceptions")
    p.add_argument("--table", help="JSON multiplication table")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--carrier", type=int, default=2)
    p = parsers["free"]
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--size", type=int)
    p.add_argument("--list", action="store_true")
    p = parsers["opetopes"]
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--list", action="store_true")
    p = parsers["algebras"]
    p.add_argument("--max-carrier", type=int, default=2)
    p.add_argument("--list", action="store_true")
    p = parsers["endo"]
    p.add_argument("--carrier", type=int, default=2)
    p.add_argument("--arity", type=int, default=2)
    p = parsers["transport"]
    p.add_argument("--direction", choices=["compose", "pullback"], default="compose")
    p.add_argument("--bound", type=int, default=3)
    p = parsers["structured"]
    p.add_argument("--size", type=int)
    p.add_argument("--hom", nargs=2, metavar=("SOURCE", "TARGET"))
    p.add_argument("--check", action="store_true")
    p = parsers["export"]
    p.add_argument("--format", choices=["json", "dot"], default="json")
    return parser


def run(argv, stdout=None) -> int:
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    report = {"command": args.command, "checks": {}, "counts": {}, "cap": args.cap}
    text = None
    try:
        text = COMMANDS[args.command](args, report)
        status = EXIT_OK if all(report["checks"].values()) else EXIT_FAIL
    except GuardError as e:
        report["error"] = {"kind": "guard", "message": str(e)}
        status = EXIT_GUARD
    except (MalformedError, ValueError, KeyError, TypeError) as e:
        report["error"] = {"kind": "input", "message": str(e)}
        status = EXIT_INPUT
    if text is not None:
        stdout.write(text)
        return status
    report["ok"] = status == EXIT_OK
    report["exit"] = status
    stdout.write(docs.dumps(report))
    return status


def main(argv=None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
