"""JSON document forms for elements, sets, maps and the kernel's structures.

Element terms are JSON scalars (atoms) or tagged arrays::

    ["pair", x, y]    ["seq", x1, ..., xn]    ["tag", label, x]
    ["node", label, [child, ...]]

Tables whose keys are elements are written as sorted lists of
``[key, value]`` rows, so every document has one canonical rendering.
"""
from __future__ import annotations

import json

from .errors import MalformedError
from .finset import Atom, Element, FiniteMap, FiniteSet, Pair, Seq, Tag, TreeNode
from .monads import MonadPlugin, make_plugin
from .multicat import FiniteCategory, Multicategory, MulticategoryMap, terminal_multicat
from .spans import TSpan
from .algebras import Algebra, SliceObject

__all__ = [
    "encode", "decode", "encode_set", "decode_set", "encode_map", "decode_map",
    "encode_monad", "decode_monad", "encode_multicat", "decode_multicat",
    "encode_span", "decode_span", "encode_graph", "decode_graph", "encode_algebra", "decode_algebra",
    "decode_category", "decode_map_doc", "dumps", "load_document",
]


def encode(x: Element):
    if isinstance(x, Atom):
        return x.name
    if isinstance(x, Pair):
        return ["pair", encode(x.fst), encode(x.snd)]
    if isinstance(x, Seq):
        return ["seq"] + [encode(v) for v in x.items]
    if isinstance(x, Tag):
        return ["tag", x.label, encode(x.value)]
    if isinstance(x, TreeNode):
        return ["node", encode(x.label), [encode(c) for c in x.children]]
    raise MalformedError(f"cannot encode {x!r}")


def decode(d) -> Element:
    if isinstance(d, bool) or d is None:
        raise MalformedError(f"{d!r} is not an element term")
    if isinstance(d, (int, str)):
        return Atom(d)
    if not isinstance(d, list) or not d or not isinstance(d[0], str):
        raise MalformedError(f"{d!r} is not an element term")
    head, rest = d[0], d[1:]
    if head == "pair" and len(rest) == 2:
        return Pair(decode(rest[0]), decode(rest[1]))
    if head == "seq":
        return Seq(decode(v) for v in rest)
    if head == "tag" and len(rest) == 2 and isinstance(rest[0], str):
        return Tag(rest[0], decode(rest[1]))
    if head == "node" and len(rest) == 2 and isinstance(rest[1], list):
        return TreeNode(decode(rest[0]), [decode(c) for c in rest[1]])
    raise MalformedError(f"{d!r} is not an element term")


def encode_set(s: FiniteSet) -> list:
    return [encode(x) for x in s]


def decode_set(d) -> FiniteSet:
    if not isinstance(d, list):
        raise MalformedError("a set is written as a list")
    items = [decode(x) for x in d]
    s = FiniteSet(items)
    if len(s) != len(items):
        raise MalformedError("set lists repeated elements")
    return s


def _rows(table: dict) -> list:
    return [[encode(k), encode(v)] for k, v in sorted(table.items(), key=lambda kv: kv[0].key())]


def _table(d, what: str) -> dict:
    if not isinstance(d, list) or any(not isinstance(r, list) or len(r) != 2 for r in d):
        raise MalformedError(f"{what} must be a list of [key, value] rows")
    out = {}
    for k, v in d:
        k = decode(k)
        if k in out:
            raise MalformedError(f"{what} lists {k} twice")
        out[k] = decode(v)
    return out


def encode_map(f: FiniteMap) -> list:
    return _rows(dict(f.items()))


def decode_map(d, source: FiniteSet, target: FiniteSet, what: str = "map") -> FiniteMap:
    table = _table(d, what)
    if set(table) != set(source.elements):
        raise MalformedError(f"{what} is not total on its source")
    return FiniteMap(source, target, table)


def _field(doc: dict, key: str, what: str):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedError(f"{what} is missing {key!r}")
    return doc[key]


# -- monads -----------------------------------------------------------------------

def encode_monad(p: MonadPlugin) -> dict:
    out = {"name": p.name}
    for k, v in p.params().items():
        out[k] = [encode(e) for e in v] if k == "E" else v
    return out


def decode_monad(d) -> MonadPlugin:
    if isinstance(d, str):
        d = {"name": d}
    name = _field(d, "name", "monad")
    params = {}
    if "E" in d:
        params["E"] = [decode(e) for e in d["E"]]
    if "table" in d:
        t = d["table"]
        if not isinstance(t, list) or any(not isinstance(r, list) for r in t):
            raise MalformedError("writer table must be a list of rows")
        if any(isinstance(v, bool) or not isinstance(v, int) for r in t for v in r):
            raise MalformedError("writer table entries must be integers")
        params["table"] = t
    return make_plugin(name, **params)


# -- multicategories ----------------------------------------------------------------

def encode_multicat(m: Multicategory) -> dict:
    comp = [[encode(k.fst), encode(k.snd), encode(c)] for k, c in m.comp_items()]
    return {
        "monad": encode_monad(m.plugin),
        "objects": encode_set(m.objects),
        "arrows": encode_set(m.arrows),
        "dom": _rows(m.dom),
        "cod": encode_map(m.cod),
        "ids": encode_map(m.ids),
        "comp": comp,
        "bound": m.bound,
    }


def decode_multicat(d, plugin: MonadPlugin | None = None) -> Multicategory:
    """Accepts the full form, ``{"terminal": n}`` or ``{"category": ...}``."""
    if not isinstance(d, dict):
        raise MalformedError("a multicategory is a JSON object")
    if "monad" in d:
        plugin = decode_monad(d["monad"])
    if plugin is None:
        raise MalformedError("multicategory needs a monad")
    if "terminal" in d:
        n = d["terminal"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise MalformedError("terminal arity bound must be a natural number")
        return terminal_multicat(plugin, n)
    if "category" in d:
        from .multicat import from_category
        if plugin.name != "identity":
            raise MalformedError("category documents use the identity monad")
        return from_category(decode_category(d["category"]))
    objects = decode_set(_field(d, "objects", "multicategory"))
    arrows = decode_set(_field(d, "arrows", "multicategory"))
    dom = _table(_field(d, "dom", "multicategory"), "dom")
    if set(dom) != set(arrows.elements):
        raise MalformedError("dom is not total on the arrows")
    cod = decode_map(_field(d, "cod", "multicategory"), arrows, objects, "cod")
    ids = decode_map(_field(d, "ids", "multicategory"), objects, arrows, "ids")
    rows = d.get("comp", [])
    if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != 3 for r in rows):
        raise MalformedError("comp must be a list of [u, a, composite] rows")
    comp = {}
    for u, a, c in rows:
        key = Pair(decode(u), decode(a))
        if key in comp:
            raise MalformedError(f"comp lists {key} twice")
        comp[key] = decode(c)
    bound = d.get("bound")
    if bound is not None and (isinstance(bound, bool) or not isinstance(bound, int)):
        raise MalformedError("bound must be an integer or null")
    return Multicategory(plugin, objects, arrows, dom, cod, ids, comp, bound)


def decode_category(d) -> FiniteCategory:
    """``{"objects": [...], "arrows": {f: [src, tgt]}, "ids": {x: f},
    "comp": [[g, f, g.f], ...]}`` with names as strings or integers."""
    objects = _field(d, "objects", "category")
    arrows = _field(d, "arrows", "category")
    ids = _field(d, "ids", "category")
    comp = _field(d, "comp", "category")
    if not isinstance(objects, list) or not isinstance(arrows, dict) or not isinstance(ids, dict):
        raise MalformedError("category fields have the wrong types")
    names = set(objects)
    for f, st in arrows.items():
        if not isinstance(st, list) or len(st) != 2 or not set(st) <= names:
            raise MalformedError(f"arrow {f} has bad endpoints")
    if set(ids) != {str(x) for x in objects} or not set(ids.values()) <= set(arrows):
        raise MalformedError("ids must name an arrow for every object")
    if not isinstance(comp, list) or any(not isinstance(r, list) or len(r) != 3 for r in comp):
        raise MalformedError("comp must be a list of [g, f, composite] rows")
    for r in comp:
        if not set(r) <= set(arrows):
            raise MalformedError(f"comp row {r} names unknown arrows")
    by_str = {str(x): x for x in objects}
    return FiniteCategory(list(objects), {f: tuple(st) for f, st in arrows.items()},
                          {by_str[x]: f for x, f in ids.items()},
                          {(g, f): h for g, f, h in comp})


def decode_map_doc(d, m: Multicategory, m2: Multicategory) -> MulticategoryMap:
    objects = decode_map(_field(d, "objects", "map"), m.objects, m2.objects, "object map")
    arrows = decode_map(_field(d, "arrows", "map"), m.arrows, m2.arrows, "arrow map")
    return MulticategoryMap(arrows, objects)


# -- spans and algebras --------------------------------------------------------------

def encode_span(s: TSpan) -> dict:
    return {
        "source": encode_set(s.source), "target": encode_set(s.target),
        "apex": encode_set(s.apex), "dom": _rows(s.dom), "cod": encode_map(s.cod),
    }


def decode_span(d, plugin: MonadPlugin) -> TSpan:
    source = decode_set(_field(d, "source", "span"))
    target = decode_set(_field(d, "target", "span"))
    apex = decode_set(_field(d, "apex", "span"))
    dom = _table(_field(d, "dom", "span"), "dom")
    if set(dom) != set(apex.elements):
        raise MalformedError("span dom is not total on the apex")
    cod = decode_map(_field(d, "cod", "span"), apex, target, "cod")
    return TSpan(plugin, source, target, apex, dom, cod)


def encode_graph(g: TSpan) -> dict:
    return {"objects": encode_set(g.source), "arrows": encode_set(g.apex),
            "dom": _rows(g.dom), "cod": encode_map(g.cod)}


def decode_graph(d, plugin: MonadPlugin) -> TSpan:
    """A graph is a span from the objects to themselves."""
    objects = decode_set(_field(d, "objects", "graph"))
    arrows = decode_set(_field(d, "arrows", "graph"))
    dom = _table(_field(d, "dom", "graph"), "dom")
    if set(dom) != set(arrows.elements):
        raise MalformedError("graph dom is not total on the arrows")
    cod = decode_map(_field(d, "cod", "graph"), arrows, objects, "cod")
    return TSpan(plugin, objects, objects, arrows, dom, cod)


def encode_algebra(a: Algebra) -> dict:
    return {"carrier": encode_set(a.carrier.X), "p": encode_map(a.carrier.p),
            "h": encode_map(a.h)}


def decode_algebra(d, m: Multicategory) -> Algebra:
    from .algebras import blob
    xs = decode_set(_field(d, "carrier", "algebra"))
    p = decode_map(_field(d, "p", "algebra"), xs, m.objects, "p")
    x = SliceObject(xs, p)
    b = blob(m, x)
    h = decode_map(_field(d, "h", "algebra"), b.X_blob, xs, "h")
    return Algebra(x, h)


# -- text ---------------------------------------------------------------------------

def dumps(doc) -> str:
    """Canonical rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_document(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedError(f"not valid JSON: {e}") from None
