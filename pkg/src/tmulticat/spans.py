"""T-spans ``T(R) <- A -> S``, their composition and the coherence cells.

A span stores its left leg elementwise: ``dom[a]`` is a T-term over ``R``.
Composition uses the chosen pullback, so composite apex elements are
``Pair(u, b)`` with ``u`` a T-term over the first span's apex.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import MalformedError
from .finset import FiniteMap, FiniteSet, Pair, identity
from .monads import MonadPlugin

__all__ = [
    "TSpan", "SpanTwoCell", "identity_span", "compose_spans", "identity_cell",
    "vertical_compose", "horizontal_compose", "canonical_iso", "random_span",
    "random_cell",
]


@dataclass(frozen=True, eq=False)
class TSpan:
    plugin: MonadPlugin
    source: FiniteSet
    target: FiniteSet
    apex: FiniteSet
    dom: dict
    cod: FiniteMap

    def __post_init__(self):
        if set(self.dom) != set(self.apex.elements):
            raise MalformedError("dom must be total on the apex")
        for a, t in self.dom.items():
            self.plugin.check_over(t, self.source)
        if self.cod.source != self.apex or self.cod.target != self.target:
            raise MalformedError("cod must map the apex into the target")

    def __eq__(self, other):
        return (isinstance(other, TSpan) and self.plugin == other.plugin
                and self.source == other.source and self.target == other.target
                and self.apex == other.apex and self.dom == other.dom
                and self.cod == other.cod)

    __hash__ = None

    def __repr__(self):
        return f"TSpan({self.plugin.name}, |A|={len(self.apex)})"


@dataclass(frozen=True, eq=False)
class SpanTwoCell:
    source: TSpan
    target: TSpan
    map: FiniteMap

    def __post_init__(self):
        s, t = self.source, self.target
        if s.source != t.source or s.target != t.target or s.plugin != t.plugin:
            raise MalformedError("2-cells need parallel spans")
        if self.map.source != s.apex or self.map.target != t.apex:
            raise MalformedError("2-cell map must go between the apexes")
        for a in s.apex:
            b = self.map(a)
            if t.dom[b] != s.dom[a] or t.cod(b) != s.cod(a):
                raise MalformedError(f"2-cell does not commute with the legs at {a}")

    def __eq__(self, other):
        return (isinstance(other, SpanTwoCell) and self.source == other.source
                and self.target == other.target and self.map == other.map)

    __hash__ = None


def identity_span(plugin: MonadPlugin, s: FiniteSet) -> TSpan:
    return TSpan(plugin, s, s, s, {x: plugin.unit(x) for x in s}, identity(s))


def compose_spans(b: TSpan, a: TSpan):
    """Composite ``b . a`` (first ``a: R -> S``, then ``b: S -> T``).

    Returns ``(span, left_projection, right_projection)`` where the left
    projection records the T-term over ``a``'s apex and the right one the
    arrow of ``b``.
    """
    if a.plugin != b.plugin:
        raise MalformedError("spans use different monads")
    if a.target != b.source:
        raise MalformedError("span endpoints do not match")
    plugin = a.plugin
    apex = []
    for y in b.apex:
        for u in plugin.enumerate_fiber(a.cod, b.dom[y]):
            apex.append(Pair(u, y))
    apex = FiniteSet(apex)
    dom = {p: plugin.mult(plugin.apply(a.dom.__getitem__, p.fst)) for p in apex}
    cod = FiniteMap(apex, b.target, {p: b.cod(p.snd) for p in apex})
    span = TSpan(plugin, a.source, b.target, apex, dom, cod)
    left = {p: p.fst for p in apex}
    right = FiniteMap(apex, b.apex, {p: p.snd for p in apex})
    return span, left, right


def _compose(b, a):
    return compose_spans(b, a)[0]


def identity_cell(s: TSpan) -> SpanTwoCell:
    return SpanTwoCell(s, s, identity(s.apex))


def vertical_compose(g: SpanTwoCell, f: SpanTwoCell) -> SpanTwoCell:
    """``g . f`` for ``f: X => Y`` and ``g: Y => Z``."""
    if f.target != g.source:
        raise MalformedError("2-cells are not vertically composable")
    return SpanTwoCell(f.source, g.target,
                       FiniteMap(f.source.apex, g.target.apex,
                                 {x: g.map(f.map(x)) for x in f.source.apex}))


def horizontal_compose(f: SpanTwoCell, g: SpanTwoCell) -> SpanTwoCell:
    """The induced cell between composites, for ``f`` on the first (inner)
    spans and ``g`` on the second (outer) spans."""
    if f.source.target != g.source.source:
        raise MalformedError("2-cells are not horizontally composable")
    plugin = f.source.plugin
    src = _compose(g.source, f.source)
    tgt = _compose(g.target, f.target)
    table = {p: Pair(plugin.apply(f.map, p.fst), g.map(p.snd)) for p in src.apex}
    return SpanTwoCell(src, tgt, FiniteMap(src.apex, tgt.apex, table))


def canonical_iso(kind: str, *spans: TSpan) -> SpanTwoCell:
    """Invertible coherence cells.

    ``associator(c, b, a)``: ``c.(b.a) => (c.b).a``.
    ``left_unitor(a)``: ``id.a => a``.  ``right_unitor(a)``: ``a.id => a``.
    """
    if kind == "associator":
        c, b, a = spans
        plugin = a.plugin
        src = _compose(c, _compose(b, a))
        tgt = _compose(_compose(c, b), a)
        table = {}
        for p in src.apex:
            w, z = p.fst, p.snd
            # w is a T-term over pairs (u, y) with u a T-term over a's apex.
            outer = plugin.apply(lambda q: q.snd, w)
            inner = plugin.mult(plugin.apply(lambda q: q.fst, w))
            table[p] = Pair(inner, Pair(outer, z))
        m = FiniteMap(src.apex, tgt.apex, table)
    elif kind == "left_unitor":
        (a,) = spans
        src = _compose(identity_span(a.plugin, a.target), a)
        m = FiniteMap(src.apex, a.apex, {p: a.plugin.labels(p.fst)[0] for p in src.apex})
        tgt = a
    elif kind == "right_unitor":
        (a,) = spans
        src = _compose(a, identity_span(a.plugin, a.source))
        m = FiniteMap(src.apex, a.apex, {p: p.snd for p in src.apex})
        tgt = a
    else:
        raise ValueError(f"unknown coherence cell {kind!r}")
    if not m.is_bijective():
        raise MalformedError(f"{kind} is not a bijection; composition is broken")
    return SpanTwoCell(src, tgt, m)


def inverse_cell(cell: SpanTwoCell) -> SpanTwoCell:
    return SpanTwoCell(cell.target, cell.source, cell.map.inverse())


# -- random instances for coherence tests ---------------------------------

def random_span(plugin: MonadPlugin, r: FiniteSet, s: FiniteSet, rng: random.Random,
                max_apex=3, bound=2, prefix="a") -> TSpan:
    terms = plugin.enumerate_telements(r, bound)
    n = rng.randint(0, max_apex) if len(s) else 0
    if not terms:
        n = 0
    apex = FiniteSet.range(n, prefix)
    dom = {x: rng.choice(terms) for x in apex}
    cod = FiniteMap(apex, s, {x: rng.choice(s.elements) for x in apex})
    return TSpan(plugin, r, s, apex, dom, cod)


def random_cell(target: TSpan, rng: random.Random, max_apex=3, prefix="c") -> SpanTwoCell:
    """A random 2-cell into ``target``: legs are pulled back along a random
    apex map, so commutation holds by construction."""
    n = rng.randint(0, max_apex) if len(target.apex) else 0
    apex = FiniteSet.range(n, prefix)
    m = {x: rng.choice(target.apex.elements) for x in apex}
    src = TSpan(target.plugin, target.source, target.target, apex,
                {x: target.dom[m[x]] for x in apex},
                FiniteMap(apex, target.target, {x: target.cod(m[x]) for x in apex}))
    return SpanTwoCell(src, target, FiniteMap(apex, target.apex, m))
