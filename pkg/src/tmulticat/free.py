"""Free multicategories as pasting terms, and the opetope tower.

A free arrow is ``Ident(s) = Tag("id", s)`` or ``Node(g, w) =
TreeNode(g, (w,))`` where ``w`` is a base T-term whose labels are free arrows
with codomains spelling out ``dom(g)``.  :class:`FreeTerms` packages the
term calculus (typing, grafting) and is itself a monad plugin whose labels
are the generators, which is how the opetope tower is iterated.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable

from .errors import MalformedError, guard
from .finset import Atom, Element, FiniteMap, FiniteSet, Pair, Tag, TreeNode
from .monads import IdentityMonad, MonadPlugin, unflatten
from .multicat import Multicategory, MulticategoryMap
from .spans import TSpan

__all__ = [
    "FreeTerms", "ident", "node", "is_ident", "free_terms_for", "free_enumerate",
    "free_multicat", "graft", "universal_extension", "O", "ARR",
    "opetope_plugin", "opetope_enumerate", "opetope_size", "opetope_dimension",
    "opetope_dom", "opetope_cod",
]


def ident(s) -> Tag:
    return Tag("id", s)


def node(g, w) -> TreeNode:
    return TreeNode(g, (w,))


def is_ident(t) -> bool:
    return isinstance(t, Tag) and t.label == "id"


def _is_node(t) -> bool:
    return isinstance(t, TreeNode) and len(t.children) == 1


class FreeTerms(MonadPlugin):
    """Pasting terms over a base plugin, with generators typed by
    ``gen_dom(g)`` (a base term over the objects) and ``gen_cod(g)``."""

    name = "free"

    def __init__(self, base: MonadPlugin, gen_dom: Callable, gen_cod: Callable, tag: str = ""):
        self.base = base
        self.gen_dom = gen_dom
        self.gen_cod = gen_cod
        self.tag = tag

    def params(self):
        return {"base": repr(self.base), "tag": self.tag}

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    # -- typing ---------------------------------------------------------------
    def cod_fr(self, t):
        if is_ident(t):
            return t.value
        if _is_node(t):
            return self.gen_cod(t.label)
        raise MalformedError(f"{t} is not a free arrow")

    def dom_fr(self, t):
        b = self.base
        if is_ident(t):
            return b.unit(t.value)
        if _is_node(t):
            return b.mult(b.apply(self.dom_fr, t.children[0]))
        raise MalformedError(f"{t} is not a free arrow")

    def depth(self, t) -> int:
        if is_ident(t):
            return 0
        kids = self.base.labels(t.children[0])
        return 1 + max((self.depth(c) for c in kids), default=0)

    def check_typed(self, t):
        if is_ident(t):
            return
        if not _is_node(t):
            raise MalformedError(f"{t} is not a free arrow")
        w = t.children[0]
        for c in self.base.labels(w):
            self.check_typed(c)
        if self.base.apply(self.cod_fr, w) != self.gen_dom(t.label):
            raise MalformedError(f"children of {t.label} do not match its domain")

    # -- plugin interface -------------------------------------------------------
    def labels(self, t):
        out = []

        def go(s):
            if is_ident(s):
                return
            if not _is_node(s):
                raise MalformedError(f"{s} is not a free arrow")
            out.append(s.label)
            for c in self.base.labels(s.children[0]):
                go(c)

        go(t)
        return tuple(out)

    def fill(self, t, labels):
        it = iter(labels)

        def go(s):
            if is_ident(s):
                return s
            g = next(it)
            w = s.children[0]
            return node(g, self.base.fill(w, [go(c) for c in self.base.labels(w)]))

        out = go(t)
        if next(it, None) is not None:
            raise MalformedError("too many labels for the term")
        return out

    def unit(self, g):
        return node(g, self.base.apply(ident, self.gen_dom(g)))

    def mult(self, tt):
        if is_ident(tt):
            return tt
        if not _is_node(tt):
            raise MalformedError(f"{tt} is not a free arrow")
        w = tt.children[0]
        return self.graft(tt.label, self.base.apply(self.mult, w))

    def size(self, t):
        if is_ident(t):
            return 0
        return 1 + sum(self.size(c) for c in self.base.labels(t.children[0]))

    def graft(self, outer, children):
        """Substitute ``children`` (a base term of free arrows) into the
        inputs of ``outer``; identities are absorbed."""
        b = self.base
        if is_ident(outer):
            (c,) = b.labels(children)
            return c
        w = outer.children[0]
        template = b.apply(self.dom_fr, w)
        split = unflatten(b, children, template)
        new = [self.graft(wi, ci) for wi, ci in zip(b.labels(w), b.labels(split))]
        return node(outer.label, b.fill(w, new))

    def enumerate_terms(self, objects, gens, budget=None, depth=None, ident_cost=None,
                        gen_cost=None, cap=200_000) -> list:
        """All terms within a cost budget and/or depth bound.

        ``objects``: identity labels; ``gens``: generators.  A node costs
        ``1 + gen_cost(g)``; an identity costs ``ident_cost(s)``.
        """
        b = self.base
        ident_cost = ident_cost or (lambda s: 0)
        gen_cost = gen_cost or (lambda g: 0)
        objs = [(s, ident_cost(s)) for s in objects]
        gs = [(g, 1 + gen_cost(g), self.gen_cod(g), self.gen_dom(g)) for g in gens]
        big = 10 ** 9
        count = [0]

        @lru_cache(maxsize=None)
        def terms(cod, left, d):
            out = []
            for s, c in objs:
                if c <= left and (cod is None or s == cod):
                    out.append((ident(s), c))
            if d == 0:
                return tuple(out)
            for g, c, gc, gd in gs:
                if c > left or (cod is not None and gc != cod):
                    continue
                slots = b.labels(gd)
                for kids, spent in fill_slots(slots, left - c, d - 1):
                    out.append((node(g, b.fill(gd, kids)), c + spent))
                    count[0] += 1
                    guard(count[0], cap, "free term enumeration")
            return tuple(out)

        def fill_slots(slots, left, d):
            if not slots:
                yield (), 0
                return
            for t, c in terms(slots[0], left, d):
                for rest, c2 in fill_slots(slots[1:], left - c, d):
                    yield (t,) + rest, c + c2

        found = terms(None, big if budget is None else budget, big if depth is None else depth)
        return sorted({t for t, _ in found}, key=Element.key)


def free_terms_for(g: TSpan) -> FreeTerms:
    if g.source != g.target:
        raise MalformedError("a graph needs equal endpoints")
    return FreeTerms(g.plugin, g.dom.__getitem__, g.cod)


def free_enumerate(g: TSpan, depth_bound: int, size_bound: int | None = None,
                   cap: int = 200_000) -> tuple[FreeTerms, list]:
    """All free arrows of depth <= ``depth_bound`` (and at most
    ``size_bound`` nodes), with the term calculus used to type them."""
    ft = free_terms_for(g)
    return ft, ft.enumerate_terms(g.source, g.apex, size_bound, depth_bound, cap=cap)


def graft(ft: FreeTerms, outer, children):
    b = ft.base
    if b.apply(ft.cod_fr, children) != ft.dom_fr(outer):
        raise MalformedError("children do not match the outer arrow's domain")
    return ft.graft(outer, children)


def free_multicat(g: TSpan, depth_bound: int, size_bound: int | None = None) -> tuple[FreeTerms, Multicategory]:
    """The bounded fragment of the free multicategory on ``g``."""
    ft, arrows = free_enumerate(g, depth_bound, size_bound)
    arrows = FiniteSet(arrows)
    b = g.plugin
    dom = {a: ft.dom_fr(a) for a in arrows}
    cod = FiniteMap(arrows, g.source, {a: ft.cod_fr(a) for a in arrows})
    ids = FiniteMap(g.source, arrows, {s: ident(s) for s in g.source})
    comp = {}
    for a in arrows:
        for u in b.enumerate_fiber(cod, dom[a]):
            c = ft.graft(a, u)
            if c in arrows:
                comp[Pair(u, a)] = c
    bound = depth_bound if size_bound is None else max(depth_bound, size_bound)
    return ft, Multicategory(b, g.source, arrows, dom, cod, ids, comp, bound)


def universal_extension(ft: FreeTerms, free_m: Multicategory, m: Multicategory,
                        objects: FiniteMap, gens: FiniteMap) -> MulticategoryMap:
    """Extend a graph map (``objects``, ``gens``) to the free fragment."""
    p = m.plugin
    for gname in gens.source:
        if p.apply(objects, ft.gen_dom(gname)) != m.dom[gens(gname)] or \
                objects(ft.gen_cod(gname)) != m.cod(gens(gname)):
            raise MalformedError(f"graph map is not a map of graphs at {gname}")
    memo = {}

    def ext(t):
        if t in memo:
            return memo[t]
        if is_ident(t):
            r = m.ids(objects(t.value))
        else:
            r = m.composite(Pair(p.apply(ext, t.children[0]), gens(t.label)))
            if r is None:
                raise MalformedError(f"extension leaves the bounded target at {t}")
        memo[t] = r
        return r

    table = {a: ext(a) for a in free_m.arrows}
    return MulticategoryMap(FiniteMap(free_m.arrows, m.arrows, table), objects)


# -- opetopes ---------------------------------------------------------------------

O = Atom("o")
ARR = Atom("arr")


@lru_cache(maxsize=None)
def opetope_plugin(k: int) -> MonadPlugin:
    """The monad whose terms over the (k)-opetopes are the (k+1)-opetopes."""
    if k == 0:
        return IdentityMonad()
    base = opetope_plugin(k - 1)
    if k == 1:
        return FreeTerms(base, lambda g: O, lambda g: O, tag="opetope1")
    if k == 2:
        return FreeTerms(base, lambda g: g, lambda g: ARR, tag="opetope2")
    return FreeTerms(base, lambda g: g, lambda g: base.dom_fr(g), tag=f"opetope{k}")


def opetope_dimension(t) -> int:
    if t == O:
        return 0
    if t == ARR:
        return 1
    if is_ident(t):
        return opetope_dimension(t.value) + 2
    if _is_node(t):
        return opetope_dimension(t.label) + 1
    raise MalformedError(f"{t} is not an opetope")


def opetope_size(t) -> int:
    """Node count of the fully unfolded term: each node costs one plus the
    size of its generator; an identity costs the size of its label."""
    if t == O or t == ARR:
        return 0
    if is_ident(t):
        return opetope_size(t.value)
    if _is_node(t):
        plugin = opetope_plugin(opetope_dimension(t) - 1)
        kids = plugin.base.labels(t.children[0])
        return 1 + opetope_size(t.label) + sum(opetope_size(c) for c in kids)
    raise MalformedError(f"{t} is not an opetope")


def opetope_dom(t):
    """Source pasting of a d-opetope (d >= 1), as a term of (d-1)-opetopes."""
    d = opetope_dimension(t)
    if d == 0:
        raise MalformedError("points have no domain")
    if d == 1:
        return O
    return t


def opetope_cod(t):
    """Target (d-1)-opetope of a d-opetope (d >= 1)."""
    d = opetope_dimension(t)
    if d == 0:
        raise MalformedError("points have no codomain")
    if d == 1:
        return O
    if d == 2:
        return ARR
    return opetope_plugin(d - 1).dom_fr(t)


@lru_cache(maxsize=None)
def _opetopes(d: int, size_bound: int) -> tuple:
    if d == 0:
        return (O,)
    if d == 1:
        return (ARR,)
    plugin = opetope_plugin(d - 1)
    gens = _opetopes(d - 1, max(size_bound - 1, 0)) if size_bound >= 1 else ()
    objects = _opetopes(d - 2, size_bound)
    return tuple(plugin.enumerate_terms(objects, gens, budget=size_bound,
                                        ident_cost=opetope_size, gen_cost=opetope_size))


def opetope_enumerate(d: int, size_bound: int) -> list:
    """All d-opetopes of size at most ``size_bound``, canonical order."""
    if d < 0:
        raise ValueError("dimension must be >= 0")
    return list(_opetopes(d, size_bound))
