"""Shared fixtures built from the package (as opposed to oracles.py)."""
from __future__ import annotations

import random

from tmulticat.finset import FiniteSet
from tmulticat.monads import Exceptions, FreeMonoid, IdentityMonad, TreeMonad, Writer
from tmulticat.multicat import FiniteCategory
from tmulticat.spans import (
    canonical_iso, compose_spans, horizontal_compose, identity_cell, identity_span,
    random_cell, random_span, vertical_compose,
)

SPAN_PLUGINS = [IdentityMonad(), FreeMonoid(), Exceptions([0]), Writer([[0, 1], [1, 0]]), TreeMonad()]


def comp(b, a):
    return compose_spans(b, a)[0]


def span_chain(plugin, rng: random.Random, length: int, max_apex: int = 3):
    sets = [FiniteSet.range(rng.randint(1, 2), f"s{j}") for j in range(length + 1)]
    return [random_span(plugin, sets[j], sets[j + 1], rng, max_apex, 2, f"a{j}") for j in range(length)]


def pentagon_holds(a, b, c, d) -> bool:
    """Both routes d.(c.(b.a)) => ((d.c).b).a agree."""
    al = lambda x, y, z: canonical_iso("associator", x, y, z)
    top = vertical_compose(al(comp(d, c), b, a), al(d, c, comp(b, a)))
    bottom = vertical_compose(
        horizontal_compose(identity_cell(a), al(d, c, b)),
        vertical_compose(al(d, comp(c, b), a), horizontal_compose(al(c, b, a), identity_cell(d))))
    return top.source == bottom.source and top.target == bottom.target and top.map == bottom.map


def triangle_holds(a, b) -> bool:
    """b.(id.a) => (b.id).a => b.a equals b.(id.a) => b.a."""
    ida = identity_span(a.plugin, a.target)
    route = vertical_compose(horizontal_compose(identity_cell(a), canonical_iso("right_unitor", b)),
                             canonical_iso("associator", b, ida, a))
    direct = horizontal_compose(canonical_iso("left_unitor", a), identity_cell(b))
    return route.map == direct.map and route.target == direct.target


def interchange_holds(a, b, rng) -> bool:
    f1 = random_cell(a, rng)
    f2 = random_cell(f1.source, rng)
    g1 = random_cell(b, rng)
    g2 = random_cell(g1.source, rng)
    lhs = horizontal_compose(vertical_compose(f1, f2), vertical_compose(g1, g2))
    rhs = vertical_compose(horizontal_compose(f1, g1), horizontal_compose(f2, g2))
    return lhs == rhs


ARROW_CATEGORY = FiniteCategory(
    ["x", "y"], {"ix": ("x", "x"), "iy": ("y", "y"), "f": ("x", "y")}, {"x": "ix", "y": "iy"},
    {("ix", "ix"): "ix", ("iy", "iy"): "iy", ("f", "ix"): "f", ("iy", "f"): "f"})


def plain_category(c: FiniteCategory):
    """The same data in the oracle's dict form."""
    return list(c.objects), dict(c.arrows), dict(c.ids), dict(c.comp)


IDEMPOTENT = FiniteCategory(["o"], {"1": ("o", "o"), "e": ("o", "o")}, {"o": "1"},
                            {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"})

CHAIN3 = FiniteCategory(
    ["a", "b", "c"],
    {"ia": ("a", "a"), "ib": ("b", "b"), "ic": ("c", "c"), "f": ("a", "b"), "g": ("b", "c"), "gf": ("a", "c")},
    {"a": "ia", "b": "ib", "c": "ic"},
    {("ia", "ia"): "ia", ("ib", "ib"): "ib", ("ic", "ic"): "ic", ("f", "ia"): "f", ("ib", "f"): "f",
     ("g", "ib"): "g", ("ic", "g"): "g", ("gf", "ia"): "gf", ("ic", "gf"): "gf", ("g", "f"): "gf"})


def algebra_as_functor(alg, m):
    """Read an identity-monad algebra as a set-valued functor in dict form."""
    from tmulticat.finset import Pair
    functor = {s.name: [] for s in m.objects}
    for x in alg.carrier.X:
        functor[alg.carrier.p(x).name].append(x.name)
    action = {}
    for a in m.arrows:
        src = m.dom[a]
        action[a.name] = {x.name: alg.h(Pair(x, a)).name for x in alg.carrier.X if alg.carrier.p(x) == src}
    return functor, action


def binary_graph():
    """One object and one binary generator over the free monoid monad."""
    from tmulticat.finset import Atom, FiniteMap, Seq
    from tmulticat.finset import ONE, STAR
    from tmulticat.spans import TSpan
    b = Atom("b")
    gens = FiniteSet([b])
    return TSpan(FreeMonoid(), ONE, ONE, gens, {b: Seq((STAR, STAR))}, FiniteMap(gens, ONE, {b: STAR}))


def recovery_corpus():
    """Named multicategories over every shipped monad, kept small."""
    from tmulticat.algebras import endomorphism_operad
    from tmulticat.free import free_multicat
    from tmulticat.monads import FreeCommutativeMonoid
    from tmulticat.multicat import from_category, standard_multicat, terminal_multicat
    out = {
        "arrow_category": from_category(ARROW_CATEGORY),
        "chain3": from_category(CHAIN3),
        "idempotent": from_category(IDEMPOTENT),
        "functor_kind": standard_multicat("category_with_set_functor", {
            "category": ARROW_CATEGORY, "functor": {"x": [0, 1], "y": [0]},
            "action": {("f", 0): 0, ("f", 1): 0, ("ix", 0): 0, ("ix", 1): 1, ("iy", 0): 0}}),
        "monoid_kind": standard_multicat("category_over_monoid", {
            "category": ARROW_CATEGORY, "monoid": [[0, 1], [1, 0]],
            "labels": {"ix": 0, "iy": 0, "f": 1}}),
        "terminal_free_monoid": terminal_multicat(FreeMonoid(), 3),
        "terminal_tree": terminal_multicat(TreeMonad(), 3),
        "terminal_commutative": terminal_multicat(FreeCommutativeMonoid(), 3),
        "endomorphisms": endomorphism_operad(FiniteSet.range(2), 2),
        "free_binary": free_multicat(binary_graph(), 2, 3)[1],
    }
    return out


def graft_associativity_cases(max_depth: int):
    """Every triple (f, gs, hs) of free terms on the binary generator whose
    depths add up to at most ``max_depth``.  Yields both sides of the law."""
    import itertools
    from tmulticat.free import free_enumerate, graft
    from tmulticat.finset import Seq
    ft, arrows = free_enumerate(binary_graph(), max_depth)
    by_depth = {k: [a for a in arrows if ft.depth(a) <= k] for k in range(max_depth + 1)}

    def deepest(ts):
        return max((ft.depth(t) for t in ts), default=0)

    for f in by_depth[max_depth]:
        df = ft.depth(f)
        for gs in itertools.product(by_depth[max_depth - df], repeat=len(ft.dom_fr(f))):
            fg = graft(ft, f, Seq(gs))
            rest = max_depth - df - deepest(gs)
            for hs in itertools.product(by_depth[rest], repeat=len(ft.dom_fr(fg))):
                parts, pos = [], 0
                for gi in gs:
                    k = len(ft.dom_fr(gi))
                    parts.append(graft(ft, gi, Seq(hs[pos:pos + k])))
                    pos += k
                yield graft(ft, fg, Seq(hs)), graft(ft, f, Seq(parts))
