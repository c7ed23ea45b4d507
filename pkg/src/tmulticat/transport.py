"""Changing the monad, structured categories, and monad-data packages.

Transformations between plugins are positional: ``translate`` keeps the
labels of a term in order and only changes its shape.  Every such map is
natural and cartesian; the checks below verify that on bounded data along
with compatibility with units and multiplications.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Callable

from .algebras import (
    SliceObject, blob, blob_mult, blob_unit,
)
from .errors import MalformedError, guard
from .finset import (
    Atom, FiniteMap, FiniteSet, ONE, Pair, STAR, Seq, Verdict, all_maps,
    identity, is_pullback,
)
from .monads import (
    Exceptions, FreeMonoid, IdentityMonad, MonadPlugin, TreeMonad, Writer,
    enumerate_nested, unflatten,
)
from .multicat import Multicategory, MulticategoryMap, check_map

__all__ = [
    "CartesianNatTrans", "identity_trans", "unit_embedding", "writer_inclusion",
    "tree_to_leaves", "exceptions_to_words", "table_trans", "check_nat_trans",
    "transport_by_composition", "transport_by_pullback", "StructuredCategory",
    "free_structured", "terminal_structured", "underlying_multicat",
    "structured_maps", "unit_map", "counit_map", "check_triangles",
    "faithful_not_full", "operad_from_regular_theory", "monad_algebras",
    "MonadDataPackage", "monad_data", "recover_multicat", "weak_compositions",
]


@dataclass(frozen=True, eq=False)
class CartesianNatTrans:
    source: MonadPlugin
    target: MonadPlugin
    shape_map: Callable
    name: str = "custom"

    def translate(self, t):
        labels = self.source.labels(t)
        shape = self.shape_map(self.source.shape(t))
        if len(self.target.labels(shape)) != len(labels):
            raise MalformedError(f"{self.name} changes the number of positions at {t}")
        return self.target.fill(shape, labels)

    def preimage_shapes(self, shape, bound: int) -> list:
        return [s for s in self.source.shapes(bound) if self.shape_map(s) == shape]


def identity_trans(plugin: MonadPlugin) -> CartesianNatTrans:
    return CartesianNatTrans(plugin, plugin, lambda s: s, "identity")


def unit_embedding(plugin: MonadPlugin) -> CartesianNatTrans:
    return CartesianNatTrans(IdentityMonad(), plugin, lambda s: plugin.unit(STAR), "unit")


def writer_inclusion(sub: Writer, big: Writer, embedding) -> CartesianNatTrans:
    emb = {m: Atom(int(embedding[m.name])) for m in sub.M}
    for a, b in itertools.product(sub.M, repeat=2):
        if emb[sub.times(a, b)] != big.times(emb[a], emb[b]):
            raise MalformedError("embedding is not a monoid homomorphism")
    if emb[Atom(sub.e)] != Atom(big.e):
        raise MalformedError("embedding does not preserve the unit")
    return CartesianNatTrans(sub, big, lambda s: Pair(emb[s.fst], s.snd), "writer_inclusion")


def tree_to_leaves() -> CartesianNatTrans:
    t, fm = TreeMonad(), FreeMonoid()
    return CartesianNatTrans(t, fm, lambda s: Seq(t.labels(s)), "tree_to_leaves")


def exceptions_to_words(plugin: Exceptions) -> CartesianNatTrans:
    fm = FreeMonoid()
    return CartesianNatTrans(plugin, fm, lambda s: Seq(plugin.labels(s)), "exceptions_to_words")


def table_trans(source: MonadPlugin, target: MonadPlugin, table: dict) -> CartesianNatTrans:
    """A transformation given extensionally on bounded shapes."""
    def shape_map(s):
        if s not in table:
            raise MalformedError(f"shape {s} is outside the given table")
        return table[s]
    return CartesianNatTrans(source, target, shape_map, "table")


def check_nat_trans(phi: CartesianNatTrans, xs: FiniteSet, bound: int) -> Verdict:
    """Naturality, cartesianness (on maps to sets of size <= 2) and
    compatibility with units and multiplications, on bounded terms."""
    src, tgt = phi.source, phi.target
    terms = src.enumerate_telements(xs, bound)
    for x in xs:
        if phi.translate(src.unit(x)) != tgt.unit(x):
            return Verdict(False, ("unit", x))
    for tt in enumerate_nested(src, xs, bound, 2):
        lhs = phi.translate(src.mult(tt))
        rhs = tgt.mult(phi.translate(src.apply(phi.translate, tt)))
        if lhs != rhs:
            return Verdict(False, ("multiplication", tt))
    for k in (1, 2):
        ys = FiniteSet.range(k, "y")
        for f in all_maps(xs, ys):
            for t in terms:
                if phi.translate(src.apply(f, t)) != tgt.apply(f, phi.translate(t)):
                    return Verdict(False, ("naturality", t))
            # Cartesian square T'X -> TX over T'Y -> TY, restricted to the
            # fibers over the images of bounded terms.
            tx = FiniteSet(phi.translate(t) for t in terms)
            tyd = FiniteSet(src.apply(f, t) for t in terms)
            ty = FiniteSet(tgt.apply(f, t) for t in tx)
            left = FiniteMap(FiniteSet(terms), tyd, {t: src.apply(f, t) for t in terms})
            top = FiniteMap(FiniteSet(terms), tx, {t: phi.translate(t) for t in terms})
            bottom = FiniteMap(tyd, ty, {t: phi.translate(t) for t in tyd})
            right = FiniteMap(tx, ty, {t: tgt.apply(f, t) for t in tx})
            v = is_pullback(left, top, bottom, right)
            if not v:
                return Verdict(False, ("cartesian", v.witness))
    return Verdict(True)


def transport_by_composition(phi: CartesianNatTrans, m: Multicategory) -> Multicategory:
    if m.plugin != phi.source:
        raise MalformedError("transformation does not start at the multicategory's monad")
    tgt = phi.target
    dom = {a: phi.translate(m.dom[a]) for a in m.arrows}
    comp = {}
    for key, c in m.comp_items():
        comp[Pair(phi.translate(key.fst), key.snd)] = c
    return Multicategory(tgt, m.objects, m.arrows, dom, m.cod, m.ids, comp, m.bound)


def transport_by_pullback(phi: CartesianNatTrans, m: Multicategory, bound: int) -> Multicategory:
    """Arrows are pairs ``(a, t')`` with ``t'`` translating to ``dom(a)``;
    preimage shapes are searched up to ``bound``."""
    if m.plugin != phi.target:
        raise MalformedError("transformation does not end at the multicategory's monad")
    src, tgt = phi.source, phi.target
    arrows = []
    for a in m.arrows:
        d = m.dom[a]
        for s in phi.preimage_shapes(tgt.shape(d), bound):
            arrows.append(Pair(a, src.fill(s, tgt.labels(d))))
    arrows = FiniteSet(arrows)
    dom = {e: e.snd for e in arrows}
    cod = FiniteMap(arrows, m.objects, {e: m.cod(e.fst) for e in arrows})
    ids_t = {}
    for s in m.objects:
        e = Pair(m.ids(s), src.unit(s))
        if e not in arrows:
            raise MalformedError("unit shape lies outside the search bound")
        ids_t[s] = e
    ids = FiniteMap(m.objects, arrows, ids_t)
    comp = {}
    for e in arrows:
        for v in src.enumerate_fiber(cod, e.snd):
            c = m.composite(Pair(phi.translate(src.apply(lambda q: q.fst, v)), e.fst))
            if c is None:
                continue
            r = Pair(c, src.mult(src.apply(lambda q: q.snd, v)))
            if r in arrows:
                comp[Pair(v, e)] = r
    b = m.bound if m.bound is not None else (bound if _has_infinite_shapes(src) else None)
    return Multicategory(src, m.objects, arrows, dom, cod, ids, comp, b)


def _has_infinite_shapes(plugin) -> bool:
    return isinstance(plugin, (FreeMonoid, TreeMonad))


# -- structured categories ------------------------------------------------------

@dataclass(eq=False)
class StructuredCategory:
    """A category whose object and arrow sets carry bounded T-algebra
    structures (``tensor_obj``/``tensor_arr`` return None outside bound)."""
    plugin: MonadPlugin
    objects: FiniteSet
    arrows: FiniteSet
    src: FiniteMap
    tgt: FiniteMap
    ids: FiniteMap
    comp: dict
    tensor_obj: Callable
    tensor_arr: Callable
    bound: int

    def hom(self, x, y) -> list:
        return [b for b in self.arrows if self.src(b) == x and self.tgt(b) == y]

    def compose(self, g, f):
        return self.comp.get(Pair(g, f))

    def check(self, tensor_bound: int = 2) -> Verdict:
        """Category axioms and that source/target/identities preserve the
        tensor, the latter checked on terms of size <= ``tensor_bound``."""
        p = self.plugin
        tb = min(tensor_bound, self.bound)
        for x in self.objects:
            i = self.ids(x)
            if self.src(i) != x or self.tgt(i) != x:
                return Verdict(False, ("identity_legs", x))
        for f in self.arrows:
            if self.compose(self.ids(self.tgt(f)), f) != f or self.compose(f, self.ids(self.src(f))) != f:
                return Verdict(False, ("unit", f))
            for g in self.arrows:
                if self.src(g) != self.tgt(f):
                    continue
                gf = self.compose(g, f)
                if gf is None:
                    return Verdict(False, ("comp_total", Pair(g, f)))
                if self.src(gf) != self.src(f) or self.tgt(gf) != self.tgt(g):
                    return Verdict(False, ("comp_legs", Pair(g, f)))
        by_src: dict = {}
        for g in self.arrows:
            by_src.setdefault(self.src(g), []).append(g)
        for f in self.arrows:
            for g in by_src.get(self.tgt(f), ()):
                gf = self.compose(g, f)
                for h in by_src.get(self.tgt(g), ()):
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        return Verdict(False, ("associativity", (f, g, h)))
        for t in p.enumerate_telements(self.arrows, tb):
            b = self.tensor_arr(t)
            if b is None:
                continue
            if self.tensor_obj(p.apply(self.src, t)) != self.src(b) or \
                    self.tensor_obj(p.apply(self.tgt, t)) != self.tgt(b):
                return Verdict(False, ("tensor_legs", t))
        for t in p.enumerate_telements(self.objects, tb):
            x = self.tensor_obj(t)
            if x is not None and self.tensor_arr(p.apply(self.ids, t)) != self.ids(x):
                return Verdict(False, ("tensor_ids", t))
        for x in self.objects:
            if self.tensor_obj(p.unit(x)) != x:
                return Verdict(False, ("tensor_unit", x))
        return Verdict(True)


def free_structured(m: Multicategory, size_bound: int) -> StructuredCategory:
    """Objects: terms over the objects of size <= bound; arrows: terms over
    the arrows of size <= bound whose source is also in bound."""
    p = m.plugin
    objects = FiniteSet(p.enumerate_telements(m.objects, size_bound))
    arrows = []
    for t in p.enumerate_telements(m.arrows, size_bound):
        if p.mult(p.apply(m.dom.__getitem__, t)) in objects:
            arrows.append(t)
    arrows = FiniteSet(arrows)
    src = FiniteMap(arrows, objects, {t: p.mult(p.apply(m.dom.__getitem__, t)) for t in arrows})
    tgt = FiniteMap(arrows, objects, {t: p.apply(m.cod, t) for t in arrows})
    ids = FiniteMap(objects, arrows, {x: p.apply(m.ids, x) for x in objects})
    by_tgt: dict = {}
    for f in arrows:
        by_tgt.setdefault(tgt(f), []).append(f)
    comp = {}
    for g in arrows:
        template = p.apply(m.dom.__getitem__, g)
        for f in by_tgt.get(src(g), ()):
            split = unflatten(p, f, template)
            parts = []
            for fi, gi in zip(p.labels(split), p.labels(g)):
                c = m.composite(Pair(fi, gi))
                if c is None:
                    break
                parts.append(c)
            else:
                comp[Pair(g, f)] = p.fill(g, parts)

    def tensor_obj(t):
        r = p.mult(t)
        return r if r in objects else None

    def tensor_arr(t):
        r = p.mult(t)
        return r if r in arrows else None

    return StructuredCategory(p, objects, arrows, src, tgt, ids, comp, tensor_obj, tensor_arr, size_bound)


def terminal_structured(plugin: MonadPlugin, bound: int) -> StructuredCategory:
    objects = FiniteSet([STAR])
    arrows = FiniteSet([STAR])
    one = FiniteMap(objects, arrows, {STAR: STAR})
    return StructuredCategory(plugin, objects, arrows, one, one, one, {Pair(STAR, STAR): STAR},
                              lambda t: STAR, lambda t: STAR, bound)


def underlying_multicat(b: StructuredCategory, arity_bound: int | None = None) -> Multicategory:
    """Arrows ``(t, f)`` with ``f`` an arrow out of the tensor of ``t``."""
    p = b.plugin
    k = b.bound if arity_bound is None else arity_bound
    arrows = []
    by_src: dict = {}
    for f in b.arrows:
        by_src.setdefault(b.src(f), []).append(f)
    for t in p.enumerate_telements(b.objects, k):
        x = b.tensor_obj(t)
        if x is None:
            continue
        for f in by_src.get(x, ()):
            arrows.append(Pair(t, f))
    arrows = FiniteSet(arrows)
    dom = {e: e.fst for e in arrows}
    cod = FiniteMap(arrows, b.objects, {e: b.tgt(e.snd) for e in arrows})
    ids = FiniteMap(b.objects, arrows, {x: Pair(p.unit(x), b.ids(x)) for x in b.objects})
    comp = {}
    for e in arrows:
        for u in p.enumerate_fiber(cod, e.fst):
            d = p.mult(p.apply(lambda q: q.fst, u))
            f = b.tensor_arr(p.apply(lambda q: q.snd, u))
            if f is None:
                continue
            g = b.compose(e.snd, f)
            if g is None:
                continue
            r = Pair(d, g)
            if r in arrows:
                comp[Pair(u, e)] = r
    return Multicategory(p, b.objects, arrows, dom, cod, ids, comp, k)


@dataclass(frozen=True)
class StructuredMap:
    objects: FiniteMap
    arrows: FiniteMap


def _preserves(b1: StructuredCategory, b2: StructuredCategory, fo: dict, fa: dict) -> bool:
    p = b1.plugin
    for f in b1.arrows:
        if b2.src(fa[f]) != fo[b1.src(f)] or b2.tgt(fa[f]) != fo[b1.tgt(f)]:
            return False
    for x in b1.objects:
        if fa[b1.ids(x)] != b2.ids(fo[x]):
            return False
    for key, c in b1.comp.items():
        image = b2.compose(fa[key.fst], fa[key.snd])
        if image is not None and image != fa[c]:
            return False
    for t in p.enumerate_telements(b1.objects, b1.bound):
        x = b1.tensor_obj(t)
        y = b2.tensor_obj(p.apply(fo.__getitem__, t))
        if x is not None and y is not None and fo[x] != y:
            return False
        if x is not None and y is None:
            return False
    for t in p.enumerate_telements(b1.arrows, b1.bound):
        f = b1.tensor_arr(t)
        g = b2.tensor_arr(p.apply(fa.__getitem__, t))
        if f is not None and (g is None or fa[f] != g):
            return False
    return True


def structured_maps(b1: StructuredCategory, b2: StructuredCategory,
                    objects: dict | None = None, cap: int = 1_000_000) -> list:
    """All maps of structured categories (tensor-preserving functors)."""
    obj_choices = ([objects] if objects is not None else
                   [dict(zip(b1.objects.elements, im))
                    for im in itertools.product(b2.objects.elements, repeat=len(b1.objects))])
    out = []
    for fo in obj_choices:
        cands = [[g for g in b2.arrows if b2.src(g) == fo[b1.src(f)] and b2.tgt(g) == fo[b1.tgt(f)]]
                 for f in b1.arrows]
        total = 1
        for c in cands:
            total *= len(c)
        guard(total, cap, "structured map search")
        for images in itertools.product(*cands):
            fa = dict(zip(b1.arrows.elements, images))
            if _preserves(b1, b2, fo, fa):
                out.append(StructuredMap(FiniteMap(b1.objects, b2.objects, fo),
                                         FiniteMap(b1.arrows, b2.arrows, fa)))
    return out


def unit_map(m: Multicategory, fm: StructuredCategory, ufm: Multicategory) -> MulticategoryMap:
    """The unit ``m -> U(F(m))``."""
    p = m.plugin
    objects = FiniteMap(m.objects, ufm.objects, {s: p.unit(s) for s in m.objects})
    arrows = FiniteMap(m.arrows, ufm.arrows,
                       {a: Pair(p.apply(p.unit, m.dom[a]), p.unit(a)) for a in m.arrows})
    return MulticategoryMap(arrows, objects)


def counit_map(b: StructuredCategory, fub: StructuredCategory) -> StructuredMap:
    """The counit ``F(U(b)) -> b``: tensor everything out."""
    p = b.plugin
    objects = {t: b.tensor_obj(t) for t in fub.objects}
    arrows = {w: b.tensor_arr(p.apply(lambda q: q.snd, w)) for w in fub.arrows}
    if any(v is None for v in itertools.chain(objects.values(), arrows.values())):
        raise MalformedError("counit leaves the bounded structure")
    return StructuredMap(FiniteMap(fub.objects, b.objects, objects),
                         FiniteMap(fub.arrows, b.arrows, arrows))


def check_triangles(m: Multicategory, size_bound: int) -> Verdict:
    """Both triangle identities of F -| U on bounded fragments at ``m``."""
    p = m.plugin
    fm = free_structured(m, size_bound)
    ufm = underlying_multicat(fm)
    eta = unit_map(m, fm, ufm)
    if not check_map(eta, m, ufm):
        return Verdict(False, ("unit_not_a_map",))
    # counit at F(m) after F(eta) is the identity of F(m).
    for t in fm.objects:
        if p.mult(p.apply(eta.objects, t)) != t:
            return Verdict(False, ("first_triangle_objects", t))
    for w in fm.arrows:
        if p.mult(p.apply(lambda q: q.snd, p.apply(eta.arrows, w))) != w:
            return Verdict(False, ("first_triangle_arrows", w))
    # U(counit) after the unit at U(F(m)) is the identity of U(F(m)).
    for e in ufm.arrows:
        t, f = e.fst, e.snd
        lifted_t = p.apply(p.unit, t)
        back = Pair(p.apply(fm.tensor_obj, lifted_t), fm.tensor_arr(p.unit(f)))
        if back != e:
            return Verdict(False, ("second_triangle", e))
    return Verdict(True)


@dataclass
class FaithfulNotFull:
    multicat_map_ok: bool
    structured_lifts: int
    witness: object = None


def faithful_not_full(delta_bound: int = 2) -> FaithfulNotFull:
    """The map from U(1) to U(Delta) picking the object ``<*>``: a map of
    multicategories with no structured map above it."""
    fm = FreeMonoid()
    from .multicat import terminal_multicat
    delta = free_structured(terminal_multicat(fm, delta_bound), delta_bound)
    one = terminal_structured(fm, delta_bound)
    u1 = underlying_multicat(one, delta_bound)
    ud = underlying_multicat(delta, delta_bound)
    point = Seq((STAR,))
    objects = FiniteMap(u1.objects, ud.objects, {STAR: point})
    table = {}
    for e in u1.arrows:
        n = len(e.fst)
        target = Seq((Seq((STAR,) * n),))
        table[e] = Pair(Seq((point,) * n), target)
    f = MulticategoryMap(FiniteMap(u1.arrows, ud.arrows, table), objects)
    ok = bool(check_map(f, u1, ud))
    lifts = structured_maps(one, delta, objects={STAR: point})
    return FaithfulNotFull(ok, len(lifts), f)


def weak_compositions(m: int, n: int) -> int:
    if n == 0:
        return 1 if m == 0 else 0
    return comb(m + n - 1, m)


# -- operads from regular theories ----------------------------------------------------

def operad_from_regular_theory(phi: CartesianNatTrans, bound: int) -> Multicategory:
    """One-object free-monoid operad whose n-ary arrows are the shapes of the
    source monad with n positions (size <= bound)."""
    if not isinstance(phi.target, FreeMonoid):
        raise MalformedError("the target must be the free monoid monad")
    src = phi.source
    arrows = FiniteSet(src.shapes(bound))
    dom = {a: phi.translate(a) for a in arrows}
    cod = FiniteMap(arrows, ONE, {a: STAR for a in arrows})
    ids = FiniteMap(ONE, arrows, {STAR: src.unit(STAR)})
    comp = {}
    fm = phi.target
    for a in arrows:
        for u in fm.enumerate_fiber(cod, dom[a]):
            c = src.mult(src.fill(a, u.items))
            if c in arrows:
                comp[Pair(u, a)] = c
    return Multicategory(fm, ONE, arrows, dom, cod, ids, comp, bound)


def monad_algebras(plugin: MonadPlugin, xs: FiniteSet, bound: int, cap: int = 2_000_000) -> list:
    """Bounded algebras of a monad on ``xs``: tables ``h`` on terms of size
    <= bound with the unit law and the multiplication law wherever the
    flattened term is in bound.  Two-level terms are pruned by the sum of
    inner sizes, which is exact when flattening never shrinks size (true for
    all shipped plugins)."""
    level1 = plugin.enumerate_telements(xs, bound)
    index = set(level1)
    level2 = []
    for tt in enumerate_nested(plugin, xs, bound, 2):
        flat = plugin.mult(tt)
        if flat in index:
            level2.append((tt, flat))
    forced = {plugin.unit(x): x for x in xs}
    order = sorted(level1, key=lambda t: (plugin.size(t), t.key()))
    rank = {t: i for i, t in enumerate(order)}
    watch: dict = {t: [] for t in order}
    for tt, flat in level2:
        inner = plugin.labels(tt)
        watch[max(list(inner) + [flat], key=rank.__getitem__)].append((tt, flat))
    h: dict = {}
    out = []
    count = [0]

    def ok_at(t):
        # Constraints whose outer term is still unassigned wait for the end.
        for tt, flat in watch[t]:
            outer = plugin.apply(h.__getitem__, tt)
            if outer in h and h[outer] != h[flat]:
                return False
        return True

    def go(i):
        count[0] += 1
        guard(count[0], cap, "monad algebra search")
        if i == len(order):
            for tt, flat in level2:
                if h[plugin.apply(h.__getitem__, tt)] != h[flat]:
                    return
            out.append(dict(h))
            return
        t = order[i]
        options = [forced[t]] if t in forced else xs.elements
        for v in options:
            h[t] = v
            if ok_at(t):
                go(i + 1)
            del h[t]

    go(0)
    return out


# -- monad data packages -----------------------------------------------------------------

@dataclass(eq=False)
class MonadDataPackage:
    """The induced monad on the slice over ``objects`` together with the
    projection ``phi`` to T, given as functions of slice objects."""
    plugin: MonadPlugin
    objects: FiniteSet
    action: Callable
    unit: Callable
    mult: Callable
    bound: int | None = None

    def phi(self, x: SliceObject) -> dict:
        return self.action(x).phi

    def check(self, x: SliceObject, k: FiniteMap | None = None) -> Verdict:
        """Unit laws at ``x`` and, given ``k: x -> y`` over the objects,
        naturality and cartesianness of ``phi`` along ``k``."""
        b = self.action(x)
        mu = self.mult(x)
        eta_b = self.unit(b.slice())
        for e in b.X_blob:
            if eta_b(e) in mu and mu[eta_b(e)] != e:
                return Verdict(False, ("left_unit", e))
        if k is None:
            return Verdict(True)
        p = self.plugin
        y = SliceObject(k.target, FiniteMap(k.target, self.objects,
                                            {v: _over(x, k, v) for v in k.target}))
        by = self.action(y)
        moved = {e: Pair(p.apply(k, e.fst), e.snd) for e in b.X_blob}
        for e, e2 in moved.items():
            if by.phi[e2] != p.apply(k, b.phi[e]):
                return Verdict(False, ("phi_naturality", e))
        tx = FiniteSet(b.phi.values())
        ty = FiniteSet([p.apply(k, t) for t in tx] + list(by.phi.values()))
        left = FiniteMap(b.X_blob, by.X_blob, moved)
        top = FiniteMap(b.X_blob, tx, b.phi)
        bottom = FiniteMap(by.X_blob, ty, by.phi)
        right = FiniteMap(tx, ty, {t: p.apply(k, t) for t in tx})
        v = is_pullback(left, top, bottom, right)
        return Verdict(True) if v else Verdict(False, ("phi_cartesian", v.witness))


def _over(x: SliceObject, k: FiniteMap, v):
    for u in x.X:
        if k(u) == v:
            return x.p(u)
    raise MalformedError("k must be surjective to define the slice structure on its target")


def monad_data(m: Multicategory) -> MonadDataPackage:
    return MonadDataPackage(
        m.plugin, m.objects,
        action=lambda x: blob(m, x),
        unit=lambda x: blob_unit(m, x),
        mult=lambda x: blob_mult(m, x),
        bound=m.bound,
    )


def recover_multicat(pkg: MonadDataPackage) -> Multicategory:
    """Read a multicategory off the package at the terminal slice object."""
    p = pkg.plugin
    s = pkg.objects
    top = SliceObject(s, identity(s))
    b = pkg.action(top)
    name = {e: e.snd for e in b.X_blob}
    arrows = FiniteSet(name.values())
    if len(arrows) != len(b.X_blob):
        raise MalformedError("package does not use the canonical blob encoding")
    dom = {name[e]: b.phi[e] for e in b.X_blob}
    cod = FiniteMap(arrows, s, {name[e]: b.p_blob(e) for e in b.X_blob})
    unit = pkg.unit(top)
    ids = FiniteMap(s, arrows, {x: name[unit(x)] for x in s})
    comp = {}
    for ee, e in pkg.mult(top).items():
        comp[Pair(p.apply(name.__getitem__, ee.fst), ee.snd)] = name[e]
    return Multicategory(p, s, arrows, dom, cod, ids, comp, pkg.bound)
