"""The induced monad on the slice over the objects, and its algebras.

For a multicategory ``M`` with objects ``S`` and a slice object ``p: X -> S``,
the blob ``X_blob`` is the set of pairs ``(u, a)`` with ``u`` a T-term over
``X`` lying over ``dom(a)``.  An algebra is a map ``h: X_blob -> X`` over
``S`` satisfying the unit and multiplication laws.  Also here: the
endomorphism operad of a finite set, the correspondence between algebras
and operad maps, the slice multicategory of an algebra, and restriction of
algebras along multicategory maps.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import MalformedError, guard
from .finset import (
    Atom, Element, FiniteMap, FiniteSet, ONE, Pair, STAR, Seq, Tag, Verdict,
    all_maps,
)
from .monads import FreeMonoid
from .multicat import Multicategory, MulticategoryMap, check_map, enumerate_maps

__all__ = [
    "SliceObject", "BlobResult", "Algebra", "blob", "blob_unit", "blob_mult",
    "blob_map", "check_algebra", "check_blob_monad", "enumerate_algebras",
    "EndomorphismOperad", "endomorphism_operad", "fn_arrow", "fn_table",
    "algebra_to_map", "map_to_algebra", "algebra_operad_correspondence",
    "slice_multicat", "restrict_algebra", "is_algebra_map", "algebra_maps",
    "sliced_monads_agree",
]


@dataclass(frozen=True)
class SliceObject:
    X: FiniteSet
    p: FiniteMap


@dataclass(frozen=True)
class BlobResult:
    X_blob: FiniteSet
    p_blob: FiniteMap
    phi: dict

    def slice(self) -> SliceObject:
        return SliceObject(self.X_blob, self.p_blob)


@dataclass(frozen=True)
class Algebra:
    carrier: SliceObject
    h: FiniteMap


def _check_slice(m: Multicategory, x: SliceObject):
    if x.p.source != x.X or x.p.target != m.objects:
        raise MalformedError("slice object must map into the multicategory's objects")


def blob(m: Multicategory, x: SliceObject) -> BlobResult:
    _check_slice(m, x)
    plugin = m.plugin
    elems = []
    for a in m.arrows:
        for u in plugin.enumerate_fiber(x.p, m.dom[a]):
            elems.append(Pair(u, a))
    xb = FiniteSet(elems)
    p_blob = FiniteMap(xb, m.objects, {e: m.cod(e.snd) for e in xb})
    return BlobResult(xb, p_blob, {e: e.fst for e in xb})


def blob_unit(m: Multicategory, x: SliceObject, b: BlobResult | None = None) -> FiniteMap:
    b = b or blob(m, x)
    return FiniteMap(x.X, b.X_blob, {v: Pair(m.plugin.unit(v), m.ids(x.p(v))) for v in x.X})


def blob_mult(m: Multicategory, x: SliceObject, b: BlobResult | None = None,
              bb: BlobResult | None = None) -> dict:
    """Multiplication ``X_blob_blob -> X_blob`` as a table.

    Pairs whose composite lies outside a bounded multicategory are absent.
    """
    plugin = m.plugin
    b = b or blob(m, x)
    bb = bb or blob(m, b.slice())
    out = {}
    for e in bb.X_blob:
        w, a = e.fst, e.snd
        c = m.composite(Pair(plugin.apply(lambda q: q.snd, w), a))
        if c is None:
            continue
        out[e] = Pair(plugin.mult(plugin.apply(lambda q: q.fst, w)), c)
    return out


def blob_map(m: Multicategory, k) -> callable:
    """The action of the blob on a map ``k`` over S: ``(u, a) -> (k u, a)``."""
    return lambda e: Pair(m.plugin.apply(k, e.fst), e.snd)


def check_algebra(m: Multicategory, alg: Algebra) -> Verdict:
    x = alg.carrier
    b = blob(m, x)
    if alg.h.source != b.X_blob or alg.h.target != x.X:
        raise MalformedError("structure map must go from the blob to the carrier")
    h = alg.h
    for e in b.X_blob:
        if x.p(h(e)) != b.p_blob(e):
            return Verdict(False, ("over_objects", e))
    for v, e in blob_unit(m, x, b).items():
        if h(e) != v:
            return Verdict(False, ("unit", v))
    bb = _blob_within(m, b, b.X_blob)
    mu = blob_mult(m, x, b, bb)
    act = blob_map(m, h)
    for e in bb.X_blob:
        if e not in mu:
            continue
        if h(mu[e]) != h(act(e)):
            return Verdict(False, ("multiplication", e))
    return Verdict(True)


def _blob_within(m: Multicategory, b: BlobResult, allowed) -> BlobResult:
    """The blob of ``b`` restricted, for bounded ``m``, to terms over
    ``allowed`` whose arrows' domain sizes sum to at most the largest domain
    size in ``m`` (necessary for the composite to be an arrow, since
    multiplication never shrinks total size)."""
    if m.bound is None:
        return blob(m, b.slice())
    plugin = m.plugin
    weight = {e: plugin.size(m.dom[e.snd]) for e in allowed}
    budget = max((plugin.size(m.dom[a]) for a in m.arrows), default=0)
    fib: dict = {}
    for e in sorted(allowed, key=Element.key):
        fib.setdefault(b.p_blob(e), []).append(e)
    elems = []
    for a in m.arrows:
        shape = m.dom[a]
        pools = [fib.get(s, []) for s in plugin.labels(shape)]

        def go(i, left, acc):
            if i == len(pools):
                elems.append(Pair(plugin.fill(shape, acc), a))
                return
            for e in pools[i]:
                if weight[e] <= left:
                    go(i + 1, left - weight[e], acc + [e])

        go(0, budget, [])
    xb = FiniteSet(elems)
    return BlobResult(xb, FiniteMap(xb, m.objects, {e: m.cod(e.snd) for e in xb}),
                      {e: e.fst for e in xb})


def check_blob_monad(m: Multicategory, x: SliceObject) -> Verdict:
    """Unit and associativity laws of the induced monad at ``x``."""
    plugin = m.plugin
    b = blob(m, x)
    bb = _blob_within(m, b, b.X_blob)
    mu = blob_mult(m, x, b, bb)
    eta_b = blob_unit(m, b.slice(), bb)
    eta = blob_unit(m, x, b)
    for e in b.X_blob:
        if eta_b(e) in mu and mu[eta_b(e)] != e:
            return Verdict(False, ("left_unit", e))
        lifted = blob_map(m, eta)(e)
        if lifted in mu and mu[lifted] != e:
            return Verdict(False, ("right_unit", e))
    bbb = _blob_within(m, bb, mu)
    mu_b = blob_mult(m, b.slice(), bb, bbb)
    for e in bbb.X_blob:
        inner = blob_map(m, lambda q: mu.get(q))(e) if all(
            q in mu for q in plugin.labels(e.fst)) else None
        one = mu.get(mu_b[e]) if e in mu_b else None
        two = mu.get(inner) if inner is not None else None
        if one is not None and two is not None and one != two:
            return Verdict(False, ("associativity", e))
    return Verdict(True)


# -- enumeration --------------------------------------------------------------

def enumerate_algebras(m: Multicategory, max_carrier: int, cap: int = 2_000_000,
                       sizes=None) -> list:
    """All algebras with carrier ``{0, .., n-1}`` for ``n <= max_carrier`` and
    every ``p``; canonical order.  Raises GuardError past ``cap`` search nodes."""
    out = []
    counter = [0]
    for n in (range(max_carrier + 1) if sizes is None else sizes):
        xs = FiniteSet.range(n)
        for p in all_maps(xs, m.objects):
            out.extend(_algebras_on(m, SliceObject(xs, p), counter, cap))
    return out


def _algebras_on(m: Multicategory, x: SliceObject, counter, cap) -> list:
    plugin = m.plugin
    b = blob(m, x)
    bb = _blob_within(m, b, b.X_blob)
    mu = blob_mult(m, x, b, bb)
    eta = blob_unit(m, x, b)
    fib = {}
    for v in x.X:
        fib.setdefault(x.p(v), []).append(v)
    domains = {e: fib.get(b.p_blob(e), []) for e in b.X_blob}
    forced = {}
    for v, e in eta.items():
        if e in forced and forced[e] != v:
            return []
        forced[e] = v
    order = sorted(b.X_blob, key=lambda e: (plugin.size(e.fst), e.key()))
    rank = {e: i for i, e in enumerate(order)}
    # Constraint: h(mu(E)) == h((h* w, a)) for E = (w, a).
    static: dict = {e: [] for e in order}
    dynamic: dict = {}
    for E, target in mu.items():
        cons = (E, target)
        parts = list(plugin.labels(E.fst)) + [target]
        static[max(parts, key=rank.__getitem__)].append(cons)
        dynamic.setdefault(E.snd, []).append(cons)
    h: dict = {}

    def check(cons):
        E, target = cons
        if target not in h:
            return True
        try:
            key = Pair(plugin.apply(h.__getitem__, E.fst), E.snd)
        except KeyError:
            return True
        if key not in h:
            return True
        return h[key] == h[target]

    results = []

    def go(i):
        counter[0] += 1
        guard(counter[0], cap, "algebra search")
        if i == len(order):
            results.append(Algebra(x, FiniteMap(b.X_blob, x.X, dict(h))))
            return
        e = order[i]
        options = [forced[e]] if e in forced else domains[e]
        for v in options:
            h[e] = v
            if all(check(c) for c in static[e]) and all(check(c) for c in dynamic.get(e.snd, ())):
                go(i + 1)
            del h[e]

    go(0)
    return results


# -- endomorphism operad --------------------------------------------------------

def fn_arrow(n: int, outputs) -> Tag:
    return Tag("fn", Pair(Atom(n), Seq(outputs)))


def fn_table(arrow: Tag, xs: FiniteSet) -> dict:
    n = arrow.value.fst.name
    outs = arrow.value.snd.items
    return dict(zip(itertools.product(xs.elements, repeat=n), outs))


class EndomorphismOperad(Multicategory):
    """All functions ``X^n -> X`` for ``n <= arity_bound``, composites computed
    on demand by substitution (when the total arity stays in bound)."""

    def __init__(self, xs: FiniteSet, arity_bound: int, cap: int = 100_000):
        if arity_bound < 1:
            raise ValueError("arity_bound must be >= 1")
        k = len(xs)
        guard(sum(k ** (k ** n) for n in range(arity_bound + 1)), cap, "End(X) arrows")
        self.carrier = xs
        arrows = []
        for n in range(arity_bound + 1):
            for outs in itertools.product(xs.elements, repeat=k ** n):
                arrows.append(fn_arrow(n, outs))
        arrows = FiniteSet(arrows)
        dom = {a: Seq((STAR,) * a.value.fst.name) for a in arrows}
        cod = FiniteMap(arrows, ONE, {a: STAR for a in arrows})
        ident = fn_arrow(1, xs.elements)
        ids = FiniteMap(ONE, arrows, {STAR: ident})
        super().__init__(FreeMonoid(), ONE, arrows, dom, cod, ids, {}, arity_bound)
        self._tables = {}
        self._composites = {}

    def table(self, a):
        t = self._tables.get(a)
        if t is None:
            t = self._tables[a] = fn_table(a, self.carrier)
        return t

    def composite(self, key: Pair):
        try:
            return self._composites[key]
        except KeyError:
            c = self._composites[key] = self._substitute(key)
            return c

    def _substitute(self, key: Pair):
        u, a = key.fst, key.snd
        if a not in self.arrows or not isinstance(u, Seq):
            return None
        gs = u.items
        if len(gs) != a.value.fst.name or any(g not in self.arrows for g in gs):
            return None
        arities = [g.value.fst.name for g in gs]
        total = sum(arities)
        if total > self.bound:
            return None
        fa = self.table(a)
        tabs = [self.table(g) for g in gs]
        outs = []
        for inp in itertools.product(self.carrier.elements, repeat=total):
            pos = 0
            vals = []
            for t, k in zip(tabs, arities):
                vals.append(t[inp[pos:pos + k]])
                pos += k
            outs.append(fa[tuple(vals)])
        return fn_arrow(total, outs)

    def comp_items(self):
        from .multicat import composable_pairs
        out = []
        for key in composable_pairs(self):
            c = self.composite(key)
            if c is not None:
                out.append((key, c))
        return out


def endomorphism_operad(xs: FiniteSet, arity_bound: int, cap: int = 100_000) -> EndomorphismOperad:
    return EndomorphismOperad(xs, arity_bound, cap)


def _arity(m: Multicategory, a) -> int:
    return len(m.plugin.labels(m.dom[a]))


def algebra_to_map(a_op: Multicategory, alg: Algebra, end: EndomorphismOperad) -> MulticategoryMap:
    xs = alg.carrier.X
    table = {}
    for a in a_op.arrows:
        n = _arity(a_op, a)
        table[a] = fn_arrow(n, [alg.h(Pair(Seq(inp), a))
                               for inp in itertools.product(xs.elements, repeat=n)])
    return MulticategoryMap(FiniteMap(a_op.arrows, end.arrows, table),
                            FiniteMap(ONE, ONE, {STAR: STAR}))


def map_to_algebra(a_op: Multicategory, f: MulticategoryMap, end: EndomorphismOperad) -> Algebra:
    xs = end.carrier
    x = SliceObject(xs, FiniteMap(xs, ONE, {v: STAR for v in xs}))
    b = blob(a_op, x)
    h = {e: end.table(f.arrows(e.snd))[e.fst.items] for e in b.X_blob}
    return Algebra(x, FiniteMap(b.X_blob, xs, h))


@dataclass
class Correspondence:
    algebras: list
    maps: list
    forward: dict = field(default_factory=dict)
    ok: bool = False
    witness: object = None


def algebra_operad_correspondence(a_op: Multicategory, xs: FiniteSet,
                                  end_bound: int | None = None) -> Correspondence:
    """Enumerate algebras on ``xs`` and maps into End(xs) independently, then
    verify that the two translations are mutually inverse bijections."""
    if not isinstance(a_op.plugin, FreeMonoid) or a_op.objects != ONE:
        raise MalformedError("the correspondence is implemented for one-object free-monoid operads")
    bound = end_bound or max((_arity(a_op, a) for a in a_op.arrows), default=1) or 1
    end = endomorphism_operad(xs, bound)
    algs = _algebras_on(a_op, SliceObject(xs, FiniteMap(xs, ONE, {v: STAR for v in xs})),
                        [0], 2_000_000)
    maps = enumerate_maps(a_op, end, FiniteMap(ONE, ONE, {STAR: STAR}))
    corr = Correspondence(algs, maps)
    map_keys = {tuple(sorted(f.arrows.table.items())): f for f in maps}
    seen = set()
    for alg in algs:
        f = algebra_to_map(a_op, alg, end)
        k = tuple(sorted(f.arrows.table.items()))
        if k not in map_keys or not check_map(f, a_op, end):
            corr.witness = ("algebra_without_map", alg)
            return corr
        if k in seen:
            corr.witness = ("not_injective", alg)
            return corr
        seen.add(k)
        if map_to_algebra(a_op, f, end).h != alg.h:
            corr.witness = ("round_trip", alg)
            return corr
        corr.forward[alg.h] = f
    if len(seen) != len(maps):
        corr.witness = ("map_without_algebra", len(maps) - len(seen))
        return corr
    for f in maps:
        if not check_algebra(a_op, map_to_algebra(a_op, f, end)):
            corr.witness = ("map_gives_invalid_algebra", f)
            return corr
    corr.ok = True
    return corr


# -- slicing and restriction ----------------------------------------------------

def slice_multicat(m: Multicategory, alg: Algebra) -> Multicategory:
    """The multicategory on the carrier whose arrows are the blob elements."""
    v = check_algebra(m, alg)
    if not v:
        raise MalformedError(f"not an algebra: {v.witness}")
    x = alg.carrier
    b = blob(m, x)
    bb = _blob_within(m, b, b.X_blob)
    mu = blob_mult(m, x, b, bb)
    plugin = m.plugin
    dom = dict(b.phi)
    cod = alg.h
    ids = blob_unit(m, x, b)
    comp = {}
    for E, c in mu.items():
        w, a = E.fst, E.snd
        xi = Pair(plugin.apply(alg.h, w), a)
        comp[Pair(w, xi)] = c
    return Multicategory(plugin, x.X, b.X_blob, dom, FiniteMap(b.X_blob, x.X, cod.table), ids, comp, m.bound)


def restrict_algebra(f: MulticategoryMap, m: Multicategory, m2: Multicategory, alg2: Algebra) -> Algebra:
    """Pull an algebra of ``m2`` back along ``f: m -> m2``."""
    if not check_map(f, m, m2):
        raise MalformedError("restriction needs a valid multicategory map")
    plugin = m.plugin
    x2 = alg2.carrier
    g = f.objects
    xs = FiniteSet(Pair(v, s) for v in x2.X for s in m.objects if x2.p(v) == g(s))
    x = SliceObject(xs, FiniteMap(xs, m.objects, {e: e.snd for e in xs}))
    b = blob(m, x)
    h = {}
    for e in b.X_blob:
        u, a = e.fst, e.snd
        v = alg2.h(Pair(plugin.apply(lambda q: q.fst, u), f.arrows(a)))
        h[e] = Pair(v, m.cod(a))
    return Algebra(x, FiniteMap(b.X_blob, xs, h))


def is_algebra_map(m: Multicategory, k: FiniteMap, src: Algebra, tgt: Algebra) -> bool:
    """``k`` lies over the objects and commutes with the structure maps."""
    if any(tgt.carrier.p(k(v)) != src.carrier.p(v) for v in src.carrier.X):
        return False
    act = blob_map(m, k)
    return all(k(src.h(e)) == tgt.h(act(e)) for e in src.h.source)


def algebra_maps(m: Multicategory, src: Algebra, tgt: Algebra) -> list:
    return [k for k in all_maps(src.carrier.X, tgt.carrier.X) if is_algebra_map(m, k, src, tgt)]


def sliced_monads_agree(m: Multicategory, alg: Algebra, y: SliceObject) -> Verdict:
    """Compare the monad of the slice multicategory with the induced monad
    sliced at the algebra, at a slice object ``k: Y -> X``."""
    plugin = m.plugin
    mh = slice_multicat(m, alg)
    k = y.p
    x = alg.carrier
    over_s = SliceObject(y.X, FiniteMap(y.X, m.objects, {v: x.p(k(v)) for v in y.X}))
    left = blob(mh, y)
    right = blob(m, over_s)
    # (v, (k v, a)) in the slice multicategory's blob  <->  (v, a).
    iso = {e: Pair(e.fst, e.snd.snd) for e in left.X_blob}
    if set(iso.values()) != set(right.X_blob.elements) or len(iso) != len(right.X_blob):
        return Verdict(False, ("carrier", len(left.X_blob), len(right.X_blob)))
    act = blob_map(m, k)
    for e, e2 in iso.items():
        if left.p_blob(e) != alg.h(act(e2)) or left.phi[e] != right.phi[e2]:
            return Verdict(False, ("legs", e))
    for v, e in blob_unit(mh, y, left).items():
        if iso[e] != blob_unit(m, over_s, right)(v):
            return Verdict(False, ("unit", v))
    mu_l = blob_mult(mh, y, left)
    mu_r = blob_mult(m, over_s, right)
    for E, c in mu_l.items():
        E2 = Pair(plugin.apply(iso.__getitem__, E.fst), E.snd.snd)
        if mu_r.get(E2) != iso[c]:
            return Verdict(False, ("multiplication", E))
    if len(mu_l) != len(mu_r):
        return Verdict(False, ("multiplication_domain", len(mu_l), len(mu_r)))
    return Verdict(True)
