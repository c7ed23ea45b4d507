"""(S,T)-multicategories: T-graphs with identities and composition.

Composition is stored extensionally: ``comp[Pair(u, a)]`` where ``u`` is a
T-term of arrows whose codomains spell out ``dom[a]``.  A multicategory may
carry a ``bound``; then ``comp`` is allowed to omit pairs whose composite
would leave the bounded fragment and every law is checked only where all the
composites involved are present.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MalformedError, guard
from .finset import (
    Atom, Element, FiniteMap, FiniteSet, ONE, Pair, STAR, Tag, Verdict,
    as_element, identity,
)
from .monads import Exceptions, IdentityMonad, MonadPlugin, Writer, unflatten
from .spans import TSpan

__all__ = [
    "Multicategory", "MulticategoryMap", "AxiomReport", "composable_pairs",
    "check_axioms", "check_map", "terminal_multicat", "FiniteCategory",
    "from_category", "standard_multicat", "extract_standard", "enumerate_maps",
    "identity_map", "compose_maps", "terminal_map_into",
]


@dataclass(eq=False)
class Multicategory:
    plugin: MonadPlugin
    objects: FiniteSet
    arrows: FiniteSet
    dom: dict
    cod: FiniteMap
    ids: FiniteMap
    comp: dict
    bound: int | None = None

    def __post_init__(self):
        p = self.plugin
        if set(self.dom) != set(self.arrows.elements):
            raise MalformedError("dom must be total on the arrows")
        for a, t in self.dom.items():
            if not p.is_over(t, self.objects):
                raise MalformedError(f"dom of {a} is not a term over the objects")
        if self.cod.source != self.arrows or self.cod.target != self.objects:
            raise MalformedError("cod must map arrows to objects")
        if self.ids.source != self.objects or self.ids.target != self.arrows:
            raise MalformedError("ids must map objects to arrows")
        for key, c in self.comp.items():
            if not isinstance(key, Pair) or key.snd not in self.arrows:
                raise MalformedError(f"comp key {key} is not a pair (u, a)")
            if not p.is_over(key.fst, self.arrows):
                raise MalformedError(f"comp key {key} has a malformed arrow term")
            if p.apply(self.cod, key.fst) != self.dom[key.snd]:
                raise MalformedError(f"comp key {key} is not composable")
            if c not in self.arrows:
                raise MalformedError(f"composite {c} is not an arrow")

    @property
    def graph(self) -> TSpan:
        return TSpan(self.plugin, self.objects, self.objects, self.arrows, dict(self.dom), self.cod)

    def composite(self, key: Pair):
        """The composite recorded for ``Pair(u, a)``, or None if absent."""
        return self.comp.get(key)

    def comp_items(self):
        return sorted(self.comp.items(), key=lambda kv: kv[0].key())

    def __eq__(self, other):
        return (isinstance(other, Multicategory) and self.plugin == other.plugin
                and self.objects == other.objects and self.arrows == other.arrows
                and self.dom == other.dom and self.cod == other.cod
                and self.ids == other.ids and self.bound == other.bound
                and dict(self.comp_items()) == dict(other.comp_items()))

    __hash__ = None

    def __repr__(self):
        return (f"Multicategory({self.plugin.name}, |S|={len(self.objects)}, "
                f"|A|={len(self.arrows)}, bound={self.bound})")


@dataclass(frozen=True)
class MulticategoryMap:
    arrows: FiniteMap
    objects: FiniteMap


def composable_pairs(m: Multicategory) -> list:
    out = []
    for a in m.arrows:
        for u in m.plugin.enumerate_fiber(m.cod, m.dom[a]):
            out.append(Pair(u, a))
    return sorted(out, key=Element.key)


@dataclass
class AxiomReport:
    ok: bool
    failures: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)
    truncated: bool = False
    bound: int | None = None

    def __bool__(self):
        return self.ok

    @property
    def witness(self):
        return self.failures[0] if self.failures else None


def _fiber_enumerator(m: Multicategory):
    """Fibers of ``T(cod)``, pruned for bounded ``m`` to terms whose arrows'
    domain sizes sum to at most the largest domain size present.

    Sound because every plugin's multiplication never shrinks total size, so
    a pruned term cannot have an in-bound composite.
    """
    p = m.plugin
    if m.bound is None:
        return lambda t: p.enumerate_fiber(m.cod, t)
    weight = {a: p.size(m.dom[a]) for a in m.arrows}
    budget = max(weight.values(), default=0)
    by_cod: dict = {}
    for a in m.arrows:
        by_cod.setdefault(m.cod(a), []).append(a)

    def fiber(t):
        out = []
        pools = [by_cod.get(s, []) for s in p.labels(t)]

        def go(i, left, acc):
            if i == len(pools):
                out.append(p.fill(t, acc))
                return
            for a in pools[i]:
                if weight[a] <= left:
                    go(i + 1, left - weight[a], acc + [a])

        go(0, budget, [])
        return out

    return fiber


def check_axioms(m: Multicategory, limit: int = 1) -> AxiomReport:
    """Leg compatibility, both unit laws and associativity.

    Stops collecting witnesses after ``limit`` failures per law (counting
    continues).  With a bound, only in-bound composites are quantified over.
    """
    p = m.plugin
    fails: dict = {}
    checked: dict = {}

    def fail(law, witness):
        fails.setdefault(law, []).append(witness)

    for s in m.objects:
        i = m.ids(s)
        if m.dom[i] != p.unit(s) or m.cod(i) != s:
            fail("identity_legs", s)
    pairs = composable_pairs(m)
    checked["composable_pairs"] = len(pairs)
    truncated = False
    for key in pairs:
        c = m.composite(key)
        if c is None:
            truncated = True
            if m.bound is None:
                fail("comp_total", key)
            continue
        u, a = key.fst, key.snd
        if m.dom[c] != p.mult(p.apply(m.dom.__getitem__, u)) or m.cod(c) != m.cod(a):
            fail("comp_legs", key)
    n = 0
    for a in m.arrows:
        n += 1
        left = m.composite(Pair(p.apply(m.ids, m.dom[a]), a))
        if left is not None and left != a:
            fail("left_unit", a)
        right = m.composite(Pair(p.unit(a), m.ids(m.cod(a))))
        if right is not None and right != a:
            fail("right_unit", a)
    checked["unit"] = n
    fiber = _fiber_enumerator(m)
    n = 0
    for key in pairs:
        ua = m.composite(key)
        if ua is None:
            continue
        u, a = key.fst, key.snd
        template = p.apply(m.dom.__getitem__, u)
        for v in fiber(p.mult(template)):
            first = m.composite(Pair(v, ua))
            if first is None:
                continue
            split = unflatten(p, v, template)
            inner = []
            ok = True
            for w, ui in zip(p.labels(split), p.labels(u)):
                c = m.composite(Pair(w, ui))
                if c is None:
                    ok = False
                    break
                inner.append(c)
            if not ok:
                continue
            second = m.composite(Pair(p.fill(u, inner), a))
            if second is None:
                continue
            n += 1
            if first != second:
                fail("associativity", Pair(v, key))
    checked["associativity"] = n
    failures = [(law, w) for law in sorted(fails) for w in fails[law][:limit]]
    return AxiomReport(not fails, failures, checked, truncated, m.bound)


def check_map(f: MulticategoryMap, m: Multicategory, m2: Multicategory) -> Verdict:
    """Graph square, identities and composition preserved."""
    p = m.plugin
    if p != m2.plugin:
        raise MalformedError("maps need a common monad")
    if f.arrows.source != m.arrows or f.arrows.target != m2.arrows:
        raise MalformedError("arrow component has the wrong endpoints")
    if f.objects.source != m.objects or f.objects.target != m2.objects:
        raise MalformedError("object component has the wrong endpoints")
    for a in m.arrows:
        b = f.arrows(a)
        if p.apply(f.objects, m.dom[a]) != m2.dom[b] or f.objects(m.cod(a)) != m2.cod(b):
            return Verdict(False, ("graph", a))
    for s in m.objects:
        if f.arrows(m.ids(s)) != m2.ids(f.objects(s)):
            return Verdict(False, ("ids", s))
    for key, c in m.comp_items():
        image = m2.composite(Pair(p.apply(f.arrows, key.fst), f.arrows(key.snd)))
        if image is None:
            if m2.bound is None:
                return Verdict(False, ("comp_undefined", key))
            continue
        if image != f.arrows(c):
            return Verdict(False, ("comp", key))
    return Verdict(True)


def identity_map(m: Multicategory) -> MulticategoryMap:
    return MulticategoryMap(identity(m.arrows), identity(m.objects))


def compose_maps(g: MulticategoryMap, f: MulticategoryMap) -> MulticategoryMap:
    from .finset import compose
    return MulticategoryMap(compose(g.arrows, f.arrows), compose(g.objects, f.objects))


def terminal_multicat(plugin: MonadPlugin, arity_bound: int) -> Multicategory:
    """One object; one arrow per shape of size at most ``arity_bound``."""
    if arity_bound < 1:
        raise ValueError("arity_bound must be >= 1")
    arrows = FiniteSet(plugin.shapes(arity_bound))
    dom = {t: t for t in arrows}
    cod = FiniteMap(arrows, ONE, {t: STAR for t in arrows})
    ids = FiniteMap(ONE, arrows, {STAR: plugin.unit(STAR)})
    comp = {}
    for a in arrows:
        for u in plugin.enumerate_fiber(cod, a):
            c = plugin.mult(u)
            if c in arrows:
                comp[Pair(u, a)] = c
    return Multicategory(plugin, ONE, arrows, dom, cod, ids, comp, arity_bound)


def terminal_map_into(m: Multicategory, terminal: Multicategory) -> MulticategoryMap:
    """The forced map ``m -> terminal``: every arrow goes to its shape."""
    p = m.plugin
    objects = FiniteMap(m.objects, terminal.objects, {s: STAR for s in m.objects})
    arrows = FiniteMap(m.arrows, terminal.arrows, {a: p.shape(m.dom[a]) for a in m.arrows})
    return MulticategoryMap(arrows, objects)


# -- ordinary categories and the standard encodings -------------------------

@dataclass
class FiniteCategory:
    """Plain finite category data, with names as ints or strings.

    ``arrows[f] = (source, target)``; ``comp[(g, f)]`` is ``g . f``.
    """
    objects: list
    arrows: dict
    ids: dict
    comp: dict

    def __post_init__(self):
        self.objects = [x.name for x in FiniteSet(self.objects)]

    def composable(self):
        return [(g, f) for f in sorted(self.arrows, key=str) for g in sorted(self.arrows, key=str)
                if self.arrows[f][1] == self.arrows[g][0]]


def from_category(c: FiniteCategory) -> Multicategory:
    """Identity-monad encoding.  No validation beyond well-typing, so that
    broken categories yield failing axiom reports rather than errors."""
    plugin = IdentityMonad()
    objects = FiniteSet(c.objects)
    arrows = FiniteSet(c.arrows)
    dom = {as_element(f): as_element(st[0]) for f, st in c.arrows.items()}
    cod = FiniteMap(arrows, objects, {f: st[1] for f, st in c.arrows.items()})
    ids = FiniteMap(objects, arrows, dict(c.ids))
    comp = {Pair(f, g): as_element(h) for (g, f), h in c.comp.items()}
    return Multicategory(plugin, objects, arrows, dom, cod, ids, comp)


def _name(x: Element):
    if not isinstance(x, Atom):
        raise MalformedError(f"{x} is not a named element")
    return x.name


def _to_category(m: Multicategory, keep) -> FiniteCategory:
    """Read back the arrows selected by ``keep`` as a plain category."""
    arrows = [a for a in m.arrows if keep(a)]
    sel = set(arrows)
    src = {}
    for a in arrows:
        d = m.dom[a]
        src[a] = d.snd if isinstance(m.plugin, Writer) else (d.value if isinstance(d, Tag) else d)
    cat_arrows = {_name(a): (_name(src[a]), _name(m.cod(a))) for a in arrows}
    ids = {_name(s): _name(m.ids(s)) for s in m.objects}
    comp = {}
    for key, c in m.comp.items():
        if key.snd not in sel or c not in sel:
            continue
        u = key.fst
        if isinstance(u, Tag) and u.label != "val":
            continue
        f = u.snd if isinstance(m.plugin, Writer) else (u.value if isinstance(u, Tag) else u)
        if f in sel:
            comp[(_name(key.snd), _name(f))] = _name(c)
    return FiniteCategory([_name(s) for s in m.objects], cat_arrows, ids, comp)


def standard_multicat(kind: str, data: dict) -> Multicategory:
    """Build one of the standard encodings and validate it.

    ``category``: ``{"category": FiniteCategory}`` (identity monad).
    ``category_with_set_functor``: adds ``"functor": {obj: [elements]}`` and
    ``"action": {(arrow, element): element}``; uses the exceptions monad with
    one exception ``0``.  Element ``y`` of ``Y(s)`` becomes the arrow
    ``Tag("elt", Pair(s, y))`` with empty domain.
    ``category_over_monoid``: adds ``"monoid"`` (a multiplication table) and
    ``"labels": {arrow: monoid element}``; uses the writer monad.
    """
    cat = data["category"]
    if kind == "category":
        m = from_category(cat)
    elif kind == "category_with_set_functor":
        m = _functor_encoding(cat, data["functor"], data["action"])
    elif kind == "category_over_monoid":
        m = _monoid_encoding(cat, data["monoid"], data["labels"])
    else:
        raise MalformedError(f"unknown standard kind {kind!r}")
    report = check_axioms(m)
    if not report:
        raise MalformedError(f"invalid {kind} data: {report.witness}")
    return m


def _functor_encoding(cat, functor, action) -> Multicategory:
    plugin = Exceptions([0])
    exc = Tag("exc", Atom(0))
    objects = FiniteSet(cat.objects)
    elts = {as_element(s): [as_element(y) for y in ys] for s, ys in functor.items()}
    if set(elts) != set(objects.elements):
        raise MalformedError("functor must give a set for every object")
    elt_arrow = {(s, y): Tag("elt", Pair(s, y)) for s, ys in elts.items() for y in ys}
    arrows = FiniteSet(list(map(as_element, cat.arrows)) + list(elt_arrow.values()))
    dom = {as_element(f): Tag("val", as_element(st[0])) for f, st in cat.arrows.items()}
    cod_t = {as_element(f): as_element(st[1]) for f, st in cat.arrows.items()}
    for (s, y), e in elt_arrow.items():
        dom[e] = exc
        cod_t[e] = s
    cod = FiniteMap(arrows, objects, cod_t)
    ids = FiniteMap(objects, arrows, dict(cat.ids))
    comp = {}
    for (g, f), h in cat.comp.items():
        comp[Pair(Tag("val", f), g)] = as_element(h)
    for (f, y), y2 in action.items():
        f = as_element(f)
        s, t = as_element(cat.arrows[f.name][0]), as_element(cat.arrows[f.name][1])
        comp[Pair(Tag("val", elt_arrow[(s, as_element(y))]), f)] = elt_arrow[(t, as_element(y2))]
    for e in elt_arrow.values():
        comp[Pair(exc, e)] = e
    return Multicategory(plugin, objects, arrows, dom, cod, ids, comp)


def _monoid_encoding(cat, table, labels) -> Multicategory:
    plugin = Writer(table)
    objects = FiniteSet(cat.objects)
    arrows = FiniteSet(cat.arrows)
    lab = {as_element(f): Atom(int(m)) for f, m in labels.items()}
    if set(lab) != set(arrows.elements):
        raise MalformedError("every arrow needs a monoid label")
    dom = {as_element(f): Pair(lab[as_element(f)], as_element(st[0])) for f, st in cat.arrows.items()}
    cod = FiniteMap(arrows, objects, {f: st[1] for f, st in cat.arrows.items()})
    ids = FiniteMap(objects, arrows, dict(cat.ids))
    comp = {}
    for (g, f), h in cat.comp.items():
        g = as_element(g)
        comp[Pair(Pair(lab[g], f), g)] = as_element(h)
    return Multicategory(plugin, objects, arrows, dom, cod, ids, comp)


def extract_standard(kind: str, m: Multicategory) -> dict:
    if kind == "category":
        return {"category": _to_category(m, lambda a: True)}
    if kind == "category_with_set_functor":
        is_elt = lambda a: isinstance(a, Tag) and a.label == "elt"
        cat = _to_category(m, lambda a: not is_elt(a))
        functor = {_name(s): [] for s in m.objects}
        for a in m.arrows:
            if is_elt(a):
                functor[_name(a.value.fst)].append(_name(a.value.snd))
        action = {}
        for key, c in m.comp.items():
            u = key.fst
            if isinstance(u, Tag) and u.label == "val" and is_elt(u.value):
                action[(_name(key.snd), _name(u.value.value.snd))] = _name(c.value.snd)
        return {"category": cat, "functor": functor, "action": action}
    if kind == "category_over_monoid":
        cat = _to_category(m, lambda a: True)
        labels = {_name(a): m.dom[a].fst.name for a in m.arrows}
        return {"category": cat, "monoid": [list(r) for r in m.plugin.table], "labels": labels}
    raise MalformedError(f"unknown standard kind {kind!r}")


# -- exhaustive map search ----------------------------------------------------

def enumerate_maps(m: Multicategory, m2: Multicategory, objects: FiniteMap | None = None,
                   cap: int = 1_000_000) -> list:
    """All multicategory maps ``m -> m2`` (optionally with a fixed object map).

    Backtracking over arrows; an arrow that is a recorded composite of
    already-assigned arrows is forced rather than branched on.
    """
    from .finset import all_maps
    p = m.plugin
    obj_maps = [objects] if objects is not None else list(all_maps(m.objects, m2.objects))
    entries = m.comp_items()
    out = []
    visited = [0]
    for g in obj_maps:
        cands = {}
        for a in m.arrows:
            want_dom = p.apply(g, m.dom[a])
            want_cod = g(m.cod(a))
            cands[a] = [b for b in m2.arrows if m2.dom[b] == want_dom and m2.cod(b) == want_cod]
        forced_ids = {m.ids(s): m2.ids(g(s)) for s in m.objects}
        # Order arrows so that composites come after their parts when possible.
        order = sorted(m.arrows, key=lambda a: (p.size(m.dom[a]), a.key()))
        rank = {a: i for i, a in enumerate(order)}
        by_arrow: dict = {a: [] for a in order}
        for key, c in entries:
            parts = set(p.labels(key.fst)) | {key.snd, c}
            last = max(parts, key=rank.__getitem__)
            by_arrow[last].append((key, c))
        makers: dict = {}
        for key, c in entries:
            parts = set(p.labels(key.fst)) | {key.snd}
            if c not in parts and all(rank[x] < rank[c] for x in parts):
                makers.setdefault(c, (key, parts))
        assign: dict = {}

        def consistent(a):
            for key, c in by_arrow[a]:
                image = m2.composite(Pair(p.apply(assign.__getitem__, key.fst), assign[key.snd]))
                if image is None:
                    if m2.bound is None:
                        return False
                    continue
                if image != assign[c]:
                    return False
            return True

        def go(i):
            visited[0] += 1
            guard(visited[0], cap, "map search")
            if i == len(order):
                f = MulticategoryMap(FiniteMap(m.arrows, m2.arrows, dict(assign)), g)
                out.append(f)
                return
            a = order[i]
            if a in forced_ids:
                options = [forced_ids[a]] if forced_ids[a] in cands[a] else []
            elif a in makers:
                key, _ = makers[a]
                image = m2.composite(Pair(p.apply(assign.__getitem__, key.fst), assign[key.snd]))
                options = cands[a] if image is None else ([image] if image in cands[a] else [])
            else:
                options = cands[a]
            for b in options:
                assign[a] = b
                if consistent(a):
                    go(i + 1)
                del assign[a]

        go(0)
    return out
