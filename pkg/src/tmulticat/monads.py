"""Cartesian monads on finite sets, given elementwise.

A plugin never materializes ``T(X)``.  Each element of ``T(X)`` is a term with
a *shape* (an element of ``T(1)``) and an ordered tuple of *labels* drawn
from ``X``; :meth:`MonadPlugin.labels` and :meth:`MonadPlugin.fill` move
between the two views.  Everything else (functorial action, fiber
enumeration, bounded enumeration) is derived from that decomposition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import MalformedError, guard
from .finset import (
    Atom, Element, FiniteMap, FiniteSet, ONE, Pair, Seq, STAR, Tag, TreeNode,
    Verdict, as_element, is_pullback, pullback,
)

__all__ = [
    "MonadPlugin", "IdentityMonad", "FreeMonoid", "FreeCommutativeMonoid",
    "Exceptions", "Writer", "TreeMonad", "make_plugin", "apply_map", "unit",
    "mult", "enumerate_fiber", "enumerate_telements", "enumerate_nested",
    "unflatten", "check_monad_laws", "check_cartesian", "LawReport",
    "CartesianReport",
]


def _as_fn(f):
    if isinstance(f, FiniteMap):
        return f.table.__getitem__
    return f


class MonadPlugin:
    """Base class: subclasses supply labels/fill/unit/mult/size/shapes."""

    name = "abstract"
    cartesian = True

    def params(self) -> dict:
        return {}

    # -- term structure -------------------------------------------------
    def labels(self, t: Element) -> tuple:
        raise NotImplementedError

    def fill(self, t: Element, labels: Sequence[Element]) -> Element:
        raise NotImplementedError

    def unit(self, x: Element) -> Element:
        raise NotImplementedError

    def mult(self, tt: Element) -> Element:
        raise NotImplementedError

    def size(self, t: Element) -> int:
        return 1

    def shapes(self, bound: int) -> Iterator[Element]:
        """All shapes (elements of T(1)) of size at most ``bound``."""
        raise NotImplementedError

    def is_term(self, t) -> bool:
        try:
            self.labels(t)
        except (MalformedError, AttributeError, TypeError, IndexError):
            return False
        return True

    # -- derived ----------------------------------------------------------
    def shape(self, t: Element) -> Element:
        return self.fill(t, [STAR] * len(self.labels(t)))

    def apply(self, f, t: Element) -> Element:
        f = _as_fn(f)
        return self.fill(t, [f(x) for x in self.labels(t)])

    def is_over(self, t, xs: FiniteSet) -> bool:
        return self.is_term(t) and all(x in xs for x in self.labels(t))

    def check_over(self, t, xs: FiniteSet) -> Element:
        if not self.is_over(t, xs):
            raise MalformedError(f"{t} is not a {self.name} term over the given set")
        return t

    def enumerate_telements(self, xs: FiniteSet, bound: int, cap=None) -> list:
        out = []
        for s in self.shapes(bound):
            n = len(self.labels(s))
            if cap is not None:
                guard(len(out) + len(xs) ** n, cap, "T-element enumeration")
            for ls in itertools.product(xs.elements, repeat=n):
                out.append(self.fill(s, ls))
        return sorted(set(out), key=Element.key)

    def enumerate_fiber(self, c: FiniteMap, t: Element) -> list:
        """All ``u`` over ``c.source`` with ``apply(c, u) == t``."""
        self.check_over(t, c.target)
        by_image: dict = {}
        for a, s in c.table.items():
            by_image.setdefault(s, []).append(a)
        pools = [sorted(by_image.get(s, ()), key=Element.key) for s in self.labels(t)]
        return sorted({self.fill(t, ls) for ls in itertools.product(*pools)}, key=Element.key)

    def __eq__(self, other):
        return type(self) is type(other) and self.params() == other.params()

    def __hash__(self):
        return hash((self.name, repr(sorted(self.params().items()))))

    def __repr__(self):
        return f"{type(self).__name__}({self.params() or ''})"


class IdentityMonad(MonadPlugin):
    name = "identity"

    def labels(self, t):
        if not isinstance(t, Element):
            raise MalformedError(f"{t!r} is not an element")
        return (t,)

    def fill(self, t, labels):
        (x,) = labels
        return x

    def unit(self, x):
        return x

    def mult(self, tt):
        return tt

    def shapes(self, bound):
        if bound >= 1:
            yield STAR


class FreeMonoid(MonadPlugin):
    """Words: ``Seq`` terms, size = length."""

    name = "free_monoid"

    def labels(self, t):
        if not isinstance(t, Seq):
            raise MalformedError(f"{t} is not a word")
        return t.items

    def fill(self, t, labels):
        labels = tuple(labels)
        if len(labels) != len(self.labels(t)):
            raise MalformedError("label count does not match the shape")
        return Seq(labels)

    def unit(self, x):
        return Seq((x,))

    def mult(self, tt):
        return Seq(tuple(x for w in self.labels(tt) for x in self.labels(w)))

    def size(self, t):
        return len(self.labels(t))

    def shapes(self, bound):
        for n in range(bound + 1):
            yield Seq((STAR,) * n)


class FreeCommutativeMonoid(FreeMonoid):
    """Finite multisets as sorted words.  Not cartesian; kept as a control."""

    name = "free_commutative_monoid"
    cartesian = False

    def labels(self, t):
        items = super().labels(t)
        if list(items) != sorted(items, key=Element.key):
            raise MalformedError(f"{t} is not a sorted multiset")
        return items

    def fill(self, t, labels):
        labels = tuple(labels)
        if len(labels) != len(self.labels(t)):
            raise MalformedError("label count does not match the shape")
        return Seq(sorted(labels, key=Element.key))

    def unit(self, x):
        return Seq((x,))

    def mult(self, tt):
        return Seq(sorted((x for w in self.labels(tt) for x in self.labels(w)), key=Element.key))


class Exceptions(MonadPlugin):
    """``X + E``: ``Tag('val', x)`` or ``Tag('exc', e)``."""

    name = "exceptions"

    def __init__(self, exceptions: Iterable = ()):
        self.E = exceptions if isinstance(exceptions, FiniteSet) else FiniteSet(exceptions)

    def params(self):
        return {"E": list(self.E.elements)}

    def labels(self, t):
        if isinstance(t, Tag) and t.label == "val":
            return (t.value,)
        if isinstance(t, Tag) and t.label == "exc" and t.value in self.E:
            return ()
        raise MalformedError(f"{t} is not an exceptions term")

    def fill(self, t, labels):
        labels = tuple(labels)
        if len(labels) != len(self.labels(t)):
            raise MalformedError("label count does not match the shape")
        return Tag("val", labels[0]) if labels else t

    def unit(self, x):
        return Tag("val", x)

    def mult(self, tt):
        self.labels(tt)
        return tt.value if tt.label == "val" else tt

    def shapes(self, bound):
        if bound >= 1:
            yield Tag("val", STAR)
            for e in self.E:
                yield Tag("exc", e)


class Writer(MonadPlugin):
    """``M x X`` for a finite monoid given by its multiplication table."""

    name = "writer"

    def __init__(self, table: Sequence[Sequence[int]]):
        table = tuple(tuple(int(v) for v in row) for row in table)
        k = len(table)
        if k == 0 or any(len(row) != k for row in table):
            raise MalformedError("writer table must be a non-empty square")
        if any(not 0 <= v < k for row in table for v in row):
            raise MalformedError("writer table entries out of range")
        for a, b, c in itertools.product(range(k), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise MalformedError(f"writer table not associative at {(a, b, c)}")
        units = [e for e in range(k) if all(table[e][x] == x == table[x][e] for x in range(k))]
        if not units:
            raise MalformedError("writer table has no unit")
        self.table = table
        self.e = units[0]
        self.M = FiniteSet(Atom(i) for i in range(k))

    def params(self):
        return {"table": [list(r) for r in self.table]}

    def times(self, m: Atom, n: Atom) -> Atom:
        return Atom(self.table[m.name][n.name])

    def labels(self, t):
        if isinstance(t, Pair) and t.fst in self.M:
            return (t.snd,)
        raise MalformedError(f"{t} is not a writer term")

    def fill(self, t, labels):
        (x,) = labels
        self.labels(t)
        return Pair(t.fst, x)

    def unit(self, x):
        return Pair(Atom(self.e), x)

    def mult(self, tt):
        (inner,) = self.labels(tt)
        self.labels(inner)
        return Pair(self.times(tt.fst, inner.fst), inner.snd)

    def shapes(self, bound):
        if bound >= 1:
            for m in self.M:
                yield Pair(m, STAR)


NODE = Atom("node")


class TreeMonad(MonadPlugin):
    """Planar trees with labelled leaves (one n-ary operation per n).

    Leaves are ``Tag('leaf', x)``; internal nodes ``TreeNode(node, children)``.
    Size counts leaves and internal nodes together.
    """

    name = "tree"

    def labels(self, t):
        out: list = []
        stack = [t]
        while stack:
            s = stack.pop()
            if isinstance(s, Tag) and s.label == "leaf":
                out.append(s.value)
            elif isinstance(s, TreeNode) and s.label == NODE:
                stack.extend(reversed(s.children))
            else:
                raise MalformedError(f"{s} is not a tree term")
        return tuple(out)

    def fill(self, t, labels):
        it = iter(labels)

        def go(s):
            if isinstance(s, Tag) and s.label == "leaf":
                return Tag("leaf", next(it))
            if isinstance(s, TreeNode) and s.label == NODE:
                return TreeNode(NODE, [go(c) for c in s.children])
            raise MalformedError(f"{s} is not a tree term")

        out = go(t)
        if next(it, None) is not None:
            raise MalformedError("too many labels for the tree shape")
        return out

    def unit(self, x):
        return Tag("leaf", x)

    def mult(self, tt):
        if isinstance(tt, Tag) and tt.label == "leaf":
            self.labels(tt.value)
            return tt.value
        if isinstance(tt, TreeNode) and tt.label == NODE:
            return TreeNode(NODE, [self.mult(c) for c in tt.children])
        raise MalformedError(f"{tt} is not a tree term")

    def size(self, t):
        if isinstance(t, Tag):
            return 1
        return 1 + sum(self.size(c) for c in t.children)

    def shapes(self, bound):
        return iter(_tree_shapes(bound))


@lru_cache(maxsize=None)
def _tree_shapes(bound: int) -> tuple:
    if bound < 1:
        return ()
    out = [Tag("leaf", STAR)]
    for kids in _forests(bound - 1):
        out.append(TreeNode(NODE, kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(budget: int) -> tuple:
    """Sequences of tree shapes whose sizes sum to at most ``budget``."""
    out = [()]
    for first in _tree_shapes(budget):
        rest_budget = budget - TreeMonad().size(first)
        for rest in _forests(rest_budget):
            out.append((first,) + rest)
    return tuple(out)


def make_plugin(name: str, **params) -> MonadPlugin:
    if name == "identity":
        return IdentityMonad()
    if name == "free_monoid":
        return FreeMonoid()
    if name == "free_commutative_monoid":
        return FreeCommutativeMonoid()
    if name == "exceptions":
        return Exceptions(params.get("E", [0]))
    if name == "writer":
        return Writer(params.get("table", [[0, 1], [1, 0]]))
    if name == "tree":
        return TreeMonad()
    raise MalformedError(f"unknown monad {name!r}")


# -- module-level operations ------------------------------------------------

def apply_map(plugin: MonadPlugin, f: FiniteMap, t: Element) -> Element:
    plugin.check_over(t, f.source)
    return plugin.apply(f, t)


def unit(plugin: MonadPlugin, x: Element) -> Element:
    return plugin.unit(as_element(x))


def mult(plugin: MonadPlugin, tt: Element) -> Element:
    for inner in plugin.labels(tt):
        if not plugin.is_term(inner):
            raise MalformedError(f"inner label {inner} is not a {plugin.name} term")
    return plugin.mult(tt)


def enumerate_fiber(plugin: MonadPlugin, c: FiniteMap, t: Element) -> list:
    return plugin.enumerate_fiber(c, t)


def enumerate_telements(plugin: MonadPlugin, xs: FiniteSet, bound: int, cap=None) -> list:
    return plugin.enumerate_telements(xs, bound, cap)


def unflatten(plugin: MonadPlugin, flat: Element, template: Element) -> Element:
    """Split ``flat`` along the two-level ``template``.

    Returns the unique two-level term with the template's shapes whose
    flattening is ``flat``; this is the inverse supplied by the multiplication
    square being a pullback.
    """
    inner = plugin.labels(template)
    ls = plugin.labels(flat)
    pos = 0
    parts = []
    for w in inner:
        n = len(plugin.labels(w))
        parts.append(plugin.fill(w, ls[pos:pos + n]))
        pos += n
    if pos != len(ls):
        raise MalformedError("term does not match the template's flattened shape")
    return plugin.fill(template, parts)


def enumerate_nested(plugin: MonadPlugin, xs: FiniteSet, bound: int, levels: int = 2) -> list:
    """Bounded elements of ``T^levels(X)``.

    Level two: outer shape of size <= bound carrying inner terms whose sizes
    sum to at most ``bound``.  Level three: the total size over all layers is
    at most ``bound``.  Both constraints depend on shape only, so the result
    is a union of full fibers over shapes.
    """
    if levels == 1:
        return plugin.enumerate_telements(xs, bound)
    if levels == 2:
        pool = [(t, plugin.size(t)) for t in plugin.enumerate_telements(xs, bound)]
        return _fill_with_budget(plugin, pool, bound, bound)
    if levels == 3:
        def total(term, depth):
            if depth == 1:
                return plugin.size(term)
            return plugin.size(term) + sum(total(x, depth - 1) for x in plugin.labels(term))

        lvl1 = [(t, plugin.size(t)) for t in plugin.enumerate_telements(xs, bound)]
        lvl2 = [(t, total(t, 2)) for t in _fill_with_budget(plugin, lvl1, bound, bound)]
        out = []
        for s in plugin.shapes(bound):
            n = len(plugin.labels(s))
            budget = bound - plugin.size(s)
            for combo in _choose(lvl2, n, budget):
                out.append(plugin.fill(s, combo))
        return sorted(set(out), key=Element.key)
    raise ValueError("levels must be 1, 2 or 3")


def _choose(pool, n, budget):
    pool = sorted(pool, key=lambda p: p[1])

    def go(k, left):
        if k == 0:
            yield ()
            return
        for t, w in pool:
            if w > left:
                break
            for rest in go(k - 1, left - w):
                yield (t,) + rest

    return go(n, budget)


def _fill_with_budget(plugin, pool, shape_bound, budget):
    out = []
    for s in plugin.shapes(shape_bound):
        n = len(plugin.labels(s))
        for combo in _choose(pool, n, budget):
            out.append(plugin.fill(s, combo))
    return sorted(set(out), key=Element.key)


# -- law checking -----------------------------------------------------------

@dataclass
class LawReport:
    ok: bool
    bound: int
    failures: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _small_targets():
    for k in (1, 2, 3):
        yield FiniteSet(Atom(f"y{i}") for i in range(k))


def check_monad_laws(plugin: MonadPlugin, xs: FiniteSet, size_bound: int) -> LawReport:
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    failures = []
    checked = {}
    lvl1 = plugin.enumerate_telements(xs, size_bound)
    n = 0
    for t in lvl1:
        n += 1
        if plugin.mult(plugin.unit(t)) != t:
            failures.append(("left_unit", t))
        if plugin.mult(plugin.apply(plugin.unit, t)) != t:
            failures.append(("right_unit", t))
        if plugin.size(plugin.shape(t)) != plugin.size(t):
            failures.append(("shape_size", t))
    checked["unit"] = n
    lvl3 = enumerate_nested(plugin, xs, size_bound, 3)
    for ttt in lvl3:
        a = plugin.mult(plugin.mult(ttt))
        b = plugin.mult(plugin.apply(plugin.mult, ttt))
        if a != b:
            failures.append(("associativity", ttt))
    checked["associativity"] = len(lvl3)
    lvl2 = [(tt, plugin.mult(tt)) for tt in enumerate_nested(plugin, xs, size_bound, 2)]
    maps = 0
    for ys in _small_targets():
        for images in itertools.product(ys.elements, repeat=len(xs)):
            f = dict(zip(xs.elements, images)).__getitem__
            maps += 1
            for x in xs:
                if plugin.apply(f, plugin.unit(x)) != plugin.unit(f(x)):
                    failures.append(("unit_naturality", (x, images)))
            for tt, flat in lvl2:
                lhs = plugin.apply(f, flat)
                rhs = plugin.mult(plugin.apply(lambda t: plugin.apply(f, t), tt))
                if lhs != rhs:
                    failures.append(("mult_naturality", (tt, images)))
                    break
    checked["naturality_maps"] = maps
    return LawReport(not failures, size_bound, failures, checked)


@dataclass
class CartesianReport:
    unit_square_ok: bool
    mult_square_ok: bool
    pullback_preservation_ok: bool
    bound: int
    witnesses: dict = field(default_factory=dict)
    checked: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.unit_square_ok and self.mult_square_ok and self.pullback_preservation_ok

    def __bool__(self):
        return self.ok


def unit_square(plugin: MonadPlugin, zs: FiniteSet, bound: int):
    """The restricted square Z -> TZ over 1 -> T1 (maps into the terminal)."""
    tz = FiniteSet(plugin.enumerate_telements(zs, bound))
    t1 = FiniteSet(plugin.enumerate_telements(ONE, bound))
    top = FiniteMap(zs, tz, {z: plugin.unit(z) for z in zs})
    left = FiniteMap(zs, ONE, {z: STAR for z in zs})
    bottom = FiniteMap(ONE, t1, {STAR: plugin.unit(STAR)})
    right = FiniteMap(tz, t1, {t: plugin.shape(t) for t in tz})
    return left, top, bottom, right


def mult_square(plugin: MonadPlugin, zs: FiniteSet, bound: int):
    """The restricted square TTZ -> TZ over TT1 -> T1."""
    ttz = FiniteSet(enumerate_nested(plugin, zs, bound, 2))
    tt1 = FiniteSet(enumerate_nested(plugin, ONE, bound, 2))
    bang = FiniteMap(zs, ONE, {z: STAR for z in zs})
    tz_elems = set(plugin.enumerate_telements(zs, bound))
    t1_elems = set(plugin.enumerate_telements(ONE, bound))
    for ss in tt1:
        flat = plugin.mult(ss)
        t1_elems.add(flat)
        tz_elems.update(plugin.enumerate_fiber(bang, flat))
    for tt in ttz:
        tz_elems.add(plugin.mult(tt))
    tz = FiniteSet(tz_elems)
    t1 = FiniteSet(t1_elems)
    top = FiniteMap(ttz, tz, {tt: plugin.mult(tt) for tt in ttz})
    left = FiniteMap(ttz, tt1, {tt: plugin.apply(plugin.shape, tt) for tt in ttz})
    bottom = FiniteMap(tt1, t1, {ss: plugin.mult(ss) for ss in tt1})
    right = FiniteMap(tz, t1, {t: plugin.shape(t) for t in tz})
    return left, top, bottom, right


def pullback_battery(seed: int = 0, extra: int = 12):
    """Cospans X -> W <- Y with all sets of size <= 3.

    All cospans with |W| <= 2 and |X|, |Y| <= 2, plus a seeded sample with
    sets of size three.
    """
    import random

    out = []
    for w in (1, 2):
        ws = FiniteSet.range(w, "w")
        srcs = [FiniteSet.range(k, "x") for k in range(3)]
        maps = [FiniteMap(s, ws, dict(zip(s.elements, im)))
                for s in srcs for im in itertools.product(ws.elements, repeat=len(s))]
        for f in maps:
            for g in maps:
                g2 = FiniteMap(FiniteSet(Atom("y" + a.name[1:]) for a in g.source), ws,
                               {Atom("y" + a.name[1:]): b for a, b in g.table.items()})
                out.append((f, g2))
    rng = random.Random(seed)
    ws = FiniteSet.range(3, "w")
    xs = FiniteSet.range(3, "x")
    ys = FiniteSet.range(3, "y")
    for _ in range(extra):
        f = FiniteMap(xs, ws, {x: rng.choice(ws.elements) for x in xs})
        g = FiniteMap(ys, ws, {y: rng.choice(ws.elements) for y in ys})
        out.append((f, g))
    return out


def check_pullback_preservation(plugin: MonadPlugin, f: FiniteMap, g: FiniteMap, bound: int) -> Verdict:
    pb = pullback(f, g)
    tp = FiniteSet(plugin.enumerate_telements(pb.apex, bound))
    tx = FiniteSet(plugin.enumerate_telements(f.source, bound))
    ty = FiniteSet(plugin.enumerate_telements(g.source, bound))
    tw = FiniteSet(plugin.enumerate_telements(f.target, bound))
    left = FiniteMap(tp, tx, {t: plugin.apply(pb.left_projection, t) for t in tp})
    top = FiniteMap(tp, ty, {t: plugin.apply(pb.right_projection, t) for t in tp})
    tf = FiniteMap(tx, tw, {t: plugin.apply(f, t) for t in tx})
    tg = FiniteMap(ty, tw, {t: plugin.apply(g, t) for t in ty})
    return is_pullback(left, top, tf, tg)


def check_cartesian(plugin: MonadPlugin, zs: FiniteSet, size_bound: int,
                    battery=None) -> CartesianReport:
    """Bounded check that the unit and multiplication squares over the map
    ``Z -> 1`` are pullbacks and that ``T`` preserves a battery of pullbacks."""
    if size_bound < 2:
        raise ValueError("size_bound must be >= 2")
    witnesses = {}
    checked = {}
    v_unit = is_pullback(*_square_args(unit_square(plugin, zs, size_bound)))
    if not v_unit:
        witnesses["unit_square"] = {"map": f"{len(zs)}->1", "detail": v_unit.witness}
    v_mult = is_pullback(*_square_args(mult_square(plugin, zs, size_bound)))
    if not v_mult:
        witnesses["mult_square"] = {"map": f"{len(zs)}->1", "detail": v_mult.witness}
    battery = pullback_battery() if battery is None else battery
    pres_ok = True
    for f, g in battery:
        v = check_pullback_preservation(plugin, f, g, size_bound)
        if not v:
            pres_ok = False
            witnesses["pullback_preservation"] = {"f": f, "g": g, "detail": v.witness}
            break
    checked["battery"] = len(battery)
    return CartesianReport(bool(v_unit), bool(v_mult), pres_ok, size_bound, witnesses, checked)


def _square_args(sq):
    left, top, bottom, right = sq
    return left, top, bottom, right
