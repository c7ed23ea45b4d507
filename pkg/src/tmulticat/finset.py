"""Canonical element terms, finite sets, total maps and chosen pullbacks.

Every set appearing in a diagram is a :class:`FiniteSet` of :class:`Element`
terms.  Elements carry a total structural order (constructor rank first, then
contents) so that every enumeration in the package is deterministic.
"""
from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, NamedTuple

from .errors import MalformedError, NonCommutingSquare

__all__ = [
    "Element", "Atom", "Pair", "Seq", "Tag", "TreeNode", "as_element", "atoms",
    "FiniteSet", "FiniteMap", "PullbackResult", "Verdict", "STAR", "ONE",
    "EMPTY", "identity", "compose", "pullback", "is_pullback", "fiber",
    "all_maps", "terminal_map", "product",
]


class Element:
    __slots__ = ("_hash", "_key")
    _rank = -1

    def key(self):
        try:
            return self._key
        except AttributeError:
            k = self._key = (self._rank, self._content_key())
            return k

    def _content_key(self):
        raise NotImplementedError

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = self._hash = hash((self._rank, self._fields()))
            return h

    def _fields(self):
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return NotImplemented if not isinstance(other, Element) else False
        return hash(self) == hash(other) and self._fields() == other._fields()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __lt__(self, other):
        return self.key() < other.key()

    def __le__(self, other):
        return self.key() <= other.key()

    def __gt__(self, other):
        return self.key() > other.key()

    def __ge__(self, other):
        return self.key() >= other.key()


class Atom(Element):
    __slots__ = ("name",)
    _rank = 0

    def __init__(self, name):
        if isinstance(name, bool) or not isinstance(name, (int, str)):
            raise MalformedError(f"atom names are int or str, got {name!r}")
        self.name = name

    def _content_key(self):
        return (0, self.name) if isinstance(self.name, int) else (1, self.name)

    def _fields(self):
        return (type(self.name) is int, self.name)

    def __repr__(self):
        return f"Atom({self.name!r})"

    def __str__(self):
        return str(self.name)


class Pair(Element):
    __slots__ = ("fst", "snd")
    _rank = 1

    def __init__(self, fst, snd):
        self.fst = as_element(fst)
        self.snd = as_element(snd)

    def _content_key(self):
        return (self.fst.key(), self.snd.key())

    def _fields(self):
        return (self.fst, self.snd)

    def __repr__(self):
        return f"Pair({self.fst!r}, {self.snd!r})"

    def __str__(self):
        return f"({self.fst}, {self.snd})"


class Seq(Element):
    __slots__ = ("items",)
    _rank = 2

    def __init__(self, items=()):
        self.items = tuple(as_element(x) for x in items)

    def _content_key(self):
        return tuple(x.key() for x in self.items)

    def _fields(self):
        return self.items

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __repr__(self):
        return f"Seq({list(self.items)!r})"

    def __str__(self):
        return "<" + ",".join(map(str, self.items)) + ">"


class Tag(Element):
    __slots__ = ("label", "value")
    _rank = 3

    def __init__(self, label: str, value):
        if not isinstance(label, str):
            raise MalformedError(f"tag labels are strings, got {label!r}")
        self.label = label
        self.value = as_element(value)

    def _content_key(self):
        return (self.label, self.value.key())

    def _fields(self):
        return (self.label, self.value)

    def __repr__(self):
        return f"Tag({self.label!r}, {self.value!r})"

    def __str__(self):
        return f"{self.label}:{self.value}"


class TreeNode(Element):
    __slots__ = ("label", "children")
    _rank = 4

    def __init__(self, label, children=()):
        self.label = as_element(label)
        self.children = tuple(as_element(c) for c in children)

    def _content_key(self):
        return (self.label.key(), tuple(c.key() for c in self.children))

    def _fields(self):
        return (self.label, self.children)

    def __repr__(self):
        return f"TreeNode({self.label!r}, {list(self.children)!r})"

    def __str__(self):
        return f"{self.label}[" + ",".join(map(str, self.children)) + "]"


def as_element(x) -> Element:
    if isinstance(x, Element):
        return x
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return Atom(x)
    raise MalformedError(f"cannot interpret {x!r} as an element")


def atoms(*names) -> list[Atom]:
    return [Atom(n) for n in names]


class FiniteSet:
    """An immutable finite set of elements stored in canonical order."""

    __slots__ = ("elements", "_members", "_hash")

    def __init__(self, elements: Iterable = ()):
        members = frozenset(as_element(x) for x in elements)
        self._members = members
        self.elements = tuple(sorted(members, key=Element.key))

    @classmethod
    def range(cls, n: int, prefix: str | None = None) -> "FiniteSet":
        if prefix is None:
            return cls(Atom(i) for i in range(n))
        return cls(Atom(f"{prefix}{i}") for i in range(n))

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self._members

    def __eq__(self, other):
        return isinstance(other, FiniteSet) and self._members == other._members

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            self._hash = hash(self._members)
            return self._hash

    def __repr__(self):
        return "FiniteSet({" + ", ".join(map(str, self.elements)) + "})"

    def index(self, x) -> int:
        return self.elements.index(x)

    def union(self, other: Iterable) -> "FiniteSet":
        return FiniteSet(itertools.chain(self.elements, other))


STAR = Atom("*")
ONE = FiniteSet([STAR])
EMPTY = FiniteSet()


class FiniteMap:
    """A total function between finite sets, stored as a table."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source: FiniteSet, target: FiniteSet, table):
        if callable(table) and not isinstance(table, dict):
            table = {x: as_element(table(x)) for x in source}
        else:
            table = {as_element(k): as_element(v) for k, v in dict(table).items()}
        if set(table) != set(source.elements):
            missing = [x for x in source if x not in table]
            extra = [x for x in table if x not in source]
            raise MalformedError(
                f"map is not total on its source (missing {missing[:3]}, extra {extra[:3]})")
        for x, y in table.items():
            if y not in target:
                raise MalformedError(f"image {y} of {x} lies outside the target")
        self.source = source
        self.target = target
        self.table = table

    def __call__(self, x):
        return self.table[x]

    def __eq__(self, other):
        return (isinstance(other, FiniteMap) and self.source == other.source
                and self.target == other.target and self.table == other.table)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.table.items())))

    def __repr__(self):
        body = ", ".join(f"{x}->{self.table[x]}" for x in self.source)
        return f"FiniteMap({{{body}}})"

    def items(self):
        return ((x, self.table[x]) for x in self.source)

    def image(self) -> FiniteSet:
        return FiniteSet(self.table.values())

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    def is_bijective(self) -> bool:
        return self.is_injective() and len(self.table) == len(self.target)

    def inverse(self) -> "FiniteMap":
        if not self.is_bijective():
            raise MalformedError("map is not a bijection")
        return FiniteMap(self.target, self.source, {y: x for x, y in self.table.items()})


def identity(s: FiniteSet) -> FiniteMap:
    return FiniteMap(s, s, {x: x for x in s})


def compose(g: FiniteMap, f: FiniteMap) -> FiniteMap:
    """The composite ``g . f``."""
    if f.target != g.source:
        raise MalformedError("cannot compose: target of f differs from source of g")
    return FiniteMap(f.source, g.target, {x: g.table[y] for x, y in f.table.items()})


def terminal_map(s: FiniteSet) -> FiniteMap:
    return FiniteMap(s, ONE, {x: STAR for x in s})


def fiber(f: FiniteMap, z) -> FiniteSet:
    z = as_element(z)
    if z not in f.target:
        raise MalformedError(f"{z} is not in the target")
    return FiniteSet(x for x, y in f.table.items() if y == z)


def all_maps(source: FiniteSet, target: FiniteSet) -> Iterator[FiniteMap]:
    for images in itertools.product(target.elements, repeat=len(source)):
        yield FiniteMap(source, target, dict(zip(source.elements, images)))


class PullbackResult(NamedTuple):
    apex: FiniteSet
    left_projection: FiniteMap
    right_projection: FiniteMap


def pullback(f: FiniteMap, g: FiniteMap) -> PullbackResult:
    """The chosen pullback of ``f: X -> Z`` and ``g: Y -> Z``: pairs over Z."""
    if f.target != g.target:
        raise MalformedError("pullback legs must share a target")
    by_image: dict = {}
    for y, z in g.table.items():
        by_image.setdefault(z, []).append(y)
    apex = FiniteSet(Pair(x, y) for x, z in f.table.items() for y in by_image.get(z, ()))
    left = FiniteMap(apex, f.source, {p: p.fst for p in apex})
    right = FiniteMap(apex, g.source, {p: p.snd for p in apex})
    return PullbackResult(apex, left, right)


def product(x: FiniteSet, y: FiniteSet) -> PullbackResult:
    return pullback(terminal_map(x), terminal_map(y))


class Verdict(NamedTuple):
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def is_pullback(left: FiniteMap, top: FiniteMap, f: FiniteMap, g: FiniteMap) -> Verdict:
    """Decide whether the commuting square

        P --top--> Y
        |          |
      left         g
        v          v
        X ---f---> Z

    is a pullback, by comparing P with the chosen pullback of f and g.
    """
    if left.source != top.source or left.target != f.source or top.target != g.source:
        raise MalformedError("square maps do not fit together")
    if f.target != g.target:
        raise MalformedError("square maps do not share a corner")
    for p in left.source:
        if f.table[left.table[p]] != g.table[top.table[p]]:
            raise NonCommutingSquare(f"square does not commute at {p}")
    seen: dict = {}
    for p in left.source:
        q = Pair(left.table[p], top.table[p])
        if q in seen:
            return Verdict(False, ("not_injective", seen[q], p))
        seen[q] = p
    apex = pullback(f, g).apex
    for q in apex:
        if q not in seen:
            return Verdict(False, ("not_surjective", q))
    return Verdict(True)


def restrict(f: Callable, source: FiniteSet, target: FiniteSet) -> FiniteMap:
    """Tabulate a callable on ``source``; every image must land in ``target``."""
    return FiniteMap(source, target, {x: f(x) for x in source})
