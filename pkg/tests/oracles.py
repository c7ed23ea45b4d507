"""Independent reference implementations used by the tests.

Nothing here imports the package: each oracle works on plain Python data
(dicts, tuples, ints) so that agreement with the kernel is meaningful.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb


# -- categories as plain dicts ---------------------------------------------------

def category_ok(objects, arrows, ids, comp) -> bool:
    """Direct check of the category axioms.

    ``arrows[f] = (src, tgt)``, ``ids[x] = f``, ``comp[(g, f)] = g.f``.
    """
    for x in objects:
        i = ids.get(x)
        if i not in arrows or arrows[i] != (x, x):
            return False
    for (g, f), h in comp.items():
        if g not in arrows or f not in arrows or h not in arrows:
            return False
        if arrows[f][1] != arrows[g][0]:
            return False
    for f, (s, t) in arrows.items():
        for g, (s2, t2) in arrows.items():
            if s2 != t:
                continue
            h = comp.get((g, f))
            if h is None or arrows[h] != (s, t2):
                return False
    for f, (s, t) in arrows.items():
        if comp[(ids[t], f)] != f or comp[(f, ids[s])] != f:
            return False
    for f, (s, t) in arrows.items():
        for g, (s2, t2) in arrows.items():
            if s2 != t:
                continue
            for h, (s3, t3) in arrows.items():
                if s3 != t2:
                    continue
                if comp[(h, comp[(g, f)])] != comp[(comp[(h, g)], f)]:
                    return False
    return True


def monoid_tables(n: int):
    """All associative unital multiplication tables on ``range(n)`` with
    unit ``0``."""
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]
    for values in itertools.product(range(n), repeat=len(cells)):
        t = [[0] * n for _ in range(n)]
        for a in range(n):
            t[0][a] = t[a][0] = a
        for (a, b), v in zip(cells, values):
            t[a][b] = v
        if all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n)):
            yield t


def category_of_monoid(table):
    n = len(table)
    arrows = {f"m{a}": ("o", "o") for a in range(n)}
    comp = {(f"m{a}", f"m{b}"): f"m{table[a][b]}" for a in range(n) for b in range(n)}
    return ["o"], arrows, {"o": "m0"}, comp


def category_of_preorder(objects, relation):
    """``relation``: set of pairs (x, y), reflexivity added."""
    rel = set(relation) | {(x, x) for x in objects}
    arrows = {f"{x}<{y}": (x, y) for x, y in rel}
    ids = {x: f"{x}<{x}" for x in objects}
    comp = {}
    for f, (a, b) in arrows.items():
        for g, (b2, c) in arrows.items():
            if b2 == b:
                comp[(g, f)] = f"{a}<{c}"
    return list(objects), arrows, ids, comp


def functor_count(objects, arrows, ids, comp, total: int) -> int:
    """Number of functors into sets whose disjoint union of values is
    exactly the labelled set ``range(total)``."""
    count = 0
    for owner in itertools.product(objects, repeat=total):
        fib = {x: [v for v in range(total) if owner[v] == x] for x in objects}
        non_id = [f for f in arrows if f not in ids.values()]
        choices = [list(itertools.product(fib[arrows[f][1]], repeat=len(fib[arrows[f][0]])))
                   for f in non_id]
        for images in itertools.product(*choices):
            act = {f: dict(zip(fib[arrows[f][0]], im)) for f, im in zip(non_id, images)}
            for x in objects:
                act[ids[x]] = {v: v for v in fib[x]}
            ok = all(act[h][v] == act[g][act[f][v]]
                     for (g, f), h in comp.items() for v in fib[arrows[f][0]])
            count += ok
    return count


def elements_category(objects, arrows, ids, comp, functor, action):
    """Category of elements of a set-valued functor: objects ``(c, x)``,
    arrows ``(f, x)`` from ``(src f, x)`` to ``(tgt f, F f x)``."""
    objs = [(c, x) for c in objects for x in functor[c]]
    arrs = {}
    for f, (s, t) in arrows.items():
        for x in functor[s]:
            arrs[(f, x)] = ((s, x), (t, action[f][x]))
    comp2 = {}
    for (g, f), h in comp.items():
        for x in functor[arrows[f][0]]:
            comp2[((g, action[f][x]), (f, x))] = (h, x)
    return objs, arrs, {(c, x): (ids[c], x) for c, x in objs}, comp2


# -- bounded monoids: algebras of the arity-truncated terminal operad -------------

def bounded_monoid_count(n: int, bound: int = 3) -> int:
    """Operations ``h_k: X^k -> X`` for ``k <= bound`` with ``h_1 = id`` and
    ``h_(k1+..+kj)(xs) = h_j(h_k1(..), ..)`` whenever every arity is in bound."""
    xs = range(n)
    arities = [k for k in range(bound + 1) if k != 1]
    domains = {k: list(itertools.product(xs, repeat=k)) for k in range(bound + 1)}
    count = 0
    for tables in itertools.product(*[list(itertools.product(xs, repeat=len(domains[k])))
                                      for k in arities]):
        h = {1: {(x,): x for x in xs}}
        for k, t in zip(arities, tables):
            h[k] = dict(zip(domains[k], t))
        ok = True
        for j in range(bound + 1):
            for ks in itertools.product(range(bound + 1), repeat=j):
                if sum(ks) > bound:
                    continue
                for args in domains[sum(ks)]:
                    parts, i = [], 0
                    for k in ks:
                        parts.append(h[k][args[i:i + k]])
                        i += k
                    if h[sum(ks)][args] != h[j][tuple(parts)]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        count += ok
    return count


# -- trees and opetopes ------------------------------------------------------------------

def planar_trees(nodes: int) -> list:
    """Planar rooted trees with exactly ``nodes`` nodes, as nested tuples."""
    if nodes == 0:
        return []
    out = []
    for forest in planar_forests(nodes - 1):
        out.append(forest)
    return out


@lru_cache(maxsize=None)
def planar_forests(nodes: int) -> tuple:
    if nodes == 0:
        return ((),)
    out = []
    for first in range(1, nodes + 1):
        for t in planar_trees(first):
            for rest in planar_forests(nodes - first):
                out.append((t,) + rest)
    return tuple(out)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def binary_trees_by_leaves(leaves: int) -> int:
    """Recursive count of full binary trees with the given number of leaves."""
    if leaves == 1:
        return 1
    return sum(binary_trees_by_leaves(k) * binary_trees_by_leaves(leaves - k) for k in range(1, leaves))


@lru_cache(maxsize=None)
def pasting_trees_by_weight(w: int) -> int:
    """Trees whose nodes carry an arity ``n`` and weigh ``1 + n``; bare
    leaves weigh nothing.  These count 3-dimensional pasting shapes."""
    total = 1 if w == 0 else 0
    for n in range(0, w):
        rest = w - 1 - n
        if rest < 0:
            break
        total += _forest_weight(n, rest)
    return total


@lru_cache(maxsize=None)
def _forest_weight(n: int, w: int) -> int:
    if n == 0:
        return 1 if w == 0 else 0
    return sum(pasting_trees_by_weight(k) * _forest_weight(n - 1, w - k) for k in range(w + 1))


# Three-dimensional shapes as tuples: "|" is a bare leaf, (child, ...) a node.

def trees3(max_weight: int) -> list:
    """All tuple trees of weight <= max_weight (node weight 1 + arity)."""
    out = []

    def build(budget):
        res = [("|", 0)]
        for n in range(0, budget):
            if 1 + n > budget:
                break
            for kids in forests(n, budget - 1 - n):
                res.append((tuple(k for k, _ in kids), 1 + n + sum(w for _, w in kids)))
        return res

    def forests(n, budget):
        if n == 0:
            yield ()
            return
        for t, w in build(budget):
            for rest in forests(n - 1, budget - w):
                yield ((t, w),) + rest

    for t, w in build(max_weight):
        out.append((t, w))
    return out


def _nodes(t) -> list:
    if t == "|":
        return []
    out = [len(t)]
    for c in t:
        out.extend(_nodes(c))
    return out


def _leaves(t) -> int:
    return 1 if t == "|" else sum(_leaves(c) for c in t)


def four_dim_by_size(max_size: int) -> dict:
    """Brute-force count of 4-dimensional pasting shapes by size.

    ``("id", n)`` weighs ``n`` and has output arity ``n``; a node on a
    3-dimensional shape ``g`` weighs ``1 + weight(g)`` plus its inputs, has
    one input per node of ``g`` (which must output that node's arity) and
    outputs the leaf count of ``g``.
    """
    t3 = trees3(max_size)

    @lru_cache(maxsize=None)
    def shapes(out_arity, budget):
        res = []
        if out_arity <= budget:
            res.append((("id", out_arity), out_arity))
        for g, wg in t3:
            if _leaves(g) != out_arity or 1 + wg > budget:
                continue
            for kids in fill(tuple(_nodes(g)), budget - 1 - wg):
                res.append((("node", g, tuple(k for k, _ in kids)), 1 + wg + sum(w for _, w in kids)))
        return tuple(res)

    def fill(slots, budget):
        if not slots:
            yield ()
            return
        for s, w in shapes(slots[0], budget):
            for rest in fill(slots[1:], budget - w):
                yield ((s, w),) + rest

    counts: dict = {}
    seen = set()
    for n in range(max_size + 1):
        for s, w in shapes(n, max_size):
            if s not in seen:
                seen.add(s)
                counts[w] = counts.get(w, 0) + 1
    return counts


# -- simplicial counting ---------------------------------------------------------------

def monotone_maps(m: int, n: int) -> int:
    """Order-preserving maps from an m-element chain to an n-element chain."""
    return sum(1 for _ in itertools.combinations_with_replacement(range(n), m))


def weak_composition_formula(m: int, n: int) -> int:
    if n == 0:
        return 1 if m == 0 else 0
    return comb(m + n - 1, m)
