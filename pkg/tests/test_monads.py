import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import planar_trees
from tmulticat.errors import GuardError, MalformedError
from tmulticat.finset import Atom, FiniteMap, FiniteSet, Pair, Seq, Tag
from tmulticat.monads import (
    Exceptions, FreeCommutativeMonoid, FreeMonoid, IdentityMonad, TreeMonad, Writer,
    check_cartesian, check_monad_laws, enumerate_nested, make_plugin, unflatten,
)

PLUGINS = [IdentityMonad(), FreeMonoid(), Exceptions([0]), Exceptions([0, 1]),
           Writer([[0, 1], [1, 0]]), TreeMonad()]
IDS = [p.name + str(p.params()) for p in PLUGINS]


@pytest.mark.parametrize("plugin", PLUGINS, ids=IDS)
def test_laws_on_two_generators(plugin):
    rep = check_monad_laws(plugin, FiniteSet.range(2), 3)
    assert rep.ok, rep.failures[:1]
    assert rep.checked["associativity"] > 0


@pytest.mark.parametrize("plugin", PLUGINS, ids=IDS)
def test_cartesian_up_to_three_points(plugin):
    for n in range(3):
        assert check_cartesian(plugin, FiniteSet.range(n), 3)


def test_commutative_monoid_fails_at_two_to_one():
    plugin = FreeCommutativeMonoid()
    assert check_monad_laws(plugin, FiniteSet.range(2), 3)
    assert check_cartesian(plugin, FiniteSet.range(1), 3).mult_square_ok
    rep = check_cartesian(plugin, FiniteSet.range(2), 3)
    assert not rep.mult_square_ok
    assert rep.witnesses["mult_square"]["map"] == "2->1"
    kind, a, b = rep.witnesses["mult_square"]["detail"]
    assert kind == "not_injective"
    assert plugin.mult(a) == plugin.mult(b) and a != b


def test_writer_rejects_bad_tables():
    with pytest.raises(MalformedError):
        Writer([[0, 1], [0, 1]])  # no unit
    with pytest.raises(MalformedError):
        Writer([[0, 1, 2], [1, 2, 0], [2, 1, 0]])  # not associative
    with pytest.raises(MalformedError):
        Writer([[0, 2], [1, 0]])


def test_make_plugin_by_name():
    assert make_plugin("exceptions", E=[0, 1]) == Exceptions([0, 1])
    assert make_plugin("writer", table=[[0]]) != make_plugin("writer", table=[[0, 1], [1, 0]])
    with pytest.raises(MalformedError):
        make_plugin("powerset")


def test_guard_on_enumeration():
    with pytest.raises(GuardError):
        FreeMonoid().enumerate_telements(FiniteSet.range(5), 8, cap=1000)


def _tree_count(vertices: int, colours: int) -> int:
    # A childless vertex is either a labelled leaf or a nullary node.
    total = 0
    for t in planar_trees(vertices):
        def childless(s):
            return 1 if not s else sum(childless(c) for c in s)
        total += (colours + 1) ** childless(t)
    return total


@pytest.mark.parametrize("n", [1, 2])
def test_tree_terms_match_planar_tree_enumerator(n):
    plugin = TreeMonad()
    terms = plugin.enumerate_telements(FiniteSet.range(n), 5)
    by_size = {k: 0 for k in range(1, 6)}
    for t in terms:
        by_size[plugin.size(t)] += 1
    assert by_size == {k: _tree_count(k, n) for k in range(1, 6)}


def test_free_monoid_counts():
    terms = FreeMonoid().enumerate_telements(FiniteSet.range(3), 3)
    assert len(terms) == 1 + 3 + 9 + 27


words = st.lists(st.lists(st.integers(0, 2), max_size=3), max_size=3)


@given(words)
def test_unflatten_inverts_flattening(ws):
    p = FreeMonoid()
    tt = Seq(Seq(w) for w in ws)
    template = p.apply(p.shape, tt)
    assert unflatten(p, p.mult(tt), template) == tt


@given(st.lists(st.integers(0, 2), max_size=4), st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_fiber_enumeration_matches_brute_force(word, table):
    p = FreeMonoid()
    xs = FiniteSet.range(3)
    ys = FiniteSet.range(2)
    c = FiniteMap(xs, ys, dict(zip(xs.elements, map(Atom, table))))
    t = Seq(Atom(v % 2) for v in word)
    brute = [Seq(ls) for ls in itertools.product(xs.elements, repeat=len(t))
             if p.apply(c, Seq(ls)) == t]
    assert p.enumerate_fiber(c, t) == sorted(brute, key=lambda e: e.key())


def test_nested_enumeration_respects_budget():
    p = FreeMonoid()
    for tt in enumerate_nested(p, FiniteSet.range(2), 3, 2):
        assert len(tt) <= 3 and sum(len(w) for w in tt) <= 3


def test_exceptions_terms():
    p = Exceptions([0])
    assert p.mult(Tag("val", Tag("exc", Atom(0)))) == Tag("exc", Atom(0))
    assert p.labels(Tag("exc", Atom(0))) == ()
    with pytest.raises(MalformedError):
        p.labels(Tag("exc", Atom(5)))


def test_writer_multiplication():
    p = Writer([[0, 1], [1, 0]])
    tt = Pair(Atom(1), Pair(Atom(1), Atom("x")))
    assert p.mult(tt) == Pair(Atom(0), Atom("x"))
