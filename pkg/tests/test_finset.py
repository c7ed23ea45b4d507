import itertools

import pytest
from hypothesis import given, strategies as st

from tmulticat.errors import MalformedError, NonCommutingSquare
from tmulticat.finset import (
    Atom, FiniteMap, FiniteSet, Pair, Seq, Tag, TreeNode, all_maps, as_element, compose,
    fiber, identity, is_pullback, product, pullback,
)

names = st.one_of(st.integers(0, 5), st.sampled_from(["a", "b", "c"]))
elements = st.recursive(
    names.map(Atom),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda p: Pair(*p)),
        st.lists(inner, max_size=3).map(Seq),
        st.tuples(st.sampled_from(["val", "exc"]), inner).map(lambda p: Tag(*p)),
        st.tuples(inner, st.lists(inner, max_size=2)).map(lambda p: TreeNode(*p)),
    ),
    max_leaves=6,
)


def small_map(draw, src, tgt):
    return FiniteMap(src, tgt, {x: draw(st.sampled_from(tgt.elements)) for x in src})


@st.composite
def cospans(draw):
    w = FiniteSet.range(draw(st.integers(1, 3)), "w")
    x = FiniteSet.range(draw(st.integers(0, 3)), "x")
    y = FiniteSet.range(draw(st.integers(0, 3)), "y")
    return small_map(draw, x, w), small_map(draw, y, w)


@given(elements, elements)
def test_equality_matches_canonical_key(a, b):
    assert (a == b) == (a.key() == b.key())
    if a == b:
        assert hash(a) == hash(b)


@given(st.lists(elements, max_size=6))
def test_finite_set_is_canonical(xs):
    s = FiniteSet(xs)
    assert list(s) == sorted(set(xs), key=lambda e: e.key())
    assert FiniteSet(reversed(xs)) == s


def test_atoms_reject_other_types():
    with pytest.raises(MalformedError):
        Atom(1.5)
    with pytest.raises(MalformedError):
        as_element(True)


def test_int_and_str_atoms_differ():
    assert Atom(1) != Atom("1")
    assert len(FiniteSet([Atom(1), Atom("1")])) == 2


def test_map_must_be_total_and_land_in_target():
    s = FiniteSet.range(2)
    with pytest.raises(MalformedError):
        FiniteMap(s, s, {Atom(0): Atom(0)})
    with pytest.raises(MalformedError):
        FiniteMap(s, s, {Atom(0): Atom(0), Atom(1): Atom(7)})


def test_all_maps_count():
    for n, k in itertools.product(range(4), range(4)):
        assert len(list(all_maps(FiniteSet.range(n), FiniteSet.range(k)))) == k ** n


@given(cospans())
def test_chosen_pullback_is_a_pullback(fg):
    f, g = fg
    pb = pullback(f, g)
    expected = sum(1 for x in f.source for y in g.source if f(x) == g(y))
    assert len(pb.apex) == expected
    assert is_pullback(pb.left_projection, pb.right_projection, f, g)


@given(cospans())
def test_dropping_a_point_breaks_the_pullback(fg):
    f, g = fg
    pb = pullback(f, g)
    if not pb.apex.elements:
        return
    keep = FiniteSet(pb.apex.elements[1:])
    left = FiniteMap(keep, f.source, {p: p.fst for p in keep})
    right = FiniteMap(keep, g.source, {p: p.snd for p in keep})
    v = is_pullback(left, right, f, g)
    assert not v and v.witness[0] == "not_surjective"


def test_duplicated_point_reports_injectivity_witness():
    x = FiniteSet.range(1, "x")
    w = FiniteSet.range(1, "w")
    f = FiniteMap(x, w, {Atom("x0"): Atom("w0")})
    p = FiniteSet.range(2, "p")
    left = FiniteMap(p, x, {q: Atom("x0") for q in p})
    v = is_pullback(left, left, f, f)
    assert not v and v.witness[0] == "not_injective"


def test_non_commuting_square_is_rejected():
    x = FiniteSet.range(1, "x")
    w = FiniteSet.range(2, "w")
    f = FiniteMap(x, w, {Atom("x0"): Atom("w0")})
    g = FiniteMap(x, w, {Atom("x0"): Atom("w1")})
    with pytest.raises(NonCommutingSquare):
        is_pullback(identity(x), identity(x), f, g)


def test_product_and_fibers():
    a, b = FiniteSet.range(2, "a"), FiniteSet.range(3, "b")
    pr = product(a, b)
    assert len(pr.apex) == 6
    assert len(fiber(pr.left_projection, Atom("a1"))) == 3


@given(cospans())
def test_compose_with_identity(fg):
    f, _ = fg
    assert compose(identity(f.target), f) == f == compose(f, identity(f.source))
