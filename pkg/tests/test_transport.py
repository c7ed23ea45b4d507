import pytest

from oracles import monotone_maps, planar_trees, weak_composition_formula
from support import ARROW_CATEGORY, recovery_corpus
from tmulticat.algebras import SliceObject
from tmulticat.errors import MalformedError
from tmulticat.finset import ONE, STAR, Atom, FiniteMap, FiniteSet, Pair, Seq
from tmulticat.monads import Exceptions, FreeMonoid, IdentityMonad, TreeMonad, Writer
from tmulticat.multicat import check_axioms, from_category, terminal_multicat
from tmulticat.transport import (
    check_nat_trans, check_triangles, exceptions_to_words, faithful_not_full, free_structured,
    identity_trans, monad_algebras, monad_data, operad_from_regular_theory, recover_multicat,
    table_trans, transport_by_composition, transport_by_pullback, tree_to_leaves, unit_embedding,
    weak_compositions, writer_inclusion,
)


@pytest.fixture(scope="module")
def delta():
    return free_structured(terminal_multicat(FreeMonoid(), 4), 4)


def ordinal(n):
    return Seq((STAR,) * n)


def test_delta_hom_counts(delta):
    for m in range(5):
        for n in range(5):
            count = len(delta.hom(ordinal(m), ordinal(n)))
            assert count == monotone_maps(m, n) == weak_composition_formula(m, n) == weak_compositions(m, n)


def test_delta_is_a_structured_category():
    small = free_structured(terminal_multicat(FreeMonoid(), 3), 3)
    assert small.check()


def test_delta_map_is_faithful_but_not_full():
    r = faithful_not_full()
    assert r.multicat_map_ok
    assert r.structured_lifts == 0


@pytest.mark.parametrize("m", [from_category(ARROW_CATEGORY), terminal_multicat(FreeMonoid(), 2)],
                         ids=["arrow_category", "terminal_free_monoid"])
def test_triangle_identities(m):
    assert check_triangles(m, 2)


TRANSFORMATIONS = [
    identity_trans(FreeMonoid()),
    unit_embedding(FreeMonoid()),
    unit_embedding(TreeMonad()),
    tree_to_leaves(),
    exceptions_to_words(Exceptions([0, 1])),
    writer_inclusion(Writer([[0]]), Writer([[0, 1], [1, 0]]), {0: 0}),
]


@pytest.mark.parametrize("phi", TRANSFORMATIONS, ids=lambda p: f"{p.name}:{p.source.name}")
def test_builtin_transformations_are_cartesian_monad_maps(phi):
    assert check_nat_trans(phi, FiniteSet.range(2), 3)


def test_non_homomorphic_relabelling_breaks_multiplication():
    z3 = Writer([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    relabel = {0: 0, 1: 2, 2: 2}
    table = {s: Pair(Atom(relabel[s.fst.name]), s.snd) for s in z3.shapes(1)}
    v = check_nat_trans(table_trans(z3, z3, table), FiniteSet.range(2), 2)
    assert not v and v.witness[0] == "multiplication"


def test_writer_inclusion_rejects_non_homomorphisms():
    with pytest.raises(MalformedError):
        writer_inclusion(Writer([[0, 1], [1, 0]]), Writer([[0, 1], [1, 0]]), {0: 1, 1: 0})


def test_transport_by_composition_and_pullback():
    m = from_category(ARROW_CATEGORY)
    moved = transport_by_composition(unit_embedding(FreeMonoid()), m)
    assert moved.plugin == FreeMonoid() and check_axioms(moved)
    assert all(len(moved.dom[a]) == 1 for a in moved.arrows)
    back = transport_by_pullback(tree_to_leaves(), terminal_multicat(FreeMonoid(), 2), 2)
    assert back.plugin == TreeMonad() and check_axioms(back)
    with pytest.raises(MalformedError):
        transport_by_composition(tree_to_leaves(), m)


def _shape_count(leaves, max_size):
    # Planar trees where each childless vertex is either a leaf or a nullary node.
    def ways(t, k):
        if not t:
            return 1 if k <= 1 else 0
        acc = {0: 1}
        for c in t:
            nxt = {}
            for have, w in acc.items():
                for j in range(k - have + 1):
                    cw = ways(c, j)
                    if cw:
                        nxt[have + j] = nxt.get(have + j, 0) + w * cw
            acc = nxt
        return acc.get(k, 0)
    return sum(ways(t, leaves) for v in range(1, max_size + 1) for t in planar_trees(v))


def test_tree_operad_arities_against_tree_enumerator():
    op = operad_from_regular_theory(tree_to_leaves(), 4)
    assert check_axioms(op)
    counts = {}
    for a in op.arrows:
        counts[len(op.dom[a])] = counts.get(len(op.dom[a]), 0) + 1
    for k in range(5):
        assert counts.get(k, 0) == _shape_count(k, 4)


@pytest.mark.parametrize("phi,bound", [
    (tree_to_leaves(), 2),
    (exceptions_to_words(Exceptions([0, 1])), 2),
    (unit_embedding(FreeMonoid()), 3),
], ids=["tree", "exceptions", "identity"])
def test_operad_algebras_match_monad_algebras(phi, bound):
    from tmulticat.algebras import enumerate_algebras
    op = operad_from_regular_theory(phi, bound)
    for n in range(3):
        xs = FiniteSet.range(n)
        direct = monad_algebras(phi.source, xs, bound)
        via_operad = [a for a in enumerate_algebras(op, 2) if len(a.carrier.X) == n]
        assert len(via_operad) == len(direct)


@pytest.mark.parametrize("name", sorted(recovery_corpus()))
def test_recover_round_trip(name):
    m = recovery_corpus()[name]
    assert recover_multicat(monad_data(m)) == m


def test_monad_data_package_laws_and_cartesian_phi():
    m = terminal_multicat(FreeMonoid(), 2)
    pkg = monad_data(m)
    xs = FiniteSet.range(2)
    x = SliceObject(xs, FiniteMap(xs, ONE, {v: STAR for v in xs}))
    k = FiniteMap(xs, FiniteSet.range(1, "y"), {v: Atom("y0") for v in xs})
    assert pkg.check(x, k)


def test_identity_monad_package_on_category():
    m = from_category(ARROW_CATEGORY)
    assert m.plugin == IdentityMonad()
    assert recover_multicat(monad_data(m)) == m
