import pytest

from modsup.errors import AlphabetMismatchError, ModsupError
from modsup.events import ProjectionSpec
from modsup.ops import (difference, enumerate_language, inverse_project,
                        is_nonblocking, is_nonconflicting, language_equal,
                        language_subset, marked_in_generated, minimize,
                        nonconflict_witness, parallel, prefix_closure,
                        product, project, trim)

from helpers import chain, counterexample_triple, make_table, trie_automaton


@pytest.fixture
def ab_table():
    return make_table({"a", "b"})


def words(a, bound=6):
    return enumerate_language(a, bound)


def test_parallel_interleaves_private_events(ab_table):
    ga = chain("A", ("a",), {"a"}, ab_table)
    gb = chain("B", ("b",), {"b"}, ab_table)
    joint = parallel([ga, gb])
    assert words(joint).marked == {(), ("a",), ("b",), ("a", "b"), ("b", "a")}


def test_parallel_synchronizes_shared_events(ab_table):
    ga = trie_automaton("A", ab_table, {"a", "b"}, [("a", "b")])
    gb = trie_automaton("B", ab_table, {"a", "b"}, [("b", "a"), ("a", "b")])
    joint = parallel([ga, gb])
    assert words(joint).marked == {("a", "b")}
    assert words(joint).generated == {(), ("a",), ("a", "b")}


def test_parallel_marking_requires_all_components(ab_table):
    ga = trie_automaton("A", ab_table, {"a"}, [("a",)], marked_words=[("a",)])
    gb = trie_automaton("B", ab_table, {"a"}, [("a",)], marked_words=[()])
    joint = parallel([ga, gb])
    assert words(joint).marked == set()
    assert words(joint).generated == {(), ("a",)}


def test_parallel_single_component_is_identity(ab_table):
    g = chain("A", ("a", "b"), {"a", "b"}, ab_table)
    assert parallel([g]) is g


def test_parallel_needs_input(ab_table):
    with pytest.raises(ModsupError):
        parallel([])


def test_product_intersects(ab_table):
    ga = trie_automaton("A", ab_table, {"a", "b"}, [("a",), ("b",)])
    gb = trie_automaton("B", ab_table, {"a", "b"}, [("b",), ("b", "a")])
    assert words(product(ga, gb)).marked == {("b",)}


def test_project_erases_and_determinizes(ab_table):
    g = trie_automaton("G", ab_table, {"a", "b"},
                       [("a", "b"), ("b",)], marked_words=[("a", "b")])
    p = ProjectionSpec(frozenset({"a", "b"}), frozenset({"b"}))
    q = project(g, p)
    assert q.alphabet == frozenset({"b"})
    assert words(q).marked == {("b",)}
    assert words(q).generated == {(), ("b",)}


def test_project_requires_matching_source(ab_table):
    g = chain("G", ("a",), {"a"}, ab_table)
    with pytest.raises(AlphabetMismatchError):
        project(g, ProjectionSpec(frozenset({"a", "b"}), frozenset({"a"})))


def test_inverse_project_self_loops(ab_table):
    g = chain("G", ("a",), {"a"}, ab_table)
    lifted = inverse_project(g, ProjectionSpec(frozenset({"a", "b"}),
                                               frozenset({"a"})))
    got = words(lifted, bound=3)
    assert ("b", "a", "b") in got.marked
    assert ("a", "a") not in got.generated


def test_project_after_inverse_project_is_identity(ab_table):
    g = trie_automaton("G", ab_table, {"a"}, [("a",), ("a", "a")])
    p = ProjectionSpec(frozenset({"a", "b"}), frozenset({"a"}))
    back = project(inverse_project(g, p), p)
    assert language_equal(back, g)


def test_difference_on_counterexample_module():
    table, (l1, _, _), (k1, _, _) = counterexample_triple()
    d = difference(l1, k1)
    assert words(d).marked == {("u1", "u"), ("u1", "u", "c")}
    assert words(d).generated == words(l1).generated


def test_language_subset_witnesses():
    table, (l1, _, _), (k1, _, _) = counterexample_triple()
    ok = language_subset(k1, l1)
    assert bool(ok) and ok.marked_witness is None
    bad = language_subset(l1, k1)
    assert not bad.marked and bad.marked_witness == ("u1", "u")
    assert not bad.generated and bad.generated_witness == ("u1", "u")


def test_language_equal_reports_sides(ab_table):
    ga = trie_automaton("A", ab_table, {"a"}, [("a",)])
    gb = trie_automaton("B", ab_table, {"a"}, [("a",), ("a", "a")])
    v = language_equal(ga, gb)
    assert not v
    assert v.marked_witness == ("a", "a") and v.marked_side == "right"
    assert v.generated_witness == ("a", "a") and v.generated_side == "right"
    assert bool(language_equal(ga, ga))


def test_marked_in_generated(ab_table):
    ga = trie_automaton("A", ab_table, {"a"}, [("a", "a")])
    gb = trie_automaton("B", ab_table, {"a"}, [("a",)])
    assert marked_in_generated(gb, ga) is None
    assert marked_in_generated(ga, gb) == ("a", "a")


def test_conflict_detected_with_empty_witness(ab_table):
    ga = trie_automaton("A", ab_table, {"a", "b"}, [("a", "b")],
                        marked_words=[("a", "b")])
    gb = trie_automaton("B", ab_table, {"a", "b"}, [("b", "a")],
                        marked_words=[("b", "a")])
    assert not is_nonconflicting([ga, gb])
    assert nonconflict_witness([ga, gb]) == ()


def test_nonconflicting_holds_for_closed_components(ab_table):
    ga = trie_automaton("A", ab_table, {"a", "b"}, [("a", "b")])
    gb = trie_automaton("B", ab_table, {"a", "b"}, [("a", "b"), ("a",)])
    assert is_nonconflicting([ga, gb])
    assert nonconflict_witness([ga, gb]) is None


def test_trim_drops_blocking_states(ab_table):
    g = trie_automaton("G", ab_table, {"a", "b"},
                       [("a",), ("b", "a")], marked_words=[("a",)])
    assert not is_nonblocking(g)
    t = trim(g)
    assert is_nonblocking(t)
    assert words(t).generated == {(), ("a",)}
    assert words(t).marked == {("a",)}


def test_trim_of_unmarked_is_canonical_empty(ab_table):
    g = trie_automaton("G", ab_table, {"a"}, [("a",)], marked_words=[])
    t = trim(g)
    assert t.n_states == 1 and t.n_transitions == 0
    assert words(t).marked == set()


def test_prefix_closure_marks_prefixes(ab_table):
    g = trie_automaton("G", ab_table, {"a", "b"},
                       [("a", "b"), ("b",)], marked_words=[("a", "b")])
    c = prefix_closure(g)
    assert words(c).marked == {(), ("a",), ("a", "b")}
    # the generated side is untouched, dead branches included
    assert ("b",) in words(c).generated


def test_enumerate_language_respects_bound(ab_table):
    g = chain("G", ("a", "b", "a"), {"a", "b"}, ab_table)
    got = enumerate_language(g, 2)
    assert got.marked == {(), ("a",), ("a", "b")}
    with pytest.raises(ModsupError):
        enumerate_language(g, -1)


def test_minimize_merges_equivalent_states(ab_table):
    # two marked leaves reached on distinct letters collapse to one state
    g = trie_automaton("G", ab_table, {"a", "b"}, [("a",), ("b",)])
    m = minimize(g)
    assert m.n_states == 2
    assert language_equal(m, g)


def test_minimize_preserves_both_languages(ab_table):
    g = trie_automaton("G", ab_table, {"a", "b"},
                       [("a", "b"), ("b", "b"), ("a",)],
                       marked_words=[("a", "b"), ("b", "b")])
    m = minimize(g)
    assert language_equal(m, g)
    assert m.n_states <= g.n_states
