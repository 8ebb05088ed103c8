import pytest

from modsup.errors import InvalidProblemError
from modsup.events import EventTable, ProjectionSpec
from modsup.ops import (enumerate_language, is_nonblocking, language_equal,
                        parallel, prefix_closure)
from modsup.synthesis import (SynthesisProblem, closed_loop, is_controllable,
                              is_normal, sup_c, sup_cn, sup_n)

from helpers import chain, counterexample_triple, make_table, trie_automaton


def marked(a, bound=8):
    return enumerate_language(a, bound).marked


@pytest.fixture
def triple():
    return counterexample_triple()


def module_problem(triple, i):
    table, plants, specs = triple
    return SynthesisProblem(plants[i], specs[i])


def test_problem_validates_spec_inside_plant():
    table = make_table({"a"})
    plant = chain("L", ("a",), {"a"}, table)
    rogue = trie_automaton("K", table, {"a"}, [("a", "a")])
    with pytest.raises(InvalidProblemError) as err:
        SynthesisProblem(plant, rogue)
    assert "marks" in str(err.value) and "outside the plant language" in str(err.value)


def test_problem_requires_same_alphabet(triple):
    table, (l1, l2, _), (k1, _, _) = triple
    with pytest.raises(Exception):
        SynthesisProblem(l2, k1)


def test_first_module_is_neither_normal_nor_controllable(triple):
    p = module_problem(triple, 0)
    v = is_normal(p)
    assert v.name == "normal" and not v.holds
    assert v.witness == (("u1", "u"),)
    c = is_controllable(p)
    assert c.name == "controllable" and not c.holds
    assert c.witness == (("u1", "u"),)


def test_supn_collapses_first_module(triple):
    # The only observable event is c, so losing u1 u forces losing
    # everything below it: the supremal normal sublanguage is empty.
    p = module_problem(triple, 0)
    s = sup_n(p)
    assert marked(s) == set()
    assert s.n_states == 1 and s.n_transitions == 0


def test_supn_keeps_observable_prefix_of_second_module(triple):
    p = module_problem(triple, 1)
    s = sup_n(p)
    assert marked(s) == {(), ("u2",)}
    assert bool(is_normal(p.with_spec(s)))


def test_supn_third_module_is_already_normal(triple):
    p = module_problem(triple, 2)
    s = sup_n(p)
    assert marked(s) == {(), ("u3",)}


def test_supc_on_first_module(triple):
    # With only u uncontrollable, the fixpoint cuts below u1: u1 admits the
    # uncontrollable continuation u that the specification forbids.
    table, (l1, _, _), (k1, _, _) = triple
    p = SynthesisProblem(l1, k1, uncontrollable=frozenset({"u"}))
    s = sup_c(p)
    assert marked(s) == {()}
    assert bool(is_controllable(p.with_spec(s)))


def test_supcn_is_below_both(triple):
    table, plants, specs = triple
    p = SynthesisProblem(plants[0], specs[0],
                         uncontrollable=frozenset({"u"}))
    s = sup_cn(p)
    assert marked(s) == set()


def test_controllable_spec_passes_and_supc_is_identity():
    table = make_table({"a", "u"}, controllable={"a"})
    plant = trie_automaton("L", table, {"a", "u"}, [("a", "u"), ("a",), ()])
    spec = trie_automaton("K", table, {"a", "u"}, [("a", "u"), ("a",), ()])
    p = SynthesisProblem(plant, spec)
    assert bool(is_controllable(p))
    assert language_equal(sup_c(p), spec)


def test_uncontrollable_continuation_is_pruned():
    table = make_table({"a", "u"}, controllable={"a"})
    plant = trie_automaton("L", table, {"a", "u"}, [("a", "u"), ("a",), ()])
    spec = trie_automaton("K", table, {"a", "u"}, [("a",), ()])
    p = SynthesisProblem(plant, spec)
    v = is_controllable(p)
    assert not v.holds and v.witness == (("a", "u"),)
    assert marked(sup_c(p)) == {()}


def test_fully_observed_normal_synthesis_returns_spec():
    table = make_table({"a", "b"})
    plant = trie_automaton("L", table, {"a", "b"}, [("a", "b"), ("a",), ()])
    spec = trie_automaton("K", table, {"a", "b"}, [("a",), ()])
    p = SynthesisProblem(plant, spec)
    assert bool(is_normal(p))
    assert language_equal(sup_n(p), spec)


def test_results_satisfy_their_own_predicates(triple):
    table, plants, specs = triple
    for i in range(3):
        p = SynthesisProblem(plants[i], specs[i])
        assert bool(is_normal(p.with_spec(sup_n(p))))
        assert bool(is_controllable(p.with_spec(sup_c(p))))
        cn = p.with_spec(sup_cn(p))
        assert bool(is_normal(cn)) and bool(is_controllable(cn))


def test_prefix_closed_input_gives_prefix_closed_output(triple):
    table, plants, specs = triple
    for i in range(3):
        p = SynthesisProblem(plants[i], specs[i])
        s = sup_n(p)
        got = enumerate_language(s, 8)
        assert got.marked == enumerate_language(prefix_closure(s), 8).marked


def test_empty_spec_yields_canonical_empty(triple):
    table, (l1, _, _), _ = triple
    from modsup.automaton import Automaton
    empty = Automaton.canonical_empty(table, l1.alphabet, "K")
    s = sup_n(SynthesisProblem(l1, empty))
    assert s.n_states == 1 and marked(s) == set()


def test_nonblocking_results(triple):
    # Nonempty results are trim; the empty one is the canonical recognizer.
    table, plants, specs = triple
    for i in range(3):
        p = SynthesisProblem(plants[i], specs[i])
        for s in (sup_n(p), sup_cn(p)):
            if marked(s):
                assert is_nonblocking(s)
            else:
                assert s.n_states == 1 and s.n_transitions == 0


def test_closed_loop_restricts_plant(triple):
    table, (l1, _, _), (k1, _, _) = triple
    loop = closed_loop(k1, l1)
    assert marked(loop) == {(), ("u1",)}


def test_custom_observation_projection(triple):
    # Observing everything turns normality into plain containment.
    table, (l1, _, _), (k1, _, _) = triple
    full = ProjectionSpec(l1.alphabet, l1.alphabet)
    p = SynthesisProblem(l1, k1, observation=full)
    assert bool(is_normal(p))
    assert language_equal(sup_n(p), k1)
