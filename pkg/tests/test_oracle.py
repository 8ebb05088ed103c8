import random

import pytest

from modsup.errors import InvalidProblemError
from modsup.oracle import (BoundedLanguage, closure_strings,
                           oracle_nonconflicting, oracle_moc, oracle_sup_c,
                           oracle_sup_cn, oracle_sup_n, parallel_strings,
                           project_strings, project_word)
from modsup.ops import enumerate_language

from helpers import counterexample_triple


def slice_of(a, bound=5, marked=True):
    lang = enumerate_language(a, bound)
    return BoundedLanguage(lang.marked if marked else lang.generated,
                           bound, a.alphabet)


@pytest.fixture
def triple():
    return counterexample_triple()


# -- plumbing -----------------------------------------------------------------

def test_closure_and_projection_helpers():
    strings = frozenset({("a", "b"), ("c",)})
    assert closure_strings(strings) == {(), ("a",), ("a", "b"), ("c",)}
    assert project_word(("a", "b", "a"), frozenset({"a"})) == ("a", "a")
    assert project_strings(strings, frozenset({"b"})) == {("b",), ()}


def test_bounded_language_validates():
    with pytest.raises(InvalidProblemError):
        BoundedLanguage(frozenset({("a", "a")}), 1, frozenset({"a"}))
    with pytest.raises(InvalidProblemError):
        BoundedLanguage(frozenset({("b",)}), 2, frozenset({"a"}))
    with pytest.raises(InvalidProblemError):
        BoundedLanguage(frozenset({("a", "a")}), 3, frozenset({"a"}),
                        prefix_closed=True)
    ok = BoundedLanguage(frozenset({(), ("a",)}), 2, frozenset({"a"}),
                         prefix_closed=True)
    assert ok.saturated


def test_parallel_strings_synchronizes():
    la = frozenset({(), ("a",), ("a", "s")})
    lb = frozenset({(), ("s",), ("s", "b")})
    got = parallel_strings([(la, frozenset({"a", "s"})),
                            (lb, frozenset({"s", "b"}))], 4)
    assert ("a", "s", "b") in got
    assert ("s",) not in got  # first part requires a before s


# -- synthesis oracles ---------------------------------------------------------

def test_oracle_supn_collapses_first_module(triple):
    _, (l1, _, _), (k1, _, _) = triple
    res = oracle_sup_n(slice_of(k1), slice_of(l1), observable={"c"})
    assert res.language.strings == frozenset()
    assert res.exact


def test_oracle_supn_keeps_second_module_prefix(triple):
    _, (_, l2, _), (_, k2, _) = triple
    res = oracle_sup_n(slice_of(k2), slice_of(l2), observable={"c"})
    assert res.language.strings == {(), ("u2",)}


def test_oracle_supn_full_observation_returns_spec(triple):
    _, (l1, _, _), (k1, _, _) = triple
    res = oracle_sup_n(slice_of(k1), slice_of(l1), observable=l1.alphabet)
    assert res.language.strings == {(), ("u1",)}


def test_oracle_supc_prunes_uncontrollable_escape(triple):
    _, (l1, _, _), (k1, _, _) = triple
    res = oracle_sup_c(slice_of(k1), slice_of(l1), uncontrollable={"u"})
    assert res.language.strings == {()}


def test_oracle_supc_nothing_uncontrollable_returns_spec(triple):
    _, (l1, _, _), (k1, _, _) = triple
    res = oracle_sup_c(slice_of(k1), slice_of(l1), uncontrollable=set())
    assert res.language.strings == {(), ("u1",)}


def test_oracle_supc_spec_equal_plant_returns_plant(triple):
    _, (l1, _, _), _ = triple
    res = oracle_sup_c(slice_of(l1), slice_of(l1), uncontrollable={"u"})
    assert res.language.strings == slice_of(l1).strings


def test_oracle_supcn_joint_fixpoint(triple):
    _, (l1, _, _), (k1, _, _) = triple
    res = oracle_sup_cn(slice_of(k1), slice_of(l1),
                        uncontrollable={"u"}, observable={"c"})
    assert res.language.strings == frozenset()


def test_oracle_requires_nested_slices(triple):
    _, (l1, _, _), (k1, _, _) = triple
    with pytest.raises(InvalidProblemError):
        oracle_sup_n(slice_of(l1), slice_of(k1), observable={"c"})


def test_exactness_reflects_plant_saturation(triple):
    _, (l1, _, _), (k1, _, _) = triple
    lang = enumerate_language(l1, 3)
    tight = BoundedLanguage(lang.marked, 3, l1.alphabet)
    res = oracle_sup_n(slice_of(k1, bound=3), tight, observable={"c"})
    assert not res.exact  # a length-3 string sits at the bound


# -- nonconflict oracle ----------------------------------------------------------

def test_oracle_nonconflicting_conflict():
    ab = frozenset({"a", "b"})
    la = BoundedLanguage(frozenset({("a", "b")}), 4, ab)
    lb = BoundedLanguage(frozenset({("b", "a")}), 4, ab)
    verdict, exact = oracle_nonconflicting([la, lb], 4)
    assert not verdict and exact


def test_oracle_nonconflicting_agreement(triple):
    _, plants, _ = triple
    verdict, exact = oracle_nonconflicting(
        [slice_of(p) for p in plants], 5)
    assert verdict and exact


def test_oracle_nonconflicting_unsaturated_composition_is_inexact():
    # Each part saturates at bound 2, but their shuffle reaches length 2,
    # the bound itself, so the verdict cannot be certified exact.
    la = BoundedLanguage(frozenset({("a",)}), 2, frozenset({"a"}))
    lb = BoundedLanguage(frozenset({("b",)}), 2, frozenset({"b"}))
    assert la.saturated and lb.saturated
    verdict, exact = oracle_nonconflicting([la, lb], 2)
    assert verdict and not exact


# -- moc oracle -------------------------------------------------------------------

def test_oracle_moc_triplet_holds(triple):
    _, plants, _ = triple
    modules = [slice_of(p, marked=False) for p in plants]
    verdict, witness = oracle_moc(modules, observable={"c"}, bound=5)
    assert verdict and witness is None


def test_oracle_moc_violation_is_witnessed():
    # h is shared and unobservable; module 2 forbids h after b. Module 1's
    # local view cannot tell "h happened" from "b happened", yet no composed
    # string carries both, so the views cannot be reconciled.
    m1 = BoundedLanguage(frozenset({(), ("h",)}), 4, frozenset({"h"}))
    m2 = BoundedLanguage(frozenset({(), ("h",), ("b",)}), 4,
                         frozenset({"h", "b"}))
    verdict, witness = oracle_moc([m1, m2], observable={"b"}, bound=4)
    assert not verdict
    assert witness == (("b",), ("h",))
