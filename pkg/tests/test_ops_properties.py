"""Seeded cross-checks of the automaton operations against string semantics.

Every instance here is acyclic with few states, so enumeration at bound 6
sees the entire language and the comparisons are exact, not sampled.
"""

import random

import pytest

from modsup.events import ProjectionSpec
from modsup.oracle import parallel_strings, project_strings
from modsup.ops import (enumerate_language, inverse_project, is_nonblocking,
                        language_equal, minimize, parallel, project, trim)
from modsup.randgen import random_alphabets, random_automaton, random_table

BOUND = 6


def _system(seed, n_parts=2, shared=True):
    rng = random.Random(seed)
    alphabets = random_alphabets(rng, n_parts, max_events=4, shared=shared)
    union = frozenset().union(*alphabets)
    table = random_table(rng, union)
    autos = [random_automaton(rng, f"G{i}", table, alpha, max_states=4,
                              all_marked=False)
             for i, alpha in enumerate(alphabets)]
    return table, alphabets, autos


@pytest.mark.parametrize("seed", range(30))
def test_parallel_matches_string_composition(seed):
    _, alphabets, autos = _system(seed, n_parts=2 + seed % 2)
    joint = parallel(autos)
    expected = parallel_strings(
        [(enumerate_language(a, BOUND).marked, frozenset(alpha))
         for a, alpha in zip(autos, alphabets)], BOUND)
    assert enumerate_language(joint, BOUND).marked == expected


@pytest.mark.parametrize("seed", range(30))
def test_project_matches_string_projection(seed):
    rng = random.Random(seed)
    alpha = frozenset("abcd")
    table = random_table(rng, alpha)
    g = random_automaton(rng, "G", table, alpha, max_states=5,
                         all_marked=False)
    target = frozenset(rng.sample(sorted(alpha), rng.randint(1, 3)))
    q = project(g, ProjectionSpec(alpha, target))
    assert enumerate_language(q, BOUND).marked == project_strings(
        enumerate_language(g, BOUND).marked, target)


@pytest.mark.parametrize("seed", range(20))
def test_project_inverts_inverse_project(seed):
    rng = random.Random(seed)
    small = frozenset("ab")
    big = frozenset("abcd")
    table = random_table(rng, big)
    g = random_automaton(rng, "G", table, small, max_states=4,
                         all_marked=False)
    p = ProjectionSpec(big, small)
    assert language_equal(project(inverse_project(g, p), p), g)


@pytest.mark.parametrize("seed", range(30))
def test_projection_distributes_when_shared_events_kept(seed):
    # Projection commutes with composition whenever the target alphabet
    # covers every shared event.
    _, alphabets, autos = _system(seed)
    shared = alphabets[0] & alphabets[1]
    union = frozenset().union(*alphabets)
    rng = random.Random(seed + 1000)
    extra = frozenset(e for e in union if rng.random() < 0.5)
    target = shared | extra
    lhs = project(parallel(autos), ProjectionSpec(union, target))
    rhs = parallel([project(a, ProjectionSpec(frozenset(alpha),
                                              target & frozenset(alpha)))
                    for a, alpha in zip(autos, alphabets)])
    assert enumerate_language(lhs, BOUND).marked == \
        enumerate_language(rhs, BOUND).marked


@pytest.mark.parametrize("seed", range(20))
def test_trim_yields_nonblocking_with_same_marked_language(seed):
    rng = random.Random(seed)
    alpha = frozenset("abc")
    table = random_table(rng, alpha)
    g = random_automaton(rng, "G", table, alpha, max_states=5,
                         all_marked=False, marked_density=0.4)
    t = trim(g)
    assert is_nonblocking(t)
    assert enumerate_language(t, BOUND).marked == \
        enumerate_language(g, BOUND).marked


@pytest.mark.parametrize("seed", range(20))
def test_minimize_preserves_languages(seed):
    rng = random.Random(seed)
    alpha = frozenset("abc")
    table = random_table(rng, alpha)
    g = random_automaton(rng, "G", table, alpha, max_states=6,
                         all_marked=False)
    m = minimize(g)
    assert m.n_states <= g.n_states
    assert language_equal(m, g)
