"""Supremal sublanguage synthesis under partial observation.

One problem instance fixes the plant L (prefix-closed generated language),
the specification K (marked language), the observation projection P, and
the uncontrollable subset. The synthesized supervisor is the returned
recognizer itself: its marked language is the supremal sublanguage, and
``closed_loop`` composes it with the plant.
"""

from __future__ import annotations

from time import perf_counter

import numpy as np

from . import kernels, ops
from .automaton import (Automaton, cap_name, require_same_alphabet,
                        require_same_table)
from .errors import InvalidProblemError
from .events import ProjectionSpec, observation_projection, render_word
from .verdict import CheckVerdict


class SynthesisProblem:
    """Specification K, plant L, observation P, uncontrollable events.

    The specification's marked language must lie inside the plant's
    generated language; a violation is rejected here, never silently
    intersected away (the pipeline offers explicit repair for that).
    """

    __slots__ = ("plant", "spec", "observation", "uncontrollable")

    def __init__(self, plant: Automaton, spec: Automaton,
                 observation: ProjectionSpec | None = None,
                 uncontrollable: frozenset[str] | None = None):
        require_same_table(plant, spec)
        require_same_alphabet(plant, spec)
        table = plant.table
        if observation is None:
            observation = observation_projection(plant.alphabet, table)
        if observation.source != plant.alphabet:
            raise InvalidProblemError(
                "observation projection source must equal the plant alphabet")
        if uncontrollable is None:
            uncontrollable = table.uncontrollable_in(plant.alphabet)
        uncontrollable = frozenset(uncontrollable)
        if not uncontrollable <= plant.alphabet:
            raise InvalidProblemError(
                "uncontrollable events must lie in the plant alphabet")
        excess = ops.marked_in_generated(spec, plant)
        if excess is not None:
            raise InvalidProblemError(
                f"specification {spec.name!r} marks "
                f"'{render_word(excess)}' outside the plant language")
        self.plant = plant
        self.spec = spec
        self.observation = observation
        self.uncontrollable = uncontrollable

    def with_spec(self, spec: Automaton) -> "SynthesisProblem":
        return SynthesisProblem(self.plant, spec, self.observation,
                                self.uncontrollable)

    def __repr__(self) -> str:
        return (f"SynthesisProblem(plant={self.plant.name!r}, "
                f"spec={self.spec.name!r})")


def _all_marked(a: Automaton) -> Automaton:
    return Automaton(a.name, a.table, a.events, a.states, a._trans.copy(),
                     np.ones(a.n_states, dtype=np.uint8))


def _uncontrollable_columns(p: SynthesisProblem) -> list[int]:
    return [e for e, ev in enumerate(p.plant.events)
            if ev in p.uncontrollable]


# -- predicates ------------------------------------------------------------

def is_controllable(p: SynthesisProblem) -> CheckVerdict:
    """Whether closure(K) Σuc ∩ L stays inside closure(K).

    The closure is walked jointly with the plant; the first reachable point
    where the plant enables an uncontrollable event the closure refuses
    yields the shortest violating string.
    """
    t0 = perf_counter()
    spec = ops.trim(p.spec)
    if not any(spec._marked):
        return CheckVerdict("controllable", True,
                            note="empty specification language",
                            seconds=perf_counter() - t0)
    unc = _uncontrollable_columns(p)
    pa, pb, tp = kernels.product_pair(spec._trans, p.plant._trans, 0, 0)
    escape = np.full(len(pa), -1, dtype=np.int64)
    for k in range(len(pa)):
        srow = spec._trans[pa[k]]
        prow = p.plant._trans[pb[k]]
        for e in unc:
            if prow[e] >= 0 and srow[e] < 0:
                escape[k] = e
                break
    found = ops.shortest_to(tp, p.plant.events, lambda k: escape[k] >= 0)
    seconds = perf_counter() - t0
    if found is None:
        return CheckVerdict("controllable", True, seconds=seconds)
    word, state = found
    witness = word + (p.plant.events[escape[state]],)
    return CheckVerdict("controllable", False, witness=(witness,),
                        seconds=seconds)


def is_normal(p: SynthesisProblem) -> CheckVerdict:
    """Whether closure(K) equals P^{-1}[P(closure(K))] ∩ L.

    Only the right-to-left inclusion can fail for a valid problem; the
    witness is a shortest string of the right side missing from the left.
    """
    t0 = perf_counter()
    spec = ops.trim(p.spec)
    if not any(spec._marked):
        return CheckVerdict("normal", True,
                            note="empty specification language",
                            seconds=perf_counter() - t0)
    kbar = _all_marked(spec)
    lifted = ops.inverse_project(ops.project(kbar, p.observation),
                                 p.observation)
    right = ops.product(lifted, _all_marked(p.plant))
    witness = ops._marked_shortfall(right, kbar)
    seconds = perf_counter() - t0
    if witness is None:
        return CheckVerdict("normal", True, seconds=seconds)
    return CheckVerdict("normal", False, witness=(witness,), seconds=seconds)


# -- supremal normal -------------------------------------------------------

def _prefix_saturation(v: Automaton) -> Automaton:
    """Recognizer of every string having a prefix marked in ``v``."""
    if not any(v._marked):
        return Automaton.canonical_empty(v.table, v.events, v.name)
    n = v.n_states
    m = len(v.events)
    top = n
    trans = np.full((n + 1, m), top, dtype=np.int32)
    for q in range(n):
        if not v._marked[q]:
            trans[q] = v._trans[q]
    marked = np.ones(n + 1, dtype=np.uint8)
    marked[:n] = v._marked
    states = tuple(v.states) + ("~top",)
    return Automaton.from_arrays(v.name, v.table, v.events, states, trans,
                                 marked)


def _normal_filter_once(spec: Automaton, plant: Automaton,
                        observation: ProjectionSpec) -> Automaton:
    # One application of K -> K minus D Σ* for
    # D = closure(K) ∩ P^{-1}P(L minus closure(K)); spec must be trim so its
    # generated language is the closure of its marked one.
    kbar = _all_marked(spec)
    excess = ops.difference(_all_marked(plant), kbar)
    lifted = ops.inverse_project(ops.project(excess, observation),
                                 observation)
    blocked = ops.product(kbar, lifted)
    return ops.difference(spec, _prefix_saturation(blocked))


def sup_n(p: SynthesisProblem) -> Automaton:
    """Supremal sublanguage of Lm(spec) whose closure is normal.

    Prefix-closed specifications converge after a single filter pass; the
    loop then merely confirms the fixpoint. Marked specifications shrink
    through repeated passes because removing strings also shrinks the
    closure the filter is computed against.
    """
    current = ops.minimize(ops.trim(p.spec))
    while True:
        if not any(current._marked):
            return Automaton.canonical_empty(p.spec.table, p.spec.events,
                                             p.spec.name)
        nxt = ops.minimize(ops.trim(
            _normal_filter_once(current, p.plant, p.observation)))
        if ops.language_equal(nxt, current).marked:
            return nxt.renamed(p.spec.name)
        current = nxt


# -- supremal controllable -------------------------------------------------

def _supc_core(spec: Automaton, plant: Automaton,
               uncontrollable_cols: list[int]) -> Automaton:
    spec = ops.trim(spec)
    if not any(spec._marked):
        return Automaton.canonical_empty(spec.table, spec.events, spec.name)
    pa, pb, tp = kernels.product_pair(spec._trans, plant._trans, 0, 0)
    n = len(pa)
    marked = spec._marked[pa].astype(np.uint8)
    alive = np.ones(n, dtype=np.uint8)
    # Predecessor lists along uncontrollable product edges: killing a state
    # dooms every predecessor that reaches it uncontrollably.
    preds: list[list[int]] = [[] for _ in range(n)]
    for k in range(n):
        for e in uncontrollable_cols:
            t = tp[k, e]
            if t >= 0:
                preds[t].append(k)
    while True:
        stack = []
        for k in range(n):
            if not alive[k]:
                continue
            prow = plant._trans[pb[k]]
            for e in uncontrollable_cols:
                t = tp[k, e]
                if prow[e] >= 0 and (t < 0 or not alive[t]):
                    stack.append(k)
                    break
        while stack:
            k = stack.pop()
            if not alive[k]:
                continue
            alive[k] = 0
            for j in preds[k]:
                if alive[j]:
                    stack.append(j)
        if not alive[0]:
            return Automaton.canonical_empty(spec.table, spec.events,
                                             spec.name)
        sub = np.where(alive[:, None] > 0, tp, -1).astype(np.int32)
        dead_target = np.isin(sub, np.nonzero(alive == 0)[0])
        sub[dead_target] = -1
        co = kernels.coreachable(sub, (marked & alive).astype(np.uint8))
        newly = alive & (1 - co)
        if not newly.any():
            states = tuple(
                cap_name(f"{spec.states[pa[k]]}.{plant.states[pb[k]]}")
                for k in range(n))
            result = Automaton.from_arrays(spec.name, spec.table, spec.events,
                                           states, sub,
                                           (marked & alive).astype(np.uint8))
            return ops.trim(result)
        alive &= co
        if not alive[0]:
            return Automaton.canonical_empty(spec.table, spec.events,
                                             spec.name)


def sup_c(p: SynthesisProblem) -> Automaton:
    """Supremal controllable sublanguage of Lm(spec) w.r.t. L(plant).

    Backward pruning on the spec-plant product: states with an
    uncontrollable plant-enabled escape die, deaths propagate along
    uncontrollable edges, and co-reachability restores trimness; the two
    phases alternate until stable.
    """
    return _supc_core(p.spec, p.plant,
                      _uncontrollable_columns(p)).renamed(p.spec.name)


# -- supremal controllable and normal --------------------------------------

def sup_cn(p: SynthesisProblem) -> Automaton:
    """Alternate sup_c and sup_n to their common fixpoint.

    Both operators only shrink the language, each iterate is realized on a
    product of the inputs, and equality is tested at the language level, so
    the loop terminates with a language that passes both predicates and
    contains every sublanguage that does.
    """
    unc = _uncontrollable_columns(p)
    current = ops.minimize(ops.trim(p.spec))
    while True:
        if not any(current._marked):
            return Automaton.canonical_empty(p.spec.table, p.spec.events,
                                             p.spec.name)
        c = _supc_core(current, p.plant, unc)
        n = sup_n(SynthesisProblem(p.plant, c, p.observation,
                                   p.uncontrollable))
        nxt = ops.minimize(ops.trim(n))
        if ops.language_equal(nxt, current).marked:
            return nxt.renamed(p.spec.name)
        current = nxt


def closed_loop(supervisor: Automaton, plant: Automaton) -> Automaton:
    """Supervised behavior: the parallel composition with the plant."""
    if not supervisor.alphabet <= plant.alphabet:
        raise InvalidProblemError(
            "supervisor alphabet must lie within the plant alphabet")
    return ops.parallel([supervisor, plant],
                        name=f"loop({supervisor.name})")
