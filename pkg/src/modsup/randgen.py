"""Seeded random instances for the property suites.

Every generator takes a ``random.Random`` so callers can record the seed
and replay a failure. Automata come out connected by construction (extra
edges are drawn on top of a random arborescence). The acyclic flavour only
adds edges toward higher state indices; with at most ``s`` states no string
is longer than ``s - 1``, which keeps the bounded string oracles exact.
"""

from __future__ import annotations

import random

from . import ops
from .automaton import Automaton
from .checks import ModularSystem, Module
from .coordination import extend_kappa
from .events import EventTable, ProjectionSpec
from .synthesis import SynthesisProblem

EVENT_POOL = tuple("abcdefghijklmnop")


def random_table(rng: random.Random, alphabet,
                 observable_density: float = 0.6,
                 controllable_density: float = 0.6,
                 observable=(), controllable=()) -> EventTable:
    """Sample attributes per event; the keyword sets force both bits on."""
    alphabet = frozenset(alphabet)
    obs = set(observable)
    ctr = set(controllable)
    for e in sorted(alphabet - obs):
        if rng.random() < observable_density:
            obs.add(e)
    for e in sorted(alphabet - ctr):
        if rng.random() < controllable_density:
            ctr.add(e)
    return EventTable(alphabet, ctr & alphabet, obs & alphabet)


def random_automaton(rng: random.Random, name: str, table: EventTable,
                     alphabet, max_states: int = 4, acyclic: bool = True,
                     edge_density: float = 0.45, all_marked: bool = True,
                     marked_density: float = 0.6) -> Automaton:
    """Connected partial DFA over ``alphabet``.

    Acyclic automata take edges only from lower to higher state indices,
    so state 0 is the initial state and every run terminates.
    """
    events = sorted(frozenset(alphabet))
    if not events:
        raise ValueError("an automaton needs a nonempty alphabet")
    n = rng.randint(1, max_states)
    trans: dict[tuple[str, str], str] = {}
    used: set[tuple[int, str]] = set()

    def free_slots(limit: int) -> list[tuple[int, str]]:
        return [(q, e) for q in range(limit) for e in events
                if (q, e) not in used]

    for dst in range(1, n):
        # One incoming edge from a lower index keeps everything reachable.
        slots = free_slots(dst)
        if not slots:
            n = dst
            break
        q, e = rng.choice(slots)
        trans[(str(q), e)] = str(dst)
        used.add((q, e))
    for q in range(n):
        for e in events:
            if (q, e) in used or rng.random() >= edge_density:
                continue
            lo = q + 1 if acyclic else 0
            if lo >= n:
                continue
            trans[(str(q), e)] = str(rng.randrange(lo, n))
            used.add((q, e))
    states = [str(q) for q in range(n)]
    if all_marked:
        marked = states
    else:
        marked = [s for s in states if rng.random() < marked_density]
        if not marked:
            marked = [rng.choice(states)]
    return Automaton.build(name, table, events, states, "0", marked, trans)


def random_subspec(rng: random.Random, plant: Automaton, name: str,
                   prefix_closed: bool = True, trans_keep: float = 0.75,
                   marked_density: float = 0.65) -> Automaton:
    """Sub-automaton of the plant, so the marked language stays inside it."""
    kept = [(src, e, dst) for src, e, dst in plant.transitions()
            if rng.random() < trans_keep]
    states = list(plant.states)
    if prefix_closed:
        marked = states
    else:
        marked = [s for s in states if rng.random() < marked_density]
        # An empty specification is legal but dull; keep it rare.
        if not marked and rng.random() < 0.8:
            marked = [states[0]]
    return Automaton.build(name, plant.table, plant.events, states,
                           states[0], marked, kept)


def random_alphabets(rng: random.Random, n_modules: int, max_events: int,
                     shared: bool = True) -> list[set[str]]:
    """Module alphabets drawn from the pool; each module gets at least one
    event, and ``shared=False`` keeps them pairwise disjoint."""
    floor = min(2, max_events) if shared else max(2, n_modules)
    n_events = rng.randint(min(floor, max_events), max_events)
    pool = list(EVENT_POOL[:n_events])
    alphabets: list[set[str]] = [set() for _ in range(n_modules)]
    for e in pool:
        if shared and rng.random() < 0.4:
            owners = rng.sample(range(n_modules), rng.randint(2, n_modules))
        else:
            owners = [rng.randrange(n_modules)]
        for i in owners:
            alphabets[i].add(e)
    for i, sigma in enumerate(alphabets):
        if sigma:
            continue
        e = rng.choice(pool)
        if not shared:
            singles = [x for x in pool
                       if sum(x in a for a in alphabets) == 0]
            e = rng.choice(singles) if singles else None
            if e is None:
                # Pool exhausted; steal the last event of the richest module.
                donor = max(range(n_modules), key=lambda j: len(alphabets[j]))
                e = sorted(alphabets[donor])[0]
                alphabets[donor].discard(e)
        alphabets[i].add(e)
    return alphabets


def _shared_of(alphabets) -> set[str]:
    shared: set[str] = set()
    for i in range(len(alphabets)):
        for j in range(i + 1, len(alphabets)):
            shared |= alphabets[i] & alphabets[j]
    return shared


def random_local_system(rng: random.Random, n_modules: int = 2,
                        max_states: int = 4, max_events: int = 4,
                        shared: str = "any",
                        prefix_closed_specs: bool = True,
                        acyclic: bool = True,
                        repair: bool = False) -> ModularSystem:
    """Modular plant with per-module specs.

    ``shared`` constrains the attribute table on shared events: "any",
    "none" (disjoint alphabets), "observable", or "controllable-observable".
    ``repair`` replaces each plant with the projection of the composition
    onto its alphabet before specs are sampled, so Pi(L) = Li holds.
    """
    alphabets = random_alphabets(rng, n_modules, max_events,
                                 shared=shared != "none")
    union = set().union(*alphabets)
    shared_events = _shared_of(alphabets)
    force_obs = shared_events if shared in (
        "observable", "controllable-observable") else ()
    force_ctr = shared_events if shared == "controllable-observable" else ()
    table = random_table(rng, union, observable=force_obs,
                         controllable=force_ctr)
    plants = [random_automaton(rng, f"G{i + 1}", table, alphabets[i],
                               max_states=max_states, acyclic=acyclic)
              for i in range(n_modules)]
    if repair:
        comp = ops.parallel(plants, name="plant")
        plants = [ops.project(
            comp, ProjectionSpec(comp.alphabet, p.alphabet)
        ).renamed(p.name) for p in plants]
    modules = [Module(p, random_subspec(rng, p, f"K{i + 1}",
                                        prefix_closed=prefix_closed_specs))
               for i, p in enumerate(plants)]
    return ModularSystem(modules)


def random_global_system(rng: random.Random, n_modules: int = 2,
                         max_states: int = 4, max_events: int = 5,
                         acyclic: bool = True) -> ModularSystem:
    """Modular plant plus a prefix-closed global spec inside it.

    Shared events are forced observable so kappa extension can stay inside
    the observable alphabet.
    """
    alphabets = random_alphabets(rng, n_modules, max_events)
    union = set().union(*alphabets)
    table = random_table(rng, union, observable=_shared_of(alphabets),
                         observable_density=0.75)
    plants = [random_automaton(rng, f"G{i + 1}", table, alphabets[i],
                               max_states=max_states, acyclic=acyclic)
              for i in range(n_modules)]
    comp = ops.parallel(plants, name="plant")
    spec = random_subspec(rng, comp, "K", prefix_closed=True)
    return ModularSystem([Module(p) for p in plants], global_spec=spec)


def random_coordination_instance(rng: random.Random, n_modules: int = 2,
                                 max_states: int = 4, max_events: int = 5,
                                 attempts: int = 50):
    """Global-spec system together with an observable kappa.

    Draws systems until the greedy extension lands inside the observable
    alphabet, which the observable-first preference makes the common case.
    """
    for _ in range(attempts):
        m = random_global_system(rng, n_modules=n_modules,
                                 max_states=max_states,
                                 max_events=max_events)
        seed = frozenset(_shared_of(m.alphabets()))
        kappa = extend_kappa(m.global_spec, m.alphabets(), seed)
        if kappa <= m.table.observable:
            return m, kappa
    raise RuntimeError(f"no observable kappa found in {attempts} draws")


def random_problem(rng: random.Random, max_states: int = 4,
                   max_events: int = 4, acyclic: bool = True,
                   prefix_closed: bool = False) -> SynthesisProblem:
    """Single plant/spec pair for the oracle agreement suite."""
    n_events = rng.randint(min(2, max_events), max_events)
    alphabet = frozenset(EVENT_POOL[:n_events])
    table = random_table(rng, alphabet)
    plant = random_automaton(rng, "G", table, alphabet,
                             max_states=max_states, acyclic=acyclic)
    spec = random_subspec(rng, plant, "K", prefix_closed=prefix_closed)
    return SynthesisProblem(plant, spec)


def random_check_instance(rng: random.Random, max_states: int = 5,
                          max_events: int = 5):
    """Trim automaton with a sub-alphabet projection, for the observer,
    OCC, and LCC suites. Acyclic, so brute force to the state count is
    complete."""
    n_events = rng.randint(2, max_events)
    alphabet = frozenset(EVENT_POOL[:n_events])
    table = random_table(rng, alphabet)
    g = random_automaton(rng, "G", table, alphabet, max_states=max_states,
                         acyclic=True, edge_density=0.5, all_marked=False)
    g = ops.trim(g)
    events = sorted(alphabet)
    gamma = frozenset(rng.sample(events, rng.randint(1, len(events))))
    return g, ProjectionSpec(alphabet, gamma)
