"""Language-level operations on automata.

Every operation returns a fresh normalized automaton (accessible, BFS state
order) and is judged by the languages it realizes, never by state-graph
shape. Composed state identities are dot-joined source names, capped with a
stable digest when they grow too long; projection states render the subset
they stand for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .automaton import Automaton, cap_name, require_same_alphabet, require_same_table
from .errors import AlphabetMismatchError, ModsupError
from .events import ProjectionSpec, Word

_DEAD = "~dead"


# -- small result types ---------------------------------------------------

@dataclass(frozen=True)
class LanguageInclusion:
    """Subset verdicts for the marked and generated languages separately.

    A witness, when present, is a shortest word in the left language that
    the right one lacks.
    """

    marked: bool
    generated: bool
    marked_witness: Word | None = None
    generated_witness: Word | None = None

    def __bool__(self) -> bool:
        return self.marked and self.generated


@dataclass(frozen=True)
class LanguageEquality:
    """Equality verdicts per language side, with one-sided shortest witnesses.

    ``*_side`` names where the witness lives: "left" means the first
    automaton's language contains it, "right" the second's.
    """

    marked: bool
    generated: bool
    marked_witness: Word | None = None
    marked_side: str | None = None
    generated_witness: Word | None = None
    generated_side: str | None = None

    def __bool__(self) -> bool:
        return self.marked and self.generated


@dataclass(frozen=True)
class EnumeratedLanguage:
    marked: frozenset[Word]
    generated: frozenset[Word]
    bound: int


# -- reachability helpers --------------------------------------------------

def _sub_automaton(a: Automaton, keep: np.ndarray, name: str) -> Automaton:
    """Restriction of ``a`` to the kept states (initial must be kept)."""
    n = a.n_states
    remap = np.full(n, -1, dtype=np.int32)
    kept_states = [i for i in range(n) if keep[i]]
    for new, old in enumerate(kept_states):
        remap[old] = new
    trans = np.full((len(kept_states), len(a.events)), -1, dtype=np.int32)
    for new, old in enumerate(kept_states):
        row = a._trans[old]
        for e in range(len(a.events)):
            t = row[e]
            trans[new, e] = remap[t] if t >= 0 else -1
    states = tuple(a.states[old] for old in kept_states)
    marked = np.array([a._marked[old] for old in kept_states], dtype=np.uint8)
    return Automaton.from_arrays(name, a.table, a.events, states, trans, marked)


def trim(a: Automaton) -> Automaton:
    """Keep the states that are both reachable and co-reachable.

    The generated language becomes the closure of the marked language; an
    automaton marking nothing collapses to the canonical empty recognizer.
    """
    co = kernels.coreachable(a._trans, a._marked)
    if not co[0]:
        return Automaton.canonical_empty(a.table, a.events, a.name)
    if co.all():
        return a
    return _sub_automaton(a, co, a.name)


def is_nonblocking(a: Automaton) -> bool:
    """True when every reachable state can still reach marking."""
    return bool(kernels.coreachable(a._trans, a._marked).all())


def prefix_closure(a: Automaton) -> Automaton:
    """Mark every state lying on a path to a marked state.

    The marked language becomes the closure of the original one; the
    generated language is untouched. The closure of the empty language is
    empty, which this realizes by marking nothing.
    """
    co = kernels.coreachable(a._trans, a._marked)
    return Automaton(a.name, a.table, a.events, a.states, a._trans.copy(), co)


# -- composition -----------------------------------------------------------

def parallel(automata: list[Automaton] | tuple[Automaton, ...],
             name: str | None = None) -> Automaton:
    """Synchronous composition over the union alphabet.

    Components synchronize on shared events and interleave private ones; a
    composed state is marked when every component is.
    """
    if not automata:
        raise ModsupError("parallel composition needs at least one automaton")
    table = require_same_table(*automata)
    if len(automata) == 1:
        return automata[0]
    events = tuple(sorted(frozenset().union(*(a.alphabet for a in automata))))
    acc_trans = automata[0].aligned(events)
    acc_names = list(automata[0].states)
    acc_marked = automata[0]._marked.copy()
    for nxt in automata[1:]:
        pa, pb, tp = kernels.product_pair(acc_trans, nxt.aligned(events), 0, 0)
        acc_trans = tp
        acc_marked = (acc_marked[pa] & nxt._marked[pb]).astype(np.uint8)
        acc_names = [f"{acc_names[i]}.{nxt.states[j]}"
                     for i, j in zip(pa.tolist(), pb.tolist())]
    if name is None:
        name = cap_name("||".join(a.name for a in automata))
    states = tuple(cap_name(s) for s in acc_names)
    return Automaton.from_arrays(name, table, events, states, acc_trans,
                                 acc_marked)


def product(a: Automaton, b: Automaton, name: str | None = None) -> Automaton:
    """Composition of two automata over one common alphabet (intersection
    of both languages). A convenience wrapper used by the predicates."""
    require_same_alphabet(a, b)
    return parallel([a, b], name=name)


# -- projection ------------------------------------------------------------

def _project_with_members(a: Automaton, p: ProjectionSpec):
    if p.source != a.alphabet:
        raise AlphabetMismatchError(
            f"projection source differs from the alphabet of {a.name!r}")
    keep = np.array([1 if e in p.target else 0 for e in a.events],
                    dtype=np.uint8)
    tp, pmarked, off, members = kernels.subset_project(
        a._trans, 0, a._marked, keep)
    kept_events = tuple(e for e in a.events if e in p.target)
    subsets = [tuple(int(s) for s in members[off[k]:off[k + 1]])
               for k in range(len(pmarked))]
    names = tuple(
        cap_name("{" + ",".join(a.states[s] for s in subset) + "}")
        for subset in subsets)
    result = Automaton.from_arrays(cap_name(f"proj({a.name})"), a.table,
                                   kept_events, names, tp, pmarked)
    return result, subsets


def project(a: Automaton, p: ProjectionSpec) -> Automaton:
    """Natural projection: erase events outside the target, determinize.

    The result is deterministic and accessible by construction; it is not
    minimized (minimization stays an explicit, separate step).
    """
    result, _ = _project_with_members(a, p)
    return result


def inverse_project(a: Automaton, p: ProjectionSpec) -> Automaton:
    """Inverse image of both languages under the projection.

    Realized by self-looping every state on the events the projection
    erases; ``p.target`` must be the automaton's alphabet.
    """
    if p.target != a.alphabet:
        raise AlphabetMismatchError(
            f"inverse projection needs target equal to the alphabet of "
            f"{a.name!r}")
    events = tuple(sorted(p.source))
    n = a.n_states
    trans = np.full((n, len(events)), -1, dtype=np.int32)
    for col, ev in enumerate(events):
        if ev in a.alphabet:
            trans[:, col] = a._trans[:, a.events.index(ev)]
        else:
            trans[:, col] = np.arange(n, dtype=np.int32)
    return Automaton.from_arrays(cap_name(f"lift({a.name})"), a.table, events,
                                 a.states, trans, a._marked.copy())


# -- boolean algebra -------------------------------------------------------

def _completed(a: Automaton) -> tuple[np.ndarray, np.ndarray, int]:
    """Total transition table with a fresh unmarked dead state appended."""
    n = a.n_states
    sink = n
    trans = np.full((n + 1, len(a.events)), sink, dtype=np.int32)
    trans[:n] = np.where(a._trans >= 0, a._trans, sink)
    marked = np.zeros(n + 1, dtype=np.uint8)
    marked[:n] = a._marked
    return trans, marked, sink


def difference(a: Automaton, b: Automaton, name: str | None = None) -> Automaton:
    """Recognizer of Lm(a) minus Lm(b); the generated language stays L(a)."""
    require_same_alphabet(a, b)
    require_same_table(a, b)
    btrans, bmarked, sink = _completed(b)
    pa, pb, tp = kernels.product_pair(a._trans, btrans, 0, 0)
    marked = (a._marked[pa] & (1 - bmarked[pb])).astype(np.uint8)
    b_names = list(b.states) + [_DEAD]
    states = tuple(cap_name(f"{a.states[i]}.{b_names[j]}")
                   for i, j in zip(pa.tolist(), pb.tolist()))
    if name is None:
        name = cap_name(f"diff({a.name},{b.name})")
    return Automaton.from_arrays(name, a.table, a.events, states, tp, marked)


def shortest_to(tp: np.ndarray, events: tuple[str, ...],
                hit) -> tuple[Word, int] | None:
    """Shortest word (ties: event order) from state 0 to a state where
    ``hit(state)`` holds, walking a composed transition table. Returns the
    word together with the state it ends in."""
    n = tp.shape[0]
    if hit(0):
        return (), 0
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=np.uint8)
    seen[0] = 1
    queue = [0]
    head = 0
    while head < len(queue):
        s = queue[head]
        head += 1
        row = tp[s]
        for e in range(len(events)):
            t = row[e]
            if t < 0 or seen[t]:
                continue
            seen[t] = 1
            parent[t] = s
            via[t] = e
            if hit(int(t)):
                word = []
                cur = int(t)
                while cur != 0:
                    word.append(events[via[cur]])
                    cur = int(parent[cur])
                word.reverse()
                return tuple(word), int(t)
            queue.append(int(t))
    return None


def _bfs_shortest(tp: np.ndarray, events: tuple[str, ...], hit) -> Word | None:
    found = shortest_to(tp, events, hit)
    return None if found is None else found[0]


def _marked_shortfall(a: Automaton, b: Automaton) -> Word | None:
    """Shortest word in Lm(a) that Lm(b) misses, or None."""
    btrans, bmarked, _ = _completed(b)
    pa, pb, tp = kernels.product_pair(a._trans, btrans, 0, 0)
    amark = a._marked
    return _bfs_shortest(
        tp, a.events,
        lambda k: bool(amark[pa[k]]) and not bool(bmarked[pb[k]]))


def _generated_shortfall(a: Automaton, b: Automaton) -> Word | None:
    """Shortest word in L(a) that L(b) misses, or None."""
    btrans, _, sink = _completed(b)
    pa, pb, tp = kernels.product_pair(a._trans, btrans, 0, 0)
    return _bfs_shortest(tp, a.events, lambda k: int(pb[k]) == sink)


def language_subset(a: Automaton, b: Automaton) -> LanguageInclusion:
    """Decide Lm(a) within Lm(b) and L(a) within L(b), with shortest
    counterexamples on failure."""
    require_same_alphabet(a, b)
    mw = _marked_shortfall(a, b)
    gw = _generated_shortfall(a, b)
    return LanguageInclusion(marked=mw is None, generated=gw is None,
                             marked_witness=mw, generated_witness=gw)


def language_equal(a: Automaton, b: Automaton) -> LanguageEquality:
    """Decide equality of the marked and generated languages separately."""
    require_same_alphabet(a, b)
    mw = _marked_shortfall(a, b)
    m_side = "left" if mw is not None else None
    if mw is None:
        mw = _marked_shortfall(b, a)
        m_side = "right" if mw is not None else None
    gw = _generated_shortfall(a, b)
    g_side = "left" if gw is not None else None
    if gw is None:
        gw = _generated_shortfall(b, a)
        g_side = "right" if gw is not None else None
    return LanguageEquality(marked=m_side is None, generated=g_side is None,
                            marked_witness=mw, marked_side=m_side,
                            generated_witness=gw, generated_side=g_side)


def marked_in_generated(a: Automaton, b: Automaton) -> Word | None:
    """Shortest word of Lm(a) outside L(b); None when Lm(a) is within L(b)."""
    require_same_alphabet(a, b)
    btrans, _, sink = _completed(b)
    pa, pb, tp = kernels.product_pair(a._trans, btrans, 0, 0)
    amark = a._marked
    return _bfs_shortest(
        tp, a.events,
        lambda k: bool(amark[pa[k]]) and int(pb[k]) == sink)


# -- nonconflict -----------------------------------------------------------

def is_nonconflicting(automata: list[Automaton] | tuple[Automaton, ...]) -> bool:
    """Whether the closure of the composed marked languages equals the
    composition of the closures."""
    joint = prefix_closure(parallel(list(automata)))
    closed = parallel([prefix_closure(a) for a in automata])
    return language_equal(joint, closed).marked


def nonconflict_witness(automata: list[Automaton]) -> Word | None:
    """Shortest word separating the two sides of the nonconflict equation."""
    joint = prefix_closure(parallel(list(automata)))
    closed = parallel([prefix_closure(a) for a in automata])
    return _marked_shortfall(closed, joint)


# -- enumeration -----------------------------------------------------------

def enumerate_language(a: Automaton, bound: int) -> EnumeratedLanguage:
    """All words of length up to ``bound`` in both languages."""
    if bound < 0:
        raise ModsupError("enumeration bound must be nonnegative")
    marked: set[Word] = set()
    generated: set[Word] = set()
    stack: list[tuple[int, Word]] = [(0, ())]
    while stack:
        state, word = stack.pop()
        generated.add(word)
        if a._marked[state]:
            marked.add(word)
        if len(word) == bound:
            continue
        row = a._trans[state]
        for e, ev in enumerate(a.events):
            t = row[e]
            if t >= 0:
                stack.append((int(t), word + (ev,)))
    return EnumeratedLanguage(frozenset(marked), frozenset(generated), bound)


# -- minimization ----------------------------------------------------------

def minimize(a: Automaton) -> Automaton:
    """Least-state partial DFA preserving both languages.

    States are distinguished by marking and by domain membership (a live
    dead-end differs from the implicit dead state), then merged under the
    coarsest stable partition. Representative names are kept.
    """
    trans, marked, sink = _completed(a)
    status = np.zeros(a.n_states + 1, dtype=np.int32)
    status[: a.n_states] = a._marked
    status[sink] = 2
    class_of, n_classes = kernels.refine_partition(trans, status)
    sink_class = int(class_of[sink])
    reps: dict[int, int] = {}
    for s in range(a.n_states):
        reps.setdefault(int(class_of[s]), s)
    order = sorted(c for c in reps if c != sink_class)
    renum = {c: i for i, c in enumerate(order)}
    new_trans = np.full((len(order), len(a.events)), -1, dtype=np.int32)
    new_marked = np.zeros(len(order), dtype=np.uint8)
    names = []
    for c in order:
        rep = reps[c]
        i = renum[c]
        names.append(a.states[rep])
        new_marked[i] = a._marked[rep]
        row = a._trans[rep]
        for e in range(len(a.events)):
            t = row[e]
            if t >= 0:
                new_trans[i, e] = renum[int(class_of[t])]
    initial = renum[int(class_of[0])]
    return Automaton.from_arrays(a.name, a.table, a.events, tuple(names),
                                 new_trans, new_marked, initial)
