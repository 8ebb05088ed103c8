"""Deterministic finite automata with partial transition functions.

An automaton recognizes two languages at once: the generated language (all
words its transition graph can execute from the initial state) and the
marked language (words ending in a marked state). Both are compared at the
language level by the operations in ``ops``; state graphs are never compared
directly.

Instances are immutable: the transition table and marking vector are numpy
arrays with the write flag cleared, and every constructor normalizes to the
accessible part with states in breadth-first discovery order, initial state
first. That canonical order is what makes composed results byte-reproducible
across runs and kernel backends.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import kernels
from .errors import AlphabetMismatchError, ModsupError
from .events import EventTable, Word, _check_token

# Composed state names beyond this length are shortened with a stable digest.
MAX_STATE_NAME = 96

TransitionInput = Mapping[tuple[str, str], str] | Iterable[tuple[str, str, str]]


def cap_name(raw: str) -> str:
    """Shorten a long composed state name, keeping it stable across runs."""
    if len(raw) <= MAX_STATE_NAME:
        return raw
    digest = hashlib.blake2s(raw.encode("utf-8")).hexdigest()[:10]
    return f"{raw[:MAX_STATE_NAME]}~{digest}"


class Automaton:
    """Immutable partial DFA over a subset of an event table."""

    __slots__ = ("name", "table", "events", "states", "_trans", "_marked",
                 "_event_index")

    def __init__(self, name: str, table: EventTable, events: tuple[str, ...],
                 states: tuple[str, ...], trans: np.ndarray, marked: np.ndarray):
        # Trusted constructor: arrays must already be normalized
        # (accessible, BFS order, initial at index 0).
        self.name = name
        self.table = table
        self.events = events
        self.states = states
        trans = np.ascontiguousarray(trans, dtype=np.int32)
        marked = np.ascontiguousarray(marked, dtype=np.uint8)
        trans.setflags(write=False)
        marked.setflags(write=False)
        self._trans = trans
        self._marked = marked
        self._event_index = {e: i for i, e in enumerate(events)}

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, name: str, table: EventTable, alphabet: Iterable[str],
              states: Iterable[str], initial: str, marked: Iterable[str],
              transitions: TransitionInput) -> "Automaton":
        """Validate, then normalize to the accessible part in BFS order."""
        events = tuple(sorted(frozenset(alphabet)))
        for e in events:
            if e not in table.events:
                raise ModsupError(f"automaton {name!r} uses event {e!r} that "
                                  "is not in its event table")
        state_list = list(dict.fromkeys(states))
        for s in state_list:
            _check_token(s, "state")
        index = {s: i for i, s in enumerate(state_list)}
        if initial not in index:
            raise ModsupError(f"automaton {name!r}: initial state {initial!r} "
                              "is not declared")
        marked_set = frozenset(marked)
        for s in marked_set:
            if s not in index:
                raise ModsupError(f"automaton {name!r}: marked state {s!r} "
                                  "is not declared")
        eix = {e: i for i, e in enumerate(events)}
        n = len(state_list)
        trans = np.full((n, len(events)), -1, dtype=np.int32)
        # Two accepted shapes: {(src, event): dst} or iterable of triples.
        if isinstance(transitions, Mapping):
            triples = [(src, ev, dst) for (src, ev), dst in transitions.items()]
        else:
            triples = [tuple(t) for t in transitions]
        for src, ev, dst in triples:
            if src not in index or dst not in index:
                raise ModsupError(f"automaton {name!r}: transition "
                                  f"{src} {ev} {dst} uses undeclared states")
            if ev not in eix:
                raise ModsupError(f"automaton {name!r}: transition event "
                                  f"{ev!r} is outside the alphabet")
            cell = trans[index[src], eix[ev]]
            if cell != -1 and cell != index[dst]:
                raise ModsupError(f"automaton {name!r}: nondeterministic "
                                  f"transitions from {src!r} on {ev!r}")
            trans[index[src], eix[ev]] = index[dst]
        marked_arr = np.zeros(n, dtype=np.uint8)
        for s in marked_set:
            marked_arr[index[s]] = 1
        return cls._normalized(name, table, events, tuple(state_list), trans,
                               marked_arr, index[initial])

    @classmethod
    def _normalized(cls, name: str, table: EventTable, events: tuple[str, ...],
                    states: tuple[str, ...], trans: np.ndarray,
                    marked: np.ndarray, initial: int) -> "Automaton":
        """Restrict to the accessible part and renumber in BFS order."""
        order = kernels.reachable(trans, initial)
        remap = np.full(len(states), -1, dtype=np.int32)
        for new, old in enumerate(order):
            remap[old] = new
        new_trans = np.full((len(order), len(events)), -1, dtype=np.int32)
        for new, old in enumerate(order):
            row = trans[old]
            for e in range(len(events)):
                t = row[e]
                new_trans[new, e] = remap[t] if t >= 0 else -1
        new_states = tuple(states[old] for old in order)
        new_marked = np.array([marked[old] for old in order], dtype=np.uint8)
        return cls(name, table, events, new_states, new_trans, new_marked)

    @classmethod
    def from_arrays(cls, name: str, table: EventTable, events: tuple[str, ...],
                    states: tuple[str, ...], trans: np.ndarray,
                    marked: np.ndarray, initial: int = 0) -> "Automaton":
        """Construction path for operation results; still re-normalizes."""
        return cls._normalized(name, table, events, states, trans, marked,
                               initial)

    @classmethod
    def canonical_empty(cls, table: EventTable, alphabet: Iterable[str],
                        name: str = "empty") -> "Automaton":
        """The one-state recognizer of the empty marked language.

        Its generated language is the single empty word; the closure of the
        empty language stays empty at the language level.
        """
        events = tuple(sorted(frozenset(alphabet)))
        trans = np.full((1, len(events)), -1, dtype=np.int32)
        marked = np.zeros(1, dtype=np.uint8)
        return cls(name, table, events, ("0",), trans, marked)

    # -- basic queries ----------------------------------------------------

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.events)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_transitions(self) -> int:
        return int((self._trans >= 0).sum())

    @property
    def initial(self) -> str:
        return self.states[0]

    def is_marked(self, state: str) -> bool:
        return bool(self._marked[self.states.index(state)])

    @property
    def marked_names(self) -> tuple[str, ...]:
        return tuple(s for i, s in enumerate(self.states) if self._marked[i])

    def successor(self, state: str, event: str) -> str | None:
        i = self.states.index(state)
        e = self._event_index.get(event)
        if e is None:
            return None
        t = self._trans[i, e]
        return self.states[t] if t >= 0 else None

    def transitions(self) -> Iterator[tuple[str, str, str]]:
        """All transitions as (source, event, target) in canonical order."""
        for i, src in enumerate(self.states):
            row = self._trans[i]
            for e, ev in enumerate(self.events):
                t = row[e]
                if t >= 0:
                    yield (src, ev, self.states[t])

    def run(self, word: Word) -> int | None:
        """State index reached by ``word``, or None if it leaves the graph."""
        cur = 0
        for ev in word:
            e = self._event_index.get(ev)
            if e is None:
                return None
            t = self._trans[cur, e]
            if t < 0:
                return None
            cur = int(t)
        return cur

    def accepts(self, word: Word, *, marked: bool = True) -> bool:
        """Membership of ``word`` in the marked (or generated) language."""
        state = self.run(word)
        if state is None:
            return False
        return bool(self._marked[state]) if marked else True

    def renamed(self, name: str) -> "Automaton":
        return Automaton(name, self.table, self.events, self.states,
                         self._trans, self._marked)

    def aligned(self, events: tuple[str, ...]) -> np.ndarray:
        """Transition table over a superset event order; -2 marks columns
        for events outside this automaton's alphabet."""
        n = self.n_states
        out = np.full((n, len(events)), -2, dtype=np.int32)
        for col, ev in enumerate(events):
            e = self._event_index.get(ev)
            if e is not None:
                out[:, col] = self._trans[:, e]
        return out

    def same_structure(self, other: "Automaton") -> bool:
        """Identical canonical form (alphabet, order, table, marking)."""
        return (self.events == other.events
                and self.states == other.states
                and np.array_equal(self._trans, other._trans)
                and np.array_equal(self._marked, other._marked))

    def __repr__(self) -> str:
        return (f"Automaton({self.name!r}, states={self.n_states}, "
                f"transitions={self.n_transitions}, events={len(self.events)})")


def require_same_table(*automata: Automaton) -> EventTable:
    table = automata[0].table
    for a in automata[1:]:
        if a.table is not table and a.table != table:
            raise AlphabetMismatchError(
                "automata must share one event table; attributes of "
                f"{a.name!r} were declared separately")
    return table


def require_same_alphabet(a: Automaton, b: Automaton) -> None:
    if a.events != b.events:
        raise AlphabetMismatchError(
            f"{a.name!r} and {b.name!r} have different alphabets; lift them "
            "to a common alphabet first")
