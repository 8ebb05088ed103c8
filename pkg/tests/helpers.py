"""Shared builders for the test suite."""

from __future__ import annotations

from pathlib import Path

from modsup.automaton import Automaton
from modsup.events import EventTable, Word

MODELS = Path(__file__).resolve().parent.parent / "models"


def make_table(events, controllable=None, observable=None) -> EventTable:
    """Event table where None means "every event has the attribute"."""
    events = frozenset(events)
    c = events if controllable is None else frozenset(controllable)
    o = events if observable is None else frozenset(observable)
    return EventTable(events, controllable=c, observable=o)


def chain(name: str, word: Word, alphabet, table: EventTable,
          marked: str = "all") -> Automaton:
    """Path automaton spelling ``word``; marks all states or only the last."""
    states = [str(i) for i in range(len(word) + 1)]
    transitions = [(states[i], e, states[i + 1]) for i, e in enumerate(word)]
    marked_states = states if marked == "all" else [states[-1]]
    return Automaton.build(name, table, alphabet, states, states[0],
                           marked_states, transitions)


def trie_automaton(name: str, table: EventTable, alphabet, words,
                   marked_words=None) -> Automaton:
    """Trie recognizer: marked language = marked_words (default: words),
    generated language = the prefix closure of words."""
    words = [tuple(w) for w in words]
    marked = {tuple(w) for w in (words if marked_words is None else marked_words)}
    node_of: dict[Word, str] = {(): "0"}
    transitions = []
    for w in words:
        for i in range(len(w)):
            prefix = w[: i + 1]
            if prefix not in node_of:
                node_of[prefix] = str(len(node_of))
                transitions.append((node_of[w[:i]], w[i], node_of[prefix]))
    states = [node_of[p] for p in node_of]
    marked_states = [node_of[w] for w in node_of if w in marked]
    return Automaton.build(name, table, alphabet, states, "0",
                           marked_states, transitions)


def counterexample_triple():
    """Three-module system where each local supervisor loses language.

    Shared events: u between modules 1 and 2 (unobservable), c between all
    three (observable). The composed plant deadlocks both shared events, so
    the monolithic supervisor keeps every local specification while the
    first local one collapses to the empty language.
    """
    table = EventTable(
        {"u1", "u2", "u3", "u", "c"},
        controllable={"u1", "u2", "u3", "c"},
        observable={"c"},
    )
    s1 = {"u1", "u", "c"}
    s2 = {"u2", "c", "u"}
    s3 = {"u3", "c"}
    l1 = chain("L1", ("u1", "u", "c"), s1, table)
    l2 = chain("L2", ("u2", "c", "u"), s2, table)
    l3 = chain("L3", ("u3", "c"), s3, table)
    k1 = chain("K1", ("u1",), s1, table)
    k2 = chain("K2", ("u2",), s2, table)
    k3 = chain("K3", ("u3",), s3, table)
    return table, (l1, l2, l3), (k1, k2, k3)
