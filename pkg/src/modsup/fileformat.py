"""Plain-text automaton files.

Layout (UTF-8, LF line endings, full-line ``#`` comments and blank lines
allowed anywhere):

    AUTOMATON <name>
    EVENTS
    <event> <c|u><o|x>
    STATES
    <state> [initial] [marked]
    TRANSITIONS
    <src> <event> <dst>
    END

The two-letter attribute code reads: c controllable / u uncontrollable,
then o observable / x unobservable. Exactly one state is flagged initial.
A repeated (source, event) transition line is a parse error even when the
target agrees. When several files are loaded together, an event declared
with different attributes in two files is a load error naming both files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automaton import Automaton
from .errors import EventConflictError, FormatError
from .events import EventTable

_ATTR_CODES = {"co", "cx", "uo", "ux"}


@dataclass
class ParsedAutomaton:
    name: str
    attributes: dict[str, tuple[bool, bool]]  # event -> (controllable, observable)
    states: list[str]
    initial: str
    marked: list[str]
    transitions: list[tuple[str, str, str]]
    source: str


def parse_automaton_text(text: str, source: str = "<string>") -> ParsedAutomaton:
    lines = text.split("\n")
    tokens: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens.append((lineno, stripped.split()))

    def fail(lineno: int, message: str) -> FormatError:
        return FormatError(f"{source}:{lineno}: {message}")

    pos = 0

    def take() -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError(f"{source}: unexpected end of file")
        item = tokens[pos]
        pos += 1
        return item

    lineno, parts = take()
    if len(parts) != 2 or parts[0] != "AUTOMATON":
        raise fail(lineno, "expected 'AUTOMATON <name>'")
    name = parts[1]

    lineno, parts = take()
    if parts != ["EVENTS"]:
        raise fail(lineno, "expected 'EVENTS'")
    attributes: dict[str, tuple[bool, bool]] = {}
    while True:
        lineno, parts = take()
        if parts == ["STATES"]:
            break
        if len(parts) != 2:
            raise fail(lineno, "expected '<event> <c|u><o|x>'")
        event, code = parts
        if code not in _ATTR_CODES:
            raise fail(lineno, f"bad attribute code {code!r} "
                               "(expected one of co, cx, uo, ux)")
        if event in attributes:
            raise fail(lineno, f"event {event!r} declared twice")
        attributes[event] = (code[0] == "c", code[1] == "o")

    states: list[str] = []
    initial: str | None = None
    marked: list[str] = []
    seen_states: set[str] = set()
    while True:
        lineno, parts = take()
        if parts == ["TRANSITIONS"]:
            break
        state, flags = parts[0], parts[1:]
        if state in seen_states:
            raise fail(lineno, f"state {state!r} declared twice")
        seen_states.add(state)
        states.append(state)
        for flag in flags:
            if flag == "initial":
                if initial is not None:
                    raise fail(lineno, "a second state is flagged initial")
                initial = state
            elif flag == "marked":
                marked.append(state)
            else:
                raise fail(lineno, f"unknown state flag {flag!r}")
    if initial is None:
        raise FormatError(f"{source}: no state is flagged initial")

    transitions: list[tuple[str, str, str]] = []
    seen_edges: set[tuple[str, str]] = set()
    while True:
        lineno, parts = take()
        if parts == ["END"]:
            break
        if len(parts) != 3:
            raise fail(lineno, "expected '<src> <event> <dst>'")
        src, event, dst = parts
        if src not in seen_states or dst not in seen_states:
            raise fail(lineno, f"transition uses undeclared state: "
                               f"{src} {event} {dst}")
        if event not in attributes:
            raise fail(lineno, f"transition uses undeclared event {event!r}")
        if (src, event) in seen_edges:
            raise fail(lineno, f"duplicate transition from {src!r} on {event!r}")
        seen_edges.add((src, event))
        transitions.append((src, event, dst))
    if pos != len(tokens):
        extra_line = tokens[pos][0]
        raise fail(extra_line, "content after END")

    return ParsedAutomaton(name, attributes, states, initial, marked,
                           transitions, source)


def table_from_attributes(attr_sets: Sequence[dict[str, tuple[bool, bool]]],
                          sources: Sequence[str]) -> EventTable:
    """Merge per-file attribute maps, rejecting conflicting declarations."""
    merged: dict[str, tuple[bool, bool]] = {}
    first_source: dict[str, str] = {}
    for attrs, source in zip(attr_sets, sources):
        for event, flags in attrs.items():
            if event in merged and merged[event] != flags:
                raise EventConflictError(
                    f"event {event!r} is declared "
                    f"{_code(merged[event])} in {first_source[event]} but "
                    f"{_code(flags)} in {source}")
            if event not in merged:
                merged[event] = flags
                first_source[event] = source
    events = frozenset(merged)
    controllable = frozenset(e for e, (c, _) in merged.items() if c)
    observable = frozenset(e for e, (_, o) in merged.items() if o)
    return EventTable(events, controllable, observable)


def _code(flags: tuple[bool, bool]) -> str:
    return ("c" if flags[0] else "u") + ("o" if flags[1] else "x")


def build_from_parsed(parsed: ParsedAutomaton, table: EventTable) -> Automaton:
    return Automaton.build(parsed.name, table, parsed.attributes.keys(),
                           parsed.states, parsed.initial, parsed.marked,
                           parsed.transitions)


def load_automata(paths: Sequence[str | os.PathLike]) -> tuple[EventTable, list[Automaton]]:
    """Load several files against one merged event table."""
    parsed_list = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        parsed_list.append(parse_automaton_text(text, str(path)))
    table = table_from_attributes([p.attributes for p in parsed_list],
                                  [p.source for p in parsed_list])
    return table, [build_from_parsed(p, table) for p in parsed_list]


def load_automaton(path: str | os.PathLike) -> Automaton:
    _, automata = load_automata([path])
    return automata[0]


def dump_automaton(a: Automaton) -> str:
    """Canonical text form; stable byte-for-byte for equal structures."""
    out = [f"AUTOMATON {a.name}", "EVENTS"]
    for event in a.events:
        controllable, observable = a.table.attributes(event)
        out.append(f"{event} {_code((controllable, observable))}")
    out.append("STATES")
    for i, state in enumerate(a.states):
        flags = []
        if i == 0:
            flags.append("initial")
        if a._marked[i]:
            flags.append("marked")
        out.append(" ".join([state] + flags))
    out.append("TRANSITIONS")
    for src, event, dst in a.transitions():
        out.append(f"{src} {event} {dst}")
    out.append("END")
    return "\n".join(out) + "\n"


def save_automaton(a: Automaton, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_automaton(a))


def event_attribute_audit(paths: Iterable[str | os.PathLike]) -> EventTable:
    """Parse the files only to check attribute agreement across them."""
    table, _ = load_automata(list(paths))
    return table
