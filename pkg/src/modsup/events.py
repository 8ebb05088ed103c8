"""Event registries, projections between alphabets, and word helpers.

Words are tuples of event names. A single EventTable is the source of truth
for controllability and observability attributes; automata only carry a
subset of its events as their alphabet, so attribute agreement across a
modular system is guaranteed by construction once loading succeeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import AlphabetMismatchError, ModsupError

Word = tuple[str, ...]

EPSILON = "ε"


def render_word(word: Word) -> str:
    """Human-readable form of a word; the empty word prints as epsilon."""
    return " ".join(word) if word else EPSILON


def is_prefix(prefix: Word, word: Word) -> bool:
    return len(prefix) <= len(word) and word[: len(prefix)] == prefix


def prefixes(word: Word) -> Iterable[Word]:
    """All prefixes of ``word``, shortest first, including the word itself."""
    for k in range(len(word) + 1):
        yield word[:k]


def _check_token(name: str, kind: str) -> None:
    if not name or any(ch.isspace() for ch in name):
        raise ModsupError(f"{kind} name {name!r} must be a non-empty token "
                          "without whitespace")


@dataclass(frozen=True)
class EventTable:
    """Registry of events with their control and observation attributes."""

    events: frozenset[str]
    controllable: frozenset[str]
    observable: frozenset[str]

    def __init__(self, events: Iterable[str], controllable: Iterable[str],
                 observable: Iterable[str]):
        ev = frozenset(events)
        co = frozenset(controllable)
        ob = frozenset(observable)
        for e in ev:
            _check_token(e, "event")
        if not co <= ev:
            raise ModsupError(f"controllable events {sorted(co - ev)} are not "
                              "registered in the table")
        if not ob <= ev:
            raise ModsupError(f"observable events {sorted(ob - ev)} are not "
                              "registered in the table")
        object.__setattr__(self, "events", ev)
        object.__setattr__(self, "controllable", co)
        object.__setattr__(self, "observable", ob)

    @property
    def uncontrollable(self) -> frozenset[str]:
        return self.events - self.controllable

    @property
    def unobservable(self) -> frozenset[str]:
        return self.events - self.observable

    def is_controllable(self, event: str) -> bool:
        return event in self.controllable

    def is_observable(self, event: str) -> bool:
        return event in self.observable

    def attributes(self, event: str) -> tuple[bool, bool]:
        """(controllable, observable) flags of a registered event."""
        if event not in self.events:
            raise ModsupError(f"event {event!r} is not registered")
        return (event in self.controllable, event in self.observable)

    def observable_in(self, alphabet: Iterable[str]) -> frozenset[str]:
        return frozenset(alphabet) & self.observable

    def controllable_in(self, alphabet: Iterable[str]) -> frozenset[str]:
        return frozenset(alphabet) & self.controllable

    def uncontrollable_in(self, alphabet: Iterable[str]) -> frozenset[str]:
        return frozenset(alphabet) - self.controllable


@dataclass(frozen=True)
class ProjectionSpec:
    """Natural projection from ``source``* onto ``target``*.

    Applying it erases every event outside ``target``; the inverse image
    reinstates arbitrary interleavings of the erased events.
    """

    source: frozenset[str]
    target: frozenset[str]

    def __init__(self, source: Iterable[str], target: Iterable[str]):
        src = frozenset(source)
        tgt = frozenset(target)
        if not tgt <= src:
            raise AlphabetMismatchError(
                f"projection target {sorted(tgt - src)} is not contained in "
                "the source alphabet")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)

    def apply(self, word: Word) -> Word:
        """Erase the events outside the target alphabet."""
        return tuple(e for e in word if e in self.target)

    def restriction(self, alphabet: Iterable[str]) -> "ProjectionSpec":
        """The same erasure viewed from a sub-alphabet's strings."""
        alpha = frozenset(alphabet)
        return ProjectionSpec(alpha, alpha & self.target)

    @property
    def erased(self) -> frozenset[str]:
        return self.source - self.target


def observation_projection(alphabet: Iterable[str], table: EventTable) -> ProjectionSpec:
    """Projection of an alphabet onto its observable part."""
    alpha = frozenset(alphabet)
    return ProjectionSpec(alpha, alpha & table.observable)
