"""Brute-force string-level ground truth.

Everything here works on enumerated string sets and never touches the
automata types, so failures cannot be correlated with the main algorithms.
Results carry an exactness flag derived from slice saturation: a
prefix-closed slice with no string at the bound is the whole language.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain

from .errors import InvalidProblemError
from .events import Word


def closure_strings(strings: frozenset[Word]) -> frozenset[Word]:
    """All prefixes of the given strings."""
    out: set[Word] = set()
    for w in strings:
        for i in range(len(w) + 1):
            out.add(w[:i])
    return frozenset(out)


def project_word(word: Word, target: frozenset[str]) -> Word:
    return tuple(e for e in word if e in target)


def project_strings(strings, target: frozenset[str]) -> frozenset[Word]:
    return frozenset(project_word(w, frozenset(target)) for w in strings)


@dataclass(frozen=True)
class BoundedLanguage:
    """A language slice: every member of length up to the bound.

    ``prefix_closed`` declares the slice of a prefix-closed language, which
    is checked; ``saturated`` certifies the slice is the whole language
    (nothing sits at the bound, so nothing can lie beyond it)."""

    strings: frozenset[Word]
    bound: int
    alphabet: frozenset[str]
    prefix_closed: bool = False

    def __post_init__(self):
        if self.bound < 0:
            raise InvalidProblemError("bound must be nonnegative")
        for w in self.strings:
            if len(w) > self.bound:
                raise InvalidProblemError(
                    f"string of length {len(w)} exceeds bound {self.bound}")
            for e in w:
                if e not in self.alphabet:
                    raise InvalidProblemError(
                        f"event {e!r} outside the declared alphabet")
        if self.prefix_closed:
            missing = closure_strings(self.strings) - self.strings
            if self.strings and missing:
                raise InvalidProblemError(
                    "slice declared prefix-closed but misses prefixes")

    @property
    def saturated(self) -> bool:
        return all(len(w) < self.bound for w in self.strings)

    def restrict(self, strings) -> "BoundedLanguage":
        return BoundedLanguage(frozenset(strings), self.bound, self.alphabet)


@dataclass(frozen=True)
class OracleResult:
    language: BoundedLanguage
    exact: bool


class _Trie:
    __slots__ = ("children", "member")

    def __init__(self):
        self.children: dict[str, "_Trie"] = {}
        self.member = False


def _build_trie(strings) -> _Trie:
    root = _Trie()
    for w in strings:
        node = root
        for e in w:
            node = node.children.setdefault(e, _Trie())
        node.member = True
    return root


def parallel_strings(parts: list[tuple[frozenset[Word], frozenset[str]]],
                     bound: int) -> frozenset[Word]:
    """Slice of the synchronous composition of the given slices.

    A word belongs when each part contains the word's projection onto that
    part's alphabet; the search walks tuples of per-part trie nodes, so only
    jointly viable prefixes are ever expanded."""
    tries = [_build_trie(strings) for strings, _ in parts]
    alphabets = [alpha for _, alpha in parts]
    union = sorted(frozenset(chain.from_iterable(alphabets)))
    out: set[Word] = set()
    start = tuple(tries)
    queue: list[tuple[tuple[_Trie, ...], Word]] = [(start, ())]
    seen_words: set[Word] = {()}
    head = 0
    while head < len(queue):
        nodes, word = queue[head]
        head += 1
        if all(n.member for n in nodes):
            out.add(word)
        if len(word) == bound:
            continue
        for e in union:
            nxt = []
            ok = True
            for n, alpha in zip(nodes, alphabets):
                if e in alpha:
                    child = n.children.get(e)
                    if child is None:
                        ok = False
                        break
                    nxt.append(child)
                else:
                    nxt.append(n)
            if not ok:
                continue
            w2 = word + (e,)
            if w2 not in seen_words:
                seen_words.add(w2)
                queue.append((tuple(nxt), w2))
    return frozenset(out)


def _require_same_bound(*langs: BoundedLanguage) -> int:
    bounds = {x.bound for x in langs}
    if len(bounds) != 1:
        raise InvalidProblemError("slices must share one bound")
    return bounds.pop()


def _normality_filter(kept: frozenset[Word], plant: frozenset[Word],
                      observable: frozenset[str]) -> frozenset[Word]:
    closure = closure_strings(kept)
    plant_by_view: dict[Word, list[Word]] = {}
    for w in plant:
        plant_by_view.setdefault(project_word(w, observable), []).append(w)
    bad: set[Word] = set()
    for t in closure:
        for w in plant_by_view.get(project_word(t, observable), ()):
            if w not in closure:
                bad.add(t)
                break
    return frozenset(
        s for s in kept
        if not any(s[:i] in bad for i in range(len(s) + 1)))


def _controllability_filter(kept: frozenset[Word], plant: frozenset[Word],
                            uncontrollable: frozenset[str]) -> frozenset[Word]:
    closure = closure_strings(kept)
    bad: set[Word] = set()
    for t in closure:
        for e in uncontrollable:
            w = t + (e,)
            if w in plant and w not in closure:
                bad.add(t)
                break
    return frozenset(
        s for s in kept
        if not any(s[:i] in bad for i in range(len(s) + 1)))


def _spec_inside(spec: BoundedLanguage, plant: BoundedLanguage) -> None:
    if not spec.strings <= plant.strings:
        raise InvalidProblemError(
            "spec slice must lie inside the plant slice")


def oracle_sup_n(spec: BoundedLanguage, plant: BoundedLanguage,
                 observable) -> OracleResult:
    """Maximal subset of the spec slice whose closure admits no string that
    is observation-equivalent (within the plant slice) to a plant string
    outside the closure; iterated to a fixpoint because removals shrink the
    closure the test runs against. Trustworthy when the plant slice
    saturates; the flag says so."""
    _require_same_bound(spec, plant)
    _spec_inside(spec, plant)
    observable = frozenset(observable)
    kept = spec.strings
    while True:
        nxt = _normality_filter(kept, plant.strings, observable)
        if nxt == kept:
            break
        kept = nxt
    return OracleResult(spec.restrict(kept), plant.saturated)


def oracle_sup_c(spec: BoundedLanguage, plant: BoundedLanguage,
                 uncontrollable) -> OracleResult:
    """Maximal subset whose closure admits no uncontrollable plant
    continuation escaping the closure; iterated to a fixpoint."""
    _require_same_bound(spec, plant)
    _spec_inside(spec, plant)
    uncontrollable = frozenset(uncontrollable)
    kept = spec.strings
    while True:
        nxt = _controllability_filter(kept, plant.strings, uncontrollable)
        if nxt == kept:
            break
        kept = nxt
    return OracleResult(spec.restrict(kept), plant.saturated)


def oracle_sup_cn(spec: BoundedLanguage, plant: BoundedLanguage,
                  uncontrollable, observable) -> OracleResult:
    """Joint fixpoint of the controllability and normality filters."""
    _require_same_bound(spec, plant)
    _spec_inside(spec, plant)
    uncontrollable = frozenset(uncontrollable)
    observable = frozenset(observable)
    kept = spec.strings
    while True:
        nxt = _controllability_filter(kept, plant.strings, uncontrollable)
        nxt = _normality_filter(nxt, plant.strings, observable)
        if nxt == kept:
            break
        kept = nxt
    return OracleResult(spec.restrict(kept), plant.saturated)


def oracle_nonconflicting(parts: list[BoundedLanguage],
                          bound: int) -> tuple[bool, bool]:
    """Compares closure(composition) with composition(closures) on slices.

    Returns (verdict, exact). Exactness requires the composed-closure slice
    itself to saturate: that set is prefix-closed and contains both sides,
    so nothing at the bound means nothing beyond it. Part saturation alone
    is not enough; a composition of in-bound marked words can overrun the
    bound and its missing prefixes would skew the closure side."""
    marked = [(p.strings, p.alphabet) for p in parts]
    closed = [(closure_strings(p.strings), p.alphabet) for p in parts]
    lhs = closure_strings(parallel_strings(marked, bound))
    rhs = parallel_strings(closed, bound)
    exact = all(len(w) < bound for w in rhs)
    return lhs == rhs, exact


def oracle_moc(modules: list[BoundedLanguage], observable,
               bound: int) -> tuple[bool, tuple[Word, Word] | None]:
    """Literal triple loop of the observation-consistency definition over
    slices: for every composed string s and local string t' that look alike
    locally, search the composed slice for a representative s'. Returns the
    verdict and the failing (s, t') pair if any."""
    observable = frozenset(observable)
    parts = [(m.strings, m.alphabet) for m in modules]
    composed = parallel_strings(parts, bound)
    verdicts: list[tuple[Word, Word]] = []
    for i, module in enumerate(modules):
        sigma_i = module.alphabet
        local_obs = sigma_i & observable
        local_image = project_strings(composed, sigma_i)
        by_view: dict[Word, list[Word]] = {}
        for t in sorted(local_image, key=lambda w: (len(w), w)):
            by_view.setdefault(project_word(t, local_obs), []).append(t)
        for s in sorted(composed, key=lambda w: (len(w), w)):
            s_view = project_word(project_word(s, sigma_i), local_obs)
            s_obs = project_word(s, observable)
            for t in by_view.get(s_view, ()):
                found = any(
                    project_word(s2, observable) == s_obs
                    and project_word(s2, sigma_i) == t
                    for s2 in composed)
                if not found:
                    verdicts.append((s, t))
                    break
            if verdicts:
                break
        if verdicts:
            break
    if verdicts:
        return False, verdicts[0]
    return True, None
