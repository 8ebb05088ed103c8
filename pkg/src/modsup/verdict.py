"""Verdict values produced by predicates, checks, and the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .events import Word, render_word


@dataclass(frozen=True)
class CheckVerdict:
    """Outcome of one named check.

    ``holds`` is three-valued: True, False, or None for a check that was not
    run. A bounded check that found nothing sets ``holds`` True together
    with the ``bound`` it explored, which is weaker than an unbounded True.
    ``witness`` carries the counterexample strings (one or more words,
    meaning depends on the check) and is present exactly when the check
    failed.
    """

    name: str
    holds: bool | None
    bound: int | None = None
    witness: tuple[Word, ...] | None = None
    note: str | None = None
    seconds: float | None = None

    def __bool__(self) -> bool:
        return self.holds is True

    @property
    def status(self) -> str:
        if self.holds is None:
            return "not-run"
        if not self.holds:
            return "fails"
        if self.bound is not None:
            return f"holds-up-to-bound {self.bound}"
        return "holds"

    def describe(self) -> str:
        parts = [f"{self.name}: {self.status}"]
        if self.witness:
            rendered = ", ".join(render_word(w) for w in self.witness)
            parts.append(f"witness [{rendered}]")
        if self.note:
            parts.append(self.note)
        return "; ".join(parts)

    def timed(self, seconds: float) -> "CheckVerdict":
        return replace(self, seconds=seconds)
