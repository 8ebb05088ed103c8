"""Synthesis run reports.

A report carries artifact size rows (states, transitions, events), check
verdicts, the certification route, the optional equivalence verdict, and
per-stage timings. Two renderings exist: a human text table and a
line-oriented ``key=value`` machine form that parses back losslessly.
Both are deterministic for identical inputs; timings sit isolated at the
end so byte comparisons can strip them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automaton import Automaton
from .errors import FormatError
from .events import render_word
from .verdict import CheckVerdict

_ROLES = ("plant", "spec", "supervisor", "coordinator", "monolithic")


@dataclass(frozen=True)
class ArtifactRow:
    role: str
    name: str
    states: int
    transitions: int
    events: int

    @classmethod
    def of(cls, role: str, a: Automaton) -> "ArtifactRow":
        if role not in _ROLES:
            raise ValueError(f"unknown artifact role {role!r}")
        return cls(role, a.name, a.n_states, a.n_transitions, len(a.events))


@dataclass(frozen=True)
class CheckRow:
    name: str
    status: str  # holds | fails | not-run | holds-up-to-bound-N
    witness: str | None = None
    note: str | None = None

    @classmethod
    def of(cls, v: CheckVerdict) -> "CheckRow":
        witness = None
        if v.witness is not None:
            witness = " ; ".join(render_word(w) for w in v.witness)
        return cls(v.name, v.status.replace(" ", "-"), witness, v.note)

    @property
    def holds(self) -> bool:
        return self.status == "holds"


@dataclass
class SynthesisReport:
    mode: str
    synthesis: str
    artifacts: list[ArtifactRow] = field(default_factory=list)
    checks: list[CheckRow] = field(default_factory=list)
    route: str | None = None
    hypotheses: tuple[str, ...] = ()
    kappa: tuple[str, ...] | None = None
    notes: list[str] = field(default_factory=list)
    equivalence: bool | None = None
    equivalence_witness: str | None = None
    exit_code: int = 0
    timings: list[tuple[str, float]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.route is not None

    def add_check(self, v: CheckVerdict) -> CheckRow:
        row = CheckRow.of(v)
        self.checks.append(row)
        return row


def emit_report(r: SynthesisReport, format: str = "text") -> bytes:
    if format == "text":
        return render_text(r).encode("utf-8")
    if format == "machine":
        return render_machine(r).encode("utf-8")
    raise ValueError(f"unknown report format {format!r}")


# -- machine form -------------------------------------------------------------

def render_machine(r: SynthesisReport) -> str:
    lines = ["report=modsup-synthesis",
             f"mode={r.mode}",
             f"synthesis={r.synthesis}"]
    if r.kappa is not None:
        lines.append("kappa=" + " ".join(r.kappa))
    for note in r.notes:
        lines.append(f"note={note}")
    for a in r.artifacts:
        lines.append(f"artifact={a.role} {a.name} {a.states} "
                     f"{a.transitions} {a.events}")
    for c in r.checks:
        lines.append(f"check={c.name} {c.status}")
        if c.witness is not None:
            lines.append(f"check-witness={c.name} {c.witness}")
        if c.note is not None:
            lines.append(f"check-note={c.name} {c.note}")
    lines.append(f"route={r.route if r.route is not None else 'none'}")
    for h in r.hypotheses:
        lines.append(f"hypothesis={h}")
    lines.append(f"certified={'true' if r.certified else 'false'}")
    if r.equivalence is not None:
        lines.append(f"equivalence={'true' if r.equivalence else 'false'}")
        if r.equivalence_witness is not None:
            lines.append(f"equivalence-witness={r.equivalence_witness}")
    lines.append(f"exit={r.exit_code}")
    for stage, seconds in r.timings:
        lines.append(f"timing={stage} {seconds:.6f}")
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> SynthesisReport:
    r = SynthesisReport(mode="", synthesis="")
    notes: dict[str, str] = {}
    witnesses: dict[str, str] = {}
    hypotheses: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        key, sep, value = raw.partition("=")
        if not sep:
            raise FormatError(f"report line {lineno}: expected key=value")
        if key == "report":
            if value != "modsup-synthesis":
                raise FormatError(f"report line {lineno}: not a synthesis "
                                  "report")
        elif key == "mode":
            r.mode = value
        elif key == "synthesis":
            r.synthesis = value
        elif key == "kappa":
            r.kappa = tuple(value.split())
        elif key == "note":
            r.notes.append(value)
        elif key == "artifact":
            role, name, states, trans, events = value.split()
            r.artifacts.append(ArtifactRow(role, name, int(states),
                                           int(trans), int(events)))
        elif key == "check":
            name, _, status = value.partition(" ")
            r.checks.append(CheckRow(name, status))
        elif key == "check-witness":
            name, _, witness = value.partition(" ")
            witnesses[name] = witness
        elif key == "check-note":
            name, _, note = value.partition(" ")
            notes[name] = note
        elif key == "route":
            r.route = None if value == "none" else value
        elif key == "hypothesis":
            hypotheses.append(value)
        elif key == "certified":
            pass  # derived from route
        elif key == "equivalence":
            r.equivalence = value == "true"
        elif key == "equivalence-witness":
            r.equivalence_witness = value
        elif key == "exit":
            r.exit_code = int(value)
        elif key == "timing":
            stage, _, seconds = value.rpartition(" ")
            r.timings.append((stage, float(seconds)))
        else:
            raise FormatError(f"report line {lineno}: unknown key {key!r}")
    r.hypotheses = tuple(hypotheses)
    r.checks = [CheckRow(c.name, c.status, witnesses.get(c.name),
                         notes.get(c.name)) for c in r.checks]
    return r


# -- text form ----------------------------------------------------------------

def render_text(r: SynthesisReport) -> str:
    out: list[str] = ["SYNTHESIS REPORT", ""]
    out.append(f"mode       {r.mode}")
    out.append(f"synthesis  {r.synthesis}")
    if r.kappa is not None:
        out.append(f"kappa      {' '.join(r.kappa)}")
    for note in r.notes:
        out.append(f"note       {note}")
    out.append("")

    out.append("ARTIFACTS")
    name_w = max([len("name")] + [len(a.name) for a in r.artifacts])
    role_w = max([len("role")] + [len(a.role) for a in r.artifacts])
    header = (f"  {'name'.ljust(name_w)}  {'role'.ljust(role_w)}  "
              f"{'States':>7}  {'Trans.':>7}  {'Events':>7}")
    out.append(header)
    for a in r.artifacts:
        out.append(f"  {a.name.ljust(name_w)}  {a.role.ljust(role_w)}  "
                   f"{a.states:>7}  {a.transitions:>7}  {a.events:>7}")
    out.append("")

    if r.checks:
        out.append("CHECKS")
        check_w = max(len(c.name) for c in r.checks)
        for c in r.checks:
            out.append(f"  {c.name.ljust(check_w)}  {c.status}")
            if c.witness is not None:
                out.append(f"    witness: {c.witness}")
            if c.note is not None:
                out.append(f"    note: {c.note}")
        out.append("")

    out.append("CERTIFICATION")
    if r.certified:
        out.append(f"  maximal permissiveness certified via route "
                   f"{r.route}")
        out.append("  discharged hypotheses: " + ", ".join(r.hypotheses))
    else:
        out.append("  not certified: no full hypothesis set of a supported "
                   "route was discharged")
    out.append("")

    if r.equivalence is not None:
        out.append("EQUIVALENCE")
        if r.equivalence:
            out.append("  composed local supervisors language-equal the "
                       "monolithic supervisor")
        else:
            out.append("  composed local supervisors DIFFER from the "
                       "monolithic supervisor")
            if r.equivalence_witness is not None:
                out.append(f"  witness: {r.equivalence_witness}")
        out.append("")

    out.append(f"exit {r.exit_code}")
    if r.timings:
        out.append("")
        out.append("TIMINGS")
        stage_w = max(len(stage) for stage, _ in r.timings)
        for stage, seconds in r.timings:
            out.append(f"  {stage.ljust(stage_w)}  {seconds:9.6f} s")
    return "\n".join(out) + "\n"


def strip_timings(data: bytes) -> bytes:
    """Non-timing bytes of either rendering, for determinism comparisons."""
    text = data.decode("utf-8")
    kept: list[str] = []
    in_timings = False
    for line in text.splitlines():
        if line.startswith("timing=") or line == "TIMINGS":
            in_timings = True
            continue
        if in_timings and line.startswith("  "):
            continue
        in_timings = False
        kept.append(line)
    return ("\n".join(kept) + "\n").encode("utf-8")
