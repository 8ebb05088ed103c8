"""Project-driven synthesis runs.

A project manifest names the plant and spec files, the synthesis kind, and
the run options. The pipeline loads everything against one event table,
discharges the hypotheses of the certification routes in cheap-first
order, synthesizes the local supervisors, and assembles a report. Routes
certify maximal permissiveness only when every required verdict holds
exactly; the bounded observation-consistency check and the per-module
observer / control-consistency conditions are reported as evidence when
the route conditions fail, never as a certificate.

Exit codes for synthesis runs: 0 certified, 1 uncertified, 2 equivalence
failure under verify-monolithic, 3 input error (raised as exceptions and
mapped by the command line front end).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path
from time import perf_counter

from . import ops
from .automaton import Automaton
from .checks import (ModularSystem, Module, check_moc_bounded,
                     check_natural_projection_consistency,
                     check_observability_agreement,
                     check_shared_controllable,
                     check_shared_controllable_observable,
                     check_shared_observable, is_lcc, is_observer, is_occ,
                     nonconflicting_verdict, shared_alphabet)
from .coordination import extend_kappa, localize, save_plan
from .errors import InvalidProblemError, ManifestError
from .events import ProjectionSpec, render_word
from .fileformat import load_automata, save_automaton
from .report import ArtifactRow, SynthesisReport, emit_report
from .synthesis import SynthesisProblem, _all_marked, sup_c, sup_cn, sup_n
from .verdict import CheckVerdict

SYNTHESIS_KINDS = ("normal", "controllable", "controllable-normal")
MODES = ("local-specs", "global-spec")

_SYNTH_FUN = {"normal": sup_n, "controllable": sup_c,
              "controllable-normal": sup_cn}

# Certification heads per synthesis kind. In local-specs mode the head is
# a condition on the shared events, in global-spec mode on kappa; the full
# route additionally requires projection consistency (or the localization
# certificates) and nonconflictingness of the local results.
_LOCAL_HEADS = {
    "normal": ("disjoint-alphabets", "shared-events-observable"),
    "controllable": ("disjoint-alphabets", "shared-events-controllable"),
    "controllable-normal": ("disjoint-alphabets",
                            "shared-events-controllable-observable"),
}
_GLOBAL_HEADS = {
    "normal": ("coordinator-events-observable",),
    "controllable": ("coordinator-events-controllable",),
    "controllable-normal": ("coordinator-events-controllable-observable",),
}


@dataclass(frozen=True)
class ProjectManifest:
    """Parsed project file; flat key=value lines, repeated keys for lists."""

    mode: str
    plants: tuple[Path, ...]
    specs: tuple[Path, ...]
    synthesis: str = "normal"
    kappa: frozenset[str] | None = None
    moc_bound: int | None = None
    verify_monolithic: bool = False
    repair_locals: bool = False
    intersect_spec: bool = False
    minimize: bool = False
    use_occ: bool = False
    source: str = "<manifest>"


_LIST_KEYS = ("plant", "spec", "kappa")
_BOOL_KEYS = {"verify-monolithic": "verify_monolithic",
              "repair-locals": "repair_locals",
              "intersect-spec": "intersect_spec",
              "minimize": "minimize",
              "occ": "use_occ"}


def manifest_from_text(text: str, base: str | os.PathLike = ".",
                       source: str = "<manifest>") -> ProjectManifest:
    base = Path(base)
    lists: dict[str, list[str]] = {k: [] for k in _LIST_KEYS}
    scalars: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ManifestError(f"{source}:{lineno}: expected key=value")
        if not value:
            raise ManifestError(f"{source}:{lineno}: empty value for "
                                f"{key!r}")
        if key in _LIST_KEYS:
            lists[key].append(value)
        elif key in ("mode", "synthesis", "moc-bound") or key in _BOOL_KEYS:
            if key in scalars:
                raise ManifestError(f"{source}:{lineno}: duplicate key "
                                    f"{key!r}")
            scalars[key] = value
        else:
            raise ManifestError(f"{source}:{lineno}: unknown manifest key "
                                f"{key!r}")

    mode = scalars.get("mode")
    if mode not in MODES:
        raise ManifestError(f"{source}: mode must be one of {MODES}, got "
                            f"{mode!r}")
    if not lists["plant"]:
        raise ManifestError(f"{source}: at least one plant= line is needed")
    synthesis = scalars.get("synthesis", "normal")
    if synthesis not in SYNTHESIS_KINDS:
        raise ManifestError(f"{source}: synthesis must be one of "
                            f"{SYNTHESIS_KINDS}, got {synthesis!r}")
    n_plants, n_specs = len(lists["plant"]), len(lists["spec"])
    if mode == "local-specs":
        if n_specs != n_plants:
            raise ManifestError(f"{source}: local-specs mode pairs specs "
                                f"with plants by position; got {n_plants} "
                                f"plants and {n_specs} specs")
        if lists["kappa"]:
            raise ManifestError(f"{source}: kappa applies to global-spec "
                                "mode only")
    else:
        if n_specs != 1:
            raise ManifestError(f"{source}: global-spec mode needs exactly "
                                f"one spec= line, got {n_specs}")
    bools = {}
    for key, attr in _BOOL_KEYS.items():
        value = scalars.get(key, "false")
        if value not in ("true", "false"):
            raise ManifestError(f"{source}: {key} must be true or false, "
                                f"got {value!r}")
        bools[attr] = value == "true"
    if mode == "global-spec" and bools["repair_locals"]:
        raise ManifestError(f"{source}: repair-locals applies to "
                            "local-specs mode only")
    moc_bound = None
    if "moc-bound" in scalars:
        try:
            moc_bound = int(scalars["moc-bound"])
        except ValueError:
            raise ManifestError(f"{source}: moc-bound must be an integer") \
                from None
        if moc_bound < 0:
            raise ManifestError(f"{source}: moc-bound must be nonnegative")
    kappa = None
    if lists["kappa"]:
        kappa = frozenset(e for chunk in lists["kappa"] for e in chunk.split())
    return ProjectManifest(
        mode=mode,
        plants=tuple(base / p for p in lists["plant"]),
        specs=tuple(base / s for s in lists["spec"]),
        synthesis=synthesis,
        kappa=kappa,
        moc_bound=moc_bound,
        source=source,
        **bools)


def parse_manifest(path: str | os.PathLike) -> ProjectManifest:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return manifest_from_text(text, base=path.parent, source=str(path))


# -- loading ------------------------------------------------------------------

def load_system(manifest: ProjectManifest) -> tuple[ModularSystem, list[str]]:
    """Build the modular system, applying the manifest's repairs."""
    paths = list(manifest.plants) + list(manifest.specs)
    _, autos = load_automata(paths)
    n = len(manifest.plants)
    plants, specs = autos[:n], autos[n:]
    notes: list[str] = []
    if manifest.mode == "local-specs":
        if manifest.repair_locals:
            comp = ops.parallel(plants, name="plant")
            plants = [ops.project(
                comp, ProjectionSpec(comp.alphabet, p.alphabet)
            ).renamed(p.name) for p in plants]
            notes.append("plants repaired to the projections of the "
                         "composed plant")
        if manifest.intersect_spec:
            specs = [ops.product(k, _all_marked(p), name=k.name)
                     for p, k in zip(plants, specs)]
            notes.append("specs intersected with their plant languages")
        system = ModularSystem([Module(p, k)
                                for p, k in zip(plants, specs)])
    else:
        system = ModularSystem([Module(p) for p in plants],
                               global_spec=specs[0], kappa=manifest.kappa)
        comp = system.plant_composition()
        if manifest.intersect_spec:
            spec = ops.product(specs[0], _all_marked(comp),
                               name=specs[0].name)
            system = ModularSystem([Module(p) for p in plants],
                                   global_spec=spec, kappa=manifest.kappa)
            notes.append("spec intersected with the composed plant language")
        else:
            excess = ops.marked_in_generated(specs[0], comp)
            if excess is not None:
                raise InvalidProblemError(
                    f"global spec {specs[0].name!r} marks "
                    f"'{render_word(excess)}' outside the composed plant; "
                    "set intersect-spec=true to repair")
    return system, notes


# -- shared machinery ---------------------------------------------------------

def _subset_check(name: str, events: frozenset[str],
                  allowed: frozenset[str]) -> CheckVerdict:
    t0 = perf_counter()
    stray = sorted(events - allowed)
    seconds = perf_counter() - t0
    if not stray:
        return CheckVerdict(name, True, seconds=seconds)
    return CheckVerdict(name, False,
                        witness=tuple((e,) for e in stray),
                        seconds=seconds)


def _synthesize(system: ModularSystem, kind: str,
                timings: list[tuple[str, float]]) -> list[Automaton]:
    fun = _SYNTH_FUN[kind]
    out = []
    for i, mod in enumerate(system.modules):
        t0 = perf_counter()
        s = fun(SynthesisProblem(mod.plant, mod.spec))
        timings.append((f"synthesis[{i}]", perf_counter() - t0))
        out.append(s.renamed(f"S{i + 1}"))
    return out


def _decide_route(candidates: list[tuple[str, list[CheckVerdict]]]):
    """First candidate whose every verdict holds exactly wins."""
    for name, required in candidates:
        if all(v.holds is True for v in required):
            return name, tuple(v.name for v in required)
    return None, ()


def _evidence(system: ModularSystem, kind: str, comp: Automaton,
              projections: list[ProjectionSpec], moc_bound: int | None,
              use_occ: bool) -> list[CheckVerdict]:
    """Per-module structural conditions, reported but never certifying."""
    out: list[CheckVerdict] = []
    if kind in ("controllable", "controllable-normal"):
        for i, p in enumerate(projections):
            out.append(replace(is_observer(comp, p), name=f"observer[{i}]"))
            cc = is_occ(comp, p) if use_occ else is_lcc(comp, p)
            out.append(replace(cc, name=f"{cc.name}[{i}]"))
    if kind in ("normal", "controllable-normal"):
        for i in range(system.n):
            out.append(check_moc_bounded(system, i, bound=moc_bound,
                                         composition=comp))
    return out


def verify_equivalence(locals_: list[Automaton],
                       monolithic: Automaton) -> CheckVerdict:
    """Language equality of the composed local supervisors against the
    monolithic one, with a shortest witness for either failing side."""
    t0 = perf_counter()
    joint = ops.parallel(list(locals_), name="local-composition")
    eq = ops.language_equal(joint, monolithic)
    seconds = perf_counter() - t0
    if eq:
        return CheckVerdict("equivalence", True, seconds=seconds)
    if not eq.marked:
        word, side = eq.marked_witness, eq.marked_side
        kind = "marked"
    else:
        word, side = eq.generated_witness, eq.generated_side
        kind = "generated"
    where = ("composed local supervisors" if side == "left"
             else "monolithic supervisor")
    return CheckVerdict("equivalence", False, witness=(word,),
                        note=f"{kind} only in the {where}",
                        seconds=seconds)


def _apply_minimize(automata: list[Automaton], enabled: bool) -> list[Automaton]:
    return [ops.minimize(a) if enabled else a for a in automata]


# -- the two modes ------------------------------------------------------------

def run_local_mode(manifest: ProjectManifest) -> SynthesisReport:
    system, notes = load_system(manifest)
    return _run_local(manifest, system, notes, [])[0]


def run_global_mode(manifest: ProjectManifest) -> SynthesisReport:
    system, notes = load_system(manifest)
    return _run_global(manifest, system, notes, [])[0]


def _run_local(manifest: ProjectManifest, system: ModularSystem,
               notes: list[str], timings: list[tuple[str, float]]):
    kind = manifest.synthesis
    report = SynthesisReport(mode=manifest.mode, synthesis=kind,
                             notes=list(notes))

    t0 = perf_counter()
    report.add_check(check_observability_agreement(system))
    heads: dict[str, CheckVerdict] = {}
    for head in _LOCAL_HEADS[kind]:
        v = _head_verdict(head, system)
        heads[head] = v
        report.add_check(v)
    comp = system.plant_composition()
    consistency = [check_natural_projection_consistency(system, i, comp)
                   for i in range(system.n)]
    for v in consistency:
        report.add_check(v)
    timings.append(("audits", perf_counter() - t0))

    supervisors = _synthesize(system, kind, timings)

    t0 = perf_counter()
    nonconf = nonconflicting_verdict(supervisors)
    report.add_check(nonconf)
    timings.append(("nonconflicting", perf_counter() - t0))

    candidates = [(head, [heads[head]] + consistency + [nonconf])
                  for head in _LOCAL_HEADS[kind]]
    report.route, report.hypotheses = _decide_route(candidates)

    if not report.certified:
        t0 = perf_counter()
        projections = [system.projection_to_module(i)
                       for i in range(system.n)]
        for v in _evidence(system, kind, comp, projections,
                           manifest.moc_bound, manifest.use_occ):
            report.add_check(v)
        timings.append(("evidence", perf_counter() - t0))

    spec = ops.parallel([m.spec for m in system.modules], name="K")
    files = _finish(manifest, report, system, comp, spec, supervisors,
                    timings)
    return report, files, None


def _run_global(manifest: ProjectManifest, system: ModularSystem,
                notes: list[str], timings: list[tuple[str, float]]):
    kind = manifest.synthesis
    report = SynthesisReport(mode=manifest.mode, synthesis=kind,
                             notes=list(notes))

    t0 = perf_counter()
    report.add_check(check_observability_agreement(system))
    shared = shared_alphabet(system)
    if manifest.kappa is not None:
        kappa = manifest.kappa
        if not shared <= kappa:
            raise InvalidProblemError(
                f"pinned kappa misses shared events "
                f"{sorted(shared - kappa)}")
    else:
        kappa = extend_kappa(system.global_spec, system.alphabets(), shared)
        report.notes.append("kappa extended greedily from the shared "
                            "alphabet")
    report.kappa = tuple(sorted(kappa))
    timings.append(("kappa", perf_counter() - t0))

    t0 = perf_counter()
    plan = localize(system, kappa)  # raises when decomposability fails
    for v in plan.certificates:
        report.add_check(v)
    timings.append(("localize", perf_counter() - t0))

    heads = {}
    for head in _GLOBAL_HEADS[kind]:
        v = _head_verdict(head, system, kappa)
        heads[head] = v
        report.add_check(v)

    localized = ModularSystem(
        [Module(p, k) for p, k in zip(plan.localized_plants,
                                      plan.localized_specs)])
    supervisors = _synthesize(localized, kind, timings)

    t0 = perf_counter()
    nonconf = nonconflicting_verdict(supervisors)
    report.add_check(nonconf)
    timings.append(("nonconflicting", perf_counter() - t0))

    candidates = [(head, [heads[head]] + list(plan.certificates) + [nonconf])
                  for head in _GLOBAL_HEADS[kind]]
    report.route, report.hypotheses = _decide_route(candidates)

    comp = system.plant_composition()
    if not report.certified:
        t0 = perf_counter()
        projections = [ProjectionSpec(system.alphabet, sigma)
                       for sigma in plan.local_alphabets]
        for v in _evidence(localized, kind, comp, projections,
                           manifest.moc_bound, manifest.use_occ):
            report.add_check(v)
        timings.append(("evidence", perf_counter() - t0))

    files = _finish(manifest, report, localized, comp, system.global_spec,
                    supervisors, timings, plan=plan)
    return report, files, plan


def _head_verdict(head: str, system: ModularSystem,
                  kappa: frozenset[str] | None = None) -> CheckVerdict:
    table = system.table
    if head == "disjoint-alphabets":
        return _subset_check(head, shared_alphabet(system), frozenset())
    if head == "shared-events-observable":
        return check_shared_observable(system)
    if head == "shared-events-controllable":
        return check_shared_controllable(system)
    if head == "shared-events-controllable-observable":
        return check_shared_controllable_observable(system)
    if head == "coordinator-events-observable":
        return _subset_check(head, kappa, table.observable)
    if head == "coordinator-events-controllable":
        return _subset_check(head, kappa, table.controllable)
    if head == "coordinator-events-controllable-observable":
        return _subset_check(head, kappa,
                             table.controllable & table.observable)
    raise ValueError(f"unknown route head {head!r}")


def _finish(manifest: ProjectManifest, report: SynthesisReport,
            system: ModularSystem, comp: Automaton, spec: Automaton,
            supervisors: list[Automaton], timings: list[tuple[str, float]],
            plan=None):
    """Equivalence verification, artifact rows, and the output file list."""
    monolithic = None
    if manifest.verify_monolithic:
        t0 = perf_counter()
        fun = _SYNTH_FUN[manifest.synthesis]
        monolithic = fun(SynthesisProblem(comp, spec)).renamed("S")
        timings.append(("monolithic", perf_counter() - t0))
        t0 = perf_counter()
        eq = verify_equivalence(supervisors, monolithic)
        report.add_check(eq)
        report.equivalence = eq.holds
        if eq.witness is not None:
            report.equivalence_witness = (
                f"{render_word(eq.witness[0])} ({eq.note})")
        timings.append(("equivalence", perf_counter() - t0))

    supervisors = _apply_minimize(supervisors, manifest.minimize)
    if monolithic is not None and manifest.minimize:
        monolithic = ops.minimize(monolithic)
    if manifest.minimize:
        report.notes.append("output sizes measured on minimized automata")

    for mod in system.modules:
        report.artifacts.append(ArtifactRow.of("plant", mod.plant))
    if plan is None:
        for mod in system.modules:
            report.artifacts.append(ArtifactRow.of("spec", mod.spec))
    else:
        report.artifacts.append(ArtifactRow.of("spec", spec))
        report.artifacts.append(ArtifactRow.of("coordinator",
                                               plan.coordinator))
    for s in supervisors:
        report.artifacts.append(ArtifactRow.of("supervisor", s))
    if monolithic is not None:
        report.artifacts.append(ArtifactRow.of("monolithic", monolithic))

    if report.equivalence is False:
        report.exit_code = 2
    elif not report.certified:
        report.exit_code = 1
    report.timings = timings

    files: list[tuple[str, Automaton]] = []
    for i, s in enumerate(supervisors):
        files.append((f"S{i + 1}.aut", s))
    if monolithic is not None:
        files.append(("monolithic.aut", monolithic))
    return files


def run_project(manifest: ProjectManifest,
                out_dir: str | os.PathLike | None = None) -> SynthesisReport:
    """Full run: load, synthesize, verify, and write artifacts."""
    timings: list[tuple[str, float]] = []
    t0 = perf_counter()
    system, notes = load_system(manifest)
    timings.append(("load", perf_counter() - t0))
    if manifest.mode == "local-specs":
        report, files, plan = _run_local(manifest, system, notes, timings)
    else:
        report, files, plan = _run_global(manifest, system, notes, timings)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for fname, automaton in files:
            save_automaton(automaton, out / fname)
        if plan is not None:
            save_plan(plan, out)
        with open(out / "report.kv", "wb") as fh:
            fh.write(emit_report(report, "machine"))
        with open(out / "report.txt", "wb") as fh:
            fh.write(emit_report(report, "text"))
    return report
