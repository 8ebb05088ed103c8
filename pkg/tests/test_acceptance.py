"""Acceptance gate: nine externally stated criteria, one line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines; every
criterion also asserts, so a silent run fails loudly too. Budgets are wall
clocks on the whole criterion.
"""

import random
import time
from pathlib import Path

import pytest

from modsup.checks import (Module, ModularSystem, check_moc_bounded,
                           is_lcc, is_observer, is_occ)
from modsup.coordination import localize
from modsup.events import ProjectionSpec
from modsup.oracle import (BoundedLanguage, oracle_moc,
                           oracle_nonconflicting, oracle_sup_c,
                           oracle_sup_cn, oracle_sup_n)
from modsup.ops import (enumerate_language, is_nonconflicting,
                        language_equal, language_subset, parallel, project)
from modsup.pipeline import parse_manifest, run_project
from modsup.randgen import (random_alphabets, random_automaton,
                            random_check_instance,
                            random_coordination_instance,
                            random_local_system, random_problem,
                            random_table)
from modsup.report import emit_report, strip_timings
from modsup.synthesis import SynthesisProblem, is_normal, sup_c, sup_cn, sup_n

from bruteforce import bf_lcc, bf_observer, bf_occ
from helpers import MODELS, counterexample_triple


def report_line(number, label, ok, elapsed, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"criterion {number} [{label}]: {status} "
          f"in {elapsed:.2f}s{suffix}")
    assert ok, f"criterion {number} failed: {label} {detail}"


def local_problems(m):
    return [SynthesisProblem(mod.plant, mod.spec) for mod in m.modules]


def global_problem(m):
    comp = m.plant_composition()
    spec = parallel([mod.spec for mod in m.modules], name="K")
    return SynthesisProblem(comp, spec)


def slices(a, bound, marked=True):
    lang = enumerate_language(a, bound)
    return BoundedLanguage(lang.marked if marked else lang.generated,
                           bound, a.alphabet)


def test_criterion_1_counterexample_goldens():
    t0 = time.perf_counter()
    table, plants, specs = counterexample_triple()
    locals_ = [sup_n(SynthesisProblem(p, k)) for p, k in zip(plants, specs)]
    sizes_ok = (locals_[0].n_states == 1
                and not enumerate_language(locals_[0], 6).marked)
    second = enumerate_language(locals_[1], 6).marked == {(), ("u2",)}
    third = enumerate_language(locals_[2], 6).marked == {(), ("u3",)}

    comp = parallel(list(plants), name="plant")
    spec = parallel(list(specs), name="K")
    global_sup = sup_n(SynthesisProblem(comp, spec))
    # the global supervisor keeps every local specification
    keeps = bool(language_equal(global_sup, spec))
    # its first-module view still contains u1, which the collapsed local
    # supervisor lost
    p1 = ProjectionSpec(comp.alphabet, plants[0].alphabet)
    u1_kept = ("u1",) in enumerate_language(project(global_sup, p1), 6).marked

    r = run_project(parse_manifest(MODELS / "triplet" / "local.project"))
    verdict_false = r.equivalence is False and r.exit_code == 2
    elapsed = time.perf_counter() - t0
    report_line(1, "counterexample goldens",
                sizes_ok and second and third and keeps and u1_kept
                and verdict_false and elapsed < 1.0,
                elapsed, f"equivalence={r.equivalence}")


def test_criterion_2_composed_local_normal_supervisors():
    t0 = time.perf_counter()
    failures = []
    for seed in range(200):
        rng = random.Random(31000 + seed)
        m = random_local_system(rng, n_modules=2 + seed % 2, max_states=4,
                                max_events=4, prefix_closed_specs=True)
        locals_ = [sup_n(p) for p in local_problems(m)]
        composed = parallel(locals_, name="S")
        comp = m.plant_composition()
        gp = global_problem(m)
        global_sup = sup_n(gp)
        if not is_nonconflicting(locals_):
            failures.append((seed, "conflicting locals"))
            continue
        normal = bool(is_normal(gp.with_spec(composed)))
        below = language_subset(composed, global_sup).marked
        if not (normal and below):
            failures.append((seed, f"normal={normal} below={below}"))
    elapsed = time.perf_counter() - t0
    report_line(2, "composed local normal supervisors", not failures
                and elapsed < 60.0, elapsed,
                f"200 systems, failures={failures[:3]}")


def test_criterion_3_observable_shared_events_equality():
    t0 = time.perf_counter()
    failures = []
    for seed in range(200):
        rng = random.Random(32000 + seed)
        m = random_local_system(rng, n_modules=2 + seed % 2, max_states=4,
                                max_events=4, shared="observable",
                                prefix_closed_specs=True, repair=True)
        locals_ = [sup_n(p) for p in local_problems(m)]
        composed = parallel(locals_, name="S")
        global_sup = sup_n(global_problem(m))
        if not language_equal(composed, global_sup).marked:
            failures.append(seed)
    elapsed = time.perf_counter() - t0
    report_line(3, "equality under observable shared events", not failures
                and elapsed < 120.0, elapsed,
                f"200 systems, failures={failures[:5]}")


def test_criterion_4_bounded_moc_on_suites():
    t0 = time.perf_counter()
    counterexamples = []
    for seed in range(200):
        rng = random.Random(32000 + seed)  # the criterion-3 suite
        m = random_local_system(rng, n_modules=2 + seed % 2, max_states=4,
                                max_events=4, shared="observable",
                                prefix_closed_specs=True, repair=True)
        comp = m.plant_composition()
        for i in range(m.n):
            v = check_moc_bounded(m, i, bound=6, composition=comp)
            if not v.holds:
                counterexamples.append((seed, i, v.witness))
    coordination = 0
    for seed in range(40):
        rng = random.Random(33000 + seed)
        m, kappa = random_coordination_instance(rng)
        if not kappa <= m.table.observable:
            continue
        plan = localize(m, kappa)
        localized = ModularSystem(
            [Module(p, s) for p, s in zip(plan.localized_plants,
                                          plan.localized_specs)])
        comp = localized.plant_composition()
        coordination += 1
        for i in range(localized.n):
            v = check_moc_bounded(localized, i, bound=6, composition=comp)
            if not v.holds:
                counterexamples.append((seed, f"coord[{i}]", v.witness))
    elapsed = time.perf_counter() - t0
    report_line(4, "bounded moc across suites", not counterexamples,
                elapsed,
                f"suite of 200 + {coordination} coordination instances, "
                f"counterexamples={counterexamples[:3]}")


def test_criterion_5_oracle_agreement():
    t0 = time.perf_counter()
    bound = 5
    disagreements = []

    for seed in range(150):
        rng = random.Random(34000 + seed)
        p = random_problem(rng, max_states=4, max_events=4, acyclic=True)
        spec_slice = slices(p.spec, bound)
        plant_slice = slices(p.plant, bound, marked=False)
        observable = p.observation.target
        uncontrollable = p.uncontrollable
        pairs = [
            ("supn", sup_n(p),
             oracle_sup_n(spec_slice, plant_slice, observable)),
            ("supc", sup_c(p),
             oracle_sup_c(spec_slice, plant_slice, uncontrollable)),
            ("supcn", sup_cn(p),
             oracle_sup_cn(spec_slice, plant_slice, uncontrollable,
                           observable)),
        ]
        for kind, automaton, oracle in pairs:
            if not oracle.exact:
                disagreements.append((seed, kind, "oracle not exact"))
                continue
            got = enumerate_language(automaton, bound).marked
            if got != oracle.language.strings:
                disagreements.append((seed, kind, "language mismatch"))

    for seed in range(75):
        rng = random.Random(35000 + seed)
        alphabets = random_alphabets(rng, 2, max_events=3)
        union = frozenset().union(*alphabets)
        table = random_table(rng, union)
        parts = [random_automaton(rng, f"G{i}", table, alpha, max_states=3,
                                  all_marked=False)
                 for i, alpha in enumerate(alphabets)]
        got = is_nonconflicting(parts)
        want, exact = oracle_nonconflicting(
            [slices(a, bound) for a in parts], bound)
        if not exact:
            disagreements.append((seed, "nonconflicting", "not exact"))
        elif got != want:
            disagreements.append((seed, "nonconflicting", f"{got}!={want}"))

    for seed in range(75):
        rng = random.Random(36000 + seed)
        m = random_local_system(rng, n_modules=2, max_states=3,
                                max_events=4)
        comp = m.plant_composition()
        modules = [slices(mod.plant, bound, marked=False)
                   for mod in m.modules]
        observable = m.table.observable
        want, _ = oracle_moc(modules, observable, bound)
        agree = True
        for i in range(m.n):
            v = check_moc_bounded(m, i, bound=bound, composition=comp)
            if v.bound != bound:
                disagreements.append((seed, f"moc[{i}]", "bound reduced"))
                agree = False
                break
            if not v.holds:
                agree = False
                break
        if agree != want:
            disagreements.append((seed, "moc", f"{agree}!={want}"))
    elapsed = time.perf_counter() - t0
    report_line(5, "string-oracle agreement", not disagreements, elapsed,
                f"300 instances, disagreements={disagreements[:3]}")


def test_criterion_6_controllable_observable_shared_events():
    t0 = time.perf_counter()
    failures = []
    for seed in range(100):
        rng = random.Random(37000 + seed)
        m = random_local_system(rng, n_modules=2 + seed % 2, max_states=4,
                                max_events=4,
                                shared="controllable-observable",
                                prefix_closed_specs=True, repair=True)
        locals_ = [sup_cn(p) for p in local_problems(m)]
        composed = parallel(locals_, name="S")
        global_sup = sup_cn(global_problem(m))
        if not language_equal(composed, global_sup).marked:
            failures.append(seed)
    elapsed = time.perf_counter() - t0
    report_line(6, "supcn equality under controllable-observable sharing",
                not failures, elapsed,
                f"100 systems, failures={failures[:5]}")


def test_criterion_7_structural_checks_vs_bruteforce():
    t0 = time.perf_counter()
    disagreements = []
    for seed in range(200):
        rng = random.Random(38000 + seed)
        g, r = random_check_instance(rng)
        lang = enumerate_language(g, 6)
        unc = g.table.uncontrollable
        checks = [
            ("observer", bool(is_observer(g, r).holds),
             bf_observer(lang.marked, lang.generated, r.target)),
            ("occ", bool(is_occ(g, r).holds),
             bf_occ(lang.generated, r.target, unc)),
            ("lcc", bool(is_lcc(g, r).holds),
             bf_lcc(lang.generated, r.target, unc)),
        ]
        for name, got, want in checks:
            if got != want:
                disagreements.append((seed, name, got, want))
    elapsed = time.perf_counter() - t0
    report_line(7, "structural checks vs definitions", not disagreements,
                elapsed,
                f"200 instances x 3 checks, disagreements={disagreements[:3]}")


def test_criterion_8_crossing_certification():
    t0 = time.perf_counter()
    local = run_project(parse_manifest(MODELS / "railroad" / "local.project"))
    global_ = run_project(
        parse_manifest(MODELS / "railroad" / "global.project"))

    from modsup.fileformat import load_automata
    _, autos = load_automata([
        MODELS / "railroad" / "G1.aut", MODELS / "railroad" / "K1.aut",
        MODELS / "railroad" / "G2.aut", MODELS / "railroad" / "K2.aut",
    ])
    g1, k1, g2, k2 = autos
    s1 = sup_n(SynthesisProblem(g1, k1))
    s2 = sup_n(SynthesisProblem(g2, k2))
    locals_equal_specs = bool(language_equal(s1, k1)) and \
        bool(language_equal(s2, k2))

    ok = (locals_equal_specs
          and local.exit_code == 0 and local.equivalence is True
          and global_.exit_code == 0 and global_.equivalence is True
          and global_.route == "coordinator-events-observable"
          and global_.kappa == ("w_e", "w_w"))
    elapsed = time.perf_counter() - t0
    report_line(8, "crossing reconstruction", ok and elapsed < 5.0, elapsed,
                f"local route={local.route}, global route={global_.route}")


def test_criterion_9_report_layout_determinism():
    t0 = time.perf_counter()
    r1 = run_project(parse_manifest(MODELS / "triplet" / "local.project"))
    r2 = run_project(parse_manifest(MODELS / "triplet" / "local.project"))
    b1 = strip_timings(emit_report(r1, "text"))
    b2 = strip_timings(emit_report(r2, "text"))
    deterministic = b1 == b2
    text = b1.decode("utf-8")
    # size table: name, role, then the three size columns
    header_ok = False
    for line in text.splitlines():
        if line.strip().startswith("name"):
            header_ok = line.split() == ["name", "role", "States", "Trans.",
                                         "Events"]
            break
    machine_same = strip_timings(emit_report(r1, "machine")) == \
        strip_timings(emit_report(r2, "machine"))
    elapsed = time.perf_counter() - t0
    report_line(9, "report layout and determinism",
                deterministic and header_ok and machine_same, elapsed,
                "external result tables substituted by criteria 2-7")
