"""Command line front end.

Verbs: ``synth`` runs a project manifest end to end, ``check`` runs one
structural condition on automaton files, ``oracle`` compares a synthesis
or check against its string-level oracle, and ``report`` re-renders a run
directory's machine report as text.

Exit codes: synth uses 0 certified / 1 uncertified / 2 equivalence failure
/ 3 input error; check and oracle use 0 holds-or-agrees / 1 fails-or-
disagrees / 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import ops, pipeline
from .checks import (Module, ModularSystem, check_moc_bounded,
                     check_shared_controllable,
                     check_shared_controllable_observable,
                     check_shared_observable, is_lcc, is_observer, is_occ,
                     shared_alphabet)
from .coordination import is_conditionally_decomposable
from .errors import ManifestError, ModsupError
from .events import ProjectionSpec, render_word
from .fileformat import load_automata
from .oracle import (BoundedLanguage, oracle_moc, oracle_sup_c,
                     oracle_sup_cn, oracle_sup_n)
from .report import emit_report, parse_machine
from .synthesis import SynthesisProblem, sup_c, sup_cn, sup_n
from .verdict import CheckVerdict


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModsupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modsup",
        description="Modular supervisor synthesis under partial observation")
    sub = parser.add_subparsers(dest="verb", required=True)

    synth = sub.add_parser("synth", help="run a project manifest")
    synth.add_argument("--project", required=True, help="manifest file")
    synth.add_argument("--out", help="run directory "
                                     "(default: <manifest>-run)")
    synth.add_argument("--minimize", action="store_true",
                       help="minimize emitted automata")
    synth.add_argument("--verify-monolithic", action="store_true",
                       help="also compute the monolithic supervisor and "
                            "compare")
    synth.add_argument("--occ", action="store_true",
                       help="use output control consistency instead of LCC "
                            "in evidence checks")
    synth.add_argument("--repair-locals", action="store_true",
                       help="replace each local plant with the projection "
                            "of the composed plant (local-specs mode)")
    synth.add_argument("--kappa", nargs="+", metavar="EVENT",
                       help="pin the coordinator alphabet (global-spec "
                            "mode)")
    synth.add_argument("--moc-bound", type=int,
                       help="string length bound for the observation "
                            "consistency check")
    synth.set_defaults(func=_cmd_synth)

    check = sub.add_parser("check", help="run one structural check")
    kinds = check.add_subparsers(dest="kind", required=True)

    shared = kinds.add_parser("shared", help="shared-event attribute audit")
    shared.add_argument("plants", nargs="+")
    shared.set_defaults(func=_cmd_check_shared)

    moc = kinds.add_parser("moc", help="bounded observation consistency")
    moc.add_argument("plants", nargs="+")
    moc.add_argument("--bound", type=int)
    moc.set_defaults(func=_cmd_check_moc)

    for kind, helptext in (("observer", "marked-language observer property"),
                           ("occ", "output control consistency"),
                           ("lcc", "local control consistency")):
        p = kinds.add_parser(kind, help=helptext)
        p.add_argument("automaton")
        p.add_argument("--target", nargs="+", required=True, metavar="EVENT",
                       help="target alphabet of the projection")
        p.set_defaults(func=_cmd_check_projection, kind_name=kind)

    condec = kinds.add_parser("condec", help="conditional decomposability")
    condec.add_argument("spec")
    condec.add_argument("plants", nargs="+")
    condec.add_argument("--kappa", nargs="*", metavar="EVENT",
                        help="coordinator alphabet (default: the shared "
                             "events)")
    condec.set_defaults(func=_cmd_check_condec)

    orc = sub.add_parser("oracle",
                         help="compare against the string-level oracle")
    okinds = orc.add_subparsers(dest="kind", required=True)
    for kind in ("supn", "supc", "supcn"):
        p = okinds.add_parser(kind)
        p.add_argument("plant")
        p.add_argument("spec")
        p.add_argument("--bound", type=int, default=5)
        p.set_defaults(func=_cmd_oracle_synth, kind_name=kind)
    omoc = okinds.add_parser("moc")
    omoc.add_argument("plants", nargs="+")
    omoc.add_argument("--bound", type=int, default=5)
    omoc.set_defaults(func=_cmd_oracle_moc)

    rep = sub.add_parser("report", help="re-render a run directory report")
    rep.add_argument("run_dir")
    rep.set_defaults(func=_cmd_report)
    return parser


# -- synth --------------------------------------------------------------------

def _cmd_synth(args) -> int:
    manifest = pipeline.parse_manifest(args.project)
    overrides = {}
    if args.minimize:
        overrides["minimize"] = True
    if args.verify_monolithic:
        overrides["verify_monolithic"] = True
    if args.occ:
        overrides["use_occ"] = True
    if args.repair_locals:
        if manifest.mode != "local-specs":
            raise ManifestError("--repair-locals applies to local-specs "
                                "mode only")
        overrides["repair_locals"] = True
    if args.moc_bound is not None:
        overrides["moc_bound"] = args.moc_bound
    if args.kappa is not None:
        if manifest.mode != "global-spec":
            raise ManifestError("--kappa applies to global-spec mode only")
        overrides["kappa"] = frozenset(args.kappa)
    if overrides:
        manifest = replace(manifest, **overrides)
    out = args.out
    if out is None:
        project = Path(args.project)
        out = project.parent / (project.stem + "-run")
    report = pipeline.run_project(manifest, out)
    sys.stdout.write(emit_report(report, "text").decode("utf-8"))
    print(f"artifacts written to {out}")
    return report.exit_code


# -- checks -------------------------------------------------------------------

def _print_verdict(v: CheckVerdict) -> None:
    print(v.describe())


def _verdict_exit(verdicts) -> int:
    return 0 if all(v.holds is True for v in verdicts) else 1


def _cmd_check_shared(args) -> int:
    _, plants = load_automata(args.plants)
    system = ModularSystem([Module(p) for p in plants])
    shared = shared_alphabet(system)
    print("shared events:", " ".join(sorted(shared)) if shared else "(none)")
    observable = check_shared_observable(system)
    _print_verdict(observable)
    _print_verdict(check_shared_controllable(system))
    _print_verdict(check_shared_controllable_observable(system))
    return _verdict_exit([observable])


def _cmd_check_moc(args) -> int:
    _, plants = load_automata(args.plants)
    system = ModularSystem([Module(p) for p in plants])
    verdicts = [check_moc_bounded(system, i, bound=args.bound)
                for i in range(system.n)]
    for v in verdicts:
        _print_verdict(v)
    return _verdict_exit(verdicts)


def _cmd_check_projection(args) -> int:
    _, (g,) = load_automata([args.automaton])
    r = ProjectionSpec(g.alphabet, frozenset(args.target))
    fun = {"observer": is_observer, "occ": is_occ, "lcc": is_lcc}
    v = fun[args.kind_name](g, r)
    _print_verdict(v)
    return _verdict_exit([v])


def _cmd_check_condec(args) -> int:
    _, autos = load_automata([args.spec] + args.plants)
    spec, plants = autos[0], autos[1:]
    alphabets = [p.alphabet for p in plants]
    if args.kappa is not None:
        kappa = frozenset(args.kappa)
    else:
        kappa = frozenset()
        for i in range(len(alphabets)):
            for j in range(i + 1, len(alphabets)):
                kappa |= alphabets[i] & alphabets[j]
    v = is_conditionally_decomposable(spec, alphabets, kappa)
    print("kappa:", " ".join(sorted(kappa)) if kappa else "(empty)")
    _print_verdict(v)
    return _verdict_exit([v])


# -- oracles ------------------------------------------------------------------

def _print_language(label: str, strings) -> None:
    print(f"# {label} ({len(strings)} strings)")
    for w in sorted(strings, key=lambda w: (len(w), w)):
        print(render_word(w))


def _cmd_oracle_synth(args) -> int:
    table, (plant, spec) = load_automata([args.plant, args.spec])
    bound = args.bound
    plant_bl = BoundedLanguage(
        ops.enumerate_language(plant, bound).generated, bound,
        plant.alphabet)
    spec_bl = BoundedLanguage(
        ops.enumerate_language(spec, bound).marked, bound, spec.alphabet)
    observable = table.observable_in(plant.alphabet)
    uncontrollable = table.uncontrollable_in(plant.alphabet)
    problem = SynthesisProblem(plant, spec)
    if args.kind_name == "supn":
        result = oracle_sup_n(spec_bl, plant_bl, observable)
        synthesized = sup_n(problem)
    elif args.kind_name == "supc":
        result = oracle_sup_c(spec_bl, plant_bl, uncontrollable)
        synthesized = sup_c(problem)
    else:
        result = oracle_sup_cn(spec_bl, plant_bl, uncontrollable, observable)
        synthesized = sup_cn(problem)
    mine = ops.enumerate_language(synthesized, bound).marked
    _print_language(f"oracle {args.kind_name}, bound {bound}, "
                    f"{'exact' if result.exact else 'truncated'}",
                    result.language.strings)
    _print_language("synthesis", mine)
    agree = result.language.strings == mine
    print(f"# agreement: {'yes' if agree else 'NO'}")
    return 0 if agree else 1


def _cmd_oracle_moc(args) -> int:
    table, plants = load_automata(args.plants)
    bound = args.bound
    system = ModularSystem([Module(p) for p in plants])
    modules = [BoundedLanguage(
        ops.enumerate_language(p, bound).generated, bound, p.alphabet)
        for p in plants]
    verdict, witness = oracle_moc(modules, table.observable, bound)
    print(f"# oracle moc, bound {bound}: {'holds' if verdict else 'fails'}")
    if witness is not None:
        s, t = witness
        print(f"witness: s = {render_word(s)}, local t = {render_word(t)}")
    checks = [check_moc_bounded(system, i, bound=bound)
              for i in range(system.n)]
    mine = all(v.holds is True for v in checks)
    print(f"# bounded check: {'holds' if mine else 'fails'}")
    for v in checks:
        _print_verdict(v)
    agree = verdict == mine
    print(f"# agreement: {'yes' if agree else 'NO'}")
    return 0 if agree else 1


# -- report -------------------------------------------------------------------

def _cmd_report(args) -> int:
    path = Path(args.run_dir) / "report.kv"
    with open(path, "r", encoding="utf-8") as fh:
        report = parse_machine(fh.read())
    sys.stdout.write(emit_report(report, "text").decode("utf-8"))
    return 0

if __name__ == "__main__":
    sys.exit(main())
