"""Modular supervisor synthesis for discrete-event systems under partial
observation: local supremal normal / controllable / controllable-and-normal
supervisors, the structural conditions under which their composition equals
the monolithic supervisor, and a project pipeline that certifies or refutes
that equality."""

from .automaton import Automaton
from .checks import (ModularSystem, Module, check_moc_bounded,
                     check_natural_projection_consistency,
                     check_observability_agreement,
                     check_shared_controllable,
                     check_shared_controllable_observable,
                     check_shared_observable, is_lcc, is_observer, is_occ,
                     nonconflicting_verdict, shared_alphabet)
from .coordination import (CoordinationPlan, build_coordinator, extend_kappa,
                           is_conditionally_decomposable, localize, save_plan)
from .errors import (AlphabetMismatchError, EventConflictError, FormatError,
                     InvalidProblemError, ManifestError, ModsupError)
from .events import (EventTable, ProjectionSpec, Word, observation_projection,
                     render_word)
from .fileformat import (dump_automaton, load_automata, load_automaton,
                         parse_automaton_text, save_automaton)
from .ops import (enumerate_language, inverse_project, is_nonblocking,
                  is_nonconflicting, language_equal, language_subset,
                  minimize, parallel, prefix_closure, product, project, trim)
from .pipeline import (ProjectManifest, parse_manifest, run_global_mode,
                       run_local_mode, run_project, verify_equivalence)
from .report import SynthesisReport, emit_report
from .synthesis import (SynthesisProblem, closed_loop, is_controllable,
                        is_normal, sup_c, sup_cn, sup_n)
from .verdict import CheckVerdict

__version__ = "0.1.0"

__all__ = [
    "AlphabetMismatchError", "Automaton", "CheckVerdict", "CoordinationPlan",
    "EventConflictError", "EventTable", "FormatError", "InvalidProblemError",
    "ManifestError", "ModsupError", "ModularSystem", "Module",
    "ProjectManifest", "ProjectionSpec", "SynthesisProblem",
    "SynthesisReport", "Word", "build_coordinator", "check_moc_bounded",
    "check_natural_projection_consistency", "check_observability_agreement",
    "check_shared_controllable", "check_shared_controllable_observable",
    "check_shared_observable", "closed_loop", "dump_automaton",
    "emit_report", "enumerate_language", "extend_kappa",
    "inverse_project", "is_conditionally_decomposable", "is_controllable",
    "is_lcc", "is_nonblocking", "is_nonconflicting", "is_normal",
    "is_observer", "is_occ", "language_equal", "language_subset",
    "load_automata", "load_automaton", "localize", "minimize",
    "nonconflicting_verdict", "observation_projection", "parallel",
    "parse_automaton_text", "parse_manifest", "prefix_closure", "product",
    "project", "render_word", "run_global_mode", "run_local_mode",
    "run_project", "save_automaton", "save_plan", "shared_alphabet",
    "sup_c", "sup_cn", "sup_n", "trim", "verify_equivalence",
]
