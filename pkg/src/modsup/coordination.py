"""Global-specification workflow: coordinator alphabets and localization.

A global spec K over the union alphabet is split across modules by
projecting onto each module alphabet extended with a coordinator alphabet
kappa. The split is faithful exactly when K equals the composition of those
projections (conditional decomposability); kappa can be grown greedily
until that certificate holds.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from time import perf_counter

from . import ops
from .automaton import Automaton
from .checks import ModularSystem
from .errors import InvalidProblemError
from .events import ProjectionSpec, render_word
from .fileformat import save_automaton
from .verdict import CheckVerdict


@dataclass(frozen=True)
class CoordinationPlan:
    kappa: frozenset[str]
    local_alphabets: tuple[frozenset[str], ...]
    coordinator: Automaton
    localized_plants: tuple[Automaton, ...]
    localized_specs: tuple[Automaton, ...]
    certificates: tuple[CheckVerdict, ...]


def _shared_of(alphabets) -> frozenset[str]:
    shared: set[str] = set()
    for i in range(len(alphabets)):
        for j in range(i + 1, len(alphabets)):
            shared |= alphabets[i] & alphabets[j]
    return frozenset(shared)


def _decomposition_pieces(spec: Automaton, alphabets,
                          kappa: frozenset[str]) -> list[Automaton]:
    return [
        ops.project(spec, ProjectionSpec(spec.alphabet, sigma | kappa))
        for sigma in alphabets
    ]


def is_conditionally_decomposable(spec: Automaton, alphabets,
                                  kappa) -> CheckVerdict:
    """Whether the spec equals the composition of its projections onto the
    kappa-extended module alphabets. The inclusion of the spec in the
    composition always holds; the witness lives in the other direction."""
    t0 = perf_counter()
    alphabets = [frozenset(a) for a in alphabets]
    kappa = frozenset(kappa)
    shared = _shared_of(alphabets)
    if not shared <= kappa:
        raise InvalidProblemError(
            f"kappa must contain every shared event; missing "
            f"{sorted(shared - kappa)}")
    if not kappa <= spec.alphabet:
        raise InvalidProblemError("kappa events must lie in the spec alphabet")
    if frozenset().union(*alphabets) | kappa != spec.alphabet:
        raise InvalidProblemError(
            "module alphabets plus kappa must cover the spec alphabet")
    composed = ops.parallel(_decomposition_pieces(spec, alphabets, kappa))
    witness = ops._marked_shortfall(composed, spec)
    seconds = perf_counter() - t0
    if witness is None:
        return CheckVerdict("conditional-decomposability", True,
                            seconds=seconds)
    return CheckVerdict("conditional-decomposability", False,
                        witness=(witness,),
                        note="string in the composed projections but not "
                             "in the spec",
                        seconds=seconds)


def extend_kappa(spec: Automaton, alphabets, seed) -> frozenset[str]:
    """Grow a kappa from the seed until decomposability is certified.

    Greedy: among events not yet in kappa, prefer one whose addition makes
    the current witness disappear from the composed projections, observable
    events first, ties on the name; with no such event, take the first
    candidate. The full alphabet always certifies, so this terminates.
    """
    alphabets = [frozenset(a) for a in alphabets]
    kappa = frozenset(seed)
    shared = _shared_of(alphabets)
    if not shared <= kappa:
        raise InvalidProblemError(
            f"seed must contain every shared event; missing "
            f"{sorted(shared - kappa)}")
    observable = spec.table.observable
    while True:
        verdict = is_conditionally_decomposable(spec, alphabets, kappa)
        if verdict:
            return kappa
        witness = verdict.witness[0]
        candidates = sorted(spec.alphabet - kappa,
                            key=lambda e: (e not in observable, e))
        chosen = None
        for e in candidates:
            trial = kappa | {e}
            composed = ops.parallel(
                _decomposition_pieces(spec, alphabets, trial))
            if not composed.accepts(witness):
                chosen = e
                break
        if chosen is None:
            chosen = candidates[0]
        kappa = kappa | {chosen}


def build_coordinator(m: ModularSystem, kappa) -> Automaton:
    """Composition of the per-module plant projections onto kappa.

    With every shared event inside kappa this realizes the projection of
    the composed plant, without ever composing the full plant."""
    kappa = frozenset(kappa)
    shared = _shared_of(m.alphabets())
    if not shared <= kappa:
        raise InvalidProblemError(
            f"kappa must contain every shared event; missing "
            f"{sorted(shared - kappa)}")
    pieces = [
        ops.project(mod.plant,
                    ProjectionSpec(mod.plant.alphabet,
                                   kappa & mod.plant.alphabet))
        for mod in m.modules
    ]
    return ops.parallel(pieces, name="coordinator")


def localize(m: ModularSystem, kappa) -> CoordinationPlan:
    """Split the global spec across kappa-extended modules.

    Produces localized plants Li composed with the coordinator and
    localized specs as projections of the global spec, then certifies the
    plan: decomposability, the composed localized plants realize the
    composed plant, and each localized plant equals the corresponding
    projection of the composed plant."""
    if m.global_spec is None:
        raise InvalidProblemError("localization needs a global spec")
    kappa = frozenset(kappa)
    spec = m.global_spec
    alphabets = m.alphabets()
    cd = is_conditionally_decomposable(spec, alphabets, kappa)
    if not cd:
        raise InvalidProblemError(
            "decomposability certificate missing: witness "
            f"'{render_word(cd.witness[0])}'")
    coordinator = build_coordinator(m, kappa)
    local_alphabets = tuple(sigma | kappa for sigma in alphabets)
    plants = []
    specs = []
    for i, mod in enumerate(m.modules):
        plant = ops.parallel([mod.plant, coordinator], name=f"L{i + 1}+k")
        spec_i = ops.project(
            spec, ProjectionSpec(spec.alphabet, local_alphabets[i]))
        plants.append(plant)
        specs.append(spec_i.renamed(f"K{i + 1}+k"))
    certificates = [cd]
    t0 = perf_counter()
    comp = m.plant_composition()
    eq = ops.language_equal(ops.parallel(plants, name="recomposed"), comp)
    certificates.append(CheckVerdict(
        "localized-plants-compose", eq.generated,
        witness=None if eq.generated else (eq.generated_witness,),
        seconds=perf_counter() - t0))
    for i in range(m.n):
        t0 = perf_counter()
        projected = ops.project(
            comp, ProjectionSpec(m.alphabet, local_alphabets[i]))
        eq_i = ops.language_equal(projected, plants[i])
        certificates.append(CheckVerdict(
            f"localized-plant-projection[{i}]", eq_i.generated,
            witness=None if eq_i.generated else (eq_i.generated_witness,),
            seconds=perf_counter() - t0))
    return CoordinationPlan(kappa, local_alphabets, coordinator,
                            tuple(plants), tuple(specs),
                            tuple(certificates))


def save_plan(plan: CoordinationPlan, directory: str) -> None:
    """Serialize a plan as a directory of automata plus plan.txt."""
    os.makedirs(directory, exist_ok=True)
    save_automaton(plan.coordinator,
                   os.path.join(directory, "coordinator.aut"))
    for i, (plant, spec) in enumerate(zip(plan.localized_plants,
                                          plan.localized_specs), start=1):
        save_automaton(plant, os.path.join(directory, f"plant_{i}.aut"))
        save_automaton(spec, os.path.join(directory, f"spec_{i}.aut"))
    lines = [f"kappa = {' '.join(sorted(plan.kappa))}".rstrip()]
    for verdict in plan.certificates:
        lines.append(verdict.describe())
    with open(os.path.join(directory, "plan.txt"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
