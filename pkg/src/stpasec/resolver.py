"""Reference resolution: raw parse trees become indexed, immutable models.

Resolution checks identifier uniqueness (E102) and that every symbolic
reference names an element of the right kind (E101). Structural rules such
as level adjacency or coverage are deliberately left to
:func:`stpasec.analysis.validate`; scenario UCA references are also deferred
there (E106) so a half-built model can still be loaded and inspected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, sort_key
from .model import (
    CausalScenario,
    ControlAction,
    FunctionalLevel,
    Hazard,
    Loss,
    MissionModel,
    SafetyConstraint,
    UnsafeControlAction,
    identifier_sort_key,
)
from .syntax import RawModel, Ref


@dataclass(frozen=True)
class ResolveResult:
    model: MissionModel | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.model is not None


def resolve(raw: RawModel) -> ResolveResult:
    """Check references and build the canonical :class:`MissionModel`.

    The resolved model holds its collections in canonical order (losses,
    hazards, actions, constraints and scenarios ascending by identifier,
    levels by declaration rank, UCAs by action then category), so two models
    with the same content compare equal regardless of declaration order.
    """
    diagnostics: list[Diagnostic] = []

    declared: dict[str, str] = {}  # id -> kind, in declaration order
    groups = (
        ("loss", raw.losses),
        ("hazard", raw.hazards),
        ("level", raw.levels),
        ("control action", raw.actions),
        ("constraint", raw.constraints),
        ("scenario", raw.scenarios),
    )
    for kind, elements in groups:
        for element in elements:
            name = element.id.name
            if name in declared:
                diagnostics.append(
                    Diagnostic(
                        "E102",
                        f"duplicate identifier `{name}` (already declared as a {declared[name]})",
                        element.id.span,
                    )
                )
            else:
                declared[name] = kind

    seen_priorities: dict[int, str] = {}
    for loss in raw.losses:
        if loss.priority in seen_priorities:
            diagnostics.append(
                Diagnostic(
                    "E102",
                    f"duplicate loss priority {loss.priority} on `{loss.id.name}` "
                    f"(already used by `{seen_priorities[loss.priority]}`)",
                    loss.id.span,
                )
            )
        else:
            seen_priorities[loss.priority] = loss.id.name

    loss_ids = {loss.id.name for loss in raw.losses}
    hazard_ids = {hazard.id.name for hazard in raw.hazards}
    level_ids = {level.id.name for level in raw.levels}
    action_ids = {action.id.name for action in raw.actions}

    def check_ref(ref: Ref, pool: set[str], kind: str, site: str) -> None:
        if ref.name not in pool:
            if ref.name in declared:
                message = f"`{ref.name}` does not name a {kind} ({site})"
            else:
                message = f"unknown {kind} `{ref.name}` ({site})"
            diagnostics.append(Diagnostic("E101", message, ref.span))

    for hazard in raw.hazards:
        for ref in hazard.leads_to:
            check_ref(ref, loss_ids, "loss", f"in leads_to of hazard `{hazard.id.name}`")

    for action in raw.actions:
        check_ref(action.source, level_ids, "level", f"as source of action `{action.id.name}`")
        check_ref(action.target, level_ids, "level", f"as target of action `{action.id.name}`")
        seen_categories = set()
        for uca in action.ucas:
            if uca.category in seen_categories:
                diagnostics.append(
                    Diagnostic(
                        "E102",
                        f"duplicate UCA category `{uca.category.keyword}` "
                        f"for action `{action.id.name}`",
                        uca.span,
                    )
                )
            seen_categories.add(uca.category)
            for ref in uca.hazards:
                check_ref(
                    ref,
                    hazard_ids,
                    "hazard",
                    f"in UCA `{action.id.name}/{uca.category.keyword}`",
                )

    for constraint in raw.constraints:
        check_ref(
            constraint.action,
            action_ids,
            "control action",
            f"in constraint `{constraint.id.name}`",
        )

    # Scenario action/category references stay symbolic: scenario_check
    # reports danglers as E106 so that drafts with forward-looking scenarios
    # still load.

    if diagnostics:
        return ResolveResult(None, sorted(diagnostics, key=sort_key))

    def id_key(element) -> tuple:
        return identifier_sort_key(element.id)

    losses = tuple(
        sorted(
            (Loss(l.id.name, l.priority, l.description, l.span) for l in raw.losses),
            key=id_key,
        )
    )
    hazards = tuple(
        sorted(
            (
                Hazard(
                    h.id.name,
                    h.name,
                    h.worst_case,
                    tuple(sorted((r.name for r in h.leads_to), key=identifier_sort_key)),
                    h.span,
                )
                for h in raw.hazards
            ),
            key=id_key,
        )
    )
    levels = tuple(
        FunctionalLevel(level.id.name, level.display_name, rank, level.is_environment, level.span)
        for rank, level in enumerate(raw.levels)
    )
    actions = tuple(
        sorted(
            (
                ControlAction(a.id.name, a.title, a.source.name, a.target.name, a.span)
                for a in raw.actions
            ),
            key=id_key,
        )
    )
    ucas = tuple(
        sorted(
            (
                UnsafeControlAction(
                    action.id.name,
                    uca.category,
                    tuple(sorted((r.name for r in uca.hazards), key=identifier_sort_key)),
                    uca.context,
                    uca.justified_absent,
                    uca.span,
                )
                for action in raw.actions
                for uca in action.ucas
            ),
            key=lambda u: (identifier_sort_key(u.action), u.category.index),
        )
    )
    constraints = tuple(
        sorted(
            (
                SafetyConstraint(c.id.name, c.action.name, c.text, c.span)
                for c in raw.constraints
            ),
            key=id_key,
        )
    )
    scenarios = tuple(
        sorted(
            (
                CausalScenario(
                    s.id.name,
                    s.action.name,
                    s.category,
                    s.element,
                    s.attack,
                    s.description,
                    s.span,
                )
                for s in raw.scenarios
            ),
            key=id_key,
        )
    )

    model = MissionModel(
        mission_name=raw.mission_name,
        mission_statement=raw.mission_statement,
        system_description=raw.system_description,
        losses=losses,
        hazards=hazards,
        levels=levels,
        control_actions=actions,
        ucas=ucas,
        constraints=constraints,
        scenarios=scenarios,
    )
    return ResolveResult(model, [])


def raw_from_model(model: MissionModel) -> RawModel:
    """Rebuild the unresolved view of a model (the editing service applies
    mutations on this form and re-resolves)."""
    from .syntax import (
        RawAction,
        RawConstraint,
        RawHazard,
        RawLevel,
        RawLoss,
        RawScenario,
        RawUca,
    )

    return RawModel(
        mission_name=model.mission_name,
        mission_statement=model.mission_statement,
        system_description=model.system_description,
        losses=tuple(
            RawLoss(Ref(l.id), l.priority, l.description) for l in model.losses
        ),
        hazards=tuple(
            RawHazard(
                Ref(h.id),
                h.name,
                h.worst_case_environment,
                tuple(Ref(name) for name in h.leads_to),
            )
            for h in model.hazards
        ),
        levels=tuple(
            RawLevel(Ref(level.id), level.display_name, level.is_environment)
            for level in model.levels
        ),
        actions=tuple(
            RawAction(
                Ref(a.id),
                a.title,
                Ref(a.source_level),
                Ref(a.target_level),
                tuple(
                    RawUca(
                        u.category,
                        tuple(Ref(name) for name in u.hazards),
                        u.context,
                        u.justified_absent,
                    )
                    for u in model.ucas_for(a.id)
                ),
            )
            for a in model.control_actions
        ),
        constraints=tuple(
            RawConstraint(Ref(c.id), Ref(c.action), c.text) for c in model.constraints
        ),
        scenarios=tuple(
            RawScenario(
                Ref(s.id),
                Ref(s.action),
                s.category,
                s.element,
                s.attack_class,
                s.description,
            )
            for s in model.scenarios
        ),
    )


class LoadError(Exception):
    """Raised by :func:`load_model` when the text does not parse or resolve."""

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


def load_model(source: str) -> MissionModel:
    """Parse and resolve in one step, raising :class:`LoadError` on failure."""
    from .parser import parse

    parsed = parse(source)
    if not parsed.ok:
        raise LoadError(parsed.diagnostics)
    resolved = resolve(parsed.raw)
    if not resolved.ok:
        raise LoadError(resolved.diagnostics)
    return resolved.model
