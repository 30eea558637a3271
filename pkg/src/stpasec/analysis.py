"""Semantic validation and analyses over a resolved mission model.

Everything here is a pure function: validation findings, top-down and
bottom-up trace chains, the UCA matrix with its coverage gaps, criticality
ranking of control actions, causal-scenario checks, and scenario skeleton
enumeration. Results are deterministic and ordered for stable reports.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, ZERO_SPAN, sort_key
from .model import (
    ControlAction,
    Hazard,
    LoopElement,
    Loss,
    MissionModel,
    SafetyConstraint,
    UcaCategory,
    UnsafeControlAction,
    identifier_sort_key,
    loss_weight,
)


class UnknownIdentifierError(LookupError):
    """An analysis was asked about an id that does not name the right element."""

    def __init__(self, identifier: str, expected: str) -> None:
        super().__init__(f"`{identifier}` does not name a {expected} in this model")
        self.identifier = identifier
        self.expected = expected


@dataclass(frozen=True)
class TraceChain:
    """One traceability query result: everything linked to the root element.

    For a loss root the chain runs downward (hazards that produce it, UCAs
    citing those hazards, their actions and constraints); for a control
    action root it runs upward to the losses it can ultimately cause.
    Every collection is ascending by identifier.
    """

    root: Loss | ControlAction
    direction: str  # "down" | "up"
    losses: tuple[Loss, ...]
    hazards: tuple[Hazard, ...]
    ucas: tuple[UnsafeControlAction, ...]
    control_actions: tuple[ControlAction, ...]
    constraints: tuple[SafetyConstraint, ...]


@dataclass(frozen=True)
class MatrixCell:
    action: str
    category: UcaCategory
    uca: UnsafeControlAction | None  # None marks a gap

    @property
    def is_gap(self) -> bool:
        return self.uca is None

    @property
    def is_justified_absent(self) -> bool:
        return self.uca is not None and self.uca.justified_absent


@dataclass(frozen=True)
class UcaMatrix:
    """|actions| x 4 grid of UCA cells; gaps are materialized, never omitted."""

    rows: tuple[str, ...]  # action ids ascending
    cells: tuple[MatrixCell, ...]  # row-major

    def cell(self, action_id: str, category: UcaCategory) -> MatrixCell:
        row = self.rows.index(action_id)
        return self.cells[row * len(UcaCategory) + category.index]

    def row_cells(self, action_id: str) -> tuple[MatrixCell, ...]:
        row = self.rows.index(action_id)
        width = len(UcaCategory)
        return self.cells[row * width : (row + 1) * width]


@dataclass(frozen=True)
class CoverageGap:
    action: str
    category: UcaCategory


@dataclass(frozen=True)
class CriticalityScore:
    action: str
    reachable_losses: tuple[str, ...]
    score: int


# -- validation ---------------------------------------------------------------


def validate(model: MissionModel) -> list[Diagnostic]:
    """All semantic findings, sorted by source position then code.

    An empty list means the model passes; warnings alone do not fail it.
    """
    diagnostics: list[Diagnostic] = []

    environments = [level for level in model.levels if level.is_environment]
    if not model.levels:
        diagnostics.append(
            Diagnostic("E107", "model defines no functional levels", ZERO_SPAN)
        )
    elif len(environments) == len(model.levels):
        diagnostics.append(
            Diagnostic(
                "E107",
                "model defines no non-environment functional level",
                environments[0].span,
            )
        )
    if len(environments) > 1:
        for extra in environments[1:]:
            diagnostics.append(
                Diagnostic(
                    "E107",
                    f"multiple environment levels (`{environments[0].id}` and `{extra.id}`)",
                    extra.span,
                )
            )
    elif environments and environments[0].rank != len(model.levels) - 1:
        diagnostics.append(
            Diagnostic(
                "E107",
                f"environment level `{environments[0].id}` must be the lowest level",
                environments[0].span,
            )
        )

    for hazard in model.hazards:
        if not hazard.leads_to:
            diagnostics.append(
                Diagnostic(
                    "E103",
                    f"hazard `{hazard.id}` leads to no losses",
                    hazard.span,
                )
            )

    for action in model.control_actions:
        source = model.level(action.source_level)
        target = model.level(action.target_level)
        if target.rank - source.rank != 1:
            diagnostics.append(
                Diagnostic(
                    "E104",
                    f"control action `{action.id}` must target the level directly "
                    f"below its source (`{source.id}` has rank {source.rank}, "
                    f"`{target.id}` has rank {target.rank})",
                    action.span,
                )
            )
        if source.is_environment or target.is_environment:
            diagnostics.append(
                Diagnostic(
                    "E105",
                    f"control action `{action.id}` touches the environment level",
                    action.span,
                )
            )

    diagnostics.extend(scenario_check(model))

    for gap in category_coverage(model):
        action = model.action(gap.action)
        diagnostics.append(
            Diagnostic(
                "W201",
                f"no UCA recorded for `{gap.action}` category `{gap.category.keyword}` "
                "(add one or rule it out with `none`)",
                action.span,
            )
        )

    cited_losses = {loss_id for hazard in model.hazards for loss_id in hazard.leads_to}
    for loss in model.losses:
        if loss.id not in cited_losses:
            diagnostics.append(
                Diagnostic(
                    "W202",
                    f"loss `{loss.id}` is referenced by no hazard",
                    loss.span,
                )
            )

    constrained = {constraint.action for constraint in model.constraints}
    for action in model.control_actions:
        if action.id not in constrained:
            diagnostics.append(
                Diagnostic(
                    "W203",
                    f"control action `{action.id}` has no safety constraint",
                    action.span,
                )
            )

    cited_hazards = {hazard_id for uca in model.ucas for hazard_id in uca.hazards}
    for hazard in model.hazards:
        if hazard.id not in cited_hazards:
            diagnostics.append(
                Diagnostic(
                    "W204",
                    f"hazard `{hazard.id}` is referenced by no UCA",
                    hazard.span,
                )
            )

    return sorted(diagnostics, key=sort_key)


def scenario_check(model: MissionModel) -> list[Diagnostic]:
    """E106 for every scenario whose (action, category) has no live UCA."""
    diagnostics: list[Diagnostic] = []
    for scenario in model.scenarios:
        element = model.lookup(scenario.action)
        if not isinstance(element, ControlAction):
            diagnostics.append(
                Diagnostic(
                    "E106",
                    f"scenario `{scenario.id}` references unknown control action "
                    f"`{scenario.action}`",
                    scenario.span,
                )
            )
            continue
        uca = model.uca_for(scenario.action, scenario.category)
        if uca is None:
            diagnostics.append(
                Diagnostic(
                    "E106",
                    f"scenario `{scenario.id}` references UCA "
                    f"`{scenario.action}/{scenario.category.keyword}`, which is not recorded",
                    scenario.span,
                )
            )
        elif uca.justified_absent:
            diagnostics.append(
                Diagnostic(
                    "E106",
                    f"scenario `{scenario.id}` references UCA "
                    f"`{scenario.action}/{scenario.category.keyword}`, "
                    "which is marked justified-absent",
                    scenario.span,
                )
            )
    return sorted(diagnostics, key=sort_key)


# -- traceability -------------------------------------------------------------


def trace_down(model: MissionModel, loss_id: str) -> TraceChain:
    """Loss -> hazards -> UCAs -> control actions -> constraints."""
    root = model.lookup(loss_id)
    if not isinstance(root, Loss):
        raise UnknownIdentifierError(loss_id, "loss")
    hazards = tuple(h for h in model.hazards if root.id in h.leads_to)
    hazard_ids = {h.id for h in hazards}
    ucas = tuple(
        u
        for u in model.ucas
        if not u.justified_absent and hazard_ids.intersection(u.hazards)
    )
    action_ids = {u.action for u in ucas}
    actions = tuple(a for a in model.control_actions if a.id in action_ids)
    constraints = tuple(c for c in model.constraints if c.action in action_ids)
    return TraceChain(
        root=root,
        direction="down",
        losses=(root,),
        hazards=hazards,
        ucas=ucas,
        control_actions=actions,
        constraints=constraints,
    )


def trace_up(model: MissionModel, action_id: str) -> TraceChain:
    """Control action -> its UCAs -> their hazards -> the losses they cause."""
    root = model.lookup(action_id)
    if not isinstance(root, ControlAction):
        raise UnknownIdentifierError(action_id, "control action")
    ucas = model.live_ucas_for(root.id)
    hazard_ids = {hazard_id for u in ucas for hazard_id in u.hazards}
    hazards = tuple(h for h in model.hazards if h.id in hazard_ids)
    loss_ids = {loss_id for h in hazards for loss_id in h.leads_to}
    losses = tuple(l for l in model.losses if l.id in loss_ids)
    constraints = model.constraints_for(root.id)
    return TraceChain(
        root=root,
        direction="up",
        losses=losses,
        hazards=hazards,
        ucas=ucas,
        control_actions=(root,),
        constraints=constraints,
    )


# -- UCA matrix and coverage ----------------------------------------------------


def uca_matrix(model: MissionModel) -> UcaMatrix:
    """The complete |actions| x 4 grid; missing cells are gap-marked."""
    rows = tuple(a.id for a in model.control_actions)
    cells = tuple(
        MatrixCell(action_id, category, model.uca_for(action_id, category))
        for action_id in rows
        for category in UcaCategory
    )
    return UcaMatrix(rows, cells)


def category_coverage(model: MissionModel) -> list[CoverageGap]:
    """Exactly the (action, category) pairs with neither a UCA nor a
    justified-absent marker, ascending by (action id, category order)."""
    return [
        CoverageGap(cell.action, cell.category)
        for cell in uca_matrix(model).cells
        if cell.is_gap
    ]


# -- criticality ---------------------------------------------------------------


def criticality_rank(model: MissionModel) -> list[CriticalityScore]:
    """One score per control action: the sum of weights of every loss the
    action can reach through its UCAs. Descending by score, ties broken by
    ascending action id."""
    scores = []
    for action in model.control_actions:
        reachable = tuple(loss.id for loss in trace_up(model, action.id).losses)
        total = sum(loss_weight(model, loss_id) for loss_id in reachable)
        scores.append(CriticalityScore(action.id, reachable, total))
    scores.sort(key=lambda s: (-s.score, identifier_sort_key(s.action)))
    return scores


# -- scenario support ------------------------------------------------------------


def scenario_skeletons(
    model: MissionModel, action_id: str
) -> list[tuple[UnsafeControlAction, LoopElement]]:
    """Cross product of the action's live UCAs with all fifteen loop
    elements, ordered by (category order, element ordinal) — the blank
    worksheet for causal-scenario elicitation."""
    element = model.lookup(action_id)
    if not isinstance(element, ControlAction):
        raise UnknownIdentifierError(action_id, "control action")
    return [
        (uca, loop_element)
        for uca in model.live_ucas_for(element.id)
        for loop_element in LoopElement
    ]
