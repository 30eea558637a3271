"""JSON payloads for the HTTP API.

One canonical snake_case spelling per field, mirroring the domain types.
Element payloads are also parsed back from JSON for mutations; a
:class:`PayloadError` maps to a 400 response.
"""

from __future__ import annotations

from typing import Any

from .analysis import (
    CoverageGap,
    CriticalityScore,
    TraceChain,
    UcaMatrix,
)
from .diagnostics import Diagnostic
from .model import (
    LEVEL_ID_RE,
    LoopElement,
    MissionModel,
    UcaCategory,
    UnsafeControlAction,
    is_valid_identifier,
    normalize_identifier,
)
from .syntax import (
    RawAction,
    RawConstraint,
    RawHazard,
    RawLevel,
    RawLoss,
    RawScenario,
    RawUca,
    Ref,
)

ELEMENT_KINDS = ("loss", "hazard", "level", "action", "uca", "constraint", "scenario")


class PayloadError(ValueError):
    """Malformed request body (wrong shape, type, or keyword)."""


# -- model -> JSON ----------------------------------------------------------------


def model_payload(model: MissionModel) -> dict[str, Any]:
    return {
        "mission_name": model.mission_name,
        "mission_statement": model.mission_statement,
        "system_description": model.system_description,
        "losses": [
            {"id": l.id, "priority": l.priority, "description": l.description}
            for l in model.losses
        ],
        "hazards": [
            {
                "id": h.id,
                "name": h.name,
                "worst_case_environment": h.worst_case_environment,
                "leads_to": list(h.leads_to),
            }
            for h in model.hazards
        ],
        "levels": [
            {
                "id": level.id,
                "display_name": level.display_name,
                "rank": level.rank,
                "is_environment": level.is_environment,
            }
            for level in model.levels
        ],
        "control_actions": [
            {
                "id": a.id,
                "title": a.title,
                "source_level": a.source_level,
                "target_level": a.target_level,
            }
            for a in model.control_actions
        ],
        "ucas": [uca_payload(u) for u in model.ucas],
        "constraints": [
            {"id": c.id, "action": c.action, "text": c.text} for c in model.constraints
        ],
        "scenarios": [
            {
                "id": s.id,
                "action": s.action,
                "category": s.category.keyword,
                "element": s.element.keyword,
                "attack": s.attack_class,
                "description": s.description,
            }
            for s in model.scenarios
        ],
    }


def uca_payload(uca: UnsafeControlAction) -> dict[str, Any]:
    return {
        "action": uca.action,
        "category": uca.category.keyword,
        "hazards": list(uca.hazards),
        "context": uca.context,
        "justified_absent": uca.justified_absent,
    }


def diagnostics_payload(diagnostics: list[Diagnostic]) -> list[dict[str, Any]]:
    return [
        {
            "code": d.code,
            "severity": d.severity.value,
            "message": d.message,
            "span": {
                "start": d.span.start,
                "end": d.span.end,
                "line": d.span.line,
                "column": d.span.column,
            },
        }
        for d in diagnostics
    ]


def trace_payload(chain: TraceChain) -> dict[str, Any]:
    return {
        "root": chain.root.id,
        "direction": chain.direction,
        "losses": [l.id for l in chain.losses],
        "hazards": [h.id for h in chain.hazards],
        "ucas": [
            {"action": u.action, "category": u.category.keyword} for u in chain.ucas
        ],
        "control_actions": [a.id for a in chain.control_actions],
        "constraints": [c.id for c in chain.constraints],
    }


def matrix_payload(matrix: UcaMatrix) -> dict[str, Any]:
    rows = []
    for action_id in matrix.rows:
        cells = []
        for cell in matrix.row_cells(action_id):
            entry: dict[str, Any] = {"category": cell.category.keyword}
            if cell.is_gap:
                entry["kind"] = "gap"
            elif cell.is_justified_absent:
                entry["kind"] = "justified_absent"
                entry["justification"] = cell.uca.context
            else:
                entry["kind"] = "uca"
                entry["hazards"] = list(cell.uca.hazards)
                entry["context"] = cell.uca.context
            cells.append(entry)
        rows.append({"action": action_id, "cells": cells})
    return {"rows": rows}


def coverage_payload(gaps: list[CoverageGap]) -> list[dict[str, Any]]:
    return [{"action": g.action, "category": g.category.keyword} for g in gaps]


def criticality_payload(scores: list[CriticalityScore]) -> list[dict[str, Any]]:
    return [
        {
            "action": s.action,
            "reachable_losses": list(s.reachable_losses),
            "score": s.score,
        }
        for s in scores
    ]


# -- JSON -> raw elements -----------------------------------------------------------


def _require(body: dict[str, Any], key: str, kind: type, what: str) -> Any:
    if key not in body:
        raise PayloadError(f"{what} payload is missing field `{key}`")
    value = body[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise PayloadError(f"field `{key}` of {what} must be a {kind.__name__}")
    return value


def _check_keys(body: dict[str, Any], allowed: set[str], what: str) -> None:
    # `source` is reserved for stakeholder attribution and currently ignored.
    unknown = set(body) - allowed - {"kind", "source"}
    if unknown:
        raise PayloadError(f"unknown field(s) in {what} payload: {', '.join(sorted(unknown))}")


def _element_id(body: dict[str, Any], what: str) -> Ref:
    raw = _require(body, "id", str, what)
    ident = normalize_identifier(raw)
    if not is_valid_identifier(ident):
        raise PayloadError(f"`{raw}` is not a valid identifier (expected a form like L1 or CA1.4)")
    return Ref(ident)


def _id_list(body: dict[str, Any], key: str, what: str) -> tuple[Ref, ...]:
    value = _require(body, key, list, what)
    refs = []
    for entry in value:
        if not isinstance(entry, str):
            raise PayloadError(f"entries of `{key}` must be identifier strings")
        refs.append(Ref(normalize_identifier(entry)))
    return tuple(refs)


def _category(body: dict[str, Any], what: str) -> UcaCategory:
    keyword = _require(body, "category", str, what)
    try:
        return UcaCategory.from_keyword(keyword)
    except ValueError:
        raise PayloadError(
            f"unknown UCA category `{keyword}`; expected one of "
            + ", ".join(c.keyword for c in UcaCategory)
        ) from None


def element_from_json(kind: str, body: dict[str, Any]):
    """Parse one element payload into its raw node. Raises PayloadError."""
    if not isinstance(body, dict):
        raise PayloadError("element payload must be a JSON object")
    if kind == "loss":
        _check_keys(body, {"id", "priority", "description"}, "loss")
        priority = _require(body, "priority", int, "loss")
        if priority < 1:
            raise PayloadError("loss priority must be a positive integer")
        return RawLoss(
            _element_id(body, "loss"), priority, _require(body, "description", str, "loss")
        )
    if kind == "hazard":
        _check_keys(body, {"id", "name", "worst_case_environment", "leads_to"}, "hazard")
        return RawHazard(
            _element_id(body, "hazard"),
            _require(body, "name", str, "hazard"),
            _require(body, "worst_case_environment", str, "hazard"),
            _id_list(body, "leads_to", "hazard"),
        )
    if kind == "level":
        _check_keys(body, {"id", "display_name", "is_environment"}, "level")
        raw_id = _require(body, "id", str, "level")
        if not LEVEL_ID_RE.match(raw_id):
            raise PayloadError(f"`{raw_id}` is not a valid level id (word token expected)")
        is_environment = body.get("is_environment", False)
        if not isinstance(is_environment, bool):
            raise PayloadError("field `is_environment` of level must be a boolean")
        return RawLevel(
            Ref(raw_id), _require(body, "display_name", str, "level"), is_environment
        )
    if kind == "action":
        _check_keys(body, {"id", "title", "source_level", "target_level"}, "action")
        return RawAction(
            _element_id(body, "action"),
            _require(body, "title", str, "action"),
            Ref(_require(body, "source_level", str, "action")),
            Ref(_require(body, "target_level", str, "action")),
            (),
        )
    if kind == "uca":
        _check_keys(
            body, {"action", "category", "hazards", "context", "justified_absent"}, "uca"
        )
        action = Ref(normalize_identifier(_require(body, "action", str, "uca")))
        category = _category(body, "uca")
        justified = body.get("justified_absent", False)
        if not isinstance(justified, bool):
            raise PayloadError("field `justified_absent` of uca must be a boolean")
        context = _require(body, "context", str, "uca")
        if justified:
            hazards: tuple[Ref, ...] = ()
            if body.get("hazards"):
                raise PayloadError("a justified-absent UCA must not list hazards")
        else:
            hazards = _id_list(body, "hazards", "uca")
            if not hazards:
                raise PayloadError("a live UCA must cite at least one hazard")
        return action, RawUca(category, hazards, context, justified)
    if kind == "constraint":
        _check_keys(body, {"id", "action", "text"}, "constraint")
        return RawConstraint(
            _element_id(body, "constraint"),
            Ref(normalize_identifier(_require(body, "action", str, "constraint"))),
            _require(body, "text", str, "constraint"),
        )
    if kind == "scenario":
        _check_keys(
            body, {"id", "action", "category", "element", "attack", "description"}, "scenario"
        )
        element_keyword = _require(body, "element", str, "scenario")
        try:
            element = LoopElement.from_keyword(element_keyword)
        except KeyError:
            raise PayloadError(
                f"unknown control-loop element `{element_keyword}`"
            ) from None
        return RawScenario(
            _element_id(body, "scenario"),
            Ref(normalize_identifier(_require(body, "action", str, "scenario"))),
            _category(body, "scenario"),
            element,
            _require(body, "attack", str, "scenario"),
            _require(body, "description", str, "scenario"),
        )
    raise PayloadError(
        f"unknown element kind `{kind}`; expected one of {', '.join(ELEMENT_KINDS)}"
    )
