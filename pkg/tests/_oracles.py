"""Independent reference implementations used as test oracles.

These deliberately avoid the library's own code paths: the lexer oracle is
a regex table instead of a hand scanner, and the trace oracle enumerates the
full cross product of model elements instead of joining over indexes.
"""

from __future__ import annotations

import re

from stpasec.model import MissionModel, identifier_sort_key

# -- reference lexer -----------------------------------------------------------

_TOKEN_RES = [
    ("trivia", re.compile(r"[ \t\r\n]+")),
    ("trivia", re.compile(r"#[^\n]*")),
    ("string", re.compile(r'"(?:\\.|[^"\\\n])*"')),
    ("integer", re.compile(r"[0-9]+")),
    ("word", re.compile(r"[A-Za-z][A-Za-z0-9_]*(?:\.[0-9]+)*")),
    ("punct", re.compile(r"[{}\[\]:,/]")),
]


def reference_token_count(source: str) -> int:
    """Count non-trivia tokens (excluding EOF) with a regex-table lexer."""
    pos = 0
    count = 0
    while pos < len(source):
        for kind, pattern in _TOKEN_RES:
            match = pattern.match(source, pos)
            if match:
                if kind != "trivia":
                    count += 1
                pos = match.end()
                break
        else:
            raise ValueError(f"reference lexer stuck at offset {pos}: {source[pos]!r}")
    return count


# -- brute-force trace oracle -----------------------------------------------------


def _link_tuples(model: MissionModel):
    """Every (loss, hazard, uca, action) tuple connected by the linkage
    predicates: loss in hazard.leads_to, hazard in uca.hazards, uca live,
    uca.action == action.id. Plain nested loops, no indexes."""
    for loss in model.losses:
        for hazard in model.hazards:
            if loss.id not in hazard.leads_to:
                continue
            for uca in model.ucas:
                if uca.justified_absent or hazard.id not in uca.hazards:
                    continue
                for action in model.control_actions:
                    if uca.action != action.id:
                        continue
                    yield loss, hazard, uca, action


def _sorted_ids(ids) -> tuple[str, ...]:
    return tuple(sorted(set(ids), key=identifier_sort_key))


def oracle_trace_down(model: MissionModel, loss_id: str) -> dict[str, tuple]:
    hazards = []
    ucas = []
    actions = []
    for loss, hazard, uca, action in _link_tuples(model):
        if loss.id != loss_id:
            continue
        hazards.append(hazard.id)
        ucas.append((uca.action, uca.category))
        actions.append(action.id)
    # hazards linked to the loss appear even when no UCA cites them
    for hazard in model.hazards:
        if loss_id in hazard.leads_to:
            hazards.append(hazard.id)
    constraints = [
        constraint.id
        for constraint in model.constraints
        for action_id in set(actions)
        if constraint.action == action_id
    ]
    return {
        "losses": (loss_id,),
        "hazards": _sorted_ids(hazards),
        "ucas": tuple(
            sorted(set(ucas), key=lambda u: (identifier_sort_key(u[0]), u[1].index))
        ),
        "control_actions": _sorted_ids(actions),
        "constraints": _sorted_ids(constraints),
    }


def oracle_trace_up(model: MissionModel, action_id: str) -> dict[str, tuple]:
    losses = []
    hazards = []
    ucas = []
    for loss, hazard, uca, action in _link_tuples(model):
        if action.id != action_id:
            continue
        losses.append(loss.id)
        hazards.append(hazard.id)
        ucas.append((uca.action, uca.category))
    # live UCAs and their hazards count even if a hazard maps to no loss
    for uca in model.ucas:
        if uca.action == action_id and not uca.justified_absent:
            ucas.append((uca.action, uca.category))
            hazards.extend(uca.hazards)
    constraints = [c.id for c in model.constraints if c.action == action_id]
    return {
        "losses": _sorted_ids(losses),
        "hazards": _sorted_ids(hazards),
        "ucas": tuple(
            sorted(set(ucas), key=lambda u: (identifier_sort_key(u[0]), u[1].index))
        ),
        "control_actions": (action_id,),
        "constraints": _sorted_ids(constraints),
    }


def oracle_coverage(model: MissionModel) -> list[tuple[str, object]]:
    """Complement of the populated cells, by brute-force double loop."""
    from stpasec.model import UcaCategory

    gaps = []
    for action in model.control_actions:
        for category in UcaCategory:
            populated = False
            for uca in model.ucas:
                if uca.action == action.id and uca.category is category:
                    populated = True
            if not populated:
                gaps.append((action.id, category))
    return gaps


def chain_as_ids(chain) -> dict[str, tuple]:
    return {
        "losses": tuple(l.id for l in chain.losses),
        "hazards": tuple(h.id for h in chain.hazards),
        "ucas": tuple((u.action, u.category) for u in chain.ucas),
        "control_actions": tuple(a.id for a in chain.control_actions),
        "constraints": tuple(c.id for c in chain.constraints),
    }
