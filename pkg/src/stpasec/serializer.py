"""Canonical ``.mas`` serializer.

Output is a pure function of the resolved model: two-space indentation,
blocks in methodology order, identifiers ascending, UCAs in fixed category
order, and strings quoted with ``\\"``, ``\\\\`` and ``\\n`` escapes. Applying
serialize to a reparse of its own output is byte-identical.
"""

from __future__ import annotations

from .model import MissionModel, UnsafeControlAction


def escape_string(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    )


def quote(text: str) -> str:
    return f'"{escape_string(text)}"'


def serialize(model: MissionModel) -> str:
    lines: list[str] = []
    lines.append(f"mission {quote(model.mission_name)} {{")
    lines.append(f"  statement: {quote(model.mission_statement)}")
    lines.append(f"  system: {quote(model.system_description)}")

    if model.losses:
        lines.append("")
        for loss in model.losses:
            lines.append(
                f"  loss {loss.id} priority {loss.priority} {quote(loss.description)}"
            )

    if model.hazards:
        lines.append("")
        for i, hazard in enumerate(model.hazards):
            if i:
                lines.append("")
            lines.append(f"  hazard {hazard.id} {quote(hazard.name)} {{")
            lines.append(f"    worst_case: {quote(hazard.worst_case_environment)}")
            lines.append(f"    leads_to: [{', '.join(hazard.leads_to)}]")
            lines.append("  }")

    if model.levels:
        lines.append("")
        for level in model.levels:
            suffix = " environment" if level.is_environment else ""
            lines.append(f"  level {level.id} {quote(level.display_name)}{suffix}")

    if model.control_actions:
        lines.append("")
        for i, action in enumerate(model.control_actions):
            if i:
                lines.append("")
            lines.append(
                f"  action {action.id} {quote(action.title)} "
                f"from {action.source_level} to {action.target_level} {{"
            )
            for uca in model.ucas_for(action.id):
                lines.extend(_uca_lines(uca))
            lines.append("  }")

    if model.constraints:
        lines.append("")
        for constraint in model.constraints:
            lines.append(
                f"  constraint {constraint.id} for {constraint.action} "
                f"{quote(constraint.text)}"
            )

    if model.scenarios:
        lines.append("")
        for i, scenario in enumerate(model.scenarios):
            if i:
                lines.append("")
            lines.append(f"  scenario {scenario.id} {{")
            lines.append(f"    uca: {scenario.action}/{scenario.category.keyword}")
            lines.append(f"    element: {scenario.element.keyword}")
            lines.append(f"    attack: {quote(scenario.attack_class)}")
            lines.append(f"    description: {quote(scenario.description)}")
            lines.append("  }")

    lines.append("}")
    return "\n".join(lines) + "\n"


def _uca_lines(uca: UnsafeControlAction) -> list[str]:
    if uca.justified_absent:
        return [f"    uca {uca.category.keyword} none {quote(uca.context)}"]
    return [
        f"    uca {uca.category.keyword} {{",
        f"      hazards: [{', '.join(uca.hazards)}]",
        f"      context: {quote(uca.context)}",
        "    }",
    ]
