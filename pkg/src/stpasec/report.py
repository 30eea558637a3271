"""Deterministic document emitters.

The four methodology tables (losses, hazards, UCA matrix, constraints) in
GitHub-pipe Markdown and RFC-4180-quoted CSV, the control hierarchy and the
generic control loop as DOT digraphs, and trace reports. Identical models
always yield byte-identical documents; all line endings are LF.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .analysis import TraceChain, uca_matrix
from .model import LoopElement, MissionModel, UcaCategory

#: Markdown gap-cell marker; CSV renders gaps as empty fields.
GAP_MARKER = "\u2014"

_EM_DASH = "\u2014"

MATRIX_HEADERS = (
    "Control Action",
    "Not Providing Causes Hazard",
    "Providing Causes Hazard",
    "Incorrect Timing or Order",
    "Stopped Too Early or Applied Too Long",
)


@dataclass(frozen=True)
class Document:
    """A rendered artifact. The body ends with exactly one LF."""

    name: str
    format: str  # "markdown" | "csv" | "dot"
    body: str

    def __post_init__(self) -> None:
        if not self.body.endswith("\n") or self.body.endswith("\n\n"):
            raise ValueError("document body must end with exactly one newline")
        if "\r" in self.body:
            raise ValueError("document line endings must be LF")


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", "<br>")


def _md_table(headers: tuple[str, ...], rows: list[tuple[str, ...]]) -> str:
    lines = [
        "| " + " | ".join(_md_cell(h) for h in headers) + " |",
        "| " + " | ".join("---" for _ in headers) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_md_cell(cell) for cell in row) + " |")
    return "\n".join(lines) + "\n"


def _csv_table(headers: tuple[str, ...], rows: list[tuple[str, ...]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(headers)
    writer.writerows(rows)
    return buffer.getvalue()


def _table(name: str, fmt: str, headers: tuple[str, ...], rows: list[tuple[str, ...]]) -> Document:
    if fmt == "markdown":
        return Document(name, fmt, _md_table(headers, rows))
    if fmt == "csv":
        return Document(name, fmt, _csv_table(headers, rows))
    raise ValueError(f"unsupported table format {fmt!r}")


def _action_label(model: MissionModel, action_id: str) -> str:
    return f"{action_id}{_EM_DASH}{model.action(action_id).title}"


def _uca_cell_text(cell) -> str:
    if cell.is_gap:
        return ""
    if cell.is_justified_absent:
        return f"none: {cell.uca.context}"
    return f"{', '.join(cell.uca.hazards)}: {cell.uca.context}"


def emit_tables(model: MissionModel, fmt: str) -> list[Document]:
    """The four methodology tables, row order ascending by identifier."""
    losses_rows = [(loss.id, loss.description) for loss in model.losses]
    losses = _table("losses", fmt, ("Unacceptable Loss", "Description"), losses_rows)

    hazard_rows = []
    for hazard in model.hazards:
        associated = ", ".join(hazard.leads_to)
        if hazard.leads_to:
            described = "; ".join(
                model.loss(loss_id).description for loss_id in hazard.leads_to
            )
            associated = f"{associated}: {described}"
        hazard_rows.append(
            (
                f"{hazard.id}{_EM_DASH}{hazard.name}",
                hazard.worst_case_environment,
                associated,
            )
        )
    hazards = _table(
        "hazards",
        fmt,
        ("Hazard", "Worst-case Environment", "Associated Losses"),
        hazard_rows,
    )

    matrix = uca_matrix(model)
    gap = GAP_MARKER if fmt == "markdown" else ""
    matrix_rows = []
    for action_id in matrix.rows:
        cells = [
            gap if cell.is_gap else _uca_cell_text(cell)
            for cell in matrix.row_cells(action_id)
        ]
        matrix_rows.append((_action_label(model, action_id), *cells))
    matrix_doc = _table("uca_matrix", fmt, MATRIX_HEADERS, matrix_rows)

    constraint_rows = [
        (_action_label(model, constraint.action), constraint.text)
        for constraint in model.constraints
    ]
    constraints = _table(
        "constraints", fmt, ("Control Action", "Safety Constraint"), constraint_rows
    )

    return [losses, hazards, matrix_doc, constraints]


# -- DOT emitters ---------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _dot_id(name: str) -> str:
    return f'"{_dot_escape(name)}"'


def emit_hierarchy_dot(model: MissionModel) -> Document:
    """The control hierarchy: one node per level top-to-bottom, a labeled
    control/feedback edge pair per adjacent pair of levels, and one
    unlabeled disturbance edge from the environment to the level above it."""
    lines = ["digraph hierarchy {", "  rankdir=TB;"]
    for level in model.levels:
        lines.append(f"  {_dot_id(level.id)} [label={_dot_id(level.display_name)}];")
    for upper, lower in zip(model.levels, model.levels[1:]):
        lines.append(f"  {_dot_id(upper.id)} -> {_dot_id(lower.id)} [label=\"control\"];")
        lines.append(f"  {_dot_id(lower.id)} -> {_dot_id(upper.id)} [label=\"feedback\"];")
    environment = model.environment_level()
    if environment is not None and len(model.levels) > 1:
        above = model.levels[environment.rank - 1]
        lines.append(f"  {_dot_id(environment.id)} -> {_dot_id(above.id)};")
    lines.append("}")
    return Document("hierarchy", "dot", "\n".join(lines) + "\n")


#: Peripheral loop edges beyond the controller/actuator/process/sensor ring,
#: as (source, target) pairs in ordinal order of the peripheral entity.
_LOOP_PERIPHERALS = (
    (LoopElement.CONTROLLER, LoopElement.FEEDBACK_TO_HIGHER),
    (LoopElement.CONTROL_INPUT, LoopElement.CONTROLLER),
    (LoopElement.CONTROLLER, LoopElement.CONTROLLER_OUTPUT),
    (LoopElement.EXTERNAL_INPUT, LoopElement.CONTROLLER),
    (LoopElement.ALTERNATE_CONTROL_ACTIONS, LoopElement.CONTROLLED_PROCESS),
    (LoopElement.EXTERNAL_PROCESS_INPUT, LoopElement.CONTROLLED_PROCESS),
    (LoopElement.PROCESS_DISTURBANCE, LoopElement.CONTROLLED_PROCESS),
    (LoopElement.CONTROLLED_PROCESS, LoopElement.PROCESS_OUTPUT),
)

_LOOP_RING = (
    (LoopElement.CONTROLLER, LoopElement.ACTUATOR),
    (LoopElement.ACTUATOR, LoopElement.CONTROLLED_PROCESS),
    (LoopElement.CONTROLLED_PROCESS, LoopElement.SENSOR),
    (LoopElement.SENSOR, LoopElement.CONTROLLER),
)


def emit_loop_dot() -> Document:
    """The generic control loop: all fifteen entities with their ordinals,
    the controller-actuator-process-sensor ring, and the eight peripheral
    inputs, outputs and disturbance. Constant output."""
    lines = ["digraph control_loop {", "  rankdir=TB;"]
    for element in LoopElement:
        label = f"{element.ordinal}. {element.label}"
        lines.append(f"  {_dot_id(element.keyword)} [label={_dot_id(label)}];")
    for source, target in _LOOP_RING + _LOOP_PERIPHERALS:
        lines.append(f"  {_dot_id(source.keyword)} -> {_dot_id(target.keyword)};")
    lines.append("}")
    return Document("control_loop", "dot", "\n".join(lines) + "\n")


# -- trace reports ----------------------------------------------------------------


def _uca_label(uca) -> str:
    return f"{uca.action}/{uca.category.keyword}"


def _uca_detail(uca) -> str:
    if uca.justified_absent:
        return f"none: {uca.context}"
    return f"{', '.join(uca.hazards)}: {uca.context}"


def emit_trace_report(chain: TraceChain, fmt: str) -> Document:
    """Sections for the root, hazards, UCAs, actions, constraints and losses,
    each ascending by identifier, with `none` placeholders for empty ones."""
    root_detail = (
        chain.root.description if hasattr(chain.root, "description") else chain.root.title
    )
    if fmt == "markdown":
        lines = [f"# Trace for {chain.root.id} ({chain.direction})", ""]
        lines.append(f"Root: {chain.root.id}{_EM_DASH}{root_detail}")
        sections = [
            ("Hazards", [f"{h.id}{_EM_DASH}{h.name}" for h in chain.hazards]),
            (
                "Unsafe Control Actions",
                [f"{_uca_label(u)}{_EM_DASH}{_uca_detail(u)}" for u in chain.ucas],
            ),
            (
                "Control Actions",
                [f"{a.id}{_EM_DASH}{a.title}" for a in chain.control_actions],
            ),
            (
                "Constraints",
                [f"{c.id}{_EM_DASH}{c.text}" for c in chain.constraints],
            ),
            ("Losses", [f"{l.id}{_EM_DASH}{l.description}" for l in chain.losses]),
        ]
        for title, items in sections:
            lines.append("")
            lines.append(f"## {title}")
            if items:
                lines.extend(f"- {item}" for item in items)
            else:
                lines.append("none")
        return Document("trace", "markdown", "\n".join(lines) + "\n")

    if fmt == "csv":
        rows: list[tuple[str, str, str]] = [("root", chain.root.id, root_detail)]
        rows.extend(("hazard", h.id, h.name) for h in chain.hazards)
        rows.extend(("uca", _uca_label(u), _uca_detail(u)) for u in chain.ucas)
        rows.extend(("action", a.id, a.title) for a in chain.control_actions)
        rows.extend(("constraint", c.id, c.text) for c in chain.constraints)
        rows.extend(("loss", l.id, l.description) for l in chain.losses)
        return Document("trace", "csv", _csv_table(("section", "id", "detail"), rows))

    raise ValueError(f"unsupported trace format {fmt!r}")
