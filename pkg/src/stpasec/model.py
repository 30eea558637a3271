"""Domain types of the mission-aware hazard analysis methodology.

The aggregate root is :class:`MissionModel`: unacceptable losses, hazards,
the hierarchical control structure (functional levels plus control actions),
unsafe control actions, safety constraints, and causal scenarios. Models are
immutable once resolved; every analysis is a pure function over them.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .diagnostics import Span, ZERO_SPAN

#: Element identifiers: letters, then digits, with optional dotted numeric
#: suffixes (L1, H3, CA1.4, SC1.2, S1). Comparison is case-sensitive.
IDENTIFIER_RE = re.compile(r"[A-Za-z]+[0-9]+(?:\.[0-9]+)*\Z")

#: Functional-level names are ordinary word tokens (operator, servos_payload).
LEVEL_ID_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def normalize_identifier(text: str) -> str:
    """Canonicalize an identifier by dropping all whitespace ("CA 1.1" -> "CA1.1")."""
    return "".join(text.split())


def is_valid_identifier(text: str) -> bool:
    return bool(IDENTIFIER_RE.match(text))


def identifier_sort_key(identifier: str) -> tuple[str, tuple[int, ...]]:
    """Numeric-aware ordering key so CA1.10 sorts after CA1.2."""
    match = re.match(r"([A-Za-z]+)([0-9]+(?:\.[0-9]+)*)\Z", identifier)
    if match is None:
        return (identifier, ())
    return (match.group(1), tuple(int(part) for part in match.group(2).split(".")))


class UcaCategory(enum.Enum):
    """The four circumstances under which providing/withholding a control
    action creates a hazard. Member order is the fixed canonical order."""

    NOT_PROVIDED = "not_provided"
    PROVIDED = "provided"
    WRONG_TIMING_OR_ORDER = "wrong_timing"
    WRONG_DURATION = "wrong_duration"

    @property
    def keyword(self) -> str:
        """The DSL keyword for this category."""
        return self.value

    @property
    def index(self) -> int:
        return _CATEGORY_INDEX[self]

    @classmethod
    def from_keyword(cls, keyword: str) -> "UcaCategory":
        return cls(keyword)


_CATEGORY_INDEX = {category: i for i, category in enumerate(UcaCategory)}

CATEGORY_KEYWORDS = tuple(category.keyword for category in UcaCategory)


class LoopElement(enum.Enum):
    """The fifteen generic control-loop entities, with their diagram ordinals.

    Scenarios attribute an attack mechanism to one of these entities
    (e.g. a denial of service lands on the sensor).
    """

    CONTROLLER = 1
    ACTUATOR = 2
    CONTROLLED_PROCESS = 3
    SENSOR = 4
    PROCESS_MODEL = 5
    CONTROL_ALGORITHM = 6
    CONTROL_ACTION_LINK = 7
    FEEDBACK_TO_HIGHER = 8
    CONTROL_INPUT = 9
    CONTROLLER_OUTPUT = 10
    EXTERNAL_INPUT = 11
    ALTERNATE_CONTROL_ACTIONS = 12
    EXTERNAL_PROCESS_INPUT = 13
    PROCESS_DISTURBANCE = 14
    PROCESS_OUTPUT = 15

    @property
    def ordinal(self) -> int:
        return self.value

    @property
    def keyword(self) -> str:
        """The snake_case DSL keyword for this entity."""
        return self.name.lower()

    @property
    def label(self) -> str:
        return _LOOP_LABELS[self]

    @classmethod
    def from_keyword(cls, keyword: str) -> "LoopElement":
        return _LOOP_BY_KEYWORD[keyword]


_LOOP_LABELS = {
    LoopElement.CONTROLLER: "Controller",
    LoopElement.ACTUATOR: "Actuator",
    LoopElement.CONTROLLED_PROCESS: "Controlled Process",
    LoopElement.SENSOR: "Sensor",
    LoopElement.PROCESS_MODEL: "Process Model",
    LoopElement.CONTROL_ALGORITHM: "Control Algorithm",
    LoopElement.CONTROL_ACTION_LINK: "Control Action",
    LoopElement.FEEDBACK_TO_HIGHER: "Feedback to higher level controller",
    LoopElement.CONTROL_INPUT: "Control input (setpoint) or other commands",
    LoopElement.CONTROLLER_OUTPUT: "Controller output",
    LoopElement.EXTERNAL_INPUT: "External input",
    LoopElement.ALTERNATE_CONTROL_ACTIONS: "Alternate control actions",
    LoopElement.EXTERNAL_PROCESS_INPUT: "External process input",
    LoopElement.PROCESS_DISTURBANCE: "Process disturbance",
    LoopElement.PROCESS_OUTPUT: "Process output",
}

_LOOP_BY_KEYWORD = {element.keyword: element for element in LoopElement}

ELEMENT_KEYWORDS = tuple(element.keyword for element in LoopElement)


@dataclass(frozen=True)
class Loss:
    """An unacceptable mission outcome. priority 1 is the most severe."""

    id: str
    priority: int
    description: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Hazard:
    """A system state that, in its worst-case environment, can produce losses."""

    id: str
    name: str
    worst_case_environment: str
    leads_to: tuple[str, ...]
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class FunctionalLevel:
    """One tier of the hierarchical control structure. rank 0 is the top."""

    id: str
    display_name: str
    rank: int
    is_environment: bool
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class ControlAction:
    """A command issued from one functional level to the level directly below."""

    id: str
    title: str
    source_level: str
    target_level: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class UnsafeControlAction:
    """One cell of the hazard-action table: a control action paired with one
    of the four categories, the hazards it raises, and the analyst's context.

    ``justified_absent`` records a category that was considered and ruled
    out; its context holds the justification and its hazard list is empty.
    """

    action: str
    category: UcaCategory
    hazards: tuple[str, ...]
    context: str
    justified_absent: bool = False
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)

    @property
    def key(self) -> tuple[str, UcaCategory]:
        return (self.action, self.category)


@dataclass(frozen=True)
class SafetyConstraint:
    """An imperative "shall" requirement derived for a control action."""

    id: str
    action: str
    text: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class CausalScenario:
    """A concrete mechanism by which a UCA occurs, attributed to a loop entity."""

    id: str
    action: str
    category: UcaCategory
    element: LoopElement
    attack_class: str
    description: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class MissionModel:
    """Resolved, immutable aggregate of a mission analysis.

    All collections are held in canonical order (identifiers ascending,
    levels by rank, UCAs by action then category), so structural equality
    is plain ``==`` and serialization is deterministic.
    """

    mission_name: str
    mission_statement: str
    system_description: str
    losses: tuple[Loss, ...] = ()
    hazards: tuple[Hazard, ...] = ()
    levels: tuple[FunctionalLevel, ...] = ()
    control_actions: tuple[ControlAction, ...] = ()
    ucas: tuple[UnsafeControlAction, ...] = ()
    constraints: tuple[SafetyConstraint, ...] = ()
    scenarios: tuple[CausalScenario, ...] = ()

    def __post_init__(self) -> None:
        index: dict[str, object] = {}
        for group in (
            self.losses,
            self.hazards,
            self.levels,
            self.control_actions,
            self.constraints,
            self.scenarios,
        ):
            for element in group:
                index[element.id] = element
        ucas_by_action: dict[str, tuple[UnsafeControlAction, ...]] = {}
        for uca in self.ucas:
            ucas_by_action[uca.action] = ucas_by_action.get(uca.action, ()) + (uca,)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_ucas_by_action", ucas_by_action)

    # -- lookup ------------------------------------------------------------

    def lookup(self, identifier: str):
        """The element with that id, or None. Whitespace is normalized,
        case is significant ("ca1.1" never matches "CA1.1")."""
        return self._index.get(normalize_identifier(identifier))

    def loss(self, identifier: str) -> Loss:
        return self._typed(identifier, Loss)

    def hazard(self, identifier: str) -> Hazard:
        return self._typed(identifier, Hazard)

    def level(self, identifier: str) -> FunctionalLevel:
        return self._typed(identifier, FunctionalLevel)

    def action(self, identifier: str) -> ControlAction:
        return self._typed(identifier, ControlAction)

    def _typed(self, identifier, kind):
        element = self.lookup(identifier)
        if not isinstance(element, kind):
            raise KeyError(f"{identifier!r} does not name a {kind.__name__}")
        return element

    # -- structure helpers ---------------------------------------------------

    def ucas_for(self, action_id: str) -> tuple[UnsafeControlAction, ...]:
        return self._ucas_by_action.get(action_id, ())

    def uca_for(self, action_id: str, category: UcaCategory) -> UnsafeControlAction | None:
        for uca in self.ucas_for(action_id):
            if uca.category is category:
                return uca
        return None

    def live_ucas_for(self, action_id: str) -> tuple[UnsafeControlAction, ...]:
        return tuple(u for u in self.ucas_for(action_id) if not u.justified_absent)

    def environment_level(self) -> FunctionalLevel | None:
        for level in self.levels:
            if level.is_environment:
                return level
        return None

    def constraints_for(self, action_id: str) -> tuple[SafetyConstraint, ...]:
        return tuple(c for c in self.constraints if c.action == action_id)


def loss_weight(model: MissionModel, loss_id: str) -> int:
    """Ordinal weight of a loss: the priority-1 loss weighs most.

    Computed from the loss's rank among the model's priorities, which equals
    ``len(losses) - priority + 1`` whenever priorities are the usual 1..n and
    stays positive and strictly decreasing even when they are sparse.
    """
    loss = model.loss(loss_id)
    ordered = sorted(entry.priority for entry in model.losses)
    return len(ordered) - ordered.index(loss.priority)


def lookup(model: MissionModel, identifier: str):
    """Module-level alias for :meth:`MissionModel.lookup`."""
    return model.lookup(identifier)
