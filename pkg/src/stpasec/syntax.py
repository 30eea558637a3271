"""Unresolved parse-tree nodes produced by the parser.

References between elements are still symbolic (:class:`Ref` carries the
name plus the span where it was written); the resolver checks them and
builds the immutable :class:`~stpasec.model.MissionModel`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Span, ZERO_SPAN
from .model import LoopElement, UcaCategory


@dataclass(frozen=True)
class Ref:
    name: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawLoss:
    id: Ref
    priority: int
    description: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawHazard:
    id: Ref
    name: str
    worst_case: str
    leads_to: tuple[Ref, ...]
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawLevel:
    id: Ref
    display_name: str
    is_environment: bool = False
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawUca:
    category: UcaCategory
    hazards: tuple[Ref, ...]
    context: str
    justified_absent: bool = False
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawAction:
    id: Ref
    title: str
    source: Ref
    target: Ref
    ucas: tuple[RawUca, ...] = ()
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawConstraint:
    id: Ref
    action: Ref
    text: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawScenario:
    id: Ref
    action: Ref
    category: UcaCategory
    element: LoopElement
    attack: str
    description: str
    span: Span = field(default=ZERO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawModel:
    mission_name: str
    mission_statement: str
    system_description: str
    losses: tuple[RawLoss, ...] = ()
    hazards: tuple[RawHazard, ...] = ()
    levels: tuple[RawLevel, ...] = ()
    actions: tuple[RawAction, ...] = ()
    constraints: tuple[RawConstraint, ...] = ()
    scenarios: tuple[RawScenario, ...] = ()
