"""Mission-aware STPA-Sec modeling toolkit.

A declarative ``.mas`` language for mission models (losses, hazards,
hierarchical control structure, unsafe control actions, constraints, causal
scenarios) with validation, traceability, criticality ranking, report
emitters, and a local HTTP service for live War Room elicitation.
"""

from .analysis import (
    CoverageGap,
    CriticalityScore,
    MatrixCell,
    TraceChain,
    UcaMatrix,
    UnknownIdentifierError,
    category_coverage,
    criticality_rank,
    scenario_check,
    scenario_skeletons,
    trace_down,
    trace_up,
    uca_matrix,
    validate,
)
from .diagnostics import CATALOG, Diagnostic, Severity, Span
from .model import (
    CausalScenario,
    ControlAction,
    FunctionalLevel,
    Hazard,
    LoopElement,
    Loss,
    MissionModel,
    SafetyConstraint,
    UcaCategory,
    UnsafeControlAction,
    loss_weight,
)
from .parser import ParseResult, parse
from .report import Document, emit_hierarchy_dot, emit_loop_dot, emit_tables, emit_trace_report
from .resolver import LoadError, ResolveResult, load_model, resolve
from .serializer import serialize

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "CausalScenario",
    "ControlAction",
    "CoverageGap",
    "CriticalityScore",
    "Diagnostic",
    "Document",
    "FunctionalLevel",
    "Hazard",
    "LoadError",
    "LoopElement",
    "Loss",
    "MatrixCell",
    "MissionModel",
    "ParseResult",
    "ResolveResult",
    "SafetyConstraint",
    "Severity",
    "Span",
    "TraceChain",
    "UcaCategory",
    "UcaMatrix",
    "UnknownIdentifierError",
    "UnsafeControlAction",
    "category_coverage",
    "criticality_rank",
    "emit_hierarchy_dot",
    "emit_loop_dot",
    "emit_tables",
    "emit_trace_report",
    "load_model",
    "loss_weight",
    "parse",
    "resolve",
    "scenario_check",
    "scenario_skeletons",
    "serialize",
    "trace_down",
    "trace_up",
    "uca_matrix",
    "validate",
]
