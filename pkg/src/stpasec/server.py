"""Local HTTP service for live War Room elicitation.

Serves the analysis API under ``/v1/`` and, optionally, the console's static
assets. Reads are lock-free against an immutable model snapshot; mutations
are applied one at a time and re-serialize the model canonically to the
backing ``.mas`` file before they are acknowledged (write-through). A failed
write rolls the in-memory model back.
"""

from __future__ import annotations

import errno
import json
import os
import sys
import threading
import urllib.parse
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any

from . import jsonio
from .analysis import (
    category_coverage,
    criticality_rank,
    trace_down,
    trace_up,
    uca_matrix,
    validate,
)
from .diagnostics import Severity
from .model import (
    CausalScenario,
    ControlAction,
    FunctionalLevel,
    Hazard,
    Loss,
    MissionModel,
    UcaCategory,
    normalize_identifier,
)
from .report import emit_hierarchy_dot, emit_loop_dot, emit_tables
from .resolver import load_model, raw_from_model, resolve
from .serializer import serialize
from .syntax import RawAction, RawModel


def skeleton_model() -> MissionModel:
    """The empty model a fresh War Room session starts from."""
    return MissionModel(mission_name="Untitled mission", mission_statement="", system_description="")


@dataclass(frozen=True)
class ApiResponse:
    status: int
    payload: Any


def _error(status: int, message: str, **extra: Any) -> ApiResponse:
    body = {"error": message}
    body.update(extra)
    return ApiResponse(status, body)


class ModelService:
    """Owns the current model snapshot and applies serialized mutations."""

    def __init__(self, model: MissionModel, path: Path | None) -> None:
        self._model = model
        self._path = path
        self._lock = threading.Lock()

    @classmethod
    def open(cls, path: Path | None) -> "ModelService":
        """Load the model from `path`, or start a skeleton if it is absent."""
        if path is None or not path.exists():
            return cls(skeleton_model(), path)
        model = load_model(path.read_text(encoding="utf-8"))
        return cls(model, path)

    @property
    def model(self) -> MissionModel:
        return self._model

    # -- reads -------------------------------------------------------------

    def get(self, route: str, query: dict[str, str]) -> ApiResponse:
        if route == "model":
            return ApiResponse(200, jsonio.model_payload(self._model))
        if route == "diagnostics":
            return ApiResponse(200, jsonio.diagnostics_payload(validate(self._model)))
        if route == "matrix":
            return ApiResponse(200, jsonio.matrix_payload(uca_matrix(self._model)))
        if route == "coverage":
            return ApiResponse(200, jsonio.coverage_payload(category_coverage(self._model)))
        if route == "criticality":
            return ApiResponse(200, jsonio.criticality_payload(criticality_rank(self._model)))
        if route == "export":
            return self._export(query.get("format", ""))
        if route.startswith("trace/"):
            return self._trace(route[len("trace/") :], query.get("direction"))
        return _error(404, f"unknown route `/v1/{route}`")

    def _trace(self, identifier: str, direction: str | None) -> ApiResponse:
        model = self._model
        element = model.lookup(identifier)
        if element is None:
            return _error(404, f"unknown identifier `{identifier}`")
        if direction is None:
            direction = "down" if isinstance(element, Loss) else "up"
        if direction == "down":
            if not isinstance(element, Loss):
                return _error(400, f"`{identifier}` does not name a loss; cannot trace down")
            return ApiResponse(200, jsonio.trace_payload(trace_down(model, element.id)))
        if direction == "up":
            if not isinstance(element, ControlAction):
                return _error(
                    400, f"`{identifier}` does not name a control action; cannot trace up"
                )
            return ApiResponse(200, jsonio.trace_payload(trace_up(model, element.id)))
        return _error(400, f"unknown trace direction `{direction}` (expected down or up)")

    def _export(self, fmt: str) -> ApiResponse:
        if fmt in ("markdown", "csv"):
            documents = emit_tables(self._model, fmt)
        elif fmt == "dot":
            documents = [emit_hierarchy_dot(self._model), emit_loop_dot()]
        else:
            return _error(400, f"unknown export format `{fmt}` (expected markdown, csv or dot)")
        return ApiResponse(
            200,
            {
                "documents": [
                    {"name": d.name, "format": d.format, "body": d.body} for d in documents
                ]
            },
        )

    # -- mutations -----------------------------------------------------------

    def add_element(self, body: Any) -> ApiResponse:
        if not isinstance(body, dict) or "kind" not in body:
            return _error(400, "element payload must be an object with a `kind` field")
        kind = body["kind"]
        try:
            parsed = jsonio.element_from_json(kind, body)
        except jsonio.PayloadError as exc:
            return _error(400, str(exc))
        with self._lock:
            raw = raw_from_model(self._model)
            try:
                mutated = _insert(raw, kind, parsed)
            except _MutationConflict as exc:
                return _error(exc.status, str(exc))
            return self._install(mutated)

    def replace_element(self, identifier: str, body: Any) -> ApiResponse:
        if not isinstance(body, dict):
            return _error(400, "element payload must be an object")
        with self._lock:
            target = self._find(identifier)
            if target is None:
                return _error(404, f"unknown element `{identifier}`")
            kind, key = target
            payload = dict(body)
            payload.setdefault("kind", kind)
            if payload["kind"] != kind:
                return _error(400, f"`{identifier}` is a {kind}, not a {payload['kind']}")
            try:
                parsed = jsonio.element_from_json(kind, payload)
            except jsonio.PayloadError as exc:
                return _error(400, str(exc))
            raw = _remove(raw_from_model(self._model), kind, key)
            try:
                mutated = _insert(raw, kind, parsed)
            except _MutationConflict as exc:
                return _error(exc.status, str(exc))
            return self._install(mutated)

    def delete_element(self, identifier: str) -> ApiResponse:
        with self._lock:
            target = self._find(identifier)
            if target is None:
                return _error(404, f"unknown element `{identifier}`")
            kind, key = target
            referrers = _referrers(self._model, kind, key)
            if referrers:
                return _error(
                    409,
                    f"`{identifier}` is referenced by {', '.join(referrers)}; "
                    "remove the references first",
                )
            mutated = _remove(raw_from_model(self._model), kind, key)
            return self._install(mutated)

    def _find(self, identifier: str):
        """Resolve a URL element id to (kind, key). UCAs are addressed as
        ``ACTION/category``."""
        ident = normalize_identifier(identifier)
        if "/" in ident:
            action_id, _, keyword = ident.partition("/")
            try:
                category = UcaCategory.from_keyword(keyword)
            except ValueError:
                return None
            if self._model.uca_for(action_id, category) is None:
                return None
            return ("uca", (action_id, category))
        element = self._model.lookup(ident)
        if element is None:
            return None
        kinds = {
            Loss: "loss",
            Hazard: "hazard",
            FunctionalLevel: "level",
            ControlAction: "action",
            CausalScenario: "scenario",
        }
        for cls, kind in kinds.items():
            if isinstance(element, cls):
                return (kind, element.id)
        return ("constraint", element.id)

    def _install(self, raw: RawModel) -> ApiResponse:
        """Resolve, gate on new validation errors, write through, swap."""
        previous = self._model
        resolved = resolve(raw)
        if not resolved.ok:
            duplicates = [d for d in resolved.diagnostics if d.code == "E102"]
            status = 409 if duplicates else 422
            return ApiResponse(
                status,
                {
                    "error": "model update rejected",
                    "diagnostics": jsonio.diagnostics_payload(resolved.diagnostics),
                },
            )
        before = {
            (d.code, d.message)
            for d in validate(previous)
            if d.severity is Severity.ERROR
        }
        introduced = [
            d
            for d in validate(resolved.model)
            if d.severity is Severity.ERROR and (d.code, d.message) not in before
        ]
        if introduced:
            return ApiResponse(
                422,
                {
                    "error": "element fails validation",
                    "diagnostics": jsonio.diagnostics_payload(introduced),
                },
            )

        text = serialize(resolved.model)
        # Reload from the canonical text so served spans match the file.
        fresh = load_model(text)
        if self._path is not None:
            try:
                self._write_through(text)
            except OSError as exc:
                return _error(500, f"write-through to {self._path} failed: {exc}")
        self._model = fresh
        return ApiResponse(200, jsonio.model_payload(fresh))

    def _write_through(self, text: str) -> None:
        tmp = self._path.with_name(self._path.name + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, self._path)


class _MutationConflict(Exception):
    def __init__(self, status: int, message: str) -> None:
        super().__init__(message)
        self.status = status


def _insert(raw: RawModel, kind: str, parsed) -> RawModel:
    if kind == "loss":
        return _replace_group(raw, losses=raw.losses + (parsed,))
    if kind == "hazard":
        return _replace_group(raw, hazards=raw.hazards + (parsed,))
    if kind == "level":
        return _replace_group(raw, levels=raw.levels + (parsed,))
    if kind == "action":
        return _replace_group(raw, actions=raw.actions + (parsed,))
    if kind == "constraint":
        return _replace_group(raw, constraints=raw.constraints + (parsed,))
    if kind == "scenario":
        return _replace_group(raw, scenarios=raw.scenarios + (parsed,))
    if kind == "uca":
        action_ref, uca = parsed
        actions = []
        found = False
        for action in raw.actions:
            if action.id.name == action_ref.name:
                found = True
                actions.append(
                    RawAction(
                        action.id,
                        action.title,
                        action.source,
                        action.target,
                        action.ucas + (uca,),
                        action.span,
                    )
                )
            else:
                actions.append(action)
        if not found:
            raise _MutationConflict(422, f"unknown control action `{action_ref.name}`")
        return _replace_group(raw, actions=tuple(actions))
    raise _MutationConflict(400, f"unknown element kind `{kind}`")


def _remove(raw: RawModel, kind: str, key) -> RawModel:
    if kind == "uca":
        action_id, category = key
        actions = tuple(
            RawAction(
                a.id,
                a.title,
                a.source,
                a.target,
                tuple(u for u in a.ucas if u.category is not category),
                a.span,
            )
            if a.id.name == action_id
            else a
            for a in raw.actions
        )
        return _replace_group(raw, actions=actions)
    groups = {
        "loss": "losses",
        "hazard": "hazards",
        "level": "levels",
        "action": "actions",
        "constraint": "constraints",
        "scenario": "scenarios",
    }
    group = groups[kind]
    remaining = tuple(e for e in getattr(raw, group) if e.id.name != key)
    return _replace_group(raw, **{group: remaining})


def _replace_group(raw: RawModel, **changes) -> RawModel:
    fields = {
        "mission_name": raw.mission_name,
        "mission_statement": raw.mission_statement,
        "system_description": raw.system_description,
        "losses": raw.losses,
        "hazards": raw.hazards,
        "levels": raw.levels,
        "actions": raw.actions,
        "constraints": raw.constraints,
        "scenarios": raw.scenarios,
    }
    fields.update(changes)
    return RawModel(**fields)


def _referrers(model: MissionModel, kind: str, key) -> list[str]:
    """Human-readable list of elements that reference the given one."""
    found: list[str] = []
    if kind == "loss":
        found.extend(
            f"hazard `{h.id}`" for h in model.hazards if key in h.leads_to
        )
    elif kind == "hazard":
        found.extend(
            f"UCA `{u.action}/{u.category.keyword}`"
            for u in model.ucas
            if key in u.hazards
        )
    elif kind == "level":
        found.extend(
            f"control action `{a.id}`"
            for a in model.control_actions
            if key in (a.source_level, a.target_level)
        )
    elif kind == "action":
        found.extend(f"UCA `{u.action}/{u.category.keyword}`" for u in model.ucas if u.action == key)
        found.extend(f"constraint `{c.id}`" for c in model.constraints if c.action == key)
        found.extend(f"scenario `{s.id}`" for s in model.scenarios if s.action == key)
    elif kind == "uca":
        action_id, category = key
        found.extend(
            f"scenario `{s.id}`"
            for s in model.scenarios
            if s.action == action_id and s.category is category
        )
    return found


# -- HTTP plumbing -----------------------------------------------------------------

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class _Handler(BaseHTTPRequestHandler):
    service: ModelService
    assets: Path | None = None
    protocol_version = "HTTP/1.1"

    def log_message(self, *args) -> None:  # quiet by default
        pass

    # -- helpers ------------------------------------------------------------

    def _send_json(self, response: ApiResponse) -> None:
        body = json.dumps(response.payload, ensure_ascii=False).encode("utf-8")
        self.send_response(response.status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> Any:
        length = int(self.headers.get("Content-Length") or 0)
        data = self.rfile.read(length) if length else b""
        if not data:
            raise jsonio.PayloadError("request body is empty")
        try:
            return json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise jsonio.PayloadError(f"request body is not valid JSON: {exc}") from exc

    def _route(self) -> tuple[str, dict[str, str]]:
        parsed = urllib.parse.urlsplit(self.path)
        query = {k: v[0] for k, v in urllib.parse.parse_qs(parsed.query).items()}
        return urllib.parse.unquote(parsed.path), query

    # -- verbs ---------------------------------------------------------------

    def do_GET(self) -> None:
        path, query = self._route()
        if path.startswith("/v1/"):
            self._send_json(self.service.get(path[len("/v1/") :], query))
            return
        self._serve_asset(path)

    def do_POST(self) -> None:
        path, _ = self._route()
        if path != "/v1/elements":
            self._send_json(_error(404, f"unknown route `{path}`"))
            return
        try:
            body = self._read_body()
        except jsonio.PayloadError as exc:
            self._send_json(_error(400, str(exc)))
            return
        self._send_json(self.service.add_element(body))

    def do_PUT(self) -> None:
        path, _ = self._route()
        if not path.startswith("/v1/elements/"):
            self._send_json(_error(404, f"unknown route `{path}`"))
            return
        identifier = path[len("/v1/elements/") :]
        try:
            body = self._read_body()
        except jsonio.PayloadError as exc:
            self._send_json(_error(400, str(exc)))
            return
        self._send_json(self.service.replace_element(identifier, body))

    def do_DELETE(self) -> None:
        path, _ = self._route()
        if not path.startswith("/v1/elements/"):
            self._send_json(_error(404, f"unknown route `{path}`"))
            return
        identifier = path[len("/v1/elements/") :]
        self._send_json(self.service.delete_element(identifier))

    # -- static assets --------------------------------------------------------

    def _serve_asset(self, path: str) -> None:
        if self.assets is None:
            self._send_json(_error(404, f"unknown route `{path}` (no assets directory configured)"))
            return
        relative = path.lstrip("/") or "index.html"
        target = (self.assets / relative).resolve()
        root = self.assets.resolve()
        if root not in target.parents and target != root:
            self._send_json(_error(404, "not found"))
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(_error(404, f"no such asset `{relative}`"))
            return
        data = target.read_bytes()
        self.send_response(200)
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(
    path: Path | None,
    port: int,
    host: str = "127.0.0.1",
    assets: Path | None = None,
) -> ThreadingHTTPServer:
    """Bind the service; raises OSError if the port is unavailable."""
    service = ModelService.open(path)
    handler = type("Handler", (_Handler,), {"service": service, "assets": assets})
    return ThreadingHTTPServer((host, port), handler)


def serve(
    path: Path | None,
    port: int,
    host: str = "127.0.0.1",
    assets: Path | None = None,
) -> int:
    """Run the service until interrupted. Returns a CLI exit code."""
    try:
        httpd = make_server(path, port, host, assets)
    except OSError as exc:
        if exc.errno in (errno.EADDRINUSE, errno.EACCES):
            print(f"port {port} is unavailable: {exc}", file=sys.stderr, flush=True)
            return 4
        raise
    with httpd:
        try:
            httpd.serve_forever()
        except KeyboardInterrupt:
            pass
    return 0
