"""Command-line front door.

Exit codes: 0 success (warnings allowed unless --strict), 1 semantic errors
or warnings under --strict, 2 parse errors, 3 usage errors, 4 port in use.
Diagnostics go to standard error as ``file:line:col: severity[CODE]:
message``; documents go to standard output or ``--out``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import trace_down, trace_up, validate
from .diagnostics import Diagnostic, Severity
from .model import ControlAction, Loss, MissionModel
from .parser import parse
from .report import emit_hierarchy_dot, emit_loop_dot, emit_tables, emit_trace_report
from .resolver import resolve
from .serializer import serialize

_EXT = {"markdown": "md", "csv": "csv", "dot": "dot"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 3 instead of argparse's 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="stpasec", description=__doc__)
    commands = parser.add_subparsers(dest="command", metavar="command")

    def add(name: str, help_text: str, with_input: bool = True):
        sub = commands.add_parser(name, help=help_text)
        if with_input:
            sub.add_argument("input", type=Path, help=".mas model file")
        return sub

    check = add("check", "parse, resolve and validate a model")
    check.add_argument("--strict", action="store_true", help="treat warnings as failures")

    trace = add("trace", "trace a loss down or a control action up")
    trace.add_argument("--from", dest="root", required=True, metavar="ID")
    trace.add_argument("--format", choices=("markdown", "csv"), default="markdown")

    matrix = add("matrix", "print the UCA matrix")
    matrix.add_argument("--format", choices=("markdown", "csv"), default="markdown")

    report = add("report", "emit the four methodology tables")
    report.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    report.add_argument("--out", type=Path, help="write documents into this directory")

    graph = add("graph", "emit DOT graphs", with_input=False)
    graph.add_argument("input", type=Path, nargs="?", help=".mas model file")
    graph.add_argument("--loop", action="store_true", help="emit the generic control loop")
    graph.add_argument("--out", type=Path, help="write the document into this directory")

    fmt = add("fmt", "canonically format a model file")
    fmt.add_argument("--write", action="store_true", help="rewrite the file in place")

    serve = add("serve", "serve the model over HTTP for the War Room console")
    serve.add_argument("--port", type=int, default=8724)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--assets", type=Path, help="static asset directory for the console")

    return parser


def _render(diagnostics: list[Diagnostic], filename: str) -> None:
    for diagnostic in diagnostics:
        print(diagnostic.render(filename), file=sys.stderr)


def _load(path: Path) -> tuple[MissionModel | None, int]:
    """Read, parse and resolve; renders diagnostics and maps them to exit codes."""
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"stpasec: cannot read {path}: {exc}", file=sys.stderr)
        return None, 3
    parsed = parse(source)
    if not parsed.ok:
        _render(parsed.diagnostics, str(path))
        return None, 2
    resolved = resolve(parsed.raw)
    if not resolved.ok:
        _render(resolved.diagnostics, str(path))
        return None, 1
    return resolved.model, 0


def _emit(documents, out: Path | None) -> None:
    if out is None:
        sys.stdout.write("\n".join(doc.body for doc in documents))
        return
    out.mkdir(parents=True, exist_ok=True)
    for doc in documents:
        (out / f"{doc.name}.{_EXT[doc.format]}").write_text(doc.body, encoding="utf-8")


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"stpasec: {exc}", file=sys.stderr)
        return 3

    if args.command is None:
        print("stpasec: no command given (try `stpasec --help`)", file=sys.stderr)
        return 3

    try:
        return _dispatch(args)
    except _UsageError as exc:
        print(f"stpasec: {exc}", file=sys.stderr)
        return 3


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "graph":
        return _cmd_graph(args)
    if args.command == "serve":
        return _cmd_serve(args)

    model, code = _load(args.input)
    if model is None:
        return code
    filename = str(args.input)

    if args.command == "check":
        findings = validate(model)
        _render(findings, filename)
        if any(d.severity is Severity.ERROR for d in findings):
            return 1
        if args.strict and findings:
            return 1
        return 0

    if args.command == "trace":
        element = model.lookup(args.root)
        if isinstance(element, Loss):
            chain = trace_down(model, element.id)
        elif isinstance(element, ControlAction):
            chain = trace_up(model, element.id)
        else:
            print(
                f"stpasec: `{args.root}` does not name a loss or control action",
                file=sys.stderr,
            )
            return 1
        sys.stdout.write(emit_trace_report(chain, args.format).body)
        return 0

    if args.command == "matrix":
        documents = emit_tables(model, args.format)
        sys.stdout.write(next(d for d in documents if d.name == "uca_matrix").body)
        return 0

    if args.command == "report":
        _emit(emit_tables(model, args.format), args.out)
        return 0

    if args.command == "fmt":
        text = serialize(model)
        if args.write:
            args.input.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0

    raise _UsageError(f"unknown command `{args.command}`")


def _cmd_graph(args: argparse.Namespace) -> int:
    if args.loop:
        if args.input is not None:
            raise _UsageError("`graph --loop` takes no input file")
        _emit([emit_loop_dot()], args.out)
        return 0
    if args.input is None:
        raise _UsageError("`graph` needs a model file (or use --loop)")
    model, code = _load(args.input)
    if model is None:
        return code
    _emit([emit_hierarchy_dot(model)], args.out)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve

    if args.input.exists():
        model, code = _load(args.input)
        if model is None:
            return code
    return serve(args.input, args.port, host=args.host, assets=args.assets)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
