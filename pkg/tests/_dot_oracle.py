"""Independent DOT grammar checker built on pyparsing.

Covers the directed-graph subset the emitters target: ``digraph ID { ... }``
with node statements, edge statements, attribute lists, and quoted strings
with backslash escapes. Parsing failures raise; the structured result
carries nodes, edges and their attributes for fidelity assertions.
"""

from __future__ import annotations

from dataclasses import dataclass

import pyparsing as pp


@dataclass
class DotGraph:
    name: str
    nodes: dict[str, dict[str, str]]
    edges: list[tuple[str, str, dict[str, str]]]


def _grammar() -> pp.ParserElement:
    identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_")
    number = pp.Regex(r"-?[0-9]+(\.[0-9]+)?")
    quoted = pp.QuotedString('"', escChar="\\", unquoteResults=True)
    atom = quoted | identifier | number

    attr = pp.Group(atom("key") + pp.Suppress("=") + atom("value"))
    attr_list = pp.Suppress("[") + pp.Optional(pp.DelimitedList(attr, delim=pp.oneOf(", ;"))) + pp.Suppress("]")

    node_stmt = pp.Group(atom("node") + pp.Group(pp.Optional(attr_list))("attrs"))
    edge_stmt = pp.Group(
        atom("source")
        + pp.Suppress("->")
        + atom("target")
        + pp.Group(pp.Optional(attr_list))("attrs")
    )
    graph_attr = pp.Group(atom("key") + pp.Suppress("=") + atom("value"))

    statement = (edge_stmt("edge*") | graph_attr("gattr*") | node_stmt("node_decl*")) + pp.Suppress(
        pp.Optional(";")
    )
    graph = (
        pp.Suppress(pp.Keyword("digraph"))
        + atom("name")
        + pp.Suppress("{")
        + pp.ZeroOrMore(statement)
        + pp.Suppress("}")
    )
    return graph


_GRAMMAR = _grammar()


def parse_dot(text: str) -> DotGraph:
    """Parse or raise pp.ParseException. Node set includes edge endpoints."""
    result = _GRAMMAR.parse_string(text, parse_all=True)
    nodes: dict[str, dict[str, str]] = {}
    edges: list[tuple[str, str, dict[str, str]]] = []
    for declared in result.get("node_decl", []):
        attrs = {pair["key"]: pair["value"] for pair in declared["attrs"]}
        nodes[declared["node"]] = attrs
    for edge in result.get("edge", []):
        attrs = {pair["key"]: pair["value"] for pair in edge["attrs"]}
        edges.append((edge["source"], edge["target"], attrs))
        nodes.setdefault(edge["source"], {})
        nodes.setdefault(edge["target"], {})
    return DotGraph(result["name"], nodes, edges)
