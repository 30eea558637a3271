"""Recursive-descent parser for ``.mas`` mission files.

The grammar is a single ``mission`` block whose body follows the order in
which an analysis is constructed: statement and system text, then losses,
hazards, levels, control actions (with their UCA cells), constraints, and
causal scenarios. Element blocks may be interleaved; the canonical
serializer restores the standard order.

On an error the parser reports a diagnostic and re-synchronizes at the next
element boundary, so several mistakes are reported in one run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, sort_key
from .lexer import Token, TokenKind, tokenize
from .model import (
    CATEGORY_KEYWORDS,
    LoopElement,
    UcaCategory,
    is_valid_identifier,
)
from .syntax import (
    RawAction,
    RawConstraint,
    RawHazard,
    RawLevel,
    RawLoss,
    RawModel,
    RawScenario,
    RawUca,
    Ref,
)

_ELEMENT_KEYWORDS = ("loss", "hazard", "level", "action", "constraint", "scenario")


@dataclass(frozen=True)
class ParseResult:
    """Either a raw model (no diagnostics) or the diagnostics explaining why not."""

    raw: RawModel | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.raw is not None


class _Recover(Exception):
    """Internal signal: a diagnostic was recorded, skip to a safe boundary."""


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0
        self.depth = 0  # consumed-brace nesting depth
        self.diagnostics: list[Diagnostic] = []

    # -- token plumbing ------------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.cur
        if token.kind is not TokenKind.EOF:
            self.pos += 1
            if token.kind is TokenKind.PUNCT:
                if token.text == "{":
                    self.depth += 1
                elif token.text == "}":
                    self.depth -= 1
        return token

    def at_keyword(self, word: str) -> bool:
        return self.cur.kind is TokenKind.KEYWORD and self.cur.text == word

    def at_punct(self, ch: str) -> bool:
        return self.cur.kind is TokenKind.PUNCT and self.cur.text == ch

    def error(self, code: str, message: str, token: Token | None = None) -> _Recover:
        token = token or self.cur
        self.diagnostics.append(Diagnostic(code, message, token.span))
        return _Recover()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            raise self.error("P003", f"expected `{word}`, found {self.cur.describe()}")
        return self.advance()

    def expect_punct(self, ch: str) -> Token:
        if not self.at_punct(ch):
            raise self.error("P003", f"expected `{ch}`, found {self.cur.describe()}")
        return self.advance()

    def expect_string(self, what: str) -> str:
        if self.cur.kind is not TokenKind.STRING:
            raise self.error("P003", f"expected {what} string, found {self.cur.describe()}")
        return self.advance().value

    def expect_element_id(self) -> Ref:
        token = self.cur
        if token.kind is not TokenKind.IDENTIFIER or not is_valid_identifier(token.text):
            raise self.error(
                "P003",
                "expected an identifier like `L1` or `CA1.4`, found " + token.describe(),
            )
        self.advance()
        return Ref(token.text, token.span)

    def expect_name_ref(self, what: str) -> Ref:
        token = self.cur
        if token.kind is not TokenKind.IDENTIFIER:
            raise self.error("P003", f"expected {what} name, found {token.describe()}")
        self.advance()
        return Ref(token.text, token.span)

    def expect_field(self, name: str, block: str) -> None:
        """Consume ``name :`` or report the field as missing."""
        if not self.at_keyword(name):
            raise self.error("P005", f"missing required field `{name}` in {block} block")
        self.advance()
        self.expect_punct(":")

    def sync_to_depth(self, depth: int) -> None:
        """Skip forward until back at `depth` and looking at an element
        keyword or a closing brace. Never consumes the closing brace at
        `depth`, so the enclosing block still terminates normally."""
        while self.cur.kind is not TokenKind.EOF:
            if self.depth > depth:
                self.advance()
                continue
            if self.at_punct("}"):
                return
            if self.cur.kind is TokenKind.KEYWORD and self.cur.text in _ELEMENT_KEYWORDS:
                return
            self.advance()

    # -- grammar -------------------------------------------------------------

    def parse_model(self) -> RawModel | None:
        if self.cur.kind is TokenKind.EOF:
            self.diagnostics.append(
                Diagnostic("P005", "missing `mission` block", self.cur.span)
            )
            return None
        try:
            self.expect_keyword("mission")
            name = self.expect_string("mission name")
            self.expect_punct("{")
        except _Recover:
            return None
        body_depth = self.depth

        statement = self.parse_header_field("statement", body_depth)
        system = self.parse_header_field("system", body_depth)

        losses: list[RawLoss] = []
        hazards: list[RawHazard] = []
        levels: list[RawLevel] = []
        actions: list[RawAction] = []
        constraints: list[RawConstraint] = []
        scenarios: list[RawScenario] = []

        while True:
            if self.at_punct("}"):
                self.advance()
                break
            if self.cur.kind is TokenKind.EOF:
                self.diagnostics.append(
                    Diagnostic(
                        "P003",
                        "unexpected end of file, expected an element block or `}`",
                        self.cur.span,
                    )
                )
                break
            try:
                if self.at_keyword("loss"):
                    losses.append(self.parse_loss())
                elif self.at_keyword("hazard"):
                    hazards.append(self.parse_hazard())
                elif self.at_keyword("level"):
                    levels.append(self.parse_level())
                elif self.at_keyword("action"):
                    actions.append(self.parse_action())
                elif self.at_keyword("constraint"):
                    constraints.append(self.parse_constraint())
                elif self.at_keyword("scenario"):
                    scenarios.append(self.parse_scenario())
                else:
                    raise self.error(
                        "P003",
                        "expected one of `loss`, `hazard`, `level`, `action`, "
                        f"`constraint`, `scenario` or `}}`, found {self.cur.describe()}",
                    )
            except _Recover:
                self.sync_to_depth(body_depth)

        if self.cur.kind is not TokenKind.EOF:
            self.diagnostics.append(
                Diagnostic(
                    "P003",
                    f"expected end of file after mission block, found {self.cur.describe()}",
                    self.cur.span,
                )
            )

        if self.diagnostics:
            return None
        return RawModel(
            mission_name=name,
            mission_statement=statement,
            system_description=system,
            losses=tuple(losses),
            hazards=tuple(hazards),
            levels=tuple(levels),
            actions=tuple(actions),
            constraints=tuple(constraints),
            scenarios=tuple(scenarios),
        )

    def parse_header_field(self, name: str, body_depth: int) -> str:
        """`statement:` / `system:` lines at the top of the mission block.

        A missing field is reported without consuming anything, so the other
        header field and the element blocks still parse.
        """
        if not self.at_keyword(name):
            self.diagnostics.append(
                Diagnostic(
                    "P005",
                    f"missing required field `{name}` in mission block",
                    self.cur.span,
                )
            )
            return ""
        self.advance()
        try:
            self.expect_punct(":")
            return self.expect_string(name)
        except _Recover:
            self.sync_to_depth(body_depth)
            return ""

    def parse_loss(self) -> RawLoss:
        start = self.expect_keyword("loss")
        ident = self.expect_element_id()
        self.expect_keyword("priority")
        if self.cur.kind is not TokenKind.INTEGER or self.cur.value < 1:
            raise self.error(
                "P003", f"expected a positive integer priority, found {self.cur.describe()}"
            )
        priority = self.advance().value
        description = self.expect_string("loss description")
        return RawLoss(ident, priority, description, start.span)

    def parse_hazard(self) -> RawHazard:
        start = self.expect_keyword("hazard")
        ident = self.expect_element_id()
        name = self.expect_string("hazard name")
        self.expect_punct("{")
        self.expect_field("worst_case", "hazard")
        worst_case = self.expect_string("worst_case")
        self.expect_field("leads_to", "hazard")
        leads_to = self.parse_ref_list(allow_empty=True)
        self.expect_punct("}")
        return RawHazard(ident, name, worst_case, leads_to, start.span)

    def parse_ref_list(self, allow_empty: bool) -> tuple[Ref, ...]:
        self.expect_punct("[")
        if self.at_punct("]") and allow_empty:
            self.advance()
            return ()
        refs = [self.expect_element_id()]
        while self.at_punct(","):
            self.advance()
            refs.append(self.expect_element_id())
        self.expect_punct("]")
        return tuple(refs)

    def parse_level(self) -> RawLevel:
        start = self.expect_keyword("level")
        ident = self.expect_name_ref("level")
        display = self.expect_string("level display name")
        is_environment = False
        if self.at_keyword("environment"):
            self.advance()
            is_environment = True
        return RawLevel(ident, display, is_environment, start.span)

    def parse_action(self) -> RawAction:
        start = self.expect_keyword("action")
        ident = self.expect_element_id()
        title = self.expect_string("control action title")
        self.expect_keyword("from")
        source = self.expect_name_ref("source level")
        self.expect_keyword("to")
        target = self.expect_name_ref("target level")
        self.expect_punct("{")
        ucas: list[RawUca] = []
        while not self.at_punct("}"):
            if self.cur.kind is TokenKind.EOF:
                raise self.error("P003", "unexpected end of file inside action block")
            ucas.append(self.parse_uca())
        self.advance()
        return RawAction(ident, title, source, target, tuple(ucas), start.span)

    def parse_uca(self) -> RawUca:
        start = self.expect_keyword("uca")
        category = self.expect_category()
        if self.at_keyword("none"):
            self.advance()
            justification = self.expect_string("justification")
            return RawUca(category, (), justification, True, start.span)
        self.expect_punct("{")
        self.expect_field("hazards", "uca")
        hazards = self.parse_ref_list(allow_empty=False)
        self.expect_field("context", "uca")
        context = self.expect_string("context")
        self.expect_punct("}")
        return RawUca(category, hazards, context, False, start.span)

    def expect_category(self) -> UcaCategory:
        token = self.cur
        if not (token.kind is TokenKind.KEYWORD and token.text in CATEGORY_KEYWORDS):
            legal = ", ".join(f"`{kw}`" for kw in CATEGORY_KEYWORDS)
            raise self.error(
                "P004",
                f"unknown UCA category {token.describe()}; expected one of {legal}",
            )
        return UcaCategory.from_keyword(self.advance().text)

    def parse_constraint(self) -> RawConstraint:
        start = self.expect_keyword("constraint")
        ident = self.expect_element_id()
        self.expect_keyword("for")
        action = self.expect_element_id()
        text = self.expect_string("constraint text")
        return RawConstraint(ident, action, text, start.span)

    def parse_scenario(self) -> RawScenario:
        start = self.expect_keyword("scenario")
        ident = self.expect_element_id()
        self.expect_punct("{")
        self.expect_field("uca", "scenario")
        action = self.expect_element_id()
        self.expect_punct("/")
        category = self.expect_category()
        self.expect_field("element", "scenario")
        element_token = self.cur
        try:
            element = LoopElement.from_keyword(element_token.text)
        except KeyError:
            raise self.error(
                "P003",
                f"expected a control-loop element name, found {element_token.describe()}",
            ) from None
        self.advance()
        self.expect_field("attack", "scenario")
        attack = self.expect_string("attack class")
        self.expect_field("description", "scenario")
        description = self.expect_string("scenario description")
        self.expect_punct("}")
        return RawScenario(ident, action, category, element, attack, description, start.span)


def parse(source: str) -> ParseResult:
    """Parse ``.mas`` source text into an unresolved model.

    Identical source bytes always yield identical diagnostics in identical
    order. A result with diagnostics carries no model.
    """
    tokens, lex_diagnostics = tokenize(source)
    if lex_diagnostics:
        return ParseResult(None, sorted(lex_diagnostics, key=sort_key))
    parser = _Parser(tokens)
    raw = parser.parse_model()
    diagnostics = sorted(parser.diagnostics, key=sort_key)
    if diagnostics:
        return ParseResult(None, diagnostics)
    return ParseResult(raw, [])
