"""Tokenizer for ``.mas`` mission files.

Whitespace and ``#`` comments are trivia. String literals are double-quoted,
single-line, and understand the escapes ``\\"``, ``\\\\`` and ``\\n``.
Word tokens absorb dotted numeric suffixes so ``CA1.4`` is one token.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diagnostics import Diagnostic, Span
from .model import CATEGORY_KEYWORDS, ELEMENT_KEYWORDS


class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    STRING = "string-literal"
    INTEGER = "integer"
    PUNCT = "punctuation"
    EOF = "end-of-file"


STRUCTURE_KEYWORDS = (
    "mission",
    "statement",
    "system",
    "loss",
    "priority",
    "hazard",
    "worst_case",
    "leads_to",
    "level",
    "environment",
    "action",
    "from",
    "to",
    "uca",
    "hazards",
    "context",
    "none",
    "constraint",
    "for",
    "scenario",
    "element",
    "attack",
    "description",
)

KEYWORDS = frozenset(STRUCTURE_KEYWORDS) | frozenset(CATEGORY_KEYWORDS) | frozenset(ELEMENT_KEYWORDS)

_PUNCT = frozenset("{}[]:,/")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span
    value: object = None

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of file"
        return f"{self.kind.value} `{self.text}`"


def _is_word_start(ch: str) -> bool:
    return ch.isascii() and ch.isalpha()


def _is_word_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


class _Scanner:
    """Character scanner tracking byte offset, line and column together."""

    def __init__(self, source: str) -> None:
        self.source = source
        self.pos = 0  # character index
        self.byte = 0
        self.line = 1
        self.column = 1

    @property
    def current(self) -> str | None:
        if self.pos >= len(self.source):
            return None
        return self.source[self.pos]

    def peek(self, ahead: int = 1) -> str | None:
        index = self.pos + ahead
        if index >= len(self.source):
            return None
        return self.source[index]

    def advance(self) -> str:
        ch = self.source[self.pos]
        self.pos += 1
        self.byte += len(ch.encode("utf-8"))
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def mark(self) -> tuple[int, int, int, int]:
        return (self.pos, self.byte, self.line, self.column)

    def span_from(self, mark: tuple[int, int, int, int]) -> Span:
        _, byte, line, column = mark
        return Span(byte, self.byte, line, column)

    def text_from(self, mark: tuple[int, int, int, int]) -> str:
        return self.source[mark[0] : self.pos]


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Lex the source into a token stream ending in an EOF token.

    Returns the tokens plus any P001/P002 diagnostics; on error the stream
    is still completed so offsets stay meaningful, but callers must treat a
    non-empty diagnostic list as failure.
    """
    scanner = _Scanner(source)
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []

    while True:
        ch = scanner.current
        if ch is None:
            break
        if ch in " \t\r\n":
            scanner.advance()
            continue
        if ch == "#":
            while scanner.current is not None and scanner.current != "\n":
                scanner.advance()
            continue

        mark = scanner.mark()
        if ch == '"':
            token, string_diags = _scan_string(scanner, mark)
            tokens.append(token)
            diagnostics.extend(string_diags)
        elif ch in _PUNCT:
            scanner.advance()
            tokens.append(Token(TokenKind.PUNCT, ch, scanner.span_from(mark)))
        elif ch.isdigit():
            while scanner.current is not None and scanner.current.isdigit():
                scanner.advance()
            text = scanner.text_from(mark)
            tokens.append(Token(TokenKind.INTEGER, text, scanner.span_from(mark), int(text)))
        elif _is_word_start(ch):
            _scan_word(scanner)
            text = scanner.text_from(mark)
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, text, scanner.span_from(mark)))
        else:
            scanner.advance()
            span = scanner.span_from(mark)
            if ch == "﻿" and mark[0] == 0:
                message = "byte-order mark not allowed; save the file as plain UTF-8"
            else:
                message = f"illegal character {ch!r}"
            diagnostics.append(Diagnostic("P002", message, span))

    eof_span = Span(scanner.byte, scanner.byte, scanner.line, scanner.column)
    tokens.append(Token(TokenKind.EOF, "", eof_span))
    return tokens, diagnostics


def _scan_word(scanner: _Scanner) -> None:
    while scanner.current is not None and _is_word_char(scanner.current):
        scanner.advance()
    # dotted numeric suffixes: CA1.4, CA1.4.2
    while (
        scanner.current == "."
        and scanner.peek() is not None
        and scanner.peek().isdigit()
    ):
        scanner.advance()
        while scanner.current is not None and scanner.current.isdigit():
            scanner.advance()


def _scan_string(scanner: _Scanner, mark) -> tuple[Token, list[Diagnostic]]:
    diagnostics: list[Diagnostic] = []
    scanner.advance()  # opening quote
    value: list[str] = []
    while True:
        ch = scanner.current
        if ch is None or ch == "\n":
            diagnostics.append(
                Diagnostic("P001", "unterminated string literal", scanner.span_from(mark))
            )
            break
        if ch == '"':
            scanner.advance()
            break
        if ch == "\\":
            escape_mark = scanner.mark()
            scanner.advance()
            esc = scanner.current
            if esc == '"':
                value.append('"')
                scanner.advance()
            elif esc == "\\":
                value.append("\\")
                scanner.advance()
            elif esc == "n":
                value.append("\n")
                scanner.advance()
            else:
                if esc is not None:
                    scanner.advance()
                diagnostics.append(
                    Diagnostic(
                        "P002",
                        f"illegal escape sequence `\\{esc or ''}` in string literal",
                        scanner.span_from(escape_mark),
                    )
                )
            continue
        value.append(ch)
        scanner.advance()

    token = Token(
        TokenKind.STRING,
        scanner.text_from(mark),
        scanner.span_from(mark),
        "".join(value),
    )
    return token, diagnostics
