"""Lexer for module text: format-free, semicolon-delimited declarations."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from termbeat.source import Diagnostic, SourceError


class TokenKind(enum.Enum):
    IDENT = enum.auto()  # lower-case or underscore start
    CONID = enum.auto()  # upper-case start
    INT = enum.auto()
    TEXT = enum.auto()
    OP = enum.auto()  # infix operators and punctuation, spelling in .text
    KW_MODULE = enum.auto()
    KW_WHERE = enum.auto()
    KW_IMPORT = enum.auto()
    END = enum.auto()


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int
    end_col: int


_KEYWORDS = {
    "module": TokenKind.KW_MODULE,
    "where": TokenKind.KW_WHERE,
    "import": TokenKind.KW_IMPORT,
}

# Longest match first; `--` is always a comment, checked before these.
_MULTI_OPS = ("=:=", "...", "++", "->", "==", "/=", "<=", ">=")
_SINGLE_OPS = set(":+-*<>=\\;,()[]")


def _ident_start(ch: str) -> bool:
    return ch.islower() or ch == "_"


def _ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_'"


def tokenize(text: str, module: str = "<input>") -> list[Token]:
    """Lex module text; raises SourceError with a positioned Diagnostic."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def fail(message: str, at_line: int, at_col: int) -> SourceError:
        return SourceError([Diagnostic(module, at_line, at_col, message)])

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        if ch.isdigit():
            start = i
            start_col = col
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            tokens.append(Token(TokenKind.INT, text[start:i], line, start_col, col - 1))
            continue
        if _ident_start(ch) or ch.isupper():
            start = i
            start_col = col
            while i < n and _ident_char(text[i]):
                i += 1
                col += 1
            word = text[start:i]
            kind = _KEYWORDS.get(word)
            if kind is None:
                kind = TokenKind.CONID if word[0].isupper() else TokenKind.IDENT
            tokens.append(Token(kind, word, line, start_col, col - 1))
            continue
        if ch == '"':
            start_col = col
            i += 1
            col += 1
            chars: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise fail("unterminated text literal", line, start_col)
                if text[i] == '"':
                    i += 1
                    col += 1
                    break
                chars.append(text[i])
                i += 1
                col += 1
            tokens.append(Token(TokenKind.TEXT, "".join(chars), line, start_col, col - 1))
            continue
        matched = False
        for op in _MULTI_OPS:
            if text.startswith(op, i):
                tokens.append(Token(TokenKind.OP, op, line, col, col + len(op) - 1))
                i += len(op)
                col += len(op)
                matched = True
                break
        if matched:
            continue
        if ch in _SINGLE_OPS:
            tokens.append(Token(TokenKind.OP, ch, line, col, col))
            i += 1
            col += 1
            continue
        raise fail(f"unexpected character {ch!r}", line, col)

    return tokens


def with_end_sentinel(tokens: list[Token], text: str) -> list[Token]:
    """Append the END token the parser uses to bound lookahead."""
    line = text.count("\n") + 1
    col = len(text) - text.rfind("\n")
    return tokens + [Token(TokenKind.END, "", line, col, col)]
