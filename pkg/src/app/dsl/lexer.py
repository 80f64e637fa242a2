"""
Tokenizer for the Lagrangian expression language.

Spans are byte offsets into the UTF-8 encoding of the source, so they stay
valid for error messages whatever characters the input contains.
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

from src.core.errors import ParseError


FUNCTIONS = ("sin", "cos", "exp", "sqrt", "abs")

_NUMBER = re.compile(r"(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?", re.ASCII)
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*", re.ASCII)
_VARIABLE = re.compile(r"x([0-9]+)", re.ASCII)

# Longer indices cannot be valid for any chart this tool handles
_MAX_INDEX_DIGITS = 9


class TokenKind(Enum):
    NUMBER = "number"
    VARIABLE = "variable"
    PLUS = "'+'"
    MINUS = "'-'"
    STAR = "'*'"
    SLASH = "'/'"
    CARET = "'^'"
    LPAREN = "'('"
    RPAREN = "')'"
    COMMA = "','"
    FUNC = "function"
    END = "end of input"


_SINGLE = {
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "^": TokenKind.CARET,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ",": TokenKind.COMMA,
}


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    span: Tuple[int, int]
    text: str
    value: Optional[float] = None
    index: Optional[int] = None


def decode_source(src: Union[str, bytes]) -> str:
    """Return src as text; undecodable bytes raise ParseError at their offset."""
    if isinstance(src, str):
        return src
    try:
        return bytes(src).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(
            "input is not valid UTF-8",
            (exc.start, exc.end),
            source=bytes(src).decode("utf-8", errors="replace"),
        ) from None


def byte_offsets(text: str) -> List[int]:
    """offsets[i] is the byte offset of character i; offsets[len] is the total size."""
    offsets = [0]
    for ch in text:
        offsets.append(offsets[-1] + len(ch.encode("utf-8", errors="surrogatepass")))
    return offsets


def tokenize(src: Union[str, bytes]) -> List[Token]:
    """
    Split source into tokens, ending with an END token.

    Raises:
        ParseError: On unknown characters, unknown identifiers or
            out-of-range numeric literals.
    """
    text = decode_source(src)
    offsets = byte_offsets(text)
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue

        start = offsets[i]

        m = _NUMBER.match(text, i)
        if m:
            value = float(m.group())
            if value == float("inf"):
                raise ParseError("numeric literal is out of range", (start, offsets[m.end()]),
                                 ["number"], text)
            tokens.append(Token(TokenKind.NUMBER, (start, offsets[m.end()]), m.group(), value=value))
            i = m.end()
            continue

        m = _NAME.match(text, i)
        if m:
            name = m.group()
            var = _VARIABLE.fullmatch(name)
            if var:
                if len(var.group(1)) > _MAX_INDEX_DIGITS:
                    raise ParseError(f"variable index in '{name}' is out of range",
                                     (start, offsets[m.end()]), ["variable"], text)
                tokens.append(Token(TokenKind.VARIABLE, (start, offsets[m.end()]), name,
                                    index=int(var.group(1))))
            elif name in FUNCTIONS:
                tokens.append(Token(TokenKind.FUNC, (start, offsets[m.end()]), name))
            else:
                raise ParseError(
                    f"unknown identifier '{name}'",
                    (start, offsets[m.end()]),
                    ["variable x<k>"] + list(FUNCTIONS),
                    text,
                )
            i = m.end()
            continue

        kind = _SINGLE.get(ch)
        if kind is None:
            raise ParseError(f"unexpected character {ch!r}", (start, offsets[i + 1]),
                             ["number", "variable", "function", "operator"], text)
        tokens.append(Token(kind, (start, offsets[i + 1]), ch))
        i += 1

    tokens.append(Token(TokenKind.END, (offsets[-1], offsets[-1]), ""))
    return tokens
