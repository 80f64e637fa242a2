"""
Parser and pretty-printer for the Lagrangian expression language.

Grammar (whitespace insensitive):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' factor)?            right-associative
    atom   := number | 'x' integer | func '(' expr ')' | '(' expr ')' | '-' atom

The three binary levels are parsed by precedence climbing, which accepts
exactly this grammar while keeping the call stack shallow. Both the nesting
of recursive constructs and the depth of the resulting tree are capped.
"""

from typing import List, Union

from config.settings import MAX_EXPR_DEPTH
from src.app.dsl.lexer import Token, TokenKind, decode_source, tokenize
from src.app.dsl.nodes import Binary, Call, Constant, Expr, Neg, Var
from src.app.geometry.structure import ChartDim
from src.core.errors import ParseError


# Binary operator -> (precedence, right associative)
_BINARY = {
    TokenKind.PLUS: ("+", 1, False),
    TokenKind.MINUS: ("-", 1, False),
    TokenKind.STAR: ("*", 2, False),
    TokenKind.SLASH: ("/", 2, False),
    TokenKind.CARET: ("^", 3, True),
}

_ATOM_START = ["number", "variable", "function", "'('", "'-'"]

# Each tree level costs at most three parser frames
_MAX_NESTING = 3 * MAX_EXPR_DEPTH + 8


class _Parser:
    def __init__(self, tokens: List[Token], dim: ChartDim, source: str):
        self.tokens = tokens
        self.pos = 0
        self.dim = dim
        self.source = source
        self.nesting = 0

    # ---------- helpers ----------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.END:
            self.pos += 1
        return tok

    def error(self, message: str, tok: Token, expected: List[str]) -> ParseError:
        return ParseError(message, tok.span, expected, self.source)

    def expect(self, kind: TokenKind, message: str) -> Token:
        tok = self.peek()
        if tok.kind is not kind:
            raise self.error(message, tok, [kind.value])
        return self.advance()

    def enter(self, tok: Token) -> None:
        self.nesting += 1
        if self.nesting > _MAX_NESTING:
            raise self.error("expression is nested too deeply", tok, [])

    def leave(self) -> None:
        self.nesting -= 1

    def node_depth(self, node: Expr) -> Expr:
        if node.depth > MAX_EXPR_DEPTH:
            raise ParseError(
                f"expression tree is deeper than {MAX_EXPR_DEPTH} levels",
                node.span, [], self.source,
            )
        return node

    # ---------- grammar ----------
    def parse(self) -> Expr:
        expr = self.binary(1)
        tok = self.peek()
        if tok.kind is TokenKind.RPAREN:
            raise self.error("unbalanced parentheses: unexpected ')'", tok, ["operator", "end of input"])
        if tok.kind is not TokenKind.END:
            raise self.error(f"unexpected trailing input '{tok.text}'", tok, ["operator", "end of input"])
        return expr

    def binary(self, min_prec: int) -> Expr:
        self.enter(self.peek())
        lhs = self.atom()
        while True:
            tok = self.peek()
            entry = _BINARY.get(tok.kind)
            if entry is None or entry[1] < min_prec:
                break
            op, prec, right = entry
            self.advance()
            rhs = self.binary(prec if right else prec + 1)
            lhs = self.node_depth(Binary(
                op, lhs, rhs,
                span=(lhs.span[0], rhs.span[1]),
                depth=1 + max(lhs.depth, rhs.depth),
            ))
        self.leave()
        return lhs

    def atom(self) -> Expr:
        tok = self.peek()

        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return Constant(tok.value, span=tok.span)

        if tok.kind is TokenKind.VARIABLE:
            self.advance()
            if tok.index >= self.dim.total:
                raise self.error(
                    f"variable {tok.text} is out of range for 4n={self.dim.total}",
                    tok, [f"x0..x{self.dim.total - 1}"],
                )
            return Var(tok.index, span=tok.span)

        if tok.kind is TokenKind.FUNC:
            self.advance()
            self.expect(TokenKind.LPAREN, f"expected '(' after {tok.text}")
            self.enter(tok)
            arg = self.binary(1)
            self.leave()
            close = self.expect(TokenKind.RPAREN, "unbalanced parentheses: expected ')'")
            return self.node_depth(Call(tok.text, arg, span=(tok.span[0], close.span[1]),
                                        depth=1 + arg.depth))

        if tok.kind is TokenKind.LPAREN:
            self.advance()
            self.enter(tok)
            inner = self.binary(1)
            self.leave()
            self.expect(TokenKind.RPAREN, "unbalanced parentheses: expected ')'")
            return inner

        if tok.kind is TokenKind.MINUS:
            self.advance()
            self.enter(tok)
            operand = self.atom()
            self.leave()
            return self.node_depth(Neg(operand, span=(tok.span[0], operand.span[1]),
                                       depth=1 + operand.depth))

        if tok.kind is TokenKind.END:
            raise self.error("unexpected end of input", tok, _ATOM_START)
        if tok.kind is TokenKind.RPAREN:
            raise self.error("unbalanced parentheses: unexpected ')'", tok, _ATOM_START)
        raise self.error(f"unexpected token '{tok.text}'", tok, _ATOM_START)


def parse(src: Union[str, bytes], dim: ChartDim) -> Expr:
    """
    Parse a Lagrangian expression over the variables x0..x{4n-1}.

    Args:
        src: Expression text (str, or bytes holding UTF-8).
        dim: Chart dimension that bounds the variable indices.

    Returns:
        Expression tree.

    Raises:
        ParseError: On unknown identifiers, out-of-range variables,
            unbalanced parentheses, trailing input or excessive depth.
    """
    source = decode_source(src)
    return _Parser(tokenize(source), dim, source).parse()


def format_expr(e: Expr) -> str:
    """Pretty-print with every binary node parenthesised; reparses to the same tree."""
    if isinstance(e, Constant):
        return repr(float(e.value))
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Neg):
        return f"-{format_expr(e.operand)}"
    if isinstance(e, Call):
        return f"{e.name}({format_expr(e.arg)})"
    return f"({format_expr(e.lhs)} {e.op} {format_expr(e.rhs)})"
