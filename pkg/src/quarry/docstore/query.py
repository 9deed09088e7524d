"""Boolean field-query language: AST, recursive-descent parser, printer.

Grammar (keywords case-insensitive):

    query  := or
    or     := and ("OR" and)*
    and    := unary ("AND" unary)*
    unary  := "NOT" unary | "(" query ")" | clause
    clause := [field ":"] (word | phrase) | field rangeop number

A term with no field targets the default field ``text``. The empty (or
all-whitespace) query parses to MatchAll. Parse errors report the byte
offset into the UTF-8 encoding of the query plus the token kinds that
would have been accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import QuerySyntaxError
from ..text import tokenize
from .types import FIELD_NAME_RE

DEFAULT_FIELD = "text"

# ---------------------------------------------------------------- AST nodes


@dataclass(frozen=True)
class Term:
    field: str
    value: str


@dataclass(frozen=True)
class Phrase:
    field: str
    words: tuple[str, ...]


@dataclass(frozen=True)
class Range:
    field: str
    op: str  # one of < <= > >=
    number: float


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class MatchAll:
    pass


QueryAst = object

# ------------------------------------------------------------------- lexer

_SPECIAL = set('():"<>=')
_RANGE_OPS = ("<=", ">=", "<", ">")
_KEYWORDS = {"AND", "OR", "NOT"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # WORD PHRASE LPAREN RPAREN COLON RANGEOP AND OR NOT EOF
    value: str
    pos: int  # character offset into the query


def _byte_offset(q: str, char_pos: int) -> int:
    return len(q[:char_pos].encode("utf-8"))


def _lex(q: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(q)
    while i < n:
        ch = q[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            toks.append(_Tok("LPAREN", ch, i))
            i += 1
        elif ch == ")":
            toks.append(_Tok("RPAREN", ch, i))
            i += 1
        elif ch == ":":
            toks.append(_Tok("COLON", ch, i))
            i += 1
        elif ch in "<>":
            op = q[i : i + 2] if q[i : i + 2] in ("<=", ">=") else ch
            toks.append(_Tok("RANGEOP", op, i))
            i += len(op)
        elif ch == "=":
            raise QuerySyntaxError("unexpected '='", _byte_offset(q, i), ["<", "<=", ">", ">="])
        elif ch == '"':
            start = i
            i += 1
            buf = []
            while i < n and q[i] != '"':
                if q[i] == "\\" and i + 1 < n and q[i + 1] in ('"', "\\"):
                    buf.append(q[i + 1])
                    i += 2
                else:
                    buf.append(q[i])
                    i += 1
            if i >= n:
                raise QuerySyntaxError("unterminated phrase", _byte_offset(q, n), ['"'])
            i += 1  # closing quote
            toks.append(_Tok("PHRASE", "".join(buf), start))
        else:
            start = i
            while i < n and not q[i].isspace() and q[i] not in _SPECIAL:
                i += 1
            word = q[start:i]
            upper = word.upper()
            if upper in _KEYWORDS:
                toks.append(_Tok(upper, word, start))
            else:
                toks.append(_Tok("WORD", word, start))
    toks.append(_Tok("EOF", "", n))
    return toks


# ------------------------------------------------------------------ parser


class _Parser:
    def __init__(self, q: str):
        self.q = q
        self.toks = _lex(q)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, expected: list[str]) -> QuerySyntaxError:
        tok = self.peek()
        what = "end of input" if tok.kind == "EOF" else repr(tok.value)
        return QuerySyntaxError(
            f"unexpected {what}", _byte_offset(self.q, tok.pos), expected
        )

    def parse(self) -> QueryAst:
        ast = self.or_expr()
        if self.peek().kind != "EOF":
            raise self.error(["AND", "OR", "end of input"])
        return ast

    def or_expr(self) -> QueryAst:
        children = [self.and_expr()]
        while self.peek().kind == "OR":
            self.advance()
            children.append(self.and_expr())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def and_expr(self) -> QueryAst:
        children = [self.unary()]
        while self.peek().kind == "AND":
            self.advance()
            children.append(self.unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def unary(self) -> QueryAst:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.unary())
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.or_expr()
            if self.peek().kind != "RPAREN":
                raise self.error([")", "AND", "OR"])
            self.advance()
            return inner
        return self.clause()

    def clause(self) -> QueryAst:
        tok = self.peek()
        if tok.kind == "PHRASE":
            self.advance()
            return Phrase(DEFAULT_FIELD, tuple(tokenize(tok.value)))
        if tok.kind != "WORD":
            raise self.error(["NOT", "(", "word", "phrase"])
        self.advance()
        nxt = self.peek()
        if nxt.kind == "COLON":
            field = self._field_name(tok)
            self.advance()
            val = self.peek()
            if val.kind == "WORD":
                self.advance()
                return Term(field, val.value)
            if val.kind == "PHRASE":
                self.advance()
                return Phrase(field, tuple(tokenize(val.value)))
            raise self.error(["word", "phrase"])
        if nxt.kind == "RANGEOP":
            field = self._field_name(tok)
            op = self.advance().value
            num = self.peek()
            if num.kind != "WORD":
                raise self.error(["number"])
            try:
                value = float(num.value)
            except ValueError:
                raise self.error(["number"]) from None
            self.advance()
            return Range(field, op, value)
        return Term(DEFAULT_FIELD, tok.value)

    def _field_name(self, tok: _Tok) -> str:
        if not FIELD_NAME_RE.fullmatch(tok.value):
            raise QuerySyntaxError(
                f"bad field name {tok.value!r}",
                _byte_offset(self.q, tok.pos),
                ["field name ([a-z0-9_.]+)"],
            )
        return tok.value


def parse_query(q: str) -> QueryAst:
    """Parse ``q``; returns an AST or raises QuerySyntaxError.

    Total over valid inputs and deterministic; the empty query means
    "match everything".
    """
    if not isinstance(q, str):
        raise QuerySyntaxError("query must be a string", 0, ["query"])
    if not q.strip():
        return MatchAll()
    return _Parser(q).parse()


# ----------------------------------------------------------------- printer


def print_query(ast: QueryAst) -> str:
    """Render an AST back to query syntax; reparsing yields an identical AST.

    MatchAll prints as the empty string and is only meaningful as the whole
    query, which is the only position the parser produces it in.
    """
    if isinstance(ast, MatchAll):
        return ""
    return _print(ast)


def _print(node: QueryAst) -> str:
    if isinstance(node, Term):
        return f"{node.field}:{node.value}"
    if isinstance(node, Phrase):
        return f'{node.field}:"{" ".join(node.words)}"'
    if isinstance(node, Range):
        return f"{node.field} {node.op} {node.number!r}"
    if isinstance(node, Not):
        inner = _print(node.child)
        if isinstance(node.child, (And, Or)):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(node, And):
        return " AND ".join(
            f"({_print(c)})" if isinstance(c, (And, Or)) else _print(c) for c in node.children
        )
    if isinstance(node, Or):
        return " OR ".join(
            f"({_print(c)})" if isinstance(c, Or) else _print(c) for c in node.children
        )
    raise TypeError(f"cannot print {type(node).__name__}")
