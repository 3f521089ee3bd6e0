"""Recursive-descent parser for the .wsp protocol notation.

    stmt := "flip(" arg "," arg ")" | "flip(*," arg ")" | "see(" arg ")"
          | "repeat(" expr "){" stmt* "}"
          | "without_seeing(" arg "){" stmt* "} otherwise {" stmt* "}"
          | "declare"
    expr := term (("+"|"-") term)*        term := integer | "r" | "n"

Statements may be separated by newlines or semicolons; ``#`` starts a comment.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from ..errors import (
    MissingOtherwiseError,
    ProtocolSyntaxError,
    RepeatCountError,
    StateIndexError,
    UnboundSymbolError,
)
from .ast import Declare, Flip, FlipAny, ProtocolSource, Repeat, See, WithoutSeeing

SYMBOLS = ("r", "n")
KEYWORDS = ("flip", "see", "repeat", "without_seeing", "otherwise", "declare")

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>\#[^\n]*)|(?P<nl>\n)|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<punct>[(){},*+\-;])"
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ProtocolSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text, bindings):
        self.tokens = tokenize(text)
        self.pos = 0
        self.bindings = bindings
        self.used = set()

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ProtocolSyntaxError(message, tok.line, tok.column)

    def expect(self, text):
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def skip_separators(self):
        while self.peek().text == ";":
            self.advance()

    def program(self):
        body = self.block(top=True)
        if self.peek().kind != "eof":
            self.fail(f"unexpected {self.peek().text!r}")
        return body

    def block(self, top=False):
        stmts = []
        while True:
            self.skip_separators()
            tok = self.peek()
            if tok.kind == "eof":
                if not top:
                    self.fail("unterminated block, expected '}'")
                return tuple(stmts)
            if tok.text == "}":
                if top:
                    self.fail("unbalanced '}'")
                return tuple(stmts)
            stmts.append(self.statement())

    def statement(self):
        tok = self.advance()
        if tok.kind != "name" or tok.text not in KEYWORDS or tok.text == "otherwise":
            self.fail(f"expected a statement, found {tok.text!r}", tok)
        word = tok.text
        if word == "declare":
            return Declare()
        if word == "flip":
            self.expect("(")
            if self.peek().text == "*":
                self.advance()
                self.expect(",")
                dst = self.expr()
                self.expect(")")
                return FlipAny(dst)
            src = self.expr()
            self.expect(",")
            dst = self.expr()
            self.expect(")")
            return Flip(src, dst)
        if word == "see":
            self.expect("(")
            target = self.expr()
            self.expect(")")
            return See(target)
        if word == "repeat":
            self.expect("(")
            count_tok = self.peek()
            count = self.expr()
            self.expect(")")
            if count < 0:
                raise RepeatCountError(
                    f"repeat count evaluates to {count} (line {count_tok.line}, "
                    f"column {count_tok.column})"
                )
            body = self.braced()
            return Repeat(count, body)
        # without_seeing
        self.expect("(")
        guard = self.expr()
        self.expect(")")
        body = self.braced()
        self.skip_separators()
        nxt = self.peek()
        if nxt.text != "otherwise":
            raise MissingOtherwiseError(
                "without_seeing block must be followed by 'otherwise'", nxt.line, nxt.column
            )
        self.advance()
        otherwise = self.braced()
        return WithoutSeeing(guard, body, otherwise)

    def braced(self):
        self.expect("{")
        body = self.block()
        self.expect("}")
        return body

    def expr(self):
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        tok = self.advance()
        if tok.kind == "num":
            return int(tok.text)
        if tok.kind == "name" and tok.text in SYMBOLS:
            self.used.add(tok.text)
            if self.bindings.get(tok.text) is None:
                raise UnboundSymbolError(
                    f"symbol {tok.text!r} is not bound (line {tok.line}, column {tok.column})"
                )
            return self.bindings[tok.text]
        self.fail(f"expected an integer, 'r' or 'n', found {tok.text or 'end of input'!r}", tok)


def _check_states(instructions, q):
    def check(value, what):
        if not 0 <= value < q:
            raise StateIndexError(f"{what} state {value} outside [0, {q - 1}]")

    for ins in instructions:
        if isinstance(ins, Flip):
            check(ins.src, "flip source")
            check(ins.dst, "flip target")
        elif isinstance(ins, FlipAny):
            check(ins.dst, "flip target")
        elif isinstance(ins, See):
            check(ins.target, "see")
        elif isinstance(ins, Repeat):
            _check_states(ins.body, q)
        elif isinstance(ins, WithoutSeeing):
            check(ins.guard, "without_seeing guard")
            _check_states(ins.body, q)
            _check_states(ins.otherwise, q)


def parse_protocol(text, bindings, name=""):
    """Parse protocol text with ``bindings`` giving ``r``, ``q`` and optionally ``n``."""
    q = bindings.get("q")
    if q is None or q < 1:
        raise ValueError("bindings must assign a positive q")
    for sym in ("r", "n", "q"):
        value = bindings.get(sym)
        if value is not None and value < 1:
            raise ValueError(f"binding {sym}={value} must be positive")
    parser = _Parser(text, bindings)
    instructions = parser.program()
    _check_states(instructions, q)
    bound = tuple(sorted((k, v) for k, v in bindings.items() if v is not None))
    return ProtocolSource(name, instructions, frozenset(parser.used), bound)
