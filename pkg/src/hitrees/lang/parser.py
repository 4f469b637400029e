"""Recursive-descent parser for ``.lpc`` programs.

Grammar, loosest binding first::

    expr    := seq
    seq     := par (';' seq)?                      -- e1; e2 = let _ := e1 in e2
    par     := assign ('||' assign)*
    assign  := compare (('←' | '<-') assign)?
    compare := sum ('=' sum)?
    sum     := prefix ('+' prefix)*
    prefix  := ('!' | 'ref' | 'FAA' | 'assert' | 'call/cc') prefix | app
    app     := postfix postfix*
    postfix := atom ('.1' | '.2')*
    atom    := '#n' | '#()' | name | '$name' | '(' expr ')' | open
    open    := 'let' name ':=' expr 'in' expr
             | ('λ' | '\\') name+ ',' expr
             | 'if' expr 'then' expr 'else' par
             | 'throw' par 'to' par

Open forms extend as far right as their last part allows.  ``--`` starts a
line comment.  ``$name`` splices a previously parsed program.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass

from .syntax import (
    UNIT,
    App,
    Assert,
    Assign,
    Callcc,
    Deref,
    Eq,
    Expr,
    Faa,
    Fst,
    If,
    Int,
    Lam,
    Lit,
    Par,
    Plus,
    Ref,
    Snd,
    Throw,
    Var,
)

__all__ = ["ParseError", "parse"]


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_KEYWORDS = {"let", "in", "ref", "if", "then", "else", "assert", "throw", "to", "FAA"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<unit>\#\(\s*\))
  | (?P<int>\#-?[0-9]+)
  | (?P<callcc>call/cc)
  | (?P<splice>\$[A-Za-z_][A-Za-z0-9_']*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<proj>\.[12])
  | (?P<sym>:=|<-|←|\|\||λ|\\|[;,()+=!])
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "name" and text in _KEYWORDS:
            kind = text
        elif kind == "sym":
            kind = {"<-": "←", "\\": "λ"}.get(text, text)
        elif kind == "callcc":
            kind = "call/cc"
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


_ATOM_START = {"int", "unit", "name", "splice", "("}
_PREFIX = {"!": Deref, "ref": Ref, "FAA": Faa, "assert": Assert, "call/cc": Callcc}


def _let(name: str, bound: Expr, body: Expr) -> Expr:
    return App(Lit(Lam(name, body)), bound)


class _Parser:
    def __init__(self, tokens: list[Token], splices: Mapping[str, Expr]):
        self.tokens = tokens
        self.pos = 0
        self.splices = splices

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {found!r}")
        return self.advance()

    def binder(self) -> str:
        return self.expect("name").text

    # loosest first

    def expr(self) -> Expr:
        left = self.par()
        if self.tok.kind == ";":
            self.advance()
            return _let("_", left, self.expr())
        return left

    def par(self) -> Expr:
        left = self.assign()
        while self.tok.kind == "||":
            self.advance()
            left = Par(left, self.assign())
        return left

    def assign(self) -> Expr:
        left = self.compare()
        if self.tok.kind == "←":
            self.advance()
            return Assign(left, self.assign())
        return left

    def compare(self) -> Expr:
        left = self.sum()
        if self.tok.kind == "=":
            self.advance()
            left = Eq(left, self.sum())
            if self.tok.kind == "=":
                raise self.error("'=' does not chain; add parentheses")
        return left

    def sum(self) -> Expr:
        left = self.prefix()
        while self.tok.kind == "+":
            self.advance()
            left = Plus(left, self.prefix())
        return left

    def prefix(self) -> Expr:
        ctor = _PREFIX.get(self.tok.kind)
        if ctor is not None:
            self.advance()
            return ctor(self.prefix())
        return self.app()

    def app(self) -> Expr:
        fn = self.postfix()
        while self.tok.kind in _ATOM_START:
            fn = App(fn, self.postfix())
        return fn

    def postfix(self) -> Expr:
        e = self.atom()
        while self.tok.kind == "proj":
            e = Fst(e) if self.advance().text == ".1" else Snd(e)
        return e

    def atom(self) -> Expr:
        tok = self.tok
        kind = tok.kind
        if kind == "int":
            self.advance()
            return Lit(Int(int(tok.text[1:])))
        if kind == "unit":
            self.advance()
            return Lit(UNIT)
        if kind == "name":
            self.advance()
            return Var(tok.text)
        if kind == "splice":
            self.advance()
            try:
                return self.splices[tok.text[1:]]
            except KeyError:
                raise self.error(f"unknown splice {tok.text}", tok) from None
        if kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if kind == "let":
            self.advance()
            name = self.binder()
            self.expect(":=")
            bound = self.expr()
            self.expect("in")
            return _let(name, bound, self.expr())
        if kind == "λ":
            self.advance()
            names = [self.binder()]
            while self.tok.kind == "name":
                names.append(self.advance().text)
            self.expect(",")
            body = self.expr()
            for name in reversed(names):
                body = Lit(Lam(name, body))
            return body
        if kind == "if":
            self.advance()
            cond = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            return If(cond, then, self.par())
        if kind == "throw":
            self.advance()
            value = self.par()
            self.expect("to")
            return Throw(value, self.par())
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse(source: str, splices: Mapping[str, Expr] | None = None) -> Expr:
    """Parse a program.  Raises :class:`ParseError` with line and column."""
    p = _Parser(tokenize(source), splices if splices is not None else {})
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after expression")
    return e
