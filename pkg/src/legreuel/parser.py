"""Tokenizer and parser for the script language.

The grammar is small and unambiguous::

    script     := statement*
    statement  := "ring" "(" names ")" ("local" | "global") ";"
                | "poly" NAME "=" expr ";"
                | "ideal" NAME "=" expr ("," expr)* ";"
                | "matrix" NAME "[" INT "]" "[" INT "]" "=" expr ("," expr)* ";"
                | NAME "(" args? ")" ";"
    expr       := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | power
    power      := atom ("^" INT)?
    atom       := INT | NAME | NAME "(" args? ")" | "(" expr ")"

There is no implicit multiplication: ``3x`` is rejected, write ``3*x``.
``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError
from .ring import MAX_EXPONENT, Polynomial, RingSpec

Span = tuple  # (line, column), both 1-based

KEYWORDS = frozenset({"ring", "poly", "ideal", "matrix", "local", "global"})

# name -> (min args, max args or None); the interpreter owns the semantics
COMMANDS: dict[str, tuple[int, int | None]] = {
    "std": (1, 1),
    "vdim": (1, 1),
    "dim": (1, 1),
    "mult": (1, 1),
    "saturate": (2, 2),
    "colon": (2, 2),
    "intersect": (2, None),
    "eliminate": (2, 2),
    "contains": (2, 2),
    "equal": (2, 2),
    "nf": (2, 2),
    "squarefree": (1, 1),
    "minors": (2, 2),
    "jacobian_ideal": (2, None),
    "pfaffian": (1, 1),
    "pfaffians": (1, 1),
    "skew": (1, None),
    "isolated": (1, 1),
    "euler_diff": (3, 3),
    "chi": (2, None),
    "icis": (1, None),
    "curve_mu": (3, None),
    "ids": (3, 4),
    "gorenstein_mu": (2, 4),
    "print": (1, None),
}


@dataclass(frozen=True)
class Token:
    kind: str  # ident, integer, symbol, keyword, eof
    text: str
    span: Span


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<integer>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<symbol>[-+*/^(),;=\[\]])"
)


def tokenize(src: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    n = len(src)
    while pos < n:
        m = _TOKEN_RE.match(src, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", (line, col))
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "integer":
            end = m.end()
            if end < n and (src[end].isalpha() or src[end] == "_"):
                raise ParseError(
                    f"missing '*' between {text!r} and {src[end]!r} "
                    "(implicit multiplication is not allowed)", (line, col))
            tokens.append(Token("integer", text, (line, col)))
        elif kind == "ident":
            tokens.append(Token("keyword" if text in KEYWORDS else "ident", text, (line, col)))
        elif kind == "symbol":
            tokens.append(Token("symbol", text, (line, col)))
        pos = m.end()
    tokens.append(Token("eof", "", (line, pos - line_start + 1)))
    return tokens


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: int
    span: Span


@dataclass(frozen=True)
class Name:
    name: str
    span: Span


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    span: Span


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    span: Span


Expr = Union[Num, Name, Neg, BinOp, Pow, Call]


@dataclass(frozen=True)
class RingDecl:
    names: tuple[str, ...]
    order: str  # "local" or "global"
    span: Span


@dataclass(frozen=True)
class PolyDecl:
    name: str
    expr: Expr
    span: Span


@dataclass(frozen=True)
class IdealDecl:
    name: str
    exprs: tuple
    span: Span


@dataclass(frozen=True)
class MatrixDecl:
    name: str
    rows: int
    cols: int
    exprs: tuple
    span: Span


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple
    span: Span


Statement = Union[RingDecl, PolyDecl, IdealDecl, MatrixDecl, Command]


@dataclass(frozen=True)
class ScriptAST:
    statements: tuple = ()

    @property
    def ring(self) -> RingDecl | None:
        for st in self.statements:
            if isinstance(st, RingDecl):
                return st
        return None


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, tokens: list[Token], known: dict[str, str] | None = None):
        self.toks = tokens
        self.i = 0
        # declared names and their kinds; ring variables are "var"
        self.known: dict[str, str] = dict(known or {})

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("symbol", "keyword") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            t = self.tok
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected {text!r}, found {found}", t.span)
        return self.advance()

    def ident(self, what: str = "a name") -> Token:
        t = self.tok
        if t.kind != "ident":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected {what}, found {found}", t.span)
        return self.advance()

    def integer(self, what: str) -> int:
        t = self.tok
        if t.kind != "integer":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"{what} must be a non-negative integer literal, found {found}",
                             t.span)
        self.advance()
        return int(t.text)

    # expressions
    def expr(self) -> Expr:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            left = BinOp(op.text, left, self.term(), op.span)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance()
            left = BinOp(op.text, left, self.unary(), op.span)
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            t = self.advance()
            return Neg(self.unary(), t.span)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            t = self.advance()
            et = self.tok
            n = self.integer("an exponent")
            if n > MAX_EXPONENT:
                raise ParseError(f"exponent {n} exceeds {MAX_EXPONENT}", et.span)
            return Pow(base, n, t.span)
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "integer":
            self.advance()
            return Num(int(t.text), t.span)
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                return self.call(t)
            if t.text not in self.known:
                raise ParseError(f"{t.text!r} is used before it is declared", t.span)
            return Name(t.text, t.span)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected an expression, found {found}", t.span)

    def call(self, name: Token) -> Call:
        if name.text not in COMMANDS:
            raise ParseError(f"unknown command {name.text!r}", name.span)
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.expr())
            while self.at(","):
                self.advance()
                args.append(self.expr())
        self.expect(")")
        lo, hi = COMMANDS[name.text]
        if len(args) < lo or (hi is not None and len(args) > hi):
            want = str(lo) if hi == lo else f"{lo}..{hi}" if hi is not None else f"at least {lo}"
            raise ParseError(f"{name.text} takes {want} arguments, got {len(args)}", name.span)
        return Call(name.text, tuple(args), name.span)

    def expr_list(self) -> tuple:
        out = [self.expr()]
        while self.at(","):
            self.advance()
            out.append(self.expr())
        return tuple(out)

    # statements
    def declare(self, tok: Token, kind: str):
        if tok.text in self.known:
            raise ParseError(f"{tok.text!r} is already declared", tok.span)
        self.known[tok.text] = kind

    def statement(self) -> Statement:
        t = self.tok
        if self.at("ring"):
            self.advance()
            if any(k == "var" for k in self.known.values()) or "@ring" in self.known:
                raise ParseError("a script declares at most one ring", t.span)
            self.expect("(")
            names = [self.ident("a variable name")]
            while self.at(","):
                self.advance()
                names.append(self.ident("a variable name"))
            self.expect(")")
            o = self.tok
            if not (self.at("local") or self.at("global")):
                raise ParseError("ring order must be 'local' or 'global'", o.span)
            self.advance()
            self.expect(";")
            for n in names:
                self.declare(n, "var")
            self.known["@ring"] = "ring"
            return RingDecl(tuple(n.text for n in names), o.text, t.span)
        if t.kind == "keyword" and t.text in ("poly", "ideal", "matrix"):
            self.advance()
            if "@ring" not in self.known:
                raise ParseError(f"{t.text} declared before any ring", t.span)
            name = self.ident()
            rows = cols = 0
            if t.text == "matrix":
                self.expect("[")
                rows = self.integer("a row count")
                self.expect("]")
                self.expect("[")
                cols = self.integer("a column count")
                self.expect("]")
                if rows == 0 or cols == 0:
                    raise ParseError("matrix dimensions must be positive", name.span)
            self.expect("=")
            if t.text == "poly":
                e = self.expr()
            else:
                es = self.expr_list()
            self.expect(";")
            self.declare(name, t.text)
            if t.text == "poly":
                return PolyDecl(name.text, e, t.span)
            if t.text == "ideal":
                return IdealDecl(name.text, es, t.span)
            return MatrixDecl(name.text, rows, cols, es, t.span)
        if t.kind == "ident":
            self.advance()
            if not self.at("("):
                raise ParseError(f"expected a declaration or a command, found {t.text!r}", t.span)
            c = self.call(t)
            self.expect(";")
            return Command(c.name, c.args, c.span)
        raise ParseError(f"expected a statement, found {t.text!r}", t.span)

    def script(self) -> ScriptAST:
        out = []
        while self.tok.kind != "eof":
            out.append(self.statement())
        return ScriptAST(tuple(out))


def parse_script(src: str, predeclared: dict[str, str] | None = None) -> ScriptAST:
    """Parse a whole script.

    ``predeclared`` maps names that are already bound (by an enclosing
    script) to their kinds, so a fragment can refer to them.
    """
    p = _Parser(tokenize(src), predeclared)
    try:
        return p.script()
    except RecursionError:
        raise ParseError("expression nested too deeply", p.tok.span) from None


def parse_expression(src: str, known: dict[str, str]) -> Expr:
    p = _Parser(tokenize(src), known)
    try:
        e = p.expr()
    except RecursionError:
        raise ParseError("expression nested too deeply", p.tok.span) from None
    if p.tok.kind != "eof":
        raise ParseError(f"unexpected {p.tok.text!r} after expression", p.tok.span)
    return e


def eval_poly_expr(e: Expr, ring: RingSpec, env: dict | None = None) -> Polynomial:
    """Evaluate an expression made of numbers, variables and named polynomials."""
    env = env or {}
    if isinstance(e, Num):
        return ring.const(e.value)
    if isinstance(e, Name):
        if e.name in ring.variables:
            return ring.var(e.name)
        v = env.get(e.name)
        if isinstance(v, Polynomial):
            return v
        raise ParseError(f"{e.name!r} is not a polynomial", e.span)
    if isinstance(e, Neg):
        return -eval_poly_expr(e.operand, ring, env)
    if isinstance(e, Pow):
        return eval_poly_expr(e.base, ring, env) ** e.exponent
    if isinstance(e, BinOp):
        a = eval_poly_expr(e.left, ring, env)
        b = eval_poly_expr(e.right, ring, env)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if not b.is_constant() or b.is_zero():
            raise ParseError("can only divide by a nonzero constant", e.span)
        return a * ring.const(1 / b.lead_coefficient())
    raise ParseError(f"{e.name}(...) does not give a polynomial here", e.span)


def parse_polynomial(src: str, ring: RingSpec) -> Polynomial:
    known = {v: "var" for v in ring.variables}
    return eval_poly_expr(parse_expression(src, known), ring)
