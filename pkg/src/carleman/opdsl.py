"""A small language for linear operator entries of ``F1`` and ``F2``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := number | name | 'x' INT | 'w' INT
            | 'd/d' ('x'|'w') INT | 'd' INT '/d' ('x'|'w') INT '^' INT
            | 'cumint(w' INT ')' | 'int(w' INT ')' | 'delta(w' INT '=x' INT ')'
            | '(' expr ')' | '-' factor

Products are operator compositions: the rightmost factor acts first.
``delta(wK=xJ)`` substitutes ``xJ`` for ``wK``, ``cumint(wK)`` integrates
``wK`` from the lower grid edge up to ``xK`` and ``int(wK)`` integrates
``wK`` over the whole axis. Names other than the reserved words are symbols
bound to numbers at compile time.

>>> print(pretty(parse("-delta(w1=x1)*d/dx1")))
-delta(w1=x1) * d/dx1
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .pde.grid import GridSpec
from .pde.operators import (
    Compose,
    Contract,
    Coordinate,
    CumulativeIntegral,
    Derivative,
    DiscreteOp,
    FullIntegral,
    Scale,
    ScaledSum,
    Zero,
)

MAX_DEPTH = 200


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Coord:
    dim: int
    copy: str


@dataclass(frozen=True)
class Deriv:
    dim: int
    order: int
    copy: str


@dataclass(frozen=True)
class CumInt:
    dim: int


@dataclass(frozen=True)
class FullInt:
    dim: int


@dataclass(frozen=True)
class Delta:
    w_dim: int
    x_dim: int


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Neg:
    operand: object


OperatorExpr = Const | Symbol | Coord | Deriv | CumInt | FullInt | Delta | Product | Sum | Neg


# -- errors ------------------------------------------------------------------

class ParseError(ValueError):
    """Syntax error at byte offset ``position``."""

    def __init__(self, position: int, expected, found: str, src: str = ""):
        self.position = position
        self.expected = tuple(expected)
        self.found = found
        super().__init__(
            f"at byte {position}: expected {' or '.join(self.expected)}, found {found}"
        )


class CompileError(ValueError):
    pass


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/()=^])"
    r")"
)
_WS = re.compile(r"\s*")

_COORD = re.compile(r"([xw])([0-9]+)$")
_DERIV_HEAD = re.compile(r"d([0-9]*)$")
_DERIV_VAR = re.compile(r"d([xw])([0-9]+)$")
_KEYWORDS = {"cumint", "int", "delta"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # number | name | op | eof
    text: str
    pos: int  # character offset


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    i = 0
    while True:
        ws = _WS.match(src, i)
        i = ws.end()
        if i >= len(src):
            toks.append(_Tok("eof", "", i))
            return toks
        m = _TOKEN.match(src, i)
        if m is None or m.end() == i:
            raise ParseError(_byte_offset(src, i), ["a token"], repr(src[i]), src)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        i = m.end()


def _byte_offset(src: str, i: int) -> int:
    return len(src[:i].encode("utf-8"))


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.k = 0
        self.depth = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def fail(self, expected, tok: _Tok | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(_byte_offset(self.src, tok.pos), expected, found, self.src)

    def advance(self) -> _Tok:
        tok = self.tok
        self.k += 1
        return tok

    def expect_op(self, text: str):
        if self.tok.kind != "op" or self.tok.text != text:
            self.fail([repr(text)])
        return self.advance()

    def expect_name(self, pattern: re.Pattern, what: str):
        tok = self.tok
        m = pattern.match(tok.text) if tok.kind == "name" else None
        if m is None:
            self.fail([what])
        self.advance()
        return m

    def expect_int(self) -> int:
        if self.tok.kind != "number" or not self.tok.text.isdigit():
            self.fail(["an integer"])
        return int(self.advance().text)

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail([f"at most {MAX_DEPTH} levels of nesting"])

    def parse(self):
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail(["'+'", "'-'", "'*'", "end of input"])
        return node

    def expr(self):
        self.enter()
        terms = [self.term()]
        while self.tok.kind == "op" and self.tok.text in "+-":
            sign = self.advance().text
            t = self.term()
            terms.append(Neg(t) if sign == "-" else t)
        self.depth -= 1
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.tok.kind == "op" and self.tok.text == "*":
            self.advance()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self):
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            self.enter()
            node = Neg(self.factor())
            self.depth -= 1
            return node
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        if tok.kind == "name":
            return self.named(tok)
        self.fail(["a number", "a name", "'('", "'-'"])

    def named(self, tok: _Tok):
        text = tok.text
        nxt = self.toks[self.k + 1]
        head = _DERIV_HEAD.match(text)
        if head is not None and nxt.kind == "op" and nxt.text == "/":
            return self.derivative(head)
        if text in _KEYWORDS:
            return self.keyword(text)
        m = _COORD.match(text)
        if m is not None:
            self.advance()
            return Coord(self._dim(m.group(2), tok), m.group(1))
        if head is not None or _DERIV_VAR.match(text):
            self.fail(["a symbol name (derivative words are reserved)"], tok)
        self.advance()
        return Symbol(text)

    def _dim(self, digits: str, tok: _Tok) -> int:
        d = int(digits)
        if d < 1:
            self.fail(["a coordinate index >= 1"], tok)
        return d

    def derivative(self, head):
        tok = self.advance()
        self.expect_op("/")
        var_tok = self.tok
        var = self.expect_name(_DERIV_VAR, "'dx<k>' or 'dw<k>'")
        dim = self._dim(var.group(2), var_tok)
        if head.group(1) == "":
            return Deriv(dim, 1, var.group(1))
        order = int(head.group(1))
        if order < 1:
            self.fail(["a derivative order >= 1"], tok)
        self.expect_op("^")
        power_tok = self.tok
        power = self.expect_int()
        if power != order:
            self.fail([f"'^{order}' matching the derivative order"], power_tok)
        return Deriv(dim, order, var.group(1))

    def keyword(self, word: str):
        self.advance()
        self.expect_op("(")
        w_tok = self.tok
        w = self.expect_name(re.compile(r"w([0-9]+)$"), "'w<k>'")
        w_dim = self._dim(w.group(1), w_tok)
        if word == "delta":
            self.expect_op("=")
            x_tok = self.tok
            x = self.expect_name(re.compile(r"x([0-9]+)$"), "'x<k>'")
            node = Delta(w_dim, self._dim(x.group(1), x_tok))
        elif word == "cumint":
            node = CumInt(w_dim)
        else:
            node = FullInt(w_dim)
        self.expect_op(")")
        return node


def parse_operator(src: str):
    """Parse ``src`` into an AST; raises :class:`ParseError` on any bad input."""
    if not isinstance(src, str):
        raise TypeError("operator source must be a string")
    return _Parser(src).parse()


parse = parse_operator


# -- printer -----------------------------------------------------------------

def pretty(node) -> str:
    """Source text that parses back to ``node``."""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Coord):
        return f"{node.copy}{node.dim}"
    if isinstance(node, Deriv):
        if node.order == 1:
            return f"d/d{node.copy}{node.dim}"
        return f"d{node.order}/d{node.copy}{node.dim}^{node.order}"
    if isinstance(node, CumInt):
        return f"cumint(w{node.dim})"
    if isinstance(node, FullInt):
        return f"int(w{node.dim})"
    if isinstance(node, Delta):
        return f"delta(w{node.w_dim}=x{node.x_dim})"
    if isinstance(node, Neg):
        inner = node.operand
        if isinstance(inner, (Sum, Product)):
            return f"-({pretty(inner)})"
        return f"-{pretty(inner)}"
    if isinstance(node, Product):
        return " * ".join(
            f"({pretty(f)})" if isinstance(f, (Sum, Product)) else pretty(f) for f in node.factors
        )
    if isinstance(node, Sum):
        parts = []
        for k, t in enumerate(node.terms):
            body = f"({pretty(t)})" if isinstance(t, Sum) else pretty(t)
            if k == 0:
                parts.append(body)
            elif isinstance(t, Neg):
                inner = t.operand
                parts.append("- " + (f"({pretty(inner)})" if isinstance(inner, Sum) else pretty(inner)))
            else:
                parts.append("+ " + body)
        return " ".join(parts)
    raise TypeError(f"not an operator expression: {node!r}")


# -- compiler ----------------------------------------------------------------

def _uses_w(node) -> bool:
    if isinstance(node, (Coord, Deriv)):
        return node.copy == "w"
    if isinstance(node, (CumInt, FullInt, Delta)):
        return True
    if isinstance(node, Neg):
        return _uses_w(node.operand)
    if isinstance(node, (Product, Sum)):
        items = node.factors if isinstance(node, Product) else node.terms
        return any(_uses_w(c) for c in items)
    return False


class _Compiler:
    def __init__(self, grid: GridSpec, bindings: dict):
        self.grid = grid
        self.bindings = bindings

    def dim(self, d: int, label: str) -> int:
        if not 1 <= d <= self.grid.m:
            raise CompileError(f"{label}{d} does not exist on an m={self.grid.m} grid")
        return d - 1

    def need_live(self, live: frozenset, d: int, what: str):
        if d not in live:
            raise CompileError(f"{what} uses w{d + 1}, which is not available at that point")

    def run(self, node, live: frozenset) -> tuple[DiscreteOp, frozenset]:
        if isinstance(node, Const):
            return Scale(node.value), live
        if isinstance(node, Symbol):
            if node.name not in self.bindings:
                raise CompileError(f"unbound symbol {node.name!r}")
            return Scale(float(self.bindings[node.name])), live
        if isinstance(node, Neg):
            op, out = self.run(node.operand, live)
            return Compose(Scale(-1.0), op), out
        if isinstance(node, Coord):
            d = self.dim(node.dim, node.copy)
            if node.copy == "w":
                self.need_live(live, d, "coordinate multiplier")
            return Coordinate(d, node.copy), live
        if isinstance(node, Deriv):
            d = self.dim(node.dim, "d" + node.copy)
            if node.copy == "w":
                self.need_live(live, d, "derivative")
            return Derivative(d, node.order, node.copy), live
        if isinstance(node, CumInt):
            d = self.dim(node.dim, "w")
            self.need_live(live, d, "cumint")
            return CumulativeIntegral(d, "w"), live - {d}
        if isinstance(node, FullInt):
            d = self.dim(node.dim, "w")
            self.need_live(live, d, "int")
            return FullIntegral(d, "w"), live - {d}
        if isinstance(node, Delta):
            wd = self.dim(node.w_dim, "w")
            xd = self.dim(node.x_dim, "x")
            self.need_live(live, wd, "delta")
            if self.grid.axes[wd] != self.grid.axes[xd]:
                raise CompileError(f"delta(w{wd + 1}=x{xd + 1}) joins axes with different grids")
            return Contract(wd, xd), live - {wd}
        if isinstance(node, Product):
            ops = []
            for f in reversed(node.factors):
                op, live = self.run(f, live)
                ops.append(op)
            return Compose(*reversed(ops)), live
        if isinstance(node, Sum):
            ops, outs = [], set()
            for t in node.terms:
                op, out = self.run(t, live)
                ops.append((1.0, op))
                outs.add(out)
            if len(outs) != 1:
                raise CompileError("terms of a sum leave different w coordinates uncontracted")
            return ScaledSum(ops), outs.pop()
        raise CompileError(f"not an operator expression: {node!r}")


def compile_operator(expr, grid: GridSpec, bindings: dict | None = None,
                     arity: int | None = None) -> DiscreteOp:
    """Turn an AST (or source string) into a :class:`DiscreteOp` on ``grid``.

    ``arity`` is 1 for ``F1`` entries and 2 for ``F2`` entries; by default it
    is 2 exactly when the expression mentions ``w``. Two-copy operators must
    consume every ``w`` coordinate.
    """
    if isinstance(expr, str):
        expr = parse_operator(expr)
    bindings = dict(bindings or {})
    if isinstance(expr, Const) and expr.value == 0:
        return Zero()
    if arity is None:
        arity = 2 if _uses_w(expr) else 1
    if arity not in (1, 2):
        raise ValueError(f"arity must be 1 or 2, got {arity}")
    if arity == 1 and _uses_w(expr):
        raise CompileError("a one-copy (F1) operator cannot reference w")
    live = frozenset(range(grid.m)) if arity == 2 else frozenset()
    op, left = _Compiler(grid, bindings).run(expr, live)
    if left:
        names = ", ".join(f"w{d + 1}" for d in sorted(left))
        raise CompileError(f"w coordinate(s) {names} are never contracted")
    return op


def compile_table(rows, grid: GridSpec, bindings: dict | None = None, arity: int = 1):
    """Compile a nested list of source strings (``None``/``"0"`` for zero entries)."""
    out = []
    for row in rows:
        out.append([
            None if src is None else compile_operator(src, grid, bindings, arity=arity)
            for src in row
        ])
    return out
