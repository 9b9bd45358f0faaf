"""The ``.dds`` network description language.

A file declares the coordinates with ``domain`` lines and then gives either
one ``rule`` per coordinate or a complete table of ``state -> image`` rows::

    # negation on {0,1}
    domain x1 0..1
    rule x1 = 1 - x1

The grammar is documented in full in ``docs/grammar.md``. Comparison and
logical operators evaluate to 0 or 1, so Boolean rules need no separate
type.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .domain import IntervalDomain, State
from .errors import DomainError, DomainSizeError, ParseError, RangeViolation, SingletonIntervalError
from .network import MAX_STATES, Network

MAX_DEPTH = 64
KEYWORDS = {"domain", "rule", "and", "or", "not", "min", "max", "if"}


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    depth = 1


@dataclass(frozen=True)
class Var:
    index: int  # 0-based coordinate
    name: str
    depth = 1


@dataclass(frozen=True)
class Unary:
    op: str  # "not" | "-"
    operand: "Expr"
    depth: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", 1 + self.operand.depth)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    depth: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", 1 + max(self.left.depth, self.right.depth))


@dataclass(frozen=True)
class Call:
    func: str  # "min" | "max" | "if"
    args: tuple["Expr", ...]
    depth: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", 1 + max(a.depth for a in self.args))


Expr = Union[Num, Var, Unary, BinOp, Call]


@dataclass
class NetworkSpecText:
    names: list[str]
    lower: list[int]
    upper: list[int]
    rules: dict[int, Expr] = field(default_factory=dict)
    table: dict[State, State] | None = None

    @property
    def domain(self) -> IntervalDomain:
        return IntervalDomain(tuple(self.lower), tuple(self.upper))


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>->|\.\.|<=|>=|==|!=|[-+*<>=(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # int | ident | op | nl | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(Token("nl", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind in ("int", "ident", "op"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser ------------------------------------------------------------------

_CMP = ("<", "<=", ">", ">=", "==", "!=")


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.names: dict[str, int] = {}
        self.depth = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def at(self, text) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def expect(self, text) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_int(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        return sign * int(self.advance().text)

    def end_of_line(self):
        if self.tok.kind not in ("nl", "eof"):
            raise self.error(f"unexpected {self.tok.text!r} at end of line")
        if self.tok.kind == "nl":
            self.advance()

    # file level
    def parse_file(self) -> NetworkSpecText:
        spec = NetworkSpecText([], [], [])
        rule_pos: dict[int, Token] = {}
        rows: dict[State, State] = {}
        row_pos: dict[State, Token] = {}
        body_started = False
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "nl":
                self.advance()
                continue
            if self.at("domain"):
                if body_started:
                    raise self.error("domain declarations must precede rules and table rows")
                self.advance()
                self.parse_domain(spec)
            elif self.at("rule"):
                if rows:
                    raise self.error("a file cannot mix rules and table rows")
                body_started = True
                self.advance()
                name_tok = self.tok
                idx = self.variable()
                if idx in spec.rules:
                    prev = rule_pos[idx]
                    raise self.error(
                        f"duplicate rule for {name_tok.text} (first at {prev.line}:{prev.col})", name_tok
                    )
                self.expect("=")
                spec.rules[idx] = self.expr()
                rule_pos[idx] = name_tok
            elif t.kind == "int" or self.at("-"):
                if spec.rules:
                    raise self.error("a file cannot mix rules and table rows")
                body_started = True
                self.parse_row(spec, rows, row_pos)
            else:
                raise self.error(f"expected 'domain', 'rule' or a table row, found {t.text!r}")
            self.end_of_line()

        if not spec.names:
            raise self.error("no domain declared")
        try:
            dom = spec.domain
        except DomainError as exc:
            raise ParseError(str(exc), 1, 1) from None
        if rows:
            if dom.cardinality > MAX_STATES:
                raise self.error(f"domain of {dom.cardinality} states is too large to tabulate")
            if len(rows) != dom.cardinality:
                missing = next(x for x in _iter_states(dom) if x not in rows)
                raise self.error(f"table has no row for state {_fmt(missing)}")
            spec.table = rows
        else:
            missing = [spec.names[i] for i in range(dom.n) if i not in spec.rules]
            if missing:
                raise self.error(f"no rule for {', '.join(missing)}")
        return spec

    def parse_domain(self, spec: NetworkSpecText):
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error("expected a variable name")
        if t.text in self.names:
            raise self.error(f"variable {t.text} declared twice")
        self.advance()
        lo = self.expect_int()
        self.expect("..")
        hi = self.expect_int()
        if hi == lo:
            raise SingletonIntervalError(f"{t.line}:{t.col}: interval {lo}..{hi} of {t.text} has a single value")
        if hi < lo:
            raise self.error(f"interval {lo}..{hi} is empty", t)
        self.names[t.text] = len(spec.names)
        spec.names.append(t.text)
        spec.lower.append(lo)
        spec.upper.append(hi)

    def parse_row(self, spec, rows, row_pos):
        n = len(spec.names)
        if n == 0:
            raise self.error("table row before any domain declaration")
        start = self.tok
        lhs = []
        while not self.at("->"):
            if self.tok.kind in ("nl", "eof"):
                raise self.error("expected '->' in table row")
            lhs.append(self.expect_int())
        self.advance()
        rhs = []
        while self.tok.kind not in ("nl", "eof"):
            rhs.append(self.expect_int())
        if len(lhs) != n or len(rhs) != n:
            raise self.error(f"table row needs {n} values on each side of '->'", start)
        x = tuple(lhs)
        if not all(a <= c <= b for a, c, b in zip(spec.lower, x, spec.upper)):
            raise self.error(f"row state {_fmt(x)} is outside the domain", start)
        if x in rows:
            prev = row_pos[x]
            raise self.error(f"duplicate row for state {_fmt(x)} (first at line {prev.line})", start)
        rows[x] = tuple(rhs)
        row_pos[x] = start

    def variable(self) -> int:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error("expected a variable name")
        if t.text not in self.names:
            raise self.error(f"undeclared variable {t.text}")
        self.advance()
        return self.names[t.text]

    # expressions, lowest precedence first
    def expr(self) -> Expr:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error(f"expression nested deeper than {MAX_DEPTH}")
        try:
            return self.or_expr()
        finally:
            self.depth -= 1

    def checked(self, node):
        if node.depth > MAX_DEPTH:
            raise self.error(f"expression tree deeper than {MAX_DEPTH}")
        return node

    def or_expr(self):
        left = self.and_expr()
        while self.at("or"):
            self.advance()
            left = self.checked(BinOp("or", left, self.and_expr()))
        return left

    def and_expr(self):
        left = self.cmp_expr()
        while self.at("and"):
            self.advance()
            left = self.checked(BinOp("and", left, self.cmp_expr()))
        return left

    def cmp_expr(self):
        left = self.add_expr()
        while self.tok.kind == "op" and self.tok.text in _CMP:
            op = self.advance().text
            left = self.checked(BinOp(op, left, self.add_expr()))
        return left

    def add_expr(self):
        left = self.mul_expr()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            left = self.checked(BinOp(op, left, self.mul_expr()))
        return left

    def mul_expr(self):
        left = self.unary()
        while self.at("*"):
            self.advance()
            left = self.checked(BinOp("*", left, self.unary()))
        return left

    def unary(self):
        if self.at("not") or self.at("-"):
            op = self.advance().text
            self.depth += 1
            if self.depth > MAX_DEPTH:
                raise self.error(f"expression nested deeper than {MAX_DEPTH}")
            try:
                return self.checked(Unary(op, self.unary()))
            finally:
                self.depth -= 1
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(int(t.text))
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("min") or self.at("max") or self.at("if"):
            func = self.advance().text
            self.expect("(")
            args = [self.expr()]
            for _ in range(2 if func == "if" else 1):
                self.expect(",")
                args.append(self.expr())
            self.expect(")")
            return self.checked(Call(func, tuple(args)))
        if t.kind == "ident" and t.text not in KEYWORDS:
            idx = self.variable()
            return Var(idx, t.text)
        raise self.error(f"unexpected {t.text or 'end of input'!r} in expression")


def parse(text: str) -> NetworkSpecText:
    """Parse ``.dds`` text; raises :class:`ParseError` with a position."""
    return _Parser(text).parse_file()


def parse_expr(text: str, names: Sequence[str]) -> Expr:
    """Parse a single expression over the given variable names."""
    p = _Parser(text)
    p.names = {nm: i for i, nm in enumerate(names)}
    e = p.expr()
    if p.tok.kind not in ("nl", "eof"):
        raise p.error(f"unexpected {p.tok.text!r} after expression")
    return e


# -- evaluation --------------------------------------------------------------

def _truth(a):
    return (a != 0) * 1


def _apply(e: Expr, env, xp):
    """Evaluate over ints (``xp=None``) or numpy columns (``xp=np``)."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.index]
    if isinstance(e, Unary):
        a = _apply(e.operand, env, xp)
        return -a if e.op == "-" else 1 - _truth(a)
    if isinstance(e, Call):
        args = [_apply(a, env, xp) for a in e.args]
        if e.func == "if":
            c, a, b = args
            if xp is None:
                return a if c != 0 else b
            return xp.where(xp.asarray(c) != 0, a, b)
        if xp is None:
            return min(args) if e.func == "min" else max(args)
        return (xp.minimum if e.func == "min" else xp.maximum)(*args)
    a = _apply(e.left, env, xp)
    b = _apply(e.right, env, xp)
    op = e.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "and":
        return _truth(a) * _truth(b)
    if op == "or":
        return 1 - (1 - _truth(a)) * (1 - _truth(b))
    if op == "<":
        return (a < b) * 1
    if op == "<=":
        return (a <= b) * 1
    if op == ">":
        return (a > b) * 1
    if op == ">=":
        return (a >= b) * 1
    if op == "==":
        return (a == b) * 1
    if op == "!=":
        return (a != b) * 1
    raise ValueError(f"unknown operator {op}")


def eval_expr(e: Expr, x: Sequence[int]) -> int:
    """Exact integer value of ``e`` at state ``x``."""
    return int(_apply(e, tuple(int(c) for c in x), None))


def _magnitude(e: Expr, bound: int) -> int:
    """Upper bound on |value| when every variable satisfies |x| <= bound."""
    if isinstance(e, Num):
        return abs(e.value)
    if isinstance(e, Var):
        return bound
    if isinstance(e, Unary):
        return max(1, _magnitude(e.operand, bound))
    if isinstance(e, Call):
        return max(_magnitude(a, bound) for a in e.args)
    a, b = _magnitude(e.left, bound), _magnitude(e.right, bound)
    if e.op in ("+", "-"):
        return a + b
    if e.op == "*":
        return a * b
    return 1


def eval_over_domain(e: Expr, domain: IntervalDomain) -> np.ndarray:
    """Values of ``e`` at every state, in rank order."""
    states = domain.states_array()
    bound = max(max(abs(a), abs(b)) for a, b in zip(domain.lower, domain.upper))
    # int64 is exact unless the static bound says otherwise
    dtype = np.int64 if _magnitude(e, bound) < 2**62 else object
    cols = [states[:, i].astype(dtype) for i in range(domain.n)]
    out = _apply(e, cols, np)
    return np.broadcast_to(np.asarray(out, dtype=dtype), (domain.cardinality,))


# -- elaboration -------------------------------------------------------------

def elaborate(spec: NetworkSpecText, clamp: bool = False) -> Network:
    """Tabulate a parsed spec into a :class:`Network`.

    With ``clamp`` off, the first out-of-range value raises
    :class:`RangeViolation` naming the offending state.
    """
    dom = spec.domain
    if dom.cardinality > MAX_STATES:
        raise DomainSizeError(f"|X| = {dom.cardinality} exceeds the tabulation limit {MAX_STATES}")
    if spec.table is not None:
        images = np.array([spec.table[x] for x in _iter_states(dom)], dtype=object)
        images = images.reshape(dom.cardinality, dom.n)
    else:
        images = np.empty((dom.cardinality, dom.n), dtype=object)
        for i in range(dom.n):
            images[:, i] = eval_over_domain(spec.rules[i], dom)
    lo = np.array(dom.lower, dtype=object)
    hi = np.array(dom.upper, dtype=object)
    out_of_range = (images < lo) | (images > hi)
    clamped = int(out_of_range.sum())
    if clamped and not clamp:
        k, i = (int(a) for a in np.argwhere(out_of_range)[0])
        x = dom.unrank(k)
        where = ", ".join(f"{nm}={c}" for nm, c in zip(spec.names, x))
        raise RangeViolation(
            f"{spec.names[i]} evaluates to {images[k, i]} at state ({where}), "
            f"outside {dom.lower[i]}..{dom.upper[i]}"
        )
    images = np.minimum(np.maximum(images, lo), hi).astype(np.int64)
    return Network(dom, images, tuple(spec.names), clamped_values=clamped)


def loads(text: str, clamp: bool = False) -> Network:
    return elaborate(parse(text), clamp=clamp)


def load(path, clamp: bool = False) -> Network:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), clamp=clamp)


# -- rendering ---------------------------------------------------------------

def _iter_states(dom: IntervalDomain):
    for row in dom.states_array():
        yield tuple(int(c) for c in row)


def _fmt(x) -> str:
    return " ".join(str(c) for c in x)


def render_domain(net_or_names, domain: IntervalDomain | None = None) -> str:
    if isinstance(net_or_names, Network):
        names, domain = net_or_names.names, net_or_names.domain
    else:
        names = net_or_names
    return "".join(f"domain {nm} {a}..{b}\n" for nm, a, b in zip(names, domain.lower, domain.upper))


def render(net: Network) -> str:
    """Table-form ``.dds`` text for ``net``."""
    lines = [render_domain(net)]
    for x, y in zip(net.domain.states_array(), net.images):
        lines.append(f"{_fmt(x)} -> {_fmt(y)}\n")
    return "".join(lines)


_PREC = {"or": 1, "and": 2, "<": 3, "<=": 3, ">": 3, ">=": 3, "==": 3, "!=": 3, "+": 4, "-": 4, "*": 5}


def render_expr(e: Expr, prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value) if e.value >= 0 else f"({e.value})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        s = f"not {render_expr(e.operand, 6)}" if e.op == "not" else f"-{render_expr(e.operand, 6)}"
        return s if prec <= 6 else f"({s})"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(render_expr(a) for a in e.args)})"
    p = _PREC[e.op]
    s = f"{render_expr(e.left, p)} {e.op} {render_expr(e.right, p + 1)}"
    return s if p >= prec else f"({s})"


def render_rules(names: Sequence[str], domain: IntervalDomain, rules: Sequence[Expr]) -> str:
    body = "".join(f"rule {nm} = {render_expr(e)}\n" for nm, e in zip(names, rules))
    return render_domain(names, domain) + body
