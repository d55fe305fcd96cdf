"""Rational-function expressions in named parameters.

Grammar (whitespace ignored)::

    expr   := signed (('+' | '-') term)*
    signed := '-' signed | term
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' integer)?
    atom   := integer | identifier | '(' expr ')' | '-' atom

A leading minus negates the whole following term, so ``-a*b/h`` reads as
``-(a*b/h)`` and ``-a^2`` as ``-(a^2)``.  A minus directly after an operator
(``a*-b``) binds to the next atom only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .linalg import RatMatrix, format_fraction, to_fraction


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


class EvalError(ArithmeticError):
    pass


class UnboundParameter(EvalError):
    pass


class ExprZeroDivision(EvalError, ZeroDivisionError):
    pass


class ConstraintViolation(ValueError):
    pass


# --- tree -----------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


Expr = Union[Num, Var, Neg, Add, Sub, Mul, Div, Pow]


# --- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, ident, other = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", num, start))
        elif ident is not None:
            tokens.append(("id", ident, start))
        elif other in "+-*/^()":
            tokens.append((other, other, start))
        elif other.isspace():
            pass
        else:
            raise ExprSyntaxError(f"unknown character {other!r}", text, start)
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        raise ExprSyntaxError(message, self.text, self.tokens[self.i][2])

    def expr(self) -> Expr:
        node = self.signed()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def signed(self) -> Expr:
        if self.peek() == "-":
            self.take()
            return Neg(self.signed())
        return self.term()

    def term(self) -> Expr:
        node = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            if self.peek() != "num":
                self.fail("exponent must be a non-negative integer")
            return Pow(base, int(self.take()[1]))
        return base

    def atom(self) -> Expr:
        kind = self.peek()
        if kind == "num":
            return Num(Fraction(int(self.take()[1])))
        if kind == "id":
            return Var(self.take()[1])
        if kind == "(":
            self.take()
            inner = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "-":
            self.take()
            return Neg(self.atom())
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {self.tokens[self.i][1]!r}")


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    if p.peek() != "end":
        p.fail(f"unexpected {p.tokens[p.i][1]!r}")
    return node


# --- printing -------------------------------------------------------------

def _atom_str(e: Expr) -> str:
    if isinstance(e, Num):
        if e.value.denominator == 1 and e.value >= 0:
            return str(e.value.numerator)
        return f"({format_fraction(e.value)})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + _atom_str(e.arg)
    return f"({to_string(e)})"


def _factor_str(e: Expr) -> str:
    if isinstance(e, Pow):
        base = _atom_str(e.base)
        if isinstance(e.base, Neg):
            base = f"({base})"
        return f"{base}^{e.exp}"
    return _atom_str(e)


def _term_str(e: Expr) -> str:
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        left = _term_str(e.left)
        if isinstance(e.left, Neg):
            # a leading minus would swallow the whole product
            left = f"({left})"
        return f"{left}{op}{_factor_str(e.right)}"
    return _factor_str(e)


def _signed_str(e: Expr) -> str:
    if isinstance(e, Neg):
        return "-" + _signed_str(e.arg)
    return _term_str(e)


def to_string(e: Expr) -> str:
    """Canonical text; ``parse_expr(to_string(e)) == e`` for parsed trees."""
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        return f"{to_string(e.left)}{op}{_term_str(e.right)}"
    return _signed_str(e)


def variables(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, (Neg, Pow)):
        return variables(e.arg if isinstance(e, Neg) else e.base)
    return variables(e.left) | variables(e.right)


# --- evaluation -----------------------------------------------------------

def _eval(e: Expr, b: Mapping) -> Fraction:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return b[e.name]
        except KeyError:
            raise UnboundParameter(f"unbound parameter {e.name!r}") from None
    if isinstance(e, Neg):
        return -_eval(e.arg, b)
    if isinstance(e, Pow):
        return _eval(e.base, b) ** e.exp
    lhs = _eval(e.left, b)
    rhs = _eval(e.right, b)
    if isinstance(e, Add):
        return lhs + rhs
    if isinstance(e, Sub):
        return lhs - rhs
    if isinstance(e, Mul):
        return lhs * rhs
    if rhs == 0:
        raise ExprZeroDivision(f"division by zero in {to_string(e)!r}: "
                               f"{to_string(e.right)!r} evaluates to 0")
    return lhs / rhs


def eval_expr(e: Union[Expr, str], env) -> Fraction:
    """Evaluate exactly.  ``env`` is a ParamEnv or a plain mapping."""
    if isinstance(e, str):
        e = parse_expr(e)
    bindings = env.bindings if isinstance(env, ParamEnv) else {k: to_fraction(v) for k, v in env.items()}
    return _eval(e, bindings)


# --- constraints ----------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    lhs: Expr
    op: str  # "=" or "!="
    rhs: Expr

    @classmethod
    def parse(cls, text: str) -> "Constraint":
        if "!=" in text:
            left, right = text.split("!=", 1)
            op = "!="
        elif text.count("=") == 1:
            left, right = text.split("=")
            op = "="
        else:
            raise ExprSyntaxError("constraint needs exactly one '=' or '!='", text, 0)
        return cls(parse_expr(left), op, parse_expr(right))

    def holds(self, bindings: Mapping) -> bool:
        lhs = _eval(self.lhs, bindings)
        rhs = _eval(self.rhs, bindings)
        return (lhs == rhs) if self.op == "=" else (lhs != rhs)

    def variables(self) -> set:
        return variables(self.lhs) | variables(self.rhs)

    def __str__(self) -> str:
        return f"{to_string(self.lhs)} {self.op} {to_string(self.rhs)}"


def parse_constraints(texts: Sequence[str]) -> tuple:
    """Split constraint strings into checkable constraints and doc-only notes.

    Strings starting with ``doc:`` are kept verbatim and never evaluated.
    """
    checked, docs = [], []
    for t in texts:
        if t.startswith("doc:"):
            docs.append(t[4:].strip())
        else:
            checked.append(Constraint.parse(t))
    return tuple(checked), tuple(docs)


class ParamEnv:
    """Exact rational bindings together with the relations they must satisfy."""

    __slots__ = ("bindings", "constraints")

    def __init__(self, bindings: Mapping, constraints: Sequence = ()):
        self.bindings = {k: to_fraction(v) for k, v in bindings.items()}
        self.constraints = tuple(c if isinstance(c, Constraint) else Constraint.parse(c)
                                 for c in constraints)
        for c in self.constraints:
            try:
                ok = c.holds(self.bindings)
            except EvalError as exc:
                raise ConstraintViolation(f"cannot check {c}: {exc}") from exc
            if not ok:
                raise ConstraintViolation(f"constraint {c} violated by {self.describe()}")

    def describe(self) -> str:
        return "{" + ", ".join(f"{k}={format_fraction(v)}" for k, v in sorted(self.bindings.items())) + "}"

    def merged(self, extra: Mapping) -> "ParamEnv":
        b = dict(self.bindings)
        b.update({k: to_fraction(v) for k, v in extra.items()})
        return ParamEnv(b, self.constraints)

    def __repr__(self) -> str:
        return f"ParamEnv({self.describe()})"


# --- matrices -------------------------------------------------------------

class UnknownEntry(EvalError):
    pass


class ExprMatrix:
    """Matrix of expressions; ``None`` marks an entry that is not known."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Optional[Expr]]):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def parse(cls, rows: Sequence[Sequence[Optional[str]]]) -> "ExprMatrix":
        flat = []
        for r in rows:
            if len(r) != len(rows[0]):
                raise ValueError("ragged expression matrix")
            flat.extend(None if s is None else parse_expr(s) for s in r)
        return cls(len(rows), len(rows[0]) if rows else 0, flat)

    def __getitem__(self, key) -> Optional[Expr]:
        r, c = key
        return self.entries[r * self.cols + c]

    def unknown_positions(self) -> list:
        return [(k // self.cols, k % self.cols) for k, e in enumerate(self.entries) if e is None]

    def variables(self) -> set:
        out = set()
        for e in self.entries:
            if e is not None:
                out |= variables(e)
        return out

    def to_strings(self) -> list:
        return [[None if self[r, c] is None else to_string(self[r, c]) for c in range(self.cols)]
                for r in range(self.rows)]


def eval_matrix(m: ExprMatrix, env) -> RatMatrix:
    bindings = env.bindings if isinstance(env, ParamEnv) else {k: to_fraction(v) for k, v in env.items()}
    out = []
    for k, e in enumerate(m.entries):
        r, c = divmod(k, m.cols)
        if e is None:
            raise UnknownEntry(f"entry ({r + 1},{c + 1}) is unknown")
        try:
            out.append(_eval(e, bindings))
        except EvalError as exc:
            raise type(exc)(f"entry ({r + 1},{c + 1}): {exc}") from exc
    return RatMatrix(m.rows, m.cols, out)
