"""Coefficient-expression language: parsing, evaluation, exact differentiation.

Grammar (precedence high to low)::

    atom    := number | name | func '(' expr ')' | '(' expr ')'
    power   := atom ['^' unary]            (right associative)
    unary   := '-' unary | power
    term    := unary (('*' | '/') unary)*
    expr    := term (('+' | '-') term)*

Functions: sin, cos, exp, sqrt, abs. Evaluation broadcasts over numpy arrays.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ExprSyntaxError, NotDifferentiable, UnknownIdentifier

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "abs")
COEFFICIENT_VARS = ("lambda", "x")
NONLINEARITY_VARS = ("lambda", "x", "u", "v")

# `log` is never produced by the parser; diff() needs it for x^g with g depending on x.
_INTERNAL_FUNCTIONS = ("log",)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(src, start)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(src, len(src))))
    return tokens


def _byte_offset(src, index):
    return len(src[:index].encode("utf-8"))


class _Parser:
    def __init__(self, src, variables):
        self.tokens = _tokenize(src)
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, off = self.take()
        if text != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", off)

    def parse(self):
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, off = self.take()
        if kind == "num":
            value = float(text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"literal {text!r} overflows", off)
            return Num(value)
        if kind == "name":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if text not in FUNCTIONS:
                    raise UnknownIdentifier(text, off)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text in self.variables:
                return Var(text)
            if text in FUNCTIONS:
                raise ExprSyntaxError(f"function {text!r} requires an argument", off)
            raise UnknownIdentifier(text, off)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", off)


def parse(src: str, variables=COEFFICIENT_VARS) -> Expr:
    """Parse `src` into an immutable AST.

    Raises ExprSyntaxError (with a byte offset) on malformed input and
    UnknownIdentifier for names outside `variables` and the function set.
    """
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src, tuple(variables)).parse()


# ---------------------------------------------------------------------------
# evaluation

_UFUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt, "abs": np.abs, "log": np.log}


def _ev(e, env, check):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Neg):
        return -_ev(e.arg, env, check)
    if isinstance(e, BinOp):
        left = _ev(e.left, env, check)
        right = _ev(e.right, env, check)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            if check and np.any(np.asarray(right) == 0):
                raise DomainError("division by zero")
            return np.divide(left, right)
        return np.power(left, right)
    arg = _ev(e.arg, env, check)
    if check:
        if e.fn == "sqrt" and np.any(np.asarray(arg) < 0):
            raise DomainError("sqrt of negative argument")
        if e.fn == "log" and np.any(np.asarray(arg) <= 0):
            raise DomainError("log of non-positive argument")
    return _UFUNCS[e.fn](arg)


def evaluate(e: Expr, lam, x, u=0.0, v=0.0, check=True):
    """Evaluate `e` at (lambda, x[, u, v]); arrays broadcast elementwise.

    With ``check=False`` per-node domain checks are skipped; the final
    finiteness check is always applied.
    """
    env = {"lambda": lam, "x": x, "u": u, "v": v}
    with np.errstate(all="ignore"):
        out = _ev(e, env, check)
    out = np.asarray(out, dtype=float)
    shape = np.broadcast(np.asarray(lam), np.asarray(x), np.asarray(u), np.asarray(v)).shape
    if out.shape != shape:
        out = np.broadcast_to(out, shape).copy()
    if not np.all(np.isfinite(out)):
        raise DomainError("non-finite result")
    if out.ndim == 0:
        return float(out)
    return out


def variables(e: Expr) -> frozenset:
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, (Neg, Call)):
        return variables(e.arg)
    return variables(e.left) | variables(e.right)


def depends_on(e: Expr, name: str) -> bool:
    return name in variables(e)


def _contains_fn(e, fn):
    if isinstance(e, Call):
        return e.fn == fn or _contains_fn(e.arg, fn)
    if isinstance(e, Neg):
        return _contains_fn(e.arg, fn)
    if isinstance(e, BinOp):
        return _contains_fn(e.left, fn) or _contains_fn(e.right, fn)
    return False


def substitute(e: Expr, name: str, repl: Expr) -> Expr:
    """Replace every occurrence of variable `name` by `repl`."""
    if isinstance(e, Var):
        return repl if e.name == name else e
    if isinstance(e, Num):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, name, repl))
    if isinstance(e, Call):
        return Call(e.fn, substitute(e.arg, name, repl))
    return BinOp(e.op, substitute(e.left, name, repl), substitute(e.right, name, repl))


# ---------------------------------------------------------------------------
# differentiation

ZERO = Num(0.0)
ONE = Num(1.0)


def _is(e, value):
    return isinstance(e, Num) and e.value == value


def _add(a, b):
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def _sub(a, b):
    if _is(b, 0):
        return a
    if _is(a, 0):
        return _neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def _mul(a, b):
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def _div(a, b):
    if _is(a, 0):
        return ZERO
    if _is(b, 1):
        return a
    if isinstance(a, Num) and isinstance(b, Num) and b.value != 0:
        return Num(a.value / b.value)
    return BinOp("/", a, b)


def _neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _pow(a, b):
    if _is(b, 0):
        return ONE
    if _is(b, 1):
        return a
    return BinOp("^", a, b)


def _d(e, var):
    if isinstance(e, Num):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if not depends_on(e, var):
        return ZERO
    if isinstance(e, Neg):
        return _neg(_d(e.arg, var))
    if isinstance(e, Call):
        f, df = e.arg, _d(e.arg, var)
        if e.fn == "sin":
            return _mul(Call("cos", f), df)
        if e.fn == "cos":
            return _neg(_mul(Call("sin", f), df))
        if e.fn == "exp":
            return _mul(e, df)
        if e.fn == "sqrt":
            return _div(df, _mul(Num(2.0), e))
        if e.fn == "log":
            return _div(df, f)
        raise NotDifferentiable(f"{e.fn} is not differentiable")
    f, g = e.left, e.right
    if e.op == "+":
        return _add(_d(f, var), _d(g, var))
    if e.op == "-":
        return _sub(_d(f, var), _d(g, var))
    if e.op == "*":
        return _add(_mul(_d(f, var), g), _mul(f, _d(g, var)))
    if e.op == "/":
        return _div(_sub(_mul(_d(f, var), g), _mul(f, _d(g, var))), _pow(g, Num(2.0)))
    # power
    if not depends_on(g, var):
        lowered = Num(g.value - 1.0) if isinstance(g, Num) else _sub(g, ONE)
        return _mul(_mul(g, _pow(f, lowered)), _d(f, var))
    inner = _add(_mul(_d(g, var), Call("log", f)), _div(_mul(g, _d(f, var)), f))
    return _mul(e, inner)


def diff(e: Expr, var: str) -> Expr:
    """Exact symbolic derivative of `e` with respect to `var`."""
    if _contains_fn(e, "abs"):
        raise NotDifferentiable("expression contains abs()")
    return _d(e, var)


def diff_lambda(e: Expr) -> Expr:
    return diff(e, "lambda")


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(e):
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Num) and e.value < 0:
        return 3
    return 5


def _fmt_num(value):
    if value < 0:
        return "(" + "-" + _fmt_num(-value) + ")"
    if value.is_integer() and value < 1e15:
        return str(int(value))
    return repr(value)


def _wrap(e, min_prec):
    s = to_str(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_str(e: Expr) -> str:
    """Render `e` with minimal parentheses; parse(to_str(e)) == e."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, 3)
    if isinstance(e, Call):
        return f"{e.fn}({to_str(e.arg)})"
    p = _PREC[e.op]
    if e.op == "^":
        return f"{_wrap(e.left, 5)}^{_wrap(e.right, 3)}"
    return f"{_wrap(e.left, p)}{e.op}{_wrap(e.right, p + 1)}"


def as_expr(src) -> Expr:
    """Accept an Expr, a string, or a number."""
    if isinstance(src, (Num, Var, Neg, BinOp, Call)):
        return src
    if isinstance(src, (int, float)):
        if not math.isfinite(src):
            raise DomainError("non-finite literal")
        return Num(float(src)) if src >= 0 else Neg(Num(float(-src)))
    return parse(src)
