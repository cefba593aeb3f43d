import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sflowkit import expr as ex
from sflowkit.errors import DomainError, ExprSyntaxError, NotDifferentiable, UnknownIdentifier


def test_literal():
    assert ex.parse("5") == ex.Num(5.0)


def test_grammar_reading():
    e = ex.parse("lambda*(5+sin(x))")
    assert e == ex.BinOp("*", ex.Var("lambda"), ex.BinOp("+", ex.Num(5.0), ex.Call("sin", ex.Var("x"))))


def test_precedence_and_associativity():
    assert ex.parse("1-2-3") == ex.parse("(1-2)-3")
    assert ex.parse("2^3^2") == ex.parse("2^(3^2)")
    assert ex.parse("-2^2") == ex.Neg(ex.parse("2^2"))
    assert ex.evaluate(ex.parse("-2^2"), 0, 0) == -4.0
    assert ex.evaluate(ex.parse("2^-1"), 0, 0) == 0.5
    assert ex.evaluate(ex.parse("1+2*3"), 0, 0) == 7.0
    assert ex.evaluate(ex.parse("8/4/2"), 0, 0) == 1.0


def test_exponent_literals():
    assert ex.evaluate(ex.parse("1e-3*lambda"), 2.0, 0) == pytest.approx(2e-3)
    assert ex.evaluate(ex.parse(".5+2.E1"), 0, 0) == 20.5


@pytest.mark.parametrize("src, offset", [("2+*3", 2), ("(1+2", 4), ("1 $ 2", 2), ("", 0), ("sin", 0)])
def test_syntax_error_offsets(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        ex.parse(src)
    assert info.value.offset == offset


def test_offsets_are_bytes():
    with pytest.raises(ExprSyntaxError) as info:
        ex.parse("sin(x) + é")
    assert info.value.offset == len("sin(x) + ".encode())


def test_unknown_identifiers():
    with pytest.raises(UnknownIdentifier) as info:
        ex.parse("lambda*y")
    assert info.value.offset == 7
    with pytest.raises(UnknownIdentifier):
        ex.parse("tan(x)")
    with pytest.raises(UnknownIdentifier):
        ex.parse("u+1")  # u only exists in the nonlinearity language
    assert ex.parse("u+v", variables=ex.NONLINEARITY_VARS) == ex.BinOp("+", ex.Var("u"), ex.Var("v"))


def test_overflowing_literal():
    with pytest.raises(ExprSyntaxError):
        ex.parse("1e999")


def test_eval_examples():
    assert ex.evaluate(ex.parse("lambda*x"), 0.5, 2.0) == 1.0
    assert ex.evaluate(ex.parse("sin(x)"), 0.3, 0.0) == 0.0
    with pytest.raises(DomainError):
        ex.evaluate(ex.parse("1/ (x-1)"), 0.0, 1.0)
    with pytest.raises(DomainError):
        ex.evaluate(ex.parse("sqrt(x)"), 0.0, -1.0)
    with pytest.raises(DomainError):
        ex.evaluate(ex.parse("exp(x)"), 0.0, 1000.0)


def test_eval_broadcasts():
    out = ex.evaluate(ex.parse("lambda+x"), np.array([0.0, 1.0]), 2.0)
    assert out.tolist() == [2.0, 3.0]
    assert ex.evaluate(ex.parse("3"), np.zeros(4), 0.0).shape == (4,)


def test_diff_examples():
    assert ex.to_str(ex.diff_lambda(ex.parse("lambda*5"))) == "5"
    assert ex.to_str(ex.diff_lambda(ex.parse("sin(x)"))) == "0"
    d = ex.diff_lambda(ex.parse("lambda^2*cos(x)"))
    assert ex.evaluate(d, 3.0, 0.0) == pytest.approx(6.0, abs=1e-12)
    e = ex.parse("lambda^2*cos(x)")
    fd = (ex.evaluate(e, 3.0 + 1e-6, 0.0) - ex.evaluate(e, 3.0 - 1e-6, 0.0)) / 2e-6
    assert abs(fd - 6.0) <= 1e-8 * 10  # central difference carries O(eps/h) rounding


def test_diff_rejects_abs():
    with pytest.raises(NotDifferentiable):
        ex.diff_lambda(ex.parse("abs(x)*lambda"))
    with pytest.raises(NotDifferentiable):
        ex.diff_lambda(ex.parse("abs(x)"))


def test_diff_variable_exponent():
    e = ex.parse("x^lambda")
    d = ex.diff_lambda(e)
    assert ex.evaluate(d, 1.5, 2.0) == pytest.approx(2.0**1.5 * math.log(2.0))


def test_substitute_and_variables():
    e = ex.parse("lambda*x+1")
    assert ex.variables(e) == {"lambda", "x"}
    f = ex.substitute(e, "lambda", ex.parse("1-lambda"))
    assert ex.evaluate(f, 0.25, 2.0) == pytest.approx(0.75 * 2.0 + 1)


# property tests -------------------------------------------------------------

_leaf = st.one_of(
    st.sampled_from([ex.Var("lambda"), ex.Var("x")]),
    st.floats(0.0, 3.0, allow_nan=False).map(lambda v: ex.Num(round(v, 3))),
)


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: ex.BinOp(*t)),
        children.map(ex.Neg),
        st.tuples(st.sampled_from(["sin", "cos"]), children).map(lambda t: ex.Call(*t)),
        st.tuples(children, st.integers(1, 3)).map(lambda t: ex.BinOp("^", t[0], ex.Num(float(t[1])))),
    )


smooth_exprs = st.recursive(_leaf, _extend, max_leaves=6)


@settings(max_examples=100, deadline=None)
@given(smooth_exprs, st.floats(-1.5, 1.5), st.floats(0.0, 3.0))
def test_diff_matches_central_difference(e, lam, x):
    d = ex.evaluate(ex.diff_lambda(e), lam, x)
    h = 1e-6
    fd = (ex.evaluate(e, lam + h, x) - ex.evaluate(e, lam - h, x)) / (2 * h)
    assert abs(d - fd) <= 1e-6 * (1 + abs(d))


@settings(max_examples=200, deadline=None)
@given(st.recursive(_leaf, _extend, max_leaves=8))
def test_print_reparses_to_same_tree(e):
    assert ex.parse(ex.to_str(e)) == e


def test_expressions_are_immutable():
    e = ex.parse("x+1")
    with pytest.raises(Exception):
        e.op = "-"
