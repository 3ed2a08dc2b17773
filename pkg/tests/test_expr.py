import math

import pytest
from hypothesis import given, settings, strategies as st

from app.core.errors import ArityError, ExprSyntaxError, UnknownIdentifier
from app.geometry.expr import (FUNCTIONS, BinOp, Call, Const, Neg, Num, Var, evaluate, free_variables,
                               parse, to_text, tokenize)


@pytest.mark.parametrize("text, x, expected", [
    ("-t^2", 3.0, -9.0),
    ("2^3^2", 0.0, 512.0),
    ("2^-1", 0.0, 0.5),
    ("1 - 2 - 3", 0.0, -4.0),
    ("8/4/2", 0.0, 1.0),
    ("2*pi", 0.0, 2 * math.pi),
    ("sin(t)^2 + cos(t)^2", 0.7, 1.0),
    ("-(t + 1) * 2", 1.0, -4.0),
    ("1.5e2 + .5", 0.0, 150.5),
])
def test_precedence_and_values(text, x, expected):
    assert evaluate(parse(text), x) == pytest.approx(expected, rel=1e-15)


def test_unary_minus_binds_looser_than_power():
    assert parse("-t^2") == Neg(operand=BinOp(op="^", left=Var(name="t"), right=Num(value=2.0)))


def test_first_free_name_becomes_variable():
    assert free_variables(parse("sin(s) * s + pi")) == {"s"}
    assert free_variables(parse("2 * e")) == set()


def test_tokens_carry_byte_offsets():
    assert [t.offset for t in tokenize("t + sin(t)")] == [0, 2, 4, 7, 8, 9]


def test_offsets_count_bytes_not_characters():
    # U+00A0 - пробел из двух байт UTF-8, U+00E9 вообще не токен
    assert [t.offset for t in tokenize("\u00a0t +\u00a0sin(t)")] == [2, 4, 7, 10, 11, 12]
    with pytest.raises(ExprSyntaxError) as info:
        parse("t + \u00e9")
    assert info.value.offset == 4


@pytest.mark.parametrize("text, offset", [
    ("t $ 2", 2),
    ("t + $", 4),
    ("t +\u00a0$", 5),
    ("(t", 2),
    ("t +", 3),
    ("t )", 2),
])
def test_syntax_errors_report_byte_offset(text, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


def test_empty_expression_is_rejected():
    with pytest.raises(ExprSyntaxError):
        parse("   ")


def test_unknown_function_and_second_variable():
    with pytest.raises(UnknownIdentifier) as info:
        parse("foo(t)")
    assert info.value.offset == 0
    with pytest.raises(UnknownIdentifier) as info:
        parse("t + x", variable="t")
    assert info.value.name == "x"
    assert info.value.offset == 4


@pytest.mark.parametrize("text", ["sin(t, t)", "sin + 1", "cos"])
def test_function_arity(text):
    with pytest.raises(ArityError):
        parse(text)


def test_canonical_text_is_minimal():
    assert to_text(parse("((t)) + (2 * (t))")) == "t + 2 * t"
    assert to_text(parse("(1 - t) - (2 - t)")) == "1 - t - (2 - t)"
    assert to_text(parse("(-t)^2")) == "(-t)^2"
    assert to_text(parse("(2^t)^3")) == "(2^t)^3"


_leaves = st.one_of(
    st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False).map(
        lambda v: Num(value=abs(v))),
    st.sampled_from(["pi", "e"]).map(lambda name: Const(name=name)),
    st.just(Var(name="t")),
)


def _extend(children):
    return st.one_of(
        children.map(lambda c: Neg(operand=c)),
        st.tuples(st.sampled_from("+-*/^"), children, children).map(
            lambda x: BinOp(op=x[0], left=x[1], right=x[2])),
        st.tuples(st.sampled_from(FUNCTIONS), children).map(lambda x: Call(func=x[0], arg=x[1])),
    )


@given(st.recursive(_leaves, _extend, max_leaves=12))
@settings(max_examples=200, deadline=None)
def test_printer_and_parser_agree(node):
    assert parse(to_text(node)) == node
