from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pclab.errors import ParseError
from pclab.parser import (
    ExprAst,
    ast_to_string,
    parse_expr,
    parse_poly,
    parse_rat_list,
    parse_ratfun,
)
from pclab.poly import Poly

VARS = ("z", "y0")


def test_beukers_cubic():
    p = parse_poly("t*(t^2-11*t-1)", ("t",))
    t = Poly.variable(("t",), "t")
    assert p == t**3 - t**2 * 11 - t


def test_zero_polynomial():
    assert parse_poly("0", ("t",)).is_zero()


def test_monomial_square():
    assert parse_poly("y0^2", VARS) == Poly.variable(VARS, "y0") ** 2


def test_precedence():
    # ^ binds above unary minus: -x^2 is -(x^2)
    assert parse_poly("-z^2", VARS) == -(Poly.variable(VARS, "z") ** 2)
    # * above +: 1+2*z
    assert parse_poly("1+2*z", VARS) == Poly.variable(VARS, "z").scale(
        Fraction(2)
    ) + Poly.const(VARS, Fraction(1))


def test_ratio_literals_via_division():
    r = parse_ratfun("1/2", VARS)
    assert r.is_poly() and r.num.const_value() == Fraction(1, 2)


def test_syntax_error_carries_offset():
    with pytest.raises(ParseError) as err:
        parse_expr("1+*2", ("z",))
    assert err.value.offset == 2


def test_unknown_variable_rejected():
    with pytest.raises(ParseError):
        parse_expr("q+1", ("z",))


def test_exponent_cap():
    with pytest.raises(ParseError):
        parse_expr("z^65", ("z",))
    parse_expr("z^64", ("z",))


def test_no_implicit_multiplication():
    with pytest.raises(ParseError):
        parse_expr("2z", ("z",))


def test_division_by_zero_literal():
    with pytest.raises(ParseError):
        parse_ratfun("1/(2-2)", ("z",))


def test_rat_lists():
    assert parse_rat_list("1/2,1/2") == [Fraction(1, 2), Fraction(1, 2)]
    assert parse_rat_list("-1/3, 2") == [Fraction(-1, 3), Fraction(2)]
    assert parse_rat_list("") == []
    with pytest.raises(ParseError):
        parse_rat_list("1/0")
    with pytest.raises(ParseError):
        parse_rat_list("3.14")


# -- round-trip property ---------------------------------------------------

_leaf = st.one_of(
    st.integers(min_value=0, max_value=99).map(lambda n: ExprAst("num", value=n)),
    st.sampled_from(VARS).map(lambda v: ExprAst("var", value=v)),
)


def _node(children):
    binary = st.sampled_from(["add", "sub", "mul", "div"])
    return st.one_of(
        st.tuples(binary, children, children).map(
            lambda t: ExprAst(t[0], args=(t[1], t[2]))
        ),
        children.map(lambda c: ExprAst("neg", args=(c,))),
        st.tuples(children, st.integers(min_value=0, max_value=5)).map(
            lambda t: ExprAst("pow", value=t[1], args=(t[0],))
        ),
    )


asts = st.recursive(_leaf, _node, max_leaves=12)


@given(asts)
def test_print_parse_roundtrip(ast):
    text = ast_to_string(ast)
    assert parse_expr(text, VARS) == ast


@given(asts, asts)
def test_lowering_is_additive(x, y):
    try:
        lx = parse_ratfun(ast_to_string(x), VARS)
        ly = parse_ratfun(ast_to_string(y), VARS)
        combined = parse_ratfun(f"({ast_to_string(x)})+({ast_to_string(y)})", VARS)
    except (ParseError, ZeroDivisionError):
        return
    assert combined == lx + ly
