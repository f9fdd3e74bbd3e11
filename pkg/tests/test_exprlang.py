# -*- coding: utf-8 -*-
# test_exprlang.py - Parser, avaliação em reais estendidos e composição Psi = Phi(E)

import math

import pytest
from hypothesis import given, settings, strategies as st

from eorlicz.errors import CompositionError, DomainError, ParseError, UnboundVariableError
from eorlicz.exprlang import (
    INF, BinOp, Call, Num, Var, compose, compose_sources, evaluate, ext_mul, ext_pow, parse, unparse,
)


# --- Parser ---

def test_parse_builds_expected_tree():
    assert parse("t*u^2") == BinOp("*", Var("t"), BinOp("^", Var("u"), Num(2.0)))
    assert parse("exp(t+u)-1") == BinOp("-", Call("exp", (BinOp("+", Var("t"), Var("u")),)), Num(1.0))


def test_power_is_right_associative_and_binds_tighter_than_minus():
    assert evaluate(parse("2^3^2"), {}) == 512.0
    assert evaluate(parse("-u^2"), {"u": 3.0}) == -9.0


def test_inf_literal():
    assert parse("inf") == Num(INF)
    assert unparse(parse("inf")) == "inf"


def test_unparse_is_parenthesized_and_reparses():
    expr = parse("piecewise(u<1, -log(u+abs(t)^(1/p)+1), inf)")
    assert parse(unparse(expr)) == expr


@pytest.mark.parametrize("source, offset", [
    ("u + ", 4),
    ("foo(u)", 0),
    ("u + w", 4),
    ("2u", 1),
])
def test_parse_errors_report_offset(source, offset):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert info.value.offset == offset


def test_parse_error_byte_offset_counts_utf8():
    with pytest.raises(ParseError) as info:
        parse("piecewise(u ≤ 1, u, w)")
    assert info.value.offset == 20
    assert info.value.byte_offset == 22


@pytest.mark.parametrize("source", ["", "   ", "exp(u, t)", "piecewise(u, 1)", "exp(u<1)", "u < 1", "(u"])
def test_malformed_sources_raise(source):
    with pytest.raises(ParseError):
        parse(source)


def test_unicode_comparisons_are_aliases():
    assert parse("piecewise(u ≥ 1, 1, 0)") == parse("piecewise(u >= 1, 1, 0)")


# --- Avaliação ---

def test_cancellation_free_rewrites():
    assert evaluate(parse("exp(u)-1"), {"u": 1e-10}) == pytest.approx(1e-10, rel=1e-12)
    assert evaluate(parse("cosh(u)-1"), {"u": 1e-8}) == pytest.approx(5e-17, rel=1e-12)
    assert evaluate(parse("ln(u+1)"), {"u": 1e-12}) == pytest.approx(1e-12, rel=1e-12)


def test_log_of_exp_is_the_exponent():
    assert evaluate(parse("ln(exp(u^2))"), {"u": 1e-8}) == pytest.approx(1e-16, rel=1e-12)
    # exp(10000) estouraria para +inf
    assert evaluate(parse("t*log(exp(u^2))"), {"t": 0.5, "u": 100.0}) == 5000.0
    assert evaluate(parse("ln(exp(u))"), {"u": INF}) == INF


def test_log_is_natural_log():
    assert evaluate(parse("-log(3)"), {}) == pytest.approx(-1.0986122886681098)


@pytest.mark.parametrize("source, expected", [
    ("0*inf", 0.0),
    ("inf*2", INF),
    ("0^0", 1.0),
    ("exp(1000)", INF),
    ("2^1024", INF),
    ("inf+1", INF),
    ("1/inf", 0.0),
    ("max(u, 1, t)", 3.0),
    ("min(u)", 2.0),
    ("abs(-2)", 2.0),
    ("sqrt(inf)", INF),
])
def test_extended_real_evaluation(source, expected):
    assert evaluate(parse(source), {"t": 3.0, "u": 2.0}) == expected


@pytest.mark.parametrize("source", ["inf-inf", "ln(0)", "1/0", "0/0", "-exp(1000)", "(-2)^0.5", "sqrt(-1)", "inf*(-1)"])
def test_undefined_forms_raise_domain_error(source):
    with pytest.raises(DomainError):
        evaluate(parse(source), {})


def test_ext_helpers_follow_measure_theory_conventions():
    assert ext_mul(0.0, INF) == 0.0
    assert ext_pow(INF, -1.0) == 0.0
    assert ext_pow(0.5, INF) == 0.0


def test_piecewise_first_true_branch_wins_and_is_lazy():
    expr = parse("piecewise(u<1, 0, u<2, 1, 2)")
    assert [evaluate(expr, {"u": u}) for u in (0.5, 1.0, 1.5, 2.0)] == [0.0, 1.0, 1.0, 2.0]
    # o ramo não escolhido não é avaliado (t não está ligado)
    assert evaluate(parse("piecewise(u<1, u, t)"), {"u": 0.5}) == 0.5


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        evaluate(parse("t+u"), {"u": 1.0})


# --- Composição ---

def test_compose_evaluates_in_stages():
    psi = compose_sources("t*u^2", ("abs(t)", "u"))
    assert psi(-2.0, 3.0) == 18.0
    assert psi.sources() == {"phi": "(t * (u ^ 2.0))", "E": ["abs(t)", "u"], "p": None}


def test_compose_requires_p_when_used():
    with pytest.raises(UnboundVariableError):
        compose_sources("u^p", ("t", "u"))
    assert compose_sources("u^p", ("t", "u"), 3)(1.0, 2.0) == 8.0


def test_composition_errors_name_the_stage():
    with pytest.raises(CompositionError) as inner:
        compose_sources("u", ("t", "ln(u)"))(1.0, 0.0)
    assert inner.value.stage == "inner"
    with pytest.raises(CompositionError) as outer:
        compose_sources("ln(u)", ("t", "u-1"))(1.0, 1.0)
    assert outer.value.stage == "outer"


def test_example_compositions_match_closed_forms():
    psi = compose(parse("exp(t+u)-1"), parse("u"), parse("u"))
    for u in (1e-9, 0.3, 2.0):
        assert psi(0.7, u) == pytest.approx(math.expm1(2 * u), rel=1e-12)
    ex43 = compose_sources("piecewise(u<1, -log(u+abs(t)^(1/p)+1), inf)", ("u^p", "u"), 2)
    assert ex43(1.0, 0.25) == pytest.approx(-math.log(1.5), rel=1e-12)
    assert ex43(1.0, 1.0) == INF


# --- Propriedades ---

_leaves = st.one_of(
    st.sampled_from(["t", "u", "p", "inf"]),
    st.integers(min_value=0, max_value=100).map(str),
    st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False).map(repr),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, st.sampled_from(["+", "-", "*", "/", "^"]), children).map(lambda x: f"({x[0]} {x[1]} {x[2]})"),
        children.map(lambda c: f"-{c}"),
        st.tuples(st.sampled_from(["exp", "ln", "abs", "cosh", "sqrt"]), children).map(lambda x: f"{x[0]}({x[1]})"),
        st.tuples(children, st.sampled_from(["<", "<=", ">", ">=", "="]), children, children, children).map(
            lambda x: f"piecewise({x[0]} {x[1]} {x[2]}, {x[3]}, {x[4]})"),
    )


@settings(max_examples=200, deadline=None)
@given(st.recursive(_leaves, _extend, max_leaves=12))
def test_unparse_then_parse_preserves_the_tree(source):
    expr = parse(source)
    assert parse(unparse(expr)) == expr


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=50.0), st.floats(min_value=0.0, max_value=50.0))
def test_evaluation_is_deterministic_and_never_nan(t, u):
    expr = parse("exp(t+u)-1 + cosh(t*u)-1 + t*u^2")
    first = evaluate(expr, {"t": t, "u": u})
    assert first == evaluate(expr, {"t": t, "u": u})
    assert not math.isnan(first)
