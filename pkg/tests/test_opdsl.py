import re

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from carleman.models import BurgersParams, VlasovParams, burgers_f2, burgers_system, field_operator, vlasov_system
from carleman.opdsl import (
    CompileError,
    Const,
    Coord,
    CumInt,
    Delta,
    Deriv,
    FullInt,
    Neg,
    ParseError,
    Product,
    Sum,
    Symbol,
    compile_operator,
    parse_operator,
    pretty,
)
from carleman.pde import Axis, Compose, Derivative, GridSpec, Scale, Zero

G1 = GridSpec.periodic(16)
G2 = GridSpec((Axis(8, 0, 2 * np.pi), Axis(8, -6, 6, "box")))

RESERVED = re.compile(r"([xw][0-9]+|d[0-9]*|d[xw][0-9]+|cumint|int|delta)$")


# -- parsing -----------------------------------------------------------------

def test_parse_examples():
    assert parse_operator("mu * d2/dx1^2") == Product((Symbol("mu"), Deriv(1, 2, "x")))
    assert parse_operator("-delta(w1=x1) * d/dx1") == Product((Neg(Delta(1, 1)), Deriv(1, 1, "x")))
    assert parse_operator("-x2 * d/dx1") == Product((Neg(Coord(2, "x")), Deriv(1, 1, "x")))
    assert parse_operator("-c1 * d/dx2 * cumint(w1) * int(w2)") == Product(
        (Neg(Symbol("c1")), Deriv(2, 1, "x"), CumInt(1), FullInt(2))
    )


def test_whitespace_is_insignificant():
    assert parse_operator(" d2 / dx1 ^ 2 ") == parse_operator("d2/dx1^2")
    assert parse_operator("delta( w1 = x1 )") == Delta(1, 1)


def test_subtraction_and_precedence():
    assert parse_operator("a - b * x1") == Sum((Symbol("a"), Neg(Product((Symbol("b"), Coord(1, "x"))))))
    assert parse_operator("(a + b) * x1") == Product((Sum((Symbol("a"), Symbol("b"))), Coord(1, "x")))


@pytest.mark.parametrize("src, pos", [
    ("d2/dx1^3", 7),
    ("x1 +", 4),
    ("cumint(x1)", 7),
    ("delta(w1=w2)", 9),
    ("x0", 0),
    ("(x1", 3),
    ("x1 $", 3),
    ("", 0),
    ("d3 * x1", 0),
])
def test_parse_errors_carry_position(src, pos):
    with pytest.raises(ParseError) as info:
        parse_operator(src)
    assert info.value.position == pos
    assert info.value.expected


def test_position_is_a_byte_offset():
    # a non-breaking space is two bytes in UTF-8
    with pytest.raises(ParseError) as info:
        parse_operator("\u00a0x1 $")
    assert info.value.position == 5


def test_nesting_limit_is_a_parse_error():
    for src in ("(" * 5000 + "x1" + ")" * 5000, "-" * 5000 + "x1"):
        with pytest.raises(ParseError):
            parse_operator(src)


def ast_strategy():
    dims = st.integers(1, 3)
    copies = st.sampled_from(["x", "w"])
    names = st.from_regex(r"[a-z_][a-z0-9_]{0,5}", fullmatch=True).filter(lambda s: not RESERVED.match(s))
    numbers = st.floats(0, 1e12, allow_nan=False, allow_infinity=False).map(lambda v: abs(v) + 0.0)
    leaves = st.one_of(
        numbers.map(Const),
        names.map(Symbol),
        st.builds(Coord, dims, copies),
        st.builds(Deriv, dims, st.integers(1, 4), copies),
        st.builds(CumInt, dims),
        st.builds(FullInt, dims),
        st.builds(Delta, dims, dims),
    )
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            kids.map(Neg),
            st.lists(kids, min_size=2, max_size=4).map(lambda xs: Product(tuple(xs))),
            st.lists(kids, min_size=2, max_size=4).map(lambda xs: Sum(tuple(xs))),
        ),
        max_leaves=20,
    )


@settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(ast_strategy())
def test_pretty_print_round_trip(ast):
    assert parse_operator(pretty(ast)) == ast


@settings(max_examples=500, deadline=None)
@given(st.text(max_size=40))
def test_arbitrary_text_only_raises_parse_error(src):
    try:
        parse_operator(src)
    except ParseError as exc:
        assert 0 <= exc.position <= len(src.encode("utf-8"))


@settings(max_examples=500, deadline=None)
@given(st.text(alphabet="xwd0123/()=^*+-. cumintdela", max_size=40))
def test_grammar_alphabet_only_raises_parse_error(src):
    try:
        ast = parse_operator(src)
    except ParseError as exc:
        assert 0 <= exc.position <= len(src.encode("utf-8"))
    else:
        assert parse_operator(pretty(ast)) == ast


# -- compiling ---------------------------------------------------------------

def test_zero_compiles_to_zero_operator():
    assert isinstance(compile_operator("0", G1), Zero)


def test_compiled_viscosity_term():
    op = compile_operator("mu * d2/dx1^2", G1, {"mu": 0.5})
    f = np.random.default_rng(0).standard_normal(16)
    np.testing.assert_allclose(op.apply(f, G1), 0.5 * Derivative(0, 2).apply(f, G1), atol=1e-14)


def test_compiled_burgers_f2_matches_hand_built():
    rng = np.random.default_rng(1)
    op = compile_operator("-delta(w1=x1) * d/dx1", G1)
    ref = burgers_f2("x")
    for _ in range(100):
        f = rng.standard_normal((16, 16, 1))
        assert np.max(np.abs(op.apply(f, G1) - ref.apply(f, G1))) <= 1e-13


def test_compiled_vlasov_entries_match_hand_built():
    rng = np.random.default_rng(2)
    p = VlasovParams(0.8, -0.3, G2)
    hand = vlasov_system(p)
    f2 = compile_operator("-c1 * d/dx2 * cumint(w1) * int(w2)", G2, {"c1": 0.8})
    f1 = compile_operator("-x2 * d/dx1", G2)
    for _ in range(100):
        F = rng.standard_normal((8, 8, 8, 8, 1))
        assert np.max(np.abs(f2.apply(F, G2) - hand.F2[0][0].apply(F, G2))) <= 1e-13
        f = rng.standard_normal((8, 8))
        assert np.max(np.abs(f1.apply(f, G2) - hand.F1[0][0].apply(f, G2))) <= 1e-13
    np.testing.assert_allclose(f2.apply(F, G2), Compose(Scale(-0.8), field_operator()).apply(F, G2), atol=0)


def test_dsl_system_matches_built_in_burgers():
    grid = GridSpec.periodic(12)
    from carleman.pde import PDEQuadraticSystem

    sys = PDEQuadraticSystem(
        grid, 1, None,
        [[compile_operator("mu * d2/dx1^2", grid, {"mu": 0.2})]],
        [[compile_operator("-delta(w1=x1) * d/dx1", grid)]],
    )
    u = np.sin(grid.axes[0].nodes)
    ref = burgers_system(BurgersParams(0.2, grid)).vector_field(u)
    np.testing.assert_allclose(sys.vector_field(u), ref, atol=1e-14)


def test_dangling_w_is_listed():
    with pytest.raises(CompileError, match="w2"):
        compile_operator("d/dx2 * cumint(w1)", G2)
    with pytest.raises(CompileError, match="w1"):
        compile_operator("d/dw1", G1)


def test_use_after_consumption():
    with pytest.raises(CompileError, match="w1"):
        compile_operator("cumint(w1) * cumint(w1) * int(w2)", G2)


def test_unbound_symbol():
    with pytest.raises(CompileError, match="mu"):
        compile_operator("mu * d2/dx1^2", G1)


def test_one_copy_operators_reject_w():
    with pytest.raises(CompileError):
        compile_operator("delta(w1=x1)", G1, arity=1)


def test_dimension_out_of_range():
    with pytest.raises(CompileError, match="x2"):
        compile_operator("x2", G1)


def test_sum_terms_must_agree_on_w():
    with pytest.raises(CompileError):
        compile_operator("delta(w1=x1) + d/dx1", G1, arity=2)
    op = compile_operator("delta(w1=x1) * d/dx1 + 2 * delta(w1=x1) * d/dw1", G1)
    f = np.random.default_rng(3).standard_normal((16, 16, 1))
    want = -burgers_f2("x").apply(f, G1) - 2 * burgers_f2("w").apply(f, G1)
    np.testing.assert_allclose(op.apply(f, G1), want, atol=1e-12)


@pytest.mark.parametrize("src, grid, bindings", [
    ("-delta(w1=x1) * d/dx1", G1, {}),
    ("mu * d2/dx1^2 - 3 * x1", G1, {"mu": 0.1}),
    ("-c1 * d/dx2 * cumint(w1) * int(w2)", G2, {"c1": 1.0}),
    ("(x2 + 1) * d/dx1 * int(w1) * delta(w2=x2)", G2, {}),
])
def test_compiled_operators_are_linear(src, grid, bindings):
    op = compile_operator(src, grid, bindings)
    rng = np.random.default_rng(4)
    arity = 2 if "w" in src else 1
    shape = grid.shape * arity + ((1,) if arity == 2 else ())
    for _ in range(10):
        a, b = rng.standard_normal((2,) + shape)
        s = rng.uniform(-3, 3)
        lhs = op.apply(a + s * b, grid)
        rhs = op.apply(a, grid) + s * op.apply(b, grid)
        assert np.max(np.abs(lhs - rhs)) <= 1e-13 * max(1.0, np.max(np.abs(lhs)))
