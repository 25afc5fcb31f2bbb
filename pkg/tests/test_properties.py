"""Hypothesis properties tying the pieces together."""

from hypothesis import given, settings, strategies as st

from qcsp.classifier import (
    is_affine,
    is_anti_horn,
    is_bijunctive,
    is_horn,
)
from qcsp.evaluator import evaluate
from qcsp.gadgets import complement_constraint, complement_expression
from qcsp.model import Constraint, QuantifierBlock, Quantifier, QuantifiedExpression, app, make_constraint
from qcsp.solvers import NormalFormKind, synthesize_normal_form

tables3 = st.integers(min_value=0, max_value=255)


@given(tables3)
def test_table_string_roundtrip(bits):
    c = Constraint("f", 3, bits)
    assert make_constraint("f", 3, c.table()) == c


@given(tables3)
def test_complement_involution(bits):
    c = Constraint("f", 3, bits)
    assert complement_constraint(complement_constraint(c)) == c


@given(tables3)
def test_closure_flags_match_synthesis(bits):
    c = Constraint("f", 3, bits)
    for flag, kind in (
        (is_horn, NormalFormKind.HORN_CNF),
        (is_anti_horn, NormalFormKind.ANTI_HORN_CNF),
        (is_bijunctive, NormalFormKind.TWO_CNF),
        (is_affine, NormalFormKind.XOR_CNF),
    ):
        assert flag(c) == (synthesize_normal_form(c, kind) is not None)


@st.composite
def small_expressions(draw):
    n_vars = draw(st.integers(min_value=1, max_value=6))
    names = [f"v{i}" for i in range(n_vars)]
    first = draw(st.sampled_from([Quantifier.EXISTS, Quantifier.FORALL]))
    split = draw(st.integers(min_value=1, max_value=n_vars))
    blocks = [QuantifierBlock(first, tuple(names[:split]))]
    if split < n_vars:
        other = (
            Quantifier.FORALL if first is Quantifier.EXISTS else Quantifier.EXISTS
        )
        blocks.append(QuantifierBlock(other, tuple(names[split:])))
    n_apps = draw(st.integers(min_value=0, max_value=5))
    apps = []
    for _ in range(n_apps):
        bits = draw(st.integers(min_value=0, max_value=255))
        c = Constraint(f"c{bits}", 3, bits)
        args = [
            draw(
                st.one_of(
                    st.sampled_from(names), st.integers(min_value=0, max_value=1)
                )
            )
            for _ in range(3)
        ]
        apps.append(app(c, *args))
    return QuantifiedExpression(tuple(blocks), tuple(apps))


@settings(max_examples=150, deadline=None)
@given(small_expressions())
def test_complement_preserves_truth(expr):
    assert evaluate(expr) == evaluate(complement_expression(expr))


@settings(max_examples=150, deadline=None)
@given(small_expressions())
def test_double_complement_is_identity(expr):
    assert complement_expression(complement_expression(expr)) == expr
