"""Brute-force evaluator: semantics, budgets, level-membership polarity."""

import random

import pytest

from qcsp.evaluator import (
    BudgetExceededError,
    EvalBudget,
    ShapeMismatchError,
    evaluate,
    qsat_i_member,
)
from qcsp.model import (
    QuantifierBlock,
    QuantifiedExpression,
    app,
    exists,
    forall,
)
from qcsp.presets import EQ2, ID1, NOT1, OIT, OR2, XOR2
from qcsp.randgen import random_constraint, random_expression


def test_eval_examples():
    e = QuantifiedExpression((exists("x"), forall("y")), (app(OR2, "x", "y"),))
    assert evaluate(e) == 1  # x=1 works
    e = QuantifiedExpression((forall("x"),), (app(EQ2, "x", 0),))
    assert evaluate(e) == 0
    e = QuantifiedExpression(
        (forall("x"), exists("f", "t")), (app(EQ2, "x", "f"), app(XOR2, "f", "t"))
    )
    assert evaluate(e) == 1


def test_eval_degenerate():
    assert evaluate(QuantifiedExpression((), ())) == 1
    assert evaluate(QuantifiedExpression((), (app(EQ2, 0, 1),))) == 0
    assert evaluate(QuantifiedExpression((forall("x"),), ())) == 1


def test_budget_is_an_error_not_an_answer():
    e = QuantifiedExpression(
        (exists(*[f"v{i}" for i in range(30)]),), (app(OR2, "v0", "v1"),)
    )
    with pytest.raises(BudgetExceededError):
        evaluate(e)
    assert evaluate(e, EvalBudget(max_variables=30)) == 1


def test_node_limit():
    # true on every row except all-ones, so the forall walks the whole tree
    from qcsp.model import Constraint

    nearly_true = Constraint("NT", 10, ((1 << (1 << 10)) - 1) ^ (1 << ((1 << 10) - 1)))
    names = [f"v{i}" for i in range(10)]
    e = QuantifiedExpression(
        (forall(*names),), (app(nearly_true, *names),)
    )
    with pytest.raises(BudgetExceededError):
        evaluate(e, EvalBudget(max_variables=20, node_limit=50))
    assert evaluate(e, EvalBudget(max_variables=20)) == 0


def test_budget_monotone():
    rng = random.Random(3)
    for _ in range(100):
        cs = [random_constraint(rng, rng.randint(1, 3)) for _ in range(2)]
        e = random_expression(rng, cs, rng.randint(1, 8), rng.randint(1, 8))
        small = evaluate(e, EvalBudget(max_variables=8))
        assert small == evaluate(e, EvalBudget(max_variables=24))


def test_block_permutation_soundness():
    # permuting variables inside one block never changes the value
    rng = random.Random(11)
    for _ in range(500):
        cs = [random_constraint(rng, rng.randint(1, 3)) for _ in range(2)]
        e = random_expression(rng, cs, rng.randint(2, 12), rng.randint(1, 10),
                              const_prob=0.1)
        want = evaluate(e)
        blocks = []
        for b in e.prefix:
            vs = list(b.vars)
            rng.shuffle(vs)
            blocks.append(QuantifierBlock(b.quantifier, tuple(vs)))
        assert evaluate(QuantifiedExpression(tuple(blocks), e.matrix)) == want


def test_qsat_member_examples():
    e = QuantifiedExpression((exists("x"),), (app(ID1, "x"),))
    assert qsat_i_member(e, 1) == 1
    e = QuantifiedExpression((forall("x"), exists("y")), (app(XOR2, "x", "y"),))
    assert qsat_i_member(e, 2) == 0  # the expression is true, so not a member
    e = QuantifiedExpression((forall("x"),), (app(NOT1, "x"),))
    assert qsat_i_member(e, 2) == 1  # treated as level 2 with an empty block


def test_qsat_member_shape_errors():
    sigma2 = QuantifiedExpression(
        (exists("x"), forall("y")), (app(OR2, "x", "y"),)
    )
    with pytest.raises(ShapeMismatchError):
        qsat_i_member(sigma2, 1)  # too many blocks
    pi1 = QuantifiedExpression((forall("x"),), (app(ID1, "x"),))
    with pytest.raises(ShapeMismatchError):
        qsat_i_member(pi1, 1)  # universal prefix passed with odd level
    with pytest.raises(ValueError):
        qsat_i_member(pi1, 0)


def test_qsat_member_level_zero_prefix():
    e = QuantifiedExpression((), (app(EQ2, 1, 1),))
    assert qsat_i_member(e, 1) == 1
    assert qsat_i_member(e, 2) == 0


def test_oit_needs_exactly_one():
    e = QuantifiedExpression(
        (exists("a", "b", "c"),),
        (app(OIT, "a", "b", "c"), app(ID1, "a"), app(ID1, "b")),
    )
    assert evaluate(e) == 0
