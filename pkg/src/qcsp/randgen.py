"""Seeded random instance generators for the differential harnesses.

Everything takes an explicit ``random.Random`` so runs are reproducible from
a single seed.
"""

from __future__ import annotations

import random
from typing import Callable, Sequence

from .model import (
    Argument,
    Constraint,
    ConstraintApplication,
    Polarity,
    Quantifier,
    QuantifierBlock,
    QuantifiedExpression,
    block_quantifier,
)


def random_constraint(rng: random.Random, arity: int, name: str | None = None) -> Constraint:
    bits = rng.getrandbits(1 << arity)
    return Constraint(name or f"R{arity}_{bits}", arity, bits)


def random_constraint_with(
    rng: random.Random, arity: int, predicate: Callable[[Constraint], bool]
) -> Constraint:
    """Rejection-sample a random table satisfying ``predicate``."""
    while True:
        c = random_constraint(rng, arity)
        if predicate(c):
            return c


def _random_apps(
    rng: random.Random,
    constraints: Sequence[Constraint],
    names: Sequence[str],
    n_apps: int,
    const_prob: float,
) -> tuple[ConstraintApplication, ...]:
    apps = []
    for _ in range(n_apps):
        c = rng.choice(constraints)
        args = []
        for _ in range(c.arity):
            if names and rng.random() >= const_prob:
                args.append(Argument(var=rng.choice(names)))
            else:
                args.append(Argument(const=rng.randint(0, 1)))
        apps.append(ConstraintApplication(c, tuple(args)))
    return tuple(apps)


def random_expression(
    rng: random.Random,
    constraints: Sequence[Constraint],
    n_vars: int,
    n_apps: int,
    const_prob: float = 0.0,
    max_block: int = 4,
) -> QuantifiedExpression:
    """Random prefix over ``n_vars`` variables and a random matrix."""
    names = [f"v{i}" for i in range(n_vars)]
    blocks = []
    idx = 0
    quant = rng.choice((Quantifier.EXISTS, Quantifier.FORALL))
    while idx < n_vars:
        size = rng.randint(1, min(max_block, n_vars - idx))
        blocks.append(QuantifierBlock(quant, tuple(names[idx : idx + size])))
        idx += size
        quant = (
            Quantifier.FORALL if quant is Quantifier.EXISTS else Quantifier.EXISTS
        )
    matrix = _random_apps(rng, constraints, names, n_apps, const_prob)
    return QuantifiedExpression(tuple(blocks), matrix)


def random_shaped_expression(
    rng: random.Random,
    constraints: Sequence[Constraint],
    polarity: Polarity,
    level: int,
    n_vars: int,
    n_apps: int,
    const_prob: float = 0.0,
) -> QuantifiedExpression:
    """Random expression with exactly ``level`` nonempty alternating blocks."""
    if n_vars < level:
        raise ValueError("need at least one variable per block")
    names = [f"v{i}" for i in range(n_vars)]
    cuts = sorted(rng.sample(range(1, n_vars), level - 1)) if level > 1 else []
    blocks = []
    prev = 0
    for j, cut in enumerate(cuts + [n_vars]):
        blocks.append(
            QuantifierBlock(block_quantifier(polarity, j + 1), tuple(names[prev:cut]))
        )
        prev = cut
    matrix = _random_apps(rng, constraints, names, n_apps, const_prob)
    return QuantifiedExpression(tuple(blocks), matrix)


def random_expression_with_constants(
    rng: random.Random,
    constraints: Sequence[Constraint],
    polarity: Polarity,
    level: int,
    n_vars: int,
    n_apps: int,
    const_prob: float = 0.3,
) -> QuantifiedExpression:
    """Shaped expression guaranteed to mention at least one constant."""
    while True:
        expr = random_shaped_expression(
            rng, constraints, polarity, level, n_vars, n_apps, const_prob
        )
        if expr.has_constants():
            return expr
