"""Quantified Boolean constraint toolkit.

Classifies finite Boolean constraint sets into their dichotomy classes,
reports complexity verdicts for satisfiability and alternation-bounded
quantified satisfiability, decides tractable instances in polynomial time,
and executes/verifies the constructive reductions (perfect implementation
substitution, complementation, unary elimination, constant removal) against
a brute-force oracle.
"""

from .classifier import (
    ClassificationReport,
    PropertyFlags,
    classify_constraint,
    classify_set,
    is_affine,
    is_anti_horn,
    is_bijunctive,
    is_complementive,
    is_horn,
    is_one_valid,
    is_zero_valid,
)
from .evaluator import (
    BudgetExceededError,
    EvalBudget,
    ShapeMismatchError,
    evaluate,
    qsat_i_member,
)
from .gadgets import (
    HatTemplate,
    ImplementationNotFoundError,
    NotApplicableError,
    ReductionCase,
    ReductionResult,
    build_hat,
    complement_constraint,
    complement_expression,
    eliminate_unary,
    remove_constants,
    substitute_implementation,
)
from .implsearch import (
    Implementation,
    check_implementation,
    find_implementation,
    identity_implementation,
)
from .model import (
    Argument,
    Constraint,
    ConstraintApplication,
    Polarity,
    PrefixShape,
    Quantifier,
    QuantifierBlock,
    QuantifiedExpression,
    app,
    evaluate_application,
    exists,
    forall,
    make_constraint,
    prefix_shape,
)
from .parser import (
    ParseError,
    SourceDocument,
    parse_document,
    parse_expression,
    render_expression,
)
from .solvers import (
    ClauseForm,
    NormalFormKind,
    TractableClass,
    dispatch_class,
    solve_auto,
    solve_tractable,
    synthesize_normal_form,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
