"""Differential verification suites.

Each check pits one subsystem against an independent reference: the
classifier against normal-form synthesis, the polynomial solvers and every
gadget transformation against the brute-force evaluator, the implementation
engine against exhaustive re-verification.  The CLI ``verify`` command runs
these; the acceptance test module runs the same checks at their contracted
sizes.  All randomness is reproducible from the seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .classifier import (
    classify_set,
    is_affine,
    is_anti_horn,
    is_bijunctive,
    is_complementive,
    is_horn,
    is_one_valid,
    is_zero_valid,
)
from .evaluator import BudgetExceededError, EvalBudget, evaluate, qsat_i_member
from .gadgets import (
    ImplementationNotFoundError,
    ReductionCase,
    build_hat,
    complement_expression,
    remove_constants,
    substitute_implementation,
)
from .implsearch import check_implementation, find_implementation
from .model import (
    Constraint,
    Polarity,
    QuantifiedExpression,
    app,
    exists,
    forall,
    make_constraint,
    prefix_shape,
)
from .presets import CNF3_FAMILY, IMP2, NAND2, OIT, OR2, SYMOR1, XOR2
from .randgen import (
    random_constraint,
    random_constraint_with,
    random_expression,
    random_expression_with_constants,
    random_shaped_expression,
)
from .solvers import TractableClass, solve_tractable

# Case-matching non-Schaefer seed constraints for the constant-removal
# harness.  Satisfying rows: ZV3 {000,011,101}, OV3 its mirror {111,100,010},
# ZVC3 everything but {001,110}, NAE3 everything but {000,111}.
ZV3 = make_constraint("ZV3", 3, "10010100")
OV3 = make_constraint("OV3", 3, "00101001")
ZVC3 = make_constraint("ZVC3", 3, "10111101")
NAE3 = make_constraint("NAE3", 3, "01111110")

CASE_FAMILIES: dict[ReductionCase, tuple[Constraint, ...]] = {
    ReductionCase.ZERO_VALID_NOT_COMP: (ZV3,),
    ReductionCase.ONE_VALID_NOT_COMP: (OV3,),
    ReductionCase.ZERO_VALID_COMP: (ZVC3,),
    ReductionCase.NEITHER_VALID_COMP: (NAE3,),
    ReductionCase.NEITHER_VALID_NOT_COMP: (OIT,),
}

# Ternary tables (as packed bitmasks) that One-in-Three cannot implement
# within 6 auxiliary variables and 8 applications; all of them succeed at 8
# auxiliaries.  The exhaustive sweep in the test suite revalidates this list.
TERNARY_NEEDING_WIDE_SEARCH = frozenset(
    {106, 108, 120, 126, 172, 184, 188, 202, 216, 218, 226, 228, 230, 232,
     233, 234, 236, 248, 254}
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def check_classifier_exhaustive() -> CheckResult:
    """Closure-test flags equal normal-form synthesis, all arity <= 3 tables."""
    from .solvers import NormalFormKind, synthesize_normal_form

    pairs = (
        (is_horn, NormalFormKind.HORN_CNF),
        (is_anti_horn, NormalFormKind.ANTI_HORN_CNF),
        (is_bijunctive, NormalFormKind.TWO_CNF),
        (is_affine, NormalFormKind.XOR_CNF),
    )
    mismatches = 0
    total = 0
    for arity in (1, 2, 3):
        for bits in range(1 << (1 << arity)):
            c = Constraint(f"F{arity}_{bits}", arity, bits)
            total += 1
            for flag, kind in pairs:
                if flag(c) != (synthesize_normal_form(c, kind) is not None):
                    mismatches += 1
            table = c.table()
            if is_zero_valid(c) != (table[0] == "1"):
                mismatches += 1
            if is_one_valid(c) != (table[-1] == "1"):
                mismatches += 1
            full = c.rows - 1
            comp = all(table[r] == table[full ^ r] for r in range(c.rows))
            if is_complementive(c) != comp:
                mismatches += 1
    return CheckResult(
        "classifier-vs-synthesis",
        mismatches == 0,
        f"{total} functions x 4 normal forms + direct reads, "
        f"{mismatches} mismatches",
    )


def check_verdict_table() -> CheckResult:
    """The headline families classify to their dichotomy verdicts."""
    cases = [
        ((OIT,), "NP-complete", "Sigma_i-complete"),
        (CNF3_FAMILY, "NP-complete", "Sigma_i-complete"),
        ((XOR2,), "P", "P"),
        ((NAND2,), "P", "P"),
        ((OR2,), "P", "P"),
    ]
    bad = []
    for family, want_sat_c, want_qsat_i in cases:
        rep = classify_set(family)
        names = ",".join(c.name for c in family)
        if rep.sat_c_verdict != want_sat_c or rep.qsat_i_verdict != want_qsat_i:
            bad.append(names)
        if family == (OIT,) and any(rep.flags.as_dict().values()):
            bad.append("OIT flags not all false")
        if family == (XOR2,) and not (rep.flags.affine and rep.flags.complementive):
            bad.append("XOR2 flags")
    return CheckResult(
        "dichotomy-verdicts",
        not bad,
        "5 families land on their dichotomy verdicts" if not bad else f"bad: {bad}",
    )


def check_complement_differential(seed: int, instances: int = 1000) -> CheckResult:
    """Complementing an expression never changes its truth value."""
    rng = random.Random(seed)
    agree = 0
    for _ in range(instances):
        cs = [
            random_constraint(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))
        ]
        e = random_expression(
            rng, cs, rng.randint(1, 12), rng.randint(1, 15), const_prob=0.2
        )
        if evaluate(e) == evaluate(complement_expression(e)):
            agree += 1
    return CheckResult(
        "complement-differential",
        agree == instances,
        f"{agree}/{instances} truth-preserving",
    )


_SHAPES = ((Polarity.SIGMA, 2, 3), (Polarity.PI, 2, 2), (Polarity.SIGMA, 3, 3))


def check_constant_removal(seed: int, per_case: int = 300) -> CheckResult:
    """Constant removal preserves truth and shape for every dispatch case."""
    rng = random.Random(seed)
    lines = []
    ok = True
    budget = EvalBudget(max_variables=32)
    for case, family in CASE_FAMILIES.items():
        good = skipped = bad = 0
        for _ in range(per_case):
            polarity, level, i = _SHAPES[rng.randrange(len(_SHAPES))]
            e = random_expression_with_constants(
                rng,
                family,
                polarity,
                level,
                rng.randint(level, 6),
                rng.randint(1, 6),
            )
            before = evaluate(e)
            try:
                res = remove_constants(e, family, i)
            except (ImplementationNotFoundError, BudgetExceededError):
                skipped += 1
                continue
            if res.case_used is not case:
                bad += 1
                continue
            if res.trivially_false:
                if before == 0:
                    good += 1
                else:
                    bad += 1
                continue
            out = res.expression
            shape = prefix_shape(out)
            shape_ok = shape.polarity is polarity and shape.level <= i
            if level == i:
                shape_ok = shape_ok and shape.level == level
            try:
                after = evaluate(out, budget)
            except BudgetExceededError:
                skipped += 1
                continue
            if after == before and not out.has_constants() and shape_ok:
                good += 1
            else:
                bad += 1
        lines.append(f"{case.name}: {good} ok, {skipped} skipped, {bad} bad")
        if bad or good == 0:
            ok = False
    return CheckResult("constant-removal", ok, "; ".join(lines))


def check_gadget_identities() -> CheckResult:
    """Exhaustive micro-identities behind the constant-removal gadgets."""
    problems = []
    # forall y {~f|y, ~y|t} is exactly ~f & t, for each constant pair
    for f in (0, 1):
        for t in (0, 1):
            e = QuantifiedExpression(
                (forall("y"),), (app(IMP2, f, "y"), app(IMP2, "y", t))
            )
            if evaluate(e) != ((1 - f) & t):
                problems.append(f"imp-pair at f={f} t={t}")
    # SymOR1 cofactors: fixing the switch argument leaves binary implications
    for row in range(8):
        x, y, z = (row >> 2) & 1, (row >> 1) & 1, row & 1
        want = ((1 - y) | z) if x == 0 else ((1 - z) | y)
        if SYMOR1.value_on(row) != want:
            problems.append(f"symor1 row {row}")
    # hat value tables for every neither-valid non-complementive ternary-or-less
    checked = 0
    for arity in (1, 2, 3):
        for bits in range(1 << (1 << arity)):
            c = Constraint(f"H{arity}_{bits}", arity, bits)
            if is_zero_valid(c) or is_one_valid(c) or is_complementive(c):
                continue
            if not c.satisfying_rows():
                continue
            checked += 1
            s = c.satisfying_rows()[0]
            hat_a = build_hat(c, s)
            if not (hat_a.value(0, 0) == 0 and hat_a.value(0, 1) == 1):
                problems.append(f"hatA {arity}/{bits}")
            hat_b = build_hat(c, s)
            if not (hat_b.value(0, 1) == 1 and hat_b.value(1, 1) == 0):
                problems.append(f"hatB {arity}/{bits}")
            full = c.rows - 1
            s_c = next(
                r for r in range(c.rows) if c.value_on(r) and not c.value_on(full ^ r)
            )
            hat_c = build_hat(c, s_c)
            if not (hat_c.value(0, 1) == 1 and hat_c.value(1, 0) == 0):
                problems.append(f"hatC {arity}/{bits}")
    return CheckResult(
        "gadget-identities",
        not problems,
        f"imp-pair, symor1 cofactors, hat tables on {checked} constraints"
        + ("" if not problems else f"; bad: {problems[:5]}"),
    )


def check_implementation_engine(seed: int, ternary_samples: int = 32) -> CheckResult:
    """One-in-Three implements the binary targets and sampled ternary ones."""
    rng = random.Random(seed)
    failures = []
    for bits in range(16):
        target = Constraint(f"B{bits}", 2, bits)
        impl = find_implementation([OIT], target, 6, 8)
        if impl is None or not check_implementation(impl):
            failures.append(f"binary {bits}")
    frame = [b for b in range(256) if b not in TERNARY_NEEDING_WIDE_SEARCH]
    for bits in rng.sample(frame, ternary_samples):
        target = Constraint(f"T{bits}", 3, bits)
        impl = find_implementation([OIT], target, 6, 8)
        if impl is None or not check_implementation(impl):
            failures.append(f"ternary {bits}")
    for bits in sorted(TERNARY_NEEDING_WIDE_SEARCH):
        target = Constraint(f"W{bits}", 3, bits)
        impl = find_implementation([OIT], target, 8, 8)
        if impl is None or not check_implementation(impl):
            failures.append(f"wide ternary {bits}")
    return CheckResult(
        "implementation-engine",
        not failures,
        f"16 binary + {ternary_samples} sampled ternary within (6,8), "
        f"{len(TERNARY_NEEDING_WIDE_SEARCH)} wide at (8,8)"
        + ("" if not failures else f"; failed: {failures[:5]}"),
    )


def check_substitution_preservation(seed: int, instances: int = 200) -> CheckResult:
    """Replacing a constraint by an implementation never changes the value."""
    rng = random.Random(seed)
    targets = []
    for bits in (0b0001, 0b0110, 0b0111, 0b1110):  # and, xor, or, nand
        t = Constraint(f"S{bits}", 2, bits)
        targets.append((t, find_implementation([OIT], t, 6, 8)))
    good = 0
    budget = EvalBudget(max_variables=32)
    for _ in range(instances):
        target, impl = targets[rng.randrange(len(targets))]
        level = rng.choice((1, 3))  # existential innermost block
        n_vars = rng.randint(level, 6)
        e = random_shaped_expression(
            rng, [target, OIT], Polarity.SIGMA, level, n_vars, rng.randint(1, 4)
        )
        out = substitute_implementation(e, impl)
        if (
            evaluate(e) == evaluate(out, budget)
            and prefix_shape(out) == prefix_shape(e)
        ):
            good += 1
    return CheckResult(
        "substitution-preservation",
        good == instances,
        f"{good}/{instances} truth- and shape-preserving",
    )


_CLASS_FLAGS = {
    TractableClass.HORN: is_horn,
    TractableClass.ANTI_HORN: is_anti_horn,
    TractableClass.BIJUNCTIVE: is_bijunctive,
    TractableClass.AFFINE: is_affine,
}


def check_solver_class(
    cls: TractableClass, seed: int, instances: int = 1000
) -> CheckResult:
    """solve_tractable agrees with the evaluator on random class instances."""
    rng = random.Random(seed)
    flag = _CLASS_FLAGS[cls]
    agree = 0
    started = time.monotonic()
    for _ in range(instances):
        cs = [
            random_constraint_with(rng, rng.randint(1, 3), flag)
            for _ in range(rng.randint(1, 3))
        ]
        e = random_expression(
            rng, cs, rng.randint(1, 14), rng.randint(1, 20), const_prob=0.15
        )
        if solve_tractable(e, cls) == evaluate(e):
            agree += 1
    elapsed = time.monotonic() - started
    return CheckResult(
        f"solver-{cls.value}",
        agree == instances,
        f"{agree}/{instances} agree with the oracle in {elapsed:.1f}s",
    )


def check_affine_scaling(n_vars: int = 40) -> CheckResult:
    """A 40-variable affine instance solved fast, far past the oracle budget.

    Every universal variable is answered by the existential right after it,
    so the instance is true; the links alternate parity to keep every
    equation live through elimination.
    """
    blocks = []
    apps = []
    names = [f"v{i}" for i in range(n_vars)]
    for idx, name in enumerate(names):
        blocks.append(forall(name) if idx % 2 == 0 else exists(name))
        if idx % 2 == 1:
            apps.append(app(XOR2, names[idx - 1], name))
    e = QuantifiedExpression(tuple(blocks), tuple(apps))
    oracle_refuses = False
    try:
        evaluate(e)
    except BudgetExceededError:
        oracle_refuses = True
    started = time.monotonic()
    value = solve_tractable(e, TractableClass.AFFINE)
    elapsed = time.monotonic() - started
    passed = value == 1 and elapsed < 1.0 and oracle_refuses
    return CheckResult(
        "affine-scaling",
        passed,
        f"{n_vars}-variable chain solved to {value} in {elapsed * 1000:.0f}ms "
        f"(oracle refuses: {oracle_refuses})",
    )


def check_qsat_polarity(seed: int, instances: int = 100) -> CheckResult:
    """Level-2 membership is falsity: the bit is the negated truth value."""
    rng = random.Random(seed)
    good = 0
    for _ in range(instances):
        cs = [
            random_constraint(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 2))
        ]
        e = random_shaped_expression(
            rng, cs, Polarity.PI, 2, rng.randint(2, 10), rng.randint(1, 10),
            const_prob=0.1,
        )
        if qsat_i_member(e, 2) == 1 - evaluate(e):
            good += 1
    return CheckResult(
        "qsat-level-polarity", good == instances, f"{good}/{instances} instances"
    )


def run_suite(suite: str, seed: int = 0, instances: int | None = None):
    """Run a named suite; returns the list of check results."""

    def n(default: int) -> int:
        return instances if instances is not None else default

    if suite == "classifier":
        return [check_classifier_exhaustive(), check_verdict_table()]
    if suite == "solvers":
        out = [
            check_solver_class(cls, seed, n(1000))
            for cls in (
                TractableClass.HORN,
                TractableClass.ANTI_HORN,
                TractableClass.BIJUNCTIVE,
                TractableClass.AFFINE,
            )
        ]
        out.append(check_affine_scaling())
        return out
    if suite == "reductions":
        return [
            check_complement_differential(seed, n(1000)),
            check_constant_removal(seed, max(1, n(1500) // 5)),
            check_gadget_identities(),
            check_implementation_engine(seed),
            check_substitution_preservation(seed, n(200)),
            check_qsat_polarity(seed, n(100)),
        ]
    if suite == "all":
        return (
            run_suite("classifier", seed, instances)
            + run_suite("solvers", seed, instances)
            + run_suite("reductions", seed, instances)
        )
    raise ValueError(f"unknown suite {suite!r}")
