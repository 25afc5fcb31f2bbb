"""Dichotomy classification of constraint sets.

The seven per-constraint properties are decided directly on the truth table:
0-valid, 1-valid and complementive by reading rows, and the four tractable
classes by the classical closure characterizations of their satisfying sets
(Horn = closed under coordinatewise AND, anti-Horn under OR, bijunctive under
ternary majority, affine under ternary XOR).  The closure choice is validated
exhaustively against normal-form synthesis in the test suite.

A set has a property iff every member does; the verdicts then follow the
dichotomy table: plain satisfiability is tractable iff the set is 0-valid,
1-valid or Schaefer (Horn/anti-Horn/affine/bijunctive), and every quantified
variant -- with or without constants, at any alternation level >= 2 -- is
tractable iff the set is Schaefer, complete for the matching level otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Constraint


def is_zero_valid(c: Constraint) -> bool:
    return c.value_on(0) == 1


def is_one_valid(c: Constraint) -> bool:
    return c.value_on(c.rows - 1) == 1


def is_complementive(c: Constraint) -> bool:
    full = c.rows - 1
    return all(c.value_on(r) == c.value_on(full ^ r) for r in range(c.rows))


def _closure_witness_2(c: Constraint, op) -> tuple[int, int, int] | None:
    """First satisfying pair whose combination escapes the satisfying set."""
    sat = c.satisfying_rows()
    member = set(sat)
    for a in sat:
        for b in sat:
            out = op(a, b)
            if out not in member:
                return (a, b, out)
    return None


def _majority_witness(c: Constraint) -> tuple[int, int, int, int] | None:
    sat = c.satisfying_rows()
    member = set(sat)
    for a in sat:
        for b in sat:
            ab = a & b
            a_or_b = a | b
            for d in sat:
                out = (ab) | (d & a_or_b)
                if out not in member:
                    return (a, b, d, out)
    return None


def _xor3_witness(c: Constraint) -> tuple[int, int, int, int] | None:
    # sat is xor3-closed iff it is an affine subspace: fix a base point and
    # check the difference set is closed under pairwise xor.
    sat = c.satisfying_rows()
    if not sat:
        return None
    base = sat[0]
    member = set(sat)
    for a in sat:
        for b in sat:
            out = a ^ b ^ base
            if out not in member:
                return (a, b, base, out)
    return None


def is_horn(c: Constraint) -> bool:
    return _closure_witness_2(c, int.__and__) is None


def is_anti_horn(c: Constraint) -> bool:
    return _closure_witness_2(c, int.__or__) is None


def is_bijunctive(c: Constraint) -> bool:
    return _majority_witness(c) is None


def is_affine(c: Constraint) -> bool:
    return _xor3_witness(c) is None


@dataclass(frozen=True)
class PropertyFlags:
    zero_valid: bool
    one_valid: bool
    horn: bool
    anti_horn: bool
    bijunctive: bool
    affine: bool
    complementive: bool

    @property
    def schaefer(self) -> bool:
        return self.horn or self.anti_horn or self.bijunctive or self.affine

    def as_dict(self) -> dict[str, bool]:
        return {
            "zero_valid": self.zero_valid,
            "one_valid": self.one_valid,
            "horn": self.horn,
            "anti_horn": self.anti_horn,
            "bijunctive": self.bijunctive,
            "affine": self.affine,
            "complementive": self.complementive,
        }


def classify_constraint(c: Constraint) -> PropertyFlags:
    return PropertyFlags(
        zero_valid=is_zero_valid(c),
        one_valid=is_one_valid(c),
        horn=is_horn(c),
        anti_horn=is_anti_horn(c),
        bijunctive=is_bijunctive(c),
        affine=is_affine(c),
        complementive=is_complementive(c),
    )


@dataclass(frozen=True)
class Witness:
    """A constraint plus the rows showing why a set-level property fails."""

    property: str
    constraint: str
    rows: tuple[int, ...]
    produced: int | None = None

    def render(self) -> str:
        rows = ",".join(str(r) for r in self.rows)
        if self.produced is None:
            return f"{self.constraint} rows={rows}"
        return f"{self.constraint} rows={rows} -> {self.produced}"


@dataclass(frozen=True)
class ClassificationReport:
    flags: PropertyFlags
    witnesses: tuple[Witness, ...]
    constant_constraints: tuple[str, ...]

    @property
    def schaefer(self) -> bool:
        return self.flags.schaefer

    @property
    def sat_verdict(self) -> str:
        tractable = self.flags.zero_valid or self.flags.one_valid or self.schaefer
        return "P" if tractable else "NP-complete"

    @property
    def sat_c_verdict(self) -> str:
        return "P" if self.schaefer else "NP-complete"

    @property
    def qsat_verdict(self) -> str:
        return "P" if self.schaefer else "PSPACE-complete"

    qsat_c_verdict = qsat_verdict

    @property
    def qsat_i_verdict(self) -> str:
        """Verdict for every alternation level i >= 2 (constant-free)."""
        return "P" if self.schaefer else "Sigma_i-complete"

    qsat_ic_verdict = qsat_i_verdict

    @property
    def qsat_1_verdict(self) -> str:
        # A one-block existential expression is exactly a satisfiability
        # instance, so level 1 inherits the plain-SAT verdicts.
        tractable = self.flags.zero_valid or self.flags.one_valid or self.schaefer
        return "P" if tractable else "NP-complete"

    @property
    def qsat_1c_verdict(self) -> str:
        return "P" if self.schaefer else "NP-complete"

    def verdicts(self) -> dict[str, str]:
        return {
            "sat": self.sat_verdict,
            "sat_c": self.sat_c_verdict,
            "qsat": self.qsat_verdict,
            "qsat_c": self.qsat_c_verdict,
            "qsat_1": self.qsat_1_verdict,
            "qsat_1c": self.qsat_1c_verdict,
            "qsat_i": self.qsat_i_verdict,
            "qsat_ic": self.qsat_ic_verdict,
        }

    def to_dict(self) -> dict:
        return {
            "flags": self.flags.as_dict(),
            "verdicts": self.verdicts(),
            "witnesses": {w.property: w.render() for w in self.witnesses},
            "constant_constraints": list(self.constant_constraints),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"flags.{k}={str(v).lower()}" for k, v in self.flags.as_dict().items()]
        lines += [f"verdicts.{k}={v}" for k, v in self.verdicts().items()]
        lines += [f"witnesses.{w.property}={w.render()}" for w in self.witnesses]
        if self.constant_constraints:
            lines.append("constants=" + ",".join(self.constant_constraints))
        return "\n".join(lines)


def classify_set(constraints: Sequence[Constraint] | Iterable[Constraint]) -> ClassificationReport:
    """Conjunctive flags, dichotomy verdicts, and failure witnesses for a set."""
    cs = list(constraints)
    if not cs:
        raise ValueError("cannot classify an empty constraint set")

    witnesses: list[Witness] = []

    def first_failure(check, witness) -> bool:
        for c in cs:
            if not check(c):
                witnesses.append(witness(c))
                return False
        return True

    zero_valid = first_failure(
        is_zero_valid, lambda c: Witness("zero_valid", c.name, (0,))
    )
    one_valid = first_failure(
        is_one_valid, lambda c: Witness("one_valid", c.name, (c.rows - 1,))
    )

    def comp_witness(c: Constraint) -> Witness:
        full = c.rows - 1
        r = next(r for r in range(c.rows) if c.value_on(r) != c.value_on(full ^ r))
        return Witness("complementive", c.name, (r, full ^ r))

    complementive = first_failure(is_complementive, comp_witness)

    def horn_witness(c: Constraint) -> Witness:
        a, b, out = _closure_witness_2(c, int.__and__)  # type: ignore[misc]
        return Witness("horn", c.name, (a, b), out)

    def anti_horn_witness(c: Constraint) -> Witness:
        a, b, out = _closure_witness_2(c, int.__or__)  # type: ignore[misc]
        return Witness("anti_horn", c.name, (a, b), out)

    def bijunctive_witness(c: Constraint) -> Witness:
        a, b, d, out = _majority_witness(c)  # type: ignore[misc]
        return Witness("bijunctive", c.name, (a, b, d), out)

    def affine_witness(c: Constraint) -> Witness:
        a, b, base, out = _xor3_witness(c)  # type: ignore[misc]
        return Witness("affine", c.name, (a, b, base), out)

    horn = first_failure(is_horn, horn_witness)
    anti_horn = first_failure(is_anti_horn, anti_horn_witness)
    bijunctive = first_failure(is_bijunctive, bijunctive_witness)
    affine = first_failure(is_affine, affine_witness)

    flags = PropertyFlags(
        zero_valid=zero_valid,
        one_valid=one_valid,
        horn=horn,
        anti_horn=anti_horn,
        bijunctive=bijunctive,
        affine=affine,
        complementive=complementive,
    )
    constants = tuple(c.name for c in cs if c.is_constant())
    return ClassificationReport(flags, tuple(witnesses), constants)
