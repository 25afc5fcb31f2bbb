"""Built-in constraint library.

These are the constraints the DSL knows without a definition: the four
ternary or-clause shapes (negations on trailing arguments), One-in-Three,
the asymmetric-or gadget constraint SYMOR1, and the small binary/unary
staples.  Row order is as documented in :mod:`qcsp.model` (first argument
most significant).
"""

from __future__ import annotations

from .model import Constraint, make_constraint

OR3 = make_constraint("OR3", 3, "01111111")        # x | y | z
OR3_1N = make_constraint("OR3_1n", 3, "10111111")  # x | y | ~z
OR3_2N = make_constraint("OR3_2n", 3, "11101111")  # x | ~y | ~z
OR3_3N = make_constraint("OR3_3n", 3, "11111110")  # ~x | ~y | ~z
OIT = make_constraint("OIT", 3, "01101000")        # exactly one argument true
SYMOR1 = make_constraint("SYMOR1", 3, "11011011")  # (~x & (~y|z)) | (x & (~z|y))
XOR2 = make_constraint("XOR2", 2, "0110")
EQ2 = make_constraint("EQ2", 2, "1001")
OR2 = make_constraint("OR2", 2, "0111")
NAND2 = make_constraint("NAND2", 2, "1110")
ID1 = make_constraint("ID1", 1, "01")
NOT1 = make_constraint("NOT1", 1, "10")

# ~x | y; the helper constraint of the zero-valid non-complementive
# constant-removal gadget.  Not exposed in the DSL preset table.
IMP2 = make_constraint("IMP2", 2, "1101")

# The four-constraint family whose quantified problems stay hard at every
# alternation level: all or-clauses of width three.
CNF3_FAMILY = (OR3, OR3_1N, OR3_2N, OR3_3N)

PRESETS: dict[str, Constraint] = {
    c.name: c
    for c in (
        OR3,
        OR3_1N,
        OR3_2N,
        OR3_3N,
        OIT,
        SYMOR1,
        XOR2,
        EQ2,
        OR2,
        NAND2,
        ID1,
        NOT1,
    )
}
