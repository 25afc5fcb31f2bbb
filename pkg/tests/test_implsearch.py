"""Perfect-implementation checking and bounded search."""

from qcsp.gadgets import build_hat
from qcsp.implsearch import (
    Implementation,
    check_implementation,
    find_implementation,
    identity_implementation,
)
from qcsp.model import Constraint, app, make_constraint
from qcsp.presets import OIT, OR2, OR3, XOR2
from qcsp.verify import TERNARY_NEEDING_WIDE_SEARCH

ANDNOT = make_constraint("ANDNOT", 2, "0100")  # ~x & y
AND2 = make_constraint("AND2", 2, "0001")
TRUE1 = make_constraint("TRUE1", 1, "11")


def test_check_hat_triple_implements_andnot():
    # One-in-Three is neither-valid and not complementive; its hat
    # applications on (f, t) pin the pair to (0, 1)
    s = OIT.satisfying_rows()[0]
    hat = build_hat(OIT, s)
    impl = Implementation(
        ANDNOT, ("f", "t"), (), (hat.apply("f", "t"),) * 3
    )
    assert check_implementation(impl)


def test_check_empty_set_implements_constant_true():
    impl = Implementation(TRUE1, ("x",), (), ())
    assert check_implementation(impl)


def test_check_or_is_not_and():
    impl = Implementation(AND2, ("x", "y"), (), (app(OR2, "x", "y"),))
    assert not check_implementation(impl)  # row (1,0) disagrees


def test_identity_implementation():
    impl = identity_implementation(OR2)
    assert check_implementation(impl)
    found = find_implementation([OR2], OR2, 0, 1)
    assert found == impl


def test_find_xor_not_and():
    assert find_implementation([XOR2], AND2, 2, 4) is None


def test_find_or3_from_oit():
    # needs more than six auxiliaries: definitive NotFound inside (6,8),
    # a verified witness at (8,8)
    assert find_implementation([OIT], OR3, 6, 8) is None
    impl = find_implementation([OIT], OR3, 8, 8)
    assert impl is not None and check_implementation(impl)


def test_find_is_deterministic():
    a = find_implementation([OIT], AND2, 6, 8)
    b = find_implementation([OIT], AND2, 6, 8)
    assert a == b and a is not b


def test_minimal_witness_order():
    # xor from One-in-Three: a single application with a repeated argument
    # exists, so the minimal witness has one application
    nae = make_constraint("NAE3", 3, "01111110")
    impl = find_implementation([nae], XOR2, 6, 8)
    assert len(impl.apps) == 1 and not impl.aux_vars


def test_canonical_pruning_preserves_answers():
    # found/NotFound agrees with the unpruned search on all binary targets
    for bits in range(16):
        target = Constraint(f"b{bits}", 2, bits)
        fast = find_implementation([OIT], target, 3, 3)
        slow = find_implementation([OIT], target, 3, 3, canonical=False)
        assert (fast is None) == (slow is None), bits
        if fast is not None:
            assert check_implementation(fast) and check_implementation(slow)


def test_constants_variant_flag():
    # with constants allowed, t=1 is expressible directly
    one = make_constraint("ONE1", 1, "01")
    impl = find_implementation([XOR2], one, 0, 2, allow_constants=True)
    assert impl is not None
    assert any(a.is_const for ap in impl.apps for a in ap.args)


def test_wide_search_list_is_exact():
    # revalidate the frozen list: these ternary tables and no others fail
    # the (6, 8) bounds over One-in-Three
    hard = set()
    for bits in range(256):
        target = Constraint(f"t{bits}", 3, bits)
        if find_implementation([OIT], target, 6, 8) is None:
            hard.add(bits)
    assert hard == set(TERNARY_NEEDING_WIDE_SEARCH)
