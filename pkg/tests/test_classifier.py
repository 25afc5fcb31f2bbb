"""Classifier: property flags, closure witnesses, dichotomy verdicts."""

import random

from qcsp.classifier import (
    classify_constraint,
    classify_set,
    is_anti_horn,
    is_complementive,
    is_horn,
    is_one_valid,
    is_zero_valid,
)
from qcsp.model import Constraint, make_constraint
from qcsp.presets import CNF3_FAMILY, EQ2, ID1, NAND2, NOT1, OIT, OR2, XOR2
from qcsp.randgen import random_constraint

import pytest


def test_valid_flags():
    assert not is_zero_valid(OR2) and is_one_valid(OR2)
    assert is_zero_valid(NAND2) and not is_one_valid(NAND2)
    assert is_zero_valid(NOT1) and is_one_valid(ID1)
    assert not is_one_valid(OIT) and not is_zero_valid(OIT)


def test_complementive_examples():
    assert is_complementive(XOR2) and is_complementive(EQ2)
    assert not is_complementive(OR2)
    assert not is_complementive(OIT)  # rows 001 vs 110 differ


def test_closure_flag_examples():
    assert is_horn(NAND2)
    assert not is_horn(OR2)  # 01 AND 10 = 00 is not satisfying
    assert is_anti_horn(OR2)
    flags = classify_constraint(OIT)
    assert not flags.bijunctive and not flags.affine
    assert not flags.horn and not flags.anti_horn
    assert classify_constraint(XOR2).affine
    assert classify_constraint(EQ2).bijunctive


def test_constant_functions_are_bijunctive_and_affine():
    for bits, arity in ((0, 2), (15, 2), (0, 1), (3, 1)):
        c = Constraint("k", arity, bits)
        f = classify_constraint(c)
        assert f.bijunctive and f.affine and f.horn and f.anti_horn


def test_classify_set_examples():
    rep = classify_set([OIT])
    assert not any(rep.flags.as_dict().values())
    assert rep.sat_verdict == "NP-complete"
    assert rep.qsat_i_verdict == "Sigma_i-complete"
    assert rep.qsat_ic_verdict == "Sigma_i-complete"

    rep = classify_set([XOR2])
    assert rep.flags.affine and rep.flags.complementive
    assert rep.qsat_verdict == "P" and rep.qsat_i_verdict == "P"

    rep = classify_set(CNF3_FAMILY)
    assert not rep.schaefer
    assert rep.qsat_i_verdict == "Sigma_i-complete"
    assert rep.sat_verdict == "NP-complete"


def test_level_one_verdicts_follow_plain_sat():
    # a 0-valid non-Schaefer set: tractable without constants, hard with them
    zv = make_constraint("ZV3", 3, "10010100")
    rep = classify_set([zv])
    assert rep.sat_verdict == "P" and rep.qsat_1_verdict == "P"
    assert rep.sat_c_verdict == "NP-complete"
    assert rep.qsat_1c_verdict == "NP-complete"
    assert rep.qsat_i_verdict == "Sigma_i-complete"


def test_empty_set_rejected():
    with pytest.raises(ValueError):
        classify_set([])


def test_witnesses_demonstrate_failures():
    rep = classify_set([OIT, OR2])
    by_prop = {w.property: w for w in rep.witnesses}
    # every failed flag carries a witness; spot-check their semantics
    for prop, flag in rep.flags.as_dict().items():
        assert flag == (prop not in by_prop)
    w = by_prop["horn"]
    c = OIT if w.constraint == "OIT" else OR2
    a, b = w.rows
    assert c.value_on(a) and c.value_on(b) and not c.value_on(w.produced)
    w = by_prop["complementive"]
    c = OIT if w.constraint == "OIT" else OR2
    r, rbar = w.rows
    assert rbar == (c.rows - 1) ^ r and c.value_on(r) != c.value_on(rbar)


def test_flags_monotone_under_union():
    rng = random.Random(5)
    for _ in range(300):
        a = [random_constraint(rng, rng.randint(1, 3)) for _ in range(2)]
        b = a + [random_constraint(rng, rng.randint(1, 3))]
        fa = classify_set(a).flags.as_dict()
        fb = classify_set(b).flags.as_dict()
        for key in fa:
            assert fa[key] or not fb[key]  # adding constraints never sets flags


def test_verdict_consistency_random_sets():
    rng = random.Random(6)
    for _ in range(1000):
        cs = [random_constraint(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
        rep = classify_set(cs)
        tractable = (
            rep.flags.horn
            or rep.flags.anti_horn
            or rep.flags.affine
            or rep.flags.bijunctive
        )
        if tractable:
            assert rep.qsat_verdict == "P"
            assert rep.qsat_i_verdict == "P"
            assert rep.sat_c_verdict == "P"
        else:
            assert rep.qsat_i_verdict == "Sigma_i-complete"
            assert rep.qsat_verdict == "PSPACE-complete"


def test_report_serialization():
    rep = classify_set([OIT])
    text = rep.to_text()
    assert "flags.affine=false" in text
    assert "verdicts.qsat_i=Sigma_i-complete" in text
    d = rep.to_dict()
    assert d["verdicts"]["sat"] == "NP-complete"
    assert "horn" in d["witnesses"]
    rep.to_json()


def test_constant_constraints_reported():
    const_true = Constraint("TOP", 2, 0b1111)
    rep = classify_set([OIT, const_true])
    assert rep.constant_constraints == ("TOP",)
