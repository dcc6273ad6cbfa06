import json

import pytest

from gorhom.paperlab import (ReproductionReport, _Runner, build_scenario, check_algebras, check_hilbert,
                             check_negative_control, check_patterns, reproduce_all, residue_set)
from gorhom.scalar import GF, QQ


def test_residue_set():
    assert residue_set(3, 0, 0, 10) == [2, 3]
    assert residue_set(0, 4, 1, 12) == [3, 4, 7, 8, 11, 12]
    assert residue_set(-2, 0, 1, 5, offsets=(0, -1)) == []
    assert residue_set(-2, 4, 1, 8, offsets=(0, -1)) == [1, 2, 5, 6]


@pytest.mark.parametrize("field,alpha,s", [(QQ, 2, 0), (GF(5), 2, 4), (QQ, 1, 1), (GF(7), 3, 6), (QQ, -1, 2)])
def test_order_regimes(field, alpha, s):
    assert build_scenario(field, alpha, 4, 2).s == s


def test_checks_in_feasible_regime(scF5):
    rep = ReproductionReport(scF5.describe())
    run = _Runner(rep)
    check_algebras(scF5, run)
    check_hilbert(scF5, run)
    check_patterns(scF5, run)
    assert rep.passed, [c.name for c in rep.failures()]
    assert rep.by_name("ext.M.T0.display").passed


def test_runner_records_exceptions():
    rep = ReproductionReport({})
    run = _Runner(rep)
    run.check("boom", "raises", "TRIVIAL", 1, lambda: 1 // 0)
    run.check("ok", "holds", "TRIVIAL", 1, lambda: 1)
    assert [c.name for c in rep.failures()] == ["boom"]
    assert "ZeroDivisionError" in rep.by_name("boom").note


def test_negative_control_detects_perturbation():
    rep = ReproductionReport({})
    check_negative_control(_Runner(rep))
    assert rep.passed
    assert any(n.startswith(("exact.", "A.gorenstein")) for n in rep.checks[0].actual)


def test_report_deterministic_and_json():
    sc = build_scenario(GF(5), 2, 8, 4)
    a = reproduce_all(sc, negative_control=False).to_json()
    b = reproduce_all(build_scenario(GF(5), 2, 8, 4), negative_control=False).to_json()
    assert a == b
    d = json.loads(a)
    assert d["passed"] and d["scenario"]["s"] == 4
    assert "seconds" not in d["checks"][0]
    assert {c["provenance"] for c in d["checks"]} <= {"PAPER", "DERIVED", "TRIVIAL"}


def test_full_report_over_Q(scQ):
    rep = reproduce_all(scQ)
    assert rep.passed, [(c.name, c.expected, c.actual) for c in rep.failures()]
    names = {c.name for c in rep.checks}
    assert {"rigidity.T1", "interval.N2,6", "tate.M.V", "control.perturbed"} <= names
