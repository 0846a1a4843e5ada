import json
import math

import numpy as np
import pytest

import opmetric

M2 = {
    "p": 2,
    "q": 2,
    "basis": [
        [[1, 0], [0, 0], [0, 0], [0, 0]],
        [[0, 0], [1, 0], [0, 0], [0, 0]],
        [[0, 0], [0, 0], [1, 0], [0, 0]],
        [[0, 0], [0, 0], [0, 0], [1, 0]],
    ],
    "unit": [[1, 0], [0, 0], [0, 0], [1, 0]],
}

LINF3 = {
    "p": 3,
    "q": 3,
    "basis": [
        [[1, 0]] + [[0, 0]] * 8,
        [[0, 0]] * 4 + [[1, 0]] + [[0, 0]] * 4,
        [[0, 0]] * 8 + [[1, 0]],
    ],
    "unit": [[1, 0], [0, 0], [0, 0]],
}


def test_norms():
    m = np.array([[1, 1], [0, 1]], dtype=complex)
    assert opmetric.op_norm(m) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)
    assert opmetric.trace_norm(np.diag([0.6, 0.4]).astype(complex)) == pytest.approx(1.0, abs=1e-14)


def test_space_and_gadget():
    s = opmetric.load_space(json.dumps(M2))
    assert (s.p, s.q, s.dim) == (2, 2, 4)
    assert np.allclose(s.realize(s.unit), np.eye(2))
    x = np.array([0, 1, 0, 0], dtype=complex)
    t = opmetric.t_gadget(s, s.unit, x)
    assert t.shape == (4, 4)
    assert opmetric.op_norm(t) ** 2 == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-12)
    # level-2 element with E12 in one cell
    x2 = np.zeros(16, dtype=complex)
    x2[1] = 1.0
    assert s.norm(x2, level=2) == pytest.approx(1.0, abs=1e-12)


def test_check_reports():
    s = opmetric.load_space(json.dumps(LINF3))
    r = opmetric.check("unitary-four-rotation", s, restarts=16)
    assert r["verdict"] == "VIOLATED"
    assert -r["margin"] >= math.sqrt(2) - 1 - 1e-3
    assert r["witness"]["coeffs"]
    m2 = opmetric.load_space(json.dumps(M2))
    assert opmetric.check("coisometry", m2, restarts=8)["verdict"] == "HOLDS_WITHIN_BUDGET"
    pos = opmetric.check("positive", m2, x=np.array([-0.5, 0, 0, -0.5], dtype=complex))
    assert pos["verdict"] == "VIOLATED"
    assert pos["witness"]["aux"]["z_re"] == pytest.approx(2.0, abs=1e-6)
    assert len(opmetric.catalog()) == 13


def test_errors():
    with pytest.raises(opmetric.ParseError):
        opmetric.load_space("{")
    s = opmetric.load_space(json.dumps(M2))
    with pytest.raises(opmetric.InvalidInput):
        opmetric.check("no-such-criterion", s)
    with pytest.raises(opmetric.OpmetricError):
        opmetric.check("coisometry", s, restarts=-1)


def test_formulas_and_corpus():
    f = opmetric.verify_formulas(trials=20, seed=7)
    assert f["passed"]
    assert "trace_class_2" in opmetric.corpus_names()
    run = opmetric.run_corpus(only=["trace_class_2"], restarts=16)
    assert run["all_matched"]
    probe = run["entries"][0]["probes"][0]["value"]
    assert probe == pytest.approx(math.sqrt(1.25) - math.sqrt(1.0625), abs=1e-9)
