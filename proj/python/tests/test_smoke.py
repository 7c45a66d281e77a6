import json

import pytest

import qpgerm


def test_reference_germ_round_trip():
    g = qpgerm.Germ.reference("E1")
    assert g.n == 2
    assert g.alpha == [1, 1]
    again = qpgerm.Germ.from_json(g.to_json())
    assert again.to_json() == g.to_json()


def test_evaluate_e1():
    g = qpgerm.Germ.reference("E1")
    z, w1, w2 = g.evaluate([0.1, 0.1, 0.1])
    assert abs(z - 0.09) < 1e-15
    assert abs(w1 - g.lambdas[0] * 0.0995) < 1e-15


def test_resonances_and_certificate():
    theta = [0.3819660112501051, 0.6180339887498949]
    rels = qpgerm.find_resonances(theta, 6)
    assert [(r["s"], r["beta"]) for r in rels] == [(1, [2, 1]), (2, [1, 2]), (1, [3, 2]), (2, [2, 3])]
    assert qpgerm.certify_one_resonance(theta, [1, 1], 6)["verdict"] == "certified"
    bad = qpgerm.certify_one_resonance(theta, [2, 1], 6)
    assert bad["verdict"] == "refuted"
    assert bad["witness"]["beta"] == [2, 1]


@pytest.mark.parametrize("name,nu,k,l,petals", [("E1", 2, 1, 0, 1), ("E2", 2, 1, 1, 1), ("E3", 2, 2, 0, 2)])
def test_analyze_reference(name, nu, k, l, petals):
    a = qpgerm.analyze(qpgerm.Germ.reference(name))
    p = a.profile
    assert (p["nu"], p["k"], p["l"]) == (nu, k, l)
    assert abs(p["A"] - 1) < 1e-10
    assert a.theorem_applies
    assert all(a.checklist.values())
    assert len(a.petals) == petals
    assert "verdict.theorem_applies = true" in a.report()


def test_verify_is_deterministic():
    a = qpgerm.analyze(qpgerm.Germ.reference("E1"))
    ok1, text1 = a.verify(samples=300, seed=5)
    ok2, text2 = a.verify(samples=300, seed=5)
    assert ok1 and ok2
    assert text1 == text2


def test_orbit_csv():
    a = qpgerm.analyze(qpgerm.Germ.reference("E1"))
    rows = a.orbit_csv(max_iter=2000).splitlines()
    assert rows[0].startswith("m,re_z,im_z,abs_z")
    assert rows[-1] == "# status=converging"
    assert len(rows) == 2003
    origin = a.orbit_csv(start=[0, 0, 0]).splitlines()
    assert len(origin) == 3


def test_input_errors():
    doc = json.loads(qpgerm.Germ.reference("E1").to_json())
    del doc["lambda_angles"]
    with pytest.raises(qpgerm.InputError, match="lambda_angles"):
        qpgerm.Germ.from_json(json.dumps(doc))
    with pytest.raises(ValueError):
        qpgerm.Germ.reference("E1").evaluate([0.1])
