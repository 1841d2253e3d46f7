import json

import pytest

import ltk


def test_theorem():
    assert ltk.theorem("[T]p1 -> p1")["verdict"] == "theorem"
    r = ltk.theorem("[T]p1 -> [T][T]p1")
    assert r["verdict"] == "not-theorem"
    cm = r["countermodel"]
    check = ltk.model_check({k: v for k, v in cm.items() if k != "world"}, "[T]p1 -> [T][T]p1")
    assert cm["world"] in check["refuted_at"]


def test_admissible_and_witness():
    assert ltk.admissible("x1 / x1")["verdict"] == "admissible"
    r = ltk.admissible("<E>x1 / x1", jobs=2)
    assert r["verdict"] == "not-admissible"
    assert ltk.check_witness("<E>x1 / x1", r)["ok"]
    assert ltk.check_witness("<E>x1 / x1", json.dumps(r["witness"]))["ok"]
    assert r == ltk.admissible("<E>x1 / x1", jobs=1)


def test_normal_form():
    nf = ltk.normal_form("x1 / x1")
    assert nf["m"] == 1 and nf["count"] == 8 and len(nf["thetas"]) == 8


def test_charmodel():
    cm = ltk.charmodel(vars=1, max_cluster=2, depth=3)
    assert cm["slices"]["layer_counts"] == [8, 56, 448]


def test_oracle():
    assert ltk.refute("p1 -> [T]p1")["refuted"]
    assert not ltk.refute("[E]p1 -> p1")["refuted"]
    assert ltk.equivalid("x1 / [E]x1")


def test_errors():
    with pytest.raises(ltk.ParseError):
        ltk.admissible("x1 /")
    with pytest.raises(ValueError):
        ltk.admissible("x1 / x1", cond5="sideways")
    with pytest.raises(ltk.ModelError):
        ltk.model_check({"agents": 1, "clusters": []}, "p1")
