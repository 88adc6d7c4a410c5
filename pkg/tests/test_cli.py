import json

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from torsiongrowth.cli import (
    ParseError,
    main,
    parse_curve,
    parse_element,
    parse_field,
    parse_group,
    render_element,
)
from torsiongrowth.fields import QI, QSQRT_MINUS3, QuadField


def test_parse_field():
    assert parse_field("Qi") is QI
    assert parse_field("Qsqrt-3") is QSQRT_MINUS3
    assert parse_field("Qsqrt5") == QuadField(5)
    with pytest.raises(ParseError):
        parse_field("Zp7")


def test_parse_element_examples():
    x = parse_element("6*s-30", QSQRT_MINUS3)
    assert x == QSQRT_MINUS3.elem(-30, 6)
    assert parse_element("-15", QI) == QI.elem(-15)
    x = parse_element("(3*i-1)/2", QI)
    assert x == QI.elem(mpq(-1, 2), mpq(3, 2))
    assert parse_element("1/2", QI) == QI.elem(mpq(1, 2))
    with pytest.raises(ParseError):
        parse_element("i", QSQRT_MINUS3)
    with pytest.raises(ParseError):
        parse_element("3 +", QI)
    with pytest.raises(ParseError):
        parse_element("(1+2", QI)


def rationals():
    return st.builds(mpq, st.integers(-50, 50), st.integers(1, 20))


@given(rationals(), rationals(), st.sampled_from([QI, QSQRT_MINUS3, QuadField(5)]))
@settings(max_examples=120, deadline=None)
def test_parse_render_roundtrip(a, b, K):
    x = K.elem(a, b)
    assert parse_element(render_element(x), K) == x


def test_parse_curve():
    E = parse_curve("[1,0,1,-454,-544]", QI)
    assert [int(c.a) for c in E.a_invariants()] == [1, 0, 1, -454, -544]
    E = parse_curve("[0,-27]", QI)
    assert int(E.a6.a) == -27
    E = parse_curve("[1, 0, 0, (6*s-30), 1]", QSQRT_MINUS3)
    assert E.a4 == QSQRT_MINUS3.elem(-30, 6)
    with pytest.raises(ParseError):
        parse_curve("[1,2,3]", QI)


def test_parse_group():
    assert parse_group("C8").invariants == (1, 8)
    assert parse_group("C2xC8").invariants == (2, 8)
    assert parse_group("C3xC5").invariants == (1, 15)
    with pytest.raises(ParseError):
        parse_group("D4")


def test_cmd_compute_json(capsys):
    rc = main(["compute", "--field", "Qi", "--curve", "[1,0,1,-454,-544]",
               "--format", "json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["field"] == "Qi"
    assert report["torsion"]["invariants"] == [1, 2]
    assert report["torsion"]["order"] == 2
    assert report["growths"] == []
    assert set(report) == {"field", "curve", "torsion", "growths"}


def test_cmd_growth_json(capsys):
    rc = main(["growth", "--field", "Qi", "--curve", "[1,1,1,-80,242]",
               "--format", "json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    growths = report["growths"]
    assert any(g["group"] == "C8" and g["d_class"] == "5" for g in growths)
    for g in growths:
        assert set(g) == {"d", "d_class", "group", "provenance"}


def test_exit_codes(capsys):
    assert main(["compute", "--field", "Qi", "--curve", "[0,0,0,0,0]"]) == 3
    assert main(["compute", "--field", "Qi", "--curve", "[1,z,0,0,1]"]) == 2
    assert main(["reproduce", "/nonexistent/table.json"]) == 2
    capsys.readouterr()


def test_reproduce_mini_table(tmp_path, capsys):
    rows = [
        {"base_group": "C2", "d": "-3", "extended_group": "C2xC6",
         "model": [0, 0, 0, 0, -27]},
        {"base_group": "C6", "d": "2", "extended_group": "C12",
         "model": [1, 0, 1, -289, 1862]},
        {"base_group": "C6", "d": "6", "extended_group": "C2xC6",
         "model": [1, 0, 1, -289, 1862]},
    ]
    path = tmp_path / "table6_mini.json"
    path.write_text(json.dumps(rows))
    assert main(["reproduce", str(path), "--field", "Qi"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3

    rows[0]["extended_group"] = "C2xC8"  # sabotage
    path.write_text(json.dumps(rows))
    assert main(["reproduce", str(path), "--field", "Qi"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_reproduce_jobs_deterministic(tmp_path, capsys):
    rows = [
        {"base_group": "C2", "d": "-3", "extended_group": "C2xC6",
         "model": [0, 0, 0, 0, -27]},
        {"base_group": "C3", "d": "-3", "extended_group": "C3xC3",
         "model": [0, 1, 1, -9, -15]},
    ]
    path = tmp_path / "mini.json"
    path.write_text(json.dumps(rows))
    assert main(["reproduce", str(path), "--field", "Qi", "--jobs", "1"]) == 0
    out1 = capsys.readouterr().out
    assert main(["reproduce", str(path), "--field", "Qi", "--jobs", "2"]) == 0
    out2 = capsys.readouterr().out
    assert out1 == out2


def test_cmd_growth_csv(capsys):
    rc = main(["growth", "--field", "Qi", "--curve", "[1,0,1,-171,-874]",
               "--format", "csv"])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "field,curve,base_group,d_class,group,provenance"
    assert any(",C6," in line for line in out[1:])
    assert any(",C2xC2," in line for line in out[1:])
