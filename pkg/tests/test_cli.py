import csv
import io
import json
from fractions import Fraction

import jsonschema
import pytest

from multiquad.cli import COLUMNS, main
from multiquad.report import CountReport, fmt, load_schema, parse_rational

SCHEMA = load_schema()

COMMANDS = [
    ["count", "--k", "2", "--x", "143,144,256", "--oracle"],
    ["count", "--k", "2", "--x", "400", "--dump"],
    ["radical", "--k", "2", "--P", "65", "--filter", "tr"],
    ["normalize", "--presentation", "6,10", "--presentation", "2,5"],
    ["disc", "--presentation", "2,-1"],
    ["disc", "--key=-6,-3,2"],
    ["formula", "--k", "3", "--kind", "R(2,3)"],
    ["constant", "--k", "2", "--prime-bound", "100000"],
    ["fit", "--k", "2", "--grid", "1e6,1e7,1e8,1e9,1e10,1e11"],
    ["verify", "--suite", "formulas", "--max-omega", "2"],
]


def run(capsys, argv):
    status = main(argv)
    out = capsys.readouterr()
    return status, out.out, out.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_count_example(capsys):
    status, out, _ = run(capsys, ["count", "--k", "2", "--x", "256"])
    assert status == 0
    assert out.splitlines()[0] == ",".join(COLUMNS["count"])
    assert csv_rows(out)[0]["value"] == "3"


def test_normalize_example(capsys):
    _, out, _ = run(capsys, ["normalize", "--presentation", "6,10"])
    assert csv_rows(out)[0]["normal"] == "10,15"


def test_formula_example(capsys):
    _, out, _ = run(capsys, ["formula", "--k", "2", "--kind", "Q"])
    assert csv_rows(out)[0]["formula"] == "2·(3)^(ω−1) − 1·(1)^(ω−1)"


def test_disc_row(capsys):
    _, out, _ = run(capsys, ["disc", "--key=-1,-3,3"])
    row = csv_rows(out)[0]
    assert row == {
        "key": "-3,-1,3",
        "presentation": "-1,-3",
        "mod4_class": "(3,1)",
        "r": "2",
        "radical": "3",
        "discriminant": "144",
    }


def test_radical_rows(capsys):
    _, out, _ = run(capsys, ["radical", "--k", "2", "--P", "65", "--filter", "tr+(1,1)"])
    assert csv_rows(out) == [{"D": "4225", "key": "5,13,65"}]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:1] + a[1:3]))
def test_json_validates(capsys, argv):
    status, out, _ = run(capsys, argv + ["--format", "json"])
    assert status == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == argv[0]
    assert doc["columns"] == list(doc["rows"][0]) if doc["rows"] else True


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, ["count", "--k", "2", "--x", "256", "--format", "json", "--timing"])
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert "wall_time" in doc
    _, out, _ = run(capsys, ["count", "--k", "2", "--x", "256", "--format", "json"])
    assert "wall_time" not in json.loads(out)


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.csv"
    assert main(["count", "--k", "2", "--x", "256", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert csv_rows(path.read_text())[0]["value"] == "3"


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["count", "--k", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["formula", "--k", "2", "--kind", "Z"])
    assert exc.value.code == 2


def test_computation_error_exit_1(capsys):
    status, _, err = run(capsys, ["normalize", "--presentation", "-1,3"])
    assert status == 1
    assert err.startswith("error: not_i_free:")
    status, _, err = run(capsys, ["disc", "--presentation", "2,8"])
    assert status == 1 and "independence" in err


def test_sieve_bound_env(monkeypatch, capsys):
    monkeypatch.setenv("MULTIQUAD_SIEVE_BOUND", "1000")
    status, _, err = run(capsys, ["count", "--k", "2", "--x", "1e8"])
    assert status == 1 and err.startswith("error: bound_exceeded:")


def test_verify_reports_failure(monkeypatch, capsys):
    from multiquad import verify

    monkeypatch.setattr(verify, "NAMED_VALUES", verify.NAMED_VALUES + ((2, verify.Kind.Q, 15, 6),))
    status, out, err = run(capsys, ["verify", "--suite", "formulas", "--max-omega", "1"])
    assert status == 1
    assert "P=15, expected=6, got=5" in err
    assert any(r["status"] == "fail" for r in csv_rows(out))


def test_values_roundtrip():
    for v in (0, -7, 10**40, Fraction(-23, 3072), Fraction(5)):
        assert parse_rational(fmt(v)) == v
    rep = CountReport("count", {"k": 2}, columns=["a", "b"])
    rep.add(a=Fraction(1, 3), b=True)
    assert rep.to_csv() == "a,b\n1/3,true\n"
