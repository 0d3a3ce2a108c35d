import csv
import json

import pytest
from click.testing import CliRunner

from cmctori.analysis import SCHEMA_VERSION, AnalysisRecord, analyze
from cmctori.cli import main
from cmctori.table import REFERENCE_TABLE, parse_rows, reproduce_row, to_markdown


@pytest.fixture
def runner():
    return CliRunner()


def test_record_json_round_trip():
    rec = analyze(0.4078, 0.1583)
    text = rec.to_json()
    again = AnalysisRecord.from_json(text)
    assert again == AnalysisRecord.from_dict(json.loads(text))
    assert again.to_json() == text
    d = json.loads(text)
    assert list(d)[0] == "schema_version" and d["schema_version"] == SCHEMA_VERSION
    assert set(d) == {"schema_version", "inputs", "params", "closure", "geometry",
                      "spectrum", "index", "bounds", "timings"}
    eigs = d["spectrum"]["eigenvalues"]
    assert eigs == sorted(eigs)


def test_analyze_row_A(runner, tmp_path):
    out, spec_csv = tmp_path / "a.json", tmp_path / "a.csv"
    res = runner.invoke(main, ["analyze", "--s", "0.4078", "--t", "0.1583",
                               "--json", str(out), "--csv-spectrum", str(spec_csv)])
    assert res.exit_code == 0, res.output
    rec = json.loads(out.read_text())
    assert (rec["closure"]["k"], rec["closure"]["w"], rec["index"]["index"]) == (2, 1, 6)
    rows = list(csv.reader(spec_csv.open()))
    assert rows[0] == ["j", "lambda_j0"]
    assert len(rows) - 1 == len(rec["spectrum"]["eigenvalues"])


def test_analyze_row_M_to_stdout(runner):
    res = runner.invoke(main, ["analyze", "--s", "0.5501", "--t", "-0.095", "--json", "-"])
    assert res.exit_code == 0
    rec = json.loads(res.output)
    assert rec["geometry"]["class"] == "Nodoidal"
    assert (rec["closure"]["k"], rec["closure"]["w"], rec["index"]["index"]) == (5, 1, 24)


def test_analyze_params_file_and_refine(runner, tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"s": 0.4392, "t": 0.0811}))
    res = runner.invoke(main, ["--quiet", "analyze", "--params-file", str(f), "--refine", "--json", "-"])
    assert res.exit_code == 0
    rec = json.loads(res.output)
    assert rec["closure"]["residual"] <= 1e-8
    assert rec["spectrum"]["minus_one_pair"]


def test_analyze_non_closing_exit_1(runner):
    res = runner.invoke(main, ["analyze", "--s", "0.4078", "--t", "0.1583", "--tol", "1e-6"])
    assert res.exit_code == 1
    err = json.loads(res.output)
    assert err["error"] == "closure not found"


def test_analyze_inadmissible_exit_1(runner):
    res = runner.invoke(main, ["analyze", "--s", "0.4", "--t", "0.399", "--tol", "1e-6"])
    assert res.exit_code == 1
    assert "message" in json.loads(res.output)


def test_analyze_bound_violation_exit_2(runner, monkeypatch):
    import cmctori.cli as cli

    real = cli.analyze

    def fake(*args, **kwargs):
        rec = real(*args, **kwargs)
        rec.bounds["satisfied"] = False
        return rec

    monkeypatch.setattr(cli, "analyze", fake)
    res = runner.invoke(main, ["--quiet", "analyze", "--s", "0.4078", "--t", "0.1583"])
    assert res.exit_code == 2


def test_close_examples(runner):
    res = runner.invoke(main, ["close", "--s", "0.4829", "--k", "9", "--w", "4"])
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["t"] == pytest.approx(0.0408, abs=5e-4)
    assert out["residual"] <= 1e-8


def test_close_without_sign_change(runner):
    res = runner.invoke(main, ["close", "--s", "0.4078", "--k", "3", "--w", "1",
                               "--t-bracket", "0.15,0.16"])
    assert res.exit_code == 1
    assert json.loads(res.output)["error"] == "RootFindingError"


def test_flat_commands(runner, tmp_path):
    res = runner.invoke(main, ["flat", "--H", "0", "--json", "-"])
    assert res.exit_code == 0
    (r,) = json.loads(res.output)
    assert (r["index"], r["nullity"], r["agrees"]) == (5, 4, True)
    out = tmp_path / "sweep.json"
    res = runner.invoke(main, ["flat", "--sweep", "0,10,200", "--json", str(out)])
    assert res.exit_code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 200 and all(r["agrees"] for r in rows)


def test_flat_requires_one_input(runner):
    assert runner.invoke(main, ["flat"]).exit_code == 1


def test_plot_outputs(runner, tmp_path):
    svg, data = tmp_path / "d.svg", tmp_path / "d.csv"
    res = runner.invoke(main, ["plot", "--s", "0.4275", "--t", "0.0796", "--samples", "500",
                               "--svg", str(svg), "--csv", str(data)])
    assert res.exit_code == 0
    text = svg.read_text()
    assert text.count("<path") == 1
    assert text.count('class="bulge"') == 5 and text.count('class="neck"') == 5
    assert 'class="axis"' in text
    rows = list(csv.reader(data.open()))
    assert rows[0] == ["x", "u", "v", "axis_distance"] and len(rows) == 502


def test_plot_non_closing(runner):
    res = runner.invoke(main, ["plot", "--s", "0.4078", "--t", "0.1583", "--tol", "1e-9"])
    assert res.exit_code == 1


def test_table_subset(runner, tmp_path):
    md = tmp_path / "t.md"
    res = runner.invoke(main, ["--quiet", "table", "--rows", "A,M", "--json", str(tmp_path / "t.json"),
                               "--markdown", str(md)])
    assert res.exit_code == 0
    assert md.read_text().count("| yes |") == 2


def test_table_unknown_row(runner):
    assert runner.invoke(main, ["table", "--rows", "Z"]).exit_code == 1


def test_parse_rows():
    assert parse_rows("all")[0] == "A" and len(parse_rows("all")) == 15
    assert parse_rows("A..D") == ["A", "B", "C", "D"]
    assert parse_rows("m-o") == ["M", "N", "O"]
    assert parse_rows("A, E") == ["A", "E"]


def test_printed_precision():
    assert REFERENCE_TABLE["A"].precision == pytest.approx((5e-5, 5e-5))
    assert REFERENCE_TABLE["I"].precision == pytest.approx((5e-5, 5e-4))


def test_reproduce_row_L():
    res = reproduce_row("L")
    assert res["passed"], res["checks"]
    assert res["computed"]["lambda_1"] == pytest.approx(-1.85, abs=2e-2)
    assert "| L |" in to_markdown([res])


def test_table_parallel_rows(runner):
    res = runner.invoke(main, ["table", "--rows", "I,O", "--jobs", "2", "--markdown", "-"])
    assert res.exit_code == 0
    assert "| I | 0.5112 | -0.050 |" in res.output
    assert "| O | 0.5210 | -0.051 |" in res.output
