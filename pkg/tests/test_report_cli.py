import csv
import io
import json
from fractions import Fraction as F

import pytest

from gdof import cli, report
from gdof.channel import SymmetricConfig as C
from gdof.inner import Scheme


def test_alpha_range_is_exact_and_inclusive():
    got = report.parse_alpha_range("0:1:0.1")
    assert len(got) == 11 and got[3] == F(3, 10) and got[-1] == 1
    assert report.parse_alpha_range("1/3,2") == [F(1, 3), 2]
    for bad in ("0:1", "0:1:0", "2:1:1"):
        with pytest.raises(ValueError):
            report.parse_alpha_range(bad)


def test_parse_schemes():
    assert report.parse_schemes("all") == report.SCHEME_ORDER
    assert report.parse_schemes("none") == ()
    assert report.parse_schemes("hk,noise") == (Scheme.NOISE, Scheme.HK)


def test_sweep_rows_and_reasons():
    spec = report.SweepSpec(C(3, 2, 2), (F(1, 2), F(2)))
    rows = report.sweep_rows(spec)
    assert rows[0]["INNER"] == 1 and rows[0]["OUTER"] == 1
    assert rows[1]["LEMMA3"] is None and "LEMMA3" in rows[1]["reason"]
    text = report.to_csv(spec, rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert parsed[1]["OUTER_pq"] == "2/1" and parsed[1]["active_inner"]


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_sweep_csv(capsys):
    code, out, _ = _run(capsys, "sweep", "--K", "3", "--M", "2", "--N", "2", "--alpha", "4/5")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["INNER_pq"] == "1/1" and row["active_inner"] == "IA"


def test_cli_sweep_json_with_config(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('K = 2\nM = 1\nN = 1\nalpha = "2/3"\nformat = "json"\n')
    code, out, _ = _run(capsys, "sweep", "--config", str(cfg))
    doc = json.loads(out)
    assert code == 0 and doc["rows"][0]["OUTER_pq"] == "2/3"
    code, out, _ = _run(capsys, "sweep", "--config", str(cfg), "--alpha", "1")
    assert json.loads(out)["rows"][0]["OUTER_pq"] == "1/2"


def test_cli_regimes(capsys):
    code, out, _ = _run(capsys, "regimes", "--K", "3", "--M", "2", "--N", "2")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "table,lo,lo_pq,hi,hi_pq,active,slope_pq,intercept_pq"
    inner = [l for l in lines if l.startswith("inner,")]
    outer = [l for l in lines if l.startswith("outer,")]
    assert inner[2].startswith("inner,0.75,3/4,1.5,3/2,IA,")
    assert inner[-1].startswith("inner,3,3/1,inf,,HK,")
    assert [l.split(",")[2] for l in outer] == ["0/1", "1/2", "2/3", "1/1", "2/1"]
    assert outer[-1] == "outer,2,2/1,inf,,INTERFERENCE_FREE,0/1,2/1"


def test_cli_regimes_json_has_both_tables(capsys):
    code, out, _ = _run(capsys, "regimes", "--K", "3", "--M", "2", "--N", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and set(doc) == {"inner", "outer"}
    assert doc["outer"][0] == {"lo": "0/1", "hi": "1/2", "active": ["LEMMA3"],
                               "slope": "-1/1", "intercept": "2/1"}


def test_cli_errors_and_partial_domains(capsys):
    code, _, err = _run(capsys, "sweep", "--K", "3", "--M", "3", "--N", "2", "--alpha", "0")
    assert code == 0  # outer bounds are defined for M > N; inner columns carry a reason
    code, out, err = _run(capsys, "regimes", "--K", "3", "--M", "3", "--N", "2")
    assert code == 0 and "M <= N" in err
    assert all(l.startswith("outer,") for l in out.strip().splitlines()[1:])
    code, _, err = _run(capsys, "regimes", "--K", "1", "--M", "1", "--N", "1")
    assert code == 2
    code, _, err = _run(capsys, "sweep", "--K", "3", "--M", "1")
    assert code == 2 and "missing N" in err


def test_cli_figure_writes_tables(tmp_path, capsys):
    code, out, _ = _run(capsys, "figure", "fig3", "--out-dir", str(tmp_path))
    assert code == 0
    path = tmp_path / "fig3_K3_M2_N2.csv"
    assert out.strip() == str(path) and path.exists()
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 301


def test_cli_validate(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GDOF_SEED", "3")
    out = tmp_path / "z.jsonl"
    code, _, err = _run(capsys, "validate", "zchannel", "--out", str(out))
    recs = [json.loads(l) for l in out.read_text().splitlines()]
    assert code == 0 and len(recs) == 200 and all(r["pass"] for r in recs)
    assert "200/200" in err


def test_cli_validate_slopes_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for out in (a, b):
        assert _run(capsys, "validate", "slopes", "--seed", "7", "--out", str(out))[0] == 0
    assert a.read_text() == b.read_text()
    assert len(a.read_text().splitlines()) == 5


def test_cli_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["validate", "nonsense"])
    assert info.value.code == 2


@pytest.mark.parametrize(
    "name, columns",
    [
        ("fig2", ["LEMMA1", "LEMMA2", "LEMMA3", "OUTER"]),
        ("fig3", ["NOISE", "ZF", "IA", "HK", "INNER", "OUTER"]),
        ("fig4", ["INNER", "OUTER"]),
        ("fig5", ["INNER", "OUTER"]),
        ("fig6", ["INNER"]),
        ("fig7", ["INNER"]),
    ],
)
def test_figure_presets_emit_plotted_curves(name, columns):
    for spec in report.figure_specs(name):
        values = [c for c in report.header(spec)[2:-3] if not c.endswith("_pq")]
        assert values == columns


def test_sweep_single_alpha_gives_one_row(capsys):
    code, out, _ = _run(capsys, "sweep", "--K", "3", "--M", "2", "--N", "2", "--alpha", "1:1:0.5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1 and rows[0]["alpha_pq"] == "1/1"
