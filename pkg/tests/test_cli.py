import csv
import io
import json
import subprocess
import sys

import pytest

from pbtv.cli import main, parse_n, parse_vec, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_vec():
    assert parse_vec(" 0.3, 0.7 ,0.5 ").tolist() == [0.3, 0.7, 0.5]
    assert parse_vec("").n == 0
    for bad in ("0.3,abc", "1.5", "-0.1"):
        with pytest.raises(UsageError):
            parse_vec(bad)


def test_parse_n():
    assert parse_n("12") == 12
    assert parse_n("1..200") == (1, 200)
    assert parse_n("3-9") == (3, 9)
    with pytest.raises(UsageError):
        parse_n("many")


def test_pmf(capsys):
    code, out, _ = run(capsys, "pmf", "--params", "0.5,0.5")
    assert code == 0
    assert out.splitlines() == ["0\t0.25", "1\t0.5", "2\t0.25"]
    code, out, _ = run(capsys, "pmf", "--params", "0.5", "--json")
    doc = json.loads(out)
    assert doc["schema"] == "pbtv/1" and doc["mass"] == [0.5, 0.5]


def test_tv(capsys):
    code, out, _ = run(capsys, "tv", "--p", "1,0,0.5", "--q", "0,1,0.6", "--bruteforce")
    doc = json.loads(out)
    assert code == 0
    assert doc["tv_pb"] == pytest.approx(0.1, abs=1e-12)
    assert doc["tv_product"] == pytest.approx(1.0)


def test_usage_errors(capsys):
    assert run(capsys, "tv", "--p", "0.1", "--q", "0.1,0.2")[0] == 2
    assert run(capsys, "pmf", "--params", "2.0")[0] == 2
    assert run(capsys, "certify", "--suite", "thm1", "--n", "5..1")[0] == 2
    assert run(capsys, "search", "--kind", "homog-ratio", "--n", "30")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["certify", "--suite", "nope"])
    assert exc.value.code == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--p", "0.9,0.4", "--q", "0.1,0.3")
    doc = json.loads(out)
    assert code == 0 and doc["type"] == "bound_report" and doc["all_pass"] is True
    code, out, _ = run(capsys, "bounds", "--p", "0.9,0.4", "--q", "0.1,0.3", "--csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "n" and rows[1][0] == "2"


def test_certify_writes_outputs(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, _, err = run(capsys, "certify", "--suite", "thm2", "--n", "1..30", "--count", "20", "--seed", "4",
                       "--out", str(out))
    assert code == 0
    assert "violations=0" in err
    rows = list(csv.DictReader(out.open()))
    assert rows[-1]["row"] == "summary" and rows[-1]["instances"] == "20"
    out2 = tmp_path / "r2.csv"
    run(capsys, "certify", "--suite", "thm2", "--n", "1..30", "--count", "20", "--seed", "4", "--out", str(out2),
        "--workers", "2")
    assert out.read_bytes() == out2.read_bytes()


def test_certify_violation_exit_code(capsys):
    code, out, _ = run(capsys, "certify", "--suite", "thm1", "--n", "1..5", "--count", "3", "--tol-slack", "-10")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_certify_reports_conjecture(capsys):
    code, _, err = run(capsys, "certify", "--suite", "split-lemma", "--n", "2..10", "--count", "5")
    assert code == 0
    assert "conjecture conjecture" in err and "not asserted" in err


def test_certify_bad_output_path(capsys, tmp_path):
    code, _, err = run(capsys, "certify", "--suite", "thm1", "--count", "1", "--out", str(tmp_path / "no" / "x.json"))
    assert code == 2 and "error" in err


def test_search(capsys, tmp_path):
    out = tmp_path / "s.json"
    code, _, _ = run(capsys, "search", "--kind", "tv-over-phi", "--n", "1..5", "--starts", "2", "--refine", "2",
                     "--out", str(out))
    doc = json.loads(out.read_text())
    assert code == 0 and doc["type"] == "search_record" and doc["objective"] >= 1 / 12


@pytest.mark.parametrize("check", ["derivative", "mixture", "dpi"])
def test_oracle_checks(capsys, check):
    code, out, _ = run(capsys, "oracle", "--check", check, "--n", "6", "--count", "5")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["results"]) == 5


def test_oracle_affinity(capsys):
    code, out, _ = run(capsys, "oracle", "--check", "affinity", "--n", "5")
    doc = json.loads(out)
    assert code == 0 and doc["results"][0]["non_affine"]


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "pbtv.cli", "pmf", "--params", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1\t1.0"
