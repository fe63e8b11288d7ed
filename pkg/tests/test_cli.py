from __future__ import annotations

import json
from fractions import Fraction

import pytest

from flagke import cli

A2 = '{"family": "A", "rank": 2, "black": [1]}'
SEED3 = '{"family": "A", "rank": 2, "black": []}'
LINE = '{"string": [2], "char": [2], "end": "left"}'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_time(text):
    data = json.loads(text)
    data.pop("generated_at")
    return data


@pytest.fixture(autouse=True)
def no_env_output(monkeypatch):
    monkeypatch.delenv(cli.OUTPUT_ENV, raising=False)


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", '{"family": "A", "rank": 3, "black": [1]}')
    assert code == cli.EXIT_OK
    r = json.loads(out)
    assert r["beta_pairings"] == {"1": "1/2"}
    assert "generated_at" in r


def test_analyze_from_file(tmp_path, capsys):
    p = tmp_path / "d.json"
    p.write_text(A2)
    code, out, _ = run(capsys, "analyze", str(p))
    assert code == 0 and json.loads(out)["label"] == "A2[*o]"


def test_bundles(capsys):
    code, out, _ = run(capsys, "bundles", '{"family": "A", "rank": 2, "black": [2]}', "--max-char", "2")
    assert code == 0
    assert json.loads(out)["count"] == 9


def test_solve_feasible(capsys):
    code, out, _ = run(capsys, "solve", A2, "--bundle", LINE, "--lambda", "-1")
    assert code == 0
    r = json.loads(out)
    assert r["feasible"] and r["complete"] and r["domain_end"] == "inf"
    assert r["Z0"] == ["1/2", "0"]
    assert r["kappa_sq"] == "13/12" and r["c"] == {"times_m": 2, "sqrt_kappa_sq": "13/12"}
    assert r["z0_source"] == "solved"
    # exact fractions survive the round trip
    assert [Fraction(x) for x in r["Z0"]] == [Fraction(1, 2), 0]


def test_solve_seed_domain_end(capsys):
    code, out, _ = run(capsys, "solve", SEED3, "--bundle", '{"string": [1, 2], "end": "left"}', "--lambda", "4")
    r = json.loads(out)
    assert code == 0 and not r["complete"]
    assert abs(r["domain_end"] - 2.221441469079183) < 1e-12


def test_solve_infeasible(capsys):
    code, out, _ = run(capsys, "solve", A2, "--bundle", '{"string": [2], "char": [0], "end": "left"}', "--lambda", "0")
    assert code == cli.EXIT_INFEASIBLE
    r = json.loads(out)
    assert r == {**r, "feasible": False, "reason": "flat"}


def test_solve_user_face_point(capsys):
    code, out, _ = run(capsys, "solve", SEED3, "--bundle", '{"string": [1, 2], "end": "left"}', "--lambda", "0", "--z0", "[0]")
    assert code == 0 and json.loads(out)["z0_source"] == "user"
    code, out, _ = run(capsys, "solve", SEED3, "--bundle", '{"string": [1, 2], "end": "left"}', "--lambda", "0", "--z0", "[1]")
    assert code == cli.EXIT_INFEASIBLE and json.loads(out)["reason"] == "face"


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", '{"family": "Q", "rank": 2}', "--bundle", "{}", "--lambda", "1"],
        ["solve", A2, "--bundle", '{"string": [1], "end": "left"}', "--lambda", "1"],
        ["solve", A2, "--bundle", LINE, "--lambda", "one"],
        ["solve", A2, "--bundle", LINE, "--lambda", "1", "--z0", '{"a": 1}'],
        ["analyze", "{not json"],
        ["verify-cpn", "--n", "1"],
        ["suite", "--only", "12"],
    ],
)
def test_parse_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == cli.EXIT_PARSE
    assert "parse error" in err


@pytest.mark.parametrize("argv", [["frobnicate"], ["solve", A2, "--lambda", "1"], ["bundles", A2, "--max-char", "x"]])
def test_argparse_errors_use_parse_code(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == cli.EXIT_PARSE


def test_profile_writes_csv_and_report(tmp_path, capsys):
    code, _, _ = run(capsys, "profile", A2, "--bundle", LINE, "--lambda", "-1", "-o", str(tmp_path))
    assert code == 0
    rows = cli.read_profile_csv(tmp_path / "profile.csv")
    assert list(rows[0]) == ["t", "f", "fdot", "fddot", "residual"]
    assert len(rows) == 401 and rows[-1]["t"] == 50.0
    assert max(r["residual"] for r in rows) < 1e-8
    r = json.loads((tmp_path / "report.json").read_text())
    assert r["checks_passed"] and r["rk"]["max_f_diff"] < 1e-8
    # 17 significant digits: every float re-parses to the same value
    line = (tmp_path / "profile.csv").read_text().splitlines()[5]
    assert all(float("%.17g" % float(x)) == float(x) for x in line.split(","))


def test_profile_env_output_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path))
    code, _, _ = run(capsys, "profile", SEED3, "--bundle", '{"string": [1, 2], "end": "left"}', "--lambda", "4", "--samples", "51")
    assert code == 0
    rows = cli.read_profile_csv(tmp_path / "profile.csv")
    assert len(rows) == 51 and rows[-1]["fdot"] == 0.0


def test_determinism(capsys):
    argv = ["solve", A2, "--bundle", LINE, "--lambda", "3/2"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert strip_time(a) == strip_time(b)
    assert json.dumps(strip_time(a), sort_keys=True) == json.dumps(strip_time(b), sort_keys=True)


def test_json_roundtrip(tmp_path, capsys):
    _, out, _ = run(capsys, "solve", A2, "--bundle", LINE, "--lambda", "-2")
    data = json.loads(out)
    again = json.loads(cli.dumps(data, timestamp=False))
    assert again == data


@pytest.mark.parametrize("n", [2, 3])
def test_verify_cpn(capsys, n):
    code, out, _ = run(capsys, "verify-cpn", "--n", str(n))
    assert code == 0 and out.startswith("PASS")
    if n == 2:
        assert "kappa^2=1/8" in out and "lambda=3" in out and "c=0.707106781186548" in out


def test_suite_subset(capsys, tmp_path):
    code, out, _ = run(capsys, "suite", "--only", "2,4", "-o", str(tmp_path))
    assert code == 0
    assert out.count("[PASS]") == 2
    assert json.loads((tmp_path / "suite.json").read_text())["results"][0]["number"] == 2


def test_suite_worker_pool(capsys):
    code, out, _ = run(capsys, "suite", "--only", "2,3", "--workers", "2")
    assert code == 0 and out.count("[PASS]") == 2
