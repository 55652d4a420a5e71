import json
import subprocess
import sys

import pytest
import sympy

from maxcurve import __version__
from maxcurve.cli import Report, dispatch, main, parse_text_result, report_emit
from maxcurve.registry import BUNDLED


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def payload(argv):
    report, _ = dispatch(argv)
    return report.to_dict()["result"]


def test_count_canonical(capsys):
    code, out, _ = run(["count", "--model", "C.canonical", "--ext", "3^1", "--json"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["result"]["N"] == 13
    assert d["command"] == "count" and d["field"] == {"p": 3, "k": 1}
    assert d["inputs"] == ["C.canonical"] and d["version"] == __version__
    assert d["elapsed_ms"] >= 0


def test_zeta_reproduces_expansion(capsys):
    code, out, _ = run(["zeta", "--model", "C.canonical", "--through", "5", "--json"], capsys)
    assert code == 0
    r = json.loads(out)["result"]
    T = sympy.Symbol("T")
    eq = sympy.expand((T**2 + 2 * T + 3) * (T**2 + 3 * T + 3) * (T**2 + 3) * (T**4 + 4 * T**3 + 8 * T**2 + 12 * T + 9))
    assert r["L"] == [int(c) for c in sympy.Poly(eq, T).all_coeffs()]
    assert r["counts"] == [13, 15, 22, 59, 263]


def test_json_schema_keys():
    report, _ = dispatch(["count", "--model", "E.weierstrass"])
    d = json.loads(report_emit(report, "json"))
    assert set(d) == {"command", "field", "inputs", "result", "elapsed_ms", "version"}


@pytest.mark.parametrize("argv", [["count", "--model", "S.quintic", "--ext", "3^2"], ["quotient"], ["cover", "--through", "1"]])
def test_json_roundtrip_and_text_parity(argv):
    report, _ = dispatch(argv)
    js = report_emit(report, "json")
    d = json.loads(js)
    again = Report(d["command"], d["field"]["p"], d["field"]["k"], d["inputs"], d["result"], d["elapsed_ms"], d["version"])
    assert report_emit(again, "json") == js
    text = report_emit(report, "text").decode()
    assert parse_text_result(text) == d["result"]


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--model", "C.canonical", "--ext", "3^3"],
        ["count", "--model", "C.sextic2", "--ext", "3^2"],
        ["zeta", "--model", "D.quartic"],
    ],
)
def test_threads_do_not_change_payload(argv):
    assert payload(argv + ["--threads", "1"]) == payload(argv + ["--threads", "2"])


def test_reports_are_deterministic():
    a = payload(["autos"])
    b = payload(["autos"])
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--bogus"],
        ["frobnicate"],
        ["count", "--model", "nope"],
        ["count", "--ext", "4^1"],
        ["count", "--ext", "5^1"],
        ["count", "--threads", "0"],
        ["zeta", "--model", "C.canonical", "--through", "2"],
        ["pencil", "--model", "S.quintic"],
        ["count", "--registry", "/nonexistent/models.ini"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert out == "" and "usage error" in err


def test_failed_check_exits_1(tmp_path, capsys):
    text = BUNDLED.read_text().replace(
        "equation = -x^3 + y^2*x - y^2 - x^4 + x + x^3*y^2 - y^4*x + y^4",
        "equation = -x^3 + y^2*x - y^2 - x^4 + x + x^3*y^2 - y^4*x + y^4 + 1",
    )
    assert text != BUNDLED.read_text()
    path = tmp_path / "altered.ini"
    path.write_text(text)
    code, out, err = run(["pencil", "--registry", str(path), "--json"], capsys)
    assert code == 1
    assert "matches_S.quintic" in err
    assert json.loads(out)["result"]["checks"]["matches_S.quintic"] is False


def test_budget_refusal_exits_1(capsys):
    code, out, err = run(["count", "--model", "C.canonical", "--ext", "3^3", "--budget", "10"], capsys)
    assert code == 1 and "refused" in err


def test_passing_pencil_exits_0(capsys):
    code, out, _ = run(["pencil"], capsys)
    assert code == 0
    r = parse_text_result(out)
    assert r["checks"] == {"matches_S.quintic": True, "smooth": True, "transversal_rank_5": True}


def test_help_and_version(capsys):
    assert run(["--help"], capsys)[0] == 0
    code, out, _ = run(["--version"], capsys)
    assert code == 0 and __version__ in out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "maxcurve", "count", "--json"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["N"] == 13
