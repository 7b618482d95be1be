import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from besselterm.cli import _number_list, UsageError, main

SVG_NS = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def usage_error(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    capsys.readouterr()
    return exc.value.code


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestParsing:
    @pytest.mark.parametrize("text,expected", [("1..4", [1, 2, 3, 4]), ("0.1, 0.2", [0.1, 0.2]), ("3", [3])])
    def test_lists(self, text, expected):
        assert _number_list(text) == expected

    @pytest.mark.parametrize("text", ["", ",", "5..2", "a"])
    def test_bad_lists(self, text):
        with pytest.raises(UsageError):
            _number_list(text)


class TestTerms:
    def test_table_value(self, capsys):
        code, out = run(capsys, "terms", "--p", "0", "--q", "1", "--p-prime", "1", "--eps-ratio", "0.01")
        assert code == 0
        assert rows(out) == [["p", "q", "p_prime", "eps_ratio", "l"], ["0", "1", "1", "0.01", "22"]]

    def test_own_basis(self, capsys):
        _, out = run(capsys, "terms", "--p", "0", "--q", "1", "--p-prime", "0", "--eps-ratio", "0.01")
        assert rows(out)[1][-1] == "1"

    def test_json(self, capsys):
        _, out = run(capsys, "terms", "--p-prime", "7", "--eps-ratio", "0.5", "--format", "json")
        data = json.loads(out)
        assert data["l"] == 1 and data["shortcut_used"] is True

    @pytest.mark.parametrize("argv", [["--eps-ratio", "-1"], ["--eps-ratio", "0"], ["--eps-ratio", "0.1,0.2"],
                                      ["--eps-ratio", "0.1", "--p", "-2"], []])
    def test_usage_errors(self, capsys, argv):
        assert usage_error(capsys, "terms", *argv) == 2

    def test_l_max_failure(self, capsys):
        code = main(["terms", "--p-prime", "9", "--eps-ratio", "0.01", "--l-max", "20"])
        assert code == 1
        assert "l_max exceeded" in capsys.readouterr().err


class TestSweep:
    def test_table(self, capsys):
        code, out = run(capsys, "sweep", "--p-prime", "1..9", "--eps-ratio", "0.01,0.05,0.15")
        table = rows(out)
        assert code == 0 and table[0] == ["p", "q", "p_prime", "eps_ratio", "l"]
        assert len(table) == 28
        got = {(int(r[2]), float(r[3])): int(r[4]) for r in table[1:]}
        for k in range(1, 10):
            assert (got[(k, 0.01)], got[(k, 0.05)], got[(k, 0.15)]) == (22 * k, 4 * k, k)

    def test_grid_flags(self, capsys):
        _, out = run(capsys, "sweep", "--p-prime", "2", "--eps-start", "0.1", "--eps-end", "0.3", "--eps-step", "0.1")
        assert [r[3] for r in rows(out)[1:]] == ["0.1", "0.2", "0.3"]

    def test_single_cell_matches_terms(self, capsys):
        argv = ["--p", "2", "--q", "2", "--p-prime", "3", "--eps-ratio", "0.04"]
        _, a = run(capsys, "sweep", *argv)
        _, b = run(capsys, "terms", *argv)
        assert a == b

    @pytest.mark.parametrize("argv", [["--p-prime", ""], ["--p-prime", "3..1"], ["--eps-ratio", "0.1,-0.2"],
                                      ["--eps-start", "0.1", "--eps-end", "0.2", "--eps-step", "0"]])
    def test_usage_errors(self, capsys, argv):
        assert usage_error(capsys, "sweep", *argv) == 2

    def test_deterministic(self, capsys):
        argv = ["sweep", "--p", "0,1", "--p-prime", "1..3", "--eps-ratio", "0.05,0.1"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_file_output(self, capsys, tmp_path):
        path = tmp_path / "s.csv"
        code, out = run(capsys, "sweep", "--p-prime", "1", "--eps-ratio", "0.1", "--out", str(path))
        assert code == 0 and out == ""
        assert path.read_text().startswith("p,q,p_prime,eps_ratio,l\n")


class TestFit:
    def test_default_grid(self, capsys, tmp_path):
        summary = tmp_path / "fit.json"
        svg = tmp_path / "fit.svg"
        code, out = run(capsys, "fit", "--summary", str(summary), "--svg", str(svg))
        table = rows(out)
        assert code == 0 and table[0] == ["eps_ratio", "slope", "intercept", "r_squared"]
        assert len(table) == 37
        data = json.loads(summary.read_text())
        assert set(data) == {"a", "b", "r_squared"}
        assert abs(data["a"] - 0.2259) <= 0.005 and abs(data["b"] + 0.55585) <= 0.02
        root = ET.fromstring(svg.read_text())
        assert len(root.findall(f"{SVG_NS}polyline")) == 3

    def test_json_format(self, capsys):
        _, out = run(capsys, "fit", "--eps-start", "0.05", "--eps-end", "0.3", "--format", "json")
        assert set(json.loads(out)) == {"a", "b", "r_squared"}

    @pytest.mark.parametrize("argv", [["--grid-step", "0"], ["--eps-start", "0.3", "--eps-end", "0.1"],
                                      ["--p-prime", "3"], ["--format", "xml"]])
    def test_usage_errors(self, capsys, argv):
        assert usage_error(capsys, "fit", *argv) == 2


class TestPredict:
    def test_headline(self, capsys):
        code, out = run(capsys, "predict", "--eps-ratio", "0.12", "--p-prime", "30", "--actual")
        data = json.loads(out)
        assert code == 0
        assert list(data) == ["m0", "l0", "l_hat", "l_rounded", "actual", "diff"]
        assert data["l_hat"] == pytest.approx(40.47, abs=0.01)
        assert data["actual"] == 41 and data["diff"] == -1

    def test_first_order(self, capsys):
        _, out = run(capsys, "predict", "--eps-ratio", "0.05", "--p-prime", "1")
        data = json.loads(out)
        assert data["l_hat"] == data["l0"] == 4
        assert set(data) == {"m0", "l0", "l_hat", "l_rounded"}

    def test_comparison_svg(self, capsys, tmp_path):
        svg = tmp_path / "cmp.svg"
        run(capsys, "predict", "--eps-ratio", "0.12", "--p-prime", "12", "--svg", str(svg),
            "--compare-p-primes", "11..13")
        root = ET.fromstring(svg.read_text())
        assert len(root.findall(f"{SVG_NS}polyline")) == 8

    @pytest.mark.parametrize("argv", [["--eps-ratio", "0.1", "--p-prime", "0"], ["--eps-ratio", "-0.1", "--p-prime", "3"],
                                      ["--p-prime", "3"]])
    def test_usage_errors(self, capsys, argv):
        assert usage_error(capsys, "predict", *argv) == 2


class TestMonotonicity:
    def test_discrepancy(self, capsys, tmp_path):
        summary = tmp_path / "v.json"
        code, out = run(capsys, "monotonicity", "--p", "2", "--q", "2", "--summary", str(summary))
        assert code == 0 and rows(out)[0] == ["p_prime", "l"] and len(rows(out)) == 12
        assert [0, 1] in json.loads(summary.read_text())

    def test_no_violations(self, capsys):
        _, out = run(capsys, "monotonicity", "--p", "3", "--format", "json")
        assert json.loads(out) == []

    def test_single_order(self, capsys):
        _, out = run(capsys, "monotonicity", "--p", "0", "--p-prime-max", "0", "--format", "json")
        assert json.loads(out) == []

    def test_svg(self, capsys):
        _, out = run(capsys, "monotonicity", "--p", "1", "--format", "svg")
        assert len(ET.fromstring(out).findall(f"{SVG_NS}polyline")) == 1


class TestInvariant:
    def test_power(self, capsys):
        code, out = run(capsys, "invariant", "power", "--n", "1", "--s", "1", "--r", "2")
        data = json.loads(out)
        assert code == 0 and data["residual"] <= 1e-12 and data["value"] == 0.5

    def test_numeric(self, capsys):
        code, out = run(capsys, "invariant", "numeric", "--fn", "gaussian", "--n", "0", "--r", "1")
        assert code == 0 and json.loads(out)["invariant"] <= 1e-5

    def test_tolerance_failure(self, capsys):
        code = main(["invariant", "numeric", "--n", "0", "--r", "1", "--tol", "1e-30"])
        assert code == 1

    @pytest.mark.parametrize("argv", [["bogus"], ["power", "--r", "0"], ["power", "--n", "-2"], []])
    def test_usage_errors(self, capsys, argv):
        assert usage_error(capsys, "invariant", *argv) == 2


def test_cache_dir_flag(capsys, tmp_path):
    run(capsys, "terms", "--p-prime", "2", "--eps-ratio", "0.2", "--cache-dir", str(tmp_path))
    assert (tmp_path / "bessel_roots.csv").read_text().startswith("order,index,root\n")
    from besselterm import roots
    roots.set_cache_dir(None)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "besselterm.cli", "terms", "--eps-ratio", "0.15", "--p-prime", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.splitlines()[-1].endswith(",3")


def test_no_command():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
