#!/usr/bin/env python3
"""Tests for arrangement files, commands, exit codes and reports."""

import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from rich.console import Console

from algebra.errors import (
    ArrangementFileError,
    HypothesisViolation,
    InconsistencyError,
    NotHomogeneousError,
    PolynomialSyntaxError,
)
from algebra.polycore import format_polynomial, make_ring, parse_polynomial
from analyzer import Analyzer, AnalyzerConfig
from arrangement_analyzer import main
from utils.arrangement_file import parse_arrangement_text, render_arrangement
from utils.command_util import exit_code_for
from utils.report_util import MISSING, build_markdown, lookup, report_json

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def quiet_analyzer(**config):
    return Analyzer(config=AnalyzerConfig(**config), console=Console(file=io.StringIO()))


def write(directory, name, text):
    path = Path(directory) / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_arrangement_file_parsing():
    """Directives, comments and settings are read."""
    print("=== Testing Arrangement Files ===")
    text = "# header\nvars u v w\ncurve u*v   # two lines\ncurve w\nadd u + v + w\nseed 7\noption prime 32003\n"
    file = parse_arrangement_text(text)
    assert file.variables == ("u", "v", "w")
    assert [c.text for c in file.curves] == ["u*v", "w"]
    assert file.curves[0].line == 3 and file.curves[0].column == 7
    assert file.add.text == "u + v + w"
    assert file.seed == 7
    assert file.prime == 32003
    ring = file.ring()
    assert file.components()[0] == parse_polynomial("u*v", ring)
    print("[PASS] vars, curve, add, seed and option lines")

    plain = parse_arrangement_text("curve x\n")
    assert plain.variables == ("x", "y", "z")
    assert plain.add is None and plain.seed is None and plain.prime is None
    print("[PASS] Defaults without vars, seed or options")
    print()


def test_arrangement_file_errors():
    """Every malformed line reports its line and column."""
    print("=== Testing Arrangement File Errors ===")
    cases = [
        ("vars x y\ncurve x\n", 1, 6),
        ("curve x\nbogus 1\n", 2, 1),
        ("curve x\noption prime 12\n", 2, 8),
        ("curve x\nadd y\nadd z\n", 3, 1),
        ("curve x\nseed abc\n", 2, 6),
        ("curve x\nvars x y z\n", 2, 1),
    ]
    for text, line, column in cases:
        with pytest.raises(ArrangementFileError) as info:
            parse_arrangement_text(text)
        assert (info.value.line, info.value.column) == (line, column), (text, info.value.line, info.value.column)
    with pytest.raises(ArrangementFileError):
        parse_arrangement_text("vars x y z\n")
    print("[PASS] Directive errors carry positions")

    file = parse_arrangement_text("curve x\ncurve x + w\n")
    with pytest.raises(ArrangementFileError) as info:
        file.components()
    assert (info.value.line, info.value.column) == (2, 11)
    print("[PASS] Polynomial errors are shifted to file columns")
    print()


def test_render_arrangement():
    print("=== Testing Rendering ===")
    ring = make_ring()
    components = [parse_polynomial(t, ring) for t in ("x", "y - z")]
    text = render_arrangement(("x", "y", "z"), components, add=parse_polynomial("x + y + z", ring), seed=3,
                              options={"prime": 101}, header="generated")
    file = parse_arrangement_text(text)
    assert text.startswith("# generated\n")
    assert [format_polynomial(c) for c in file.components(None)] == ["x", "y - z"]
    assert file.add.text == "x + y + z"
    assert file.seed == 3 and file.prime == 101
    print("[PASS] Rendered files parse back")
    print()


def test_exit_code_mapping():
    print("=== Testing Exit Codes ===")
    assert exit_code_for(ArrangementFileError("bad", 1)) == 2
    assert exit_code_for(PolynomialSyntaxError("bad", "x +", 3)) == 2
    assert exit_code_for(HypothesisViolation("bad", "smooth_curve")) == 3
    assert exit_code_for(NotHomogeneousError("bad")) == 3
    assert exit_code_for(InconsistencyError("bad", ["bezout"])) == 4
    assert exit_code_for(RuntimeError("bad")) == 1
    print("[PASS] Errors map to 2, 3, 4 and 1")
    print()


def test_config_from_env():
    print("=== Testing Configuration ===")
    config = AnalyzerConfig.from_env({"ARRANGEMENT_PRIME": "32003", "ARRANGEMENT_SEED": "5"})
    assert (config.prime, config.seed) == (32003, 5)
    assert config.with_overrides(seed=None).seed == 5
    assert config.with_overrides(seed=9).seed == 9
    assert AnalyzerConfig.from_env({}).prime is None
    with pytest.raises(ValueError):
        AnalyzerConfig.from_env({"ARRANGEMENT_PRIME": "12"})
    with pytest.raises(ValueError):
        AnalyzerConfig.from_env({"ARRANGEMENT_SEED": "abc"})
    with pytest.raises(ValueError):
        AnalyzerConfig(pair_limit=0)
    print("[PASS] Environment overrides and validation")
    print()


def test_analyze_small_files():
    print("=== Testing analyze ===")
    analyzer = quiet_analyzer()
    result = analyzer.run("analyze", path=str(CORPUS / "lines_xy.arr"))
    assert result.exit_code == 0, result.error
    report = result.content
    assert report["d0"]["degrees"] == [0, 1]
    assert report["freeness"]["exponents"] == [1, 0, 1]
    assert report["addition"]["k"] == 2
    assert report["addition"]["cokernel"]["numerator"] == "t - t^2"
    assert report["addition"]["union_freeness"]["exponents"] == [1, 1, 1]
    assert report["status"] == {"passed": True, "failed": []}
    assert "timings" not in report
    print("[PASS] Two lines plus z")

    result = analyzer.run("analyze", path=str(CORPUS / "conic.arr"))
    assert result.exit_code == 0
    assert result.content["freeness"]["is_free"] is False
    assert result.content["d0"]["generator_count"] == 3
    assert "addition" not in result.content
    print("[PASS] The conic is not free and has no addition section")

    timed = quiet_analyzer(include_timings=True).run("analyze", path=str(CORPUS / "line_x.arr"))
    assert "d0" in timed.content["timings"]
    print("[PASS] Timings only on request")
    print()


def test_add_command():
    print("=== Testing add ===")
    analyzer = quiet_analyzer()
    path = str(CORPUS / "lines_xy.arr")
    result = analyzer.run("add", path=path, curve="x + y + z")
    assert result.exit_code == 0, result.error
    addition = result.content["addition"]
    assert addition["curve"] == "x + y + z"
    assert addition["prediction"]["exponents"] == [1, 1, 1]
    assert result.content["identities"]["prediction_agrees"]["holds"]
    print("[PASS] Adding a general line")

    result = analyzer.run("add", path=path, curve="x +")
    assert result.exit_code == 2
    result = analyzer.run("add", path=path, curve="x^2 + z^2")
    assert result.exit_code == 3
    assert result.content["error"]["hypothesis"] == "smooth_curve"
    assert result.content["status"]["passed"] is False
    print("[PASS] Syntax errors exit 2, singular curves exit 3")
    print()


def test_broken_inputs_exit_codes():
    print("=== Testing Broken Inputs ===")
    analyzer = quiet_analyzer()
    with tempfile.TemporaryDirectory() as directory:
        cases = [
            ("syntax.arr", "curve x*(y +\n", 2),
            ("directive.arr", "curve x\nfrobnicate\n", 2),
            ("inhomogeneous.arr", "curve x + 1\n", 3),
            ("nonreduced.arr", "curve x^2*y\n", 3),
            ("overlap.arr", "curve x\ncurve x*y\n", 3),
        ]
        for name, text, code in cases:
            result = analyzer.run("analyze", path=write(directory, name, text))
            assert result.exit_code == code, (name, result.exit_code, result.error)
            assert result.is_error
        missing = analyzer.run("analyze", path=str(Path(directory) / "missing.arr"))
        assert missing.exit_code == 2
    print("[PASS] Parse errors exit 2, hypothesis violations exit 3")

    assert analyzer.run("nope").exit_code == 1
    assert analyzer.run("analyze").exit_code == 1
    assert analyzer.run("find-curve", path=str(CORPUS / "a3.arr"), degree=0).exit_code == 1
    print("[PASS] Usage problems exit 1")
    print()


def test_find_curve_command():
    print("=== Testing find-curve ===")
    analyzer = quiet_analyzer()
    with tempfile.TemporaryDirectory() as directory:
        out = str(Path(directory) / "a3_cubic.arr")
        result = analyzer.run("find-curve", path=str(CORPUS / "a3.arr"), degree=3, out=out)
        assert result.exit_code == 0, result.error
        section = result.content["find_curve"]
        assert section["h0"] == 3
        assert section["sing_point_count"] == 7
        assert section["output"] == out
        written = parse_arrangement_text(Path(out).read_text(encoding="utf-8"))
        assert len(written.curves) == 6
        assert written.add.text == section["curve"]
        assert written.seed == result.content["seed"]
        print("[PASS] Augmented file written with the certified cubic")

        lines = analyzer.run("find-curve", path=str(CORPUS / "a3.arr"), degree=1, out=out)
        assert lines.exit_code == 3
        assert "h0 = 0" in lines.content["error"]["message"]
    print("[PASS] An empty linear system exits 3")

    for degree, message in ((0, "at least 1"), (-2, "at least 1"), ("3", "must be an integer")):
        result = analyzer.run("find-curve", path=str(CORPUS / "a3.arr"), degree=degree)
        assert result.exit_code == 1
        assert result.content["error"]["type"] == "UsageError"
        assert message in result.content["error"]["message"]
    assert main(["find-curve", str(CORPUS / "a3.arr"), "--degree", "0"]) == 1
    print("[PASS] Degrees below 1 are usage errors")
    print()


def test_report_is_deterministic():
    """Same input and seed give byte-identical JSON reports."""
    print("=== Testing Determinism ===")
    path = str(CORPUS / "lines_xy.arr")
    with tempfile.TemporaryDirectory() as directory:
        first = str(Path(directory) / "first.json")
        second = str(Path(directory) / "second.json")
        assert main(["analyze", path, "--seed", "3", "--json", first]) == 0
        assert main(["analyze", path, "--seed", "3", "--json", second]) == 0
        assert Path(first).read_bytes() == Path(second).read_bytes()
        report = json.loads(Path(first).read_text(encoding="utf-8"))
        assert report["seed"] == 3
        assert report["report_version"] == 1
    print("[PASS] Byte-identical reports")

    with tempfile.TemporaryDirectory() as directory:
        bad = write(directory, "bad.arr", "curve x +\n")
        assert main(["analyze", bad]) == 2
        assert main(["analyze", path, "--prime", "12"]) == 2
    print("[PASS] CLI exit codes for parse errors and bad primes")
    print()


def test_prime_field_report():
    print("=== Testing Prime Field Reports ===")
    result = quiet_analyzer(prime=32003).run("analyze", path=str(CORPUS / "lines_xy.arr"))
    assert result.exit_code == 0
    assert result.content["prime"] == 32003
    assert result.content["d0"]["degrees"] == [0, 1]
    print("[PASS] GF(32003) run matches the rational one")
    print()


def test_markdown_and_lookup():
    print("=== Testing Report Helpers ===")
    report = quiet_analyzer().run("analyze", path=str(CORPUS / "lines_xy.arr")).content
    assert lookup(report, "addition.cokernel.table.2") == 2
    assert lookup(report, "d0.degrees.1") == 1
    assert lookup(report, "addition.nothing") is MISSING
    assert isinstance(report["freeness"]["determinant_ratio"], Fraction)
    plain = json.loads(report_json(report))
    assert isinstance(plain["freeness"]["determinant_ratio"], (int, str))
    text = build_markdown(plain, "analyze")
    assert text.startswith("# analyze")
    assert "| HF |" in text
    assert "| d0_two_routes | pass |" in text
    with tempfile.TemporaryDirectory() as directory:
        message = quiet_analyzer().export_markdown(report, str(Path(directory) / "report"))
        assert message.endswith("report.md")
        assert (Path(directory) / "report.md").exists()
    print("[PASS] Dotted lookup and markdown export")
    print()


def test_corpus_command():
    """Small goldens pass; a wrong expectation fails with exit 4."""
    print("=== Testing corpus ===")
    with tempfile.TemporaryDirectory() as directory:
        for name in ("lines_xy", "line_x", "conic"):
            golden = json.loads((CORPUS / "golden" / f"{name}.json").read_text(encoding="utf-8"))
            golden["arrangement"] = str(CORPUS / f"{name}.arr")
            write(directory, f"{name}.json", json.dumps(golden))
        result = quiet_analyzer().run("corpus", golden_dir=directory)
        assert result.exit_code == 0, result.content["status"]
        assert result.content["goldens"] == ["conic", "line_x", "lines_xy"]
        assert all(row["ok"] for row in result.content["rows"])
        print("[PASS] Small goldens match")

        wrong = {"arrangement": str(CORPUS / "line_x.arr"), "expected": {"d0.degrees": [1, 1]}}
        write(directory, "wrong.json", json.dumps(wrong))
        result = quiet_analyzer().run("corpus", golden_dir=directory)
        assert result.exit_code == 4
        assert result.content["status"]["failed"] == ["wrong:d0.degrees"]
        print("[PASS] A mismatch fails the corpus")

        exploding = {"arrangement": str(CORPUS / "lines_xy.arr"), "curve_degree": 1, "expected": {}}
        write(directory, "exploding.json", json.dumps(exploding))
        analyzer = quiet_analyzer()

        def explode(*args, **kwargs):
            raise RuntimeError("member search crashed")

        analyzer.find_member = explode
        result = analyzer.run("corpus", golden_dir=directory)
        assert not result.is_error
        assert result.exit_code == 1
        assert sorted(result.content["status"]["failed"]) == ["exploding:error", "wrong:d0.degrees"]
        error_row = next(row for row in result.content["rows"] if row["golden"] == "exploding")
        assert error_row["actual"] == "RuntimeError: member search crashed"
        assert all(row["ok"] for row in result.content["rows"] if row["golden"] in ("conic", "line_x", "lines_xy"))
        print("[PASS] An unexpected error stays in its own row and exits 1")
        Path(directory, "exploding.json").unlink()

        write(directory, "broken.json", "{not json")
        result = quiet_analyzer().run("corpus", golden_dir=directory)
        assert result.exit_code == 2
        assert "broken:error" in result.content["status"]["failed"]
        assert any(row["golden"] == "lines_xy" and row["ok"] for row in result.content["rows"])
    with tempfile.TemporaryDirectory() as empty:
        assert quiet_analyzer().run("corpus", golden_dir=empty).exit_code == 2
    print("[PASS] Broken and empty golden directories exit 2")
    print()


def run_all_tests():
    """Run all CLI tests."""
    print("Running CLI Tests")
    print("=" * 50)
    print()

    try:
        test_arrangement_file_parsing()
        test_arrangement_file_errors()
        test_render_arrangement()
        test_exit_code_mapping()
        test_config_from_env()
        test_analyze_small_files()
        test_add_command()
        test_broken_inputs_exit_codes()
        test_find_curve_command()
        test_report_is_deterministic()
        test_prime_field_report()
        test_markdown_and_lookup()
        test_corpus_command()
        print("=" * 50)
        print("[SUCCESS] All CLI tests passed!")
        return True
    except AssertionError as e:
        print(f"\n[FAIL] Test failed: {e}")
        return False
    except Exception as e:
        print(f"\n[ERROR] Unexpected error: {e}")
        import traceback

        traceback.print_exc()
        return False


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
