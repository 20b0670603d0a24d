"""Command that replays the bundled corpus against its golden reports."""

import json
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional

from algebra.errors import ArrangementError, ArrangementFileError
from commands.base import Command
from utils.report_util import MISSING, lookup, report_json, to_jsonable

if TYPE_CHECKING:
    from analyzer import Analyzer

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "corpus" / "golden"


def load_golden(path: Path) -> Dict[str, Any]:
    """A golden names an arrangement file, an optional curve degree and the expected values."""
    try:
        golden = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ArrangementFileError(f"{path.name}: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(golden, dict) or "arrangement" not in golden or not isinstance(golden.get("expected"), dict):
        raise ArrangementFileError(f"{path.name}: needs 'arrangement' and an 'expected' object", 1)
    return golden


class CorpusCommand(Command):
    def __init__(self, analyzer: Optional["Analyzer"] = None):
        super().__init__(
            name="corpus",
            description="""Run every bundled example and diff it against its golden report.

            Each golden file names an arrangement, optionally a curve degree to
            find and add, and a map of dotted report keys to expected values.""",
            input_schema={
                "type": "object",
                "properties": {
                    "golden_dir": {"type": "string", "description": "Directory of golden *.json files"},
                },
                "required": [],
            },
            analyzer=analyzer,
        )

    def _report_for(self, golden: Dict[str, Any], arrangement_path: Path) -> Dict[str, Any]:
        # Import here to avoid circular dependency
        from utils.command_util import error_payload

        analyzer = self.analyzer
        try:
            loaded = analyzer.load(arrangement_path, prime=golden.get("prime"), seed=golden.get("seed"))
            degree = golden.get("curve_degree")
            if degree:
                section, member, profile = analyzer.find_member(loaded, degree)
                report = analyzer.build_report(
                    self.name, loaded, curve=member.curve, extra={"find_curve": section}, profile=profile
                )
            else:
                report = analyzer.build_report(self.name, loaded, curve=loaded.file.added_curve(loaded.prime))
        except ArrangementError as e:
            report = error_payload(self.name, e)
        return json.loads(report_json(report))

    def _compare(self, name: str, golden: Dict[str, Any], report: Dict[str, Any]) -> List[Dict[str, Any]]:
        rows = []
        expected = {"status.passed": True} | golden["expected"]
        for key, value in expected.items():
            actual = lookup(report, key)
            rows.append(
                {
                    "golden": name,
                    "key": key,
                    "expected": to_jsonable(value),
                    "actual": None if actual is MISSING else actual,
                    "ok": actual is not MISSING and actual == to_jsonable(value),
                }
            )
        return rows

    async def execute(self, golden_dir: Optional[str] = None) -> Dict[str, Any]:
        # Import here to avoid circular dependency
        from utils.command_util import EXIT_INCONSISTENT, exit_code_for

        directory = Path(golden_dir) if golden_dir else GOLDEN_DIR
        paths = sorted(directory.glob("*.json"))
        if not paths:
            raise ArrangementFileError(f"no golden reports in {directory}", 1)

        rows: List[Dict[str, Any]] = []
        error_codes: List[int] = []
        for path in paths:
            # errors stay local to their golden
            try:
                golden = load_golden(path)
                report = self._report_for(golden, path.parent / golden["arrangement"])
                rows.extend(self._compare(path.stem, golden, report))
            except Exception as e:
                error_codes.append(exit_code_for(e))
                message = f"{type(e).__name__}: {e}"
                rows.append({"golden": path.stem, "key": "error", "expected": None, "actual": message, "ok": False})
                if self.analyzer.verbose:
                    print(f"[{self.analyzer.name}] corpus {path.stem}: {message}")

        failed = [f"{row['golden']}:{row['key']}" for row in rows if not row["ok"]]
        status: Dict[str, Any] = {"passed": not failed, "failed": failed}
        if failed:
            # unexpected errors (1) outrank unreadable goldens (2), which outrank mismatches (4)
            status["exit_code"] = min(error_codes + [EXIT_INCONSISTENT])
        result: Dict[str, Any] = {
            "command": self.name,
            "directory": str(directory),
            "goldens": [path.stem for path in paths],
            "rows": rows,
            "status": status,
        }
        if self.analyzer.config.include_timings:
            result["timings"] = self.analyzer.get_step_metrics()
        return result
