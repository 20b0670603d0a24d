"""Report trees: JSON, markdown and console rendering."""

import json
from fractions import Fraction
from typing import Any, Mapping

from rich.console import Console
from rich.table import Table
from rich.tree import Tree

MISSING = object()


def to_jsonable(value: Any) -> Any:
    """Plain JSON data for report values (fractions and sympy numbers become strings)."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    return str(value)


def report_json(report: Mapping[str, Any]) -> str:
    return json.dumps(to_jsonable(report), indent=2, ensure_ascii=False) + "\n"


def lookup(report: Mapping[str, Any], dotted: str, default: Any = MISSING) -> Any:
    """Value at a dotted key path; list items are addressed by index."""
    node: Any = report
    for part in dotted.split("."):
        if isinstance(node, Mapping) and part in node:
            node = node[part]
        elif isinstance(node, list) and part.lstrip("-").isdigit() and -len(node) <= int(part) < len(node):
            node = node[int(part)]
        else:
            return default
    return node


def failed_identities(report: Mapping[str, Any]) -> list[str]:
    identities = report.get("identities", {})
    return [name for name, check in identities.items() if not check.get("holds", False)]


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value):
        return "{" + ", ".join(str(v) for v in value) + "}" if value else "{}"
    return str(value)


def _identity_rows(report: Mapping[str, Any]) -> list[tuple[str, str, str, str]]:
    rows = []
    for name, check in report.get("identities", {}).items():
        mark = "pass" if check.get("holds") else "FAIL"
        rows.append((name, mark, _scalar(check.get("left")), _scalar(check.get("right"))))
    return rows


def _cokernel_table(report: Mapping[str, Any]) -> dict[str, Any]:
    return report.get("addition", {}).get("cokernel", {}).get("table", {})


def build_markdown(report: Mapping[str, Any], title: str) -> str:
    lines = [f"# {title}", ""]
    for key, value in report.items():
        if key in ("identities", "timings") or isinstance(value, Mapping):
            continue
        lines.append(f"**{key}**: {_scalar(value)}  ")
    for key, value in report.items():
        if key in ("identities", "timings") or not isinstance(value, Mapping):
            continue
        lines.extend(["", f"## {key.replace('_', ' ').capitalize()}", ""])
        for inner, item in value.items():
            if isinstance(item, Mapping):
                lines.append(f"- **{inner}**:")
                lines.extend(f"  - {k}: {_scalar(v)}" for k, v in item.items() if not isinstance(v, Mapping))
            else:
                lines.append(f"- **{inner}**: {_scalar(item)}")
    table = _cokernel_table(report)
    if table:
        lines.extend(["", "## Cokernel Hilbert function", "", "| t | " + " | ".join(table) + " |"])
        lines.append("|---" * (len(table) + 1) + "|")
        lines.append("| HF | " + " | ".join(str(v) for v in table.values()) + " |")
    rows = _identity_rows(report)
    if rows:
        lines.extend(["", "## Identities", "", "| identity | status | left | right |", "|---|---|---|---|"])
        lines.extend(f"| {name} | {mark} | {left} | {right} |" for name, mark, left, right in rows)
    if "timings" in report:
        lines.extend(["", "## Timings", "", "```json", json.dumps(report["timings"], indent=2), "```"])
    return "\n".join(lines) + "\n"


def _add_branch(tree: Tree, key: str, value: Any) -> None:
    if isinstance(value, Mapping):
        branch = tree.add(f"[bold]{key}[/bold]")
        for inner, item in value.items():
            _add_branch(branch, str(inner), item)
    else:
        tree.add(f"{key}: [cyan]{_scalar(value)}[/cyan]")


def render_report(report: Mapping[str, Any], console: Console, title: str = "Arrangement report") -> None:
    tree = Tree(f"[bold]{title}[/bold]")
    for key, value in report.items():
        if key in ("identities", "timings"):
            continue
        if key == "addition" and isinstance(value, Mapping):
            value = {k: v for k, v in value.items() if k != "cokernel"} | {
                "cokernel": {k: v for k, v in value.get("cokernel", {}).items() if k != "table"}
            }
        _add_branch(tree, key, value)
    console.print(tree)

    table_values = _cokernel_table(report)
    if table_values:
        hilbert = Table(title="Cokernel Hilbert function")
        hilbert.add_column("t", style="bold")
        for t in table_values:
            hilbert.add_column(str(t), justify="right")
        hilbert.add_row("HF", *(str(v) for v in table_values.values()))
        console.print(hilbert)

    rows = _identity_rows(report)
    if rows:
        identities = Table(title="Identities")
        for column in ("identity", "status", "left", "right"):
            identities.add_column(column)
        for name, mark, left, right in rows:
            style = "green" if mark == "pass" else "bold red"
            identities.add_row(name, f"[{style}]{mark}[/{style}]", left, right)
        console.print(identities)

    if "timings" in report:
        timings = Table(title="Step timings (ms)")
        for column in ("step", "calls", "failed", "avg", "max"):
            timings.add_column(column)
        for step, data in report["timings"].items():
            timings.add_row(
                step,
                str(data["total_calls"]),
                str(data["failed_calls"]),
                data["avg_duration_ms"],
                data["max_duration_ms"],
            )
        console.print(timings)


def render_corpus(report: Mapping[str, Any], console: Console) -> None:
    table = Table(title="Corpus comparison")
    for column in ("golden", "key", "expected", "actual", "status"):
        table.add_column(column)
    for row in report.get("rows", []):
        style = "green" if row["ok"] else "bold red"
        table.add_row(
            row["golden"],
            row["key"],
            _scalar(row["expected"]),
            _scalar(row["actual"]),
            f"[{style}]{'match' if row['ok'] else 'DIFF'}[/{style}]",
        )
    console.print(table)
