"""Analyzer utility modules."""

from .arrangement_file import ArrangementFile, load_arrangement_file, parse_arrangement_text
from .command_util import CommandCall, execute_commands, exit_code_for
from .report_util import lookup, render_report, report_json

__all__ = [
    "ArrangementFile",
    "load_arrangement_file",
    "parse_arrangement_text",
    "CommandCall",
    "execute_commands",
    "exit_code_for",
    "lookup",
    "render_report",
    "report_json",
]
