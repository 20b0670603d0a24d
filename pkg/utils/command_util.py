"""Command execution with error-to-exit-code mapping."""

import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Optional

from algebra.errors import (
    ArrangementError,
    ArrangementFileError,
    HypothesisViolation,
    InconsistencyError,
    MalformedNumeratorError,
    NotHomogeneousError,
    PolynomialSyntaxError,
)
from commands.base import Command, CommandResult

if TYPE_CHECKING:
    from analyzer import Analyzer

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_INCONSISTENT = 4


@dataclass
class CommandCall:
    name: str
    input: dict[str, Any] = field(default_factory=dict)


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, (ArrangementFileError, PolynomialSyntaxError)):
        return EXIT_PARSE
    if isinstance(error, (HypothesisViolation, NotHomogeneousError)):
        return EXIT_HYPOTHESIS
    if isinstance(error, (InconsistencyError, MalformedNumeratorError)):
        return EXIT_INCONSISTENT
    return EXIT_UNEXPECTED


def error_payload(command: str, error: BaseException) -> dict[str, Any]:
    details: dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    for attribute in ("hypothesis", "line", "column", "failed", "last_reason"):
        value = getattr(error, attribute, None)
        if value is not None:
            details[attribute] = value
    failed = list(getattr(error, "failed", None) or [details.get("hypothesis", details["type"])])
    return {"command": command, "error": details, "status": {"passed": False, "failed": failed}}


def exit_code_for_report(report: dict[str, Any]) -> int:
    status = report.get("status", {})
    if status.get("passed", False):
        return EXIT_OK
    return status.get("exit_code", EXIT_INCONSISTENT)


async def _execute_single_command(
    call: CommandCall,
    command_dict: dict[str, Command],
    analyzer: Optional["Analyzer"] = None,
) -> CommandResult:
    """Execute one command; errors become results, never exceptions."""
    start_time = time.perf_counter()
    result = CommandResult(command=call.name)

    command = command_dict.get(call.name)
    problems = [f"Command '{call.name}' not found"] if command is None else command.argument_problems(call.input)
    if problems:
        result.error = "; ".join(problems)
        result.is_error = True
        result.exit_code = EXIT_UNEXPECTED
        result.content = {"command": call.name, "error": {"type": "UsageError", "message": result.error}}
    else:
        try:
            result.content = await command.execute(**call.input)
            result.exit_code = exit_code_for_report(result.content)
        except ArrangementError as e:
            result.error = f"{type(e).__name__}: {e}"
            result.is_error = True
            result.exit_code = exit_code_for(e)
            result.content = error_payload(call.name, e)
        except Exception as e:
            result.error = f"Command error in {call.name}: {type(e).__name__}: {e}"
            result.is_error = True
            result.exit_code = EXIT_UNEXPECTED
            result.content = error_payload(call.name, e)

    result.duration_ms = (time.perf_counter() - start_time) * 1000
    if analyzer is not None and hasattr(analyzer, "step_metrics"):
        analyzer.step_metrics[f"command.{call.name}"].record_execution(result.duration_ms, result.is_error)
    return result


async def execute_commands(
    calls: list[CommandCall],
    command_dict: dict[str, Command],
    analyzer: Optional["Analyzer"] = None,
) -> list[CommandResult]:
    """Execute commands in order.

    Args:
        calls: Command requests
        command_dict: Mapping of command names to Command instances
        analyzer: Analyzer whose step metrics record each command

    Returns:
        One CommandResult per call, in order
    """
    return [await _execute_single_command(c, command_dict, analyzer) for c in calls]
