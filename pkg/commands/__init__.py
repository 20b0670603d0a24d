"""Commands exposed by the arrangement analyzer."""

from typing import TYPE_CHECKING

from .add_curve import AddCurveCommand
from .analyze import AnalyzeCommand
from .base import Command, CommandResult
from .corpus import CorpusCommand
from .find_curve import FindCurveCommand

if TYPE_CHECKING:
    from analyzer import Analyzer


def default_commands(analyzer: "Analyzer") -> list[Command]:
    return [
        AnalyzeCommand(analyzer),
        FindCurveCommand(analyzer),
        AddCurveCommand(analyzer),
        CorpusCommand(analyzer),
    ]


__all__ = [
    "Command",
    "CommandResult",
    "AnalyzeCommand",
    "FindCurveCommand",
    "AddCurveCommand",
    "CorpusCommand",
    "default_commands",
]
