"""Command that adds a curve to an arrangement."""

from typing import TYPE_CHECKING, Any, Dict, Optional

from commands.base import Command

if TYPE_CHECKING:
    from analyzer import Analyzer


class AddCurveCommand(Command):
    def __init__(self, analyzer: Optional["Analyzer"] = None):
        super().__init__(
            name="add",
            description="""Add a smooth curve C to the arrangement A of a file.

            Computes D0(A + C) directly and, when A is free, predicts it from
            D0(A) and the Hilbert series of the cokernel; the report carries
            both and an agreement flag. The curve given here replaces any
            `add` line of the file.""",
            input_schema={
                "type": "object",
                "properties": {
                    "path": {"type": "string", "description": "Arrangement file"},
                    "curve": {"type": "string", "description": "Equation of the added curve"},
                },
                "required": ["path", "curve"],
            },
            analyzer=analyzer,
        )

    async def execute(self, path: str, curve: str) -> Dict[str, Any]:
        loaded = self.analyzer.load(path)
        added = self.analyzer.parse_curve(loaded, curve)
        return self.analyzer.build_report(self.name, loaded, curve=added)
