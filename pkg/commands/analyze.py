"""Command that analyzes an arrangement file."""

from typing import TYPE_CHECKING, Any, Dict, Optional

from commands.base import Command

if TYPE_CHECKING:
    from analyzer import Analyzer


class AnalyzeCommand(Command):
    """Singularities, D0, freeness and, when the file adds a curve, the addition pipeline."""

    def __init__(self, analyzer: Optional["Analyzer"] = None):
        super().__init__(
            name="analyze",
            description="""Analyze the arrangement in an .arr file.

            Reports the singularity profile (total Milnor and Tjurina numbers,
            number of singular points), the minimal generators of D0 with a
            freeness certificate, and every checked identity. An `add` line in
            the file runs the addition pipeline for that curve as well.""",
            input_schema={
                "type": "object",
                "properties": {
                    "path": {"type": "string", "description": "Arrangement file"},
                },
                "required": ["path"],
            },
            analyzer=analyzer,
        )

    async def execute(self, path: str) -> Dict[str, Any]:
        loaded = self.analyzer.load(path)
        curve = loaded.file.added_curve(loaded.prime)
        return self.analyzer.build_report(self.name, loaded, curve=curve)
