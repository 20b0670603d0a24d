"""Command that finds a smooth curve through the singular points of an arrangement."""

from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Optional

from commands.base import Command
from utils.arrangement_file import write_arrangement_file

if TYPE_CHECKING:
    from analyzer import Analyzer


def default_output_path(path: str | Path, degree: int) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_plus_deg{degree}.arr")


class FindCurveCommand(Command):
    def __init__(self, analyzer: Optional["Analyzer"] = None):
        super().__init__(
            name="find-curve",
            description="""Find a smooth curve of a given degree through Sing(A).

            Computes the space of degree-d forms vanishing at every singular
            point, draws seeded random members until one is smooth, shares no
            component with A and keeps every singularity of the union
            quasihomogeneous, then writes the augmented arrangement file.""",
            input_schema={
                "type": "object",
                "properties": {
                    "path": {"type": "string", "description": "Arrangement file"},
                    "degree": {"type": "integer", "description": "Degree of the curve", "minimum": 1},
                    "out": {"type": "string", "description": "Augmented file to write"},
                },
                "required": ["path", "degree"],
            },
            analyzer=analyzer,
        )

    async def execute(self, path: str, degree: int, out: Optional[str] = None) -> Dict[str, Any]:
        loaded = self.analyzer.load(path)
        section, member, profile = self.analyzer.find_member(loaded, degree)
        target = Path(out) if out else default_output_path(path, degree)
        text = self.analyzer.augmented_file_text(loaded, member.curve, degree)
        self.analyzer.step("write", write_arrangement_file, target, text)
        section["output"] = str(target)
        return self.analyzer.build_report(self.name, loaded, extra={"find_curve": section}, profile=profile)
