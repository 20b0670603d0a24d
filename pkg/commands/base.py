"""Base command definitions for the analyzer."""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Optional

if TYPE_CHECKING:
    from analyzer import Analyzer


@dataclass
class CommandResult:
    """Outcome of one command: the report tree or the error that replaced it."""

    command: str
    content: dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    is_error: bool = False
    exit_code: int = 0
    duration_ms: Optional[float] = None


@dataclass
class Command:
    """Base class for all analyzer commands."""

    name: str
    description: str
    input_schema: dict[str, Any]
    analyzer: Optional["Analyzer"] = field(default=None, repr=False, compare=False)

    def argument_problems(self, arguments: dict[str, Any]) -> list[str]:
        """Missing required, unknown and out-of-range arguments, as messages."""
        properties = self.input_schema.get("properties", {})
        problems = [
            f"missing argument '{name}'"
            for name in self.input_schema.get("required", [])
            if arguments.get(name) is None
        ]
        for name, value in arguments.items():
            schema = properties.get(name)
            if schema is None:
                problems.append(f"unknown argument '{name}'")
            elif value is None:
                continue
            elif schema.get("type") == "integer" and (isinstance(value, bool) or not isinstance(value, int)):
                problems.append(f"argument '{name}' must be an integer")
            elif "minimum" in schema and value < schema["minimum"]:
                problems.append(f"argument '{name}' must be at least {schema['minimum']}")
        return problems

    async def execute(self, **kwargs) -> dict[str, Any]:
        """Run the command and return its report tree."""
        raise NotImplementedError("Command subclasses must implement execute method")
