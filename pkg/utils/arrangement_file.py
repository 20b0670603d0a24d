"""Reader and writer for line-oriented arrangement files.

    # comments run to the end of the line
    vars x y z
    curve x*y*z
    curve x - y
    add x + y + z
    seed 7
    option prime 32003
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from sympy import isprime

from algebra.errors import ArrangementFileError, PolynomialSyntaxError
from algebra.polycore import (
    DEFAULT_VARIABLES,
    Polynomial,
    format_polynomial,
    make_ring,
    parse_polynomial,
)

OPTIONS = ("prime", "pair_limit")
_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


@dataclass
class Equation:
    """Polynomial text together with where it was read."""

    text: str
    line: int
    column: int


@dataclass
class ArrangementFile:
    variables: tuple[str, ...] = DEFAULT_VARIABLES
    curves: list[Equation] = field(default_factory=list)
    add: Optional[Equation] = None
    seed: Optional[int] = None
    options: dict[str, int] = field(default_factory=dict)
    source: str = "<string>"

    @property
    def prime(self) -> Optional[int]:
        return self.options.get("prime")

    def ring(self, prime: Optional[int] = None):
        return make_ring(self.variables, prime if prime is not None else self.prime)

    def _parse(self, equation: Equation, ring) -> Polynomial:
        try:
            return parse_polynomial(equation.text, ring)
        except PolynomialSyntaxError as e:
            reason = str(e).split(": ", 1)[-1]
            raise ArrangementFileError(reason, equation.line, equation.column + e.column - 1) from e

    def components(self, prime: Optional[int] = None) -> list[Polynomial]:
        ring = self.ring(prime)
        return [self._parse(equation, ring) for equation in self.curves]

    def added_curve(self, prime: Optional[int] = None) -> Optional[Polynomial]:
        if self.add is None:
            return None
        return self._parse(self.add, self.ring(prime))


def _integer(word: str, line: int, column: int, what: str) -> int:
    try:
        return int(word)
    except ValueError:
        raise ArrangementFileError(f"{what} must be an integer, got '{word}'", line, column) from None


def _strip_comment(raw: str) -> str:
    index = raw.find("#")
    return raw if index < 0 else raw[:index]


def parse_arrangement_text(text: str, source: str = "<string>") -> ArrangementFile:
    result = ArrangementFile(source=source)
    seen_vars = False
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        body = line.lstrip()
        if not body:
            continue
        indent = len(line) - len(body)
        parts = body.split(None, 1)
        keyword = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        rest_column = len(line) - len(rest) + 1 if rest else indent + len(keyword) + 2

        if keyword == "vars":
            if seen_vars or result.curves or result.add is not None:
                raise ArrangementFileError("'vars' must come first and only once", number, indent + 1)
            names = tuple(rest.split())
            if len(names) != 3:
                raise ArrangementFileError(
                    f"plane curves need exactly 3 variables, got {len(names)}", number, rest_column
                )
            for name in names:
                if not name[0].isalpha() or not set(name) <= _NAME_CHARS:
                    raise ArrangementFileError(f"invalid variable name '{name}'", number, rest_column)
            if len(set(names)) != 3:
                raise ArrangementFileError("variable names must be distinct", number, rest_column)
            result.variables = names
            seen_vars = True
        elif keyword in ("curve", "add"):
            if not rest:
                raise ArrangementFileError(f"'{keyword}' needs an equation", number, indent + len(keyword) + 1)
            equation = Equation(rest, number, rest_column)
            if keyword == "curve":
                result.curves.append(equation)
            elif result.add is not None:
                raise ArrangementFileError("only one 'add' line is allowed", number, indent + 1)
            else:
                result.add = equation
        elif keyword == "seed":
            result.seed = _integer(rest, number, rest_column, "seed")
        elif keyword == "option":
            words = rest.split()
            if len(words) != 2 or words[0] not in OPTIONS:
                raise ArrangementFileError(
                    f"expected 'option <{'|'.join(OPTIONS)}> <int>'", number, rest_column
                )
            value = _integer(words[1], number, rest_column, words[0])
            if value < 2:
                raise ArrangementFileError(f"{words[0]} must be at least 2", number, rest_column)
            if words[0] == "prime" and not isprime(value):
                raise ArrangementFileError(f"{value} is not a prime", number, rest_column)
            result.options[words[0]] = value
        else:
            raise ArrangementFileError(f"unknown directive '{keyword}'", number, indent + 1)

    if not result.curves:
        raise ArrangementFileError("the file declares no curve", max(1, text.count("\n") + 1))
    return result


def load_arrangement_file(path: str | Path) -> ArrangementFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ArrangementFileError(f"file '{path}' not found", 1) from None
    except UnicodeDecodeError:
        raise ArrangementFileError(f"file '{path}' is not UTF-8 text", 1) from None
    return parse_arrangement_text(text, str(path))


def render_arrangement(
    variables: Sequence[str],
    components: Sequence[Polynomial],
    add: Optional[Polynomial] = None,
    seed: Optional[int] = None,
    options: Optional[dict[str, int]] = None,
    header: Optional[str] = None,
) -> str:
    lines = []
    if header:
        lines.extend(f"# {row}" for row in header.splitlines())
    lines.append("vars " + " ".join(variables))
    lines.extend(f"curve {format_polynomial(c)}" for c in components)
    if add is not None:
        lines.append(f"add {format_polynomial(add)}")
    if seed is not None:
        lines.append(f"seed {seed}")
    for name, value in (options or {}).items():
        lines.append(f"option {name} {value}")
    return "\n".join(lines) + "\n"


def write_arrangement_file(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
