"""Exact polynomial arithmetic, monomial orders and the polynomial text parser.

Polynomials are sympy sparse ring elements (``PolyElement``): a dict from
exponent tuples to coefficients of the ring's domain, ``QQ`` in exact mode or
``GF(p)`` in the advisory prime-field mode. Every value handed out by this
module is treated as immutable.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Sequence

from sympy import GF, QQ, Matrix, Rational
from sympy.polys.domains.domain import Domain
from sympy.polys.orderings import MonomialOrder as SympyOrder
from sympy.polys.orderings import ProductOrder, grevlex, lex
from sympy.polys.polyerrors import CoercionFailed, NotInvertible
from sympy.polys.rings import PolyElement, PolyRing

from algebra.errors import (
    PolynomialSyntaxError,
    SingularChangeError,
    UnknownVariableError,
)

Polynomial = PolyElement
Monomial = tuple[int, ...]
Scalar = Any  # an element of QQ or GF(p)
RationalMatrix = Sequence[Sequence[Any]]

DEFAULT_VARIABLES = ("x", "y", "z")
DEFAULT_PRIME = 32003
MINUS_INFINITY = float("-inf")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on polynomials, or on free-module terms.

    ``kind`` is one of ``grevlex``, ``lex``, ``elimination`` (``blocks`` gives
    the block sizes, each block ordered by grevlex, earlier blocks dominate)
    or ``position_over_term`` (module order: the lower basis index wins, ties
    broken by ``base``; basis degrees come from the submodule).
    """

    kind: str = "grevlex"
    blocks: tuple[int, ...] = ()
    base: Optional["MonomialOrder"] = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elimination", "position_over_term"):
            raise ValueError(f"unknown monomial order kind: {self.kind}")
        if self.kind == "elimination" and not self.blocks:
            raise ValueError("elimination order needs block sizes")
        if self.kind == "position_over_term" and self.base is None:
            object.__setattr__(self, "base", GREVLEX)

    @property
    def term_order(self) -> "MonomialOrder":
        """The order used on the monomials themselves."""
        return self.base if self.kind == "position_over_term" else self

    @property
    def is_graded(self) -> bool:
        return self.term_order.kind == "grevlex"

    def sympy_order(self) -> SympyOrder:
        order = self.term_order
        if order.kind == "grevlex":
            return grevlex
        if order.kind == "lex":
            return lex
        return _product_order(order.blocks)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination(*blocks: int) -> MonomialOrder:
    return MonomialOrder("elimination", blocks=tuple(blocks))


def position_over_term(base: MonomialOrder = GREVLEX) -> MonomialOrder:
    return MonomialOrder("position_over_term", base=base)


@lru_cache(maxsize=None)
def _product_order(blocks: tuple[int, ...]) -> ProductOrder:
    # cached so that rings built from equal block sizes compare equal
    parts = []
    start = 0
    for size in blocks:
        parts.append((grevlex, lambda m, a=start, b=start + size: m[a:b]))
        start += size
    if start:
        parts.append((grevlex, lambda m, a=start: m[a:]))
    return ProductOrder(*parts)


@dataclass(frozen=True)
class Grading:
    """Homogeneity data of a polynomial; the zero polynomial is flagged."""

    is_homogeneous: bool
    degree: float
    is_zero: bool = False


def coefficient_domain(prime: Optional[int] = None) -> Domain:
    return QQ if prime is None else GF(prime)


@lru_cache(maxsize=None)
def make_ring(
    variables: Sequence[str] = DEFAULT_VARIABLES,
    prime: Optional[int] = None,
    order: MonomialOrder = GREVLEX,
) -> PolyRing:
    """Polynomial ring in ``variables`` over QQ, or over GF(prime)."""
    return PolyRing(",".join(variables), coefficient_domain(prime), order.sympy_order())


def ring_with_order(ring: PolyRing, order: MonomialOrder) -> PolyRing:
    return ring.clone(order=order.sympy_order())


def ring_prime(ring: PolyRing) -> Optional[int]:
    characteristic = ring.domain.characteristic()
    return characteristic or None


def variable_names(ring: PolyRing) -> tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def to_scalar(domain: Domain, value: Any) -> Scalar:
    """Convert an int, Fraction, sympy Rational or domain element to ``domain``."""
    if isinstance(value, int):
        return domain.convert(value)
    if isinstance(value, str):
        value = Fraction(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not callable(value.numerator):
        numerator, denominator = int(value.numerator), int(value.denominator)
        return domain.quo(domain.convert(numerator), domain.convert(denominator))
    try:
        return domain.convert(value)
    except CoercionFailed:
        return to_scalar(domain, as_fraction(value))


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    return Fraction(value)


def scalar_fraction(domain: Domain, value: Scalar) -> Fraction:
    """A coefficient as a Fraction (symmetric residue in prime mode)."""
    return as_fraction(domain.to_sympy(value))


def total_degree(p: Polynomial) -> float:
    if not p:
        return MINUS_INFINITY
    return max(sum(m) for m in p.itermonoms())


def grading(p: Polynomial) -> Grading:
    if not p:
        return Grading(is_homogeneous=True, degree=MINUS_INFINITY, is_zero=True)
    degrees = {sum(m) for m in p.itermonoms()}
    return Grading(is_homogeneous=len(degrees) == 1, degree=max(degrees))


def is_homogeneous(p: Polynomial) -> bool:
    return grading(p).is_homogeneous


def differentiate(p: Polynomial, var: int) -> Polynomial:
    ring = p.ring
    if not 0 <= var < ring.ngens:
        raise ValueError(f"variable index {var} out of range for {ring.ngens} variables")
    return p.diff(ring.gens[var])


def gradient(p: Polynomial) -> tuple[Polynomial, ...]:
    return tuple(differentiate(p, i) for i in range(p.ring.ngens))


def euler_sum(p: Polynomial) -> Polynomial:
    """Sum of x_i * dp/dx_i; equals deg(p) * p for homogeneous p."""
    ring = p.ring
    result = ring.zero
    for gen, partial in zip(ring.gens, gradient(p)):
        result += gen * partial
    return result


def _rational_matrix(M: RationalMatrix) -> Matrix:
    rows = [[as_fraction(v) for v in row] for row in M]
    return Matrix([[Rational(v.numerator, v.denominator) for v in row] for row in rows])


def matrix_determinant(M: RationalMatrix) -> Fraction:
    return as_fraction(_rational_matrix(M).det())


def invert_matrix(M: RationalMatrix) -> list[list[Fraction]]:
    matrix = _rational_matrix(M)
    if matrix.det() == 0:
        raise SingularChangeError("coordinate change matrix is singular")
    inverse = matrix.inv()
    return [[as_fraction(inverse[i, j]) for j in range(inverse.cols)] for i in range(inverse.rows)]


def apply_linear_change(p: Polynomial, M: RationalMatrix) -> Polynomial:
    """Substitute x_i -> sum_j M[i][j] x_j simultaneously."""
    ring = p.ring
    n = ring.ngens
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError(f"expected a {n}x{n} matrix")
    domain = ring.domain
    if not to_scalar(domain, matrix_determinant(M)):
        raise SingularChangeError("coordinate change matrix is singular over the coefficient field")
    forms = []
    for row in M:
        form = ring.zero
        for gen, entry in zip(ring.gens, row):
            coeff = to_scalar(domain, entry)
            if coeff:
                form += gen * coeff
        forms.append(form)
    return p.compose(list(zip(ring.gens, forms)))


def drop_variable_ring(ring: PolyRing, var: int) -> PolyRing:
    symbols = ring.symbols[:var] + ring.symbols[var + 1:]
    return ring.clone(symbols=symbols)


def dehomogenize(p: Polynomial, var: int = 2, target: Optional[PolyRing] = None) -> Polynomial:
    """Set variable ``var`` to 1."""
    target = target or drop_variable_ring(p.ring, var)
    terms: dict[Monomial, Scalar] = {}
    zero = target.domain.zero
    for monom, coeff in p.iterterms():
        key = monom[:var] + monom[var + 1:]
        terms[key] = terms.get(key, zero) + coeff
    return target.from_dict({m: c for m, c in terms.items() if c})


def homogenize(q: Polynomial, target: PolyRing, var: int = 2) -> Polynomial:
    """Insert powers of variable ``var`` of ``target`` to make q homogeneous."""
    if not q:
        return target.zero
    degree = int(total_degree(q))
    terms = {}
    for monom, coeff in q.iterterms():
        terms[monom[:var] + (degree - sum(monom),) + monom[var:]] = coeff
    return target.from_dict(terms)


# Parser ---------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<space>\s+|#[^\n]*)"
    r"|(?P<number>\d+(?:\s*/\s*\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<power>\*\*|\^)"
    r"|(?P<op>[-+*()])"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


class PolynomialParser:
    """Recursive-descent parser for the polynomial grammar.

    expr   := sign? term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := ('+'|'-') factor | base (('^'|'**') nat)?
    base   := rational | variable | '(' expr ')'
    """

    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.names = dict(zip(variable_names(ring), ring.gens))
        self.tokens = self._tokenize(text)
        self.index = 0

    def _tokenize(self, text: str) -> list[_Token]:
        tokens = []
        offset = 0
        while offset < len(text):
            match = _TOKEN.match(text, offset)
            if match is None:
                raise PolynomialSyntaxError(f"unexpected character {text[offset]!r}", text, offset)
            kind = match.lastgroup
            if kind != "space":
                tokens.append(_Token(kind, match.group(), offset))
            offset = match.end()
        tokens.append(_Token("end", "", len(text)))
        return tokens

    def _peek(self) -> _Token:
        return self.tokens[self.index]

    def _take(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, token: _Token) -> PolynomialSyntaxError:
        found = token.text or "end of input"
        return PolynomialSyntaxError(f"{message}, found {found!r}", self.text, token.offset)

    def parse(self) -> Polynomial:
        if self._peek().kind == "end":
            raise self._error("empty polynomial", self._peek())
        result = self._expr()
        if self._peek().kind != "end":
            raise self._error("expected operator", self._peek())
        return result

    def _expr(self) -> Polynomial:
        result = self._term()
        while self._peek().text in ("+", "-"):
            sign = self._take().text
            value = self._term()
            result = result + value if sign == "+" else result - value
        return result

    def _term(self) -> Polynomial:
        result = self._factor()
        while self._peek().text == "*":
            self._take()
            result = result * self._factor()
        return result

    def _factor(self) -> Polynomial:
        token = self._peek()
        if token.text in ("+", "-"):
            self._take()
            value = self._factor()
            return -value if token.text == "-" else value
        base = self._base()
        if self._peek().kind == "power":
            self._take()
            exponent = self._take()
            if exponent.kind != "number" or "/" in exponent.text:
                raise self._error("expected a natural exponent", exponent)
            return base ** int(exponent.text)
        return base

    def _base(self) -> Polynomial:
        token = self._take()
        if token.kind == "number":
            numerator, _, denominator = token.text.partition("/")
            denominator = int(denominator or 1)
            if denominator == 0:
                raise PolynomialSyntaxError("division by zero in literal", self.text, token.offset)
            value = Fraction(int(numerator), denominator)
            try:
                scalar = to_scalar(self.ring.domain, value)
            except (ZeroDivisionError, NotInvertible):
                raise PolynomialSyntaxError(
                    "literal denominator vanishes in the coefficient field", self.text, token.offset
                ) from None
            return self.ring.ground_new(scalar)
        if token.kind == "name":
            if token.text not in self.names:
                raise UnknownVariableError(
                    f"unknown variable {token.text!r} (ring variables: {', '.join(self.names)})",
                    self.text,
                    token.offset,
                )
            return self.names[token.text]
        if token.text == "(":
            value = self._expr()
            closing = self._take()
            if closing.text != ")":
                raise self._error("expected ')'", closing)
            return value
        raise self._error("expected a number, variable or '('", token)


def parse_polynomial(text: str, ring: Optional[PolyRing] = None) -> Polynomial:
    """Parse polynomial text into its canonical expanded form in ``ring``."""
    return PolynomialParser(text, ring or make_ring()).parse()


def _format_monomial(names: Sequence[str], monom: Monomial) -> str:
    factors = []
    for name, exponent in zip(names, monom):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return "*".join(factors)


def format_polynomial(p: Polynomial) -> str:
    """Render p in the parser's grammar, leading terms first."""
    if not p:
        return "0"
    ring = p.ring
    names = variable_names(ring)
    pieces = []
    for monom, coeff in p.terms():
        value = scalar_fraction(ring.domain, coeff)
        sign = "-" if value < 0 else "+"
        value = abs(value)
        literal = str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
        monomial = _format_monomial(names, monom)
        if not monomial:
            body = literal
        elif value == 1:
            body = monomial
        else:
            body = f"{literal}*{monomial}"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
