"""Logarithmic derivation modules of plane curves and the addition pipeline.

D0(F) is the module of syzygies of the three partial derivatives of F, kept
with zero ambient shifts: a generator (a, b, c) has the degree of its
coordinates. D(F) = D0(F) + S*E with E = (x, y, z) the Euler derivation.
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence, Union

from sympy import QQ, Poly

from algebra.errors import (
    CertificationExhaustedError,
    ChartCertificationError,
    CommonComponentError,
    EmptyLinearSystemError,
    HypothesisViolation,
    InconsistencyError,
    MalformedNumeratorError,
    NotHomogeneousError,
)
from algebra.groebner import (
    DEFAULT_OPTIONS,
    EngineOptions,
    GradedIdeal,
    GradedSubmodule,
    HilbertSeries,
    QuotientModule,
    Vector,
    degree_piece_basis,
    free_module_series,
    free_resolution,
    hilbert_series,
    minimal_generators,
    pair_vector,
    projective_degree,
    syzygies,
)
from algebra.polycore import Polynomial, as_fraction, gradient, grading, scalar_fraction, to_scalar
from algebra.singcurve import (
    Arrangement,
    arrangement_union,
    genus_smooth,
    is_quasihomogeneous_everywhere,
    is_smooth,
    jacobian_ideal,
    require_reduced,
)

DEFAULT_MEMBER_RETRIES = 64
DEFAULT_COEFFICIENT_BOUND = 5


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    holds: bool
    left: Any = None
    right: Any = None


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.holds]

    def get(self, name: str) -> Optional[IdentityCheck]:
        return next((c for c in self.checks if c.name == name), None)


@dataclass(frozen=True)
class LogDerivationModule:
    source: Polynomial
    d0: GradedSubmodule

    @property
    def degrees(self) -> list[int]:
        return sorted(self.d0.generator_degrees())

    @property
    def generator_count(self) -> int:
        return len(self.d0.generators)

    @property
    def euler(self) -> Vector:
        return tuple(self.source.ring.gens)

    def der_log_degrees(self) -> list[int]:
        """Degrees after the twist D0(V(F))(1)."""
        return [d - 1 for d in self.degrees]


@dataclass(frozen=True)
class FreenessCertificate:
    is_free: bool
    d0_degrees: tuple[int, ...]
    exponents: Optional[tuple[int, ...]] = None
    determinant_ratio: Optional[Fraction] = None
    projective_dimension: Optional[int] = None


@dataclass(frozen=True)
class CokernelData:
    n: int
    k: int
    genus: int
    series: HilbertSeries
    hilbert_function: tuple[tuple[int, int], ...]
    hilbert_polynomial: Poly = field(compare=False)
    arrangement_free: bool = True

    @property
    def expected_polynomial(self) -> tuple[int, int]:
        """(slope, constant) of n*t + 3(1 - g) - n - k."""
        return self.n, 3 * (1 - self.genus) - self.n - self.k

    @property
    def lower_window(self) -> Fraction:
        return Fraction(self.n - 2) + Fraction(self.k, self.n)

    @property
    def upper_window(self) -> Fraction:
        return Fraction(2 * self.n - 4) + Fraction(self.k, self.n)

    @property
    def divisor_degree(self) -> int:
        return 3 * self.n - self.n**2 - self.k

    def value(self, t: int) -> int:
        return self.series.hilbert_function(t)

    def polynomial_value(self, t: int) -> int:
        slope, constant = self.expected_polynomial
        return slope * t + constant


@dataclass(frozen=True)
class AdditionPrediction:
    is_free: bool
    numerator: tuple[tuple[int, int], ...]
    d0_degrees: Optional[tuple[int, ...]] = None

    @property
    def exponents(self) -> Optional[tuple[int, ...]]:
        return None if self.d0_degrees is None else (1,) + self.d0_degrees

    def format_numerator(self) -> str:
        return HilbertSeries(self.numerator, 3).format_numerator()


@dataclass(frozen=True)
class RegularityData:
    reg: int
    reg_arrangement: int
    n: int
    k: int

    @property
    def bound(self) -> Fraction:
        return max(Fraction(self.reg_arrangement + self.n), Fraction(2 * self.n - 4) + Fraction(self.k, self.n))

    @property
    def holds(self) -> bool:
        return self.reg <= self.bound


@dataclass(frozen=True)
class SmoothMember:
    curve: Polynomial
    coefficients: tuple[int, ...]
    attempts: int
    seed: int


# D0 and freeness ------------------------------------------------------------


def d0_module(F: Polynomial, options: EngineOptions = DEFAULT_OPTIONS, check_reduced: bool = True) -> LogDerivationModule:
    """Minimal generators of the syzygies of (F_x, F_y, F_z)."""
    info = grading(F)
    if info.is_zero or not info.is_homogeneous:
        raise NotHomogeneousError("D0 needs a nonzero homogeneous polynomial")
    if check_reduced:
        require_reduced(F, options)
    m = int(info.degree)
    partials = gradient(F)
    relations = syzygies(list(partials), degrees=[m - 1] * len(partials), options=options)
    minimal = minimal_generators(relations, options).regraded((0,) * len(partials))
    for generator in minimal.generators:
        if pair_vector(generator, partials):
            raise InconsistencyError("a D0 generator does not annihilate the gradient", ["d0_annihilates"])
    return LogDerivationModule(F, minimal)


def _determinant(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def saito_determinant(F: Polynomial, first: Vector, second: Vector) -> tuple[Polynomial, Optional[Fraction]]:
    """det[E; first; second] and its scalar ratio to F (None when not a multiple)."""
    det = _determinant([tuple(F.ring.gens), first, second])
    if not det:
        return det, None
    lead = F.leading_expv()
    domain = F.ring.domain
    ratio = domain.quo(det.get(lead, domain.zero), F[lead])
    if not ratio or det != F * ratio:
        return det, None
    return det, scalar_fraction(domain, ratio)


def freeness(
    F: Union[Polynomial, LogDerivationModule],
    options: EngineOptions = DEFAULT_OPTIONS,
) -> FreenessCertificate:
    module = F if isinstance(F, LogDerivationModule) else d0_module(F, options)
    degrees = tuple(module.degrees)
    if module.generator_count != 2:
        resolution = free_resolution(module.d0, options)
        return FreenessCertificate(False, degrees, projective_dimension=resolution.length)
    first, second = module.d0.generators
    _, ratio = saito_determinant(module.source, first, second)
    if ratio is None:
        raise InconsistencyError("two D0 generators without a Saito determinant", ["saito_determinant"])
    m = int(grading(module.source).degree)
    if 1 + sum(degrees) != m:
        raise InconsistencyError("exponents do not add up to the degree", ["exponent_sum"])
    return FreenessCertificate(True, degrees, (1,) + degrees, ratio, 0)


def der_log_degrees(module: LogDerivationModule) -> list[int]:
    return module.der_log_degrees()


def jacobian_route_series(F: Polynomial, options: EngineOptions = DEFAULT_OPTIONS) -> HilbertSeries:
    """HS(D0) from 0 -> D0 -> S^3 -> S(m-1) -> (S/J_F)(m-1) -> 0."""
    m = int(grading(F).degree)
    quotient = hilbert_series(QuotientModule.of_ideal(jacobian_ideal(F)), options)
    nvars = F.ring.ngens
    return free_module_series([0] * nvars, nvars) - free_module_series([1 - m], nvars) + quotient.shifted(1 - m)


def d0_hilbert_polynomial_check(module: LogDerivationModule, options: EngineOptions = DEFAULT_OPTIONS) -> IdentityCheck:
    """HP(D0, t) = 3*C(t+2, 2) - C(t+m+1, 2) + deg(J_F)."""
    F = module.source
    m = int(grading(F).degree)
    jacobian_degree = projective_degree(jacobian_ideal(F), options)
    engine = hilbert_series(module.d0, options).hilbert_polynomial()
    t = engine.gen
    expected = Poly(3 * (t + 2) * (t + 1) / 2 - (t + m + 1) * (t + m) / 2 + jacobian_degree, t, domain=QQ)
    return IdentityCheck(
        "d0_hilbert_polynomial", engine == expected, str(engine.as_expr()), str(expected.as_expr())
    )


def regularity(module: GradedSubmodule, options: EngineOptions = DEFAULT_OPTIONS) -> Optional[int]:
    return free_resolution(module, options).regularity


# Addition -------------------------------------------------------------------


def require_addition_hypotheses(arrangement: Arrangement, curve: Polynomial, seed: int, options: EngineOptions) -> Arrangement:
    if not is_smooth(curve, options):
        raise HypothesisViolation("the added curve is not smooth", "smooth_curve")
    union = arrangement_union(arrangement, curve)
    if not is_quasihomogeneous_everywhere(arrangement, seed=seed, options=options):
        raise HypothesisViolation("the arrangement has a non-quasihomogeneous singularity", "quasihomogeneous")
    if not is_quasihomogeneous_everywhere(union, seed=seed, options=options):
        raise HypothesisViolation("the union has a non-quasihomogeneous singularity", "quasihomogeneous_union")
    return union


def cokernel_table_range(n: int, k: int, span: int = 8) -> range:
    upper = math.floor(Fraction(2 * n - 4) + Fraction(k, n)) + 1
    return range(0, max(span, upper + 4))


def coker_hilbert(
    arrangement_module: LogDerivationModule,
    union_module: LogDerivationModule,
    n: int,
    k: int,
    span: int = 8,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> CokernelData:
    """Hilbert data of the cokernel of D0(A)(-n) -> D0(A + C)."""
    union_series = hilbert_series(union_module.d0, options)
    arrangement_series = hilbert_series(arrangement_module.d0, options).shifted(n)
    series = union_series - arrangement_series
    table = tuple((t, series.hilbert_function(t)) for t in cokernel_table_range(n, k, span))
    return CokernelData(
        n=n,
        k=k,
        genus=genus_smooth(n),
        series=series,
        hilbert_function=table,
        hilbert_polynomial=series.hilbert_polynomial(),
        arrangement_free=arrangement_module.generator_count == 2,
    )


def coker_hilbert_for(
    arrangement: Arrangement,
    curve: Polynomial,
    k: int,
    seed: int = 1,
    span: int = 8,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> CokernelData:
    union = require_addition_hypotheses(arrangement, curve, seed, options)
    n = int(grading(curve).degree)
    return coker_hilbert(d0_module(arrangement.product, options), d0_module(union.product, options), n, k, span, options)


def _plain(value) -> Union[int, str]:
    fraction = as_fraction(value)
    return fraction.numerator if fraction.denominator == 1 else str(fraction)


def theorem_main_check(coker: CokernelData) -> IdentityReport:
    n, k, g = coker.n, coker.k, coker.genus
    slope, constant = coker.expected_polynomial
    coeffs = [_plain(c) for c in coker.hilbert_polynomial.all_coeffs()]
    engine_slope = coeffs[-2] if len(coeffs) >= 2 else 0
    engine_constant = coeffs[-1] if coeffs else 0
    window = []
    for t, value in coker.hilbert_function:
        if t < coker.lower_window and value != 0:
            window.append(t)
        if t > coker.upper_window and value != coker.polynomial_value(t):
            window.append(t)
    negative = [t for t, value in coker.hilbert_function if value < 0]
    checks = (
        IdentityCheck("hp_leading_coefficient", engine_slope == slope and len(coeffs) <= 2, engine_slope, slope),
        IdentityCheck("hp_constant_term", engine_constant == constant, engine_constant, constant),
        IdentityCheck("divisor_degree", 3 * n - n * n - k == 2 - 2 * g - k, 3 * n - n * n - k, 2 - 2 * g - k),
        IdentityCheck("hilbert_window", not window, window, []),
        IdentityCheck("hilbert_nonnegative", not negative, negative, []),
    )
    return IdentityReport(checks)


def _numerator_terms(numerator: Union[HilbertSeries, Mapping[int, int]]) -> dict[int, int]:
    if isinstance(numerator, HilbertSeries):
        return numerator.numerator
    return {e: c for e, c in dict(numerator).items() if c}


def predict_addition(
    a_degrees: Sequence[int],
    n: int,
    coker_numerator: Union[HilbertSeries, Mapping[int, int]],
) -> AdditionPrediction:
    """Two-of-three freeness: D0(A) free and the cokernel series give D0(A + C)."""
    if len(a_degrees) != 2:
        raise ValueError("a free D0 has exactly two generator degrees")
    coker = _numerator_terms(coker_numerator)
    series = HilbertSeries.from_terms(coker, 3)
    if coker:
        top = max(coker) + 3
        negative = [t for t in range(min(min(coker), 0), top + 1) if series.hilbert_function(t) < 0]
        leading = series.hilbert_polynomial().LC() if series.krull_dimension > 0 else 0
        if negative or leading < 0:
            raise MalformedNumeratorError(f"numerator {series.format_numerator()} implies a negative Hilbert function")
    total = dict(coker)
    for degree in a_degrees:
        total[degree + n] = total.get(degree + n, 0) + 1
    total = {e: c for e, c in total.items() if c}
    terms = tuple(sorted(total.items()))
    monomials = []
    for exponent, coeff in terms:
        if coeff < 0:
            monomials = None
            break
        monomials.extend([exponent] * coeff)
    if monomials is not None and len(monomials) == 2 and min(monomials) >= 0:
        return AdditionPrediction(True, terms, tuple(sorted(monomials)))
    return AdditionPrediction(False, terms)


def regularity_bound_check(
    arrangement_module: LogDerivationModule,
    union_module: LogDerivationModule,
    n: int,
    k: int,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> RegularityData:
    return RegularityData(
        reg=regularity(union_module.d0, options),
        reg_arrangement=regularity(arrangement_module.d0, options),
        n=n,
        k=k,
    )


# Linear systems ----------------------------------------------------------------


def curves_through(points_ideal: GradedIdeal, degree: int, options: EngineOptions = DEFAULT_OPTIONS) -> list[Polynomial]:
    """Basis of the degree-d forms vanishing on the points of a saturated ideal."""
    return degree_piece_basis(points_ideal, degree, options)


def passes_through(points_ideal: GradedIdeal, curve: Polynomial, options: EngineOptions = DEFAULT_OPTIONS) -> bool:
    return points_ideal.contains(curve, options)


def pencil_quartic_check(
    arrangement: Arrangement,
    points_ideal: GradedIdeal,
    point: Sequence[int],
    options: EngineOptions = DEFAULT_OPTIONS,
) -> IdentityCheck:
    """The components through ``point`` multiply to a curve through all of Sing(A).

    For B3 and a quadruple point the product is a quartic of the net through
    its 13 singular points.
    """
    ring = arrangement.ring
    values = [to_scalar(ring.domain, v) for v in point]
    pencil = ring.one
    count = 0
    for component in arrangement.components:
        if not component(*values):
            pencil *= component
            count += 1
    holds = count > 0 and passes_through(points_ideal, pencil, options)
    return IdentityCheck("pencil_quartic", holds, int(grading(pencil).degree), count)


def find_smooth_member(
    basis: Sequence[Polynomial],
    arrangement: Arrangement,
    seed: int = 1,
    retries: int = DEFAULT_MEMBER_RETRIES,
    bound: int = DEFAULT_COEFFICIENT_BOUND,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> SmoothMember:
    """First seeded random member that is smooth, shares no component and keeps mu = tau."""
    if not basis:
        raise EmptyLinearSystemError("the linear system is empty")
    rng = random.Random(seed)
    domain = basis[0].ring.domain
    reason = "no attempt made"
    for attempt in range(1, retries + 1):
        width = bound * (1 + (attempt - 1) // 16)
        coefficients = tuple(rng.randint(-width, width) for _ in basis)
        curve = basis[0].ring.zero
        for coeff, form in zip(coefficients, basis):
            if coeff:
                curve += form * to_scalar(domain, coeff)
        if not curve:
            reason = "zero combination"
            continue
        if not is_smooth(curve, options):
            reason = "singular member"
            continue
        try:
            union = arrangement_union(arrangement, curve)
        except CommonComponentError:
            reason = "shares a component with the arrangement"
            continue
        try:
            if not is_quasihomogeneous_everywhere(union, seed=seed, options=options):
                reason = "union has a non-quasihomogeneous singularity"
                continue
        except ChartCertificationError as exc:
            reason = str(exc)
            continue
        return SmoothMember(curve, coefficients, attempt, seed)
    raise CertificationExhaustedError(f"no certified member after {retries} attempts", reason)
