"""Singularity invariants of reduced plane curves.

Local invariants are only ever needed summed over all points, so they are
computed globally: after a certified generic change of coordinates every
relevant point is affine, and the sum of local lengths of a zero-dimensional
affine scheme is the dimension of its coordinate ring.
"""

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from sympy.polys.rings import PolyRing

from algebra.errors import (
    ChartCertificationError,
    CommonComponentError,
    NotHomogeneousError,
    NotReducedError,
)
from algebra.groebner import (
    DEFAULT_OPTIONS,
    EngineOptions,
    GradedIdeal,
    QuotientModule,
    hilbert_series,
    is_artinian,
    minimal_polynomial,
    projective_degree,
    saturate,
    standard_monomials,
)
from algebra.polycore import (
    Polynomial,
    RationalMatrix,
    apply_linear_change,
    dehomogenize,
    differentiate,
    gradient,
    grading,
    homogenize,
    invert_matrix,
)

IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
DEFAULT_CHART_RETRIES = 32
DEFAULT_CHART_BOUND = 5


@dataclass(frozen=True)
class Arrangement:
    """An ordered union of curves; ``product`` is the defining equation Q."""

    components: tuple[Polynomial, ...]
    product: Polynomial

    @classmethod
    def of(cls, components: Sequence[Polynomial], check_coprime: bool = True) -> "Arrangement":
        if not components:
            raise ValueError("an arrangement needs at least one curve")
        ring = components[0].ring
        product = ring.one
        for i, component in enumerate(components):
            info = grading(component)
            if info.is_zero or not info.is_homogeneous:
                raise NotHomogeneousError(f"curve {i + 1} is not a nonzero homogeneous polynomial")
            if info.degree < 1:
                raise NotHomogeneousError(f"curve {i + 1} has degree 0")
            product *= component
        if check_coprime:
            for i in range(len(components)):
                for j in range(i):
                    common = components[i].gcd(components[j])
                    if not common.is_ground:
                        raise CommonComponentError(f"curves {j + 1} and {i + 1} share a component")
        return cls(tuple(components), product)

    @property
    def ring(self) -> PolyRing:
        return self.product.ring

    @property
    def degree(self) -> int:
        return int(grading(self.product).degree)

    @property
    def degrees(self) -> list[int]:
        return [int(grading(c).degree) for c in self.components]

    def with_curve(self, curve: Polynomial) -> "Arrangement":
        return arrangement_union(self, curve)


def arrangement_union(arrangement: Arrangement, curve: Polynomial) -> Arrangement:
    return Arrangement.of(list(arrangement.components) + [curve.set_ring(arrangement.ring)])


@dataclass(frozen=True)
class ChartData:
    """A coordinate change Q(v) -> Q(Mv) and the affine equation q(x, y) = Q(M(x, y, 1))."""

    change: tuple[tuple, ...]
    inverse: tuple[tuple, ...]
    q: Polynomial
    seed: int
    attempts: int = 1

    @property
    def ring(self) -> PolyRing:
        return self.q.ring


@dataclass(frozen=True)
class SingularityProfile:
    mu_total: int
    tau_total: int
    quasihomogeneous_all: bool
    sing_point_count: int
    chart_seed: Optional[int] = None
    points_ideal: Optional[GradedIdeal] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class MilnorDelta:
    """Both sides of mu(A + C) - mu(A) = 2mn - k."""

    mu_union: int
    mu_arrangement: int
    m: int
    n: int
    k: int

    @property
    def left(self) -> int:
        return self.mu_union - self.mu_arrangement

    @property
    def right(self) -> int:
        return 2 * self.m * self.n - self.k

    @property
    def holds(self) -> bool:
        return self.left == self.right


def jacobian_ideal(F: Polynomial) -> GradedIdeal:
    if not F or not grading(F).is_homogeneous:
        raise NotHomogeneousError("the Jacobian ideal needs a nonzero homogeneous polynomial")
    return GradedIdeal.of(gradient(F), F.ring)


def is_smooth(F: Polynomial, options: EngineOptions = DEFAULT_OPTIONS) -> bool:
    """No singular point: the Jacobian ideal saturates to the unit ideal."""
    return is_artinian(jacobian_ideal(F), options)


def is_reduced(F: Polynomial, options: EngineOptions = DEFAULT_OPTIONS) -> bool:
    """Finitely many singular points, i.e. S/J_F has Krull dimension at most 1."""
    series = hilbert_series(QuotientModule.of_ideal(jacobian_ideal(F)), options)
    return series.krull_dimension <= 1


def genus_smooth(n: int) -> int:
    if n < 1:
        raise ValueError("degree must be positive")
    return (n - 1) * (n - 2) // 2


def chart_failure(Q: Polynomial, change: RationalMatrix, options: EngineOptions = DEFAULT_OPTIONS) -> Optional[str]:
    """Why ``change`` is not a generic chart for Q, or None when it is.

    Certified when V(Q_x, Q_y, z) is empty after the change: then no singular
    point of Q and no zero of the affine partials lies on the line z = 0.
    """
    moved = apply_linear_change(Q, change)
    ring = moved.ring
    partials = [differentiate(moved, 0), differentiate(moved, 1), ring.gens[2]]
    if not is_artinian(GradedIdeal.of(partials, ring), options):
        return "singular locus or affine critical points meet the line at infinity"
    return None


def _draw_inverse(rng: random.Random, bound: int) -> tuple[tuple, ...]:
    a = rng.randint(-bound, bound)
    b = rng.randint(-bound, bound)
    c = rng.randint(-bound, bound)
    # new coordinates (x + c*y, y, a*x + b*y + z)
    return ((1, c, 0), (0, 1, 0), (a, b, 1))


def generic_chart(
    Q: Polynomial,
    seed: int = 1,
    retries: int = DEFAULT_CHART_RETRIES,
    bound: int = DEFAULT_CHART_BOUND,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> ChartData:
    """Seeded random chart in which every singular point of V(Q) is affine."""
    rng = random.Random(seed)
    reason = "no attempt made"
    for attempt in range(1, retries + 1):
        inverse = _draw_inverse(rng, bound * (1 + (attempt - 1) // 8))
        change = tuple(tuple(row) for row in invert_matrix(inverse))
        reason = chart_failure(Q, change, options)
        if reason is None:
            moved = apply_linear_change(Q, change)
            return ChartData(change, inverse, dehomogenize(moved, 2), seed, attempt)
    raise ChartCertificationError(f"no certified chart after {retries} attempts: {reason}")


def _chart(Q: Polynomial, chart: Optional[ChartData], seed: int, options: EngineOptions) -> ChartData:
    return chart if chart is not None else generic_chart(Q, seed, options=options)


def _affine(p: Polynomial, chart: ChartData) -> Polynomial:
    return dehomogenize(apply_linear_change(p, chart.change), 2, chart.ring)


def affine_quotient_dimension(ideal: GradedIdeal, options: EngineOptions = DEFAULT_OPTIONS) -> int:
    """Number of standard monomials; the quotient must be finite dimensional."""
    ideal.groebner(options=options)
    return len(standard_monomials(ideal))


def milnor_total(
    arrangement: Arrangement,
    chart: Optional[ChartData] = None,
    seed: int = 1,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> int:
    """Sum of Milnor numbers over the singular points of V(Q).

    dim k[x,y]/<q_x, q_y> also counts critical points of q off the curve;
    those are exactly what survives saturation by q, and are subtracted.
    """
    chart = _chart(arrangement.product, chart, seed, options)
    q = chart.q
    critical = GradedIdeal.of([differentiate(q, 0), differentiate(q, 1)], chart.ring)
    off_curve = saturate(critical, q, options)
    return affine_quotient_dimension(critical, options) - affine_quotient_dimension(off_curve, options)


def tjurina_ideal(chart: ChartData) -> GradedIdeal:
    q = chart.q
    return GradedIdeal.of([q, differentiate(q, 0), differentiate(q, 1)], chart.ring)


def tjurina_total(
    arrangement: Arrangement,
    chart: Optional[ChartData] = None,
    seed: int = 1,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> int:
    chart = _chart(arrangement.product, chart, seed, options)
    return affine_quotient_dimension(tjurina_ideal(chart), options)


def tjurina_total_projective(arrangement: Arrangement, options: EngineOptions = DEFAULT_OPTIONS) -> int:
    """The same total read off the projective Jacobian scheme."""
    return projective_degree(jacobian_ideal(arrangement.product), options)


def is_quasihomogeneous_everywhere(
    arrangement: Arrangement,
    chart: Optional[ChartData] = None,
    seed: int = 1,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> bool:
    chart = _chart(arrangement.product, chart, seed, options)
    return milnor_total(arrangement, chart, options=options) == tjurina_total(arrangement, chart, options=options)


def square_free_part(p: Polynomial, var: int) -> Polynomial:
    """Square-free part of a polynomial in the single variable x_var.

    sympy only implements square-free parts over GF(p) for univariate
    polynomials, so the eliminant is moved to k[x_var] and back.
    """
    ring = p.ring
    line = PolyRing(str(ring.symbols[var]), ring.domain, "lex")
    univariate = line.from_dict({(monom[var],): coeff for monom, coeff in p.iterterms()})
    reduced = univariate.sqf_part()
    lift = [0] * ring.ngens
    terms = {}
    for (exp,), coeff in reduced.iterterms():
        lift[var] = exp
        terms[tuple(lift)] = coeff
    return ring.from_dict(terms)


def radical_zero_dimensional(ideal: GradedIdeal, options: EngineOptions = DEFAULT_OPTIONS) -> GradedIdeal:
    """Radical of a zero-dimensional ideal: adjoin square-free eliminants in every variable."""
    extra = []
    for var in range(ideal.ring.ngens):
        extra.append(square_free_part(minimal_polynomial(ideal, var, options), var))
    return GradedIdeal.of(list(ideal.generators) + extra, ideal.ring)


def singular_points_ideal(
    arrangement: Arrangement,
    chart: Optional[ChartData] = None,
    seed: int = 1,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> GradedIdeal:
    """Saturated radical ideal of Sing(V(Q)), in the original coordinates."""
    chart = _chart(arrangement.product, chart, seed, options)
    radical = radical_zero_dimensional(tjurina_ideal(chart), options)
    return _projective_points(radical, arrangement.ring, chart, options)


def _projective_points(radical: GradedIdeal, ring: PolyRing, chart: ChartData, options: EngineOptions) -> GradedIdeal:
    # homogenizing a graded basis gives the saturated ideal of the affine points
    forms = [homogenize(g, ring, 2) for g in radical.groebner(options=options)]
    return GradedIdeal.of([apply_linear_change(f, chart.inverse) for f in forms], ring)


def singularity_profile(
    arrangement: Arrangement,
    seed: int = 1,
    retries: int = DEFAULT_CHART_RETRIES,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> SingularityProfile:
    chart = generic_chart(arrangement.product, seed, retries, options=options)
    mu = milnor_total(arrangement, chart, options=options)
    tjurina = tjurina_ideal(chart)
    tau = affine_quotient_dimension(tjurina, options)
    radical = radical_zero_dimensional(tjurina, options)
    count = affine_quotient_dimension(radical, options)
    points = _projective_points(radical, arrangement.ring, chart, options)
    return SingularityProfile(mu, tau, mu == tau, count, seed, points)


def _intersection_ideal(
    curve: Polynomial, arrangement: Arrangement, chart: ChartData, options: EngineOptions = DEFAULT_OPTIONS
) -> GradedIdeal:
    ideal = GradedIdeal.of([_affine(curve, chart), _affine(arrangement.product, chart)], chart.ring)
    if not is_artinian(ideal, options):
        raise CommonComponentError("the curve shares a component with the arrangement")
    return ideal


def union_chart(
    curve: Polynomial,
    arrangement: Arrangement,
    seed: int = 1,
    retries: int = DEFAULT_CHART_RETRIES,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> ChartData:
    """A chart certified for C * Q, so every point of C meet A is affine."""
    return generic_chart(arrangement.product * curve.set_ring(arrangement.ring), seed, retries, options=options)


def reduced_point_count(
    curve: Polynomial,
    arrangement: Arrangement,
    chart: Optional[ChartData] = None,
    seed: int = 1,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> int:
    """k = number of distinct points of V(C) meet V(Q)."""
    chart = chart or union_chart(curve, arrangement, seed, options=options)
    ideal = _intersection_ideal(curve, arrangement, chart, options)
    return affine_quotient_dimension(radical_zero_dimensional(ideal, options), options)


def bezout_total(
    curve: Polynomial,
    arrangement: Arrangement,
    chart: Optional[ChartData] = None,
    seed: int = 1,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> int:
    """Intersection number of C and A summed over all points."""
    chart = chart or union_chart(curve, arrangement, seed, options=options)
    return affine_quotient_dimension(_intersection_ideal(curve, arrangement, chart, options), options)


def milnor_union_delta(
    curve: Polynomial,
    arrangement: Arrangement,
    seed: int = 1,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> MilnorDelta:
    union = arrangement_union(arrangement, curve)
    mu_union = milnor_total(union, seed=seed, options=options)
    mu_arrangement = milnor_total(arrangement, seed=seed, options=options)
    k = reduced_point_count(curve, arrangement, seed=seed, options=options)
    return MilnorDelta(mu_union, mu_arrangement, arrangement.degree, int(grading(curve).degree), k)


def require_reduced(F: Polynomial, options: EngineOptions = DEFAULT_OPTIONS) -> None:
    if not is_reduced(F, options):
        raise NotReducedError("the curve equation is not reduced (its singular locus is a curve)")