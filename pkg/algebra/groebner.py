"""Groebner bases for ideals and graded submodules of free modules.

Also syzygies, minimal generators, minimal free resolutions, Hilbert series,
ideal quotients and saturation. Vectors of a free module S^r are tuples of
polynomials; the module order is position over term (a lower basis index
dominates) with the ring's monomial order on each coordinate.
"""

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

from sympy import QQ, Poly, Symbol
from sympy.polys.rings import PolyRing

from algebra.errors import (
    InfiniteQuotientError,
    NotHomogeneousError,
    PairLimitExceeded,
    PositiveDimensionalError,
)
from algebra.polycore import (
    GREVLEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    Scalar,
    grading,
    ring_with_order,
    total_degree,
)

# an element of a free module S^r; the basis degrees live on the enclosing submodule
Vector = tuple[Polynomial, ...]


@dataclass(frozen=True)
class EngineOptions:
    """Knobs of the Buchberger engine; ``pair_limit`` caps the pair queue."""

    pair_limit: Optional[int] = None


DEFAULT_OPTIONS = EngineOptions()


# Vectors ---------------------------------------------------------------


def unit_vector(ring: PolyRing, index: int, rank: int, entry: Optional[Polynomial] = None) -> Vector:
    entry = ring.one if entry is None else entry
    return tuple(entry if i == index else ring.zero for i in range(rank))


def is_zero_vector(vector: Sequence[Polynomial]) -> bool:
    return not any(vector)


def vector_degree(vector: Sequence[Polynomial], shifts: Sequence[int]) -> Optional[int]:
    """Degree of the first nonzero coordinate plus its basis shift."""
    for component, shift in zip(vector, shifts):
        if component:
            return int(total_degree(component)) + shift
    return None


def is_homogeneous_vector(vector: Sequence[Polynomial], shifts: Sequence[int]) -> bool:
    degrees = set()
    for component, shift in zip(vector, shifts):
        if component:
            info = grading(component)
            if not info.is_homogeneous:
                return False
            degrees.add(int(info.degree) + shift)
    return len(degrees) <= 1


def pair_vector(vector: Sequence[Polynomial], polys: Sequence[Polynomial]) -> Polynomial:
    """Sum of vector[i] * polys[i]."""
    total = polys[0].ring.zero if polys else vector[0].ring.zero
    for coordinate, poly in zip(vector, polys):
        if coordinate and poly:
            total += coordinate * poly
    return total


def _convert(vector: Sequence[Polynomial], ring: PolyRing) -> Vector:
    return tuple(component.set_ring(ring) for component in vector)



# Buchberger engine ------------------------------------------------------


@dataclass
class _Row:
    vector: list
    position: int
    monom: Monomial
    inverse_lc: Scalar


def _lead(vector: Sequence[Polynomial]):
    for position, component in enumerate(vector):
        if component:
            monom = component.leading_expv()
            return position, monom, component[monom]
    return None


def _axpy(target: Polynomial, source: Polynomial, monom: Monomial, coeff: Scalar, mul, zero) -> None:
    # target += coeff * monom * source, in place
    get = target.get
    for m, c in source.items():
        key = mul(m, monom)
        value = get(key, zero) + c * coeff
        if value:
            target[key] = value
        else:
            del target[key]


class _ReductionIndex:
    """Reducers grouped by leading position; computes full normal forms."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.by_position: dict[int, list[_Row]] = defaultdict(list)

    def add(self, row: _Row) -> None:
        self.by_position[row.position].append(row)

    def reduce(self, vector: Sequence[Polynomial]) -> list:
        ring = self.ring
        div = ring.monomial_div
        mul = ring.monomial_mul
        zero = ring.domain.zero
        work = [component.copy() for component in vector]
        result = [ring.zero for _ in work]
        for position, current in enumerate(work):
            reducers = self.by_position.get(position, ())
            remainder = result[position]
            while current:
                monom = ring.leading_expv(current)
                coeff = current[monom]
                for row in reducers:
                    quotient = div(monom, row.monom)
                    if quotient is not None:
                        factor = -coeff * row.inverse_lc
                        for k in range(position, len(work)):
                            if row.vector[k]:
                                _axpy(work[k], row.vector[k], quotient, factor, mul, zero)
                        break
                else:
                    remainder[monom] = coeff
                    del current[monom]
        return result


class _Buchberger:
    """Buchberger's algorithm on vectors of a free module.

    Pairs are chosen by the normal strategy (smallest lcm degree, then the
    monomial order) and pruned with the Gebauer-Moeller update. The product
    criterion is only applied to ideals (rank 1).
    """

    def __init__(self, ring: PolyRing, shifts: Sequence[int], options: EngineOptions = DEFAULT_OPTIONS):
        self.ring = ring
        self.shifts = tuple(shifts)
        self.rank = len(self.shifts)
        self.options = options
        self.rows: list[_Row] = []
        self.index = _ReductionIndex(ring)
        self.pairs: dict[tuple[int, int], tuple] = {}

    def run(self, vectors: Iterable[Sequence[Polynomial]]) -> list[Vector]:
        pending = [list(v) for v in vectors if not is_zero_vector(v)]
        pending.sort(key=self._input_key)
        for vector in pending:
            reduced = self.index.reduce(vector)
            if _lead(reduced) is not None:
                self._add(reduced)
        while self.pairs:
            limit = self.options.pair_limit
            if limit is not None and len(self.pairs) > limit:
                raise PairLimitExceeded(f"pair queue reached {len(self.pairs)} pairs (limit {limit})")
            pair = min(self.pairs, key=lambda p: self.pairs[p][0])
            del self.pairs[pair]
            reduced = self.index.reduce(self._s_vector(*pair))
            if _lead(reduced) is not None:
                self._add(reduced)
        return self._reduced_basis()

    def _input_key(self, vector):
        position, monom, _ = _lead(vector)
        return sum(monom) + self.shifts[position], position

    def _make_row(self, vector) -> _Row:
        position, monom, lc = _lead(vector)
        domain = self.ring.domain
        inverse = domain.quo(domain.one, lc)
        monic = [component.mul_ground(inverse) if component else component for component in vector]
        return _Row(monic, position, monom, domain.one)

    def _add(self, vector) -> None:
        row = self._make_row(vector)
        self._update_pairs(row, len(self.rows))
        self.rows.append(row)
        self.index.add(row)

    def _update_pairs(self, row: _Row, new: int) -> None:
        ring = self.ring
        lcm = ring.monomial_lcm
        mul = ring.monomial_mul
        div = ring.monomial_div
        rows = self.rows
        lm = row.monom

        for pair, (_, pair_lcm) in list(self.pairs.items()):
            i, j = pair
            if rows[i].position != row.position:
                continue
            if (
                div(pair_lcm, lm) is not None
                and pair_lcm != lcm(rows[i].monom, lm)
                and pair_lcm != lcm(rows[j].monom, lm)
            ):
                del self.pairs[pair]

        candidates: dict[Monomial, list[int]] = {}
        for i, old in enumerate(rows):
            if old.position == row.position:
                candidates.setdefault(lcm(old.monom, lm), []).append(i)
        minimal: list[Monomial] = []
        for value in sorted(candidates, key=ring.order):
            if all(div(value, other) is None for other in minimal):
                minimal.append(value)
        for value in minimal:
            indices = candidates[value]
            if self.rank == 1 and any(lcm(rows[i].monom, lm) == mul(rows[i].monom, lm) for i in indices):
                continue
            i = min(indices)
            key = (sum(value) + self.shifts[row.position], ring.order(value), i, new)
            self.pairs[(i, new)] = (key, value)

    def _s_vector(self, i: int, j: int) -> list:
        ring = self.ring
        f, g = self.rows[i], self.rows[j]
        value = ring.monomial_lcm(f.monom, g.monom)
        factor_f = ring.monomial_div(value, f.monom)
        factor_g = ring.monomial_div(value, g.monom)
        result = [component.mul_monom(factor_f) for component in f.vector]
        minus_one = -ring.domain.one
        for k in range(g.position, self.rank):
            if g.vector[k]:
                _axpy(result[k], g.vector[k], factor_g, minus_one, ring.monomial_mul, ring.domain.zero)
        return result

    def _reduced_basis(self) -> list[Vector]:
        ring = self.ring
        div = ring.monomial_div
        ordered = sorted(self.rows, key=lambda r: (r.position, ring.order(r.monom)))
        minimal: list[_Row] = []
        for row in ordered:
            if all(other.position != row.position or div(row.monom, other.monom) is None for other in minimal):
                minimal.append(row)
        basis = []
        for k, row in enumerate(minimal):
            index = _ReductionIndex(ring)
            for other in minimal[:k] + minimal[k + 1:]:
                index.add(other)
            basis.append(tuple(self._make_row(index.reduce(row.vector)).vector))
        return basis


# Ideals and modules -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedIdeal:
    """An ideal given by generators, with Groebner bases cached per order."""

    ring: PolyRing
    generators: tuple[Polynomial, ...]
    _bases: dict = field(default_factory=dict, init=False, repr=False)

    @classmethod
    def of(cls, generators: Iterable[Polynomial], ring: Optional[PolyRing] = None) -> "GradedIdeal":
        generators = list(generators)
        ring = ring or generators[0].ring
        return cls(ring, tuple(g.set_ring(ring) for g in generators if g))

    @classmethod
    def unit(cls, ring: PolyRing) -> "GradedIdeal":
        return cls(ring, (ring.one,))

    @classmethod
    def irrelevant(cls, ring: PolyRing) -> "GradedIdeal":
        return cls(ring, tuple(ring.gens))

    @property
    def is_homogeneous(self) -> bool:
        return all(grading(g).is_homogeneous for g in self.generators)

    def groebner(self, order: MonomialOrder = GREVLEX, options: EngineOptions = DEFAULT_OPTIONS):
        key = order
        if key not in self._bases:
            self._bases[key] = tuple(groebner_basis(list(self.generators), order, options))
        return self._bases[key]

    def contains(self, p: Polynomial, options: EngineOptions = DEFAULT_OPTIONS) -> bool:
        basis = self.groebner(GREVLEX, options)
        return not normal_form(p.set_ring(self.ring), basis)

    def is_subset(self, other: "GradedIdeal", options: EngineOptions = DEFAULT_OPTIONS) -> bool:
        return all(other.contains(g, options) for g in self.generators)

    def is_unit(self, options: EngineOptions = DEFAULT_OPTIONS) -> bool:
        basis = self.groebner(GREVLEX, options)
        return len(basis) == 1 and basis[0] == self.ring.one

    def __add__(self, other: "GradedIdeal") -> "GradedIdeal":
        return GradedIdeal.of(self.generators + other.generators, self.ring)


@dataclass(frozen=True, eq=False)
class GradedSubmodule:
    """A submodule of the free module with basis degrees ``shifts``."""

    ring: PolyRing
    shifts: tuple[int, ...]
    generators: tuple[Vector, ...]
    _bases: dict = field(default_factory=dict, init=False, repr=False)

    @classmethod
    def of(cls, ring: PolyRing, shifts: Sequence[int], generators: Iterable[Sequence[Polynomial]]) -> "GradedSubmodule":
        gens = tuple(_convert(g, ring) for g in generators if not is_zero_vector(g))
        return cls(ring, tuple(shifts), gens)

    @classmethod
    def of_ideal(cls, ideal: GradedIdeal) -> "GradedSubmodule":
        return cls(ideal.ring, (0,), tuple((g,) for g in ideal.generators))

    @property
    def rank(self) -> int:
        return len(self.shifts)

    @property
    def is_homogeneous(self) -> bool:
        return all(is_homogeneous_vector(g, self.shifts) for g in self.generators)

    def generator_degrees(self) -> list[int]:
        return [vector_degree(g, self.shifts) for g in self.generators]

    def groebner(self, options: EngineOptions = DEFAULT_OPTIONS) -> tuple[Vector, ...]:
        if "pot" not in self._bases:
            self._bases["pot"] = tuple(_Buchberger(self.ring, self.shifts, options).run(self.generators))
        return self._bases["pot"]

    def contains(self, vector: Sequence[Polynomial], options: EngineOptions = DEFAULT_OPTIONS) -> bool:
        return is_zero_vector(normal_form(_convert(vector, self.ring), list(self.groebner(options))))

    def regraded(self, shifts: Sequence[int]) -> "GradedSubmodule":
        return GradedSubmodule(self.ring, tuple(shifts), self.generators)


@dataclass(frozen=True, eq=False)
class QuotientModule:
    """F / M for a graded free module F and a submodule M of it."""

    relations: GradedSubmodule

    @classmethod
    def of_ideal(cls, ideal: GradedIdeal) -> "QuotientModule":
        return cls(GradedSubmodule.of_ideal(ideal))

    @classmethod
    def free(cls, ring: PolyRing, shifts: Sequence[int]) -> "QuotientModule":
        return cls(GradedSubmodule(ring, tuple(shifts), ()))

    @property
    def ring(self) -> PolyRing:
        return self.relations.ring

    @property
    def shifts(self) -> tuple[int, ...]:
        return self.relations.shifts


GradedModule = Union[GradedIdeal, GradedSubmodule, QuotientModule]


def groebner_basis(
    generators: Union[GradedIdeal, GradedSubmodule, Sequence[Polynomial]],
    order: MonomialOrder = GREVLEX,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> list:
    """Reduced Groebner basis.

    Ideals (or plain polynomial lists) give polynomials living in a ring with
    ``order``; submodules give vectors under position over term.
    """
    if isinstance(generators, GradedSubmodule):
        ring = ring_with_order(generators.ring, order.term_order)
        vectors = [_convert(g, ring) for g in generators.generators]
        basis = _Buchberger(ring, generators.shifts, options).run(vectors)
        return [_convert(v, generators.ring) for v in basis]
    if isinstance(generators, GradedIdeal):
        generators = list(generators.generators)
    polys = [g for g in generators if g]
    if not polys:
        return []
    ring = ring_with_order(polys[0].ring, order)
    basis = _Buchberger(ring, (0,), options).run([(p.set_ring(ring),) for p in polys])
    return [v[0] for v in basis]


def _rows_from_basis(basis: Sequence, ring: PolyRing) -> _ReductionIndex:
    index = _ReductionIndex(ring)
    domain = ring.domain
    for element in basis:
        vector = list(element)
        lead = _lead(vector)
        if lead is None:
            continue
        position, monom, lc = lead
        index.add(_Row(vector, position, monom, domain.quo(domain.one, lc)))
    return index


def normal_form(p, basis: Sequence):
    """Remainder of a polynomial (or vector) by a Groebner basis."""
    if isinstance(p, (tuple, list)):
        if not basis:
            return tuple(p)
        ring = basis[0][0].ring
        vector = _convert(p, ring)
        return tuple(_rows_from_basis(basis, ring).reduce(vector))
    if not basis:
        return p
    ring = basis[0].ring
    index = _rows_from_basis([(b,) for b in basis], ring)
    return index.reduce((p.set_ring(ring),))[0]


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    ring = f.ring
    lm_f, lm_g = f.leading_expv(), g.leading_expv()
    value = ring.monomial_lcm(lm_f, lm_g)
    left = f.mul_term((ring.monomial_div(value, lm_f), ring.domain.quo(ring.domain.one, f[lm_f])))
    right = g.mul_term((ring.monomial_div(value, lm_g), ring.domain.quo(ring.domain.one, g[lm_g])))
    return left - right


def is_groebner_basis(basis: Sequence[Polynomial]) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    for f, g in itertools.combinations(basis, 2):
        if normal_form(s_polynomial(f, g), basis):
            return False
    return True


# Syzygies and resolutions -----------------------------------------------


def _as_vectors(gens: Sequence) -> list[Vector]:
    return [tuple(g) if isinstance(g, (tuple, list)) else (g,) for g in gens]


def syzygies(
    gens: Sequence,
    shifts: Optional[Sequence[int]] = None,
    degrees: Optional[Sequence[int]] = None,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> GradedSubmodule:
    """Kernel of the map sum S(-deg g_i) -> F sending e_i to g_i.

    ``gens`` are polynomials or vectors of F (basis degrees ``shifts``).
    Computed from a position-over-term basis of the vectors (g_i | e_i): the
    basis elements whose g-part vanishes generate the kernel.
    """
    vectors = _as_vectors(gens)
    if not vectors:
        raise ValueError("syzygies of an empty list")
    ring = vectors[0][0].ring
    rank = len(vectors[0])
    shifts = tuple(shifts) if shifts is not None else (0,) * rank
    if degrees is None:
        degrees = []
        for v in vectors:
            degree = vector_degree(v, shifts)
            degrees.append(0 if degree is None else degree)
    count = len(vectors)
    extended = [tuple(v) + unit_vector(ring, i, count) for i, v in enumerate(vectors)]
    basis = _Buchberger(ring, shifts + tuple(degrees), options).run(extended)
    kernel = [v[rank:] for v in basis if is_zero_vector(v[:rank])]
    return GradedSubmodule(ring, tuple(degrees), tuple(kernel))


def _coefficient_vector(vector: Sequence[Polynomial]) -> dict:
    return {(i, m): c for i, component in enumerate(vector) for m, c in component.iterterms()}


def minimal_generators(module: GradedSubmodule, options: EngineOptions = DEFAULT_OPTIONS) -> GradedSubmodule:
    """Minimal homogeneous generators, selected degree by degree.

    A degree-d generator is kept when its normal form modulo the kept
    lower-degree generators is linearly independent of the normal forms of
    the degree-d generators kept before it.
    """
    if not module.is_homogeneous:
        raise NotHomogeneousError("minimal generators need a homogeneous module")
    ring = module.ring
    domain = ring.domain
    by_degree: dict[int, list[Vector]] = defaultdict(list)
    for g in module.generators:
        if not is_zero_vector(g):
            by_degree[vector_degree(g, module.shifts)].append(g)
    kept: list[Vector] = []
    for degree in sorted(by_degree):
        basis = _Buchberger(ring, module.shifts, options).run(kept) if kept else []
        index = _rows_from_basis(basis, ring)
        echelon: list[tuple[tuple, dict]] = []
        for candidate in by_degree[degree]:
            residue = _coefficient_vector(index.reduce(candidate))
            for pivot, row in echelon:
                coeff = residue.get(pivot)
                if coeff:
                    for key, value in row.items():
                        updated = residue.get(key, domain.zero) - coeff * value
                        if updated:
                            residue[key] = updated
                        else:
                            residue.pop(key, None)
            if residue:
                pivot = min(residue)
                inverse = domain.quo(domain.one, residue[pivot])
                echelon.append((pivot, {k: v * inverse for k, v in residue.items()}))
                kept.append(candidate)
    return GradedSubmodule(ring, module.shifts, tuple(kept))


@dataclass(frozen=True)
class ResolutionMap:
    """A map of graded free modules given by the images of the source basis."""

    source_shifts: tuple[int, ...]
    target_shifts: tuple[int, ...]
    columns: tuple[Vector, ...]

    def is_minimal(self) -> bool:
        for column in self.columns:
            for component in column:
                if component and component.is_ground:
                    return False
        return True


@dataclass(frozen=True)
class FreeResolution:
    """Minimal graded free resolution ... -> F_1 -> F_0.

    ``modules[i]`` lists the degrees of the basis of F_i; ``maps[i]`` is the
    map F_{i+1} -> F_i. For a submodule M, ``cover`` holds the minimal
    generators of M (the images of the basis of F_0).
    """

    ring: PolyRing
    modules: tuple[tuple[int, ...], ...]
    maps: tuple[ResolutionMap, ...]
    cover: Optional[GradedSubmodule] = None

    @property
    def length(self) -> int:
        return max(len([m for m in self.modules if m]) - 1, 0)

    @property
    def betti_numbers(self) -> list[int]:
        return [len(m) for m in self.modules if m]

    def graded_betti(self) -> dict[int, dict[int, int]]:
        table: dict[int, dict[int, int]] = {}
        for i, shifts in enumerate(self.modules):
            for degree in shifts:
                table.setdefault(i, {}).setdefault(degree, 0)
                table[i][degree] += 1
        return table

    @property
    def regularity(self) -> Optional[int]:
        values = [max(shifts) - i for i, shifts in enumerate(self.modules) if shifts]
        return max(values) if values else None

    def hilbert_series(self) -> "HilbertSeries":
        terms: dict[int, int] = defaultdict(int)
        for i, shifts in enumerate(self.modules):
            for degree in shifts:
                terms[degree] += (-1) ** i
        return HilbertSeries.from_terms(terms, self.ring.ngens)

    def composes_to_zero(self) -> bool:
        for first, second in zip(self.maps, self.maps[1:]):
            for column in second.columns:
                image = [self.ring.zero] * len(first.target_shifts)
                for coeff, target in zip(column, first.columns):
                    if coeff:
                        image = [a + coeff * b for a, b in zip(image, target)]
                if not is_zero_vector(image):
                    return False
        if self.cover is not None and self.maps:
            generators = self.cover.generators
            for column in self.maps[0].columns:
                image = [self.ring.zero] * self.cover.rank
                for coeff, target in zip(column, generators):
                    if coeff:
                        image = [a + coeff * b for a, b in zip(image, target)]
                if not is_zero_vector(image):
                    return False
        return True

    def is_minimal(self) -> bool:
        return all(m.is_minimal() for m in self.maps)


def free_resolution(
    module: Union[GradedSubmodule, QuotientModule, GradedIdeal],
    options: EngineOptions = DEFAULT_OPTIONS,
) -> FreeResolution:
    """Minimal free resolution of a submodule M, or of a quotient F/M."""
    if isinstance(module, GradedIdeal):
        module = GradedSubmodule.of_ideal(module)
    ring = module.ring
    modules: list[tuple[int, ...]] = []
    maps: list[ResolutionMap] = []
    cover = None
    if isinstance(module, QuotientModule):
        modules.append(module.shifts)
        current = minimal_generators(module.relations, options)
    else:
        cover = minimal_generators(module, options)
        current = cover
        modules.append(tuple(cover.generator_degrees()))
        if current.generators:
            current = minimal_generators(syzygies(current.generators, current.shifts, options=options), options)
    while current.generators:
        source = tuple(current.generator_degrees())
        maps.append(ResolutionMap(source, current.shifts, current.generators))
        modules.append(source)
        current = minimal_generators(syzygies(current.generators, current.shifts, source, options), options)
    return FreeResolution(ring, tuple(modules), tuple(maps), cover)


# Hilbert series ---------------------------------------------------------


def _add_terms(target: dict, source: Mapping[int, int], sign: int = 1, shift: int = 0) -> None:
    for exponent, coeff in source.items():
        key = exponent + shift
        value = target.get(key, 0) + sign * coeff
        if value:
            target[key] = value
        else:
            target.pop(key, None)


def _minimal_monomials(monomials: Iterable[Monomial]) -> tuple[Monomial, ...]:
    ordered = sorted(set(monomials), key=lambda m: (sum(m), m))
    minimal: list[Monomial] = []
    for m in ordered:
        if not any(all(a <= b for a, b in zip(other, m)) for other in minimal):
            minimal.append(m)
    return tuple(minimal)


@lru_cache(maxsize=8192)
def _staircase_numerator(generators: tuple[Monomial, ...]) -> tuple[tuple[int, int], ...]:
    # numerator of HS(S/<generators>) * (1-t)^n; generators minimal
    if not generators:
        return ((0, 1),)
    if any(sum(g) == 0 for g in generators):
        return ()
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in generators]
    if all(a.isdisjoint(b) for a, b in itertools.combinations(supports, 2)):
        terms = {0: 1}
        for g in generators:
            product: dict[int, int] = {}
            _add_terms(product, terms)
            _add_terms(product, terms, -1, sum(g))
            terms = product
        return tuple(sorted(terms.items()))
    *rest, pivot = generators
    colon = _minimal_monomials(tuple(max(a - b, 0) for a, b in zip(u, pivot)) for u in rest)
    terms: dict[int, int] = {}
    _add_terms(terms, dict(_staircase_numerator(tuple(rest))))
    _add_terms(terms, dict(_staircase_numerator(colon)), -1, sum(pivot))
    return tuple(sorted(terms.items()))


def monomial_ideal_numerator(monomials: Iterable[Monomial]) -> dict[int, int]:
    return dict(_staircase_numerator(_minimal_monomials(monomials)))


@dataclass(frozen=True)
class HilbertSeries:
    """N(t) / (1 - t)^nvars with N a Laurent polynomial with integer coefficients."""

    terms: tuple[tuple[int, int], ...]
    nvars: int

    @classmethod
    def from_terms(cls, terms: Mapping[int, int], nvars: int) -> "HilbertSeries":
        return cls(tuple(sorted((e, c) for e, c in terms.items() if c)), nvars)

    @property
    def numerator(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        terms = self.numerator
        _add_terms(terms, other.numerator)
        return HilbertSeries.from_terms(terms, self.nvars)

    def __sub__(self, other: "HilbertSeries") -> "HilbertSeries":
        terms = self.numerator
        _add_terms(terms, other.numerator, -1)
        return HilbertSeries.from_terms(terms, self.nvars)

    def shifted(self, amount: int) -> "HilbertSeries":
        """Multiply by t^amount (the series of M(-amount))."""
        return HilbertSeries(tuple((e + amount, c) for e, c in self.terms), self.nvars)

    def hilbert_function(self, t: int) -> int:
        n = self.nvars
        total = 0
        for exponent, coeff in self.terms:
            if t - exponent >= 0:
                total += coeff * math.comb(t - exponent + n - 1, n - 1)
        return total

    def reduced(self) -> tuple[dict[int, int], int]:
        """(h, d) with N(t) = (1 - t)^(nvars - d) h(t) and h(1) != 0."""
        if not self.terms:
            return {}, -1
        low = self.terms[0][0]
        coeffs = [0] * (self.terms[-1][0] - low + 1)
        for exponent, coeff in self.terms:
            coeffs[exponent - low] = coeff
        dimension = self.nvars
        while dimension > 0 and sum(coeffs) == 0:
            coeffs = list(itertools.accumulate(coeffs))[:-1]
            dimension -= 1
        return {i + low: c for i, c in enumerate(coeffs) if c}, dimension

    @property
    def krull_dimension(self) -> int:
        return self.reduced()[1]

    @property
    def multiplicity(self) -> int:
        h, _ = self.reduced()
        return sum(h.values())

    def hilbert_polynomial(self, symbol: str = "t") -> Poly:
        t = Symbol(symbol)
        h, dimension = self.reduced()
        if dimension <= 0:
            return Poly(0, t, domain=QQ)
        expression = 0
        for exponent, coeff in h.items():
            factor = 1
            for j in range(dimension - 1):
                factor *= t - exponent + dimension - 1 - j
            expression += coeff * factor / math.factorial(dimension - 1)
        return Poly(expression, t, domain=QQ)

    def format_numerator(self, symbol: str = "t") -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exponent, coeff in self.terms:
            magnitude = abs(coeff)
            if exponent == 0:
                power = ""
            elif exponent == 1:
                power = symbol
            else:
                power = f"{symbol}^{exponent}"
            if not power:
                body = str(magnitude)
            elif magnitude == 1:
                body = power
            else:
                body = f"{magnitude}*{power}"
            pieces.append(("-" if coeff < 0 else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


def free_module_series(shifts: Sequence[int], nvars: int) -> HilbertSeries:
    terms: dict[int, int] = defaultdict(int)
    for shift in shifts:
        terms[shift] += 1
    return HilbertSeries.from_terms(terms, nvars)


def _quotient_series(relations: GradedSubmodule, options: EngineOptions) -> HilbertSeries:
    if not relations.is_homogeneous:
        raise NotHomogeneousError("Hilbert series need homogeneous relations")
    leading: dict[int, list[Monomial]] = defaultdict(list)
    for vector in relations.groebner(options):
        position, monom, _ = _lead(vector)
        leading[position].append(monom)
    terms: dict[int, int] = {}
    for position, shift in enumerate(relations.shifts):
        _add_terms(terms, monomial_ideal_numerator(leading[position]), 1, shift)
    return HilbertSeries.from_terms(terms, relations.ring.ngens)


def hilbert_series(module: GradedModule, options: EngineOptions = DEFAULT_OPTIONS) -> HilbertSeries:
    """Series from the leading-term staircase; an ideal is taken as a module."""
    if isinstance(module, GradedIdeal):
        module = GradedSubmodule.of_ideal(module)
    if isinstance(module, QuotientModule):
        return _quotient_series(module.relations, options)
    free = free_module_series(module.shifts, module.ring.ngens)
    return free - _quotient_series(module, options)


def hilbert_function(module: GradedModule, t: int, options: EngineOptions = DEFAULT_OPTIONS) -> int:
    return hilbert_series(module, options).hilbert_function(t)


def hilbert_polynomial(module: GradedModule, options: EngineOptions = DEFAULT_OPTIONS) -> Poly:
    return hilbert_series(module, options).hilbert_polynomial()


def krull_dimension(module: GradedModule, options: EngineOptions = DEFAULT_OPTIONS) -> int:
    return hilbert_series(module, options).krull_dimension


# Quotients, saturation, degrees ------------------------------------------


def is_artinian(ideal: GradedIdeal, options: EngineOptions = DEFAULT_OPTIONS) -> bool:
    """True when the leading monomials contain a pure power of every variable."""
    n = ideal.ring.ngens
    found = set()
    for monom in (g.leading_expv() for g in ideal.groebner(GREVLEX, options)):
        support = [i for i, e in enumerate(monom) if e]
        if not support:
            return True
        if len(support) == 1:
            found.add(support[0])
    return len(found) == n


def ideal_quotient(
    ideal: GradedIdeal,
    divisor: Union[GradedIdeal, Polynomial],
    options: EngineOptions = DEFAULT_OPTIONS,
) -> GradedIdeal:
    """I : J, from a basis of the vectors (g_1..g_s | 1) and (f e_j | 0)."""
    ring = ideal.ring
    if not isinstance(divisor, GradedIdeal):
        divisor = GradedIdeal.of([divisor], ring)
    gens = [g.set_ring(ring) for g in divisor.generators]
    if not gens:
        return GradedIdeal.unit(ring)
    if not ideal.generators:
        return GradedIdeal(ring, ())
    count = len(gens)
    shifts = tuple(-int(total_degree(g)) for g in gens) + (0,)
    vectors = [tuple(gens) + (ring.one,)]
    for f in ideal.generators:
        for j in range(count):
            vectors.append(unit_vector(ring, j, count, f) + (ring.zero,))
    basis = _Buchberger(ring, shifts, options).run(vectors)
    quotient = tuple(v[count] for v in basis if is_zero_vector(v[:count]))
    return GradedIdeal(ring, quotient)


def saturate(
    ideal: GradedIdeal,
    by: Union[GradedIdeal, Polynomial, None] = None,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> GradedIdeal:
    """I : J^infinity by iterated quotients; ``by=None`` means <x_0..x_n>."""
    ring = ideal.ring
    irrelevant = by is None
    divisor = GradedIdeal.irrelevant(ring) if irrelevant else by
    current = ideal
    while True:
        if irrelevant and is_artinian(current, options):
            return GradedIdeal.unit(ring)
        quotient = ideal_quotient(current, divisor, options)
        if quotient.is_subset(current, options):
            return current
        current = quotient


def projective_degree(ideal: GradedIdeal, options: EngineOptions = DEFAULT_OPTIONS) -> int:
    """Degree of the zero-dimensional projective scheme of a homogeneous ideal."""
    if not ideal.is_homogeneous:
        raise NotHomogeneousError("projective degree needs a homogeneous ideal")
    series = hilbert_series(QuotientModule.of_ideal(ideal), options)
    dimension = series.krull_dimension
    if dimension <= 0:
        return 0
    if dimension == 1:
        return series.multiplicity
    raise PositiveDimensionalError(f"projective scheme has dimension {dimension - 1}")


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    result = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exponents = [0] * nvars
        for i in combo:
            exponents[i] += 1
        result.append(tuple(exponents))
    return result


def degree_piece_basis(ideal: GradedIdeal, degree: int, options: EngineOptions = DEFAULT_OPTIONS) -> list[Polynomial]:
    """Basis {u - NF(u) : u in LT(I) of degree d} of the degree-d piece of I."""
    if degree < 0:
        return []
    ring = ideal.ring
    basis = ideal.groebner(GREVLEX, options)
    leading = [g.leading_expv() for g in basis]
    div = ring.monomial_div
    result = []
    for monom in sorted(monomials_of_degree(ring.ngens, degree), key=ring.order, reverse=True):
        if any(div(monom, lm) is not None for lm in leading):
            u = ring.term_new(monom, ring.domain.one)
            result.append(u - normal_form(u, basis))
    return result


def standard_monomials(
    ideal: Union[GradedIdeal, Sequence[Polynomial]],
    bound: Optional[int] = None,
    order: MonomialOrder = GREVLEX,
) -> list[Monomial]:
    """Monomials outside the leading-term ideal, up to total degree ``bound``."""
    if isinstance(ideal, GradedIdeal):
        basis = ideal.groebner(order)
        ring = ideal.ring
    else:
        basis = list(ideal)
        ring = basis[0].ring if basis else None
    if ring is None:
        raise InfiniteQuotientError("the zero ideal has an infinite staircase")
    leading = [g.leading_expv() for g in basis]
    n = ring.ngens
    pure = {next(i for i, e in enumerate(m) if e) for m in leading if sum(1 for e in m if e) == 1}
    if any(sum(m) == 0 for m in leading):
        return []
    if bound is None and len(pure) < n:
        raise InfiniteQuotientError("quotient is not finite dimensional")
    div = ring.monomial_div
    zero = (0,) * n
    seen = {zero}
    frontier = [zero]
    result = []
    while frontier:
        monom = frontier.pop()
        if any(div(monom, lm) is not None for lm in leading):
            continue
        result.append(monom)
        for i in range(n):
            child = monom[:i] + (monom[i] + 1,) + monom[i + 1:]
            if child not in seen and (bound is None or sum(child) <= bound):
                seen.add(child)
                frontier.append(child)
    return sorted(result, key=lambda m: (sum(m), m))


def minimal_polynomial(ideal: GradedIdeal, var: int, options: EngineOptions = DEFAULT_OPTIONS) -> Polynomial:
    """Monic generator of I intersected with k[x_var], for zero-dimensional I.

    Found as the first linear dependency among the normal forms of the
    powers of x_var.
    """
    ring = ideal.ring
    if not is_artinian(ideal, options):
        raise InfiniteQuotientError("ideal is not zero dimensional")
    domain = ring.domain
    basis = ideal.groebner(GREVLEX, options)
    if len(basis) == 1 and basis[0] == ring.one:
        return ring.one
    gen = ring.gens[var]
    echelon: list[tuple[Monomial, dict, dict]] = []
    power = ring.one
    degree = 0
    while True:
        residue = dict(normal_form(power, basis).iterterms())
        combination = {degree: domain.one}
        for pivot, row, row_combination in echelon:
            coeff = residue.get(pivot)
            if coeff:
                for key, value in row.items():
                    updated = residue.get(key, domain.zero) - coeff * value
                    if updated:
                        residue[key] = updated
                    else:
                        residue.pop(key, None)
                for key, value in row_combination.items():
                    updated = combination.get(key, domain.zero) - coeff * value
                    if updated:
                        combination[key] = updated
                    else:
                        combination.pop(key, None)
        if not residue:
            result = ring.zero
            for exponent, coeff in combination.items():
                result += gen**exponent * coeff
            return result.monic()
        pivot = min(residue)
        inverse = domain.quo(domain.one, residue[pivot])
        echelon.append(
            (
                pivot,
                {k: v * inverse for k, v in residue.items()},
                {k: v * inverse for k, v in combination.items()},
            )
        )
        power = power * gen
        degree += 1
