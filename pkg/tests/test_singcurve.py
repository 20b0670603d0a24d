#!/usr/bin/env python3
"""Tests for singularity totals, charts and intersections of plane curves."""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from algebra import singcurve
from algebra.errors import CommonComponentError, NotHomogeneousError, NotReducedError
from algebra.groebner import (
    DEFAULT_OPTIONS,
    EngineOptions,
    GradedIdeal,
    monomials_of_degree,
    projective_degree,
    standard_monomials,
)
from algebra.polycore import dehomogenize, differentiate, make_ring, parse_polynomial
from algebra.singcurve import (
    Arrangement,
    affine_quotient_dimension,
    arrangement_union,
    bezout_total,
    chart_failure,
    generic_chart,
    genus_smooth,
    is_quasihomogeneous_everywhere,
    is_reduced,
    is_smooth,
    jacobian_ideal,
    milnor_total,
    milnor_union_delta,
    reduced_point_count,
    require_reduced,
    singular_points_ideal,
    singularity_profile,
    square_free_part,
    tjurina_total,
    tjurina_total_projective,
    union_chart,
)

R = make_ring()

A3 = ["x", "y", "z", "x - y", "x - z", "y - z"]
B3 = ["x", "y", "z", "x - y", "x + y", "x - z", "x + z", "y - z", "y + z"]


def P(text):
    return parse_polynomial(text, R)


def arrangement(texts):
    return Arrangement.of([P(t) for t in texts])


def test_arrangement_construction():
    print("=== Testing Arrangements ===")
    a3 = arrangement(A3)
    assert a3.degree == 6
    assert a3.degrees == [1] * 6
    assert a3.product == P("x*y*z*(x - y)*(x - z)*(y - z)")
    print("[PASS] Product and degrees of A3")

    with pytest.raises(NotHomogeneousError):
        arrangement(["x + 1"])
    with pytest.raises(NotHomogeneousError):
        arrangement(["x", "3"])
    with pytest.raises(CommonComponentError):
        arrangement(["x", "x*y"])
    with pytest.raises(ValueError):
        Arrangement.of([])
    print("[PASS] Inhomogeneous, constant and overlapping curves are rejected")

    union = a3.with_curve(P("x + y + z"))
    assert union.degree == 7
    print("[PASS] with_curve appends a component")
    print()


def test_smoothness_and_reducedness():
    print("=== Testing Smoothness ===")
    assert is_smooth(P("x^3 + y^3 + z^3"))
    assert is_smooth(P("x^2 + y^2 + z^2"))
    assert not is_smooth(P("x*y"))
    assert genus_smooth(1) == 0
    assert genus_smooth(3) == 1
    assert genus_smooth(4) == 3
    print("[PASS] Fermat cubic is smooth, two lines are not")

    assert is_reduced(P("x*y*z"))
    assert not is_reduced(P("x^2*y"))
    with pytest.raises(NotReducedError):
        require_reduced(P("x^2*y"))
    require_reduced(arrangement(A3).product)
    print("[PASS] Non-reduced equations are rejected")
    print()


def test_ideals_and_points():
    print("=== Testing Jacobian and Point Ideals ===")
    jacobian = jacobian_ideal(P("x*y"))
    assert jacobian.contains(P("x")) and jacobian.contains(P("y"))
    assert not jacobian.contains(P("z"))
    with pytest.raises(NotHomogeneousError):
        jacobian_ideal(P("x + 1"))
    print("[PASS] Jacobian ideal of two lines is (x, y)")

    affine = make_ring(("u", "v"))
    staircase = GradedIdeal.of([parse_polynomial("u^2", affine), parse_polynomial("v^3", affine)], affine)
    assert affine_quotient_dimension(staircase) == 6
    print("[PASS] k[u,v]/(u^2, v^3) has dimension 6")

    points = singular_points_ideal(arrangement(["x", "y"]))
    assert points.contains(P("x")) and points.contains(P("y"))
    assert projective_degree(points) == 1
    print("[PASS] Two lines meet in (0:0:1)")

    points = singular_points_ideal(arrangement(A3))
    for point in [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)]:
        assert all(not g(*point) for g in points.generators)
    assert not points.contains(P("x*y*z"))
    print("[PASS] A3 points ideal vanishes at its 7 singular points")

    assert is_quasihomogeneous_everywhere(arrangement(A3))
    assert not is_quasihomogeneous_everywhere(Arrangement.of([P("x^5 + y^5 + x^2*y^2*z")]))
    union = arrangement_union(arrangement(["x", "y"]), P("z"))
    assert union.degree == 3
    assert union.components[-1] == P("z")
    print("[PASS] Quasihomogeneity and unions")
    print()


def test_reflection_profiles():
    """Totals for the A3 and B3 reflection arrangements."""
    print("=== Testing Singularity Profiles ===")
    profile = singularity_profile(arrangement(A3))
    assert profile.mu_total == 19
    assert profile.tau_total == 19
    assert profile.quasihomogeneous_all
    assert profile.sing_point_count == 7
    assert projective_degree(profile.points_ideal) == 7
    print("[PASS] A3: mu = tau = 19 at 7 points")

    profile = singularity_profile(arrangement(B3))
    assert profile.mu_total == 49
    assert profile.tau_total == 49
    assert profile.sing_point_count == 13
    print("[PASS] B3: mu = tau = 49 at 13 points")

    assert tjurina_total_projective(arrangement(A3)) == 19
    print("[PASS] Projective Jacobian scheme has degree tau")
    print()


def test_chart_independence():
    """The totals do not depend on the chart seed."""
    print("=== Testing Chart Seeds ===")
    a3 = arrangement(A3)
    totals = set()
    for seed in (1, 2, 7, 2024):
        chart = generic_chart(a3.product, seed)
        assert chart_failure(a3.product, chart.change) is None
        totals.add((milnor_total(a3, chart), tjurina_total(a3, chart)))
    assert totals == {(19, 19)}
    print("[PASS] Same totals for four seeds")

    assert chart_failure(P("x*z"), ((1, 0, 0), (0, 1, 0), (0, 0, 1))) is not None
    print("[PASS] The identity chart is rejected when a point sits at infinity")
    print()


_LINEAR = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
_QUADRATIC = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]

_curve = st.one_of(
    st.lists(st.integers(-2, 2), min_size=3, max_size=3).map(lambda c: (_LINEAR, c)),
    st.lists(st.integers(-2, 2), min_size=6, max_size=6).map(lambda c: (_QUADRATIC, c)),
)


def _form(monomials, coefficients):
    p = R.zero
    for monom, coeff in zip(monomials, coefficients):
        p += R.term_new(monom, R.domain.convert(coeff))
    return p


@settings(max_examples=20, deadline=None)
@given(st.lists(_curve, min_size=1, max_size=4))
def test_chart_independence_property(curves):
    """mu and tau totals agree for two seeds on small arrangements of lines and conics."""
    forms = [_form(*curve) for curve in curves]
    assume(all(forms))
    try:
        arr = Arrangement.of(forms)
    except CommonComponentError:
        assume(False)
    assume(is_reduced(arr.product))
    first = generic_chart(arr.product, seed=1)
    second = generic_chart(arr.product, seed=2)
    assert milnor_total(arr, first) == milnor_total(arr, second)
    assert tjurina_total(arr, first) == tjurina_total(arr, second)


def test_non_quasihomogeneous_point():
    """x^5 + y^5 + x^2 y^2 has mu = 11 and tau = 10 at the origin."""
    print("=== Testing Non-Quasihomogeneous Singularity ===")
    curve = Arrangement.of([P("x^5 + y^5 + x^2*y^2*z")])
    profile = singularity_profile(curve)
    assert profile.mu_total == 11
    assert profile.tau_total == 10
    assert not profile.quasihomogeneous_all
    assert profile.sing_point_count == 1
    print("[PASS] mu = 11, tau = 10, one point")

    # brute force in the original chart: the only singular point is the origin
    q = dehomogenize(curve.product, 2)
    ring = q.ring
    tjurina = GradedIdeal.of([q, differentiate(q, 0), differentiate(q, 1)], ring)
    assert len(standard_monomials(tjurina)) == 10
    print("[PASS] Staircase of (q, q_x, q_y) has 10 monomials")

    # adding m^12 cuts away every point but the origin without changing the local lengths
    power = [ring.term_new(m, ring.domain.one) for m in monomials_of_degree(2, 12)]
    milnor = GradedIdeal.of([differentiate(q, 0), differentiate(q, 1)] + power, ring)
    local_tjurina = GradedIdeal.of(list(tjurina.generators) + power, ring)
    assert len(standard_monomials(milnor)) == 11
    assert len(standard_monomials(local_tjurina)) == 10
    print("[PASS] Local staircases give mu = 11 and tau = 10")
    print()


def test_prime_field_profiles():
    """Same totals and point counts over GF(32003) as over QQ."""
    print("=== Testing Prime Field Profiles ===")
    field = make_ring(prime=32003)
    a3 = Arrangement.of([parse_polynomial(t, field) for t in A3])
    profile = singularity_profile(a3)
    assert (profile.mu_total, profile.tau_total, profile.sing_point_count) == (19, 19, 7)
    assert projective_degree(profile.points_ideal) == 7
    print("[PASS] A3 over GF(32003): mu = tau = 19 at 7 points")

    b3 = Arrangement.of([parse_polynomial(t, field) for t in B3])
    profile = singularity_profile(b3)
    assert (profile.mu_total, profile.tau_total, profile.sing_point_count) == (49, 49, 13)
    print("[PASS] B3 over GF(32003): mu = tau = 49 at 13 points")

    small = make_ring(prime=7)
    eliminant = parse_polynomial("(x - 1)^3*(x + 2)", small)
    assert square_free_part(eliminant, 0) == parse_polynomial("(x - 1)*(x + 2)", small)
    assert square_free_part(parse_polynomial("y^14", small), 1) == parse_polynomial("y", small)
    assert square_free_part(P("(z^2 - 2)^2"), 2) == P("z^2 - 2")
    print("[PASS] Square-free parts of eliminants over GF(7) and QQ")
    print()


def test_intersection_uses_engine_options():
    print("=== Testing Engine Options in Intersections ===")
    a3 = arrangement(A3)
    conic = P("x^2 + y^2 + z^2")
    chart = union_chart(conic, a3)
    options = EngineOptions(pair_limit=10**6)
    seen = []
    original = singcurve.is_artinian

    def recording(ideal, opts=DEFAULT_OPTIONS):
        seen.append(opts)
        return original(ideal, opts)

    singcurve.is_artinian = recording
    try:
        assert bezout_total(conic, a3, chart=chart, options=options) == 12
    finally:
        singcurve.is_artinian = original
    assert seen and all(opts is options for opts in seen)
    print("[PASS] The pair limit reaches the intersection ideal")
    print()


def test_intersections():
    print("=== Testing Intersections ===")
    lines = arrangement(["x", "y"])
    assert bezout_total(P("z"), lines) == 2
    assert reduced_point_count(P("z"), lines) == 2
    print("[PASS] z meets xy in two points")

    a3 = arrangement(A3)
    conic = P("x^2 + y^2 + z^2")
    assert bezout_total(conic, a3) == 12
    print("[PASS] Bezout for a conic and six lines")

    tangent = arrangement(["y*z - x^2"])
    assert bezout_total(P("y"), tangent) == 2
    assert reduced_point_count(P("y"), tangent) == 1
    print("[PASS] Tangent line counts with multiplicity two")

    chart = generic_chart(a3.product)
    with pytest.raises(CommonComponentError):
        bezout_total(P("x*(x + y + z)"), a3, chart=chart)
    print("[PASS] Shared components are rejected")
    print()


def test_milnor_delta():
    """mu(A + C) - mu(A) = 2mn - k when C passes through no singular point of A transversally."""
    print("=== Testing Milnor Delta ===")
    delta = milnor_union_delta(P("z"), arrangement(["x", "y"]))
    assert delta.mu_union == 3
    assert delta.mu_arrangement == 1
    assert (delta.m, delta.n, delta.k) == (2, 1, 2)
    assert delta.left == delta.right == 2
    assert delta.holds
    print("[PASS] Coordinate triangle from two lines")

    delta = milnor_union_delta(P("y"), arrangement(["x"]))
    assert (delta.mu_union, delta.mu_arrangement, delta.k) == (1, 0, 1)
    assert delta.holds
    print("[PASS] Two lines from one")
    print()


def run_all_tests():
    """Run all singcurve tests."""
    print("Running Singular Curve Tests")
    print("=" * 50)
    print()

    try:
        test_arrangement_construction()
        test_smoothness_and_reducedness()
        test_ideals_and_points()
        test_reflection_profiles()
        test_chart_independence()
        test_chart_independence_property()
        test_non_quasihomogeneous_point()
        test_prime_field_profiles()
        test_intersection_uses_engine_options()
        test_intersections()
        test_milnor_delta()
        print("=" * 50)
        print("[SUCCESS] All singcurve tests passed!")
        return True
    except AssertionError as e:
        print(f"\n[FAIL] Test failed: {e}")
        return False
    except Exception as e:
        print(f"\n[ERROR] Unexpected error: {e}")
        import traceback

        traceback.print_exc()
        return False


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
