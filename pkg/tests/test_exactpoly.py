from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import QQ, Poly, Rational

from real_conic_bundles.errors import InvalidInput, PoleAtSample
from real_conic_bundles.exactpoly import (
    INFINITY,
    Z,
    Polynomial,
    RationalFunction,
    count_real_roots,
    gcd,
    isolate_real_roots,
    is_squarefree,
    sign_on_circle,
    squarefree_part,
    sturm_sequence,
    to_rational,
    validate_g,
)
from real_conic_bundles.oracle import confirm_root_count


def P(*coefficients) -> Polynomial:
    return Polynomial(coefficients)


@pytest.mark.parametrize(
    "value,expected",
    [(3, Fraction(3)), ("-7", Fraction(-7)), ("3/4", Fraction(3, 4)), (" 5 ", Fraction(5))],
)
def test_to_rational_accepts_exact_literals(value, expected):
    assert to_rational(value) == expected


@pytest.mark.parametrize("value", [1.5, "1.5", "1e3", True, "x", "1/0", None])
def test_to_rational_refuses_inexact_or_malformed(value):
    with pytest.raises(InvalidInput):
        to_rational(value)


def test_polynomial_normalizes_and_prints():
    p = P("-2", 0, 1, 0, 0)
    assert p.coefficients == (Fraction(-2), Fraction(0), Fraction(1))
    assert p.degree == 2
    assert str(p) == "z^2 - 2"
    assert P().degree == -1
    assert str(P(0, "-1/2", 0, 3)) == "3*z^3 - 1/2*z"


def test_polynomial_is_backed_by_sympy():
    p = P("-1/2", 0, 1)
    assert p.poly == Poly(Z**2 - Rational(1, 2), Z, domain=QQ)
    assert Polynomial.from_sympy(p.poly * p.poly) == p * p
    assert Polynomial.from_sympy(Poly(0, Z, domain=QQ)).is_zero


def test_polynomial_arithmetic():
    p = Polynomial.from_roots([1, -1])
    assert p == P(-1, 0, 1)
    q, r = divmod(P(-1, 0, 0, 1), P(-1, 1))
    assert q == P(1, 1, 1) and r.is_zero
    assert (p * 2 - p) == p
    assert p(3) == 8
    with pytest.raises(InvalidInput):
        divmod(p, P())


@pytest.mark.parametrize(
    "p,expected",
    [
        (Polynomial.from_roots([1, 1]), P(-1, 1)),
        (P(-2, 0, 1), P(-2, 0, 1)),
        (P(1, 0, 1) * P(1, 0, 1) * P(-3, 1), P(1, 0, 1) * P(-3, 1)),
        (P(5), P(1)),
    ],
)
def test_squarefree_part(p, expected):
    assert squarefree_part(p) == expected.monic()


def test_squarefree_part_of_zero():
    with pytest.raises(InvalidInput):
        squarefree_part(P())


def test_gcd_is_monic():
    assert gcd(P(-2, 2) * P(3, 1), P(-1, 1) * P(1, 0, 1)) == P(-1, 1)


@pytest.mark.parametrize(
    "p,interval,expected",
    [
        (P(-2, 0, 1), (0, 2), 1),
        (P(1, 0, 1), (None, None), 0),
        (P(0, -1, 0, 1), (None, None), 3),
        (P(0, -1, 0, 1), (-1, 1), 1),
        (P(0, -1, 0, 1), (0, None), 1),
        (P(5), (None, None), 0),
    ],
)
def test_count_real_roots(p, interval, expected):
    assert count_real_roots(p, interval) == expected


def test_count_real_roots_needs_squarefree_input():
    with pytest.raises(InvalidInput):
        count_real_roots(Polynomial.from_roots([1, 1]))
    with pytest.raises(InvalidInput):
        count_real_roots(P(-2, 0, 1), (2, 0))


def test_sturm_sequence_starts_with_p_and_derivative():
    p = P(0, -1, 0, 1)
    seq = sturm_sequence(p)
    assert seq[0] == p and seq[1] == p.derivative()
    assert seq[-1].degree == 0


@pytest.mark.parametrize(
    "p,roots",
    [
        (P(-4, 0, 1), [-2, 2]),
        (P(4, 0, -5, 0, 1), [-2, -1, 1, 2]),
        (P(5), []),
        (P(0, -2, 0, 1), [None, 0, None]),
    ],
)
def test_isolate_real_roots(p, roots):
    intervals = isolate_real_roots(p)
    assert len(intervals) == len(roots)
    for iv, r in zip(intervals, roots):
        assert iv.width <= Fraction(1, 2**20)
        assert p.sign_at(iv.low) * p.sign_at(iv.high) == -1
        if r is not None:
            assert iv.contains(r)
    assert all(a.high <= b.low for a, b in zip(intervals, intervals[1:]))


def test_rational_roots_are_kept_exactly():
    zero, two = isolate_real_roots(P(0, -2, 1))
    assert zero.root == 0 and zero.approximate() == 0.0
    assert zero.contains(0) and two.contains(2)
    assert zero.high <= two.low
    assert all(iv.root is None for iv in isolate_real_roots(P(-2, 0, 1)))


def test_isolation_respects_refine_bits():
    (iv,) = isolate_real_roots(P(-2, 1), refine_bits=4)
    assert iv.width <= Fraction(1, 16) and iv.contains(2)


def test_sign_on_circle(worked_g):
    assert sign_on_circle(worked_g, 0) == 1
    assert sign_on_circle(worked_g, "3/2") == -1
    assert sign_on_circle(worked_g, INFINITY) == 1
    assert sign_on_circle(worked_g, 1) == 0


def test_sign_on_circle_at_poles():
    with pytest.raises(PoleAtSample):
        sign_on_circle(RationalFunction.from_coefficients((1,), (0, 1)), 0)
    with pytest.raises(PoleAtSample):
        sign_on_circle(RationalFunction.from_coefficients((0, 0, 1)), INFINITY)
    assert sign_on_circle(RationalFunction.from_coefficients((1,), (1, 0, 1)), INFINITY) == 0


def test_rational_function_cancels_common_factors():
    # (z^2 - 1) / (2 (z - 1)(z - 3))
    g = RationalFunction(P(-1, 0, 1), P(6, -8, 2))
    assert g.numerator == P("1/2", "1/2")
    assert g.denominator == P(-3, 1)
    with pytest.raises(InvalidInput):
        RationalFunction(P(1), P())


def test_validate_worked_g(worked_g):
    v = validate_g(worked_g)
    assert v.is_valid and v.pole_free and v.simple_real_zeros
    assert v.zero_count == 4 and v.order_at_infinity == 0
    assert not v.zero_at_infinity


@pytest.mark.parametrize(
    "g,pole_free,simple",
    [
        (RationalFunction.from_coefficients((1, -2, 1), (1, 0, 1)), True, False),
        (RationalFunction.from_coefficients((1,), (0, 1)), False, True),
        (RationalFunction.from_coefficients((1, 0, 1)), False, True),
        (RationalFunction.from_coefficients((1,), (1, 0, 1)), True, False),
    ],
)
def test_validate_g_failures(g, pole_free, simple):
    v = validate_g(g)
    assert (v.pole_free, v.simple_real_zeros) == (pole_free, simple)
    assert v.failures()


def test_validate_g_counts_simple_zero_at_infinity():
    # z / (z^2 + 1): zeros at 0 and infinity
    v = validate_g(RationalFunction.from_coefficients((0, 1), (1, 0, 1)))
    assert v.is_valid and v.zero_count == 2 and v.zero_at_infinity


def test_validate_g_rejects_zero():
    with pytest.raises(InvalidInput):
        validate_g(RationalFunction(P()))


@st.composite
def squarefree_polynomials(draw):
    roots = draw(st.lists(st.integers(-20, 20), unique=True, max_size=8))
    shifts = draw(st.lists(st.integers(1, 20), unique=True, max_size=(12 - len(roots)) // 2))
    leading = draw(st.integers(-5, 5).filter(bool))
    p = Polynomial.from_roots(roots, leading)
    for c in shifts:
        p = p * Polynomial((c, 0, 1))
    return p, len(roots)


@settings(max_examples=200, deadline=None)
@given(squarefree_polynomials())
def test_sturm_count_matches_isolation_and_oracle(case):
    p, real_roots = case
    assert is_squarefree(p)
    assert count_real_roots(p) == real_roots
    assert len(isolate_real_roots(p)) == real_roots
    if p.degree > 0:
        assert confirm_root_count(p, samples=1024).count == real_roots


@st.composite
def integer_polynomials(draw, max_degree=12):
    lower = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=max_degree))
    leading = draw(st.integers(-5, 5).filter(bool))
    return Polynomial((*lower, leading))


def sign_variations(seq, x) -> int:
    signs = [s for s in (q.sign_at(x) for q in seq) if s]
    return sum(a != b for a, b in zip(signs, signs[1:]))


@settings(max_examples=200, deadline=None)
@given(integer_polynomials().filter(is_squarefree))
def test_isolation_on_small_integer_coefficients(p):
    intervals = isolate_real_roots(p)
    assert count_real_roots(p) == len(intervals)
    for iv in intervals:
        assert p.sign_at(iv.low) * p.sign_at(iv.high) == -1
        assert count_real_roots(p, (iv.low, iv.high)) == 1
    assert all(a.high <= b.low for a, b in zip(intervals, intervals[1:]))


@settings(max_examples=200, deadline=None)
@given(integer_polynomials().filter(is_squarefree))
def test_grid_oracle_agrees_when_roots_are_separated(p):
    roots = [iv.approximate() for iv in isolate_real_roots(p)]
    assume(all(b - a > 1e-3 for a, b in zip(roots, roots[1:])))
    assert confirm_root_count(p, samples=1024).count == count_real_roots(p)


@settings(max_examples=100, deadline=None)
@given(
    integer_polynomials().filter(is_squarefree),
    st.lists(
        st.fractions(min_value=-8, max_value=8, max_denominator=16),
        min_size=1,
        max_size=4,
        unique=True,
    ),
)
def test_sturm_counts_add_up_across_a_partition(p, cuts):
    cuts = sorted(cuts)
    points = [None, *cuts, None]
    pieces = sum(count_real_roots(p, (a, b)) for a, b in zip(points, points[1:]))
    assert pieces + sum(p(c) == 0 for c in cuts) == count_real_roots(p)

    seq = sturm_sequence(p)
    for a, b in zip(cuts, cuts[1:]):
        # V(a) - V(b) counts the roots in (a, b]
        assert sign_variations(seq, a) - sign_variations(seq, b) == (
            count_real_roots(p, (a, b)) + (p(b) == 0)
        )


@settings(max_examples=100, deadline=None)
@given(
    integer_polynomials(max_degree=6),
    st.integers(1, 3),
    st.integers(-5, 5).filter(bool),
)
def test_squarefree_part_is_idempotent(p, power, factor):
    s = squarefree_part(p)
    assert is_squarefree(s)
    assert squarefree_part(s) == s
    assert squarefree_part(p * factor) == s
    q = p
    for _ in range(power - 1):
        q = q * p
    assert squarefree_part(q) == s
