"""Polynomial parsing, certified roots, and Mahler measure variants."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kronrec.errors import DomainError, ParseError
from kronrec.poly_core import (
    IntPolynomial,
    conjugate,
    mahler_measure,
    parse_polynomial,
    roots,
    squarefree_factors,
)

GOLDEN = (1 + math.sqrt(5)) / 2
# classic numeric oracle for the degree-10 measure record holder
LEHMER = IntPolynomial((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))
LEHMER_MEASURE = 1.17628081825991750654


def poly(*cs: int) -> IntPolynomial:
    return IntPolynomial(tuple(cs))


def poly_mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    out = [0] * (a.degree + b.degree + 1)
    for i, ca in enumerate(a.coeffs):
        for j, cb in enumerate(b.coeffs):
            out[i + j] += ca * cb
    return IntPolynomial(tuple(out))


@st.composite
def small_polys(draw, max_degree=4, max_coeff=9, nonzero_constant=False):
    degree = draw(st.integers(1, max_degree))
    coeffs = [draw(st.integers(-max_coeff, max_coeff)) for _ in range(degree)]
    coeffs.append(draw(st.integers(1, max_coeff)) * draw(st.sampled_from((1, -1))))
    if nonzero_constant and coeffs[0] == 0:
        coeffs[0] = draw(st.integers(1, max_coeff))
    return IntPolynomial(tuple(coeffs))


# ----- parsing and basic structure -----


def test_parse_ascending_list():
    p = parse_polynomial("3,-2,-9,-3,9")
    assert p.coeffs == (3, -2, -9, -3, 9)
    assert p.degree == 4
    assert p.leading_coefficient == 9
    assert p.constant_coefficient == 3


def test_parse_allows_whitespace_and_strips_trailing_zeros():
    assert parse_polynomial(" 1 , 2 , 3 ").coeffs == (1, 2, 3)
    assert parse_polynomial("1,2,0,0").coeffs == (1, 2)


@pytest.mark.parametrize("bad", ["", "   ", "1,,2", "1,a", "1.5,2", "0,0,0"])
def test_parse_rejects_bad_input(bad):
    with pytest.raises(ParseError):
        parse_polynomial(bad)


def test_constructor_rejects_zero_leading_coefficient():
    with pytest.raises(DomainError):
        IntPolynomial((1, 0))
    with pytest.raises(DomainError):
        IntPolynomial(())


def test_primitivity_and_content():
    assert poly(3, -2, -9, -3, 9).is_primitive
    assert not poly(2, 4, 6).is_primitive
    assert poly(2, 4, 6).content == 2


def test_conjugate_reverses_and_involutes():
    p = poly(3, -2, -9, -3, 9)
    assert conjugate(p).coeffs == (9, -3, -9, -2, 3)
    assert conjugate(conjugate(p)) == p
    with pytest.raises(DomainError):
        conjugate(poly(0, 1))


def test_string_rendering():
    assert str(poly(-2, 1)) == "x - 2"
    assert str(poly(3, -2, -9, -3, 9)) == "9x^4 - 3x^3 - 9x^2 - 2x + 3"


# ----- square-free decomposition -----


def test_squarefree_oracle_handmade():
    # (x - 1)^2 (x + 2) = x^3 - 3x + 2
    fs = dict((tuple(f), m) for f, m in squarefree_factors(poly(2, -3, 0, 1)))
    assert fs == {(2, 1): 1, (-1, 1): 2}


def test_squarefree_total_degree():
    p = poly(-4, 12, -9, 2)  # (x-2)^2 (2x-1)
    fs = squarefree_factors(p)
    assert sum(len(f) - 1 for f, m in fs for _ in range(m)) == p.degree


# ----- certified roots -----


def test_roots_quadratic_oracle():
    rs = roots(poly(2, -3, 1))  # (x-1)(x-2)
    values = sorted(r.value.real for r in rs.roots)
    assert values == [1.0, 2.0]
    assert all(r.radius < 1e-12 and r.multiplicity == 1 for r in rs.roots)


def test_roots_pure_imaginary_pair_is_exactly_conjugate():
    rs = roots(poly(1, 0, 1))
    a, b = rs.roots
    assert a.value == b.value.conjugate()
    assert abs(a.value.imag) == 1.0 or abs(abs(a.value.imag) - 1.0) <= a.radius


def test_roots_multiplicities_from_exact_decomposition():
    rs = roots(poly(-4, 12, -9, 2))  # (x-2)^2 (2x-1)
    by_value = {round(r.value.real, 6): r.multiplicity for r in rs.roots}
    assert by_value == {2.0: 2, 0.5: 1}
    assert rs.total_multiplicity == 3


def test_roots_zero_root_multiplicity():
    rs = roots(poly(0, 0, -1, 1))  # x^2 (x - 1)
    zero = next(r for r in rs.roots if r.value == 0)
    assert zero.multiplicity == 2 and zero.radius == 0.0


def test_roots_irrational_enclosure():
    rs = roots(poly(-2, 0, 1))
    for r in rs.roots:
        assert abs(abs(r.value.real) - math.sqrt(2)) <= r.radius + 1e-15
    assert rs.total_multiplicity == 2


def test_roots_cubic_conjugate_symmetry():
    rs = roots(poly(-1, -1, 0, 1))  # x^3 - x - 1
    complex_roots = [r for r in rs.roots if r.value.imag != 0]
    assert len(complex_roots) == 2
    a, b = complex_roots
    assert a.value == b.value.conjugate()


def test_roots_tight_radius_request():
    rs = roots(poly(-1, -1, 1), target_radius=1e-13)
    assert all(r.radius <= 1e-13 for r in rs.roots)
    with pytest.raises(DomainError):
        roots(poly(-1, -1, 1), target_radius=1e-20)


@settings(deadline=None, max_examples=40)
@given(small_polys())
def test_roots_reconstruct_polynomial(p):
    rs = roots(p)
    expanded = [complex(1)]
    for enc in rs.roots:
        for _ in range(enc.multiplicity):
            nxt = [0j] * (len(expanded) + 1)
            for i, c in enumerate(expanded):
                nxt[i + 1] += c
                nxt[i] -= enc.value * c
            expanded = nxt
    expanded = [c * p.leading_coefficient for c in expanded]
    scale = max(1.0, max(abs(c) for c in p.coeffs))
    for got, want in zip(expanded, p.coeffs):
        assert abs(got - want) <= 1e-6 * scale


@settings(deadline=None, max_examples=40)
@given(small_polys())
def test_roots_multiplicity_sums_to_degree(p):
    assert roots(p).total_multiplicity == p.degree


# ----- Mahler measure -----


def test_mahler_hand_values():
    assert mahler_measure(poly(-2, 1)).value == pytest.approx(2.0, abs=1e-12)
    assert mahler_measure(poly(-3, 2)).value == pytest.approx(3.0, abs=1e-12)
    assert mahler_measure(poly(-1, -1, 1)).value == pytest.approx(GOLDEN, abs=1e-12)


def test_mahler_variant_hand_values():
    # A = x - 2: M(A(x/2)) = 2, 2^-1 M(A(2x)) = 1
    assert mahler_measure(poly(-2, 1), "half_scaled").value == pytest.approx(2.0, abs=1e-12)
    assert mahler_measure(poly(-2, 1), "double_scaled").value == pytest.approx(1.0, abs=1e-12)


def test_mahler_conjugate_variant_matches_plain():
    # the measure is invariant under coefficient reversal
    for cs in [(-2, 1), (-1, -1, 1), (3, -2, -9, -3, 9)]:
        a = mahler_measure(poly(*cs), "plain")
        b = mahler_measure(poly(*cs), "conjugate")
        assert abs(a.value - b.value) <= a.error + b.error + 1e-12


def test_mahler_cyclotomic_is_one():
    for cs in [(1, 1), (1, 0, 1), (1, 1, 1), (1, 0, 0, 0, 1), (1, -1, 1)]:
        m = mahler_measure(poly(*cs))
        assert abs(m.value - 1.0) <= m.error + 1e-12


def test_mahler_lehmer_oracle():
    m = mahler_measure(LEHMER)
    assert abs(m.value - LEHMER_MEASURE) < 1e-9


def test_mahler_errors():
    with pytest.raises(DomainError):
        mahler_measure(poly(-2, 1), "bogus")
    with pytest.raises(DomainError):
        mahler_measure(poly(5))
    with pytest.raises(DomainError):
        mahler_measure(poly(0, 1), "conjugate")


@settings(deadline=None, max_examples=30)
@given(small_polys(max_degree=3, nonzero_constant=True))
def test_mahler_double_scaled_equals_half_scaled_of_conjugate(p):
    a = mahler_measure(p, "double_scaled")
    b = mahler_measure(conjugate(p), "half_scaled")
    assert abs(a.value - b.value) <= a.error + b.error + 1e-10


@settings(deadline=None, max_examples=30)
@given(small_polys(max_degree=3), small_polys(max_degree=3))
def test_mahler_is_multiplicative(a, b):
    ma = mahler_measure(a)
    mb = mahler_measure(b)
    mab = mahler_measure(poly_mul(a, b))
    assert mab.value == pytest.approx(ma.value * mb.value, rel=1e-8, abs=1e-8)


@settings(deadline=None, max_examples=40)
@given(small_polys())
def test_mahler_kronecker_lower_bound(p):
    m = mahler_measure(p)
    assert m.value >= 1.0 - m.error - 1e-12


@settings(deadline=None, max_examples=30)
@given(small_polys())
def test_mahler_coefficient_bound(p):
    m = mahler_measure(p)
    d = p.degree
    for i, c in enumerate(p.coeffs):
        assert abs(c) <= math.comb(d, i) * (m.value + m.error) + 1e-9
