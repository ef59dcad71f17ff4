"""Band/triangular recurrence matrices and their factorization identities."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kronrec.errors import DomainError
from kronrec.exact_linalg import integer_kernel, invert_exact
from kronrec.poly_core import IntPolynomial
from kronrec.recurrence_matrices import (
    band_matrix,
    recurrence_extend,
    tri_matrix,
    verify_factorization,
)


def poly(*cs: int) -> IntPolynomial:
    return IntPolynomial(tuple(cs))


@st.composite
def recurrence_polys(draw, max_degree=3):
    degree = draw(st.integers(1, max_degree))
    coeffs = [draw(st.integers(1, 9)) * draw(st.sampled_from((1, -1)))]
    coeffs += [draw(st.integers(-9, 9)) for _ in range(degree - 1)]
    coeffs.append(draw(st.integers(1, 9)) * draw(st.sampled_from((1, -1))))
    return IntPolynomial(tuple(coeffs))


def test_band_matrix_hand_example():
    bm = band_matrix(poly(-2, 1), 2)
    assert bm.rows == ((-2, 1, 0), (0, -2, 1))
    assert bm.shape == (2, 3)


def test_band_matrix_requires_nonzero_constant():
    with pytest.raises(DomainError):
        band_matrix(poly(0, 0, 1), 2)


def test_tri_matrix_hand_example():
    tm = tri_matrix(poly(-2, 1), 3)
    assert tm.rows == ((1, 0, 0), (-2, 1, 0), (0, -2, 1))


def test_tri_matrix_embeds_band_in_last_rows():
    a = poly(3, -2, -9, -3, 9)
    m = 7
    tm = tri_matrix(a, m)
    bm = band_matrix(a, m - a.degree)
    assert tm.rows[a.degree :] == bm.rows
    for i in range(m):
        assert tm.rows[i][i] == a.leading_coefficient
        for j in range(i + 1, m):
            assert tm.rows[i][j] == 0


def test_recurrence_extend_hand_values():
    assert recurrence_extend(poly(-2, 1), (1,), 4).entries == (1, 2, 4, 8)
    assert recurrence_extend(poly(-3, 2), (1,), 3).entries == (
        Fraction(1),
        Fraction(3, 2),
        Fraction(9, 4),
    )
    got = recurrence_extend(poly(3, -2, -9, -3, 9), (1, 0, 0, 0), 5).entries
    assert got == (1, 0, 0, 0, Fraction(-1, 3))


def test_recurrence_extend_validates_seed_length():
    with pytest.raises(DomainError):
        recurrence_extend(poly(-2, 1), (1, 0), 4)


@settings(deadline=None, max_examples=50)
@given(recurrence_polys(), st.integers(0, 4))
def test_recurrence_rows_annihilated_by_band(a, extra):
    d = a.degree
    m = d + 1 + extra
    seed = [Fraction(i == 0) for i in range(d)]
    vec = recurrence_extend(a, seed, m).entries
    for i in range(m - d):
        assert sum(a.coeffs[j] * vec[i + j] for j in range(d + 1)) == 0
    for x in vec:
        assert a.leading_coefficient ** (m - d) % x.denominator == 0


@settings(deadline=None, max_examples=50)
@given(recurrence_polys(), st.integers(1, 4))
def test_kernel_rows_are_recurrences(a, ell):
    bm = band_matrix(a, ell)
    basis = integer_kernel([list(r) for r in bm.rows])
    assert len(basis) == a.degree
    m = ell + a.degree
    for row in basis:
        rebuilt = recurrence_extend(a, row[: a.degree], m).entries
        assert rebuilt == tuple(Fraction(x) for x in row)


@settings(deadline=None, max_examples=50)
@given(
    recurrence_polys(),
    st.integers(1, 4),
    st.lists(st.integers(-5, 5), min_size=8, max_size=8),
)
def test_band_matrix_acts_as_power_series_multiplication(a, ell, fpad):
    # G = A * F: the band matrix applied to reversed f-coefficients yields
    # the reversed g-coefficients in degrees d..d+ell-1
    d = a.degree
    f = fpad[: d + ell]
    g = [0] * (d + ell + d)
    for i, ca in enumerate(a.coeffs):
        for j, cf in enumerate(f):
            g[i + j] += ca * cf
    rev_f = list(reversed(f))
    bm = band_matrix(a, ell)
    out = [sum(x * y for x, y in zip(row, rev_f)) for row in bm.rows]
    want = [g[d + ell - 1 - i] for i in range(ell)]
    assert out == want


def test_verify_factorization_hand_case():
    # 4x^2 - 9x + 2 = (4x - 8)(x - 1/4)
    a = poly(2, -9, 4)
    assert verify_factorization(a, (-8, 4), (Fraction(-1, 4), 1), 3)
    # wrong factor pair fails the product route
    assert not verify_factorization(a, (-8, 4), (Fraction(1, 4), 1), 3)


def test_verify_factorization_rejects_zero_constant():
    with pytest.raises(DomainError):
        verify_factorization(poly(0, 0, 1), (0, 1), (0, 1), 2)


def test_verify_factorization_trivial_cofactor():
    a = poly(2, -5, 2)
    assert verify_factorization(a, (2, -5, 2), (1,), 2)


def test_tri_inverse_of_linear_factor_is_geometric():
    gamma = Fraction(1, 3)
    m = 4
    rows = [
        [Fraction(1) if i == j else (-gamma if j == i - 1 else Fraction(0)) for j in range(m)]
        for i in range(m)
    ]
    inv = invert_exact(rows)
    for i in range(m):
        for j in range(m):
            want = gamma ** (i - j) if i >= j else Fraction(0)
            assert inv[i][j] == want
