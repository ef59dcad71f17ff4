"""Exact rational linear algebra: valuations, HNF, SNF, kernels, solves."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kronrec.errors import DomainError, SingularMatrixError
from kronrec.exact_linalg import (
    PADIC_INFINITY,
    det_exact,
    hnf,
    identity_matrix,
    integer_kernel,
    invert_exact,
    is_prime,
    mat_mul,
    p_adic_valuation,
    snf,
    solve_exact,
    transpose,
)

small_ints = st.integers(-30, 30)


def int_matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


# ----- primality and valuations -----


def test_is_prime_small():
    primes = [2, 3, 5, 7, 11, 13, 97, 7919]
    composites = [0, 1, 4, 9, 91, 561, 7917]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in composites)


def test_valuation_hand_values():
    assert p_adic_valuation(729, 3) == 6
    assert p_adic_valuation(Fraction(729, 1078), 3) == 6
    assert p_adic_valuation(Fraction(1, 9), 3) == -2
    assert p_adic_valuation(10, 5) == 1
    assert p_adic_valuation(0, 7) == PADIC_INFINITY
    assert p_adic_valuation(Fraction(0), 2) == PADIC_INFINITY


def test_valuation_requires_prime():
    with pytest.raises(DomainError):
        p_adic_valuation(8, 6)


@settings(deadline=None, max_examples=60)
@given(st.fractions(), st.fractions(), st.sampled_from([2, 3, 5, 7]))
def test_valuation_is_additive_and_ultrametric(x, y, p):
    vx = p_adic_valuation(x, p)
    vy = p_adic_valuation(y, p)
    assert p_adic_valuation(x * y, p) == vx + vy
    vsum = p_adic_valuation(x + y, p)
    assert vsum >= min(vx, vy)
    if vx != vy:
        assert vsum == min(vx, vy)


# ----- HNF -----


def test_hnf_frozen_example():
    h, u = hnf([[2, 4], [6, 8]])
    assert h == [[2, 4], [0, 4]]
    assert mat_mul(u, [[2, 4], [6, 8]]) == h
    assert abs(det_exact(u)) == 1


def test_hnf_band_example():
    a = [[-3, 2, 0], [0, -3, 2]]
    h, u = hnf(a)
    assert h == [[3, -2, 0], [0, 3, -2]]
    assert abs(det_exact([[h[0][0], h[0][1]], [h[1][0], h[1][1]]])) == 9
    assert mat_mul(u, a) == h


@settings(deadline=None, max_examples=60)
@given(int_matrices())
def test_hnf_properties(a):
    h, u = hnf(a)
    assert mat_mul(u, a) == h
    assert abs(det_exact(u)) == 1
    # echelon with positive pivots, entries above bounded by the pivot
    pivots = []
    for row in h:
        nz = [j for j, x in enumerate(row) if x != 0]
        if nz:
            pivots.append(nz[0])
    assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
    for r, row in enumerate(h):
        nz = [j for j, x in enumerate(row) if x != 0]
        if not nz:
            continue
        piv_col = nz[0]
        assert row[piv_col] > 0
        for above in range(r):
            assert abs(h[above][piv_col]) <= row[piv_col]
    # canonicity: idempotent
    h2, _ = hnf(h)
    assert h2 == h


# ----- SNF -----


def test_snf_frozen_example():
    assert snf([[2, 4], [6, 8]]) == (2, 4)


def test_snf_identity_and_zero():
    assert snf(identity_matrix(3)) == (1, 1, 1)
    assert snf([[0]]) == (0,)


@settings(deadline=None, max_examples=60)
@given(int_matrices())
def test_snf_divisibility_chain(a):
    d = snf(a)
    for x, y in zip(d, d[1:]):
        if x == 0:
            assert y == 0
        else:
            assert y % x == 0
    assert all(x >= 0 for x in d)


@settings(deadline=None, max_examples=40)
@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_product_matches_determinant(a):
    d = snf(a)
    prod = 1
    for x in d:
        prod *= x
    assert prod == abs(det_exact(a))


# ----- kernels -----


def test_integer_kernel_frozen_examples():
    assert integer_kernel([[-2, 1, 0], [0, -2, 1]]) == [[1, 2, 4]]
    assert integer_kernel([[-3, 2, 0], [0, -3, 2]]) == [[4, 6, 9]]


def test_integer_kernel_full_rank_is_empty():
    assert integer_kernel(identity_matrix(3)) == []


@settings(deadline=None, max_examples=60)
@given(int_matrices())
def test_integer_kernel_annihilates_and_is_saturated(a):
    basis = integer_kernel(a)
    for v in basis:
        assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in a)
    if basis:
        assert all(x == 1 for x in snf(basis))


# ----- determinants and solves -----


def test_det_hand_values():
    assert det_exact([[5]]) == 5
    assert det_exact([[1, 2], [3, 4]]) == -2
    assert det_exact([[Fraction(1, 2), 0], [7, Fraction(2, 3)]]) == Fraction(1, 3)
    assert det_exact([[1, 2], [2, 4]]) == 0


def test_solve_exact_round_trip():
    a = [[2, 1], [1, 3]]
    b = [[1], [0]]
    x = solve_exact(a, b)
    assert x == [[Fraction(3, 5)], [Fraction(-1, 5)]]
    with pytest.raises(SingularMatrixError):
        solve_exact([[1, 2], [2, 4]], b)


def test_invert_exact():
    a = [[1, 2], [3, 4]]
    inv = invert_exact(a)
    assert mat_mul(a, inv) == [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]


@settings(deadline=None, max_examples=50)
@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=3, max_size=3))
def test_solve_consistency_with_det(a):
    d = det_exact(a)
    if d == 0:
        with pytest.raises(SingularMatrixError):
            solve_exact(a, [[1], [0], [0]])
    else:
        x = solve_exact(a, identity_matrix(3))
        assert mat_mul(a, x) == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


def test_transpose_shape():
    assert transpose([[1, 2, 3], [4, 5, 6]]) == [[1, 4], [2, 5], [3, 6]]
