"""Exact rational linear algebra on stdlib Fractions and ints.

Matrices are plain lists of row lists.  Integer-lattice routines (hnf, snf,
integer_kernel) validate integrality; determinant and solve accept Fraction
entries, clear denominators row by row, and run fraction-free Bareiss
elimination so intermediate values stay integral.

HNF convention: row-style echelon, positive pivots, entries above a pivot
reduced to absolute value at most the pivot.  Re-running hnf on its own
output is the identity.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, SingularMatrixError

__all__ = [
    "PADIC_INFINITY",
    "is_prime",
    "p_adic_valuation",
    "hnf",
    "snf",
    "integer_kernel",
    "det_exact",
    "solve_exact",
    "invert_exact",
    "identity_matrix",
    "mat_mul",
    "transpose",
]

PADIC_INFINITY = math.inf

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# deterministic Miller-Rabin witness set, valid below 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n >= _MR_DETERMINISTIC_BOUND:
        import random

        bases = [random.Random(n).randrange(2, n - 1) for _ in range(24)]
    else:
        bases = _MR_BASES
    for a in bases:
        a %= n
        if a < 2:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def p_adic_valuation(x, p: int):
    """v_p of an int or Fraction; v_p(0) is PADIC_INFINITY."""
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"p must be a prime integer, got {p!r}")
    if isinstance(x, int):
        x = Fraction(x)
    if not isinstance(x, Fraction):
        raise DomainError(f"valuation needs int or Fraction, got {type(x).__name__}")
    if x == 0:
        return PADIC_INFINITY
    return _int_valuation(abs(x.numerator), p) - _int_valuation(x.denominator, p)


# ----- matrix plumbing -----


def _copy_int_matrix(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    if not rows:
        raise DomainError("matrix needs at least one row")
    width = len(rows[0])
    out = []
    for r in rows:
        if len(r) != width:
            raise DomainError("ragged matrix")
        row = []
        for x in r:
            if not isinstance(x, int):
                raise DomainError(f"integer matrix expected, got {type(x).__name__}")
            row.append(x)
        out.append(row)
    if width == 0:
        raise DomainError("matrix needs at least one column")
    return out


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if len(a[0]) != len(b):
        raise DomainError("dimension mismatch in mat_mul")
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


# ----- Hermite normal form -----


def hnf(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF with transform: returns (H, U) with U unimodular, U*A = H."""
    h = _copy_int_matrix(rows)
    nr, nc = len(h), len(h[0])
    u = identity_matrix(nr)

    def row_sub(dst: int, src: int, q: int) -> None:
        if q == 0:
            return
        h[dst] = [a - q * b for a, b in zip(h[dst], h[src])]
        u[dst] = [a - q * b for a, b in zip(u[dst], u[src])]

    pr = 0
    for col in range(nc):
        if pr >= nr:
            break
        while True:
            nz = [r for r in range(pr, nr) if h[r][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(h[r][col]))
            base = nz[0]
            for r in nz[1:]:
                row_sub(r, base, h[r][col] // h[base][col])
        nz = [r for r in range(pr, nr) if h[r][col] != 0]
        if not nz:
            continue
        r0 = nz[0]
        if r0 != pr:
            h[pr], h[r0] = h[r0], h[pr]
            u[pr], u[r0] = u[r0], u[pr]
        if h[pr][col] < 0:
            h[pr] = [-x for x in h[pr]]
            u[pr] = [-x for x in u[pr]]
        piv = h[pr][col]
        for r in range(pr):
            e = h[r][col]
            if abs(e) > piv:
                q = (abs(e) - 1) // piv
                row_sub(r, pr, q if e > 0 else -q)
        pr += 1
    return h, u


# ----- Smith normal form -----


def snf(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Elementary divisors d_1 | d_2 | ..., nonnegative, zeros trailing."""
    a = _copy_int_matrix(rows)
    nr, nc = len(a), len(a[0])
    n = min(nr, nc)
    k = 0
    while k < n:
        piv = None
        for i in range(k, nr):
            for j in range(k, nc):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
        dirty = False
        for i in range(k + 1, nr):
            q = a[i][k] // a[k][k]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[k])]
            if a[i][k] != 0:
                dirty = True
        for j in range(k + 1, nc):
            q = a[k][j] // a[k][k]
            if q:
                for row in a:
                    row[j] -= q * row[k]
            if a[k][j] != 0:
                dirty = True
        if dirty:
            continue
        offender = None
        for i in range(k + 1, nr):
            for j in range(k + 1, nc):
                if a[i][j] % a[k][k] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[k] = [x + y for x, y in zip(a[k], a[offender])]
            continue
        k += 1
    diag = [abs(a[i][i]) for i in range(k)] + [0] * (n - k)
    return tuple(diag)


# ----- saturated integer kernel -----


def integer_kernel(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """HNF-reduced basis of the saturated lattice {v integral : A v = 0}.

    Rows of the result are primitive and HNF-normalized; the lattice they span
    is exactly ker(A) intersected with the integer lattice (saturation comes
    for free from the transform-of-HNF construction).
    """
    a = _copy_int_matrix(rows)
    at = transpose(a)
    h, u = hnf(at)
    kernel_rows = [u[r] for r in range(len(h)) if all(x == 0 for x in h[r])]
    if not kernel_rows:
        return []
    kh, _ = hnf(kernel_rows)
    return [row for row in kh if any(x != 0 for x in row)]


# ----- exact determinant and solve -----


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise DomainError(f"exact routines need int or Fraction entries, got {type(x).__name__}")


def _clear_row_denominators(rows: Sequence[Sequence]) -> tuple[list[list[int]], Fraction]:
    """Scale each row by its denominator lcm; returns (integer matrix, product of scales)."""
    out = []
    scale = Fraction(1)
    for r in rows:
        fr = [_to_fraction(x) for x in r]
        l = 1
        for x in fr:
            l = l * x.denominator // math.gcd(l, x.denominator)
        scale *= l
        out.append([int(x * l) for x in fr])
    return out, scale


def det_exact(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DomainError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    a, scale = _clear_row_denominators(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1]) / scale


def solve_exact(a_rows: Sequence[Sequence], b_rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact solution X of A X = B; raises SingularMatrixError when A is singular."""
    n = len(a_rows)
    if any(len(r) != n for r in a_rows):
        raise DomainError("solve needs a square A")
    if len(b_rows) != n:
        raise DomainError("B row count must match A")
    width = len(b_rows[0])
    if any(len(r) != width for r in b_rows):
        raise DomainError("ragged B")
    aug_input = [list(ra) + list(rb) for ra, rb in zip(a_rows, b_rows)]
    a, _ = _clear_row_denominators(aug_input)
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                raise SingularMatrixError("singular matrix in solve_exact")
            a[k], a[swap] = a[swap], a[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + width):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    x = [[Fraction(0)] * width for _ in range(n)]
    for col in range(width):
        for i in reversed(range(n)):
            s = Fraction(a[i][n + col])
            for j in range(i + 1, n):
                s -= a[i][j] * x[j][col]
            if a[i][i] == 0:
                raise SingularMatrixError("singular matrix in solve_exact")
            x[i][col] = s / a[i][i]
    return x


def invert_exact(a_rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return solve_exact(a_rows, identity_matrix(len(a_rows)))
