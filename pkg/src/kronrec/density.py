"""Density thresholds on the torus for linear-recurrence orbit sets.

The set under study is Q = {v in R^m : the band matrix of A maps v into
Z^(m-d)}, taken modulo 1.  Four executables cover its density behaviour:

  epsilon_bound       certified enclosures of the eps thresholds obtained
                      from scaled Mahler measures and the refined root
                      product max(|alpha|, 1-|alpha|)
  factor_real/witness the constructive two-stage perturbation moving any
                      target into Q while staying inside the eps/2 cube
  is_covered          exact rational decision of whether the eps-cube image
                      covers one residue class (the grid probe behind
                      critical_epsilon's bisection)
  certify_non_density exact zonotope volume of the cube-plus-lattice
                      parallelepiped; below 1 it refutes eps-density

Floats passed for eps or targets are taken at their exact binary value; the
command line converts decimal text like "0.4" to 2/5 before calling in.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CertificateError, DomainError, KronrecError
from .exact_linalg import det_exact
from .intervals import Interval, interval_min
from .lattice_structure import basis_N, integral_basis
from .poly_core import (
    DEFAULT_TARGET_RADIUS,
    IntPolynomial,
    conjugate,
    mahler_measure,
    refined_product_interval,
    roots,
)

__all__ = [
    "DensityBound",
    "RealFactorization",
    "DensityWitness",
    "CriticalEpsilonEstimate",
    "NonDensityCertificate",
    "epsilon_bound",
    "factor_real",
    "witness",
    "is_covered",
    "critical_epsilon",
    "certify_non_density",
]

GRID_DIMENSION_GUARD = 4


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError("need a finite number")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise DomainError(f"cannot interpret {x!r} as an exact number")


# ----- certified threshold enclosures -----


@dataclass(frozen=True)
class DensityBound:
    poly: IntPolynomial
    eps_half_scaled: Interval
    eps_double_scaled: Interval
    eps_stated: Interval
    eps_refined: Interval
    eps_coarse: Interval


def epsilon_bound(
    poly: IntPolynomial, target_radius: float = DEFAULT_TARGET_RADIUS
) -> DensityBound:
    """Certified enclosures of the density thresholds.

    eps_half_scaled and eps_double_scaled are the reciprocals of the two
    scaled measures; eps_stated is their minimum.  eps_refined reciprocates
    the product of max(|alpha|, 1-|alpha|) and is evaluated on both the
    polynomial and its reversal (coordinate reversal preserves the orbit set
    and the cube), keeping the smaller.  eps_coarse = 2^floor(d/2) / M(A).
    """
    if poly.constant_coefficient == 0:
        raise DomainError("density bounds need a nonzero constant coefficient")
    if not poly.is_primitive:
        raise DomainError("density bounds need a primitive polynomial")
    half = mahler_measure(poly, "half_scaled", target_radius).interval.recip()
    dbl = mahler_measure(poly, "double_scaled", target_radius).interval.recip()
    refined = interval_min(
        refined_product_interval(poly, target_radius).recip(),
        refined_product_interval(conjugate(poly), target_radius).recip(),
    )
    plain = mahler_measure(poly, "plain", target_radius).interval
    coarse = plain.recip().scale(float(2 ** (poly.degree // 2)))
    return DensityBound(
        poly=poly,
        eps_half_scaled=half,
        eps_double_scaled=dbl,
        eps_stated=interval_min(half, dbl),
        eps_refined=refined,
        eps_coarse=coarse,
    )


# ----- constructive factorization and witness -----


@dataclass(frozen=True)
class RealFactorization:
    poly: IntPolynomial
    b_coeffs: tuple[float, ...]
    c_coeffs: tuple[float, ...]
    delta: float
    eps: float

    @property
    def b_degree(self) -> int:
        return len(self.b_coeffs) - 1

    @property
    def c_degree(self) -> int:
        return len(self.c_coeffs) - 1


def _expand_from_roots(lead: complex, root_list: list[complex]) -> list[complex]:
    cs = [lead]
    for root in root_list:
        nxt = [-root * cs[0]]
        for i in range(1, len(cs)):
            nxt.append(cs[i - 1] - root * cs[i])
        nxt.append(cs[-1])
        cs = nxt
    return cs


def factor_real(
    poly: IntPolynomial, target_radius: float = DEFAULT_TARGET_RADIUS
) -> RealFactorization:
    """Split A = B * C by root size: |gamma| <= 1/2 goes to the monic C.

    A root whose certified enclosure straddles 1/2 is sent to B, which never
    needs smallness.  delta = 1/|b_0| and eps = delta * prod 1/(1-|gamma|).
    """
    if poly.degree < 1:
        raise DomainError("factorization needs degree >= 1")
    if poly.constant_coefficient == 0:
        raise DomainError("factorization needs a nonzero constant coefficient")
    rs = roots(poly, target_radius)
    b_roots: list[complex] = []
    c_roots: list[complex] = []
    for enc in rs.roots:
        modulus_hi = abs(enc.value) + enc.radius
        bucket = c_roots if modulus_hi <= 0.5 else b_roots
        bucket.extend([enc.value] * enc.multiplicity)
    b_cs = _expand_from_roots(complex(poly.leading_coefficient), b_roots)
    c_cs = _expand_from_roots(complex(1.0), c_roots)
    b_coeffs = tuple(z.real for z in b_cs)
    c_coeffs = tuple(z.real for z in c_cs)
    delta = 1.0 / abs(b_coeffs[0])
    eps = delta
    for gamma in c_roots:
        eps /= 1.0 - abs(gamma)
    return RealFactorization(
        poly=poly, b_coeffs=b_coeffs, c_coeffs=c_coeffs, delta=delta, eps=eps
    )


@dataclass(frozen=True)
class DensityWitness:
    poly: IntPolynomial
    m: int
    target: tuple[float, ...]
    w: tuple[float, ...]
    k: tuple[int, ...]
    residual: float
    eps_used: float


def witness(
    poly: IntPolynomial,
    m: int,
    target: Sequence[float],
    eps: float | None = None,
    target_radius: float = DEFAULT_TARGET_RADIUS,
    residual_tol: float = 1e-6,
) -> DensityWitness:
    """Perturbation w with |w|_inf <= eps/2 carrying target into Q.

    Two stages.  First, working down the rows of the band matrix of B, each
    w'_i is the unique value in [-delta/2, delta/2] fixing row i modulo 1
    (the row coefficient of w'_i is b_0 and b_0 * delta = 1, free trailing
    coordinates pinned to 0).  Second, w solves the triangular system
    {C}_m w = (0,...,0, w') by forward substitution, which amplifies the
    sup-norm by at most prod 1/(1-|gamma|).  k is recovered by rounding,
    and the residual reported from an independent matrix multiply.
    """
    d = poly.degree
    if m <= d:
        raise DomainError("witness needs m > deg A")
    tvec = [float(x) for x in target]
    if len(tvec) != m:
        raise DomainError(f"target must have length m = {m}")
    fact = factor_real(poly, target_radius)
    if eps is None:
        eps = fact.eps
    if eps < fact.eps - 1e-9:
        raise DomainError(
            f"eps = {eps} is below the constructive bound {fact.eps}"
        )
    a = poly.coeffs
    ell = m - d
    v = [(-sum(a[j] * tvec[i + j] for j in range(d + 1))) % 1.0 for i in range(ell)]

    b = fact.b_coeffs
    s = len(b) - 1
    wprime = [0.0] * (ell + s)
    for i in range(ell - 1, -1, -1):
        y = v[i] - sum(b[kk] * wprime[i + kk] for kk in range(1, s + 1))
        y -= math.floor(y)
        if y >= 0.5:
            y -= 1.0
        wprime[i] = y / b[0]

    c = fact.c_coeffs
    t = len(c) - 1
    z = [0.0] * t + wprime
    w = [0.0] * m
    for i in range(m):
        acc = z[i]
        for j in range(max(0, i - t), i):
            acc -= c[t - i + j] * w[j]
        w[i] = acc

    k = []
    residual = 0.0
    for i in range(ell):
        row_val = sum(a[j] * (tvec[i + j] + w[i + j]) for j in range(d + 1))
        ki = round(row_val)
        k.append(int(ki))
        residual = max(residual, abs(row_val - ki))
    if residual > residual_tol:
        raise KronrecError(
            f"witness residual {residual:.3e} exceeds tolerance {residual_tol:.3e}"
        )
    return DensityWitness(
        poly=poly,
        m=m,
        target=tuple(tvec),
        w=tuple(w),
        k=tuple(k),
        residual=residual,
        eps_used=float(eps),
    )


# ----- exact covering decision -----


def _merge_intervals(parts: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    parts.sort()
    merged = [parts[0]]
    for lo, hi in parts[1:]:
        if lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def _covered_linear(a0: int, a1: int, ell: int, half: Fraction, v: list[Fraction]) -> bool:
    """Degree-1 covering by a sweep of feasible w-interval unions."""
    feasible = [(-half, half)]
    for i in range(ell):
        nxt: list[tuple[Fraction, Fraction]] = []
        for lo, hi in feasible:
            img_lo, img_hi = sorted((a0 * lo, a0 * hi))
            img_lo -= abs(a1) * half
            img_hi += abs(a1) * half
            k_lo = math.ceil(img_lo - v[i])
            k_hi = math.floor(img_hi - v[i])
            for k in range(k_lo, k_hi + 1):
                c1 = (v[i] + k - a0 * lo) / a1
                c2 = (v[i] + k - a0 * hi) / a1
                n_lo = max(min(c1, c2), -half)
                n_hi = min(max(c1, c2), half)
                if n_lo <= n_hi:
                    nxt.append((n_lo, n_hi))
        if not nxt:
            return False
        feasible = _merge_intervals(nxt)
    return True


def _normalize_constraint(
    coef: tuple[Fraction, ...], rhs: Fraction
) -> tuple[tuple[Fraction, ...], Fraction]:
    for x in coef:
        if x != 0:
            return tuple(y / abs(x) for y in coef), rhs / abs(x)
    return coef, rhs


def _fm_feasible(cons: list[tuple[tuple[Fraction, ...], Fraction]], nvars: int) -> bool:
    """Fourier-Motzkin feasibility of {x : coef . x <= rhs for all constraints}."""
    for var in range(nvars - 1, -1, -1):
        pos, neg, rest = [], [], []
        for coef, rhs in cons:
            cv = coef[var]
            if cv > 0:
                pos.append((coef, rhs))
            elif cv < 0:
                neg.append((coef, rhs))
            else:
                rest.append((coef[:var], rhs))
        combined = rest
        for cp, rp in pos:
            for cn, rn in neg:
                sp, sn = cp[var], -cn[var]
                coef = tuple(cp[i] * sn + cn[i] * sp for i in range(var))
                combined.append((coef, rp * sn + rn * sp))
        best: dict[tuple[Fraction, ...], Fraction] = {}
        for coef, rhs in combined:
            if all(x == 0 for x in coef):
                if rhs < 0:
                    return False
                continue
            key, val = _normalize_constraint(coef, rhs)
            if key not in best or val < best[key]:
                best[key] = val
        cons = list(best.items())
    return True


def _covered_general(poly: IntPolynomial, m: int, half: Fraction, vv: list[Fraction]) -> bool:
    a = poly.coeffs
    d = poly.degree
    ell = m - d
    k_bound = half * poly.coefficient_sum_abs()
    ranges = []
    for vi in vv:
        k_lo = math.ceil(-k_bound - vi)
        k_hi = math.floor(k_bound - vi)
        if k_lo > k_hi:
            return False
        ranges.append(range(k_lo, k_hi + 1))
    nmat = basis_N(poly, m)
    for k in itertools.product(*ranges):
        rhs = [vv[i] + k[i] for i in range(ell)]
        w0 = [Fraction(0)] * m
        for i in range(ell - 1, -1, -1):
            acc = rhs[i]
            for j in range(i + 1, min(i + d, ell - 1) + 1):
                acc -= a[j - i] * w0[j]
            w0[i] = acc / a[0]
        cons = []
        for col in range(m):
            coef = tuple(nmat[t][col] for t in range(d))
            cons.append((coef, half - w0[col]))
            cons.append((tuple(-x for x in coef), half + w0[col]))
        if _fm_feasible(cons, d):
            return True
    return False


def is_covered(poly: IntPolynomial, m: int, eps, v) -> bool:
    """Exact decision: does some w in [-eps/2, eps/2]^m give band(A) w = v + k?

    All candidate integer offsets k with |k + v|_inf <= (eps/2) sum|a_i| are
    tried; each reduces to rational linear feasibility of a box meeting an
    affine subspace (particular solution from the triangular leading columns,
    kernel directions from the rational recurrence basis).  Degree 1 instead
    sweeps the levels directly, carrying a union of feasible intervals.  The
    cube is closed, so boundary contact counts as covered.
    """
    d = poly.degree
    if m <= d:
        raise DomainError("covering needs m > deg A")
    if poly.constant_coefficient == 0:
        raise DomainError("covering needs a nonzero constant coefficient")
    ell = m - d
    half = _to_fraction(eps) / 2
    if half < 0:
        raise DomainError("eps must be nonnegative")
    if isinstance(v, (list, tuple)):
        raw = list(v)
    else:
        raw = [v]
    if len(raw) != ell:
        raise DomainError(f"v must have length m - deg A = {ell}")
    vv = [_to_fraction(x) % 1 for x in raw]
    if d == 1:
        return _covered_linear(poly.coeffs[0], poly.coeffs[1], ell, half, vv)
    return _covered_general(poly, m, half, vv)


# ----- critical epsilon bisection -----


@dataclass(frozen=True)
class CriticalEpsilonEstimate:
    poly: IntPolynomial
    m: int
    lower: Fraction
    upper: Fraction
    estimate: Fraction
    grid_resolution: int
    bisection_tol: Fraction
    method_notes: str


def critical_epsilon(
    poly: IntPolynomial,
    m: int,
    grid_n: int = 8,
    bisection_tol=Fraction(1, 1000),
    allow_large_grid: bool = False,
    target_radius: float = DEFAULT_TARGET_RADIUS,
) -> CriticalEpsilonEstimate:
    """Bisect for the smallest eps covering a grid of residue classes.

    Covering is exactly monotone in eps, so bisection brackets the grid
    threshold to bisection_tol.  The reported upper bound adds the declared
    grid margin (m - d)/grid_n for targets between grid points, capped at
    the certified refined threshold which covers the whole torus.
    """
    d = poly.degree
    ell = m - d
    if ell < 1:
        raise DomainError("critical epsilon needs m > deg A")
    if grid_n < 1:
        raise DomainError("grid_n must be positive")
    if ell > GRID_DIMENSION_GUARD and not allow_large_grid:
        raise DomainError(
            f"grid dimension {ell} exceeds the guard {GRID_DIMENSION_GUARD}; "
            "pass allow_large_grid=True to override"
        )
    tol = _to_fraction(bisection_tol)
    if tol <= 0:
        raise DomainError("bisection_tol must be positive")
    cap = Fraction(epsilon_bound(poly, target_radius).eps_refined.hi)

    # far-from-integer targets first, so uncovered grids fail fast
    order = sorted(
        itertools.product(range(grid_n), repeat=ell),
        key=lambda js: -sum(min(j, grid_n - j) for j in js),
    )
    targets = [tuple(Fraction(j, grid_n) for j in js) for js in order]

    def all_covered(e: Fraction) -> bool:
        return all(is_covered(poly, m, e, t) for t in targets)

    hi = cap + max(tol, Fraction(1, 10**9))
    for attempt in range(5):
        if all_covered(hi):
            break
        if attempt == 4:
            raise CertificateError(
                "grid covering failed above the certified threshold"
            )
        hi *= Fraction(5, 4)
    lo = Fraction(0)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if all_covered(mid):
            hi = mid
        else:
            lo = mid
    margin = Fraction(ell, grid_n)
    upper = min(hi + margin, cap)
    notes = (
        f"bisection to {tol} over a {grid_n}^{ell} residue grid; "
        f"upper adds the grid margin {margin} and is capped at the certified "
        f"torus-wide threshold {float(cap):.6g}"
    )
    return CriticalEpsilonEstimate(
        poly=poly,
        m=m,
        lower=lo,
        upper=upper,
        estimate=max(lo, min((lo + hi) / 2, upper)),
        grid_resolution=grid_n,
        bisection_tol=tol,
        method_notes=notes,
    )


# ----- volume-based refutation -----


@dataclass(frozen=True)
class NonDensityCertificate:
    poly: IntPolynomial
    m: int
    eps: Fraction
    volume_bound: Fraction
    certified: bool


def certify_non_density(poly: IntPolynomial, m: int, eps) -> NonDensityCertificate:
    """Exact volume of the zonotope spanned by the eps-cube and lattice rows.

    Q can only be eps-dense if lattice translates of the cube-lattice
    parallelepiped cover R^m, which forces its volume to be at least 1; a
    volume below 1 therefore refutes density.  The volume is the standard
    minor expansion over the m + d generators, computed as exact rationals:
    choosing p lattice rows contributes eps^(m-p) times the sum of absolute
    p x p minors over column choices.
    """
    e = _to_fraction(eps)
    if not 0 < e <= 1:
        raise DomainError("eps must lie in (0, 1]")
    d = poly.degree
    if m <= d:
        raise DomainError("certification needs m > deg A")
    omega = integral_basis(poly, m).z_basis
    total = Fraction(0)
    for p_size in range(d + 1):
        minor_sum = Fraction(0)
        for rows in itertools.combinations(range(d), p_size):
            for cols in itertools.combinations(range(m), p_size):
                if p_size == 0:
                    minor_sum += 1
                    continue
                sub = [[omega[r][c] for c in cols] for r in rows]
                minor_sum += abs(det_exact(sub))
        total += e ** (m - p_size) * minor_sum
    return NonDensityCertificate(
        poly=poly, m=m, eps=e, volume_bound=total, certified=total < 1
    )
