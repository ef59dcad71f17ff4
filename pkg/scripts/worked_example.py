#!/usr/bin/env python3
"""Walk through the full pipeline on 9x^4 - 3x^3 - 9x^2 - 2x + 3 at p = 3.

Prints the Newton polygon, the canonical p-adic basis with its valuation
table, and the integral-lattice index, all computed exactly.
"""

from kronrec.exact_linalg import PADIC_INFINITY
from kronrec.lattice_structure import canonical_basis_M, integral_basis, newton_polygon
from kronrec.poly_core import IntPolynomial

POLY = IntPolynomial((3, -2, -9, -3, 9))
P = 3
M = 10


def fmt_val(v) -> str:
    return "inf" if v == PADIC_INFINITY else str(v)


def main() -> None:
    print(f"polynomial  {POLY}")
    print(f"prime       {P}")
    print(f"length      {M}")
    print()

    np = newton_polygon(POLY, P)
    print("Newton polygon")
    print(f"  vertices  {list(np.vertices)}")
    print(f"  slopes    {[str(s) for s in np.slopes]}")
    print(f"  lengths   {list(np.lengths)}")
    print(f"  pivot s   {np.s}  (segments with nonnegative slope)")
    print()

    basis = canonical_basis_M(POLY, P, M)
    print("canonical basis rows")
    for row in basis.matrix:
        print("  [" + ", ".join(str(e) for e in row) + "]")
    print()
    print("valuation table (v_p of each entry)")
    for row in basis.valuations:
        print("  [" + ", ".join(f"{fmt_val(v):>3}" for v in row) + "]")
    print()
    for seg in basis.segments:
        print(
            f"segment slope {seg.slope}: rows {seg.row_start}..{seg.row_stop}, "
            f"det valuation {seg.det_valuation} (expected {seg.expected_det_valuation})"
        )
    print()

    for m in range(POLY.degree, POLY.degree + 3):
        bases = integral_basis(POLY, m)
        lead = abs(POLY.coeffs[-1])
        print(
            f"m = {m}: lattice index {bases.index}"
            f" = {lead}^{m - POLY.degree}"
        )
    print()
    print("integer basis rows at m =", POLY.degree + 2)
    for row in integral_basis(POLY, POLY.degree + 2).z_basis:
        print("  ", row)


if __name__ == "__main__":
    main()
