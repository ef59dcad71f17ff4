"""kronrec: density bounds, integral recurrence lattices, and Toeplitz certificates."""

from .density import (
    CriticalEpsilonEstimate,
    DensityBound,
    DensityWitness,
    NonDensityCertificate,
    RealFactorization,
    certify_non_density,
    critical_epsilon,
    epsilon_bound,
    factor_real,
    is_covered,
    witness,
)
from .errors import (
    CertificateError,
    DomainError,
    KronrecError,
    ParseError,
    RootCertificationError,
    SingularMatrixError,
)
from .lattice_structure import (
    CanonicalBasisM,
    LatticeBases,
    MinorIdentityResult,
    NewtonPolygon,
    canonical_basis_M,
    integral_basis,
    minor_identity,
    newton_polygon,
)
from .poly_core import (
    IntPolynomial,
    MahlerMeasure,
    ComplexRootSet,
    RootEnclosure,
    conjugate,
    mahler_measure,
    parse_polynomial,
    roots,
)
from .toeplitz import (
    GramResult,
    GrowthReport,
    LaurentSymbol,
    TrenchData,
    biorthonormal_check,
    gram_det,
    gram_growth,
    lyons_ratio,
    toeplitz_det_direct,
    trench_data,
    trench_det,
)

__version__ = "1.0.0"

__all__ = [
    "CertificateError",
    "DomainError",
    "KronrecError",
    "ParseError",
    "RootCertificationError",
    "SingularMatrixError",
    "IntPolynomial",
    "MahlerMeasure",
    "ComplexRootSet",
    "RootEnclosure",
    "conjugate",
    "mahler_measure",
    "parse_polynomial",
    "roots",
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
    "NewtonPolygon",
    "CanonicalBasisM",
    "LatticeBases",
    "MinorIdentityResult",
    "newton_polygon",
    "canonical_basis_M",
    "integral_basis",
    "minor_identity",
    "LaurentSymbol",
    "TrenchData",
    "GramResult",
    "GrowthReport",
    "toeplitz_det_direct",
    "trench_data",
    "trench_det",
    "gram_det",
    "gram_growth",
    "lyons_ratio",
    "biorthonormal_check",
    "__version__",
]
