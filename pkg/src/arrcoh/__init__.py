"""Exact cohomology certificates for arrangement-type spaces.

Everything is computed over exact coefficients (rationals, prime fields,
or the integers through Smith normal form): intersection lattices and
characteristic polynomials of hyperplane arrangements, nested-set
complexes, rank-one vanishing checks with spectral support certificates,
the chamber complex of a real arrangement with twisted cohomology, toric
subtorus unions over simplicial complexes with the Cohen-Macaulay
criterion, and subgroup arrangements in powers of an elliptic curve.
"""

from arrcoh.arrangement import (
    Arrangement,
    IntersectionLattice,
    RankOneSystem,
    VanishingVerdict,
    e2_certificate,
    intersection_lattice,
    maximal_building_set,
    minimal_building_set,
    nested_complex,
    nested_cover,
    poincare_and_beta,
    vanishing_check,
)
from arrcoh.cochain import CohomologyReport, complex_cohomology, make_complex
from arrcoh.covers import CoverDescription, E2Support, build_nerve, validate_cover
from arrcoh.elliptic import (
    EllipticArrangement,
    analyze,
    components,
    convenient_check,
    elliptic_vanishing_certificate,
    enumerate_strata,
    tangent_arrangement,
)
from arrcoh.linalg import GF, QQ, ZZ, Matrix, smith_normal_form
from arrcoh.salvetti import SalvettiComplex, build_salvetti, twisted_cohomology
from arrcoh.simplicial import SimplicialComplex, is_cohen_macaulay, link, reduced_cohomology
from arrcoh.toric import (
    ToricComplex,
    ToricRankOneSystem,
    cover_nerve,
    toric_cohomology,
    toric_e2_page,
    verify_cm_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "IntersectionLattice",
    "RankOneSystem",
    "VanishingVerdict",
    "e2_certificate",
    "intersection_lattice",
    "maximal_building_set",
    "minimal_building_set",
    "nested_complex",
    "nested_cover",
    "poincare_and_beta",
    "vanishing_check",
    "CohomologyReport",
    "complex_cohomology",
    "make_complex",
    "CoverDescription",
    "E2Support",
    "build_nerve",
    "validate_cover",
    "EllipticArrangement",
    "analyze",
    "components",
    "convenient_check",
    "elliptic_vanishing_certificate",
    "enumerate_strata",
    "tangent_arrangement",
    "GF",
    "QQ",
    "ZZ",
    "Matrix",
    "smith_normal_form",
    "SalvettiComplex",
    "build_salvetti",
    "twisted_cohomology",
    "SimplicialComplex",
    "is_cohen_macaulay",
    "link",
    "reduced_cohomology",
    "ToricComplex",
    "ToricRankOneSystem",
    "cover_nerve",
    "toric_cohomology",
    "toric_e2_page",
    "verify_cm_theorem",
    "__version__",
]
