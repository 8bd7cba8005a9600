"""Exact cell models of skeleta of hypersurfaces in algebraic tori."""

__version__ = "0.1.0"

from .complex import Cell, ChainComplex, RationalCellComplex, product_with_simplex
from .degeneration import (
    DivisorClassification,
    OvergraphCone,
    RestrictedPolynomial,
    classify_divisors,
    overgraph_cone,
    restrict_polynomial,
)
from .errors import *  # noqa: F401,F403
from .fibers import FiberGroup, QuotientFiberGroup, fiber_group, quotient_fiber_group, restriction_map
from .homology import HomologyResult, homology
from .lattice import (
    FiniteAbelianGroup,
    IntegerMatrix,
    LatticeQuotient,
    SNFDecomposition,
    hermite_normal_form,
    lattice_quotient,
    saturate,
    smith_normal_form,
)
from .maps import CellularMap, cellularize_map, quotient_by_cellular_map
from .mesh import export_mesh
from .polytope import LatticePolytope, RationalCone, face_lattice, minimal_face, normalized_volume
from .skeleton import (
    HattedComplex,
    QuotientSkeletonModel,
    SkeletonModel,
    build_hatted,
    build_quotient_skeleton,
    build_skeleton,
    euler_census,
)
from .torus import subgroup_subcomplex, torus_arrangement
from .triangulation import (
    FarkasWitness,
    HeightCertificate,
    StarTriangulation,
    carrier_simplex,
    check_regularity,
    generate_star_triangulation,
    validate_triangulation,
)
