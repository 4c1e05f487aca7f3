"""Dense numerical checks for finite-dimensional C*-Hopf algebras.

The package builds Hopf algebras from multiplication tables or raw
structure constants, verifies their axioms, and works out the material
that sits on top: Haar pairs, comatrix units, coactions and their
crossed products, the duality isomorphism of the double crossed
product, the iterated inclusion tower with its Rohlin-type projections,
cocycle trivialization, and a one-step unitary corrector. Everything is
double precision and reports residuals, never symbolic certificates.
"""

from .algebra import StructureAlgebra, tensor_algebra, validate_algebra, wedderburn
from .coaction import CoactionMap, conjugate_coaction, exterior_transform, untwisted
from .cocycle import (
    aue_one_step,
    compute_L,
    one_cocycle_trivialize,
    two_cocycle_trivialize_iterative,
    two_cocycle_trivialize_once,
)
from .crossed import CrossedProduct, build_crossed
from .descriptors import TOOL_VERSION, descriptor_of, load_algebra, parse_descriptor
from .duality import build_duality, verify_duality
from .errors import (
    CovarianceFailure,
    GapTooLarge,
    HopfCheckError,
    NoConvergence,
    NotSaturated,
    ParseError,
    StructureFailure,
)
from .hopf import (
    HopfAlgebra,
    appendix_span_check,
    build_function_algebra,
    build_group_algebra,
    comatrix_units,
    dual,
    haar_pair,
    tensor_hopf,
    validate_hopf,
)
from .rohlin import (
    approx_rep_witness,
    projection_from_witness,
    rohlin_witness,
    witness_from_projection,
)
from .tower import build_base, build_tower

__version__ = TOOL_VERSION

__all__ = [
    "StructureAlgebra",
    "tensor_algebra",
    "validate_algebra",
    "wedderburn",
    "CoactionMap",
    "conjugate_coaction",
    "exterior_transform",
    "untwisted",
    "aue_one_step",
    "compute_L",
    "one_cocycle_trivialize",
    "two_cocycle_trivialize_iterative",
    "two_cocycle_trivialize_once",
    "CrossedProduct",
    "build_crossed",
    "TOOL_VERSION",
    "descriptor_of",
    "load_algebra",
    "parse_descriptor",
    "build_duality",
    "verify_duality",
    "CovarianceFailure",
    "GapTooLarge",
    "HopfCheckError",
    "NoConvergence",
    "NotSaturated",
    "ParseError",
    "StructureFailure",
    "HopfAlgebra",
    "appendix_span_check",
    "build_function_algebra",
    "build_group_algebra",
    "comatrix_units",
    "dual",
    "haar_pair",
    "tensor_hopf",
    "validate_hopf",
    "approx_rep_witness",
    "projection_from_witness",
    "rohlin_witness",
    "witness_from_projection",
    "build_base",
    "build_tower",
]
