"""Free MV-algebras over finite Kleene algebras, computed exactly.

The main entry points are :func:`free_over` (a Kleene algebra to the weighted
complex, triangulation and Schauder basis presenting its free MV-algebra) and
:func:`recognize` (a weighted complex back to a Kleene algebra, when one exists).
"""
from .algebra import (
    FiniteKleeneAlgebra,
    KleeneHom,
    boolean_2,
    c6,
    chain_algebra,
    de_morgan_diamond,
    free_kleene,
    hom_enumerate,
    is_homomorphism,
    is_isomorphic_alg,
    k_prime,
    k_squared,
    product,
    standard_K,
    subalgebra,
    validate_kleene_algebra,
)
from .base import GuardError, InvalidStructureError, MalformedInputError, NotClosedError
from .complex import (
    AbstractComplex,
    Poset,
    WeightedComplex,
    complex_isomorphic,
    embed_poset,
    is_kleene_complex,
    is_order_complex,
    missing_faces,
    nerve,
    skeleton,
    transitive_orientation,
    weighted_nerve,
)
from .geom import (
    RationalTriangulation,
    den,
    farey_star,
    homogeneous,
    is_regular_simplex,
    is_regular_triangulation,
    kleene_triangulation,
    locate,
    realize,
    sc_of,
    sigma_theta,
    simplex_system,
)
from .mvalg import (
    PLFunction,
    SchauderBasis,
    bowtie,
    eval_pl,
    eval_term,
    kleene_to_pl,
    one_regular_check,
    parse_term,
    schauder_basis,
    sol_M_sampled,
    stellar_subdivide,
)
from .pipeline import MVPresentation, demo_section6, free_over, recognize
from .space import (
    KleeneSpace,
    dual_D,
    dual_E,
    is_isomorphic_space,
    ktilde,
    power_space,
    separating_family,
    sol_K,
    subspace_from_subset,
    validate_space,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractComplex",
    "FiniteKleeneAlgebra",
    "GuardError",
    "InvalidStructureError",
    "KleeneHom",
    "KleeneSpace",
    "MVPresentation",
    "MalformedInputError",
    "NotClosedError",
    "PLFunction",
    "Poset",
    "RationalTriangulation",
    "SchauderBasis",
    "WeightedComplex",
    "boolean_2",
    "bowtie",
    "c6",
    "chain_algebra",
    "complex_isomorphic",
    "de_morgan_diamond",
    "demo_section6",
    "den",
    "dual_D",
    "dual_E",
    "embed_poset",
    "eval_pl",
    "eval_term",
    "farey_star",
    "free_kleene",
    "free_over",
    "hom_enumerate",
    "homogeneous",
    "is_homomorphism",
    "is_isomorphic_alg",
    "is_isomorphic_space",
    "is_kleene_complex",
    "is_order_complex",
    "is_regular_simplex",
    "is_regular_triangulation",
    "k_prime",
    "k_squared",
    "kleene_to_pl",
    "kleene_triangulation",
    "ktilde",
    "locate",
    "missing_faces",
    "nerve",
    "one_regular_check",
    "parse_term",
    "power_space",
    "product",
    "realize",
    "recognize",
    "sc_of",
    "schauder_basis",
    "separating_family",
    "sigma_theta",
    "simplex_system",
    "skeleton",
    "sol_K",
    "sol_M_sampled",
    "standard_K",
    "stellar_subdivide",
    "subalgebra",
    "subspace_from_subset",
    "transitive_orientation",
    "validate_kleene_algebra",
    "validate_space",
    "weighted_nerve",
]
