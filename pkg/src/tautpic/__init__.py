"""Exact presentations of tautological Picard groups of moduli of stable pointed curves."""

from .classes import (
    DivisorClass,
    NormalForm,
    classes_equal,
    format_class,
    normal_form,
    parse_class,
    reduce_class,
    subgroup_quotient,
)
from .descent import (
    ClResult,
    Character,
    cl_subgroup,
    elliptic_character,
    hyperelliptic_character,
    rigidification_fixtures,
)
from .errors import (
    DimensionError,
    DomainError,
    IntegrityError,
    ParameterError,
    ParseError,
    PresentationMismatch,
    TautPicError,
)
from .generators import GenId, ModuliPair, canonicalize, enumerate_generators, validate_pair
from .lattice import (
    AbGroupStructure,
    IntMatrix,
    SmithDecomposition,
    hermite_normal_form,
    is_saturated,
    kernel_mod_m,
    quotient_invariants,
    smith_normal_form,
    sublattice_equal,
)
from .presentations import (
    Presentation,
    build,
    build_lambda,
    build_open,
    build_relation_rows,
    build_rpic,
    expected_rank,
    verify_open_projection,
)

__version__ = "0.1.0"
