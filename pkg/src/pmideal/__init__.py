"""Principal-minor loci over finite fields: exact linear algebra, Pluecker
coordinates, permissible graphs and exhaustive point counts."""

from .census import (
    CensusRecord,
    StratumSpec,
    count_graph_stratum,
    count_H_pairs,
    count_Y_bruteforce,
    estimate_dimension,
    gl_order,
    verify_bundle_count,
)
from .errors import (
    BudgetExceeded,
    EmptyLocusError,
    InvariantViolation,
    ModulusMismatch,
    NotPermissibleError,
    SingularMatrixError,
)
from .exact_matrix import ExactMatrix, IndexSet
from .finite_field import FieldElement, PrimeModulus
from .grassmannian import PluckerVector, gaussian_binomial
from .graphs import PermissiblePair, SimpleGraph, codim, dim_Y_formula, is_permissible
from .loci import (
    verify_case3,
    verify_m2_overlapping2,
    verify_n5_example,
    verify_overlap_rule,
)

__version__ = "0.1.0"
