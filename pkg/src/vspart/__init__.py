"""Vector space partitions of PG(v-1, q).

Type calculus with necessary-condition filters, divisible-multiset
spectra, classical partition constructions, and exact-cover feasibility
search at desk scale.  Everything is deterministic: no randomness, fixed
canonical forms, fixed enumeration orders.
"""

from .classification import ClassificationReport, classify_pg72
from .constructions import (
    Partition,
    PartitionCheck,
    desarguesian_spread,
    expand_element,
    lifted_mrd,
    load_partition,
    points_as_elements,
    save_partition,
    verify_partition,
)
from .cover import (
    CoverProblem,
    MaxDisjointResult,
    SearchOutcome,
    build_problem,
    max_disjoint,
    search_type,
    solve,
    subspaces_in_ground,
)
from .errors import BudgetExceededError, FormatError, InfeasiblePrescriptionError
from .gf import ExtensionField, Field, field, gaussian_binomial, prime_power
from .multisets import (
    LengthVerdict,
    PointMultiset,
    Spectrum,
    admissible_length_projective_binary,
    admissible_length_semigroup,
    format_matrix_text,
    multiset_from_columns,
    parse_matrix_text,
    semigroup_generators,
    solve_standard_equations,
)
from .refdata import (
    expand_families,
    load_family_lines,
    load_normalizations,
    load_pointset,
    load_pointset_index,
    load_reference_types,
)
from .subspace import (
    PointIndexer,
    Prescription,
    Subspace,
    canonical_prescription,
    enumerate_subspaces,
    normalize_point,
    rref_canonical,
    span_meet,
    subspace_points,
)
from .typecalc import (
    PartitionType,
    TailCheck,
    apply_reduction,
    check_dimension,
    check_packing,
    check_tails,
    check_type,
    enumerate_types,
    format_type,
    one_step_reductions,
    parse_type,
    reduction_options,
    tails,
)

__version__ = "0.1.0"
