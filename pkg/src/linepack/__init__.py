"""Line packings from transitive actions of finite groups.

The pipeline: a transitive permutation action determines an association
scheme of orbital matrices; the primitive central idempotents of its
adjacency algebra are projections with few distinct entries; read as
Gram matrices and projectively reduced, they frequently give optimal or
record line packings, certified here against the Welch, orthoplex, and
Levenstein bounds.  An exact Heisenberg-group construction provides an
infinite family of equiangular tight frames.
"""

from .errors import InputError, LinepackError, NumericError, ResourceError
from .frames import (
    FrameVectors,
    GramMatrix,
    PackingReport,
    coherence,
    difference_set_check,
    harmonic_gram,
    is_etf,
    matrix_group_orbit_gram,
    naimark_complement,
    packing_report,
    projective_reduce,
    secondary_bounds,
    vectors_from_gram,
    welch_bound,
)
from .heisenberg import (
    AbelianGroupSpec,
    GammaTwist,
    HeisenbergElement,
    heis_etf_gram,
    heis_etf_gram_direct,
    heisenberg_multiply,
    heisenberg_permutation_action,
    make_spec,
    parity_projectors,
    schrodinger_matrix,
    sp_membership,
    symplectic_exponent,
)
from .idempotents import (
    IsotypicDecomposition,
    central_primitive_idempotents,
    multiplicity_free,
    projection_from_subset,
    spherical_function_values,
)
from .permgroup import (
    GroupAction,
    Permutation,
    PermutationGroup,
    group_order,
    induced_pair_action,
    is_transitive,
    orbit,
    parse_cycles,
    point_stabilizer,
    regular_action,
)
from .scheme import (
    SchurianScheme,
    conjugacy_class_scheme,
    is_commutative,
    scheme_from_action,
    stable_matrix_check,
)
from .symmetry import (
    gram_symmetry_group,
    is_homogeneous,
    regular_subgroup_check,
)

__version__ = "0.1.0"
