"""strongdich: exact enumeration of strong dichotomy classes of Z/2kZ.

The package counts, for even n = 2k, the affine classes of rigid
self-complementary bicolour patterns (strong dichotomies), computes the
rigid pattern-inventory polynomial by three independent routes, and
machine-checks that its value at -1 equals minus the strong class count
for odd k.
"""

from __future__ import annotations

from .affine import (
    AffineMap,
    affine_from_perm,
    affine_group,
    affine_to_perm,
    all_affine_maps,
    euler_phi,
    is_quasipolarity,
    k0_subgroup,
    quasipolarities,
    units,
)
from .cache import (
    AffineClassData,
    ClassRecord,
    build_class_data,
    load_class_data,
    load_or_build,
    save_class_data,
)
from .dichotomy import (
    Dichotomy,
    StrongCountReport,
    c_of_l,
    has_only_even_orbits,
    is_rigid,
    mq_elements,
    mq_h_count,
    strong_count_bruteforce,
    strong_count_formula,
    verify_theorem,
)
from .errors import BudgetExceeded, InternalCheckError, OrderCapExceeded
from .inventory import (
    IntegerPolynomial,
    OrbitIndexMonomial,
    eval_at_minus_one,
    invariant_subset_poly,
    orbit_index_monomial,
    qrig_bruteforce,
    qrig_via_moebius,
    qrig_via_tom,
)
from .lattice import (
    ConjugacyClassTable,
    MarksInverse,
    SubgroupLattice,
    TableOfMarks,
    bottom_moebius,
    bottom_moebius_full,
    conjugacy_classes,
    enumerate_subgroups,
    invert_marks,
    table_of_marks,
)
from .perms import (
    DEFAULT_MAX_ORDER,
    Permutation,
    PermutationGroup,
    compose,
    generate_group,
    is_subgroup,
    join,
    orbit_sizes,
    orbits,
    setwise_stabilizer,
)
from .posets import (
    FinitePoset,
    IncidenceFunction,
    PosetError,
    convolve,
    identity_function,
    moebius,
    moebius_invert,
    zeta,
)

__version__ = "0.1.0"
