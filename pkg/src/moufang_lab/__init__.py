"""Exact, finite-scale computations around Moufang loops, groups with triality,
graded restricted Lie algebras and Malcev algebras over prime fields."""

from .free_malcev import engel_quotient_dims, enumerate_monomials, free_malcev_dims, malcev_relation_matrix
from .graded_lie import (
    GradedRestrictedLie,
    LieAlgebra,
    LieTriality,
    build_lp_algebra,
    example_4_algebra,
    induce_triality,
    verify_lie_triality,
    verify_restricted_axioms,
)
from .group_algebra import GroupAlgebra, check_filtration, graded_envelope, omega_power, zassenhaus_filtration
from .groups import FiniteGroup, GroupMap, cyclic, elementary_abelian, heisenberg, modular_group, symmetric_group
from .linalg_fp import FpMatrix, Subspace, inverse, kernel, rank, rref
from .malcev import (
    MalcevAlgebra,
    check_bridge_identities,
    check_engel_hypotheses,
    check_lemma_3_4,
    check_lemma_4_3,
    check_lemma_4_4,
    check_lemma_4_5,
    check_malcev_identities,
    cross_product_algebra,
    extract_h,
    generated_subalgebra,
    series,
)
from .moufang import Loop, check_moufang, loop_exponent
from .reports import Report
from .triality import (
    TrialityGroup,
    abelian_doubling,
    group_doubling,
    moufang_from_triality,
    sigma_commutator_set,
    verify_triality,
)

__version__ = "0.1.0"
