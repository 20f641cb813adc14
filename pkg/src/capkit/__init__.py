"""capkit: capability and pair-capability analysis of small finite groups.

Decides whether a finite group G is capable (G = E/Z(E) for some E) by
computing the epicenter Z*(G) element-wise from Schur-multiplier
monomorphism tests, with two independent engines (bar resolution and
exterior square) that cross-check each other, plus the varietal classifier
for abelian groups and the pair-capability machinery Z^_G(N) = Z*(G) & N.
"""

__version__ = "0.1.0"

from .abelian import (AbelianGroupIF, CapabilityVerdict, VarietyDescriptor,
                      abelian_epicenter, abelian_groups_up_to,
                      abelian_multiplier, baer_capable,
                      coprime_abelianizations, element_in_epicenter,
                      epicenter_strides, invariant_factor_lists,
                      polynilpotent_capable)
from .capability import (CapabilityReport, PairOfGroups, PairProductCheck,
                         ProductCheck, corollary33_applicable, epicenter,
                         exterior_g_center, is_capable, is_capable_pair,
                         pair_product_check, product_epicenter_check,
                         theorem22_zero_map_check, varietal_capability)
from .errors import (CapkitError, EngineDisagreementError,
                     EngineUnavailableError, GroupSpecError, NotCentralError,
                     NotNormalError, OrderCapExceeded)
from .groups import (FiniteGroup, GroupHom, Subgroup, abelian_group,
                     abelian_structure, abelianization, center,
                     commutator_subgroup, construct_group, cyclic_group,
                     derived_subgroup, dihedral_group, direct_product,
                     is_perfect, lower_central_series, make_subgroup,
                     nilpotency_class, permutation_group, product_index,
                     quaternion_group, quotient, subgroup_as_group,
                     subgroup_closure, trivial_group, trivial_subgroup,
                     upper_central_series, whole_subgroup)
from .homology import (MultiplierPresentation, boundary_matrix,
                       induced_multiplier_map, is_multiplier_mono,
                       schur_multiplier)
from .zlinalg import (AbHom, FPAbelianGroup, IntMatrix, exterior_square,
                      exterior_square_map, hom_is_injective,
                      hom_is_surjective, invariant_factors, kernel_columns,
                      smith_normal_form, tensor_map, tensor_product)
