"""Component groups of arithmetical graphs.

Exact computation of Phi(G) = Ker(tR)/Im(M) for arithmetical graphs, the
Q/Z pairing on it, structural order formulas driven by weak connectivity and
ell-breakability, the graph-breaking construction, and graph-level membership
verdicts for the semistable-kernel subgroup.
"""

from .breaking import (BreakResult, SplitCheckRecord, WeakPath, break_at, bridges,
                       cut_vertices, elementary_pair_order, euclid_chain,
                       is_breakable_at, is_ell_breakable, lambda_power,
                       order_via_structure, self_pairing_order, split_check,
                       weak_path)
from .chains import (Chain, ChainData, b_sequence, classify_vertices,
                     enumerate_chains, fast_order_rules, terminal_chains)
from .component_group import (GroupElement, PhiStructure, RationalModZ,
                              TrivialPairError, element_order, ell_part,
                              pair_element, pairing, pairing_annihilator_order,
                              pairing_closed_form, phi_structure,
                              spanning_tree_count, zero_element)
from .families import (FamilyError, cycle, euclid_tree, gen_family, kodaira_star,
                       lorenzini76, random_reduced)
from .graph import (ArithmeticalGraph, GraphError, GraphSyntaxError,
                    GraphValidationError, PreconditionError,
                    VertexResolutionError, make_graph, parse_graph,
                    serialize_graph, tilde_graph)
from .linalg import (AbelianGroupStructure, IntegerMatrix, NotTorsionError,
                     SnfDecomposition, backend_name, cokernel_order_of,
                     cokernel_structure, determinant, is_divisible_by,
                     smith_normal_form, solve_rational_singular)
from .neron import (BaseChangeProfile, FamilyAuditReport, PsiVerdict,
                    ThetaCandidate, base_change_multiplicity,
                    base_change_profile, lorenzini_family_audit, mu_exponent,
                    psi_classify, theta_candidate, theta_orthogonality_check)

__version__ = "0.1.0"
