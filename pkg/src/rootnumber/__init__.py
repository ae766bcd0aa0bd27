"""Root numbers of elliptic-curve twist families over Q.

Closed-form global root numbers for quadratic, quartic (j = 1728) and sextic
(j = 0) twist families, Kodaira reduction types of twisted fibers, periodicity
and square-periodicity profiles of t -> W(E_t), a criterion for a quadratic
twist family to have sign-determined constant root number, and a per-prime
oracle that cross-validates every closed form.
"""

from .arith import (DEFAULT_FACTOR_EFFORT, Factored, PowerfreeDecomposition,
                    Sign, factor, is_prime, jacobi, powerfree_decompose,
                    prime_to_part, square_part, valuation)
from .errors import (DomainError, IncompleteTableError, MissingLocalDataError,
                     NonMinimalModelError, NotPowerfreeError, RootNumberError,
                     TableFormatError, UnfactoredCofactorError)
from .reduction import (Curve, KodairaType, Triplet, base_reduction,
                        classify_triplet, kodaira_at_large_prime,
                        minimal_triplet, quadratic_twist_pair)
from .local import (LocalRootResult, LocalTable, SpecialTwoVerdict,
                    load_local_table, parse_local_table, rohrlich_local,
                    special_three_verdict, special_two_verdict,
                    w2_quadratic_special, w2_quartic, w2_sextic,
                    w3_quadratic_special, w3_quartic, w3_sextic)
from .formulas import (CFactorReport, RootNumberBreakdown, VariationFactor,
                       oracle_root_number, root_number, root_number_quadratic,
                       root_number_quadratic_absolute,
                       root_number_quadratic_relative, root_number_quartic,
                       root_number_sextic, variation_factor)
from .analysis import (AuditResult, ConstancyVerdict, PeriodicityProfile,
                       ScanResult, audit_family, audit_table_against_special,
                       constancy_criterion, local_period,
                       opposite_sign_witness, profile_quadratic,
                       profile_quartic, profile_sextic,
                       quadratic_profile_modulus, scan_signs,
                       search_minimal_modulus, sign_witnesses)

__version__ = "0.1.0"
