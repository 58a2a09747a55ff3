"""Nonnegative bisymmetric matrices with a prescribed spectrum.

Sufficient-condition checks, constructive realizations with replayable
certificates, a positive variant and a prescribed-diagonal variant.
"""

from .core import (BisymMatrix, CantoniButlerForm, EigenDecomposition, Spectrum,
                   VerificationReport, cb_compose, cb_parts, cb_split, irreducible_components,
                   mirror, perron_pair, symmetric_eigen, symmetric_eigenvalues,
                   verify_realization)
from .errors import (BniepError, CapabilityError, CapacityError, ConvergenceError,
                     InfeasibleError, NumericalError, ParameterError, StructuralError)
from .conditions import (ConditionVerdict, PartitionPlan, check_borobia, check_borobia_bisym,
                         check_kellogg, check_small, check_suleimanova, evaluate_all,
                         make_plan, search_borobia, search_partition)
from .glue import (center_insert, glue_ab, glue_three, merge_transfer, nest, pair_shell,
                   rado_update)
from .certificate import Certificate, replay
from .constructors import (construct, construct_auto, construct_borobia, construct_small,
                           construct_soto, construct_suleimanova)
from .positive import construct_positive_borobia, fiedler_perturb, positify
from .diagonal import (DiagonalSpec, check_diag3, check_diag_even, check_diag_odd,
                       construct_diag3, construct_diagonal)

__version__ = "0.1.0"
