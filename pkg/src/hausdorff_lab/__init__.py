"""Numerical laboratory for Hausdorff operators on Paley-Wiener and radial Fock-type spaces."""

__version__ = "0.1.0"

from .core_math import (EFamilyParams, IntegrationError, QuadratureSpec, dilation_weight,
                        eval_E, integrate, sinc)
from .measures import (IndeterminateMomentError, Measure, MomentSequence, Symbol, atom, constant,
                       indicator, moment, moment_profile, power, support_gap_verdict, tabulated,
                       weighted_symbol_norm, zero)
from .pw import (BoundLedger, BoundRecord, GridSpec, PWVector, SincMatrix, apply_operator,
                 build_compression_matrix, build_sinc_matrix, hs_diagnostic, kernel_col_norm,
                 kernel_eval, kernel_row_norm, linf_bound_check, operator_norm_sweep,
                 singular_spectrum)
from .fock import (FockWeight, TaylorVector, apply_diagonal, boundedness_verdict,
                   compactness_verdict, diagonal_norm, fock_norm, monomial_norms,
                   truncation_tail)
from .oracle import ReferenceFunction, cross_validate, eigen_residual, hausdorff_eval
