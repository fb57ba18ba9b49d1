"""Stability portrait of the periodic family -y'' - y + beta/(1 + e cos t) y.

Monodromy matrices and their symplectic normal forms, Morse indices by
Fourier Galerkin truncation, the two antiperiodic degeneracy curves, the
squared-resolvent trace bounds on the elliptic region, the assembled
three-region atlas, and the beta = 1 - mu mapping onto the vertical
equilibrium of the restricted shell-fluid three-body problem.
"""

from ._kernels import NUMBA_ENABLED, backend_name
from .atlas import (AtlasCell, RobeVerdict, atlas_sweep, build_cell, classify_region,
                    robe_stability, total_degeneracy_multiplicity,
                    verify_curve_normal_forms)
from .curves import (DegeneracyCurve, HalfPeriodData, TracedCurves,
                     antiperiodic_discriminant, find_degenerate_betas,
                     half_period_values, tangent_at_origin, trace_curves)
from .errors import (ConsistencyViolation, CurveRangeExceeded, EccOutOfRange,
                     FloquetAtlasError, InsufficientSamples, IntegrationFailure,
                     NearSingularity, NotConverged, NotInvertible, NotOnUnitCircle,
                     NotSymplectic, QuadratureNotConverged, RootNotBracketed)
from .hamiltonian import (NormalFormClass, NormalFormTag, ParamPoint, StabilityVerdict,
                          SymplecticMatrix2, classify, fundamental_solution,
                          index_jump_check, kernel_dimension, monodromy,
                          monodromy_fixed_step, splitting_numbers, stability_verdict,
                          system_matrix)
from .spectral import (HillMatrix, IndexPair, hill_matrix, index_and_nullity,
                       inverse_kepler_fourier_coeffs)
from .traceformula import (BoundCurve, TraceValue, bound_curve, f_closed_form,
                           f_operator_oracle, stability_bound)

__version__ = "0.1.0"
