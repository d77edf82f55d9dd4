"""Invariant zero-H_r hypersurface toolkit for hyperbolic space cross a line.

Construct the translation-invariant members with vanishing order-r mean
curvature, evaluate their curvatures and heights, estimate weighted
curvature norms on meshed pieces, and run barrier sweeps against target
point sets.  A compiled quadrature/shortest-path core is used when present;
`hrzero.BACKEND` reports which backend is active.
"""

from . import _backend
from .ambient import (AdmissibleCollection, AmbientVector, BallPoint,
                      BoundaryCap, BoundaryPoint, GeodesicLine, Hyperplane,
                      VerticalHyperplane, admissible_check, ambient_inner,
                      christoffel, conformal_factor,
                      covariant_derivative_position, hyp_distance_origin,
                      norm_comparison, position_factor_L, region_P_contains,
                      rho_cylinder_contains, signed_distance_to_hyperplane,
                      translate_along_geodesic)
from .barrier import (PlacedBarrier, SweepReport, TargetSet, Verdict,
                      barrier_classify, halfspace_certificate, sweep,
                      vertical_sweep)
from .curvature import (CurvatureSample, hj_on_family, hr_ode_residual,
                        mean_curvature_j, normal_vertical_component,
                        principal_curvatures, shape_norm)
from .errors import DomainError, NonConvergedError
from .heights import (HeightResult, divergence_check, height,
                     height_derivative, height_limit, slab_obstruction)
from .profile import (ProfileCurve, Regime, classify_regime, first_integral,
                      lambda_ddot, lambda_dot, profile_entire,
                      profile_half_graph, profile_r_equals_n,
                      profile_two_sheets, sample_profile)
from .quadrature import (IntegralResult, QuadratureConfig, integrate,
                         integrate_sqrt_singular, integrate_to_infinity)
from .stc import (FermiMesh, WeightedNormEstimate, build_fermi_mesh,
                  decay_check, dilation_transform, strong_total_curvature,
                  weighted_Lq_norm, weighted_sobolev_norm)

__version__ = "0.1.0"

BACKEND = _backend.IMPLEMENTATION
