"""Entropy-conservative and entropy-stable SBP/DGSEM discretizations for
nonconservative hyperbolic systems."""

from .sbp import (SbpOperator, build_gll_operator, polynomial_accuracy,
                  skew_extended_derivative, verify_sbp_property)
from .mesh import (CurvilinearMesh2D, Mesh1D, build_mesh_1d, build_mesh_2d,
                   check_metric_identities, warp_map, warped_square_mesh)
from .systems import (EntropyPair, NonconsTerm, SystemDefinition,
                      check_entropy_compatibility, make_system)
from .fluxes import (FluxSet, advection_fluxset, coupled_burgers_fluxset,
                     euler_ec_kep_fluxset, euler_es_fluxset, logarithmic_mean,
                     make_fluxset, monomial_ec1_fluctuation,
                     monomial_ec1_fluxset, monomial_ec2_fluxset, product_mean,
                     sainte_marie_fluxset, shallow_water_fluxset)
from .conditions import (ConditionReport, check_conservative_ec,
                         check_fluctuation_condition, check_form_condition,
                         check_nonconservative_ec, check_well_balanced,
                         induced_entropy_flux, run_condition_check,
                         sample_states, sample_steady_states)
from .semidisc import (Discretization, SolutionField, rhs,
                       split_form_equivalence, surface_terms,
                       three_point_fv_rhs, volume_terms)
from .timeint import (IntegratorConfig, NumericalBlowupError, integrate,
                      stable_dt, step)
from .diagnostics import (TraceRecorder, component_totals, entropy_residual,
                          entropy_total, eoc, l2_error, mnorm,
                          total_functional, trace_to_csv)
from .experiments import (ExperimentConfig, ExperimentResult, PRESETS,
                          make_preset, run_convergence, run_experiment)

__version__ = "0.1.0"
