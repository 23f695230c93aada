"""Finite-dimensional vector lattices, positively homogeneous functions,
and the function calculus they generate.

The package provides three interchangeable evaluation routes for applying a
continuous positively homogeneous function to a tuple of lattice vectors
(coordinatewise, structural on lattice terms, and piecewise-linear
interpolation with a certified error bound), Bochner-style averaging of
kernel slices with a matched quadrature scheme, and a small experiment
harness exposed through a service and a CLI.
"""

from .lattice import LatticeSpace, LatticeVector, coordinate_functional, ideal_norm
from .homogeneous import (
    HomogeneousFn,
    check_homogeneous,
    coordinate_projection,
    euclidean_norm,
    extend,
    max_norm_fn,
    p_power_sum_fn,
    sup_norm,
)
from .terms import LatticeTerm
from .triangulation import (
    Triangulation,
    build_triangulation,
    cached_triangulation,
    hat,
    hat_terms,
    interpolate,
    mesh_to_csv,
    pl_extend,
    pl_to_lattice_term,
    pl_values,
    random_sphere_points,
)
from .calculus import (
    CalculusContext,
    InterpolatedResult,
    p_sum,
    phi_approx,
    phi_pointwise,
    phi_term,
    term_function,
)
from .bochner import (
    Kernel,
    MeasureSpace,
    SupIntegrabilityReport,
    bochner_integral,
    check_sup_integrable,
    integrate_kernel,
    slice_sup,
)
from .kernels import (
    counterexample_kernel,
    kalton_kernel,
    kalton_measure,
    resolve_kernel,
    square_kernel,
    zero_kernel,
)
from .config import ConfigError, ExperimentConfig, config_from_mapping, parse_config_text
from .experiments import (
    EXIT_DIVERGENT,
    EXIT_FAIL,
    EXIT_NOT_HOMOGENEOUS,
    EXIT_PASS,
    ExperimentReport,
    run_approx,
    run_counterexample,
    run_experiment,
    run_kalton,
    run_verify,
)

__version__ = "0.1.0"

__all__ = [
    "LatticeSpace",
    "LatticeVector",
    "coordinate_functional",
    "ideal_norm",
    "HomogeneousFn",
    "check_homogeneous",
    "coordinate_projection",
    "euclidean_norm",
    "extend",
    "max_norm_fn",
    "p_power_sum_fn",
    "sup_norm",
    "LatticeTerm",
    "Triangulation",
    "build_triangulation",
    "cached_triangulation",
    "hat",
    "hat_terms",
    "interpolate",
    "mesh_to_csv",
    "pl_extend",
    "pl_to_lattice_term",
    "pl_values",
    "random_sphere_points",
    "CalculusContext",
    "InterpolatedResult",
    "p_sum",
    "phi_approx",
    "phi_pointwise",
    "phi_term",
    "term_function",
    "Kernel",
    "MeasureSpace",
    "SupIntegrabilityReport",
    "bochner_integral",
    "check_sup_integrable",
    "integrate_kernel",
    "slice_sup",
    "counterexample_kernel",
    "kalton_kernel",
    "kalton_measure",
    "resolve_kernel",
    "square_kernel",
    "zero_kernel",
    "ConfigError",
    "ExperimentConfig",
    "config_from_mapping",
    "parse_config_text",
    "EXIT_PASS",
    "EXIT_FAIL",
    "EXIT_DIVERGENT",
    "EXIT_NOT_HOMOGENEOUS",
    "ExperimentReport",
    "run_experiment",
    "run_verify",
    "run_kalton",
    "run_counterexample",
    "run_approx",
    "__version__",
]
