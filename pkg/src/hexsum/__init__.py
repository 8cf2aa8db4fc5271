"""Fourier summation on the hexagonal lattice.

Core layers: lattice geometry (homogeneous coordinates, folding, index
shells), grid/spectral transforms, closed-form Poisson-type kernels with
exact high-order radius derivatives, Taylor-Abel-Poisson means with
their deviation and K-functional machinery, and a CLI experiment driver.
"""

from .lattice import (
    HexIndex,
    HexPoint,
    LATTICE,
    fold,
    from_cartesian,
    index_shell,
    indices_up_to,
    is_in_omega,
    to_cartesian,
)
from .fourier import (
    GridFunction,
    HexGrid,
    ResolutionWarning,
    SpectralFormatError,
    SpectralFunction,
    analyze,
    load_spectral,
    lp_norm,
    make_grid,
    pairwise_sum,
    phi,
    save_spectral,
    scale_shells,
    subtract,
    synthesize,
    truncate_spectrum,
)
from .kernels import (
    BernsteinResult,
    bernstein_integral,
    classical_kernel_deriv,
    hex_kernel_closed,
    hex_kernel_deriv,
    hex_kernel_series,
    min_resolution,
    product_integral,
    series_tail_bound,
)
from .means import (
    KfunEstimate,
    SummationParams,
    apply_operator,
    apply_operator_derivative_form,
    deviation_l2_spectral,
    deviation_norm,
    kfun_estimate,
    lambda_coeff,
    lambda_complement,
    m_p,
    poisson_integral_convolution,
    poisson_integral_spectral,
    radial_derivative,
    remainder_coefficient_check,
    remainder_integral_norm,
)
from .families import (
    FamilySpec,
    basis_family,
    builtin_families,
    kernel_family,
    polynomial_family,
    random_spectrum,
    shell_decay_family,
)
from .verify import CheckResult, run_all_checks

__version__ = "0.1.0"

__all__ = [
    "HexIndex",
    "HexPoint",
    "LATTICE",
    "fold",
    "from_cartesian",
    "index_shell",
    "indices_up_to",
    "is_in_omega",
    "to_cartesian",
    "GridFunction",
    "HexGrid",
    "ResolutionWarning",
    "SpectralFormatError",
    "SpectralFunction",
    "analyze",
    "load_spectral",
    "lp_norm",
    "make_grid",
    "pairwise_sum",
    "phi",
    "save_spectral",
    "scale_shells",
    "subtract",
    "synthesize",
    "truncate_spectrum",
    "BernsteinResult",
    "bernstein_integral",
    "classical_kernel_deriv",
    "hex_kernel_closed",
    "hex_kernel_deriv",
    "hex_kernel_series",
    "min_resolution",
    "product_integral",
    "series_tail_bound",
    "KfunEstimate",
    "SummationParams",
    "apply_operator",
    "apply_operator_derivative_form",
    "deviation_l2_spectral",
    "deviation_norm",
    "kfun_estimate",
    "lambda_coeff",
    "lambda_complement",
    "m_p",
    "poisson_integral_convolution",
    "poisson_integral_spectral",
    "radial_derivative",
    "remainder_coefficient_check",
    "remainder_integral_norm",
    "FamilySpec",
    "basis_family",
    "builtin_families",
    "kernel_family",
    "polynomial_family",
    "random_spectrum",
    "shell_decay_family",
    "CheckResult",
    "run_all_checks",
    "__version__",
]
