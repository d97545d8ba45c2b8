"""fracstab: stability domains, dynamics and parameter-plane fractals of
linear and quadratic fractional-order difference systems.

The public surface groups into five areas:

* :mod:`fracstab.numerics` - branch-policy powers, principal argument, and
  the memory-kernel weights of the Caputo-type forward difference;
* :mod:`fracstab.stability` - membership classification against the
  stability domain, its parametric frontier, sector rays and area estimates;
* :mod:`fracstab.dynamics` - the memory-convolution integrator, linear
  system simulation, decay-rate fits and orbit fate classification;
* :mod:`fracstab.mandelbrot` - escape-time rasters of the fractional and
  classical quadratic parameter sets, fixed-point/eigenvalue maps, the
  parameter-plane stability frontier, and coverage reports;
* :mod:`fracstab.cli` - the ``fracstab`` command-line tool.
"""

from .dynamics import (
    DecayFit,
    OrbitFate,
    OrbitVerdict,
    Trajectory,
    classify_orbit,
    decay_exponent,
    frac_orbit,
    linear_orbit,
)
from .geometry import Window
from .mandelbrot import (
    CoverageReport,
    EigenPair,
    RasterGrid,
    RasterParams,
    classic_mandelbrot_raster,
    coverage_report,
    fixed_point_eigenvalues,
    fixed_points,
    frac_mandelbrot_point,
    frac_mandelbrot_raster,
    main_body_mask,
    main_cardioid,
    parameter_frontier,
    parameter_from_eigenvalue,
)
from .numerics import (
    BranchPolicy,
    CosArgument,
    KernelCoefficients,
    PowerKind,
    PowerResult,
    QuadrantTag,
    atan2_emulated,
    cos_argument,
    kernel_coefficients,
    principal_arg,
    real_power,
)
from .stability import (
    AreaEstimate,
    Polyline,
    StabilityVerdict,
    VerdictKind,
    boundary_curve,
    classify,
    classify_field,
    matignon_rays,
    membership_margin,
    region_area_green,
    region_area_grid,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AreaEstimate",
    "BranchPolicy",
    "CosArgument",
    "CoverageReport",
    "DecayFit",
    "EigenPair",
    "KernelCoefficients",
    "OrbitFate",
    "OrbitVerdict",
    "Polyline",
    "PowerKind",
    "PowerResult",
    "QuadrantTag",
    "RasterGrid",
    "RasterParams",
    "StabilityVerdict",
    "Trajectory",
    "VerdictKind",
    "Window",
    "atan2_emulated",
    "boundary_curve",
    "classic_mandelbrot_raster",
    "classify",
    "classify_field",
    "classify_orbit",
    "cos_argument",
    "coverage_report",
    "decay_exponent",
    "fixed_point_eigenvalues",
    "fixed_points",
    "frac_mandelbrot_point",
    "frac_mandelbrot_raster",
    "frac_orbit",
    "kernel_coefficients",
    "linear_orbit",
    "main_body_mask",
    "main_cardioid",
    "matignon_rays",
    "membership_margin",
    "parameter_frontier",
    "parameter_from_eigenvalue",
    "principal_arg",
    "real_power",
    "region_area_green",
    "region_area_grid",
]
