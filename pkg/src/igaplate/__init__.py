"""Isogeometric thermo-mechanical analysis of functionally graded plates.

NURBS-discretized higher-order shear deformation plate model with
moderate-rotation kinematics: nonlinear bending under combined transverse
pressure and through-thickness temperature fields, critical-temperature
buckling, and thermal post-buckling path tracing for graded ceramic/metal
sections.
"""

from .errors import CaseError, ConvergenceError, GeometryError, SolverError
from .materials import (
    MATERIALS,
    FgmSection,
    PhaseCoefficients,
    SectionStiffness,
    ThermalResultants,
    ThermalScalars,
    effective_property,
    lookup_phase,
    property_at,
    section_stiffness,
    thermal_resultants,
    thermal_scalars,
)
from .splines import (
    KnotVector,
    NurbsSurface,
    disk_patch,
    eval_bspline_basis,
    make_open_knot_vector,
    refine_knots,
    skew_patch,
    square_patch,
)
from .thermal import (
    KELVIN_OFFSET,
    TemperatureProfile,
    absolute_field,
    critical_delta_T,
    delta_field,
    eta_at,
    eta_converged,
    parametric_delta,
    temperature_at,
)
from .discretization import (
    ConstraintSet,
    DofMap,
    PlateMesh,
    assemble_initial_stress,
    assemble_linear,
    assemble_load,
    assemble_nonlinear,
    assemble_secant,
    assemble_tangent_and_internal,
    build_constraints,
    build_mesh,
    deflection_sampler,
    expand_vector,
    midsurface_state,
    reduce_matrix,
    reduce_vector,
    through_thickness_stress,
)
from .solvers import (
    BucklingResult,
    NewtonResult,
    PlateModel,
    PostBucklingTrace,
    StaticResult,
    TraceEntry,
    center_deflection,
    solve_linear_buckling,
    solve_linear_static,
    solve_newton,
    solve_thermal_postbuckling,
)

__version__ = "1.0.0"

__all__ = [
    "CaseError",
    "ConvergenceError",
    "GeometryError",
    "SolverError",
    "MATERIALS",
    "FgmSection",
    "PhaseCoefficients",
    "SectionStiffness",
    "ThermalResultants",
    "ThermalScalars",
    "effective_property",
    "lookup_phase",
    "property_at",
    "section_stiffness",
    "thermal_resultants",
    "thermal_scalars",
    "KnotVector",
    "NurbsSurface",
    "disk_patch",
    "eval_bspline_basis",
    "make_open_knot_vector",
    "refine_knots",
    "skew_patch",
    "square_patch",
    "KELVIN_OFFSET",
    "TemperatureProfile",
    "absolute_field",
    "critical_delta_T",
    "delta_field",
    "eta_at",
    "eta_converged",
    "parametric_delta",
    "temperature_at",
    "ConstraintSet",
    "DofMap",
    "PlateMesh",
    "assemble_initial_stress",
    "assemble_linear",
    "assemble_load",
    "assemble_nonlinear",
    "assemble_secant",
    "assemble_tangent_and_internal",
    "build_constraints",
    "build_mesh",
    "deflection_sampler",
    "expand_vector",
    "midsurface_state",
    "reduce_matrix",
    "reduce_vector",
    "through_thickness_stress",
    "BucklingResult",
    "NewtonResult",
    "PlateModel",
    "PostBucklingTrace",
    "StaticResult",
    "TraceEntry",
    "center_deflection",
    "solve_linear_buckling",
    "solve_linear_static",
    "solve_newton",
    "solve_thermal_postbuckling",
    "__version__",
]
