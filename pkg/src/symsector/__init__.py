"""Sectorial decompositions of the symmetric square of a surface.

Numerical side: the smoothed plurisubharmonic potential on the local
model, its Kahler form and downward gradient flow, the branch-direction
offset c, the two sector-boundary hypersurfaces and the chart height
functions.  Combinatorial side: enumeration of the decomposition of a
surface glued from completed components along arcs.
"""

from .geometry import (
    DegenerateFormError,
    SteinParams,
    SymPoint,
    TangentVector,
    check_psh,
    kahler_factor,
    phi_1d,
    phi_D1,
    phi_Dn,
    phi_sym_smoothed,
    smoothed_norm,
    sym2_potential,
    symplectic_form,
)
from .flow import (
    FlowSettings,
    NoEscapeError,
    Trajectory,
    compute_c,
    compute_c_batch,
    compute_delta,
    compute_delta_batch,
    flow_unperturbed_z,
    integrate_flow,
)
from .sectors import (
    H_MINUS,
    H_PLUS,
    SECTOR_LABELS,
    U_MM,
    U_MP,
    U_PP,
    UNRESOLVED,
    classify_by_flow,
    classify_closed_form,
    eval_I,
    hypersurface_point,
)
from .smoothing import SmoothingError, build_smoothing_table
from .surfaces import (
    CombSurface,
    Component,
    builtin_surface,
    enumerate_decomposition,
    euler_characteristic,
    lg_labels,
    validate,
)
from .verify import VerifyConfig, run_all, run_suite

__version__ = "0.1.0"

__all__ = [
    "CombSurface",
    "Component",
    "DegenerateFormError",
    "FlowSettings",
    "H_MINUS",
    "H_PLUS",
    "NoEscapeError",
    "SECTOR_LABELS",
    "SmoothingError",
    "SteinParams",
    "SymPoint",
    "TangentVector",
    "Trajectory",
    "U_MM",
    "U_MP",
    "U_PP",
    "UNRESOLVED",
    "VerifyConfig",
    "builtin_surface",
    "build_smoothing_table",
    "check_psh",
    "classify_by_flow",
    "classify_closed_form",
    "compute_c",
    "compute_c_batch",
    "compute_delta",
    "compute_delta_batch",
    "enumerate_decomposition",
    "euler_characteristic",
    "eval_I",
    "flow_unperturbed_z",
    "hypersurface_point",
    "integrate_flow",
    "kahler_factor",
    "lg_labels",
    "phi_1d",
    "phi_D1",
    "phi_Dn",
    "phi_sym_smoothed",
    "run_all",
    "run_suite",
    "smoothed_norm",
    "sym2_potential",
    "symplectic_form",
    "validate",
]
