"""2D finite-volume Euler solver with troubled-cell-restricted MUSCL limiting.

The package couples a minimal shock-capturing solver (MUSCL + Koren limiter,
local Lax-Friedrichs flux) with a cell-average density indicator that flags
the cells actually needing limiting, and a diagnostics suite that scores
solution quality next to a shock via windowed error norms, total variation
and the monotonicity parameter.
"""

from .cases import (
    CaseDefinition,
    ObliqueShockSolution,
    aligned_oblique_shock_case,
    get_case,
    nonaligned_oblique_shock_case,
    oblique_shock_exact,
    riemann2d_case,
    shock_straddling_mask,
)
from .diagnostics import (
    LineProfile,
    RegionMetrics,
    ShockLineReport,
    build_line_profile,
    combine_regions,
    error_profile,
    l2_linf_window_report,
    l2_norm,
    linf_norm,
    monotonicity_report,
    shock_windows,
    total_variation,
)
from .errors import ConfigError, InadmissibleStateError, NumericalError
from .euler import (
    ConservedState,
    GasModel,
    PrimitiveState,
    conserved_from_primitive,
    lax_friedrichs_flux,
    max_wave_speed,
    physical_flux,
    primitive_from_conserved,
)
from .indicator import IndicatorConfig, TroubledMask, flag_troubled_cells, indicator_value
from .mesh import CellIndex, StructuredMesh, build_mesh
from .reconstruction import FacePair, koren_phi, muscl_face_states, reconstruct_all_faces
from .solver import (
    BoundarySpec,
    CellField,
    ResidualHistory,
    RunConfig,
    RunResult,
    advance_steady,
    advance_unsteady,
    compute_residual,
    initialize_field,
    make_boundary_conditions,
    residual_norm,
    run,
    run_first_order,
    solve_steady,
    solve_unsteady,
)

__version__ = "0.1.0"
