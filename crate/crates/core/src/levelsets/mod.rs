//! Superlevel sets `Ω^t`, level lines `Γ^t`, the thickness functions `d_t`
//! along the normal rays of the core, and the identities they satisfy.

mod checks;
mod contour;
mod io;
mod slice;

pub use checks::{
    check_coarea, check_estimate_d, check_first_order_detachment, check_green_per_slice, check_strict_inclusion,
    check_structure, check_thickness_ode, curvature_on_slice, grad_floor, quadrature_levels, Companion,
    CurvatureSample, DetachmentCheck, EstimateCheck, GreenCheck, IdentityCheck, InclusionCheck, LevelGrid, OdeCheck,
    StructureViolations,
};
pub use contour::{inside_loops, marching_squares, Contours};
pub use io::{write_curvature_table, write_slice_table, write_thickness_table, SliceRow, ThicknessRow};
pub use slice::{
    extract_slice, extract_slice_with, extract_slices, level_limit, ray_level, thickness_curve, LevelSetSlice,
    SliceOptions, Superlevel,
};
