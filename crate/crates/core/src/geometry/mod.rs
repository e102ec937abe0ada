//! Convex cores, thickness profiles, the domains they induce, and purely
//! geometric measures on them.

mod convex;
mod distance;
mod domain;
mod hull;
pub mod measures;
mod point;
mod profile;
mod spec;

pub use convex::{ConvexBody, CoreKind, CoreSample, RayLocation, DEFAULT_SAMPLES};
pub use distance::{directed_hausdorff, hausdorff_distance, polyline_hausdorff, symmetric_difference_area};
pub use domain::{is_star_shaped, make_domain, GnpDomain, Region};
pub use hull::{convex_hull, distance_to_polygon_boundary};
pub use measures::{
    convexity_gap, lipschitz_constant_tau, measure_report, thickness_tau, HalfSpace, MeasureReport, TauOptions,
    TauSample, write_tau_csv,
};
pub use point::{closed_length, point_segment_distance, polygon_area, ray_segment_intersection, segments_cross, Point};
pub use profile::{tails_core, FourierMode, ThicknessProfile};
pub use spec::{CoreSpec, DomainSpec, ProfileSpec};
