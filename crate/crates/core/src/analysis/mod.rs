//! Isoperimetric-type inequalities, existence conditions, Bernoulli data
//! along level lines, the thickness energy and shape functionals.

mod bernoulli;
mod energy;
mod families;
mod inequalities;
mod quadrature;
mod shape;

pub use bernoulli::{bernoulli_slice_data, BernoulliData, BernoulliSample};
pub use energy::{energy, energy_and_variation, EnergyRecord};
pub use families::{shift_to_match, FourierFamily, Normalization};
pub use inequalities::{
    boundary_gradient, cb_components, check_condition_cs, constant_slack_is_minimal, family_inequalities, check_faber_krahn, check_payne_rayner, check_upper_bound_u,
    fundamental_link, steiner_from_area, steiner_symmetrize, symmetrized_domain, write_reports_json, CbComponents,
    FundamentalLink, InequalityReport, Relation, SteinerThickness,
};
pub use quadrature::gauss_legendre;
pub use shape::{shape_functionals, shape_functionals_from, ShapeFunctionals};
