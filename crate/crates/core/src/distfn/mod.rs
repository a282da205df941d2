//! Calculus of sub-probability distribution functions on `[0, ∞)`.

mod class;
pub mod csv;
mod law;
mod metric;
mod pl;
mod step;
mod transform;

pub use class::{validate_class_f, validate_class_ftilde, ClassReport, Rule, Verdict, Violation};
pub use law::{
    cf_breakpoints, cf_hitting, cf_return, exponential_cdf, exponential_return, make_law, Law,
    LimitLaw, DEFAULT_EXP_GRID, DEFAULT_EXP_HORIZON,
};
pub use metric::{derivative_convergence_check, grid_distance, sup_distance, uniform_grid, ClosedForm, DistFn};
pub use pl::PiecewiseLinear;
pub use step::StepFn;
pub use transform::{forward_transform, inverse_transform};
