//! Extended-precision model of how node rounding perturbs the interpolant:
//! the weight perturbation `z`, the error polynomial, `b_n`, and numerical
//! checks of the bounds relating them.

mod bounds;
mod lipschitz;
mod model;
mod poly;
mod stats;
mod zvec;

pub use bounds::{bound_suite, bound_suite_with_bn, BoundOptions, BoundRecord, BoundReport};
pub use lipschitz::{lipschitz_bounds, sup_interp_error, LipschitzBounds};
pub use model::NodeModel;
pub use poly::{
    akj_row, basis_hat, bn_compute, error_poly_E, h_k, interp_hat, max_divided_difference,
    L_factor, Q_factor, Q_MIN_ABS_L,
};
pub use stats::{z_stats, ZStats, ZSTATS_EPS, ZSTATS_WINDOW};
pub use zvec::{r_row, z_from_r, z_via_lambda_ratio, ZVector};
