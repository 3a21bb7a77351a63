//! Chebyshev points of the second kind, barycentric weights, and the two
//! barycentric evaluators.

mod eval;
mod lebesgue;
mod nodes;
mod weights;

pub(crate) use eval::{check_lengths, check_point};
pub use eval::{
    first_formula_eval, first_formula_generic, lagrange_basis_at, lagrange_basis_generic,
    second_formula_eval, second_formula_generic, FirstFormulaAcc, Formula, SecondFormulaAcc,
};
pub use lebesgue::{
    lebesgue_at, lebesgue_estimate, lebesgue_estimate_with, rho_estimate, rho_estimate_with,
    sample_points, DEFAULT_SAMPLES_PER_INTERVAL,
};
pub(crate) use nodes::check_increasing;
pub use nodes::{gen_nodes_ext, gen_nodes_usual, node_argument_ext, Grid, MAX_DEGREE};
pub use weights::{
    chebyshev_lambda, normalized_lambda, normalized_lambda_exact, normalized_lambda_values,
    salzer_exact_lambda, salzer_weights, Provenance, WeightKind, WeightVector,
};
