use rayon::prelude::*;

use crate::cheb::{lebesgue_estimate, sample_points};
use crate::error::Result;
use crate::extprec::ExtReal;

use super::model::NodeModel;
use super::poly::{interp_hat, max_divided_difference};
use super::zvec::ZVector;

/// The two ways of bounding the effect of node rounding on the second formula
/// for Lipschitz data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzBounds {
    /// `Lambda(nodes + centers) max |dy/dx| b_n`
    pub lp_bound: f64,
    /// `L rho ||z||_1`
    pub a: f64,
    /// `Lambda ||z||_inf ||f - P_y||_inf`
    pub b: f64,
    pub lambda_nodes_centers: f64,
    pub lambda_hat: f64,
    pub rho_hat: f64,
    pub max_divided_difference: f64,
    pub sup_interp_error: f64,
}

/// Sampled `||f - P_y||` with `P_y` interpolating `y` at the perturbed nodes.
pub fn sup_interp_error(
    model: &NodeModel,
    y: &[ExtReal],
    f: &(dyn Fn(ExtReal) -> Result<ExtReal> + Sync),
    samples_per_interval: usize,
) -> Result<f64> {
    let pts = sample_points(model.xhat_f64(), samples_per_interval);
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|&t| {
            let t = ExtReal::from(t);
            Ok((f(t)? - interp_hat(model, y, t)).abs().to_f64())
        })
        .collect::<Result<_>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// `lp_bound`, `A` and `B` for data `y = f(xhat)` from a function with
/// Lipschitz constant `lip_f`; `bn` comes from [`super::bn_compute`].
pub fn lipschitz_bounds(
    model: &NodeModel,
    z: &ZVector,
    y: &[ExtReal],
    f: &(dyn Fn(ExtReal) -> Result<ExtReal> + Sync),
    lip_f: f64,
    bn: f64,
    samples_per_interval: usize,
) -> Result<LipschitzBounds> {
    let mut v: Vec<f64> = model
        .xhat()
        .iter()
        .cloned()
        .chain(model.centers())
        .map(ExtReal::to_f64)
        .collect();
    v.sort_by(f64::total_cmp);
    let lambda_nodes_centers = lebesgue_estimate(&v, samples_per_interval)?;
    let lambda_hat = model.lebesgue_hat(samples_per_interval)?;
    let rho_hat = model.rho_hat(samples_per_interval)?;
    let mdd = max_divided_difference(model, y);
    let sup = sup_interp_error(model, y, f, samples_per_interval)?;
    Ok(LipschitzBounds {
        lp_bound: lambda_nodes_centers * mdd * bn,
        a: lip_f * rho_hat * z.norm_1(),
        b: lambda_hat * z.norm_inf() * sup,
        lambda_nodes_centers,
        lambda_hat,
        rho_hat,
        max_divided_difference: mdd,
        sup_interp_error: sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_model::{bn_compute, error_poly_E, z_from_r};

    #[test]
    fn lp_bound_dominates_error_polynomial() {
        let m = NodeModel::usual(96).unwrap();
        let z = z_from_r(&m).unwrap();
        let f = |t: ExtReal| (t * 10.0).cos();
        let y: Vec<ExtReal> = m.xhat().iter().map(|&t| f(t).unwrap()).collect();
        let bn = bn_compute(&m, &z).unwrap();
        let lb = lipschitz_bounds(&m, &z, &y, &f, 10.0, bn, 8).unwrap();
        assert!(lb.max_divided_difference <= 10.0);
        assert!(lb.sup_interp_error < 1.0e-15);
        for i in 0..300 {
            let t = ExtReal::from(-0.9985 + i as f64 / 150.0);
            let e = error_poly_E(&m, &y, &z, t).abs().to_f64();
            assert!(e <= lb.lp_bound, "t={t:?} e={e:e} bound={:e}", lb.lp_bound);
        }
        // for smooth data the interpolation-error term is negligible
        assert!(lb.b < lb.a);
    }
}
