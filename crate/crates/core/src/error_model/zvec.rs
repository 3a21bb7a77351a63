use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extprec::ExtReal;

use super::model::NodeModel;

/// `r_jk = (xhat_k - xhat_j) / (x_k - x_j) - 1` for all `j`; entry `k` is zero.
///
/// Evaluated as `((xhat_k - x_k) - (xhat_j - x_j)) / (x_k - x_j)`, which keeps
/// the small quantity small throughout.
pub fn r_row(x: &[ExtReal], xhat: &[ExtReal], k: usize) -> Result<Vec<ExtReal>> {
    if x.len() != xhat.len() || k >= x.len() {
        return Err(Error::Domain(format!("bad row {k} for {} nodes", x.len())));
    }
    let dk = xhat[k] - x[k];
    (0..x.len())
        .map(|j| {
            if j == k {
                return Ok(ExtReal::ZERO);
            }
            let den = x[k] - x[j];
            if den.is_zero() || (xhat[k] - xhat[j]).is_zero() {
                return Err(Error::Domain(format!("nodes {j} and {k} coincide")));
            }
            Ok((dk - (xhat[j] - x[j])) / den)
        })
        .collect()
}

/// The relative weight perturbation `z_k = lambda_k(x) / lambda_k(xhat) - 1`
/// with the first-order quantities that control it.
#[derive(Clone, Debug)]
pub struct ZVector {
    pub z: Vec<ExtReal>,
    /// `s_k = sum_j r_jk`
    pub s: Vec<ExtReal>,
    /// `xi_k = sum_j |r_jk|`
    pub xi: Vec<ExtReal>,
}

impl ZVector {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn norm_inf(&self) -> f64 {
        self.z.iter().fold(0.0, |m, v| m.max(v.abs().to_f64()))
    }

    pub fn norm_1(&self) -> f64 {
        self.z
            .iter()
            .fold(ExtReal::ZERO, |s, v| s + v.abs())
            .to_f64()
    }

    pub fn xi_max(&self) -> f64 {
        self.xi.iter().fold(0.0, |m, v| m.max(v.to_f64()))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.z.iter().map(|v| v.to_f64()).collect()
    }
}

/// `z_k = prod_{j != k} (1 + r_jk) - 1`, accumulated as `e <- e + r + e r` so
/// that no information is lost next to 1.
pub fn z_from_r(model: &NodeModel) -> Result<ZVector> {
    let (x, xhat) = (model.x(), model.xhat());
    let rows: Vec<(ExtReal, ExtReal, ExtReal)> = (0..x.len())
        .into_par_iter()
        .map(|k| {
            let r = r_row(x, xhat, k)?;
            let mut e = ExtReal::ZERO;
            let mut s = ExtReal::ZERO;
            let mut xi = ExtReal::ZERO;
            for (j, &rj) in r.iter().enumerate() {
                if j == k {
                    continue;
                }
                e = e + rj + e * rj;
                s += rj;
                xi += rj.abs();
            }
            Ok((e, s, xi))
        })
        .collect::<Result<_>>()?;
    let mut out = ZVector {
        z: Vec::with_capacity(rows.len()),
        s: Vec::with_capacity(rows.len()),
        xi: Vec::with_capacity(rows.len()),
    };
    for (z, s, xi) in rows {
        out.z.push(z);
        out.s.push(s);
        out.xi.push(xi);
    }
    Ok(out)
}

/// `z` through the ratio of the two weight vectors; an independent path that
/// loses accuracy as `n` grows and is only meant as a cross-check.
pub fn z_via_lambda_ratio(model: &NodeModel) -> Vec<ExtReal> {
    model
        .lambda_x()
        .iter()
        .zip(model.lambda_hat())
        .map(|(&a, &b)| a / b - ExtReal::ONE)
        .collect()
}
