//! The error polynomial `E = P_{yz} - P_y P_z` and the quantities built on it.
//! All interpolants are taken at the perturbed nodes, in extended precision.

use rayon::prelude::*;

use crate::cheb::lagrange_basis_generic;
use crate::error::{Error, Result};
use crate::extprec::ExtReal;
use crate::real::ScaledProduct;

use super::model::NodeModel;
use super::zvec::ZVector;

fn dot(a: &[ExtReal], b: &[ExtReal]) -> ExtReal {
    a.iter().zip(b).fold(ExtReal::ZERO, |s, (&u, &v)| s + u * v)
}

/// Lagrange basis of the perturbed nodes at `t`.
pub fn basis_hat(model: &NodeModel, t: ExtReal) -> Vec<ExtReal> {
    lagrange_basis_generic(model.xhat(), model.lambda_hat(), t)
}

/// The interpolant `P_v(t)` at the perturbed nodes.
pub fn interp_hat(model: &NodeModel, v: &[ExtReal], t: ExtReal) -> ExtReal {
    dot(&basis_hat(model, t), v)
}

/// `E(t) = P_{yz}(t) - P_y(t) P_z(t)`.
#[allow(non_snake_case)]
pub fn error_poly_E(model: &NodeModel, y: &[ExtReal], z: &ZVector, t: ExtReal) -> ExtReal {
    let l = basis_hat(model, t);
    let yz: Vec<ExtReal> = y.iter().zip(&z.z).map(|(&a, &b)| a * b).collect();
    dot(&l, &yz) - dot(&l, y) * dot(&l, &z.z)
}

/// `L(t) = 2^(n-1) / sqrt(1 - t^2) prod_k (t - xhat_k)`; for exact nodes this
/// is `-sin(n arccos t)`.
#[allow(non_snake_case)]
pub fn L_factor(model: &NodeModel, t: ExtReal) -> Result<f64> {
    let one_minus = ExtReal::ONE - t.square();
    if one_minus.to_f64() <= 0.0 {
        return Err(Error::Domain(format!("L is undefined at t = {t:?}")));
    }
    let mut p = ScaledProduct::<ExtReal>::new();
    for &x in model.xhat() {
        let d = t - x;
        p.mul(d + d);
    }
    // n + 1 doubled factors against the 2^(n-1) of the definition
    let v = p.times(ExtReal::from(0.25)).to_f64();
    Ok(v / one_minus.to_f64().sqrt())
}

/// Threshold below which `Q = E / L` is not reported.
pub const Q_MIN_ABS_L: f64 = 1.0e-6;

/// `Q(t) = E(t) / L(t)`, or `None` where `|L(t)|` is too small to divide by.
#[allow(non_snake_case)]
pub fn Q_factor(
    model: &NodeModel,
    y: &[ExtReal],
    z: &ZVector,
    t: ExtReal,
) -> Result<Option<ExtReal>> {
    let l = L_factor(model, t)?;
    if l.abs() < Q_MIN_ABS_L {
        return Ok(None);
    }
    Ok(Some(error_poly_E(model, y, z, t) / ExtReal::from(l)))
}

/// Row `a_kj = (z_j - P_z(c_k)) l_j(c_k)` at the center `c_k` (`k = 1..=n`),
/// so that `E(c_k) = sum_j a_kj y_j` for every `y`.
pub fn akj_row(model: &NodeModel, z: &ZVector, k: usize) -> Result<Vec<ExtReal>> {
    let n = model.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!(
            "center index must be in 1..={n}, got {k}"
        )));
    }
    let xh = model.xhat();
    let c = (xh[k - 1] + xh[k]).mul_pow2(-1);
    let l = basis_hat(model, c);
    let pz = dot(&l, &z.z);
    Ok(l.iter()
        .zip(&z.z)
        .map(|(&lj, &zj)| (zj - pz) * lj)
        .collect())
}

/// `h_k(y) = sum_j a_kj y_j`.
pub fn h_k(row: &[ExtReal], y: &[ExtReal]) -> ExtReal {
    dot(row, y)
}

/// `sum_i (xhat_i - xhat_{i-1}) |sum_{j >= i} a_kj|` for one row.
fn bn_row(xhat: &[ExtReal], row: &[ExtReal]) -> ExtReal {
    let mut suffix = ExtReal::ZERO;
    let mut total = ExtReal::ZERO;
    for i in (1..row.len()).rev() {
        suffix += row[i];
        total += (xhat[i] - xhat[i - 1]) * suffix.abs();
    }
    total
}

/// `b_n = max_k sum_i (xhat_i - xhat_{i-1}) |sum_{j >= i} a_kj|`, which bounds
/// `|E(c_k)|` by `b_n` times the largest divided difference of `y`.
pub fn bn_compute(model: &NodeModel, z: &ZVector) -> Result<f64> {
    let n = model.n();
    let rows: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|k| Ok(bn_row(model.xhat(), &akj_row(model, z, k)?).to_f64()))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().fold(0.0, f64::max))
}

/// Largest `|y_k - y_{k-1}| / (xhat_k - xhat_{k-1})`.
pub fn max_divided_difference(model: &NodeModel, y: &[ExtReal]) -> f64 {
    let xh = model.xhat();
    (1..y.len())
        .map(|k| ((y[k] - y[k - 1]) / (xh[k] - xh[k - 1])).abs().to_f64())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cheb::gen_nodes_ext;
    use crate::error_model::z_from_r;

    fn e(v: f64) -> ExtReal {
        ExtReal::from(v)
    }

    #[test]
    fn l_factor_n2() {
        let x = gen_nodes_ext(2).unwrap();
        let m = NodeModel::from_nodes(x.clone(), x, 0.0).unwrap();
        let t = e(std::f64::consts::FRAC_1_SQRT_2);
        assert!((L_factor(&m, t).unwrap() + 1.0).abs() < 1.0e-15);
        assert!(L_factor(&m, e(1.0)).is_err());
    }

    #[test]
    fn l_factor_matches_sine_form() {
        let n = 50;
        let x = gen_nodes_ext(n).unwrap();
        let m = NodeModel::from_nodes(x.clone(), x, 0.0).unwrap();
        for i in 1..40 {
            let t = -0.975 + 0.05 * i as f64;
            let want = -(n as f64 * t.acos()).sin();
            assert!(
                (L_factor(&m, e(t)).unwrap() - want).abs() < 1.0e-12,
                "t={t}"
            );
        }
    }

    #[test]
    fn error_poly_vanishes_at_nodes() {
        let m = NodeModel::usual(32).unwrap();
        let z = z_from_r(&m).unwrap();
        let y: Vec<ExtReal> = m.xhat().iter().map(|t| t.square()).collect();
        for &x in m.xhat() {
            assert!(error_poly_E(&m, &y, &z, x).is_zero());
        }
        // E is zero for constant data
        let ones = vec![ExtReal::ONE; 33];
        assert!(error_poly_E(&m, &ones, &z, e(0.3)).abs().to_f64() < 1.0e-30);
    }

    #[test]
    fn q_times_l_recovers_e() {
        let m = NodeModel::usual(64).unwrap();
        let z = z_from_r(&m).unwrap();
        let y: Vec<ExtReal> = m.xhat().iter().map(|t| t.cos().unwrap()).collect();
        let mut seen = 0;
        for i in 0..200 {
            let t = e(-0.995 + 0.01 * i as f64);
            if let Some(q) = Q_factor(&m, &y, &z, t).unwrap() {
                let l = L_factor(&m, t).unwrap();
                let back = q * ExtReal::from(l);
                let ev = error_poly_E(&m, &y, &z, t);
                assert!((back - ev).abs().to_f64() <= 1.0e-30);
                seen += 1;
            }
        }
        assert!(seen > 150);
    }

    #[test]
    fn akj_rows_reproduce_e_at_centers() {
        let m = NodeModel::usual(40).unwrap();
        let z = z_from_r(&m).unwrap();
        let y: Vec<ExtReal> = m.xhat().iter().map(|t| (*t * 3.0).sin().unwrap()).collect();
        let c = m.centers();
        for k in 1..=40 {
            let row = akj_row(&m, &z, k).unwrap();
            let sum = row.iter().fold(ExtReal::ZERO, |s, &v| s + v);
            assert!(sum.abs().to_f64() <= 1.0e-28);
            let ev = error_poly_E(&m, &y, &z, c[k - 1]);
            assert!((h_k(&row, &y) - ev).abs().to_f64() <= 1.0e-30, "k={k}");
        }
        assert!(akj_row(&m, &z, 0).is_err());
    }

    #[test]
    fn bn_row_by_hand() {
        let xh = [e(-1.0), e(0.0), e(1.0)];
        // suffix sums: i=2 -> 2, i=1 -> -1
        let row = [e(-1.0), e(-3.0), e(2.0)];
        assert_eq!(bn_row(&xh, &row), e(3.0));
    }

    #[test]
    fn bn_bounds_e_at_centers() {
        let m = NodeModel::usual(128).unwrap();
        let z = z_from_r(&m).unwrap();
        let bn = bn_compute(&m, &z).unwrap();
        assert!(bn > 0.0 && bn < 1.0e-14);
        let y: Vec<ExtReal> = m
            .xhat()
            .iter()
            .map(|t| (*t * 10.0).cos().unwrap())
            .collect();
        let lip = max_divided_difference(&m, &y);
        for c in m.centers() {
            let ev = error_poly_E(&m, &y, &z, c).abs().to_f64();
            assert!(ev <= bn * lip * (1.0 + 1.0e-10));
        }
    }
}
