//! Numerical checks of the perturbation bounds. Each record keeps the worst
//! case over everything it ranges over (nodes, sample points, test vectors),
//! so a record is satisfied exactly when the bound holds everywhere sampled.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::cheb::{
    first_formula_generic, normalized_lambda_values, sample_points, second_formula_generic,
};
use crate::error::{Error, Result};
use crate::extprec::ExtReal;

use super::model::NodeModel;
use super::poly::{akj_row, basis_hat, error_poly_E};
use super::zvec::{r_row, z_from_r, ZVector};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRecord {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub grid: String,
    pub records: Vec<BoundRecord>,
}

impl BoundReport {
    pub fn all_satisfied(&self) -> bool {
        self.records.iter().all(|r| r.satisfied)
    }

    pub fn get(&self, name: &str) -> Option<&BoundRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n,grid,bound,lhs,rhs,satisfied,detail")?;
        for r in &self.records {
            writeln!(
                f,
                "{},{},{},{:?},{:?},{},{}",
                self.n, self.grid, r.name, r.lhs, r.rhs, r.satisfied, r.detail
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BoundOptions {
    /// Sampling density for the checks that range over `t`.
    pub samples_per_interval: usize,
    /// Checks that evaluate interpolants at every sample point run only up
    /// to this degree.
    pub dense_max_n: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            samples_per_interval: 8,
            dense_max_n: 512,
        }
    }
}

/// Record for `lhs <= rhs` over a family of pairs: keeps the pair with the
/// largest `lhs - rhs`.
fn worst(
    name: &'static str,
    pairs: impl IntoIterator<Item = (ExtReal, ExtReal)>,
    detail: impl Into<String>,
) -> BoundRecord {
    let mut best: Option<(ExtReal, ExtReal, ExtReal)> = None;
    for (l, r) in pairs {
        let m = l - r;
        if best.is_none_or(|(bm, _, _)| m > bm) {
            best = Some((m, l, r));
        }
    }
    let (lhs, rhs) = best.map_or((0.0, 0.0), |(_, l, r)| (l.to_f64(), r.to_f64()));
    BoundRecord {
        name,
        lhs,
        rhs,
        satisfied: lhs <= rhs,
        detail: detail.into(),
    }
}

fn e(v: f64) -> ExtReal {
    ExtReal::from(v)
}

/// Absolute rounding noise of an extended-precision barycentric evaluation
/// with `n + 1` terms, Lebesgue function `lam` and data bounded by `ymax`.
fn dd_noise(n: usize, lam: ExtReal, ymax: f64) -> ExtReal {
    lam * (64.0 * (n + 1) as f64 * 2f64.powi(-104) * ymax.max(1.0))
}

/// Lebesgue function of arbitrary nodes and weights, in extended precision.
fn lebesgue_fn(nodes: &[ExtReal], w: &[ExtReal], t: ExtReal) -> ExtReal {
    let mut num = ExtReal::ZERO;
    let mut den = ExtReal::ZERO;
    for (&x, &wk) in nodes.iter().zip(w) {
        let d = t - x;
        if d.is_zero() {
            return ExtReal::ONE;
        }
        let c = wk / d;
        num += c.abs();
        den += c;
    }
    num / den.abs()
}

fn zk_records(z: &ZVector, out: &mut Vec<BoundRecord>) -> Result<()> {
    let hyp = worst("zk_hypothesis", [(e(z.xi_max()), e(1.0))], "max xi < 1");
    let ok = z.xi_max() < 1.0;
    out.push(hyp);
    if !ok {
        return Ok(());
    }
    let one = ExtReal::ONE;
    let upper =
        z.xi.iter()
            .zip(z.z.iter().zip(&z.s))
            .map(|(&xi, (&zk, &sk))| (zk - sk, xi.square() / (one - xi)));
    out.push(worst("zk_upper", upper, "z_k - s_k <= xi^2/(1-xi)"));
    let lower =
        z.xi.iter()
            .zip(z.z.iter().zip(&z.s))
            .map(|(&xi, (&zk, &sk))| {
                let q = one - xi;
                let x2 = xi.square();
                (-(x2 / (q * q * q)) * (one + x2.mul_pow2(-2)), zk - sk)
            });
    out.push(worst(
        "zk_lower",
        lower,
        "-xi^2/(1-xi)^3 (1+xi^2/4) <= z_k - s_k",
    ));
    Ok(())
}

fn xi_record(model: &NodeModel, z: &ZVector) -> BoundRecord {
    let n = model.n() as f64;
    let theta = model.theta_inf();
    if model.label() == "usual" {
        let rhs = 2.6 * theta * n * n;
        worst(
            "xi_rounded_nodes",
            [(e(z.xi_max()), e(rhs))],
            format!("max xi <= 2.6 theta n^2, theta = {theta:e}"),
        )
    } else {
        let rhs = theta * (3.2 + 2.3 * n + 4.3 * n * (n + 1.0).ln());
        worst(
            "xi_binned_nodes",
            [(e(z.xi_max()), e(rhs))],
            format!("max xi <= theta (3.2 + 2.3n + 4.3n ln(n+1)), theta = {theta:e}"),
        )
    }
}

fn distance_sum_records(model: &NodeModel, out: &mut Vec<BoundRecord>) {
    let x = model.x();
    let n = model.n() as f64;
    let sums: Vec<f64> = (0..x.len())
        .into_par_iter()
        .map(|k| {
            x.iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(0.0, |s, (_, &xj)| s + 1.0 / (x[k] - xj).abs().to_f64())
        })
        .collect();
    let max = sums.iter().cloned().fold(0.0, f64::max);
    out.push(worst(
        "inverse_distance_sum",
        [(e(max), e(1.3 * n * n))],
        "max_k sum_j 1/|x_k - x_j| < 1.3 n^2",
    ));
    let end = x[1..]
        .iter()
        .fold(0.0, |s, &xj| s + 1.0 / (xj - x[0]).to_f64());
    out.push(worst(
        "endpoint_distance_sum",
        [(e(end), e(0.9 * n * n))],
        "sum_j 1/(x_j - x_0) < 0.9 n^2",
    ));
}

const LEBESGUE_SAMPLES: usize = 64;
const LEBESGUE_CUSHION: f64 = 1.001;

fn lebesgue_records(
    model: &NodeModel,
    z: &ZVector,
    opts: &BoundOptions,
    out: &mut Vec<BoundRecord>,
) -> Result<()> {
    let n = model.n();
    let delta = z.xi_max();
    let spacing = model
        .x()
        .windows(2)
        .map(|p| (p[1] - p[0]).to_f64())
        .fold(f64::INFINITY, f64::min);
    let shift = model
        .x()
        .iter()
        .zip(model.xhat())
        .map(|(&a, &b)| (b - a).abs().to_f64())
        .fold(0.0, f64::max);
    out.push(worst(
        "lebesgue_hypothesis",
        [(e(delta), e(0.01)), (e(shift), e(0.1 * spacing))],
        "delta <= 0.01 and |xhat - x| <= spacing / 10",
    ));
    // the estimate is a lower bound; dense sampling plus a small cushion
    // makes it safe to compare against an upper bound
    let est = model.lebesgue_hat(opts.samples_per_interval.max(LEBESGUE_SAMPLES))?;
    let rhs = (1.0 + 4.0 * delta) * (2.0 / PI * (n as f64).ln() + 0.97);
    out.push(worst(
        "lebesgue_perturbed",
        [(e(LEBESGUE_CUSHION * est), e(rhs))],
        format!(
            "1.001 * sampled Lambda(xhat) <= (1+4 delta)((2/pi) ln n + 0.97), delta = {delta:e}"
        ),
    ));
    Ok(())
}

/// Vectors with `||v||_1 < 1` on which the product inequalities are checked:
/// two rows of `r`, the one-entry extremes, and a mixed-sign vector.
fn prod_test_vectors(model: &NodeModel) -> Result<Vec<Vec<ExtReal>>> {
    let n = model.n();
    let mut vs = Vec::new();
    for k in [0, n / 2] {
        let mut r = r_row(model.x(), model.xhat(), k)?;
        r.remove(k);
        vs.push(r);
    }
    // a single negative entry attains the first upper bound; these are exact
    for d in [0.5, -0.5, 0.75, -0.75] {
        vs.push(vec![e(d), ExtReal::ZERO, ExtReal::ZERO]);
    }
    let raw: Vec<f64> = (0..12)
        .map(|i| if i % 3 == 0 { -1.0 } else { 1.0 } / (i + 1) as f64)
        .collect();
    let norm: f64 = raw.iter().map(|v| v.abs()).sum();
    vs.push(raw.iter().map(|v| e(0.6 * v / norm)).collect());
    vs.push(raw.iter().map(|v| e(0.6 * v.abs() / norm)).collect());
    Ok(vs)
}

fn prod_records(model: &NodeModel, out: &mut Vec<BoundRecord>) -> Result<()> {
    let one = ExtReal::ONE;
    let mut recip_lo = Vec::new();
    let mut recip_hi = Vec::new();
    let mut prod_lo = Vec::new();
    let mut prod_hi = Vec::new();
    for v in prod_test_vectors(model)? {
        let s = v.iter().fold(ExtReal::ZERO, |a, &b| a + b);
        let a = v.iter().fold(ExtReal::ZERO, |acc, &b| acc + b.abs());
        if a >= one {
            continue;
        }
        // products minus one, accumulated without going through 1 + small
        let mut p_recip = ExtReal::ZERO;
        let mut p = ExtReal::ZERO;
        for &vk in &v {
            let rk = -vk / (one + vk);
            p_recip = p_recip + rk + p_recip * rk;
            p = p + vk + p * vk;
        }
        let q = one - a;
        recip_lo.push((ExtReal::ZERO, p_recip + s));
        recip_hi.push((p_recip + s, a.square() / q));
        prod_lo.push((
            -(a.square() / (q * q * q)) * (one + a.square().mul_pow2(-2)),
            p - s,
        ));
        prod_hi.push((p - s, s.square() / (one - s)));
    }
    out.push(worst(
        "prod_recip_lower",
        recip_lo,
        "0 <= prod 1/(1+v) - (1-s)",
    ));
    out.push(worst(
        "prod_recip_upper",
        recip_hi,
        "prod 1/(1+v) - (1-s) <= |v|^2/(1-|v|)",
    ));
    out.push(worst(
        "prod_lower",
        prod_lo,
        "-|v|^2/(1-|v|)^3 (1+|v|^2/4) <= prod (1+v) - (1+s)",
    ));
    out.push(worst(
        "prod_upper",
        prod_hi,
        "prod (1+v) - (1+s) <= s^2/(1-s)",
    ));
    Ok(())
}

/// `max_k |sum_j a_kj|`, and `b_n` from the same rows.
fn akj_records(model: &NodeModel, z: &ZVector, out: &mut Vec<BoundRecord>) -> Result<f64> {
    let n = model.n();
    let xh = model.xhat();
    let rows: Vec<(ExtReal, f64)> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let row = akj_row(model, z, k)?;
            let sum = row.iter().fold(ExtReal::ZERO, |s, &v| s + v);
            let mut suffix = ExtReal::ZERO;
            let mut bn = ExtReal::ZERO;
            for i in (1..row.len()).rev() {
                suffix += row[i];
                bn += (xh[i] - xh[i - 1]) * suffix.abs();
            }
            Ok((sum.abs(), bn.to_f64()))
        })
        .collect::<Result<_>>()?;
    out.push(worst(
        "akj_zero_sum",
        rows.iter().map(|&(s, _)| (s, e(1.0e-28))),
        "max_k |sum_j a_kj| <= 1e-28",
    ));
    Ok(rows.iter().map(|&(_, b)| b).fold(0.0, f64::max))
}

/// Sample points that are not nodes, in extended precision.
fn dense_points(model: &NodeModel, spi: usize) -> Vec<ExtReal> {
    let xh = model.xhat();
    sample_points(model.xhat_f64(), spi)
        .into_iter()
        .map(ExtReal::from)
        .filter(|&t| xh.binary_search_by(|x| x.partial_cmp(&t).unwrap()).is_err())
        .collect()
}

struct DensePoint {
    lam: ExtReal,
    first_diff: ExtReal,
    second_diff: ExtReal,
    e_abs: ExtReal,
    pz: ExtReal,
    back_identity: ExtReal,
    back_worst: (ExtReal, ExtReal),
    e_2n: (ExtReal, ExtReal),
}

fn dense_records(
    model: &NodeModel,
    y: &[ExtReal],
    z: &ZVector,
    opts: &BoundOptions,
    out: &mut Vec<BoundRecord>,
) -> Result<()> {
    let n = model.n();
    let one = ExtReal::ONE;
    let xh = model.xhat();
    let lx = model.lambda_x();
    let ymax = y.iter().fold(0.0_f64, |m, v| m.max(v.abs().to_f64()));
    let zinf = e(z.norm_inf());
    let yz: Vec<ExtReal> = y.iter().zip(&z.z).map(|(&a, &b)| a * b).collect();
    let yz_inf = yz
        .iter()
        .fold(ExtReal::ZERO, |m, v| if v.abs() > m { v.abs() } else { m });

    // nodes and centers for the degree-2n interpolation of E
    let centers = model.centers();
    let mut v_nodes: Vec<ExtReal> = xh.iter().chain(&centers).cloned().collect();
    v_nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let v_w = normalized_lambda_values(&v_nodes)?;
    let e_centers = centers
        .par_iter()
        .map(|&c| error_poly_E(model, y, z, c).abs())
        .reduce(|| ExtReal::ZERO, |a, b| if b > a { b } else { a });

    let pts = dense_points(model, opts.samples_per_interval);
    let rows: Vec<DensePoint> = pts
        .par_iter()
        .map(|&t| {
            let l = basis_hat(model, t);
            let lam = l.iter().fold(ExtReal::ZERO, |s, v| s + v.abs());
            let dot = |v: &[ExtReal]| l.iter().zip(v).fold(ExtReal::ZERO, |s, (&a, &b)| s + a * b);
            let py = dot(y);
            let pz = dot(&z.z);
            let pyz = dot(&yz);
            let p = first_formula_generic(xh, lx, y, t);
            let q = second_formula_generic(xh, lx, y, t);
            // backward form: q interpolates y_k (1 + z_k) / (1 + P_z(t))
            let y_back: Vec<ExtReal> = y
                .iter()
                .zip(&z.z)
                .map(|(&yk, &zk)| yk * (one + zk) / (one + pz))
                .collect();
            let back_identity = (q - dot(&y_back)).abs();
            let lz = lam * zinf;
            let back_worst = y
                .iter()
                .zip(&y_back)
                .zip(&z.z)
                .map(|((&yk, &yb), &zk)| ((yb - yk).abs(), (zk.abs() + lz) / (one - lz) * yk.abs()))
                .fold((ExtReal::ZERO, ExtReal::ONE), |best, cur| {
                    if cur.0 - cur.1 > best.0 - best.1 {
                        cur
                    } else {
                        best
                    }
                });
            let lam_v = lebesgue_fn(&v_nodes, &v_w, t);
            DensePoint {
                lam,
                first_diff: (p - py).abs(),
                second_diff: (q - py).abs(),
                e_abs: (pyz - py * pz).abs(),
                pz,
                back_identity,
                back_worst,
                e_2n: ((pyz - py * pz).abs(), lam_v * e_centers),
            }
        })
        .collect();

    // at node k, p takes its limiting value y_k lambda_k(x) / lambda_k(xhat)
    let node_first: Vec<ExtReal> = (0..=n)
        .map(|k| (y[k] * (lx[k] / model.lambda_hat()[k]) - y[k]).abs())
        .collect();
    let sup_first = rows
        .iter()
        .map(|r| r.first_diff)
        .chain(node_first.iter().cloned())
        .fold(ExtReal::ZERO, |m, v| if v > m { v } else { m });
    let noise = |lam: ExtReal| dd_noise(n, lam, ymax);

    out.push(worst(
        "first_formula_lower",
        [(yz_inf, sup_first + noise(one))],
        "||y z|| <= sup |p(t; xhat, y, lambda(x)) - P_y(t)|",
    ));
    out.push(worst(
        "first_formula_upper",
        rows.iter()
            .map(|r| (r.first_diff, r.lam * yz_inf + noise(r.lam)))
            .chain(node_first.iter().map(|&v| (v, yz_inf + noise(one)))),
        "|p(t) - P_y(t)| <= Lambda(t) ||y z|| pointwise",
    ));
    out.push(worst(
        "second_formula_lower",
        rows.iter()
            .map(|r| (r.e_abs / (one + r.lam * zinf), r.second_diff + noise(r.lam))),
        "|E(t)|/(1 + Lambda(t)||z||) <= |q(t) - P_y(t)|",
    ));
    out.push(worst(
        "second_formula_upper",
        rows.iter()
            .map(|r| (r.second_diff, r.e_abs / (one - r.lam * zinf) + noise(r.lam))),
        "|q(t) - P_y(t)| <= |E(t)|/(1 - Lambda(t)||z||)",
    ));
    out.push(worst(
        "second_formula_pz",
        rows.iter()
            .map(|r| (r.pz.abs(), r.lam * zinf + noise(r.lam))),
        "|P_z(t)| <= Lambda(t)||z||",
    ));
    out.push(worst(
        "backward_identity",
        rows.iter().map(|r| (r.back_identity, noise(r.lam))),
        "q(t) = P_{y'}(t) with y'_k = y_k (1+z_k)/(1+P_z(t))",
    ));
    out.push(worst(
        "backward_perturbation",
        rows.iter()
            .map(|r| (r.back_worst.0, r.back_worst.1 + noise(one))),
        "|y'_k - y_k| <= (|z_k| + Lambda||z||)/(1 - Lambda||z||) |y_k|",
    ));
    out.push(worst(
        "error_poly_2n",
        rows.iter().map(|r| (r.e_2n.0, r.e_2n.1 + noise(r.lam))),
        "|E(t)| <= Lambda_{nodes+centers}(t) max_k |E(c_k)|",
    ));
    Ok(())
}

/// All bound checks for one node model and data vector `y` (values at the
/// perturbed nodes). Returns the records and `b_n`, which comes for free.
pub fn bound_suite_with_bn(
    model: &NodeModel,
    y: &[ExtReal],
    opts: &BoundOptions,
) -> Result<(BoundReport, f64)> {
    let n = model.n();
    if n < 2 {
        return Err(Error::Domain("bounds need n >= 2".into()));
    }
    if y.len() != n + 1 {
        return Err(Error::Domain(format!(
            "need {} data values, got {}",
            n + 1,
            y.len()
        )));
    }
    let z = z_from_r(model)?;
    let mut records = Vec::new();
    zk_records(&z, &mut records)?;
    records.push(xi_record(model, &z));
    distance_sum_records(model, &mut records);
    lebesgue_records(model, &z, opts, &mut records)?;
    prod_records(model, &mut records)?;
    let bn = akj_records(model, &z, &mut records)?;
    if n <= opts.dense_max_n {
        dense_records(model, y, &z, opts, &mut records)?;
    }
    Ok((
        BoundReport {
            n,
            grid: model.label().to_string(),
            records,
        },
        bn,
    ))
}

pub fn bound_suite(model: &NodeModel, y: &[ExtReal], opts: &BoundOptions) -> Result<BoundReport> {
    bound_suite_with_bn(model, y, opts).map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binned::layout_three;

    fn data(m: &NodeModel) -> Vec<ExtReal> {
        m.xhat()
            .iter()
            .map(|t| (*t * 10.0).cos().unwrap())
            .collect()
    }

    #[test]
    fn worst_picks_largest_margin() {
        let r = worst(
            "t",
            [(e(1.0), e(3.0)), (e(5.0), e(5.5)), (e(0.0), e(0.1))],
            "",
        );
        assert_eq!((r.lhs, r.rhs), (0.0, 0.1));
        assert!(r.satisfied);
        let r = worst("t", [(e(1.0), e(3.0)), (e(2.0), e(1.0))], "");
        assert!(!r.satisfied);
    }

    #[test]
    fn suite_holds_on_small_grids() {
        for n in [8, 33, 64] {
            for m in [
                NodeModel::usual(n).unwrap(),
                NodeModel::binned(n, &layout_three()).unwrap(),
            ] {
                let y = data(&m);
                let report = bound_suite(&m, &y, &BoundOptions::default()).unwrap();
                assert!(report.all_satisfied(), "{report}");
                assert!(report.get("error_poly_2n").is_some());
                for r in &report.records {
                    assert_eq!(r.satisfied, r.lhs <= r.rhs);
                }
            }
        }
    }

    #[test]
    fn dense_checks_can_be_skipped() {
        let m = NodeModel::usual(40).unwrap();
        let opts = BoundOptions {
            dense_max_n: 16,
            ..Default::default()
        };
        let report = bound_suite(&m, &data(&m), &opts).unwrap();
        assert!(report.get("first_formula_upper").is_none());
        assert!(report.all_satisfied());
    }

    #[test]
    fn violated_bounds_are_reported() {
        // a node pushed by a quarter of its spacing breaks the Lebesgue hypothesis
        let x = crate::cheb::gen_nodes_ext(8).unwrap();
        let mut xh = x.clone();
        xh[4] += (x[5] - x[4]).mul_pow2(-2);
        let m = NodeModel::from_nodes(x, xh, 0.25).unwrap();
        let y = data(&m);
        let report = bound_suite(&m, &y, &BoundOptions::default()).unwrap();
        assert!(!report.get("lebesgue_hypothesis").unwrap().satisfied);
    }
}
