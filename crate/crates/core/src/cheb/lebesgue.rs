//! Sampled Lebesgue function and `rho` estimates.
//!
//! Every estimate is a maximum over a finite sampling grid and hence a lower
//! bound on the true supremum. Grids for `s` and `2s` samples per interval
//! are nested, so refining never decreases an estimate.

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::nodes::check_increasing;
use super::weights::normalized_lambda_values;

pub const DEFAULT_SAMPLES_PER_INTERVAL: usize = 32;

/// Sampling grid: `samples - 1` uniform interior points per interval, the
/// two floating-point neighbours of each endpoint inside the interval, two
/// points at a thousandth of the spacing from the endpoints, and the nodes.
pub fn sample_points(nodes: &[f64], samples_per_interval: usize) -> Vec<f64> {
    let s = samples_per_interval.max(1);
    let mut pts = Vec::with_capacity(nodes.len() * (s + 4));
    for pair in nodes.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let h = b - a;
        pts.push(a);
        let near = [a.next_up(), a + h / 1000.0, b - h / 1000.0, b.next_down()];
        for j in 1..s {
            pts.push(a + h * (j as f64 / s as f64));
        }
        pts.extend(near.iter().filter(|&&t| t > a && t < b));
    }
    if let Some(&last) = nodes.last() {
        pts.push(last);
    }
    pts
}

/// Lebesgue function `sum_j |l_j(t)|` from any consistently scaled weights.
pub fn lebesgue_at(nodes: &[f64], w: &[f64], t: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &wk) in nodes.iter().zip(w) {
        let d = t - x;
        if d == 0.0 {
            return 1.0;
        }
        let c = wk / d;
        num += c.abs();
        den += c;
    }
    num / den.abs()
}

fn check(nodes: &[f64], samples_per_interval: usize) -> Result<()> {
    if samples_per_interval < 8 {
        return Err(Error::Domain(format!(
            "need at least 8 samples per interval, got {samples_per_interval}"
        )));
    }
    if nodes.len() < 2 {
        return Err(Error::Domain("need at least two nodes".into()));
    }
    check_increasing(nodes)
}

/// Sampled Lebesgue constant, with weights computed from the nodes.
pub fn lebesgue_estimate(nodes: &[f64], samples_per_interval: usize) -> Result<f64> {
    check(nodes, samples_per_interval)?;
    let w = normalized_lambda_values(nodes)?;
    lebesgue_estimate_with(nodes, &w, samples_per_interval)
}

pub fn lebesgue_estimate_with(
    nodes: &[f64],
    w: &[f64],
    samples_per_interval: usize,
) -> Result<f64> {
    check(nodes, samples_per_interval)?;
    let pts = sample_points(nodes, samples_per_interval);
    Ok(pts
        .par_iter()
        .map(|&t| lebesgue_at(nodes, w, t))
        .reduce(|| 0.0, f64::max))
}

/// Sampled `max_{k,t} |l_k(t) (t - x_k)|`, which equals
/// `max_k |w_k| / min_t |sum_i w_i / (t - x_i)|`.
pub fn rho_estimate(nodes: &[f64]) -> Result<f64> {
    check(nodes, DEFAULT_SAMPLES_PER_INTERVAL)?;
    let w = normalized_lambda_values(nodes)?;
    rho_estimate_with(nodes, &w, DEFAULT_SAMPLES_PER_INTERVAL)
}

pub fn rho_estimate_with(nodes: &[f64], w: &[f64], samples_per_interval: usize) -> Result<f64> {
    check(nodes, samples_per_interval)?;
    let wmax = w.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let pts = sample_points(nodes, samples_per_interval);
    let dmin = pts
        .par_iter()
        .filter(|t| nodes.binary_search_by(|x| x.total_cmp(t)).is_err())
        .map(|&t| {
            let den: f64 = nodes.iter().zip(w).map(|(&x, &wk)| wk / (t - x)).sum();
            den.abs()
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(wmax / dmin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cheb::gen_nodes_usual;

    #[test]
    fn two_nodes() {
        assert_eq!(lebesgue_estimate(&[-1.0, 1.0], 16).unwrap(), 1.0);
        let rho = rho_estimate(&[-1.0, 1.0]).unwrap();
        assert!((rho - 0.5).abs() < 1.0e-15);
    }

    #[test]
    fn three_nodes_brute_force() {
        let x = [-1.0, 0.0, 1.0];
        let est = lebesgue_estimate(&x, 64).unwrap();
        // |l0| + |l1| + |l2| = |t(t-1)/2| + |1 - t^2| + |t(t+1)/2|
        let brute = (0..=200_000)
            .map(|i| {
                let t = -1.0 + i as f64 / 100_000.0;
                (t * (t - 1.0) / 2.0).abs() + (1.0 - t * t).abs() + (t * (t + 1.0) / 2.0).abs()
            })
            .fold(0.0, f64::max);
        assert!((brute - 1.25).abs() < 1.0e-9);
        assert!((est - brute).abs() < 1.0e-3);
    }

    #[test]
    fn salzer_grid_below_classical_bound() {
        let n = 1024;
        let x = gen_nodes_usual(n).unwrap();
        let est = lebesgue_estimate(&x, 16).unwrap();
        let bound = 2.0 / std::f64::consts::PI * (n as f64).ln() + 0.97;
        assert!(est <= bound, "{est} > {bound}");
        assert!(est > bound - 0.5);
    }

    #[test]
    fn rho_close_to_one_over_n() {
        for n in [64usize, 256] {
            let x = gen_nodes_usual(n).unwrap();
            let rho = rho_estimate(&x).unwrap();
            let rel = (rho * n as f64 - 1.0).abs();
            assert!(rel < 0.25, "n={n} rho*n={}", rho * n as f64);
        }
    }

    #[test]
    fn refinement_never_decreases() {
        let x = gen_nodes_usual(40).unwrap();
        let w = normalized_lambda_values(&x).unwrap();
        let mut prev_l = 0.0;
        let mut prev_r = 0.0;
        for s in [8, 16, 32, 64] {
            let l = lebesgue_estimate_with(&x, &w, s).unwrap();
            let r = rho_estimate_with(&x, &w, s).unwrap();
            assert!(l >= prev_l && r >= prev_r);
            prev_l = l;
            prev_r = r;
        }
    }

    #[test]
    fn too_few_samples() {
        assert!(lebesgue_estimate(&[-1.0, 1.0], 7).is_err());
    }
}
