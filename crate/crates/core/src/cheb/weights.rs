use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extprec::ExtReal;
use crate::real::{Real, ScaledProduct};

/// Scaling convention of a weight vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// `lambda_k * 2^-n`, i.e. `prod_{j != k} 1 / (2 (x_k - x_j))`; magnitude O(1/n).
    NormalizedLambda,
    /// `(-1)^k delta_k` with `delta_0 = delta_n = 1/2` and 1 otherwise.
    SalzerSimplified,
}

/// Which node set a weight vector was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ExactNodes,
    RoundedNodes,
}

#[derive(Clone, Debug)]
pub struct WeightVector {
    pub values: Vec<f64>,
    pub kind: WeightKind,
    pub provenance: Provenance,
}

impl WeightVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `prod_{j != k} 1 / (2 (x_k - x_j))` for every `k`, with the running product
/// kept in mantissa/exponent form.
pub fn normalized_lambda_values<R: Real>(nodes: &[R]) -> Result<Vec<R>> {
    if nodes.len() < 2 {
        return Err(Error::Domain("need at least two nodes".into()));
    }
    (0..nodes.len())
        .into_par_iter()
        .map(|k| {
            let xk = nodes[k];
            let mut p = ScaledProduct::<R>::new();
            for (j, &xj) in nodes.iter().enumerate() {
                if j == k {
                    continue;
                }
                let d = xk - xj;
                if d.is_zero() {
                    return Err(Error::Domain(format!("duplicate nodes at {k} and {j}")));
                }
                p.mul(d + d);
            }
            Ok(p.recip())
        })
        .collect()
}

/// Normalized weights of the given (working-precision) nodes.
pub fn normalized_lambda(nodes: &[f64]) -> Result<WeightVector> {
    Ok(WeightVector {
        values: normalized_lambda_values(nodes)?,
        kind: WeightKind::NormalizedLambda,
        provenance: Provenance::RoundedNodes,
    })
}

/// Normalized weights of exact nodes, computed in extended precision and
/// rounded once.
pub fn normalized_lambda_exact(nodes_ext: &[ExtReal]) -> Result<WeightVector> {
    let values = normalized_lambda_values(nodes_ext)?
        .into_iter()
        .map(ExtReal::to_f64)
        .collect();
    Ok(WeightVector {
        values,
        kind: WeightKind::NormalizedLambda,
        provenance: Provenance::ExactNodes,
    })
}

/// Closed form of the normalized weights of the exact Chebyshev points,
/// `(-1)^(n-k) delta_k / (2n)`, in extended precision.
pub fn salzer_exact_lambda(n: usize) -> Vec<ExtReal> {
    (0..=n)
        .map(|k| {
            let delta = if k == 0 || k == n { 0.5 } else { 1.0 };
            let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            ExtReal::from(sign * delta) / (2 * n) as f64
        })
        .collect()
}

/// [`salzer_exact_lambda`] rounded once: the same vector as
/// [`normalized_lambda_exact`] on the exact points, in linear time.
pub fn chebyshev_lambda(n: usize) -> WeightVector {
    WeightVector {
        values: salzer_exact_lambda(n)
            .into_iter()
            .map(ExtReal::to_f64)
            .collect(),
        kind: WeightKind::NormalizedLambda,
        provenance: Provenance::ExactNodes,
    }
}

/// Salzer's simplified weights `(-1)^k delta_k`.
pub fn salzer_weights(n: usize) -> WeightVector {
    let values = (0..=n)
        .map(|k| {
            let delta = if k == 0 || k == n { 0.5 } else { 1.0 };
            if k % 2 == 0 {
                delta
            } else {
                -delta
            }
        })
        .collect();
    WeightVector {
        values,
        kind: WeightKind::SalzerSimplified,
        provenance: Provenance::ExactNodes,
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::cheb::gen_nodes_ext;

    #[test]
    fn closed_form_matches_product() {
        for n in [1, 2, 7, 64, 301] {
            let a = chebyshev_lambda(n);
            let b = normalized_lambda_exact(&gen_nodes_ext(n).unwrap()).unwrap();
            assert_eq!(a.values, b.values, "n={n}");
        }
    }

    #[test]
    fn three_nodes() {
        let w = normalized_lambda(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(w.values, vec![0.125, -0.25, 0.125]);
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert!(matches!(
            normalized_lambda(&[-1.0, 0.5, 0.5, 1.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn product_matches_closed_form() {
        for n in [4usize, 8, 16] {
            let x = gen_nodes_ext(n).unwrap();
            let w = normalized_lambda_values(&x).unwrap();
            let closed = salzer_exact_lambda(n);
            for k in 0..=n {
                let rel = ((w[k] - closed[k]) / closed[k]).abs().to_f64();
                assert!(rel < 1.0e-25, "n={n} k={k} rel={rel:e}");
            }
        }
    }

    #[test]
    fn alternating_signs() {
        let x = crate::cheb::gen_nodes_usual(100).unwrap();
        let w = normalized_lambda(&x).unwrap();
        for pair in w.values.windows(2) {
            assert!(pair[0] * pair[1] < 0.0);
        }
    }

    #[test]
    fn salzer_examples() {
        assert_eq!(salzer_weights(2).values, vec![0.5, -1.0, 0.5]);
        assert_eq!(salzer_weights(3).values, vec![0.5, -1.0, 1.0, -0.5]);
    }

    #[test]
    fn salzer_over_lambda_is_constant() {
        let n = 8;
        let x = gen_nodes_ext(n).unwrap();
        let lam = normalized_lambda_values(&x).unwrap();
        let s = salzer_weights(n);
        for k in 0..=n {
            let ratio = (ExtReal::from(s.values[k]) / lam[k]).to_f64();
            assert!((ratio - 2.0 * n as f64).abs() < 1.0e-25);
        }
    }

    #[test]
    fn no_overflow_for_large_n() {
        let n = 1 << 14;
        let x = crate::cheb::gen_nodes_usual(n).unwrap();
        let w = normalized_lambda(&x[..]).unwrap();
        for (k, v) in w.values.iter().enumerate() {
            let delta = if k == 0 || k == n { 0.5 } else { 1.0 };
            let expected = delta / (2 * n) as f64;
            assert!(v.is_finite());
            assert!((v.abs() - expected).abs() / expected < 1.0e-4);
        }
    }
}
