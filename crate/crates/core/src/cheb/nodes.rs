use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::extprec::ExtReal;

/// Largest degree accepted by the node generators.
pub const MAX_DEGREE: usize = 1 << 24;

/// Chebyshev points of the second kind on `[-1, 1]` for one degree `n`.
///
/// `nodes` are the working-precision nodes ("rounded as usual"); `nodes_ext`,
/// when present, holds the exact nodes `-cos(k pi / n)` in extended precision.
#[derive(Clone, Debug)]
pub struct Grid {
    n: usize,
    nodes: Vec<f64>,
    nodes_ext: Option<Vec<ExtReal>>,
}

impl Grid {
    /// Nodes rounded as usual, i.e. `sin((2k - n) pi / (2n))` in working precision.
    pub fn usual(n: usize) -> Result<Grid> {
        Ok(Grid {
            n,
            nodes: gen_nodes_usual(n)?,
            nodes_ext: None,
        })
    }

    /// Rounded nodes together with their exact extended-precision counterparts.
    pub fn with_exact(n: usize) -> Result<Grid> {
        let nodes = gen_nodes_usual(n)?;
        let ext = gen_nodes_ext(n)?;
        Ok(Grid {
            n,
            nodes,
            nodes_ext: Some(ext),
        })
    }

    /// Wraps arbitrary strictly increasing nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Grid> {
        if nodes.len() < 2 {
            return Err(Error::Domain("a grid needs at least two nodes".into()));
        }
        check_increasing(&nodes)?;
        Ok(Grid {
            n: nodes.len() - 1,
            nodes,
            nodes_ext: None,
        })
    }

    /// Degree of the interpolant; the grid has `n + 1` nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn nodes_ext(&self) -> Option<&[ExtReal]> {
        self.nodes_ext.as_deref()
    }

    /// Relative node errors `theta_k = (xhat_k - x_k) / x_k` (zero where `x_k = 0`).
    pub fn theta(&self) -> Option<Vec<f64>> {
        let ext = self.nodes_ext.as_ref()?;
        Some(
            self.nodes
                .iter()
                .zip(ext)
                .map(|(&xh, &x)| {
                    if x.is_zero() {
                        0.0
                    } else {
                        ((ExtReal::from(xh) - x) / x).to_f64()
                    }
                })
                .collect(),
        )
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "degree must satisfy 1 <= n <= {MAX_DEGREE}, got {n}"
        )));
    }
    Ok(())
}

pub(crate) fn check_increasing<T: PartialOrd + std::fmt::Debug>(nodes: &[T]) -> Result<()> {
    for (k, pair) in nodes.windows(2).enumerate() {
        if pair[0] >= pair[1] {
            return Err(Error::Domain(format!(
                "nodes must be strictly increasing: x[{k}] = {:?} >= x[{}] = {:?}",
                pair[0],
                k + 1,
                pair[1]
            )));
        }
    }
    Ok(())
}

/// Working-precision Chebyshev points of the second kind.
///
/// Node `k` is `sin((2k - n) pi / (2n))` evaluated in `f64`; the endpoints are
/// exactly `-1` and `1` and the right half mirrors the left half.
#[allow(clippy::needless_range_loop)]
pub fn gen_nodes_usual(n: usize) -> Result<Vec<f64>> {
    check_degree(n)?;
    let mut nodes = vec![0.0; n + 1];
    let denom = (2 * n) as f64;
    for k in 0..=n / 2 {
        let m = 2 * k as i64 - n as i64;
        nodes[k] = (m as f64 * PI / denom).sin();
    }
    for k in (n / 2 + 1)..=n {
        nodes[k] = -nodes[n - k];
    }
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    check_increasing(&nodes)?;
    Ok(nodes)
}

/// The angle `(2k - n) pi / (2n)` in extended precision.
pub fn node_argument_ext(n: usize, k: usize) -> ExtReal {
    let m = 2 * k as i64 - n as i64;
    ExtReal::PI * (m as f64) / ((2 * n) as f64)
}

/// Exact Chebyshev points `-cos(k pi / n)` in extended precision.
#[allow(clippy::needless_range_loop)]
pub fn gen_nodes_ext(n: usize) -> Result<Vec<ExtReal>> {
    check_degree(n)?;
    let mut nodes = vec![ExtReal::ZERO; n + 1];
    for k in 0..=n / 2 {
        // sin(-pi/6) is the only rational interior value besides 0
        nodes[k] = if 3 * (n - 2 * k) == n {
            ExtReal::from(-0.5)
        } else {
            node_argument_ext(n, k).sin()?
        };
    }
    for k in (n / 2 + 1)..=n {
        nodes[k] = -nodes[n - k];
    }
    nodes[0] = ExtReal::from(-1.0);
    nodes[n] = ExtReal::ONE;
    check_increasing(&nodes).map_err(|e| Error::Construction(e.to_string()))?;
    Ok(nodes)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    #[test]
    fn rational_nodes_are_exact() {
        for n in [3, 6, 1083] {
            let x = gen_nodes_ext(n).unwrap();
            assert_eq!(x[n / 3], ExtReal::from(-0.5));
            assert_eq!(x[n - n / 3], ExtReal::from(0.5));
        }
        assert!(gen_nodes_ext(6).unwrap()[3].is_zero());
    }

    #[test]
    fn small_grids() {
        assert_eq!(gen_nodes_usual(2).unwrap(), vec![-1.0, 0.0, 1.0]);
        let x = gen_nodes_usual(4).unwrap();
        assert_eq!(x[1], -0.7071067811865475);
        assert_eq!(x[2], 0.0);
        for n in [6, 10, 100, 1000] {
            let x = gen_nodes_usual(n).unwrap();
            assert_eq!(x[n / 2], 0.0);
        }
    }

    #[test]
    fn usual_nodes_are_symmetric() {
        for n in [1, 2, 7, 64, 999] {
            let x = gen_nodes_usual(n).unwrap();
            for k in 0..=n {
                assert_eq!(x[n - k], -x[k]);
            }
        }
    }

    #[test]
    fn ext_nodes_small() {
        let x = gen_nodes_ext(2).unwrap();
        assert_eq!(x[0], ExtReal::from(-1.0));
        assert!(x[1].is_zero());
        assert_eq!(x[2], ExtReal::ONE);

        let x = gen_nodes_ext(4).unwrap();
        // -sqrt(2)/2 to 34 digits
        let half_sqrt2 = ExtReal::new(std::f64::consts::FRAC_1_SQRT_2, -4.833646656726457e-17);
        assert!((x[1] + half_sqrt2).abs().to_f64() < 1.0e-28);
    }

    #[test]
    fn ext_and_usual_nodes_agree_to_an_ulp() {
        for n in [8usize, 64, 512] {
            let g = Grid::with_exact(n).unwrap();
            let ext = g.nodes_ext().unwrap();
            let mut exact_matches = 0;
            for k in 0..=n {
                let r = ext[k].to_f64();
                let xh = g.nodes()[k];
                if r == xh {
                    exact_matches += 1;
                } else {
                    let ulp = (r.abs().next_up() - r.abs()).max(f64::MIN_POSITIVE);
                    assert!((r - xh).abs() <= ulp, "n={n} k={k}");
                }
            }
            assert!(exact_matches * 2 > n);
        }
    }

    #[test]
    fn degree_limits() {
        assert!(gen_nodes_usual(0).is_err());
        assert!(gen_nodes_usual(MAX_DEGREE + 1).is_err());
        assert!(Grid::from_nodes(vec![0.0, 0.0]).is_err());
        assert!(Grid::from_nodes(vec![-1.0, 1.0]).is_ok());
    }
}
