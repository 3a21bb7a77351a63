use std::ops::Range;

use crate::cheb::gen_nodes_ext;
use crate::error::{Error, Result};
use crate::extprec::ExtReal;

use super::layout::BinLayout;

/// Chebyshev points stored as `x_k = b_l + u_k` with one base per bin.
#[derive(Clone, Debug)]
pub struct BinnedGrid {
    layout: BinLayout,
    n: usize,
    bin_of: Vec<usize>,
    u: Vec<f64>,
    u_ext: Option<Vec<ExtReal>>,
    ranges: Vec<Range<usize>>,
}

impl BinnedGrid {
    /// Assembles a grid from stored parts, checking that nodes are grouped by
    /// bin in increasing order and that every reconstruction lies in its bin.
    pub fn from_parts(
        layout: BinLayout,
        bin_of: Vec<usize>,
        u: Vec<f64>,
        u_ext: Option<Vec<ExtReal>>,
    ) -> Result<BinnedGrid> {
        if bin_of.len() != u.len() || u.len() < 2 {
            return Err(Error::Construction("bin and offset arrays disagree".into()));
        }
        if let Some(e) = &u_ext {
            if e.len() != u.len() {
                return Err(Error::Construction(
                    "exact offsets have the wrong length".into(),
                ));
            }
        }
        let mut ranges = vec![0..0; layout.len()];
        for (k, &l) in bin_of.iter().enumerate() {
            if l >= layout.len() {
                return Err(Error::Construction(format!("node {k} refers to bin {l}")));
            }
            if k > 0 && l < bin_of[k - 1] {
                return Err(Error::Construction(format!("node {k} is out of bin order")));
            }
            if ranges[l].is_empty() {
                ranges[l] = k..k + 1;
            } else {
                ranges[l].end = k + 1;
            }
            let x = ExtReal::sum_of(layout.base(l), u[k]);
            if !layout.contains_ext(l, x) {
                return Err(Error::Construction(format!(
                    "node {k} reconstructs to {x:?}, outside bin {l}"
                )));
            }
        }
        let n = u.len() - 1;
        Ok(BinnedGrid {
            layout,
            n,
            bin_of,
            u,
            u_ext,
            ranges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn layout(&self) -> &BinLayout {
        &self.layout
    }

    pub fn bin_of(&self) -> &[usize] {
        &self.bin_of
    }

    pub fn offsets(&self) -> &[f64] {
        &self.u
    }

    /// Exact offsets `x_k - b_l` of the exact nodes, when known.
    pub fn offsets_ext(&self) -> Option<&[ExtReal]> {
        self.u_ext.as_deref()
    }

    /// Node indices stored in bin `l`.
    pub fn range(&self, l: usize) -> Range<usize> {
        self.ranges[l].clone()
    }

    /// The represented node `b_l + u_k`, exactly.
    pub fn reconstructed_ext(&self, k: usize) -> ExtReal {
        ExtReal::sum_of(self.layout.base(self.bin_of[k]), self.u[k])
    }

    pub fn reconstructed_nodes_ext(&self) -> Vec<ExtReal> {
        (0..self.len()).map(|k| self.reconstructed_ext(k)).collect()
    }

    /// Nearest double to each represented node.
    pub fn reconstructed_nodes(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.reconstructed_ext(k).to_f64())
            .collect()
    }

    /// Relative offset errors `(u_hat_k - u_k) / u_k` (zero where `u_k = 0`).
    pub fn theta(&self) -> Option<Vec<f64>> {
        let ext = self.u_ext.as_ref()?;
        Some(
            self.u
                .iter()
                .zip(ext)
                .map(|(&uh, &ue)| {
                    if ue.is_zero() {
                        if uh == 0.0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        ((ExtReal::from(uh) - ue) / ue).to_f64()
                    }
                })
                .collect(),
        )
    }
}

/// Exact offset of node `k` from base `b`.
///
/// Bases -1 and 1 use `2 sin^2(k pi / 2n)` and `-2 sin^2((n - k) pi / 2n)`,
/// which avoid the cancellation in `x_k -/+ 1`; any other base uses `x_k - b`.
/// Everything is in extended precision, so rounding once gives the nearest
/// double.
fn offset_ext(n: usize, k: usize, b: f64, x_ext: ExtReal) -> Result<ExtReal> {
    let half_angle = |m: usize| -> Result<ExtReal> {
        let s = (ExtReal::PI * m as f64 / (2 * n) as f64).sin()?;
        Ok(s.square().mul_pow2(1))
    };
    if b == -1.0 {
        half_angle(k)
    } else if b == 1.0 {
        Ok(-half_angle(n - k)?)
    } else {
        Ok(x_ext - ExtReal::from(b))
    }
}

/// Chebyshev points of degree `n` in binned form.
///
/// Each node goes to the bin of its exact value; if rounding the offset moves
/// the reconstruction across a boundary, the neighbouring bin is tried.
pub fn gen_binned_nodes(n: usize, layout: &BinLayout) -> Result<BinnedGrid> {
    let x_ext = gen_nodes_ext(n)?;
    let mut bin_of = Vec::with_capacity(n + 1);
    let mut u = Vec::with_capacity(n + 1);
    let mut u_ext = Vec::with_capacity(n + 1);
    for (k, &xk) in x_ext.iter().enumerate() {
        let home = layout
            .bin_index_ext(xk)
            .ok_or_else(|| Error::Construction(format!("node {k} = {xk:?} lies in no bin")))?;
        let candidates = [Some(home), home.checked_sub(1), Some(home + 1)];
        let mut placed = None;
        for l in candidates
            .into_iter()
            .flatten()
            .filter(|&l| l < layout.len())
        {
            let b = layout.base(l);
            let mut exact = offset_ext(n, k, b, xk)?;
            // no negative zero for nodes sitting on a base
            if exact.is_zero() {
                exact = ExtReal::ZERO;
            }
            let uk = exact.to_f64() + 0.0;
            if layout.contains_ext(l, ExtReal::sum_of(b, uk)) {
                placed = Some((l, uk, exact));
                break;
            }
        }
        let (l, uk, exact) = placed
            .ok_or_else(|| Error::Construction(format!("node {k} cannot be placed in any bin")))?;
        bin_of.push(l);
        u.push(uk);
        u_ext.push(exact);
    }
    BinnedGrid::from_parts(layout.clone(), bin_of, u, Some(u_ext))
}

/// Step (a): the bin of `t` and the exact offset `t - b_l`.
pub fn locate_bin(t: f64, layout: &BinLayout) -> Result<(usize, f64)> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("point {t} lies outside [-1, 1]")));
    }
    let l = layout
        .bin_index(t)
        .ok_or_else(|| Error::Domain(format!("point {t} is not covered by the layout")))?;
    Ok((l, t - layout.base(l)))
}

/// Step (b): `t - x_k` as `(b_l - b_m) + (u_t - u_k)` for `t` in bin `l`.
#[inline]
pub fn binned_diff(l: usize, u_t: f64, grid: &BinnedGrid, k: usize) -> f64 {
    let m = grid.bin_of[k];
    (grid.layout.base(l) - grid.layout.base(m)) + (u_t - grid.u[k])
}
