use crate::error::{Error, Result};
use crate::extprec::ExtReal;

/// A partition of `[-1, 1]` into bins, each with a base point.
///
/// Bins left of `center` are `[lo, hi)`, the central bin is closed and bins
/// right of it are `(lo, hi]`, so the layout is symmetric under reflection.
#[derive(Clone, Debug, PartialEq)]
pub struct BinLayout {
    boundaries: Vec<f64>,
    bases: Vec<f64>,
    center: usize,
}

impl BinLayout {
    /// Builds a layout without checking any invariant; use
    /// [`verify_layout`](super::verify_layout) to inspect it.
    pub fn custom(boundaries: Vec<f64>, bases: Vec<f64>, center: usize) -> Result<BinLayout> {
        if boundaries.len() != bases.len() + 1 || center >= bases.len() {
            return Err(Error::Usage(format!(
                "{} boundaries, {} bases and center {center} do not describe a layout",
                boundaries.len(),
                bases.len()
            )));
        }
        Ok(BinLayout {
            boundaries,
            bases,
            center,
        })
    }

    /// Builds a layout and rejects it unless every structural check passes.
    pub fn checked(boundaries: Vec<f64>, bases: Vec<f64>, center: usize) -> Result<BinLayout> {
        let layout = BinLayout::custom(boundaries, bases, center)?;
        let report = super::verify_layout(&layout, None);
        if let Some(c) = report.checks.iter().find(|c| !c.passed) {
            return Err(Error::Construction(format!("{}: {}", c.name, c.detail)));
        }
        Ok(layout)
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn bases(&self) -> &[f64] {
        &self.bases
    }

    pub fn base(&self, l: usize) -> f64 {
        self.bases[l]
    }

    /// Index of the closed central bin.
    pub fn center(&self) -> usize {
        self.center
    }

    /// `(lo, hi)` of bin `l`.
    pub fn bounds(&self, l: usize) -> (f64, f64) {
        (self.boundaries[l], self.boundaries[l + 1])
    }

    /// Whether the bin includes its left and right endpoints.
    pub fn closure(&self, l: usize) -> (bool, bool) {
        use std::cmp::Ordering::*;
        match l.cmp(&self.center) {
            Less => (true, false),
            Equal => (true, true),
            Greater => (false, true),
        }
    }

    /// Bin containing `t`, following the boundary convention; `None` outside
    /// the covered range.
    pub fn bin_index(&self, t: f64) -> Option<usize> {
        let nb = self.bases.len();
        if !(t >= self.boundaries[0] && t <= self.boundaries[nb]) {
            return None;
        }
        let mut l = self.boundaries.partition_point(|&b| b <= t) - 1;
        if l == nb {
            l = nb - 1;
        }
        if l > self.center && t == self.boundaries[l] {
            l -= 1;
        }
        Some(l)
    }

    /// Exact membership test for an extended value.
    pub fn contains_ext(&self, l: usize, x: ExtReal) -> bool {
        let (lo, hi) = self.bounds(l);
        let (lc, rc) = self.closure(l);
        let lo = ExtReal::from(lo);
        let hi = ExtReal::from(hi);
        let above = if lc { x >= lo } else { x > lo };
        let below = if rc { x <= hi } else { x < hi };
        above && below
    }

    /// Bin containing an extended value, or `None`.
    pub fn bin_index_ext(&self, x: ExtReal) -> Option<usize> {
        let l = self.bin_index(x.hi())?;
        [l, l.wrapping_sub(1), l + 1]
            .into_iter()
            .filter(|&m| m < self.len())
            .find(|&m| self.contains_ext(m, x))
    }

    /// Short description used in reports and file headers.
    pub fn describe(&self) -> String {
        format!("{} bins", self.len())
    }
}

/// The three bins `[-1, -1/2)`, `[-1/2, 1/2]`, `(1/2, 1]` with bases -1, 0, 1.
pub fn layout_three() -> BinLayout {
    BinLayout::checked(vec![-1.0, -0.5, 0.5, 1.0], vec![-1.0, 0.0, 1.0], 1)
        .expect("three-bin layout is valid")
}

pub const MIN_DYADIC_LEVELS: u32 = 2;
pub const MAX_DYADIC_LEVELS: u32 = 40;

/// Dyadic layout with `4 levels - 1` bins.
///
/// Left half, from -1 inward: `[-1, 2^-L - 1)` based at -1, then
/// `[2^-k - 1, 2^(1-k) - 1)` for `k = L, ..., 2` and `[-2^-k, -2^-(k+1))` for
/// `k = 1, ..., L-1`, each based at its left end. The central bin is
/// `[-2^-L, 2^-L]` based at 0 and the right half is the mirror image.
pub fn layout_dyadic(levels: u32) -> Result<BinLayout> {
    if !(MIN_DYADIC_LEVELS..=MAX_DYADIC_LEVELS).contains(&levels) {
        return Err(Error::Domain(format!(
            "dyadic levels must lie in {MIN_DYADIC_LEVELS}..={MAX_DYADIC_LEVELS}, got {levels}"
        )));
    }
    let p = |k: u32| 2f64.powi(-(k as i32));
    let big_l = levels;

    // (lo, base) of the left-half bins in increasing order
    let mut left: Vec<(f64, f64)> = vec![(-1.0, -1.0)];
    for k in (2..=big_l).rev() {
        left.push((p(k) - 1.0, p(k) - 1.0));
    }
    for k in 1..big_l {
        left.push((-p(k), -p(k)));
    }

    let c = p(big_l);
    let mut boundaries: Vec<f64> = left.iter().map(|&(lo, _)| lo).collect();
    let mut bases: Vec<f64> = left.iter().map(|&(_, b)| b).collect();
    let center = bases.len();
    boundaries.extend([-c, c]);
    bases.push(0.0);
    for &(lo, b) in left.iter().rev() {
        boundaries.push(-lo);
        bases.push(-b);
    }
    // the mirror of the left-most lower bound is the final upper bound 1
    BinLayout::checked(boundaries, bases, center)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_bins() {
        let l = layout_three();
        assert_eq!(l.bases(), &[-1.0, 0.0, 1.0]);
        assert_eq!(l.bin_index(-1.0), Some(0));
        assert_eq!(l.bin_index(-0.5), Some(1));
        assert_eq!(l.bin_index(0.5), Some(1));
        assert_eq!(l.bin_index(0.5f64.next_up()), Some(2));
        assert_eq!(l.bin_index(1.0), Some(2));
        assert_eq!(l.bin_index(1.0f64.next_up()), None);
    }

    #[test]
    fn dyadic_counts() {
        assert_eq!(layout_dyadic(10).unwrap().len(), 39);
        assert_eq!(layout_dyadic(20).unwrap().len(), 79);
        assert_eq!(layout_dyadic(2).unwrap().len(), 7);
        assert!(layout_dyadic(1).is_err());
        assert!(layout_dyadic(41).is_err());
    }

    #[test]
    fn dyadic_small_enumeration() {
        let l = layout_dyadic(2).unwrap();
        assert_eq!(
            l.boundaries(),
            &[-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(l.bases(), &[-1.0, -0.75, -0.5, 0.0, 0.5, 0.75, 1.0]);
        assert_eq!(l.center(), 3);
    }

    #[test]
    fn dyadic_is_symmetric() {
        let l = layout_dyadic(10).unwrap();
        let nb = l.len();
        for i in 0..nb {
            assert_eq!(l.bases()[i], -l.bases()[nb - 1 - i]);
        }
        for i in 0..=nb {
            assert_eq!(l.boundaries()[i], -l.boundaries()[nb - i]);
        }
    }

    #[test]
    fn ext_membership() {
        let l = layout_three();
        let just_below = ExtReal::new(-0.5, -1.0e-30);
        assert_eq!(l.bin_index_ext(just_below), Some(0));
        assert_eq!(l.bin_index_ext(ExtReal::from(-0.5)), Some(1));
        let just_above = ExtReal::new(0.5, 1.0e-30);
        assert_eq!(l.bin_index_ext(just_above), Some(2));
    }
}
