use std::fmt;

use crate::extprec::ExtReal;

use super::grid::BinnedGrid;
use super::layout::BinLayout;

#[derive(Clone, Debug, PartialEq)]
pub struct LayoutCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayoutReport {
    pub checks: Vec<LayoutCheck>,
}

impl LayoutReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&LayoutCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for LayoutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check,passed,detail")?;
        for c in &self.checks {
            writeln!(f, "{},{},{}", c.name, c.passed, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, failure: Option<String>) -> LayoutCheck {
    LayoutCheck {
        name,
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| "ok".into()),
    }
}

fn partition(layout: &BinLayout) -> Option<String> {
    let b = layout.boundaries();
    if b.first() != Some(&-1.0) || b.last() != Some(&1.0) {
        return Some(format!(
            "boundaries span {:?}..{:?}, not [-1, 1]",
            b.first(),
            b.last()
        ));
    }
    if let Some(i) = b.windows(2).position(|p| p[0] >= p[1]) {
        return Some(format!("boundaries {i} and {} are not increasing", i + 1));
    }
    None
}

/// Every `b_l - b_m` must be a double, i.e. rounding it loses nothing.
fn base_differences(layout: &BinLayout) -> Option<String> {
    let bases = layout.bases();
    for (l, &bl) in bases.iter().enumerate() {
        if !bl.is_finite() {
            return Some(format!("base {l} is not finite"));
        }
        for (m, &bm) in bases.iter().enumerate() {
            let exact = ExtReal::sum_of(bl, -bm);
            if exact.lo() != 0.0 || bl - bm != exact.hi() {
                return Some(format!("b[{l}] - b[{m}] = {bl:?} - {bm:?} is inexact"));
            }
        }
    }
    None
}

/// `t - b` is exact for every `t` in a bin when either `b = 0` or all of the
/// bin lies on the side of `b` within `[b/2, 2b]`.
fn sterbenz(layout: &BinLayout) -> Option<String> {
    for l in 0..layout.len() {
        let b = layout.base(l);
        if b == 0.0 {
            continue;
        }
        let (lo, hi) = layout.bounds(l);
        let ok = [lo, hi].iter().all(|&t| {
            t.signum() == b.signum() && b.abs() / 2.0 <= t.abs() && t.abs() <= 2.0 * b.abs()
        });
        if !ok {
            return Some(format!("bin {l} [{lo:?}, {hi:?}] with base {b:?}"));
        }
    }
    None
}

fn containment(grid: &BinnedGrid) -> Option<String> {
    let layout = grid.layout();
    for k in 0..grid.len() {
        let l = grid.bin_of()[k];
        if !layout.contains_ext(l, grid.reconstructed_ext(k)) {
            return Some(format!("node {k} falls outside bin {l}"));
        }
        // bases sit at bin ends, so offsets are bounded by the bin width
        let (lo, hi) = layout.bounds(l);
        let b = layout.base(l);
        let reach = (b - lo).abs().max((hi - b).abs());
        if grid.offsets()[k].abs() > reach {
            return Some(format!(
                "offset of node {k} exceeds the reach {reach:?} of bin {l}"
            ));
        }
    }
    None
}

fn same_layout(layout: &BinLayout, grid: &BinnedGrid) -> Option<String> {
    (grid.layout() != layout).then(|| "grid was built on a different layout".to_string())
}

/// Checks a layout (and optionally a grid built on it) for the properties the
/// binned difference evaluation relies on.
pub fn verify_layout(layout: &BinLayout, grid: Option<&BinnedGrid>) -> LayoutReport {
    let mut checks = vec![
        check("partition", partition(layout)),
        check("base_differences_exact", base_differences(layout)),
        check("sterbenz_coverage", sterbenz(layout)),
    ];
    if let Some(g) = grid {
        checks.push(check("same_layout", same_layout(layout, g)));
        checks.push(check("node_containment", containment(g)));
    }
    LayoutReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binned::{gen_binned_nodes, layout_dyadic, layout_three};

    #[test]
    fn standard_layouts_pass() {
        let three = layout_three();
        let g = gen_binned_nodes(999, &three).unwrap();
        assert!(verify_layout(&three, Some(&g)).all_passed());
        let dy = layout_dyadic(10).unwrap();
        let g = gen_binned_nodes(999, &dy).unwrap();
        let report = verify_layout(&dy, Some(&g));
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn base_point_one_tenth_fails() {
        let layout =
            BinLayout::custom(vec![-1.0, -0.05, 0.15, 1.0], vec![-1.0, 0.1, 1.0], 1).unwrap();
        let r = verify_layout(&layout, None);
        assert!(!r.get("base_differences_exact").unwrap().passed);
        assert!(BinLayout::checked(vec![-1.0, -0.05, 0.15, 1.0], vec![-1.0, 0.1, 1.0], 1).is_err());
    }

    #[test]
    fn sterbenz_violation_is_reported() {
        // base -1 cannot cover points down to -0.25
        let layout =
            BinLayout::custom(vec![-1.0, -0.25, 0.25, 1.0], vec![-1.0, 0.0, 1.0], 1).unwrap();
        let r = verify_layout(&layout, None);
        assert!(!r.get("sterbenz_coverage").unwrap().passed);
        assert!(r.get("base_differences_exact").unwrap().passed);
    }
}
