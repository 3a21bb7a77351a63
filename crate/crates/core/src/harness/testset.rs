use std::fmt;
use std::str::FromStr;

use crate::cheb::gen_nodes_usual;
use crate::error::{Error, Result};

pub const INTERVALS: usize = 100;
pub const NEIGHBOURS_PER_SIDE: usize = 200;
pub const UNIFORM_PER_INTERVAL: usize = 600;

/// Where the test intervals sit: next to `-1` or next to `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    MinusOne,
    Zero,
}

impl Anchor {
    pub fn name(self) -> &'static str {
        match self {
            Anchor::MinusOne => "Tm1",
            Anchor::Zero => "T0",
        }
    }
}

impl FromStr for Anchor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Tm1" => Ok(Anchor::MinusOne),
            "T0" => Ok(Anchor::Zero),
            _ => Err(Error::Usage(format!(
                "unknown test set '{s}' (use Tm1 or T0)"
            ))),
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct TestSet {
    pub anchor: Anchor,
    pub n: usize,
    pub scale: usize,
    /// Left node index of each interval.
    pub intervals: Vec<usize>,
    pub points: Vec<f64>,
}

impl TestSet {
    pub fn points_per_interval(&self) -> usize {
        (2 * NEIGHBOURS_PER_SIDE + UNIFORM_PER_INTERVAL) / self.scale
    }
}

/// 100 intervals `(x_k, x_{k+1})` of the working-precision nodes; in each,
/// the doubles right after `x_k`, the doubles right before `x_{k+1}`, and
/// equally spaced interior points, all thinned by the divisor `scale`.
pub fn build_test_set(anchor: Anchor, n: usize, scale: usize) -> Result<TestSet> {
    if scale == 0 || !NEIGHBOURS_PER_SIDE.is_multiple_of(scale) {
        return Err(Error::Domain(format!(
            "scale divisor {scale} must divide {NEIGHBOURS_PER_SIDE}"
        )));
    }
    let first = match anchor {
        Anchor::MinusOne if n >= 200 => 0,
        Anchor::Zero if n >= 400 => n.div_ceil(2) - INTERVALS,
        _ => {
            return Err(Error::Domain(format!(
                "degree {n} is too small for test set {anchor}"
            )))
        }
    };
    let x = gen_nodes_usual(n)?;
    let side = NEIGHBOURS_PER_SIDE / scale;
    let uniform = UNIFORM_PER_INTERVAL / scale;
    let intervals: Vec<usize> = (first..first + INTERVALS).collect();
    let mut points = Vec::with_capacity(INTERVALS * (2 * side + uniform));
    for &k in &intervals {
        let (a, b) = (x[k], x[k + 1]);
        let mut t = a;
        for _ in 0..side {
            t = t.next_up();
            points.push(t);
        }
        let mut right = Vec::with_capacity(side);
        let mut t = b;
        for _ in 0..side {
            t = t.next_down();
            right.push(t);
        }
        let h = b - a;
        for j in 1..=uniform {
            points.push(a + h * (j as f64 / (uniform + 1) as f64));
        }
        points.extend(right.into_iter().rev());
    }
    Ok(TestSet {
        anchor,
        n,
        scale,
        intervals,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_has_1e5_points() {
        let s = build_test_set(Anchor::MinusOne, 999, 1).unwrap();
        assert_eq!(s.points.len(), 100_000);
        let x = gen_nodes_usual(999).unwrap();
        assert_eq!(s.points[0], x[0].next_up());
        assert_eq!(s.points[999], x[1].next_down());
        assert_eq!(s.points[1000], x[1].next_up());
    }

    #[test]
    fn scaled_set_keeps_intervals() {
        let full = build_test_set(Anchor::Zero, 999, 1).unwrap();
        let s = build_test_set(Anchor::Zero, 999, 10).unwrap();
        assert_eq!(s.points.len(), 10_000);
        assert_eq!(s.intervals, full.intervals);
        assert_eq!(s.intervals[0], 400);
        assert_eq!(s.points_per_interval(), 100);
        let x = gen_nodes_usual(999).unwrap();
        // the last interval straddles zero
        assert!(x[499] < 0.0 && x[500] > 0.0);
    }

    #[test]
    fn points_stay_inside_their_intervals() {
        let s = build_test_set(Anchor::MinusOne, 300, 4).unwrap();
        let x = gen_nodes_usual(300).unwrap();
        let per = s.points_per_interval();
        for (i, &k) in s.intervals.iter().enumerate() {
            let chunk = &s.points[i * per..(i + 1) * per];
            assert!(chunk.windows(2).all(|p| p[0] < p[1]));
            assert!(chunk[0] > x[k] && chunk[per - 1] < x[k + 1]);
        }
    }

    #[test]
    fn bad_requests() {
        assert!(build_test_set(Anchor::MinusOne, 150, 1).is_err());
        assert!(build_test_set(Anchor::Zero, 300, 1).is_err());
        assert!(build_test_set(Anchor::MinusOne, 999, 3).is_err());
        assert!(build_test_set(Anchor::MinusOne, 999, 0).is_err());
    }
}
