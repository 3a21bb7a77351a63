use std::hint::black_box;

use crate::cheb::Formula;
use crate::error::{Error, Result};

use super::functions::TestFunction;
use super::measure::{Interpolant, NodeMode};
use super::testset::TestSet;

/// CPU time consumed by this process, in nanoseconds.
pub fn process_cpu_ns() -> u128 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_PROCESS_CPUTIME_ID, &mut ts) };
    assert_eq!(rc, 0, "process CPU clock unavailable");
    ts.tv_sec as u128 * 1_000_000_000 + ts.tv_nsec as u128
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRecord {
    pub case: String,
    /// Per-point CPU time of each repeat, in nanoseconds.
    pub samples: Vec<f64>,
    pub median: f64,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

/// Times one evaluator over the points of `set` on the calling thread; one
/// unrecorded warmup pass precedes `repeats` timed passes.
pub fn bench_timing(
    formula: Formula,
    mode: &NodeMode,
    f: &TestFunction,
    set: &TestSet,
    repeats: usize,
) -> Result<TimingRecord> {
    if repeats < 5 {
        return Err(Error::Domain(format!(
            "need at least 5 repeats, got {repeats}"
        )));
    }
    let p = Interpolant::new(formula, mode, set.n, f)?;
    let pass = || -> Result<f64> {
        let mut acc = 0.0;
        for &t in &set.points {
            acc += p.eval(black_box(t))?;
        }
        Ok(acc)
    };
    black_box(pass()?);
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = process_cpu_ns();
        black_box(pass()?);
        let elapsed = (process_cpu_ns() - start) as f64;
        samples.push(elapsed / set.points.len() as f64);
    }
    Ok(TimingRecord {
        case: format!("{}-{}", mode.name(), formula.name()),
        median: median(&samples),
        samples,
    })
}

/// The usual and three-bin variants of both formulas, with each median
/// normalized by the usual first formula.
pub fn bench_suite(
    f: &TestFunction,
    set: &TestSet,
    repeats: usize,
) -> Result<Vec<(TimingRecord, f64)>> {
    let three: NodeMode = "3".parse()?;
    let cases = [
        (Formula::First, NodeMode::Usual),
        (Formula::Second, NodeMode::Usual),
        (Formula::First, three.clone()),
        (Formula::Second, three),
    ];
    let records = cases
        .iter()
        .map(|(formula, mode)| bench_timing(*formula, mode, f, set, repeats))
        .collect::<Result<Vec<_>>>()?;
    let base = records[0].median;
    Ok(records
        .into_iter()
        .map(|r| {
            let norm = r.median / base;
            (r, norm)
        })
        .collect())
}

pub fn bench_csv(rows: &[(TimingRecord, f64)]) -> String {
    let mut s = String::from("case,median_ns_per_point,normalized\n");
    for (r, norm) in rows {
        s.push_str(&format!("{},{:?},{:?}\n", r.case, r.median, norm));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{build_test_set, Anchor};

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn five_repeats() {
        let f = TestFunction::lookup("cos1").unwrap();
        let set = build_test_set(Anchor::MinusOne, 300, 50).unwrap();
        let r = bench_timing(Formula::First, &NodeMode::Usual, &f, &set, 5).unwrap();
        assert_eq!(r.samples.len(), 5);
        assert_eq!(r.median, median(&r.samples));
        assert!(bench_timing(Formula::First, &NodeMode::Usual, &f, &set, 4).is_err());
    }

    #[test]
    fn cpu_clock_advances() {
        let a = process_cpu_ns();
        let mut x = 0u64;
        for i in 0..2_000_000u64 {
            x = black_box(x.wrapping_mul(31).wrapping_add(i));
        }
        black_box(x);
        assert!(process_cpu_ns() > a);
    }
}
