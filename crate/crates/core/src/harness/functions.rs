use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::extprec::ExtReal;

/// `cos(c t)` for one of the registered frequencies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    name: &'static str,
    c: f64,
}

pub const TEST_FUNCTIONS: [TestFunction; 6] = [
    TestFunction {
        name: "cos1",
        c: 1.0,
    },
    TestFunction {
        name: "cos10",
        c: 10.0,
    },
    TestFunction {
        name: "cos100",
        c: 100.0,
    },
    TestFunction {
        name: "cos1e3",
        c: 1.0e3,
    },
    TestFunction {
        name: "cos1e4",
        c: 1.0e4,
    },
    TestFunction {
        name: "cos1e5",
        c: 1.0e5,
    },
];

impl TestFunction {
    pub fn lookup(name: &str) -> Result<TestFunction> {
        TEST_FUNCTIONS
            .iter()
            .find(|f| f.name == name)
            .copied()
            .ok_or_else(|| {
                let known: Vec<_> = TEST_FUNCTIONS.iter().map(|f| f.name).collect();
                Error::Usage(format!(
                    "unknown function '{name}' (known: {})",
                    known.join(", ")
                ))
            })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn frequency(&self) -> f64 {
        self.c
    }

    /// Lipschitz constant on `[-1, 1]`.
    pub fn lipschitz(&self) -> f64 {
        self.c
    }

    /// `cos(c t)` in extended precision; `c t` is formed exactly.
    pub fn eval_ext(&self, t: ExtReal) -> Result<ExtReal> {
        (t * self.c).cos()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_ext(ExtReal::from(t)).map(ExtReal::to_f64)
    }

    /// Degrees at which interpolation itself has not converged, so that
    /// errors measured against `f` say nothing about node rounding.
    pub fn step_one_critical(&self, n: usize) -> bool {
        (n + 1) as f64 <= self.c
    }
}

impl FromStr for TestFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::lookup(s)
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry() {
        let f = TestFunction::lookup("cos100").unwrap();
        assert_eq!(f.frequency(), 100.0);
        assert!(TestFunction::lookup("sin").is_err());
        assert!((f.eval(0.5).unwrap() - 50f64.cos()).abs() < 1.0e-14);
    }

    #[test]
    fn large_frequency_is_accurate() {
        let f = TestFunction::lookup("cos1e5").unwrap();
        let t = 0.987654321;
        let v = f.eval_ext(ExtReal::from(t)).unwrap();
        // shifting the argument by whole periods must not matter
        let w = (ExtReal::from(t) * 1.0e5 - ExtReal::PI * 62832.0)
            .cos()
            .unwrap();
        assert!((v - w).abs().to_f64() < 1.0e-25);
    }

    #[test]
    fn critical_cells() {
        let f = TestFunction::lookup("cos1e4").unwrap();
        assert!(f.step_one_critical(999));
        assert!(f.step_one_critical(9999));
        assert!(!f.step_one_critical(99_999));
        assert!(!TestFunction::lookup("cos100")
            .unwrap()
            .step_one_critical(999));
    }
}
