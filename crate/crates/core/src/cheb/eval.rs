//! Barycentric evaluators.
//!
//! Both formulas are written once over [`Real`] and accumulate term by term,
//! so the binned evaluators can feed them differences computed their own way.

use crate::error::{Error, Result};
use crate::real::{scale_pow2, Real, ScaledProduct};

use super::weights::{WeightKind, WeightVector};

/// Which barycentric formula to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Product form, needs normalized-λ weights.
    First,
    /// Ratio form, invariant under weight scaling.
    Second,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::First => "first",
            Formula::Second => "second",
        }
    }

    /// Rejects weight vectors the formula cannot use.
    pub fn check_weights(self, w: &WeightVector) -> Result<()> {
        if self == Formula::First && w.kind != WeightKind::NormalizedLambda {
            return Err(Error::Usage(
                "the first formula needs normalized lambda weights".into(),
            ));
        }
        Ok(())
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        match s {
            "first" => Ok(Formula::First),
            "second" => Ok(Formula::Second),
            _ => Err(Error::Usage(format!(
                "unknown formula '{s}' (first|second)"
            ))),
        }
    }
}

/// Running state of the first formula
/// `(1/2) prod_k 2 (t - x_k) * sum_k w_k y_k / (t - x_k)`.
#[derive(Clone, Copy, Debug)]
pub struct FirstFormulaAcc<R> {
    prod: ScaledProduct<R>,
    sum: R,
    hit: Option<R>,
}

impl<R: Real> Default for FirstFormulaAcc<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> FirstFormulaAcc<R> {
    pub fn new() -> Self {
        FirstFormulaAcc {
            prod: ScaledProduct::new(),
            sum: R::zero(),
            hit: None,
        }
    }

    /// Adds node `k` given `diff = t - x_k`.
    #[inline]
    pub fn push(&mut self, diff: R, w: R, y: R) {
        if diff.is_zero() {
            if self.hit.is_none() {
                self.hit = Some(y);
            }
            return;
        }
        self.prod.mul(diff + diff);
        self.sum = self.sum + w * y / diff;
    }

    pub fn finish(&self) -> R {
        match self.hit {
            Some(y) => y,
            None => scale_pow2(self.prod.mantissa() * self.sum, self.prod.exp() - 1),
        }
    }
}

/// Running state of the second formula
/// `sum_k (w_k / (t - x_k)) y_k / sum_k w_k / (t - x_k)`.
#[derive(Clone, Copy, Debug)]
pub struct SecondFormulaAcc<R> {
    num: R,
    den: R,
    hit: Option<R>,
}

impl<R: Real> Default for SecondFormulaAcc<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> SecondFormulaAcc<R> {
    pub fn new() -> Self {
        SecondFormulaAcc {
            num: R::zero(),
            den: R::zero(),
            hit: None,
        }
    }

    #[inline]
    pub fn push(&mut self, diff: R, w: R, y: R) {
        if diff.is_zero() {
            if self.hit.is_none() {
                self.hit = Some(y);
            }
            return;
        }
        let c = w / diff;
        self.num = self.num + c * y;
        self.den = self.den + c;
    }

    pub fn finish(&self) -> R {
        match self.hit {
            Some(y) => y,
            None => self.num / self.den,
        }
    }
}

/// First formula with normalized weights, in any precision.
pub fn first_formula_generic<R: Real>(nodes: &[R], w: &[R], y: &[R], t: R) -> R {
    let mut acc = FirstFormulaAcc::new();
    for k in 0..nodes.len() {
        acc.push(t - nodes[k], w[k], y[k]);
    }
    acc.finish()
}

/// Second formula with arbitrarily scaled weights, in any precision.
pub fn second_formula_generic<R: Real>(nodes: &[R], w: &[R], y: &[R], t: R) -> R {
    let mut acc = SecondFormulaAcc::new();
    for k in 0..nodes.len() {
        acc.push(t - nodes[k], w[k], y[k]);
    }
    acc.finish()
}

pub(crate) fn check_lengths(nodes: usize, w: usize, y: usize) -> Result<()> {
    if nodes < 2 || w != nodes || y != nodes {
        return Err(Error::Usage(format!(
            "length mismatch: {nodes} nodes, {w} weights, {y} values"
        )));
    }
    Ok(())
}

pub(crate) fn check_point(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("evaluation point {t} is not finite")));
    }
    Ok(())
}

/// First formula in working precision. Requires normalized-λ weights.
pub fn first_formula_eval(nodes: &[f64], y: &[f64], w: &WeightVector, t: f64) -> Result<f64> {
    Formula::First.check_weights(w)?;
    check_lengths(nodes.len(), w.len(), y.len())?;
    check_point(t)?;
    Ok(first_formula_generic(nodes, &w.values, y, t))
}

/// Second formula in working precision; any weight scaling works.
pub fn second_formula_eval(nodes: &[f64], y: &[f64], w: &WeightVector, t: f64) -> Result<f64> {
    check_lengths(nodes.len(), w.len(), y.len())?;
    check_point(t)?;
    Ok(second_formula_generic(nodes, &w.values, y, t))
}

/// All Lagrange basis values `l_j(t)` through the barycentric ratio.
pub fn lagrange_basis_generic<R: Real>(nodes: &[R], w: &[R], t: R) -> Vec<R> {
    if let Some(k) = nodes.iter().position(|&x| (t - x).is_zero()) {
        let mut e = vec![R::zero(); nodes.len()];
        e[k] = R::one();
        return e;
    }
    let mut terms: Vec<R> = nodes.iter().zip(w).map(|(&x, &wk)| wk / (t - x)).collect();
    let den = terms.iter().fold(R::zero(), |s, &c| s + c);
    for c in &mut terms {
        *c = *c / den;
    }
    terms
}

pub fn lagrange_basis_at(nodes: &[f64], w: &WeightVector, t: f64) -> Result<Vec<f64>> {
    check_lengths(nodes.len(), w.len(), nodes.len())?;
    check_point(t)?;
    Ok(lagrange_basis_generic(nodes, &w.values, t))
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::cheb::{
        gen_nodes_ext, gen_nodes_usual, normalized_lambda, salzer_exact_lambda, salzer_weights,
    };
    use crate::extprec::ExtReal;

    fn quad() -> (Vec<f64>, Vec<f64>, WeightVector) {
        let x = vec![-1.0, 0.0, 1.0];
        let w = normalized_lambda(&x).unwrap();
        (x, vec![1.0, 0.0, 1.0], w)
    }

    #[test]
    fn quadratic_data() {
        let (x, y, w) = quad();
        assert_eq!(first_formula_eval(&x, &y, &w, 0.5).unwrap(), 0.25);
        assert_eq!(second_formula_eval(&x, &y, &w, 0.5).unwrap(), 0.25);
        assert_eq!(first_formula_eval(&x, &y, &w, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn wrong_kind_is_a_usage_error() {
        let (x, y, _) = quad();
        let s = salzer_weights(2);
        assert!(matches!(
            first_formula_eval(&x, &y, &s, 0.5),
            Err(Error::Usage(_))
        ));
        assert_eq!(second_formula_eval(&x, &y, &s, 0.5).unwrap(), 0.25);
    }

    #[test]
    fn second_formula_scale_invariant() {
        let x = gen_nodes_usual(17).unwrap();
        let y: Vec<f64> = x.iter().map(|t| (3.0 * t).cos()).collect();
        let s = salzer_weights(17);
        let scaled = |c: f64| {
            let mut v = s.clone();
            for w in &mut v.values {
                *w *= c;
            }
            v
        };
        let (s8, s7) = (scaled(0.125), scaled(7.0));
        for i in 0..50 {
            let t = -0.99 + 0.0397 * i as f64;
            let q = second_formula_eval(&x, &y, &s, t).unwrap();
            // powers of two commute with every rounding
            assert_eq!(q, second_formula_eval(&x, &y, &s8, t).unwrap());
            // other factors change the rounding of w_k / (t - x_k)
            let q7 = second_formula_eval(&x, &y, &s7, t).unwrap();
            assert!((q - q7).abs() <= 8.0 * f64::EPSILON * q.abs().max(1.0));
        }
    }

    #[test]
    fn basis_examples() {
        let (x, _, w) = quad();
        let l = lagrange_basis_at(&x, &w, 0.5).unwrap();
        for (a, b) in l.iter().zip([-0.125, 0.75, 0.375]) {
            assert!((a - b).abs() <= 2.0 * f64::EPSILON);
        }
        assert_eq!(lagrange_basis_at(&x, &w, 1.0).unwrap(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn partition_of_unity_in_ext() {
        let n = 2048;
        let x = gen_nodes_ext(n).unwrap();
        let w = salzer_exact_lambda(n);
        let y = vec![ExtReal::ONE; n + 1];
        for i in 0..100 {
            let t = ExtReal::from(-0.995 + 0.0199 * i as f64 + 1.0e-7);
            let p = first_formula_generic(&x, &w, &y, t);
            assert!((p - ExtReal::ONE).abs().to_f64() < 1.0e-25, "i={i} p={p:?}");
        }
    }

    #[test]
    fn chained_identity_agrees_with_ratio_form() {
        // l_j(t) = lambda_j prod_{i != j} (t - x_i)
        let n = 24;
        let x = gen_nodes_usual(n).unwrap();
        let w = normalized_lambda(&x).unwrap();
        for t in [-0.93, -0.31, 0.02, 0.77] {
            let ratio = lagrange_basis_at(&x, &w, t).unwrap();
            for j in 0..=n {
                let mut p = w.values[j];
                for (i, &xi) in x.iter().enumerate() {
                    if i != j {
                        p *= 2.0 * (t - xi);
                    }
                }
                assert!((p - ratio[j]).abs() < 1.0e-13, "t={t} j={j}");
            }
        }
    }
}
