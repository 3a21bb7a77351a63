use crate::cheb::{
    check_lengths, check_point, FirstFormulaAcc, Formula, SecondFormulaAcc, WeightVector,
};
use crate::error::Result;
use crate::extprec::ExtReal;

use super::grid::{locate_bin, BinnedGrid};

/// Calls `f(k, t - x_k)` for every node, with `b_l - b_m` computed once per bin.
#[inline]
fn for_each_diff(grid: &BinnedGrid, l: usize, u_t: f64, mut f: impl FnMut(usize, f64)) {
    let layout = grid.layout();
    let bl = layout.base(l);
    let u = grid.offsets();
    for m in 0..layout.len() {
        let range = grid.range(m);
        if range.is_empty() {
            continue;
        }
        let db = bl - layout.base(m);
        for k in range {
            f(k, db + (u_t - u[k]));
        }
    }
}

/// Either barycentric formula with every `t - x_k` taken from the binned form.
pub fn eval_binned(
    formula: Formula,
    t: f64,
    grid: &BinnedGrid,
    y: &[f64],
    w: &WeightVector,
) -> Result<f64> {
    formula.check_weights(w)?;
    check_lengths(grid.len(), w.len(), y.len())?;
    check_point(t)?;
    let (l, u_t) = locate_bin(t, grid.layout())?;
    Ok(eval_binned_located(formula, l, u_t, grid, y, &w.values))
}

/// [`eval_binned`] for a point already located, without input checks.
#[inline]
pub fn eval_binned_located(
    formula: Formula,
    l: usize,
    u_t: f64,
    grid: &BinnedGrid,
    y: &[f64],
    w: &[f64],
) -> f64 {
    match formula {
        Formula::First => {
            let mut acc = FirstFormulaAcc::new();
            for_each_diff(grid, l, u_t, |k, d| acc.push(d, w[k], y[k]));
            acc.finish()
        }
        Formula::Second => {
            let mut acc = SecondFormulaAcc::new();
            for_each_diff(grid, l, u_t, |k, d| acc.push(d, w[k], y[k]));
            acc.finish()
        }
    }
}

/// Extended-precision evaluation at the represented nodes `b_m + u_k`, with
/// the same working-precision data; the reference for evaluation error.
pub fn eval_binned_ext(
    formula: Formula,
    t: f64,
    grid: &BinnedGrid,
    y: &[f64],
    w: &[f64],
) -> ExtReal {
    let layout = grid.layout();
    let u = grid.offsets();
    let mut first = FirstFormulaAcc::new();
    let mut second = SecondFormulaAcc::new();
    for m in 0..layout.len() {
        let range = grid.range(m);
        if range.is_empty() {
            continue;
        }
        let tb = ExtReal::sum_of(t, -layout.base(m));
        for k in range {
            let d = tb - ExtReal::from(u[k]);
            let (wk, yk) = (ExtReal::from(w[k]), ExtReal::from(y[k]));
            match formula {
                Formula::First => first.push(d, wk, yk),
                Formula::Second => second.push(d, wk, yk),
            }
        }
    }
    match formula {
        Formula::First => first.finish(),
        Formula::Second => second.finish(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binned::{gen_binned_nodes, layout_three};
    use crate::cheb::{normalized_lambda, salzer_weights, second_formula_eval};
    use crate::error::Error;

    #[test]
    fn quadratic_on_three_bins() {
        let g = gen_binned_nodes(2, &layout_three()).unwrap();
        let y = [1.0, 0.0, 1.0];
        let w = normalized_lambda(&g.reconstructed_nodes()).unwrap();
        assert_eq!(eval_binned(Formula::First, 0.5, &g, &y, &w).unwrap(), 0.25);
        assert_eq!(
            eval_binned(Formula::Second, 0.5, &g, &y, &salzer_weights(2)).unwrap(),
            0.25
        );
        assert!(matches!(
            eval_binned(Formula::First, 0.5, &g, &y, &salzer_weights(2)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn exact_hits() {
        let n = 20;
        let g = gen_binned_nodes(n, &layout_three()).unwrap();
        let y: Vec<f64> = (0..=n).map(|k| k as f64 + 0.5).collect();
        let w = salzer_weights(n);
        for (k, x) in g.reconstructed_nodes_ext().iter().enumerate() {
            // only nodes that are doubles can be hit exactly
            if x.lo() == 0.0 {
                let v = eval_binned(Formula::Second, x.hi(), &g, &y, &w).unwrap();
                assert_eq!(v, y[k]);
            }
        }
    }

    #[test]
    fn agrees_with_plain_second_formula_away_from_nodes() {
        let n = 300;
        let g = gen_binned_nodes(n, &layout_three()).unwrap();
        let x = g.reconstructed_nodes();
        let y: Vec<f64> = x.iter().map(|t| (7.0 * t).sin()).collect();
        let w = salzer_weights(n);
        for k in (0..n).step_by(7) {
            let t = 0.5 * (x[k] + x[k + 1]);
            let a = eval_binned(Formula::Second, t, &g, &y, &w).unwrap();
            let b = second_formula_eval(&x, &y, &w, t).unwrap();
            assert!((a - b).abs() <= 1.0e-14, "k={k}");
        }
    }

    #[test]
    fn ext_reference_is_close() {
        let n = 100;
        let g = gen_binned_nodes(n, &layout_three()).unwrap();
        let y: Vec<f64> = g.reconstructed_nodes().iter().map(|t| t.cos()).collect();
        let w = salzer_weights(n);
        for i in 0..40 {
            let t = -0.999 + 0.05 * i as f64;
            let a = eval_binned(Formula::Second, t, &g, &y, &w).unwrap();
            let e = eval_binned_ext(Formula::Second, t, &g, &y, &w.values);
            assert!((ExtReal::from(a) - e).abs().to_f64() < 1.0e-14);
        }
    }
}
