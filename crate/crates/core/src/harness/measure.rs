use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::binned::{
    eval_binned, eval_binned_ext, gen_binned_nodes, layout_dyadic, layout_three, BinLayout,
    BinnedGrid,
};
use crate::cheb::{
    chebyshev_lambda, first_formula_eval, first_formula_generic, gen_nodes_usual, salzer_weights,
    second_formula_eval, second_formula_generic, Formula, WeightVector,
};
use crate::error::{Error, Result};
use crate::extprec::ExtReal;

use super::functions::TestFunction;
use super::testset::TestSet;

/// How nodes are stored: plain doubles, or base plus offset per bin.
#[derive(Clone, Debug, PartialEq)]
pub enum NodeMode {
    Usual,
    Binned(BinLayout),
}

impl NodeMode {
    pub fn name(&self) -> String {
        match self {
            NodeMode::Usual => "usual".into(),
            NodeMode::Binned(l) => format!("binned-{}", l.len()),
        }
    }
}

impl FromStr for NodeMode {
    type Err = Error;
    /// `0` (usual), `3`, or `dyadic:<levels>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(NodeMode::Usual),
            "3" => Ok(NodeMode::Binned(layout_three())),
            _ => {
                let levels = s
                    .strip_prefix("dyadic:")
                    .and_then(|l| l.parse().ok())
                    .ok_or_else(|| {
                        Error::Usage(format!(
                            "unknown bin layout '{s}' (use 0, 3 or dyadic:<levels>)"
                        ))
                    })?;
                Ok(NodeMode::Binned(layout_dyadic(levels)?))
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Nodes {
    Usual { x: Vec<f64>, x_ext: Vec<ExtReal> },
    Binned(BinnedGrid),
}

/// Everything one formula needs at working precision, with the data rounded
/// once from the extended-precision function values.
#[derive(Clone, Debug)]
pub struct Interpolant {
    formula: Formula,
    nodes: Nodes,
    y: Vec<f64>,
    w: WeightVector,
    y_ext: Vec<ExtReal>,
    w_ext: Vec<ExtReal>,
}

impl Interpolant {
    pub fn new(
        formula: Formula,
        mode: &NodeMode,
        n: usize,
        f: &TestFunction,
    ) -> Result<Interpolant> {
        // the first formula gets the weights of the exact nodes, rounded once
        let w = match formula {
            Formula::First => chebyshev_lambda(n),
            Formula::Second => salzer_weights(n),
        };
        let (nodes, at) = match mode {
            NodeMode::Usual => {
                let x = gen_nodes_usual(n)?;
                let x_ext: Vec<ExtReal> = x.iter().map(|&v| ExtReal::from(v)).collect();
                let at = x_ext.clone();
                (Nodes::Usual { x, x_ext }, at)
            }
            NodeMode::Binned(layout) => {
                let g = gen_binned_nodes(n, layout)?;
                let at = g.reconstructed_nodes_ext();
                (Nodes::Binned(g), at)
            }
        };
        let y = at
            .iter()
            .map(|&t| f.eval_ext(t).map(ExtReal::to_f64))
            .collect::<Result<Vec<f64>>>()?;
        let y_ext = y.iter().map(|&v| ExtReal::from(v)).collect();
        let w_ext = w.values.iter().map(|&v| ExtReal::from(v)).collect();
        Ok(Interpolant {
            formula,
            nodes,
            y,
            w,
            y_ext,
            w_ext,
        })
    }

    pub fn formula(&self) -> Formula {
        self.formula
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn weights(&self) -> &WeightVector {
        &self.w
    }

    /// Working-precision value.
    pub fn eval(&self, t: f64) -> Result<f64> {
        match (&self.nodes, self.formula) {
            (Nodes::Usual { x, .. }, Formula::First) => first_formula_eval(x, &self.y, &self.w, t),
            (Nodes::Usual { x, .. }, Formula::Second) => {
                second_formula_eval(x, &self.y, &self.w, t)
            }
            (Nodes::Binned(g), f) => eval_binned(f, t, g, &self.y, &self.w),
        }
    }

    /// The same formula with the same inputs, in extended precision.
    pub fn eval_ext(&self, t: f64) -> ExtReal {
        match &self.nodes {
            Nodes::Usual { x_ext, .. } => {
                let t = ExtReal::from(t);
                match self.formula {
                    Formula::First => first_formula_generic(x_ext, &self.w_ext, &self.y_ext, t),
                    Formula::Second => second_formula_generic(x_ext, &self.w_ext, &self.y_ext, t),
                }
            }
            Nodes::Binned(g) => eval_binned_ext(self.formula, t, g, &self.y, &self.w.values),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointErrors {
    pub t: f64,
    pub step2: f64,
    pub step3: f64,
    pub overall: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aggregate {
    pub max: f64,
    pub mean: f64,
}

impl Aggregate {
    fn of(values: impl Iterator<Item = f64>) -> Aggregate {
        let (mut max, mut sum, mut count) = (0.0_f64, 0.0, 0usize);
        for v in values {
            max = max.max(v);
            sum += v;
            count += 1;
        }
        Aggregate {
            max,
            mean: if count == 0 { 0.0 } else { sum / count as f64 },
        }
    }
}

#[derive(Clone, Debug)]
pub struct ErrorReport {
    pub formula: Formula,
    pub mode: String,
    pub n: usize,
    pub f: &'static str,
    pub set: &'static str,
    pub points: Vec<PointErrors>,
    pub step2: Aggregate,
    pub step3: Aggregate,
    pub overall: Aggregate,
}

impl ErrorReport {
    /// Mean Step II error over mean Step III error.
    pub fn mean_ratio(&self) -> f64 {
        self.step2.mean / self.step3.mean
    }

    /// Largest `overall - (stepII + stepIII)`; rounding the three errors to
    /// doubles makes this at most a few ulps of the errors.
    pub fn triangle_excess(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.overall - (p.step2 + p.step3))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("t,stepII,stepIII,overall\n");
        for p in &self.points {
            s.push_str(&format!(
                "{:?},{:?},{:?},{:?}\n",
                p.t, p.step2, p.step3, p.overall
            ));
        }
        s
    }

    pub fn summary(&self) -> String {
        format!(
            "formula={} bins={} n={} f={} set={} points={} max_stepII={:e} max_stepIII={:e} max_overall={:e} mean_ratio={:e}",
            self.formula.name(),
            self.mode,
            self.n,
            self.f,
            self.set,
            self.points.len(),
            self.step2.max,
            self.step3.max,
            self.overall.max,
            self.mean_ratio()
        )
    }
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

/// Step II, Step III and overall errors at every point of `set`, measured
/// against `f` and the formula evaluated in extended precision.
pub fn measure_errors(
    formula: Formula,
    mode: &NodeMode,
    f: &TestFunction,
    set: &TestSet,
    allow_step1: bool,
) -> Result<ErrorReport> {
    let n = set.n;
    if f.step_one_critical(n) && !allow_step1 {
        return Err(Error::StepOneCritical(format!(
            "interpolating {f} at degree {n} has not converged; errors would not reflect node rounding"
        )));
    }
    let p = Interpolant::new(formula, mode, n, f)?;
    let points = set
        .points
        .par_iter()
        .map(|&t| {
            let v = ExtReal::from(p.eval(t)?);
            let reference = p.eval_ext(t);
            let exact = f.eval_ext(ExtReal::from(t))?;
            Ok(PointErrors {
                t,
                step2: (reference - exact).abs().to_f64(),
                step3: (v - reference).abs().to_f64(),
                overall: (v - exact).abs().to_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorReport {
        formula,
        mode: mode.name(),
        n,
        f: f.name(),
        set: set.anchor.name(),
        step2: Aggregate::of(points.iter().map(|p| p.step2)),
        step3: Aggregate::of(points.iter().map(|p| p.step3)),
        overall: Aggregate::of(points.iter().map(|p| p.overall)),
        points,
    })
}
