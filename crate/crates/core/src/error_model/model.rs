use crate::binned::{gen_binned_nodes, BinLayout};
use crate::cheb::{
    gen_nodes_ext, gen_nodes_usual, lebesgue_estimate_with, normalized_lambda_values,
    rho_estimate_with, salzer_exact_lambda,
};
use crate::error::{Error, Result};
use crate::extprec::ExtReal;

/// Exact nodes, their perturbed counterparts, and the weights of both, all in
/// extended precision. Every quantity of the error model is a function of this.
#[derive(Clone, Debug)]
pub struct NodeModel {
    n: usize,
    label: String,
    x: Vec<ExtReal>,
    xhat: Vec<ExtReal>,
    xhat_f64: Vec<f64>,
    lambda_x: Vec<ExtReal>,
    lambda_hat: Vec<ExtReal>,
    theta_inf: f64,
}

impl NodeModel {
    /// Chebyshev points rounded as usual.
    pub fn usual(n: usize) -> Result<NodeModel> {
        let x = gen_nodes_ext(n)?;
        let xh = gen_nodes_usual(n)?;
        let theta_inf = x
            .iter()
            .zip(&xh)
            .filter(|(xe, _)| !xe.is_zero())
            .map(|(&xe, &h)| ((ExtReal::from(h) - xe) / xe).abs().to_f64())
            .fold(0.0, f64::max);
        let xhat = xh.iter().map(|&v| ExtReal::from(v)).collect();
        Self::build(
            n,
            "usual".into(),
            x,
            xhat,
            salzer_exact_lambda(n),
            theta_inf,
        )
    }

    /// Chebyshev points in binned form; `theta` refers to the offsets.
    pub fn binned(n: usize, layout: &BinLayout) -> Result<NodeModel> {
        let x = gen_nodes_ext(n)?;
        let g = gen_binned_nodes(n, layout)?;
        let theta_inf = g
            .theta()
            .expect("generated grids carry exact offsets")
            .iter()
            .fold(0.0_f64, |m, t| m.max(t.abs()));
        let label = format!("binned-{}", layout.len());
        Self::build(
            n,
            label,
            x,
            g.reconstructed_nodes_ext(),
            salzer_exact_lambda(n),
            theta_inf,
        )
    }

    /// Arbitrary exact and perturbed node sets sharing their endpoints.
    pub fn from_nodes(x: Vec<ExtReal>, xhat: Vec<ExtReal>, theta_inf: f64) -> Result<NodeModel> {
        if x.len() != xhat.len() || x.len() < 2 {
            return Err(Error::Domain(
                "node sets must have equal length >= 2".into(),
            ));
        }
        let lambda_x = normalized_lambda_values(&x)?;
        Self::build(x.len() - 1, "custom".into(), x, xhat, lambda_x, theta_inf)
    }

    fn build(
        n: usize,
        label: String,
        x: Vec<ExtReal>,
        xhat: Vec<ExtReal>,
        lambda_x: Vec<ExtReal>,
        theta_inf: f64,
    ) -> Result<NodeModel> {
        crate::cheb::check_increasing(&x)?;
        crate::cheb::check_increasing(&xhat)?;
        if x[0] != xhat[0] || x[n] != xhat[n] {
            return Err(Error::Domain(
                "exact and perturbed nodes must share endpoints".into(),
            ));
        }
        let lambda_hat = normalized_lambda_values(&xhat)?;
        let xhat_f64 = xhat.iter().map(|v| v.to_f64()).collect();
        Ok(NodeModel {
            n,
            label,
            x,
            xhat,
            xhat_f64,
            lambda_x,
            lambda_hat,
            theta_inf,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Exact nodes.
    pub fn x(&self) -> &[ExtReal] {
        &self.x
    }

    /// Perturbed (rounded or binned) nodes.
    pub fn xhat(&self) -> &[ExtReal] {
        &self.xhat
    }

    /// Nearest doubles to the perturbed nodes.
    pub fn xhat_f64(&self) -> &[f64] {
        &self.xhat_f64
    }

    /// Normalized weights `lambda(x) 2^-n` of the exact nodes.
    pub fn lambda_x(&self) -> &[ExtReal] {
        &self.lambda_x
    }

    /// Normalized weights `lambda(xhat) 2^-n` of the perturbed nodes.
    pub fn lambda_hat(&self) -> &[ExtReal] {
        &self.lambda_hat
    }

    /// Largest relative node (or offset) rounding error.
    pub fn theta_inf(&self) -> f64 {
        self.theta_inf
    }

    fn lambda_hat_f64(&self) -> Vec<f64> {
        self.lambda_hat.iter().map(|v| v.to_f64()).collect()
    }

    /// Sampled Lebesgue constant of the perturbed nodes (a lower bound).
    pub fn lebesgue_hat(&self, samples_per_interval: usize) -> Result<f64> {
        lebesgue_estimate_with(&self.xhat_f64, &self.lambda_hat_f64(), samples_per_interval)
    }

    /// Sampled `rho` of the perturbed nodes (a lower bound).
    pub fn rho_hat(&self, samples_per_interval: usize) -> Result<f64> {
        rho_estimate_with(&self.xhat_f64, &self.lambda_hat_f64(), samples_per_interval)
    }

    /// Centers `(xhat_{k-1} + xhat_k) / 2`, `k = 1..=n`.
    pub fn centers(&self) -> Vec<ExtReal> {
        self.xhat
            .windows(2)
            .map(|p| (p[0] + p[1]).mul_pow2(-1))
            .collect()
    }
}
