use super::zvec::ZVector;

/// Window length for the running standard deviation of `z_k`.
pub const ZSTATS_WINDOW: usize = 32;
/// Unit roundoff used by the model curve `eps n^2 ln k / k`.
pub const ZSTATS_EPS: f64 = 1.0 / 9007199254740992.0;

#[derive(Clone, Debug)]
pub struct ZStats {
    pub n: usize,
    pub norm_inf: f64,
    pub norm_1: f64,
    /// `||z||_1 / (||z||_inf ln^2 n)`
    pub ratio: f64,
    /// `(window center k, standard deviation of z over the window)` for `k`
    /// in the left half; the right half mirrors it.
    pub windows: Vec<(f64, f64)>,
    /// Model curve `eps n^2 ln k / k` at the window centers.
    pub model: Vec<f64>,
    /// Constant `C` fitting `C * model` to the windows with center in
    /// `[8, n/4]` (geometric mean of the ratios).
    pub fit: f64,
    pub z: Vec<f64>,
}

impl ZStats {
    /// Largest factor between a window and the fitted model over `[8, n/4]`.
    pub fn max_fit_deviation(&self) -> f64 {
        self.fitted()
            .map(|(s, m)| {
                let r = s / (self.fit * m);
                r.max(1.0 / r)
            })
            .fold(1.0, f64::max)
    }

    fn fitted(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let hi = self.n as f64 / 4.0;
        self.windows
            .iter()
            .zip(&self.model)
            .filter(move |((c, s), _)| *c >= 8.0 && *c <= hi && *s > 0.0)
            .map(|((_, s), &m)| (*s, m))
    }
}

pub fn z_stats(z: &ZVector) -> ZStats {
    let zs = z.to_f64();
    let n = zs.len() - 1;
    let half = &zs[1..=n / 2];
    let mut windows = Vec::new();
    for (i, w) in half.chunks(ZSTATS_WINDOW).enumerate() {
        if w.len() < 2 {
            continue;
        }
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        let var = w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (w.len() - 1) as f64;
        let center = 1.0 + (i * ZSTATS_WINDOW) as f64 + (w.len() - 1) as f64 / 2.0;
        windows.push((center, var.sqrt()));
    }
    let nn = n as f64;
    let model: Vec<f64> = windows
        .iter()
        .map(|&(c, _)| ZSTATS_EPS * nn * nn * c.ln() / c)
        .collect();
    let mut st = ZStats {
        n,
        norm_inf: z.norm_inf(),
        norm_1: z.norm_1(),
        ratio: 0.0,
        windows,
        model,
        fit: 1.0,
        z: zs,
    };
    let ln = nn.ln();
    st.ratio = if st.norm_inf > 0.0 {
        st.norm_1 / (st.norm_inf * ln * ln)
    } else {
        0.0
    };
    let logs: Vec<f64> = st.fitted().map(|(s, m)| (s / m).ln()).collect();
    if !logs.is_empty() {
        st.fit = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    }
    st
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_model::{z_from_r, NodeModel};

    #[test]
    fn statistics_at_4095() {
        let m = NodeModel::usual(4095).unwrap();
        let st = z_stats(&z_from_r(&m).unwrap());
        assert!(st.ratio > 0.05 && st.ratio < 2.0, "ratio {}", st.ratio);
        assert!(
            st.max_fit_deviation() <= 10.0,
            "deviation {}",
            st.max_fit_deviation()
        );
        // spread shrinks away from the endpoints
        let first = st.windows[0].1;
        let last = st.windows.last().unwrap().1;
        assert!(first > last, "{first:e} vs {last:e}");
    }

    #[test]
    fn windows_cover_left_half() {
        let m = NodeModel::usual(200).unwrap();
        let st = z_stats(&z_from_r(&m).unwrap());
        assert_eq!(st.windows.len(), 4);
        assert_eq!(st.windows[0].0, 16.5);
        assert_eq!(st.z.len(), 201);
    }
}
