use crate::error::{Error, Result};

/// Least-squares power law `Y ~ C (1 + t)^p` over a time window.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub k: usize,
    pub exponent: f64,
    /// `ln C`.
    pub intercept: f64,
    /// Root-mean-square residual in `ln Y`.
    pub residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

impl DecayFit {
    /// `p <= predicted + slack`.
    pub fn passes(&self, predicted: f64, slack: f64) -> bool {
        self.exponent <= predicted + slack
    }
}

/// Fits `ln Y_k` against `ln(1 + t)` on samples with `t` in `window`.
pub fn decay_fit(times: &[f64], values: &[f64], k: usize, window: (f64, f64)) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), got: values.len() });
    }
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::DegenerateFit(format!("window [{lo}, {hi}] is empty")));
    }
    let last = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > last * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::DegenerateFit(format!("window end {hi} lies beyond the last sample {last}")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &y) in times.iter().zip(values) {
        if t < lo - 1e-12 || t > hi + 1e-12 {
            continue;
        }
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::DegenerateFit(format!("Y_{k}({t}) = {y} is not positive")));
        }
        xs.push((1.0 + t).ln());
        ys.push(y.ln());
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::DegenerateFit(format!("only {n} samples in [{lo}, {hi}]")));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all samples at one time".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    Ok(DecayFit { k, exponent, intercept, residual: (sse / n as f64).sqrt(), window, samples: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let t: Vec<f64> = (0..=100).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = t.iter().map(|t| 3.0 * (1.0 + t).powf(-1.5)).collect();
        let fit = decay_fit(&t, &y, 0, (5.0, 50.0)).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(fit.passes(-1.5, 1e-12));
        assert!(!fit.passes(-1.6, 0.05));
    }

    #[test]
    fn degenerate_windows() {
        let t = [0.0, 1.0, 2.0];
        let y = [1.0, 0.5, 0.0];
        assert!(decay_fit(&t, &y, 0, (0.0, 1.0)).is_ok());
        assert!(decay_fit(&t, &y, 0, (0.0, 2.0)).is_err());
        assert!(decay_fit(&t, &y, 0, (1.5, 1.7)).is_err());
        assert!(decay_fit(&t, &y, 0, (0.0, 5.0)).is_err());
    }
}
