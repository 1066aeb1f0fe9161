use crate::error::{Error, Result};

/// Comparison function `f(x) = (1/nu) ln(x^nu/(1 + x^nu))` and the envelope
/// it induces for `zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonFunction {
    pub nu: f64,
    /// Exponent `a > 1`.
    pub growth: f64,
    /// Fitted constant `C >= 0`.
    pub constant: f64,
}

/// Exponent used by the envelope of the general formulation, `max(nu, m + 1)`.
pub fn general_exponent(nu: f64, m: usize) -> f64 {
    nu.max(m as f64 + 1.0)
}

impl ComparisonFunction {
    pub fn new(nu: f64, growth: f64, constant: f64) -> Result<Self> {
        if !(nu >= 2.0 && nu.is_finite()) {
            return Err(Error::InvalidArgument(format!("comparison exponent {nu} must be >= 2")));
        }
        if !(growth > 1.0) {
            return Err(Error::InvalidArgument(format!("growth exponent a = {growth} must exceed 1")));
        }
        if !(constant >= 0.0 && constant.is_finite()) {
            return Err(Error::InvalidArgument(format!("constant C = {constant} must be >= 0")));
        }
        Ok(Self { nu, growth, constant })
    }

    pub fn f(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let nu = self.nu;
        if x >= 1.0 {
            -(x.powf(-nu)).ln_1p() / nu
        } else {
            (nu * x.ln() - x.powf(nu).ln_1p()) / nu
        }
    }

    /// `f^-1(y) = (e^(nu y)/(1 - e^(nu y)))^(1/nu)` for `y < 0`.
    pub fn f_inverse(&self, y: f64) -> Result<f64> {
        if !(y < 0.0) {
            return Err(Error::ComparisonDomain(y));
        }
        if y == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        Ok((1.0 / (-self.nu * y).exp_m1()).powf(1.0 / self.nu))
    }

    /// Smallness threshold `f^-1(-C/(a - 1))` on `zeta(0)`.
    pub fn threshold(&self) -> Result<f64> {
        self.f_inverse(-self.constant / (self.growth - 1.0))
    }

    /// `f^-1(f(zeta0) + C (1 - (1 + t)^(1 - a))/(a - 1))`, infinite once the
    /// argument leaves the domain of `f^-1`.
    pub fn envelope(&self, zeta0: f64, t: f64) -> f64 {
        let a1 = self.growth - 1.0;
        let arg = self.f(zeta0) + self.constant * (1.0 - (1.0 + t).powf(-a1)) / a1;
        self.f_inverse(arg).unwrap_or(f64::INFINITY)
    }

    /// Compares a `zeta` series against the envelope started from `zeta[0]`.
    pub fn check(&self, times: &[f64], zeta: &[f64]) -> EnvelopeReport {
        let mut report = EnvelopeReport { holds: true, worst_ratio: 0.0, first_violation: None, unbounded_from: None };
        let Some(&z0) = zeta.first() else { return report };
        for (&t, &z) in times.iter().zip(zeta) {
            let env = self.envelope(z0, t);
            if env.is_infinite() {
                report.unbounded_from.get_or_insert(t);
                continue;
            }
            let ratio = if env > 0.0 {
                z / env
            } else if z > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            report.worst_ratio = report.worst_ratio.max(ratio);
            if ratio > 1.0 + 1e-12 {
                report.holds = false;
                report.first_violation.get_or_insert(t);
            }
        }
        report
    }
}

/// Outcome of an envelope comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub holds: bool,
    /// Largest `zeta/envelope` over samples where the envelope is finite.
    pub worst_ratio: f64,
    pub first_violation: Option<f64>,
    /// First time from which the envelope is infinite.
    pub unbounded_from: Option<f64>,
}

/// Smallest `C` for which `zeta(t) = (1 + t)^a e^(C/(1 + t)) Z(t)` stays
/// below the envelope on `t <= window_end`.
pub fn calibrate_constant(times: &[f64], z: &[f64], nu: f64, growth: f64, window_end: f64) -> Result<f64> {
    let n = times.iter().take_while(|&&t| t <= window_end + 1e-12).count();
    if n < 2 {
        return Err(Error::DegenerateFit(format!(
            "fewer than two samples in the calibration window [0, {window_end}]"
        )));
    }
    let holds = |c: f64| -> Result<bool> {
        let cmp = ComparisonFunction::new(nu, growth, c)?;
        let zeta: Vec<f64> =
            times[..n].iter().zip(&z[..n]).map(|(&t, &z)| (1.0 + t).powf(growth) * (c / (1.0 + t)).exp() * z).collect();
        Ok(cmp.check(&times[..n], &zeta).holds)
    };
    if holds(0.0)? {
        return Ok(0.0);
    }
    let mut hi = 1e-6;
    while !holds(hi)? {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::DegenerateFit("no constant makes the envelope hold on the calibration window".into()));
        }
    }
    let mut lo = hi / 2.0;
    if hi == 1e-6 {
        lo = 0.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_one() {
        let c = ComparisonFunction::new(2.0, 2.0, 1.0).unwrap();
        assert!((c.f(1.0) - 0.5 * 0.5f64.ln()).abs() < 1e-15);
        assert!((c.f(1.0) + 0.34657).abs() < 1e-5);
    }

    #[test]
    fn inverse_identity() {
        for &nu in &[2.0, 3.0, 4.5] {
            let c = ComparisonFunction::new(nu, 2.0, 1.0).unwrap();
            for &x in &[0.01, 0.1, 1.0, 10.0] {
                let back = c.f_inverse(c.f(x)).unwrap();
                assert!((back - x).abs() <= 1e-14 * x.max(1.0), "{nu} {x} {back}");
            }
        }
    }

    #[test]
    fn inverse_domain() {
        let c = ComparisonFunction::new(2.0, 2.0, 1.0).unwrap();
        assert_eq!(c.f_inverse(0.0), Err(Error::ComparisonDomain(0.0)));
        assert!(c.f_inverse(0.5).is_err());
    }

    #[test]
    fn envelope_starts_at_initial_value() {
        let c = ComparisonFunction::new(2.0, 2.0, 0.3).unwrap();
        assert!((c.envelope(0.01, 0.0) - 0.01).abs() < 1e-16);
        assert!(c.envelope(0.01, 10.0) > 0.01);
    }
}
