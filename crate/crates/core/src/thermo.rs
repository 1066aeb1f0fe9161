//! Van der Waals polytropic gas: closed-form thermodynamics and the
//! vacuum-compatible variable `pi`.

use crate::error::{Error, Result};

/// Material constants of a polytropic van der Waals gas together with the
/// derived exponents used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParameters {
    /// Covolume `b` (zero gives the ideal polytropic gas).
    pub covolume: f64,
    /// Specific gas constant `R`.
    pub gas_constant: f64,
    /// Heat capacity at constant volume.
    pub cv: f64,
    /// `1 + R/c_v`.
    pub gamma0: f64,
    /// `(gamma0 + 1)/(gamma0 - 1)`.
    pub nu: f64,
    /// Rescaled covolume `b ((gamma0 - 1)/(4 gamma0))^(1/(gamma0 - 1))`.
    pub scaled_covolume: f64,
}

/// Validates the gas constants and derives `gamma0`, `nu` and the rescaled
/// covolume.
pub fn derive_constants(covolume: f64, gas_constant: f64, cv: f64) -> Result<GasParameters> {
    if !(covolume.is_finite() && covolume >= 0.0) {
        return Err(Error::InvalidGas(format!("covolume b = {covolume} must be finite and >= 0")));
    }
    if !(gas_constant.is_finite() && gas_constant > 0.0) {
        return Err(Error::InvalidGas(format!("gas constant R = {gas_constant} must be > 0")));
    }
    if !(cv.is_finite() && cv > 0.0) {
        return Err(Error::InvalidGas(format!("heat capacity c_v = {cv} must be > 0")));
    }
    let gamma0 = 1.0 + gas_constant / cv;
    let nu = (gamma0 + 1.0) / (gamma0 - 1.0);
    let scaled_covolume = covolume * ((gamma0 - 1.0) / (4.0 * gamma0)).powf(1.0 / (gamma0 - 1.0));
    Ok(GasParameters { covolume, gas_constant, cv, gamma0, nu, scaled_covolume })
}

impl GasParameters {
    pub fn new(covolume: f64, gas_constant: f64, cv: f64) -> Result<Self> {
        derive_constants(covolume, gas_constant, cv)
    }

    /// Gas with a prescribed adiabatic exponent and `c_v = 1`.
    pub fn with_gamma(covolume: f64, gamma0: f64) -> Result<Self> {
        derive_constants(covolume, gamma0 - 1.0, 1.0)
    }

    /// Supremum of admissible densities, `1/b` (infinite for `b = 0`).
    pub fn max_density(&self) -> f64 {
        if self.covolume > 0.0 {
            1.0 / self.covolume
        } else {
            f64::INFINITY
        }
    }

    /// `(gamma0 - 1)/2`, the coupling exponent of the symmetrized system.
    pub fn half_gamma_minus_one(&self) -> f64 {
        0.5 * (self.gamma0 - 1.0)
    }

    /// Entropy weight `exp(s/(gamma0 c_v))`.
    pub fn entropy_weight(&self, s: f64) -> f64 {
        (s / (self.gamma0 * self.cv)).exp()
    }

    /// `1/(1 - b rho)` written in terms of `pi` and `s`:
    /// `1 + b~ exp(-s/(gamma0 c_v)) |pi|^(nu - 1)`.
    pub fn covolume_factor(&self, pi: f64, s: f64) -> f64 {
        if self.scaled_covolume == 0.0 {
            return 1.0;
        }
        1.0 + self.scaled_covolume / self.entropy_weight(s) * pi.abs().powf(self.nu - 1.0)
    }

    /// Normalisation `2 sqrt(gamma0/(gamma0 - 1))` of `pi`.
    fn pi_scale(&self) -> f64 {
        2.0 * (self.gamma0 / (self.gamma0 - 1.0)).sqrt()
    }

    fn check_density(&self, rho: f64) -> Result<()> {
        let max = self.max_density();
        if !(rho.is_finite() && rho >= 0.0 && rho < max) {
            return Err(Error::DensityOutOfDomain { rho, max });
        }
        Ok(())
    }

    /// `rho/(1 - b rho)`, the reciprocal of `v - b`.
    fn reduced_density(&self, rho: f64) -> f64 {
        rho / (1.0 - self.covolume * rho)
    }
}

/// Density and specific entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    pub rho: f64,
    pub s: f64,
}

impl ThermoState {
    pub fn new(rho: f64, s: f64) -> Self {
        Self { rho, s }
    }
}

/// All closed-form thermodynamic quantities at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoReport {
    pub pressure: f64,
    pub internal_energy: f64,
    pub temperature: f64,
    pub sound_speed: f64,
    /// Adiabatic exponent `gamma = gamma0 v/(v - b)`.
    pub adiabatic_exponent: f64,
    /// Grüneisen coefficient.
    pub grueneisen: f64,
    /// Thermal coefficient, equal to the Grüneisen coefficient for this gas.
    pub thermal_coefficient: f64,
    /// Fundamental derivative.
    pub fundamental_derivative: f64,
    /// Heat capacity at constant pressure.
    pub cp: f64,
    /// Isothermal-to-isentropic ratio `c_p/c_v`.
    pub heat_capacity_ratio: f64,
}

/// Pressure `(gamma0 - 1)(rho/(1 - b rho))^gamma0 exp(s/c_v)`; valid at vacuum.
pub fn pressure(state: ThermoState, gas: &GasParameters) -> Result<f64> {
    gas.check_density(state.rho)?;
    Ok((gas.gamma0 - 1.0) * gas.reduced_density(state.rho).powf(gas.gamma0) * (state.s / gas.cv).exp())
}

/// `rho c^2 = gamma p`; valid at vacuum where it vanishes.
pub fn rho_sound_speed_squared(state: ThermoState, gas: &GasParameters) -> Result<f64> {
    let p = pressure(state, gas)?;
    Ok(gas.gamma0 / (1.0 - gas.covolume * state.rho) * p)
}

/// Evaluates every thermodynamic quantity in closed form.
///
/// Zero density is rejected with [`Error::VacuumState`] because the specific
/// volume is undefined there; [`pressure`] and [`rho_sound_speed_squared`]
/// remain available at vacuum.
pub fn eos_eval(state: ThermoState, gas: &GasParameters) -> Result<ThermoReport> {
    gas.check_density(state.rho)?;
    if state.rho == 0.0 {
        return Err(Error::VacuumState);
    }
    let ThermoState { rho, s } = state;
    let excluded = 1.0 / (1.0 - gas.covolume * rho); // v/(v - b)
    let q = gas.reduced_density(rho);
    let entropy_factor = (s / gas.cv).exp();
    let internal_energy = q.powf(gas.gas_constant / gas.cv) * entropy_factor;
    let pressure = (gas.gamma0 - 1.0) * q.powf(gas.gamma0) * entropy_factor;
    let adiabatic_exponent = gas.gamma0 * excluded;
    let grueneisen = (gas.gamma0 - 1.0) * excluded;
    let cp = gas.cv + gas.gas_constant;
    Ok(ThermoReport {
        pressure,
        internal_energy,
        temperature: internal_energy / gas.cv,
        sound_speed: (adiabatic_exponent * pressure / rho).sqrt(),
        adiabatic_exponent,
        grueneisen,
        thermal_coefficient: grueneisen,
        fundamental_derivative: 0.5 * (gas.gamma0 + 1.0) * excluded,
        cp,
        heat_capacity_ratio: cp / gas.cv,
    })
}

/// Relative residuals of the thermodynamic identities at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `delta c_v = p v / T`.
    pub thermal_heat_capacity: f64,
    /// `c_p = (p v/T) gamma/(gamma delta - Gamma^2)`.
    pub cp_relation: f64,
    /// `gamma* = gamma delta/(gamma delta - Gamma^2)`.
    pub ratio_relation: f64,
    /// Fundamental derivative against `(1/c) d(rho c)/d rho` by central differences.
    pub fundamental_fd: f64,
    /// Sound speed against `sqrt(dp/d rho)` by central differences.
    pub sound_speed_fd: f64,
    /// `gamma > 1`, `Gamma > 0`, `delta > 0`, `fundamental > 1`.
    pub constraints_hold: bool,
}

impl IdentityResiduals {
    pub fn max_residual(&self) -> f64 {
        [self.thermal_heat_capacity, self.cp_relation, self.ratio_relation, self.fundamental_fd, self.sound_speed_fd]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Checks the thermodynamic identities and the sign constraints; derivative
/// identities use central differences with a relative step of `1e-6`.
pub fn thermo_identity_suite(state: ThermoState, gas: &GasParameters) -> Result<IdentityResiduals> {
    let r = eos_eval(state, gas)?;
    let v = 1.0 / state.rho;
    let pv_over_t = r.pressure * v / r.temperature;
    let gamma = r.adiabatic_exponent;
    let big_gamma = r.grueneisen;
    let delta = r.thermal_coefficient;
    let denom = gamma * delta - big_gamma * big_gamma;

    let mut step = 1e-6 * state.rho;
    if gas.covolume > 0.0 {
        step = step.min(0.5 * (gas.max_density() - state.rho));
    }
    let at = |rho: f64| eos_eval(ThermoState::new(rho, state.s), gas);
    let (lo, hi) = (at(state.rho - step)?, at(state.rho + step)?);
    let d_rho_c = ((state.rho + step) * hi.sound_speed - (state.rho - step) * lo.sound_speed) / (2.0 * step);
    let dp_drho = (hi.pressure - lo.pressure) / (2.0 * step);

    Ok(IdentityResiduals {
        thermal_heat_capacity: rel(delta * gas.cv, pv_over_t),
        cp_relation: rel(pv_over_t * gamma / denom, r.cp),
        ratio_relation: rel(gamma * delta / denom, r.heat_capacity_ratio),
        fundamental_fd: rel(d_rho_c / r.sound_speed, r.fundamental_derivative),
        sound_speed_fd: rel(dp_drho.sqrt(), r.sound_speed),
        constraints_hold: gamma > 1.0 && big_gamma > 0.0 && delta > 0.0 && r.fundamental_derivative > 1.0,
    })
}

/// Maps `(rho, s)` to the vacuum-compatible variable
/// `pi = 2 sqrt(gamma0/(gamma0 - 1)) (rho/(1 - b rho))^((gamma0 - 1)/2) exp((gamma0 - 1) s/(2 gamma0 c_v))`.
pub fn pi_from_state(state: ThermoState, gas: &GasParameters) -> Result<f64> {
    gas.check_density(state.rho)?;
    let k = gas.half_gamma_minus_one();
    Ok(gas.pi_scale() * gas.reduced_density(state.rho).powf(k) * (k * state.s / (gas.gamma0 * gas.cv)).exp())
}

/// Same variable expressed through the pressure:
/// `pi = 2 sqrt(gamma0/(gamma0 - 1)) (p/(gamma0 - 1))^((gamma0 - 1)/(2 gamma0))`.
pub fn pi_from_pressure(p: f64, gas: &GasParameters) -> f64 {
    gas.pi_scale() * (p / (gas.gamma0 - 1.0)).powf(gas.half_gamma_minus_one() / gas.gamma0)
}

/// Inverse of [`pi_from_state`] for `pi >= 0`.
///
/// Uses `q = (pi/K)^(2/(gamma0 - 1)) exp(-s/(gamma0 c_v))`, `rho = q/(1 + b q)`
/// so that small densities do not suffer cancellation.
pub fn rho_from_pi(pi: f64, s: f64, gas: &GasParameters) -> Result<f64> {
    if !(pi.is_finite() && pi >= 0.0) {
        return Err(Error::InvalidArgument(format!("pi = {pi} must be finite and >= 0")));
    }
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("entropy s = {s} must be finite")));
    }
    Ok(reduced_density_from_pi(pi, s, gas).map(|q| q / (1.0 + gas.covolume * q)).unwrap_or(0.0))
}

/// `rho/(1 - b rho)` recovered from `pi`; `None` at vacuum.
fn reduced_density_from_pi(pi: f64, s: f64, gas: &GasParameters) -> Option<f64> {
    if pi == 0.0 {
        return None;
    }
    Some((pi / gas.pi_scale()).powf(1.0 / gas.half_gamma_minus_one()) / gas.entropy_weight(s))
}

/// Density and internal energy per unit volume recovered from `pi`, extended
/// as odd functions of `pi` so that integrals stay linear in small
/// undershoots below vacuum.
pub fn signed_density_and_energy(pi: f64, s: f64, gas: &GasParameters) -> (f64, f64) {
    let Some(q) = reduced_density_from_pi(pi.abs(), s, gas) else {
        return (0.0, 0.0);
    };
    let rho = q / (1.0 + gas.covolume * q);
    let rho_e = rho * q.powf(gas.gamma0 - 1.0) * (s / gas.cv).exp();
    (rho.copysign(pi), rho_e.copysign(pi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants_match_hand_values() {
        let gas = derive_constants(1.0, 1.0, 0.5).unwrap();
        assert_eq!(gas.gamma0, 3.0);
        assert_eq!(gas.nu, 2.0);
        // b (2/12)^(1/2)
        assert!((gas.scaled_covolume - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
        assert!((gas.scaled_covolume - 0.408248).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(derive_constants(-0.1, 1.0, 1.0).is_err());
        assert!(derive_constants(0.1, 0.0, 1.0).is_err());
        assert!(derive_constants(0.1, 1.0, -1.0).is_err());
        assert!(derive_constants(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn hand_computed_state() {
        // gamma0 = 3, b = 0.5, rho = 1, s = 0: v - b = 1/2, p = 2 * 2^3, gamma = 6.
        let gas = GasParameters::with_gamma(0.5, 3.0).unwrap();
        let r = eos_eval(ThermoState::new(1.0, 0.0), &gas).unwrap();
        assert!((r.pressure - 16.0).abs() < 1e-13);
        assert!((r.adiabatic_exponent - 6.0).abs() < 1e-14);
        assert!((r.sound_speed - 96f64.sqrt()).abs() < 1e-12);
        assert!((r.internal_energy - 4.0).abs() < 1e-13);
        assert!((r.fundamental_derivative - 4.0).abs() < 1e-14);
        assert!((r.cp - 3.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_and_out_of_range() {
        let gas = GasParameters::with_gamma(0.5, 3.0).unwrap();
        assert_eq!(eos_eval(ThermoState::new(0.0, 0.0), &gas), Err(Error::VacuumState));
        assert_eq!(pressure(ThermoState::new(0.0, 0.0), &gas), Ok(0.0));
        assert_eq!(rho_sound_speed_squared(ThermoState::new(0.0, 0.0), &gas), Ok(0.0));
        assert!(matches!(eos_eval(ThermoState::new(2.0, 0.0), &gas), Err(Error::DensityOutOfDomain { .. })));
        assert!(matches!(eos_eval(ThermoState::new(-1.0, 0.0), &gas), Err(Error::DensityOutOfDomain { .. })));
    }

    #[test]
    fn pi_definitions_agree() {
        let gas = GasParameters::new(0.3, 0.4, 1.0).unwrap();
        for &(rho, s) in &[(0.1, 0.0), (1.0, 0.3), (3.0, -0.7)] {
            let st = ThermoState::new(rho, s);
            let p = pressure(st, &gas).unwrap();
            let a = pi_from_state(st, &gas).unwrap();
            let b = pi_from_pressure(p, &gas);
            assert!((a - b).abs() <= 1e-13 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn covolume_factor_is_excluded_volume_ratio() {
        let gas = GasParameters::new(0.5, 2.0, 1.0).unwrap();
        for &(rho, s) in &[(0.2, 0.0), (1.5, 0.4), (1.99, -1.0)] {
            let pi = pi_from_state(ThermoState::new(rho, s), &gas).unwrap();
            let direct = 1.0 / (1.0 - gas.covolume * rho);
            assert!((gas.covolume_factor(pi, s) - direct).abs() <= 1e-11 * direct);
        }
    }

    #[test]
    fn signed_extension_is_odd() {
        let gas = GasParameters::with_gamma(0.5, 3.0).unwrap();
        let (r1, e1) = signed_density_and_energy(0.3, 0.1, &gas);
        let (r2, e2) = signed_density_and_energy(-0.3, 0.1, &gas);
        assert_eq!(r1, -r2);
        assert_eq!(e1, -e2);
        assert_eq!(r1, rho_from_pi(0.3, 0.1, &gas).unwrap());
        assert_eq!(signed_density_and_energy(0.0, 0.0, &gas), (0.0, 0.0));
    }
}
