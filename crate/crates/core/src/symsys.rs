//! First-order symmetric hyperbolic structure of the Euler system in the
//! variables `(pi, u, s)`, the classical `(p, u, s)` symmetrizer, and the
//! splittings used around an expanding background.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::thermo::{self, GasParameters, ThermoState};

/// Which system is being solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Formulation {
    /// Entropy frozen at zero; unknowns `(pi, w)`.
    Isentropic,
    /// Full system with the entropy row weighted by `(1 + t)^(-theta)`.
    General { theta: f64 },
}

impl Formulation {
    pub fn is_isentropic(&self) -> bool {
        matches!(self, Formulation::Isentropic)
    }

    /// Number of unknowns for spatial dimension `d`.
    pub fn components(&self, d: usize) -> usize {
        match self {
            Formulation::Isentropic => d + 1,
            Formulation::General { .. } => d + 2,
        }
    }

    /// Admissible weights satisfy `0 < theta <= min(1, (gamma0 - 1)/2)`.
    pub fn validate(&self, gas: &GasParameters) -> Result<()> {
        if let Formulation::General { theta } = *self {
            let upper = gas.half_gamma_minus_one().min(1.0);
            if !(theta > 0.0 && theta <= upper * (1.0 + 1e-12)) {
                return Err(Error::HypothesisViolated(format!(
                    "entropy weight theta = {theta} must lie in (0, {upper}]"
                )));
            }
        }
        Ok(())
    }
}

/// Pointwise state in the symmetrized variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedState {
    pub pi: f64,
    pub velocity: Vec<f64>,
    pub entropy: f64,
}

/// `(gamma0 - 1)/2 * pi/(1 - b rho)`, the off-diagonal coupling strength.
pub fn coupling(pi: f64, s: f64, gas: &GasParameters) -> f64 {
    gas.half_gamma_minus_one() * pi * gas.covolume_factor(pi, s)
}

/// `|pi|^nu` continued as an odd function, used for the covolume forcing.
pub fn signed_power(pi: f64, exponent: f64) -> f64 {
    pi.abs().powf(exponent).copysign(pi)
}

/// Flux symbol `A(xi)` together with the diagonal of its symmetrizer.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSymbol {
    pub matrix: DMatrix<f64>,
    pub symmetrizer: DVector<f64>,
}

impl FluxSymbol {
    pub fn symmetrized(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.symmetrizer) * &self.matrix
    }

    /// Largest absolute entry of `S A - (S A)^T`.
    pub fn asymmetry(&self) -> f64 {
        let m = self.symmetrized();
        (&m - m.transpose()).amax()
    }

    /// Real eigenvalues of `A(xi)` through the symmetric pencil.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let root: DVector<f64> = self.symmetrizer.map(f64::sqrt);
        let inv_root: DVector<f64> = root.map(|r| 1.0 / r);
        let sym = DMatrix::from_diagonal(&root) * &self.matrix * DMatrix::from_diagonal(&inv_root);
        let sym = 0.5 * (&sym + sym.transpose());
        sym.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues().into_iter().fold(0.0, |m, l| m.max(l.abs()))
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Assembles `A(xi)` for the `(pi, u, s)` system and its diagonal
/// symmetrizer `Diag(1, exp(-s/(gamma0 c_v)) 1_d, 1)`.
pub fn assemble_symbol(xi: &[f64], state: &SymmetrizedState, gas: &GasParameters) -> Result<FluxSymbol> {
    let d = xi.len();
    check_dim(d, state.velocity.len())?;
    let n = d + 2;
    let advect: f64 = xi.iter().zip(&state.velocity).map(|(a, b)| a * b).sum();
    let weight = gas.entropy_weight(state.entropy);
    let k = coupling(state.pi, state.entropy, gas);
    let mut a = DMatrix::from_diagonal_element(n, n, advect);
    for (j, &x) in xi.iter().enumerate() {
        a[(0, j + 1)] = k * x;
        a[(j + 1, 0)] = k * weight * x;
    }
    let mut s = DVector::from_element(n, 1.0);
    for j in 0..d {
        s[j + 1] = 1.0 / weight;
    }
    Ok(FluxSymbol { matrix: a, symmetrizer: s })
}

/// Classical symbol in `(p, u, s)` with symmetrizer `Diag(1/(rho c^2), rho 1_d, 1)`.
pub fn classical_symmetrizer(
    rho: f64,
    velocity: &[f64],
    s: f64,
    xi: &[f64],
    gas: &GasParameters,
) -> Result<FluxSymbol> {
    let d = xi.len();
    check_dim(d, velocity.len())?;
    let report = thermo::eos_eval(ThermoState::new(rho, s), gas)?;
    let rho_c2 = rho * report.sound_speed * report.sound_speed;
    let n = d + 2;
    let advect: f64 = xi.iter().zip(velocity).map(|(a, b)| a * b).sum();
    let mut a = DMatrix::from_diagonal_element(n, n, advect);
    for (j, &x) in xi.iter().enumerate() {
        a[(0, j + 1)] = rho_c2 * x;
        a[(j + 1, 0)] = x / rho;
    }
    let mut diag = DVector::from_element(n, rho);
    diag[0] = 1.0 / rho_c2;
    diag[n - 1] = 1.0;
    Ok(FluxSymbol { matrix: a, symmetrizer: diag })
}

/// Values and first derivatives of the perturbation and the background at
/// one point. Gradients of vector fields are row-major with
/// `grad[i * d + j] = d_j f_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalJet {
    pub pi: f64,
    pub w: Vec<f64>,
    pub s: f64,
    pub grad_pi: Vec<f64>,
    pub grad_w: Vec<f64>,
    pub grad_s: Vec<f64>,
    pub ubar: Vec<f64>,
    pub grad_ubar: Vec<f64>,
}

impl LocalJet {
    pub fn dim(&self) -> usize {
        self.w.len()
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        check_dim(d, self.grad_pi.len())?;
        check_dim(d * d, self.grad_w.len())?;
        check_dim(d, self.grad_s.len())?;
        check_dim(d, self.ubar.len())?;
        check_dim(d * d, self.grad_ubar.len())
    }

    fn trace(grad: &[f64], d: usize) -> f64 {
        (0..d).map(|i| grad[i * d + i]).sum()
    }

    /// `(w . grad) ubar`.
    fn stretching(&self) -> DVector<f64> {
        let d = self.dim();
        DVector::from_fn(d, |i, _| (0..d).map(|j| self.w[j] * self.grad_ubar[i * d + j]).sum())
    }
}

/// Splitting of the isentropic system around the background:
/// `U_t + sum_j (A_j + ubar_j) d_j U + B + F = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsentropicSplit {
    pub a: Vec<DMatrix<f64>>,
    pub b: DVector<f64>,
    pub f: DVector<f64>,
}

pub fn assemble_isentropic_split(jet: &LocalJet, gas: &GasParameters) -> Result<IsentropicSplit> {
    jet.validate()?;
    let d = jet.dim();
    let kappa = gas.half_gamma_minus_one();
    let a = (0..d)
        .map(|j| {
            let mut m = DMatrix::from_diagonal_element(d + 1, d + 1, jet.w[j]);
            m[(0, j + 1)] = kappa * jet.pi;
            m[(j + 1, 0)] = kappa * jet.pi;
            m
        })
        .collect();
    let div_ubar = LocalJet::trace(&jet.grad_ubar, d);
    let div_u = LocalJet::trace(&jet.grad_w, d) + div_ubar;
    let stretch = jet.stretching();
    let mut b = DVector::zeros(d + 1);
    b[0] = kappa * jet.pi * div_ubar;
    b.rows_mut(1, d).copy_from(&stretch);
    let amp = kappa * gas.scaled_covolume * signed_power(jet.pi, gas.nu);
    let mut f = DVector::zeros(d + 1);
    f[0] = amp * div_u;
    for j in 0..d {
        f[j + 1] = amp * jet.grad_pi[j];
    }
    Ok(IsentropicSplit { a, b, f })
}

/// Splitting of the entropy-weighted system:
/// `A0 V_t + sum_j (A_j + C_j) d_j V + B + F = 0` with `C_j = ubar_j A0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSplit {
    pub a0: DVector<f64>,
    pub a: Vec<DMatrix<f64>>,
    pub c: Vec<DMatrix<f64>>,
    pub b: DVector<f64>,
    pub f: DVector<f64>,
}

pub fn assemble_general_split(jet: &LocalJet, t: f64, theta: f64, gas: &GasParameters) -> Result<GeneralSplit> {
    jet.validate()?;
    Formulation::General { theta }.validate(gas)?;
    let d = jet.dim();
    let n = d + 2;
    let kappa = gas.half_gamma_minus_one();
    let weight = gas.entropy_weight(jet.s);
    let damping = (1.0 + t).powf(-theta);
    let mut a0 = DVector::from_element(n, 1.0);
    a0[0] = weight;
    a0[n - 1] = damping;
    let a: Vec<DMatrix<f64>> = (0..d)
        .map(|j| {
            let mut m = DMatrix::from_diagonal(&(&a0 * jet.w[j]));
            m[(0, j + 1)] = kappa * weight * jet.pi;
            m[(j + 1, 0)] = kappa * weight * jet.pi;
            m
        })
        .collect();
    let c = (0..d).map(|j| DMatrix::from_diagonal(&(&a0 * jet.ubar[j]))).collect();
    let div_ubar = LocalJet::trace(&jet.grad_ubar, d);
    let div_u = LocalJet::trace(&jet.grad_w, d) + div_ubar;
    let mut b = DVector::zeros(n);
    b[0] = kappa * weight * jet.pi * div_ubar;
    b.rows_mut(1, d).copy_from(&jet.stretching());
    let amp = kappa * gas.scaled_covolume * signed_power(jet.pi, gas.nu);
    let mut f = DVector::zeros(n);
    f[0] = amp * div_u;
    for j in 0..d {
        f[j + 1] = amp * jet.grad_pi[j];
    }
    Ok(GeneralSplit { a0, a, c, b, f })
}

/// Local bound on the characteristic speeds at one state.
///
/// Isentropic: `(gamma0 - 1)/2 |pi| (1 + b~ |pi|^(nu - 1)) + |u|`.
/// General: the same multiplied by `exp(|s|/(2 gamma0 c_v))`; with the
/// absolute value the bound also covers negative entropy.
pub fn local_speed_bound(pi: f64, speed: f64, s: f64, gas: &GasParameters, formulation: Formulation) -> f64 {
    let sound = gas.half_gamma_minus_one() * pi.abs() * (1.0 + gas.scaled_covolume * pi.abs().powf(gas.nu - 1.0));
    let base = sound + speed;
    match formulation {
        Formulation::Isentropic => base,
        Formulation::General { .. } => (s.abs() / (2.0 * gas.gamma0 * gas.cv)).exp() * base,
    }
}

/// Supremum of [`local_speed_bound`] over a set of states.
pub fn max_propagation_speed<'a, I>(states: I, gas: &GasParameters, formulation: Formulation) -> f64
where
    I: IntoIterator<Item = &'a SymmetrizedState>,
{
    states.into_iter().fold(0.0, |m, st| {
        let speed = st.velocity.iter().map(|u| u * u).sum::<f64>().sqrt();
        let s = if formulation.is_isentropic() { 0.0 } else { st.entropy };
        m.max(local_speed_bound(st.pi, speed, s, gas, formulation))
    })
}

/// Values, time derivatives and gradients of a candidate solution in the
/// full velocity `u`, used to evaluate residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct PointJet {
    pub pi: f64,
    pub u: Vec<f64>,
    pub s: f64,
    pub pi_t: f64,
    pub u_t: Vec<f64>,
    pub s_t: f64,
    pub grad_pi: Vec<f64>,
    pub grad_u: Vec<f64>,
    pub grad_s: Vec<f64>,
}

/// Residual `[pi, u_1..u_d, s]` of the non-conservative system
/// `pi_t + u.grad pi + k pi div u`, `u_t + (u.grad) u + k E pi grad pi`,
/// `s_t + u.grad s`, with `k = (gamma0 - 1)/(2(1 - b rho))` and
/// `E = exp(s/(gamma0 c_v))`. The isentropic formulation ignores `s`.
pub fn residual(jet: &PointJet, gas: &GasParameters, formulation: Formulation) -> Result<Vec<f64>> {
    let d = jet.u.len();
    check_dim(d, jet.u_t.len())?;
    check_dim(d, jet.grad_pi.len())?;
    check_dim(d * d, jet.grad_u.len())?;
    check_dim(d, jet.grad_s.len())?;
    let s = if formulation.is_isentropic() { 0.0 } else { jet.s };
    let weight = gas.entropy_weight(s);
    let k = coupling(jet.pi, s, gas);
    let dot = |g: &[f64]| -> f64 { (0..d).map(|j| jet.u[j] * g[j]).sum() };
    let div_u: f64 = (0..d).map(|i| jet.grad_u[i * d + i]).sum();
    let mut out = Vec::with_capacity(d + 2);
    out.push(jet.pi_t + dot(&jet.grad_pi) + k * div_u);
    for i in 0..d {
        let adv: f64 = (0..d).map(|j| jet.u[j] * jet.grad_u[i * d + j]).sum();
        out.push(jet.u_t[i] + adv + k * weight * jet.grad_pi[i]);
    }
    if !formulation.is_isentropic() {
        out.push(jet.s_t + dot(&jet.grad_s));
    }
    Ok(out)
}

/// Residual of the entropy-weighted form: the `pi` row multiplied by
/// `exp(s/(gamma0 c_v))` and the entropy row by `(1 + t)^(-theta)`.
pub fn weighted_residual(jet: &PointJet, t: f64, theta: f64, gas: &GasParameters) -> Result<Vec<f64>> {
    let mut r = residual(jet, gas, Formulation::General { theta })?;
    let n = r.len();
    r[0] *= gas.entropy_weight(jet.s);
    r[n - 1] *= (1.0 + t).powf(-theta);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasParameters {
        GasParameters::new(0.4, 1.0, 1.0).unwrap()
    }

    #[test]
    fn symbol_is_symmetrizable() {
        let g = gas();
        let st = SymmetrizedState { pi: 0.8, velocity: vec![0.3, -1.2], entropy: 0.7 };
        let sym = assemble_symbol(&[0.6, -0.8], &st, &g).unwrap();
        assert!(sym.asymmetry() <= 1e-14);
        assert!(sym.symmetrizer.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn vacuum_symbol_is_pure_transport() {
        let g = gas();
        let st = SymmetrizedState { pi: 0.0, velocity: vec![2.0], entropy: 0.0 };
        let sym = assemble_symbol(&[1.5], &st, &g).unwrap();
        assert_eq!(sym.matrix, DMatrix::from_diagonal_element(3, 3, 3.0));
    }

    #[test]
    fn eigenvalues_match_sound_speed() {
        // Characteristic speeds of the symbol must equal u.xi +- c |xi|.
        let g = gas();
        let (rho, s) = (0.9, 0.25);
        let pi = thermo::pi_from_state(ThermoState::new(rho, s), &g).unwrap();
        let c = thermo::eos_eval(ThermoState::new(rho, s), &g).unwrap().sound_speed;
        let st = SymmetrizedState { pi, velocity: vec![0.5], entropy: s };
        let mut ev = assemble_symbol(&[1.0], &st, &g).unwrap().eigenvalues();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - (0.5 - c)).abs() < 1e-12 * c);
        assert!((ev[2] - (0.5 + c)).abs() < 1e-12 * c);
    }

    #[test]
    fn classical_symbol_rejects_vacuum() {
        let g = gas();
        assert!(classical_symmetrizer(0.0, &[0.0], 0.0, &[1.0], &g).is_err());
        let sym = classical_symmetrizer(1.0, &[0.2], 0.0, &[1.0], &g).unwrap();
        assert!(sym.asymmetry() <= 1e-14);
    }

    #[test]
    fn covolume_forcing_example() {
        // gamma0 = 3, pi = 1, b~ = 0.1, div(w + ubar) = 2, grad pi = 1.
        let mut g = GasParameters::with_gamma(0.0, 3.0).unwrap();
        g.scaled_covolume = 0.1;
        let jet = LocalJet {
            pi: 1.0,
            w: vec![0.0],
            s: 0.0,
            grad_pi: vec![1.0],
            grad_w: vec![1.0],
            grad_s: vec![0.0],
            ubar: vec![0.0],
            grad_ubar: vec![1.0],
        };
        let split = assemble_isentropic_split(&jet, &g).unwrap();
        assert!((split.f[0] - 0.2).abs() < 1e-15);
        assert!((split.f[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn theta_range_is_enforced() {
        let g = GasParameters::with_gamma(0.1, 1.4).unwrap();
        assert!(Formulation::General { theta: 0.2 }.validate(&g).is_ok());
        assert!(Formulation::General { theta: 0.3 }.validate(&g).is_err());
        assert!(Formulation::General { theta: 0.0 }.validate(&g).is_err());
    }
}
