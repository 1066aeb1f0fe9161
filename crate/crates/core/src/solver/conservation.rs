use super::fields::FieldSet;
use super::integrator::BackgroundGrid;
use crate::error::{Error, Result};
use crate::par;
use crate::thermo::{self, GasParameters};

/// Mass, momentum and total energy of the full flow `u = w + ubar`.
///
/// Density and internal energy are recovered from `pi` with the odd
/// extension of [`thermo::signed_density_and_energy`], so undershoots below
/// vacuum enter linearly instead of being clipped.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedIntegrals {
    pub time: f64,
    pub mass: f64,
    pub momentum: Vec<f64>,
    pub energy: f64,
    /// Integrals of the absolute values, used to normalise drifts.
    pub mass_scale: f64,
    pub momentum_scale: Vec<f64>,
    pub energy_scale: f64,
    /// Largest `|pi|` within `buffer_cells` of the periodic seam relative to the
    /// global maximum; a support reaching the seam invalidates the check.
    pub seam_fraction: f64,
}

/// Relative drifts against an earlier measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationDrift {
    pub mass: f64,
    pub momentum: Vec<f64>,
    pub energy: f64,
}

impl ConservationDrift {
    pub fn max(&self) -> f64 {
        self.momentum.iter().fold(self.mass.abs().max(self.energy.abs()), |m, p| m.max(p.abs()))
    }
}

pub fn conservation_monitor(
    fields: &FieldSet,
    background: &BackgroundGrid,
    gas: &GasParameters,
    buffer_cells: usize,
) -> Result<ConservedIntegrals> {
    if background.velocity.len() != fields.grid.dim() || background.time().to_bits() != fields.time.to_bits() {
        return Err(Error::InvalidArgument("background grid does not match the fields".into()));
    }
    let grid = fields.grid;
    let d = grid.dim();
    let n = grid.len();
    let vol = grid.cell_volume();
    let local = |idx: usize| {
        let s = fields.entropy_at(idx);
        let (rho, rho_e) = thermo::signed_density_and_energy(fields.pi()[idx], s, gas);
        let mut u = [0.0; 2];
        for j in 0..d {
            u[j] = fields.velocity(j)[idx] + background.velocity[j][idx];
        }
        let speed2: f64 = u.iter().map(|x| x * x).sum();
        (rho, u, 0.5 * rho * speed2 + rho_e)
    };
    let mass = vol * par::sum(n, |i| local(i).0);
    let mass_scale = vol * par::sum(n, |i| local(i).0.abs());
    let energy = vol * par::sum(n, |i| local(i).2);
    let energy_scale = vol * par::sum(n, |i| local(i).2.abs());
    let momentum = (0..d).map(|j| vol * par::sum(n, |i| local(i).0 * local(i).1[j])).collect();
    let momentum_scale = (0..d).map(|j| vol * par::sum(n, |i| (local(i).0 * local(i).1[j]).abs())).collect();
    let peak = par::max(n, |i| fields.pi()[i].abs());
    let seam = par::max(n, |i| if grid.in_seam_buffer(i, buffer_cells) { fields.pi()[i].abs() } else { 0.0 });
    Ok(ConservedIntegrals {
        time: fields.time,
        mass,
        momentum,
        energy,
        mass_scale,
        momentum_scale,
        energy_scale,
        seam_fraction: if peak > 0.0 { seam / peak } else { 0.0 },
    })
}

fn relative(now: f64, then: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        (now - then) / scale
    } else {
        0.0
    }
}

/// Drift of `now` relative to `initial`, each quantity normalised by the
/// initial integral of its absolute value.
pub fn drift(initial: &ConservedIntegrals, now: &ConservedIntegrals) -> ConservationDrift {
    ConservationDrift {
        mass: relative(now.mass, initial.mass, initial.mass_scale),
        momentum: now
            .momentum
            .iter()
            .zip(&initial.momentum)
            .zip(&initial.momentum_scale)
            .map(|((a, b), s)| relative(*a, *b, *s))
            .collect(),
        energy: relative(now.energy, initial.energy, initial.energy_scale),
    }
}
