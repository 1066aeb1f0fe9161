use super::fields::FieldSet;
use super::grid::Grid;
use crate::background::{Background, Point};
use crate::error::{Error, Result};
use crate::symsys::{self, Formulation};
use crate::thermo::GasParameters;

/// Smooth compactly supported profile with `psi(0) = 1` and support `|r| < 1`.
pub fn bump(r: f64) -> f64 {
    if r.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Additional bump added to `pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpPerturbation {
    pub center: Point,
    pub radius: f64,
    pub amplitude: f64,
}

impl BumpPerturbation {
    pub fn at(&self, x: Point, dim: usize) -> f64 {
        self.amplitude * bump(distance(x, self.center, dim) / self.radius)
    }
}

/// Initial perturbation: `pi = base + eps psi(|x - c|/R)`, `s = eps_s psi(|x - c|/R)`, `w = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub amplitude: f64,
    pub entropy_amplitude: f64,
    pub radius: f64,
    pub center: Point,
    /// Constant level of `pi` under the bump; zero gives compactly supported data.
    pub base_pi: f64,
    pub perturbations: Vec<BumpPerturbation>,
}

impl InitialData {
    pub fn is_vacuum(&self) -> bool {
        self.base_pi == 0.0
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("support radius {} must be positive", self.radius)));
        }
        if !(self.amplitude >= 0.0 && self.base_pi >= 0.0) {
            return Err(Error::InvalidArgument("pi must be non-negative initially".into()));
        }
        Ok(())
    }
}

pub fn distance(x: Point, y: Point, dim: usize) -> f64 {
    (0..dim).map(|i| (x[i] - y[i]).powi(2)).sum::<f64>().sqrt()
}

/// Samples the initial data on `grid`. For compactly supported data the
/// box must contain the support radius plus the distance `M T_end` a signal
/// can travel, measured from the centre to the nearest usable edge
/// (`buffer_cells` excluded).
#[allow(clippy::too_many_arguments)]
pub fn init_data(
    data: &InitialData,
    grid: Grid,
    gas: &GasParameters,
    formulation: Formulation,
    background: &dyn Background,
    t_end: f64,
    buffer_cells: usize,
) -> Result<FieldSet> {
    data.validate()?;
    let d = grid.dim();
    let general = !formulation.is_isentropic();
    let mut fields = FieldSet::zeros(grid, general);
    for idx in 0..grid.len() {
        let x = grid.point(idx);
        let profile = bump(distance(x, data.center, d) / data.radius);
        let extra: f64 = data.perturbations.iter().map(|p| p.at(x, d)).sum();
        fields.components[0][idx] = data.base_pi + data.amplitude * profile + extra;
        if general {
            fields.components[d + 1][idx] = data.entropy_amplitude * profile;
        }
    }
    if data.is_vacuum() {
        let mut speed: f64 = 0.0;
        for idx in 0..grid.len() {
            let x = grid.point(idx);
            if distance(x, data.center, d) > data.radius {
                continue;
            }
            let bg = background.sample(0.0, x)?;
            let u = (0..d).map(|j| bg.velocity[j].powi(2)).sum::<f64>().sqrt();
            speed = speed.max(symsys::local_speed_bound(
                fields.components[0][idx],
                u,
                fields.entropy_at(idx),
                gas,
                formulation,
            ));
        }
        let h = grid.spacing();
        let half_width = (0..d)
            .map(|i| {
                let lo = data.center[i] - grid.lower();
                let hi = grid.lower() + grid.length() - data.center[i];
                lo.min(hi) - buffer_cells as f64 * h
            })
            .fold(f64::INFINITY, f64::min);
        let reach = data.radius + speed * t_end;
        if reach > half_width {
            return Err(Error::DomainTooSmall { radius: data.radius, reach, half_width });
        }
    }
    Ok(fields)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_profile() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(-1.5), 0.0);
        assert!(bump(0.5) > 0.0 && bump(0.5) < 1.0);
        assert_eq!(bump(0.3), bump(-0.3));
    }
}
