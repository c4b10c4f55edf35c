use crate::elastic::{matched_velocity, LameParams};
use crate::error::{Error, Result};
use crate::spectral::{
    apply_scalar_multiplier, forward_transform, inverse_transform, Field, GridSpec,
};
use num_complex::Complex64;
use serde::Serialize;

/// Radial profile of the probe data, before dilation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DataKind {
    /// `exp(−|x|²/2w²)`.
    Gaussian { width: f64 },
    /// `exp(−|x|²/2w²) e^{i 2^k x₁}`.
    ModulatedGaussian { width: f64, level: i32 },
    /// `(x₁/w) exp(−|x|²/2w²)`; odd, so it vanishes at the origin.
    Dipole { width: f64 },
    /// The base profile dilated as `f(λx)` for each `λ`.
    RescaledSequence {
        base: Box<DataKind>,
        lambdas: Vec<f64>,
    },
}

/// How a scalar profile `ψ` becomes the displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldShape {
    /// `ψ` itself, one component.
    Scalar,
    /// `ψ e_axis`.
    Directed(usize),
    /// `(−∂₂ψ, ∂₁ψ, 0)`, divergence free.
    Solenoidal,
    /// `∇ψ`, curl free.
    Potential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VelocityPolicy {
    Zero,
    /// The velocity making every polarization a forward half-wave.
    MatchedVelocity,
}

/// How the solution is produced from the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Propagation {
    Elastic(LameParams),
    /// `e^{itc|D|} f`, componentwise.
    ScalarHalfWave {
        speed: f64,
    },
}

impl Propagation {
    pub fn max_speed(&self) -> f64 {
        match self {
            Propagation::Elastic(p) => p.max_speed(),
            Propagation::ScalarHalfWave { speed } => *speed,
        }
    }
}

/// A parametrized set of initial data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataFamily {
    pub kind: DataKind,
    pub shape: FieldShape,
    pub g_policy: VelocityPolicy,
    /// Translation applied to every member before dilation.
    pub center: [f64; 3],
}

/// One concrete initial state on its own grid.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub id: String,
    pub lambda: f64,
    pub grid: GridSpec,
    pub f: Field,
    pub g: Field,
    /// Radius outside which the data is below 1e-8 of its peak.
    pub support_radius: f64,
}

/// Amplitude threshold defining the effective support of the profiles.
const SUPPORT_DECAY: f64 = 1e-8;

impl DataKind {
    fn width(&self) -> f64 {
        match self {
            DataKind::Gaussian { width }
            | DataKind::ModulatedGaussian { width, .. }
            | DataKind::Dipole { width } => *width,
            DataKind::RescaledSequence { base, .. } => base.width(),
        }
    }

    fn label(&self) -> String {
        match self {
            DataKind::Gaussian { width } => format!("gaussian(w={width})"),
            DataKind::ModulatedGaussian { width, level } => {
                format!("modulated(w={width},k={level})")
            }
            DataKind::Dipole { width } => format!("dipole(w={width})"),
            DataKind::RescaledSequence { base, .. } => base.label(),
        }
    }

    fn profile(&self, x: &[f64; 3]) -> Complex64 {
        let r2 = |w: f64| (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w * w);
        match self {
            DataKind::Gaussian { width } => Complex64::new((-r2(*width)).exp(), 0.0),
            DataKind::ModulatedGaussian { width, level } => {
                Complex64::from_polar((-r2(*width)).exp(), 2f64.powi(*level) * x[0])
            }
            DataKind::Dipole { width } => Complex64::new(x[0] / width * (-r2(*width)).exp(), 0.0),
            DataKind::RescaledSequence { base, .. } => base.profile(x),
        }
    }
}

impl DataFamily {
    pub fn new(kind: DataKind, shape: FieldShape, g_policy: VelocityPolicy) -> Self {
        DataFamily {
            kind,
            shape,
            g_policy,
            center: [0.0; 3],
        }
    }

    pub fn centered_at(mut self, center: [f64; 3]) -> Self {
        self.center = center;
        self
    }

    /// Dilations of the family; `[1]` unless it is a rescaled sequence.
    pub fn lambdas(&self) -> Vec<f64> {
        match &self.kind {
            DataKind::RescaledSequence { lambdas, .. } => lambdas.clone(),
            _ => vec![1.0],
        }
    }

    /// Effective support radius of the undilated member.
    pub fn support_radius(&self) -> f64 {
        let c = &self.center;
        let shift = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        shift + self.kind.width() * (-2.0 * SUPPORT_DECAY.ln()).sqrt()
    }

    /// The member dilated by `λ`, sampled on `base.rescaled(λ)`; the
    /// velocity follows the policy for the given propagation.
    pub fn member(&self, base: &GridSpec, lambda: f64, prop: &Propagation) -> Result<FamilyMember> {
        let grid = base.rescaled(lambda)?;
        let c = self.center;
        let psi = Field::from_fn(&grid, 1, |x| {
            let y = [
                lambda * x[0] - c[0],
                lambda * x[1] - c[1],
                lambda * x[2] - c[2],
            ];
            [
                self.kind.profile(&y),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ]
        });
        let f = shape_field(&psi, self.shape)?;
        let g = match (self.g_policy, prop) {
            (VelocityPolicy::Zero, _) => Field::zeros(&grid, f.components()),
            (VelocityPolicy::MatchedVelocity, Propagation::Elastic(params)) => {
                matched_velocity(&f, params)?
            }
            (VelocityPolicy::MatchedVelocity, Propagation::ScalarHalfWave { speed }) => {
                let speed = *speed;
                inverse_transform(&apply_scalar_multiplier(&forward_transform(&f), |xi| {
                    Complex64::new(
                        0.0,
                        speed * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt(),
                    )
                }))
            }
        };
        Ok(FamilyMember {
            id: format!("{}@lambda={lambda}", self.kind.label()),
            lambda,
            grid,
            f,
            g,
            support_radius: self.support_radius() / lambda,
        })
    }

    /// Every member of the family on its nested grid.
    pub fn members(&self, base: &GridSpec, prop: &Propagation) -> Result<Vec<FamilyMember>> {
        self.lambdas()
            .into_iter()
            .map(|l| self.member(base, l, prop))
            .collect()
    }
}

impl FamilyMember {
    /// `L − (T + r c)` for this member; positive means no wrap-around.
    pub fn margin(&self, max_speed: f64) -> f64 {
        self.grid.wraparound_margin(self.support_radius, max_speed)
    }
}

fn shape_field(psi: &Field, shape: FieldShape) -> Result<Field> {
    let grid = *psi.grid();
    let dim = grid.dim();
    let derivative = |axis: usize| -> Field {
        inverse_transform(&apply_scalar_multiplier(&forward_transform(psi), |xi| {
            Complex64::new(0.0, xi[axis])
        }))
    };
    match shape {
        FieldShape::Scalar => Ok(psi.clone()),
        FieldShape::Directed(axis) => {
            if axis >= dim {
                return Err(Error::Config(format!(
                    "direction axis {axis} out of range for dimension {dim}"
                )));
            }
            let parts: Vec<Field> = (0..dim)
                .map(|c| {
                    if c == axis {
                        psi.clone()
                    } else {
                        Field::zeros(&grid, 1)
                    }
                })
                .collect();
            Field::stack(&parts)
        }
        FieldShape::Solenoidal => {
            if dim < 2 {
                return Err(Error::Config(
                    "solenoidal data needs dimension at least 2".into(),
                ));
            }
            let mut parts = vec![
                derivative(1).scaled(Complex64::new(-1.0, 0.0)),
                derivative(0),
            ];
            if dim == 3 {
                parts.push(Field::zeros(&grid, 1));
            }
            Field::stack(&parts)
        }
        FieldShape::Potential => Field::stack(&(0..dim).map(derivative).collect::<Vec<_>>()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::spectral_divergence;

    #[test]
    fn dilated_members_share_node_values() {
        let base = GridSpec::new(2, 32, 8.0, 5, 1.0).unwrap();
        let fam = DataFamily::new(
            DataKind::RescaledSequence {
                base: Box::new(DataKind::Gaussian { width: 1.0 }),
                lambdas: vec![0.5, 2.0],
            },
            FieldShape::Directed(0),
            VelocityPolicy::Zero,
        );
        let prop = Propagation::ScalarHalfWave { speed: 1.0 };
        let ms = fam.members(&base, &prop).unwrap();
        let one = fam.member(&base, 1.0, &prop).unwrap();
        for m in &ms {
            assert_eq!(m.f.values(), one.f.values());
            assert!((m.support_radius * m.lambda - one.support_radius).abs() < 1e-12);
        }
        assert!((ms[0].grid.half_width() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn shapes() {
        let grid = GridSpec::new(2, 32, 8.0, 5, 1.0).unwrap();
        let prop = Propagation::Elastic(LameParams::new(1.0, 1.0).unwrap());
        let sol = DataFamily::new(
            DataKind::Gaussian { width: 1.0 },
            FieldShape::Solenoidal,
            VelocityPolicy::MatchedVelocity,
        )
        .member(&grid, 1.0, &prop)
        .unwrap();
        assert!(spectral_divergence(&sol.f).unwrap().sup_norm() < 1e-12 * sol.f.sup_norm());
        let dip = DataFamily::new(
            DataKind::Dipole { width: 1.0 },
            FieldShape::Directed(0),
            VelocityPolicy::Zero,
        )
        .member(&grid, 1.0, &prop)
        .unwrap();
        assert_eq!(dip.f.norm_sqr_at(grid.origin_index()), 0.0);
        assert!(DataFamily::new(
            DataKind::Gaussian { width: 1.0 },
            FieldShape::Directed(2),
            VelocityPolicy::Zero
        )
        .member(&grid, 1.0, &prop)
        .is_err());
    }
}
