//! Linear finite elements for the z-valley envelope equation at B = 0 and
//! k_x = k_y = 0: −d/dz (ħ²/2m_z(z)) d/dz Ψ + V(z) Ψ = E Ψ with Ψ = 0 at the
//! outer barrier edges.

mod assembly;
mod convergence;
mod eigen;
mod mesh;
mod solution;

pub use assembly::{assemble, FemMatrices, SymTridiagonal};
pub use convergence::{convergence_study, ConvergenceRow, ConvergenceStudy};
pub use eigen::{check_positive_definite, sturm_count};
pub use mesh::{build_mesh, Element, Mesh1D};
pub use solution::{solve_eigen, EigenSolution};

use std::f64::consts::PI;

use crate::error::Result;
use crate::material::MaterialSystem;
use crate::potential::{build_profile, PotentialProfile, WellGeometry};
use crate::units::units;

/// A potential profile together with the material that sets the masses.
#[derive(Debug, Clone)]
pub struct Problem {
    pub profile: PotentialProfile,
    pub material: MaterialSystem,
}

impl Problem {
    pub fn quantum_well(geometry: &WellGeometry, material: &MaterialSystem, field_v_per_m: f64) -> Result<Self> {
        material.validate()?;
        Ok(Problem {
            profile: build_profile(geometry, material, field_v_per_m)?,
            material: material.clone(),
        })
    }

    /// Dirichlet walls at ±width/2 with V = 0 in between.
    pub fn hard_wall(width: f64, material: &MaterialSystem) -> Result<Self> {
        Ok(Problem {
            profile: PotentialProfile::flat(-0.5 * width, 0.5 * width, 0.0, 0.0)?,
            material: material.clone(),
        })
    }

    pub fn mesh(&self, target_h: f64) -> Result<Mesh1D> {
        Mesh1D::for_profile(&self.profile, target_h)
    }

    pub fn assemble(&self, target_h: f64) -> Result<FemMatrices> {
        assemble(&self.mesh(target_h)?, &self.profile, &self.material)
    }

    pub fn solve(&self, target_h: f64, n_states: usize) -> Result<EigenSolution> {
        solve_eigen(&self.assemble(target_h)?, n_states)
    }
}

/// ħ²π²n²/(2 m_z W²) in eV for an infinitely deep well of width W (nm).
pub fn hard_wall_level(width: f64, mass: f64, n: usize) -> f64 {
    let k = PI * n as f64 / width;
    units().kinetic_prefactor / mass * k * k
}
