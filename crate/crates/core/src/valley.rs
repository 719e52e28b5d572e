//! Intervalley splitting of each subband.
//!
//! Δ_n = 2·|∫ e^{−2iK₀z} |Ψ_n|² (p_V·V + p_D·∂V/∂z) dz| with ∂V/∂z = eF plus
//! a signed delta at every interface. The smooth part is integrated element
//! by element in closed form; the delta part samples |Ψ_n|² at the interface
//! nodes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::EigenSolution;
use crate::material::ValleyPairConstants;
use crate::oscillatory::integrate_exp_cubic;
use crate::potential::{Jump, PotentialProfile, Region};

/// Where the smooth part of the splitting integral is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationDomain {
    #[default]
    Full,
    /// Well elements only; the interface deltas are unaffected.
    WellOnly,
}

/// Smooth contributions of the splitting integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothOverlap {
    /// p_V ∫ e^{−2iK₀z} |Ψ|² V dz, eV.
    pub potential: Complex64,
    /// p_D·eF ∫ e^{−2iK₀z} |Ψ|² dz, eV.
    pub field: Complex64,
}

impl SmoothOverlap {
    pub fn total(&self) -> Complex64 {
        self.potential + self.field
    }
}

fn check_k0(k0: f64) -> Result<()> {
    if k0.is_finite() && k0 > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("K0", format!("must be > 0, got {k0}")))
    }
}

pub fn oscillatory_overlap(
    solution: &EigenSolution,
    n: usize,
    profile: &PotentialProfile,
    constants: &ValleyPairConstants,
    domain: IntegrationDomain,
) -> Result<SmoothOverlap> {
    check_k0(constants.k0)?;
    let c = solution.coefficients(n)?;
    let mesh = solution.mesh();
    mesh.check_profile(profile)?;
    let a = Complex64::new(0.0, -2.0 * constants.k0);
    let s = profile.slope();
    let nodes = mesh.nodes();
    let mut potential = Complex64::new(0.0, 0.0);
    let mut density = Complex64::new(0.0, 0.0);
    for (e, el) in mesh.elements().iter().enumerate() {
        if domain == IntegrationDomain::WellOnly && el.region != Region::Well {
            continue;
        }
        let (z0, h) = (nodes[e], el.length);
        let d = (c[e + 1] - c[e]) / h;
        // |Ψ|² = q0 + q1 t + q2 t², t = z − z0
        let q = [c[e] * c[e], 2.0 * c[e] * d, d * d];
        let v0 = profile.segments()[el.segment].value + s * z0;
        let pv = [q[0] * v0, q[0] * s + q[1] * v0, q[1] * s + q[2] * v0, q[2] * s];
        potential += integrate_exp_cubic(a, z0, h, pv);
        density += integrate_exp_cubic(a, z0, h, [q[0], q[1], q[2], 0.0]);
    }
    Ok(SmoothOverlap {
        potential: potential * constants.p_v,
        field: density * (constants.p_d * s),
    })
}

/// Σ_i p_D·ΔV_i·e^{−2iK₀z_i}·|Ψ_n(z_i)|².
pub fn interface_term(
    solution: &EigenSolution,
    n: usize,
    jumps: &[Jump],
    constants: &ValleyPairConstants,
) -> Result<Complex64> {
    check_k0(constants.k0)?;
    let c = solution.coefficients(n)?;
    let mesh = solution.mesh();
    let mut sum = Complex64::new(0.0, 0.0);
    for jump in jumps {
        let node = mesh.node_index(jump.z).ok_or(Error::InterfaceOffNode(jump.z))?;
        let phase = Complex64::from_polar(1.0, -2.0 * constants.k0 * mesh.nodes()[node]);
        sum += phase * (constants.p_d * jump.delta * c[node] * c[node]);
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingResult {
    pub n: usize,
    /// Confinement-potential term (includes the eFz part of V), eV.
    pub c_v: Complex64,
    /// Smooth-derivative field term, eV.
    pub c_f: Complex64,
    /// Interface delta term, eV.
    pub c_delta: Complex64,
    /// 2·|C_V + C_F + C_δ|, eV.
    pub delta: f64,
    pub constants: ValleyPairConstants,
}

impl SplittingResult {
    pub fn total(&self) -> Complex64 {
        self.c_v + self.c_f + self.c_delta
    }

    /// 2(|C_V| + |C_F| + |C_δ|).
    pub fn triangle_bound(&self) -> f64 {
        2.0 * (self.c_v.norm() + self.c_f.norm() + self.c_delta.norm())
    }
}

pub fn valley_splitting(
    solution: &EigenSolution,
    n: usize,
    profile: &PotentialProfile,
    constants: &ValleyPairConstants,
    domain: IntegrationDomain,
) -> Result<SplittingResult> {
    let smooth = oscillatory_overlap(solution, n, profile, constants, domain)?;
    let c_delta = interface_term(solution, n, profile.jumps(), constants)?;
    let total = smooth.total() + c_delta;
    Ok(SplittingResult {
        n,
        c_v: smooth.potential,
        c_f: smooth.field,
        c_delta,
        delta: 2.0 * total.norm(),
        constants: *constants,
    })
}

/// The valley-degenerate pair of subband n after the 2×2 coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoupledLevels {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Diagonalises [[E, Δ/2], [Δ/2, E]]; with `off_diagonal` false the pair stays degenerate.
pub fn coupled_levels(energy: f64, result: &SplittingResult, off_diagonal: bool) -> CoupledLevels {
    let half = if off_diagonal { 0.5 * result.delta } else { 0.0 };
    CoupledLevels {
        n: result.n,
        lower: energy - half,
        upper: energy + half,
    }
}

/// Inputs of the empirical bulk inversion-layer splitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BulkInput {
    /// n_s in units of 10¹² cm⁻².
    SurfaceDensity(f64),
    /// F in units of 10⁷ V/m.
    Field(f64),
}

/// Δ in meV: 1.14·n_s or 0.718·F.
pub fn bulk_inversion_estimate(input: BulkInput) -> f64 {
    match input {
        BulkInput::SurfaceDensity(ns) => 1.14 * ns,
        BulkInput::Field(f) => 0.718 * f,
    }
}

/// Convenience: bulk estimate for a field given in V/m.
pub fn bulk_estimate_for_field(field_v_per_m: f64) -> f64 {
    bulk_inversion_estimate(BulkInput::Field(field_v_per_m / 1e7))
}
