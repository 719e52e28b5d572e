//! Material parameter sets and the z-valley pair coupling constants.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::units;

/// Printed constants of the z-valley pair (valleys 5 and 6).
pub const CANONICAL_I56: f64 = -0.217;
pub const CANONICAL_CJ: f64 = 0.414;
pub const CANONICAL_PV: f64 = 1.045;

/// Named material presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// SiO₂/Si/SiO₂
    Sio2Si,
    /// Si₀.₇Ge₀.₃/Si/Si₀.₇Ge₀.₃
    Sige30Si,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Sio2Si => "sio2_si",
            Preset::Sige30Si => "sige30_si",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sio2_si" => Ok(Preset::Sio2Si),
            "sige30_si" => Ok(Preset::Sige30Si),
            other => Err(Error::Config(format!(
                "unknown material preset `{other}` (expected sio2_si or sige30_si)"
            ))),
        }
    }
}

/// Effective masses, band offset and valley band parameters of a well/barrier pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSystem {
    /// Longitudinal mass of the z-valleys in the Si well, units of m₀.
    pub m_z_well: f64,
    /// Barrier mass along z, units of m₀.
    pub m_z_barrier: f64,
    /// Conduction band discontinuity ΔE_c, eV.
    #[serde(rename = "delta_Ec_eV")]
    pub delta_ec_ev: f64,
    /// Si lattice constant, nm.
    pub lattice_nm: f64,
    /// Valley minimum position as a fraction of 2π/a.
    pub k0_fraction: f64,
    /// Band parameter T, Ry·bohr.
    #[serde(default = "default_t")]
    pub t_ry_bohr: f64,
    /// Band parameter ε_G, Ry.
    #[serde(default = "default_eps_g")]
    pub eps_g_ry: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
}

fn default_t() -> f64 {
    1.08
}
fn default_eps_g() -> f64 {
    0.268
}
fn default_alpha() -> f64 {
    0.6086
}
fn default_beta() -> f64 {
    0.3915
}

impl MaterialSystem {
    pub fn preset(preset: Preset) -> Self {
        let delta_ec_ev = match preset {
            Preset::Sio2Si => 3.1,
            Preset::Sige30Si => 0.16,
        };
        MaterialSystem {
            m_z_well: 0.916,
            m_z_barrier: 0.916,
            delta_ec_ev,
            lattice_nm: 0.5431,
            k0_fraction: 0.85,
            t_ry_bohr: default_t(),
            eps_g_ry: default_eps_g(),
            alpha: default_alpha(),
            beta: default_beta(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m_z_well", self.m_z_well),
            ("m_z_barrier", self.m_z_barrier),
            ("lattice_nm", self.lattice_nm),
            ("k0_fraction", self.k0_fraction),
            ("t_ry_bohr", self.t_ry_bohr),
            ("eps_g_ry", self.eps_g_ry),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(name, format!("must be > 0, got {value}")));
            }
        }
        // ΔE_c = 0 is allowed: it is the barrier-free control case.
        if !(self.delta_ec_ev.is_finite() && self.delta_ec_ev >= 0.0) {
            return Err(Error::invalid(
                "delta_Ec_eV",
                format!("must be >= 0, got {}", self.delta_ec_ev),
            ));
        }
        Ok(())
    }

    /// K₀ = k0_fraction · 2π/a, nm⁻¹.
    pub fn k0(&self) -> f64 {
        self.k0_fraction * 2.0 * PI / self.lattice_nm
    }

    /// K₀ in bohr⁻¹.
    pub fn k0_au(&self) -> f64 {
        units().nm_wavevector_to_au(self.k0())
    }
}

/// Mixing angle λ_K from tan(2λ_K) = 2TK/ε_G, with K in bohr⁻¹.
///
/// Odd in K, strictly increasing, and 2λ_K ∈ [0, π/2) for K ≥ 0.
pub fn lambda_k(k_au: f64, material: &MaterialSystem) -> f64 {
    0.5 * (2.0 * material.t_ry_bohr * k_au / material.eps_g_ry).atan()
}

/// ∂λ_K/∂K in bohr.
pub fn dlambda_dk(k_au: f64, material: &MaterialSystem) -> f64 {
    let x = 2.0 * material.t_ry_bohr / material.eps_g_ry;
    0.5 * x / (1.0 + (x * k_au).powi(2))
}

/// K·J₅₆ as a function of cos(2λ): 2K(∂λ/∂K)sin(2λ) = sin²(2λ)·cos(2λ).
pub fn cj_from_cos2lambda(cos2l: f64) -> f64 {
    (1.0 - cos2l * cos2l) * cos2l
}

fn axis_index(v: [f64; 3]) -> Option<usize> {
    let nonzero: Vec<usize> = (0..3).filter(|&i| v[i] != 0.0).collect();
    match nonzero.as_slice() {
        [i] if v[*i].abs() == 1.0 => Some(*i),
        _ => None,
    }
}

/// Intervalley coupling I_ll′ between valleys along `e_l` and `e_lp`.
pub fn coupling_i(e_l: [f64; 3], e_lp: [f64; 3], k_au: f64, material: &MaterialSystem) -> Result<f64> {
    axis_index(e_l).ok_or(Error::NonAxisVector(e_l))?;
    axis_index(e_lp).ok_or(Error::NonAxisVector(e_lp))?;
    let dot: f64 = e_l.iter().zip(&e_lp).map(|(a, b)| a * b).sum();
    let cos2l = (2.0 * lambda_k(k_au, material)).cos();
    Ok(0.5 * (1.0 + dot) - 0.5 * (1.0 - dot) * cos2l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantsMode {
    /// The printed values (−0.217, 0.414, 1.045).
    #[default]
    PaperCanonical,
    /// Recomputed from λ_K at K₀.
    Analytic,
}

impl fmt::Display for ConstantsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantsMode::PaperCanonical => "paper-canonical",
            ConstantsMode::Analytic => "analytic",
        })
    }
}

impl FromStr for ConstantsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-canonical" => Ok(ConstantsMode::PaperCanonical),
            "analytic" => Ok(ConstantsMode::Analytic),
            other => Err(Error::Config(format!(
                "unknown constants mode `{other}` (expected paper-canonical or analytic)"
            ))),
        }
    }
}

/// Coupling constants of the z-valley pair as they enter the splitting integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValleyPairConstants {
    pub mode: ConstantsMode,
    /// I₅₆, dimensionless.
    pub i56: f64,
    /// c_J with J₅₆ = c_J/K₀.
    pub c_j: f64,
    /// Prefactor of V in the splitting integrand.
    pub p_v: f64,
    /// Prefactor of ∂V/∂z, nm.
    pub p_d: f64,
    /// K₀ used, nm⁻¹.
    pub k0: f64,
}

impl ValleyPairConstants {
    /// Canonical constants at an explicit K₀, used by toy problems that have no material.
    pub fn canonical_at(k0: f64) -> Self {
        ValleyPairConstants {
            mode: ConstantsMode::PaperCanonical,
            i56: CANONICAL_I56,
            c_j: CANONICAL_CJ,
            p_v: CANONICAL_PV,
            p_d: CANONICAL_CJ / k0,
            k0,
        }
    }

    /// J₅₆ in nm.
    pub fn j56(&self) -> f64 {
        self.c_j / self.k0
    }

    /// Same K₀ with every prefactor zeroed: the splitting vanishes identically.
    pub fn zeroed(&self) -> Self {
        ValleyPairConstants {
            i56: 0.0,
            c_j: 0.0,
            p_v: 0.0,
            p_d: 0.0,
            ..*self
        }
    }
}

pub fn valley_pair_constants(material: &MaterialSystem, mode: ConstantsMode) -> ValleyPairConstants {
    let k0 = material.k0();
    match mode {
        ConstantsMode::PaperCanonical => ValleyPairConstants::canonical_at(k0),
        ConstantsMode::Analytic => {
            let cos2l = (2.0 * lambda_k(material.k0_au(), material)).cos();
            let i56 = -cos2l;
            let c_j = cj_from_cos2lambda(cos2l);
            // The V prefactor collects −I₅₆ and the 2K₀·J₅₆ piece of the
            // product rule; with the printed pair this gives 0.217 + 0.828 = 1.045.
            ValleyPairConstants {
                mode,
                i56,
                c_j,
                p_v: -i56 + 2.0 * c_j,
                p_d: c_j / k0,
                k0,
            }
        }
    }
}

/// Canonical and analytic constants side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsComparison {
    pub canonical: ValleyPairConstants,
    pub analytic: ValleyPairConstants,
}

impl ConstantsComparison {
    pub fn new(material: &MaterialSystem) -> Self {
        ConstantsComparison {
            canonical: valley_pair_constants(material, ConstantsMode::PaperCanonical),
            analytic: valley_pair_constants(material, ConstantsMode::Analytic),
        }
    }

    pub fn describe(&self) -> String {
        let (c, a) = (&self.canonical, &self.analytic);
        format!(
            "I56: canonical {:.4} vs analytic {:.4} (delta {:+.4})\n\
             c_J: canonical {:.4} vs analytic {:.4} (delta {:+.4})\n\
             p_V: canonical {:.4} vs analytic {:.4} (delta {:+.4})\n\
             p_D: canonical {:.5} nm vs analytic {:.5} nm",
            c.i56,
            a.i56,
            a.i56 - c.i56,
            c.c_j,
            a.c_j,
            a.c_j - c.c_j,
            c.p_v,
            a.p_v,
            a.p_v - c.p_v,
            c.p_d,
            a.p_d
        )
    }
}
