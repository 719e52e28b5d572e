//! Total potential V(z) = V_c(z) + eF·z as a piecewise-constant confinement
//! plus a global linear term, with the interface jumps kept explicitly so the
//! distributional derivative never has to be taken numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::MaterialSystem;
use crate::units::units;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Well,
    Barrier,
}

/// Symmetric barrier/well/barrier layout centred on z = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellGeometry {
    #[serde(rename = "well_nm")]
    pub well: f64,
    #[serde(rename = "barrier_nm")]
    pub barrier: f64,
}

impl WellGeometry {
    pub fn new(well: f64, barrier: f64) -> Result<Self> {
        let g = WellGeometry { well, barrier };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.well.is_finite() && self.well > 0.0) {
            return Err(Error::invalid("well_nm", format!("must be > 0, got {}", self.well)));
        }
        if !(self.barrier.is_finite() && self.barrier > 0.0) {
            return Err(Error::invalid(
                "barrier_nm",
                format!("must be > 0, got {}", self.barrier),
            ));
        }
        Ok(())
    }

    pub fn z_left(&self) -> f64 {
        -0.5 * self.well
    }

    pub fn z_right(&self) -> f64 {
        0.5 * self.well
    }

    pub fn domain(&self) -> (f64, f64) {
        let half = 0.5 * self.well + self.barrier;
        (-half, half)
    }

    /// Domain edges and interfaces in ascending order.
    pub fn breakpoints(&self) -> [f64; 4] {
        let (lo, hi) = self.domain();
        [lo, self.z_left(), self.z_right(), hi]
    }
}

/// A signed step V_c(z⁺) − V_c(z⁻) at an interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jump {
    pub z: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    /// Constant confinement value, eV.
    pub value: f64,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialProfile {
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
    slope: f64,
    jumps: Vec<Jump>,
}

/// The distributional derivative of a profile: a constant plus point masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeParts<'a> {
    /// eF, eV/nm.
    pub slope: f64,
    pub jumps: &'a [Jump],
}

impl PotentialProfile {
    /// `breakpoints` has one more entry than `segments` and must be strictly increasing.
    pub fn new(breakpoints: Vec<f64>, segments: Vec<Segment>, slope: f64) -> Result<Self> {
        if segments.is_empty() || breakpoints.len() != segments.len() + 1 {
            return Err(Error::invalid(
                "breakpoints",
                format!(
                    "{} breakpoints for {} segments",
                    breakpoints.len(),
                    segments.len()
                ),
            ));
        }
        if breakpoints.iter().any(|z| !z.is_finite()) || breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("breakpoints", "must be finite and strictly increasing"));
        }
        if !slope.is_finite() || segments.iter().any(|s| !s.value.is_finite()) {
            return Err(Error::invalid("profile", "non-finite potential value"));
        }
        let jumps = segments
            .windows(2)
            .zip(&breakpoints[1..])
            .filter_map(|(pair, &z)| {
                let delta = pair[1].value - pair[0].value;
                (delta != 0.0).then_some(Jump { z, delta })
            })
            .collect();
        Ok(PotentialProfile {
            breakpoints,
            segments,
            slope,
            jumps,
        })
    }

    /// Single well-region segment of constant value on [z_min, z_max].
    pub fn flat(z_min: f64, z_max: f64, value: f64, slope: f64) -> Result<Self> {
        Self::new(
            vec![z_min, z_max],
            vec![Segment {
                value,
                region: Region::Well,
            }],
            slope,
        )
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// eF in eV/nm.
    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    /// Index of the segment containing z, taking the right limit at breakpoints.
    pub fn segment_index(&self, z: f64) -> Result<usize> {
        let (min, max) = self.domain();
        if !(z >= min && z <= max) {
            return Err(Error::OutOfDomain { z, min, max });
        }
        let idx = self.breakpoints.partition_point(|&b| b <= z);
        Ok(idx.saturating_sub(1).min(self.segments.len() - 1))
    }

    /// V(z) in eV; at a breakpoint the right limit is returned.
    pub fn evaluate(&self, z: f64) -> Result<f64> {
        let i = self.segment_index(z)?;
        Ok(self.segments[i].value + self.slope * z)
    }

    pub fn derivative_parts(&self) -> DerivativeParts<'_> {
        DerivativeParts {
            slope: self.slope,
            jumps: &self.jumps,
        }
    }

    pub fn min_value(&self) -> f64 {
        let (lo, hi) = self.domain();
        self.segments
            .iter()
            .map(|s| s.value)
            .fold(f64::INFINITY, f64::min)
            + (self.slope * lo).min(self.slope * hi)
    }

    pub fn max_value(&self) -> f64 {
        let (lo, hi) = self.domain();
        self.segments
            .iter()
            .map(|s| s.value)
            .fold(f64::NEG_INFINITY, f64::max)
            + (self.slope * lo).max(self.slope * hi)
    }

    /// Adds a constant to the whole profile.
    pub fn shifted(&self, offset: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                value: s.value + offset,
                ..*s
            })
            .collect();
        Self::new(self.breakpoints.clone(), segments, self.slope).expect("shift keeps profile valid")
    }

    /// Mirror image V'(z) = V(−z).
    pub fn mirrored(&self) -> Self {
        let breakpoints = self.breakpoints.iter().rev().map(|z| -z).collect();
        let segments = self.segments.iter().rev().copied().collect();
        Self::new(breakpoints, segments, -self.slope).expect("mirror keeps profile valid")
    }

    /// The same physical system moved rigidly by `dz`: V'(z) = V(z − dz).
    pub fn translated(&self, dz: f64) -> Self {
        let breakpoints = self.breakpoints.iter().map(|z| z + dz).collect();
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                value: s.value - self.slope * dz,
                ..*s
            })
            .collect();
        Self::new(breakpoints, segments, self.slope).expect("translation keeps profile valid")
    }
}

/// Confinement ΔE_c in the barriers, 0 in the well, plus the field slope.
///
/// A positive field tilts the potential upward along +z and pushes the electron
/// toward the left interface.
pub fn build_profile(
    geometry: &WellGeometry,
    material: &MaterialSystem,
    field_v_per_m: f64,
) -> Result<PotentialProfile> {
    geometry.validate()?;
    if !(field_v_per_m.is_finite() && field_v_per_m >= 0.0) {
        return Err(Error::invalid(
            "field_V_per_m",
            format!("must be >= 0, got {field_v_per_m}"),
        ));
    }
    let barrier = Segment {
        value: material.delta_ec_ev,
        region: Region::Barrier,
    };
    let well = Segment {
        value: 0.0,
        region: Region::Well,
    };
    PotentialProfile::new(
        geometry.breakpoints().to_vec(),
        vec![barrier, well, barrier],
        units().field_to_ev_per_nm(field_v_per_m),
    )
}
