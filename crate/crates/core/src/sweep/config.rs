use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::{ConstantsMode, MaterialSystem, Preset};
use crate::valley::IntegrationDomain;

/// A list of grid values: a scalar, an explicit list, or an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Single(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            Grid::Single(x) => vec![*x],
            Grid::List(v) => v.clone(),
            Grid::Range { start, stop, step } => {
                if !(step.is_finite() && *step > 0.0) {
                    return Err(Error::Config(format!("grid step must be > 0, got {step}")));
                }
                if !(start.is_finite() && stop.is_finite()) || stop < start {
                    return Err(Error::Config(format!("grid range [{start}, {stop}] is empty")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
        };
        if v.is_empty() {
            return Err(Error::Config("grid is empty".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("grid contains a non-finite value".into()));
        }
        Ok(v)
    }

    /// Parses `6`, `4,6,8` or `start:stop:step`.
    pub fn parse(text: &str) -> Result<Self> {
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("`{s}` is not a number")))
        };
        if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!("range `{text}` must be start:stop:step")));
            }
            return Ok(Grid::Range {
                start: num(parts[0])?,
                stop: num(parts[1])?,
                step: num(parts[2])?,
            });
        }
        let values = text.split(',').map(num).collect::<Result<Vec<f64>>>()?;
        Ok(match values.as_slice() {
            [x] => Grid::Single(*x),
            _ => Grid::List(values),
        })
    }
}

/// Material preset plus optional overrides of the schema fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialConfig {
    #[serde(default = "default_preset")]
    pub preset: Preset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_z_well: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_z_barrier: Option<f64>,
    #[serde(default, rename = "delta_Ec_eV", skip_serializing_if = "Option::is_none")]
    pub delta_ec_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0_fraction: Option<f64>,
}

fn default_preset() -> Preset {
    Preset::Sio2Si
}

impl MaterialConfig {
    pub fn preset(preset: Preset) -> Self {
        MaterialConfig {
            preset,
            m_z_well: None,
            m_z_barrier: None,
            delta_ec_ev: None,
            lattice_nm: None,
            k0_fraction: None,
        }
    }

    pub fn resolve(&self) -> MaterialSystem {
        let mut m = MaterialSystem::preset(self.preset);
        if let Some(v) = self.m_z_well {
            m.m_z_well = v;
        }
        if let Some(v) = self.m_z_barrier {
            m.m_z_barrier = v;
        }
        if let Some(v) = self.delta_ec_ev {
            m.delta_ec_ev = v;
        }
        if let Some(v) = self.lattice_nm {
            m.lattice_nm = v;
        }
        if let Some(v) = self.k0_fraction {
            m.k0_fraction = v;
        }
        m
    }

    /// Same material with every field written out.
    pub fn explicit(&self) -> Self {
        let m = self.resolve();
        MaterialConfig {
            preset: self.preset,
            m_z_well: Some(m.m_z_well),
            m_z_barrier: Some(m.m_z_barrier),
            delta_ec_ev: Some(m.delta_ec_ev),
            lattice_nm: Some(m.lattice_nm),
            k0_fraction: Some(m.k0_fraction),
        }
    }
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self::preset(default_preset())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    #[serde(default = "default_well")]
    pub well_nm: Grid,
    #[serde(default = "default_barrier")]
    pub barrier_nm: f64,
}

fn default_well() -> Grid {
    Grid::Single(8.0)
}
fn default_barrier() -> f64 {
    6.0
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            well_nm: default_well(),
            barrier_nm: default_barrier(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub material: MaterialConfig,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default = "default_field", rename = "field_V_per_m")]
    pub field_v_per_m: Grid,
    #[serde(default = "default_subbands")]
    pub subbands: usize,
    #[serde(default = "default_mesh_h")]
    pub mesh_h_nm: f64,
    #[serde(default)]
    pub constants_mode: ConstantsMode,
    #[serde(default)]
    pub integration_domain: IntegrationDomain,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_field() -> Grid {
    Grid::Single(0.0)
}
fn default_subbands() -> usize {
    3
}
fn default_mesh_h() -> f64 {
    0.05
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            material: MaterialConfig::default(),
            geometry: GeometryConfig::default(),
            field_v_per_m: default_field(),
            subbands: default_subbands(),
            mesh_h_nm: default_mesh_h(),
            constants_mode: ConstantsMode::default(),
            integration_domain: IntegrationDomain::default(),
            output: OutputConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.well_nm.values()?;
        self.field_v_per_m.values()?;
        if self.subbands < 1 {
            return Err(Error::Config("subbands must be >= 1".into()));
        }
        if !(self.mesh_h_nm.is_finite() && self.mesh_h_nm > 0.0) {
            return Err(Error::Config(format!("mesh_h_nm must be > 0, got {}", self.mesh_h_nm)));
        }
        if !(self.geometry.barrier_nm.is_finite() && self.geometry.barrier_nm > 0.0) {
            return Err(Error::Config(format!(
                "barrier_nm must be > 0, got {}",
                self.geometry.barrier_nm
            )));
        }
        self.material.resolve().validate()
    }

    pub fn material_system(&self) -> MaterialSystem {
        self.material.resolve()
    }

    pub fn widths(&self) -> Result<Vec<f64>> {
        self.geometry.well_nm.values()
    }

    pub fn fields(&self) -> Result<Vec<f64>> {
        self.field_v_per_m.values()
    }

    /// The config with defaults merged and the material written out in full.
    pub fn effective(&self) -> Self {
        SweepConfig {
            material: self.material.explicit(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(Grid::Single(6.0).values().unwrap(), vec![6.0]);
        let r = Grid::Range { start: 2.0, stop: 10.0, step: 0.05 }.values().unwrap();
        assert_eq!(r.len(), 161);
        assert!((r[160] - 10.0).abs() < 1e-12);
        assert!(Grid::Range { start: 0.0, stop: 1.0, step: 0.0 }.values().is_err());
        assert!(Grid::List(vec![]).values().is_err());
        assert_eq!(Grid::parse("6").unwrap(), Grid::Single(6.0));
        assert_eq!(Grid::parse("4,6").unwrap(), Grid::List(vec![4.0, 6.0]));
        assert_eq!(Grid::parse("1:2:0.5").unwrap().values().unwrap(), vec![1.0, 1.5, 2.0]);
        assert!(Grid::parse("1:2").is_err());
        assert!(Grid::parse("abc").is_err());
    }

    #[test]
    fn parses_schema_fragments() {
        let cfg = SweepConfig::from_json(
            r#"{
                "material": {"preset": "sige30_si", "m_z_barrier": 0.5, "delta_Ec_eV": 0.2},
                "geometry": {"well_nm": {"start": 3, "stop": 4, "step": 0.5}, "barrier_nm": 6},
                "field_V_per_m": [0, 1e7],
                "constants_mode": "analytic",
                "integration_domain": "well_only"
            }"#,
        )
        .unwrap();
        let m = cfg.material_system();
        assert_eq!((m.m_z_barrier, m.delta_ec_ev, m.m_z_well), (0.5, 0.2, 0.916));
        assert_eq!(cfg.widths().unwrap(), vec![3.0, 3.5, 4.0]);
        assert_eq!(cfg.fields().unwrap(), vec![0.0, 1e7]);
        assert_eq!(cfg.constants_mode, ConstantsMode::Analytic);
        assert_eq!(cfg.integration_domain, IntegrationDomain::WellOnly);
        assert_eq!(cfg.subbands, 3);
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(SweepConfig::from_json(r#"{"subbands": 0}"#).is_err());
        assert!(SweepConfig::from_json(r#"{"mesh_h_nm": -1}"#).is_err());
        assert!(SweepConfig::from_json(r#"{"field_V_per_m": []}"#).is_err());
        assert!(SweepConfig::from_json(r#"{"material": {"preset": "gaas"}}"#).is_err());
        assert!(SweepConfig::from_json(r#"{"unknown_key": 1}"#).is_err());
        assert!(SweepConfig::from_json(r#"{"material": {"m_z_well": -1}}"#).is_err());
    }

    #[test]
    fn effective_config_round_trips() {
        let cfg = SweepConfig::from_json(r#"{"material": {"preset": "sige30_si"}}"#).unwrap();
        let eff = cfg.effective();
        let back = SweepConfig::from_json(&eff.to_json()).unwrap();
        assert_eq!(back, eff);
        assert_eq!(back.material_system(), cfg.material_system());
    }
}
