use std::fmt;
use std::str::FromStr;

use super::config::{GeometryConfig, Grid, MaterialConfig, SweepConfig};
use crate::error::{Error, Result};
use crate::material::Preset;

/// Which grid runs in the outer loop of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Width,
    Field,
}

/// Reconstructed figure presets; the grids are chosen here, not taken from data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// SiGe well, ground-state splitting against width at zero field.
    Fig1,
    /// SiO₂ well at 10⁷ V/m: levels against width, without and with coupling.
    Fig2,
    /// 6 nm SiO₂ well: levels against field.
    Fig3,
    /// SiO₂ well: per-subband splitting against width at several fields.
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    pub fn axis(self) -> SweepAxis {
        match self {
            Figure::Fig3 => SweepAxis::Field,
            _ => SweepAxis::Width,
        }
    }

    pub fn config(self) -> SweepConfig {
        let width_range = |start: f64, stop: f64| Grid::Range { start, stop, step: 0.05 };
        let (preset, well, field, subbands) = match self {
            Figure::Fig1 => (Preset::Sige30Si, width_range(2.0, 10.0), Grid::Single(0.0), 1),
            Figure::Fig2 => (Preset::Sio2Si, width_range(2.0, 10.0), Grid::Single(1e7), 3),
            Figure::Fig3 => (
                Preset::Sio2Si,
                Grid::Single(6.0),
                Grid::Range { start: 0.0, stop: 1.5e8, step: 2.5e6 },
                3,
            ),
            Figure::Fig4 => (
                Preset::Sio2Si,
                width_range(4.0, 12.0),
                Grid::List(vec![2.15e7, 5e7, 1e8, 1.29e8, 1.5e8]),
                3,
            ),
        };
        SweepConfig {
            material: MaterialConfig::preset(preset),
            geometry: GeometryConfig { well_nm: well, barrier_nm: 6.0 },
            field_v_per_m: field,
            subbands,
            ..SweepConfig::default()
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|fig| fig.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure `{s}` (expected fig1..fig4)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for fig in Figure::ALL {
            let cfg = fig.config();
            cfg.validate().unwrap();
            assert_eq!(fig.name().parse::<Figure>().unwrap(), fig);
        }
        assert_eq!(Figure::Fig1.config().widths().unwrap().len(), 161);
        assert_eq!(Figure::Fig3.config().fields().unwrap().len(), 61);
        assert!("fig5".parse::<Figure>().is_err());
    }
}
