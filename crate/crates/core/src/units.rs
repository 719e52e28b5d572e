//! Physical constants and the internal unit system.
//!
//! Everything past the input boundary is expressed in electron-volts and
//! nanometres. Fields enter in V/m and are converted to a potential slope in
//! eV/nm per elementary charge.

/// Reduced Planck constant, J·s (CODATA 2018, exact by SI definition).
pub const HBAR_J_S: f64 = 1.054_571_817e-34;
/// Electron rest mass, kg (CODATA 2018).
pub const ELECTRON_MASS_KG: f64 = 9.109_383_701_5e-31;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;
/// Rydberg energy, eV (CODATA 2018).
pub const RYDBERG_EV: f64 = 13.605_693_122_994;
/// Bohr radius, nm (CODATA 2018).
pub const BOHR_NM: f64 = 0.052_917_721_090_3;

const NM_PER_M: f64 = 1.0e9;

/// Conversion factors between the input units and the internal eV/nm system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    /// ħ²/(2m₀) in eV·nm².
    pub kinetic_prefactor: f64,
    /// Slope (eV/nm) produced by 1 V/m acting on one elementary charge.
    pub field_to_slope: f64,
    pub rydberg_ev: f64,
    pub bohr_nm: f64,
    /// 1 bohr⁻¹ expressed in nm⁻¹.
    pub inverse_bohr_per_nm: f64,
}

impl UnitSystem {
    pub fn si() -> Self {
        let joule_per_ev = ELEMENTARY_CHARGE_C;
        let kinetic = HBAR_J_S * HBAR_J_S / (2.0 * ELECTRON_MASS_KG) / joule_per_ev
            * NM_PER_M
            * NM_PER_M;
        UnitSystem {
            kinetic_prefactor: kinetic,
            // e·F[V/m] in eV/m, divided by 1e9 nm/m.
            field_to_slope: 1.0 / NM_PER_M,
            rydberg_ev: RYDBERG_EV,
            bohr_nm: BOHR_NM,
            inverse_bohr_per_nm: 1.0 / BOHR_NM,
        }
    }

    pub fn field_to_ev_per_nm(&self, field_v_per_m: f64) -> f64 {
        field_v_per_m * self.field_to_slope
    }

    pub fn ev_per_nm_to_field(&self, slope: f64) -> f64 {
        slope / self.field_to_slope
    }

    pub fn rydberg_to_ev(&self, ry: f64) -> f64 {
        ry * self.rydberg_ev
    }

    pub fn ev_to_rydberg(&self, ev: f64) -> f64 {
        ev / self.rydberg_ev
    }

    pub fn bohr_to_nm(&self, bohr: f64) -> f64 {
        bohr * self.bohr_nm
    }

    pub fn nm_to_bohr(&self, nm: f64) -> f64 {
        nm / self.bohr_nm
    }

    /// Wavevector in bohr⁻¹ → nm⁻¹.
    pub fn au_wavevector_to_nm(&self, k_au: f64) -> f64 {
        k_au * self.inverse_bohr_per_nm
    }

    /// Wavevector in nm⁻¹ → bohr⁻¹.
    pub fn nm_wavevector_to_au(&self, k_nm: f64) -> f64 {
        k_nm / self.inverse_bohr_per_nm
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::si()
    }
}

/// Shared instance; the struct is `Copy` and cheap to rebuild.
pub fn units() -> UnitSystem {
    UnitSystem::si()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kinetic_prefactor_matches_textbook_value() {
        // Reference computed independently from the constants in SI.
        let reference = 1.054_571_817e-34_f64.powi(2)
            / (2.0 * 9.109_383_701_5e-31)
            / 1.602_176_634e-19
            * 1e18;
        let u = UnitSystem::si();
        assert_relative_eq!(u.kinetic_prefactor, reference, max_relative = 1e-14);
        assert!((u.kinetic_prefactor - 0.0381).abs() / reference < 5e-3);
    }

    #[test]
    fn field_conversion() {
        let u = UnitSystem::si();
        assert_relative_eq!(u.field_to_ev_per_nm(1e7), 0.01, max_relative = 1e-15);
        assert_relative_eq!(u.field_to_ev_per_nm(1.29e8), 0.129, max_relative = 1e-15);
    }

    #[test]
    fn round_trips_are_identity() {
        let u = UnitSystem::si();
        for &x in &[1e-6, 0.37, 1.0, 42.0, 9.83e3] {
            assert_relative_eq!(u.ev_per_nm_to_field(u.field_to_ev_per_nm(x)), x, max_relative = 1e-12);
            assert_relative_eq!(u.ev_to_rydberg(u.rydberg_to_ev(x)), x, max_relative = 1e-12);
            assert_relative_eq!(u.nm_to_bohr(u.bohr_to_nm(x)), x, max_relative = 1e-12);
            assert_relative_eq!(
                u.nm_wavevector_to_au(u.au_wavevector_to_nm(x)),
                x,
                max_relative = 1e-12
            );
        }
    }
}
