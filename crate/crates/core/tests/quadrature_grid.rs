use valleysplit::oracles::{quadrature_cases, quadrature_deviation};
use valleysplit::valley::IntegrationDomain;
use valleysplit::{ConstantsMode, MaterialSystem, Preset, WellGeometry};

#[test]
fn closed_form_matches_brute_force_for_both_materials_and_domains() {
    for preset in [Preset::Sio2Si, Preset::Sige30Si] {
        let m = MaterialSystem::preset(preset);
        for domain in [IntegrationDomain::Full, IntegrationDomain::WellOnly] {
            for mode in [ConstantsMode::PaperCanonical, ConstantsMode::Analytic] {
                for (w, f, n) in quadrature_cases().into_iter().step_by(3) {
                    let g = WellGeometry::new(w, 6.0).unwrap();
                    let d = quadrature_deviation(&m, &g, f, n, 0.05, mode, domain).unwrap();
                    assert!(d <= 1.0, "{preset} {domain:?} {mode} W={w} F={f} n={n}: {d}");
                }
            }
        }
    }
}

#[test]
fn nonuniform_mesh_near_interfaces() {
    // widths that are not multiples of h force shortened elements at the interfaces
    let m = MaterialSystem::preset(Preset::Sio2Si);
    for w in [4.013, 6.777] {
        let g = WellGeometry::new(w, 5.5).unwrap();
        let d = quadrature_deviation(&m, &g, 7.5e7, 1, 0.07, ConstantsMode::PaperCanonical, IntegrationDomain::Full).unwrap();
        assert!(d <= 1.0, "W = {w}: {d}");
    }
}
