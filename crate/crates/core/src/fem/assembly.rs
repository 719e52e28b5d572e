use crate::error::Result;
use crate::fem::mesh::Mesh1D;
use crate::material::MaterialSystem;
use crate::potential::{PotentialProfile, Region};
use crate::units::units;

/// Symmetric tridiagonal matrix stored as diagonal plus first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    fn zeros(n: usize) -> Self {
        SymTridiagonal {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    pub fn quad_form(&self, x: &[f64], y: &[f64]) -> f64 {
        self.mul_vec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }
}

/// Hamiltonian and overlap over the interior nodes (Dirichlet rows removed).
#[derive(Debug, Clone)]
pub struct FemMatrices {
    pub mesh: Mesh1D,
    /// eV·nm (energy times the nm of the basis normalisation).
    pub hamiltonian: SymTridiagonal,
    /// nm.
    pub overlap: SymTridiagonal,
}

/// Element contribution `[a00, a01, a11]` for one P1 element.
fn element_blocks(length: f64, kinetic: f64, v_left: f64, slope: f64) -> ([f64; 3], [f64; 3]) {
    let k = kinetic / length;
    // ∫ φ_i φ_j (A + B t) h dt on t ∈ [0, 1], A = V(z_left), B = s·h
    let (a, b) = (v_left, slope * length);
    let h = [
        k + length * (a / 3.0 + b / 12.0),
        -k + length * (a / 6.0 + b / 12.0),
        k + length * (a / 3.0 + b / 4.0),
    ];
    let m = [length / 3.0, length / 6.0, length / 3.0];
    (h, m)
}

/// Linear-element weak form of −d/dz (ħ²/2m(z)) d/dz + V(z), integrated exactly.
pub fn assemble(mesh: &Mesh1D, profile: &PotentialProfile, material: &MaterialSystem) -> Result<FemMatrices> {
    mesh.check_profile(profile)?;
    let hbar2_2m0 = units().kinetic_prefactor;
    let n_int = mesh.interior_len();
    let mut ham = SymTridiagonal::zeros(n_int);
    let mut ovl = SymTridiagonal::zeros(n_int);
    let nodes = mesh.nodes();
    let last = nodes.len() - 1;
    for (e, el) in mesh.elements().iter().enumerate() {
        let mass = match el.region {
            Region::Well => material.m_z_well,
            Region::Barrier => material.m_z_barrier,
        };
        let seg = profile.segments()[el.segment].value;
        let (h, m) = element_blocks(el.length, hbar2_2m0 / mass, seg + profile.slope() * nodes[e], profile.slope());
        // global node g maps to interior row g - 1
        let (i, j) = (e, e + 1);
        let interior_i = i > 0 && i < last;
        let interior_j = j > 0 && j < last;
        if interior_i {
            ham.diag[i - 1] += h[0];
            ovl.diag[i - 1] += m[0];
        }
        if interior_j {
            ham.diag[j - 1] += h[2];
            ovl.diag[j - 1] += m[2];
        }
        if interior_i && interior_j {
            ham.off[i - 1] += h[1];
            ovl.off[i - 1] += m[1];
        }
    }
    Ok(FemMatrices {
        mesh: mesh.clone(),
        hamiltonian: ham,
        overlap: ovl,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::build_mesh;
    use crate::material::Preset;
    use crate::potential::{build_profile, WellGeometry};
    use approx::assert_relative_eq;

    fn free_problem(h: f64) -> (Mesh1D, PotentialProfile, MaterialSystem) {
        let p = PotentialProfile::flat(0.0, 2.0, 0.0, 0.0).unwrap();
        let m = Mesh1D::for_profile(&p, h).unwrap();
        (m, p, MaterialSystem::preset(Preset::Sio2Si))
    }

    #[test]
    fn textbook_laplacian_and_mass_rows() {
        let (mesh, p, mat) = free_problem(0.1);
        let fm = assemble(&mesh, &p, &mat).unwrap();
        let h = 0.1;
        let k = units().kinetic_prefactor / (mat.m_z_well * h);
        let mid = fm.hamiltonian.dim() / 2;
        assert_relative_eq!(fm.hamiltonian.diag[mid], 2.0 * k, max_relative = 1e-12);
        assert_relative_eq!(fm.hamiltonian.off[mid], -k, max_relative = 1e-12);
        assert_relative_eq!(fm.overlap.diag[mid], 2.0 * h / 3.0, max_relative = 1e-12);
        assert_relative_eq!(fm.overlap.off[mid], h / 6.0, max_relative = 1e-12);
        assert_eq!(fm.hamiltonian.dim(), 19);
    }

    #[test]
    fn constant_potential_adds_v0_times_overlap() {
        let (mesh, p, mat) = free_problem(0.1);
        let v0 = 0.37;
        let shifted = p.shifted(v0);
        let a = assemble(&mesh, &p, &mat).unwrap();
        let b = assemble(&mesh, &shifted, &mat).unwrap();
        for i in 0..a.hamiltonian.dim() {
            assert_relative_eq!(
                b.hamiltonian.diag[i],
                a.hamiltonian.diag[i] + v0 * a.overlap.diag[i],
                max_relative = 1e-14
            );
        }
        for i in 0..a.hamiltonian.off.len() {
            assert_relative_eq!(
                b.hamiltonian.off[i],
                a.hamiltonian.off[i] + v0 * a.overlap.off[i],
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn linear_potential_integrated_exactly() {
        // quadrature check of one element against Simpson (exact for cubics)
        let (l, s, v) = (0.3, 0.7, 0.2);
        let (h, _) = element_blocks(l, 0.0, v, s);
        let simpson = |f: &dyn Fn(f64) -> f64| l / 6.0 * (f(0.0) + 4.0 * f(0.5) + f(1.0));
        let pot = |t: f64| v + s * l * t;
        assert_relative_eq!(h[0], simpson(&|t| (1.0 - t) * (1.0 - t) * pot(t)), max_relative = 1e-14);
        assert_relative_eq!(h[1], simpson(&|t| (1.0 - t) * t * pot(t)), max_relative = 1e-14);
        assert_relative_eq!(h[2], simpson(&|t| t * t * pot(t)), max_relative = 1e-14);
    }

    #[test]
    fn overlap_total_equals_domain_length() {
        // Σ_ij M_ij over all nodes = ∫ 1 dz; interior part misses the edge rows.
        let g = WellGeometry::new(6.0, 6.0).unwrap();
        let mat = MaterialSystem::preset(Preset::Sio2Si);
        let p = build_profile(&g, &mat, 1e7).unwrap();
        let mesh = build_mesh(&g, 0.05).unwrap();
        let fm = assemble(&mesh, &p, &mat).unwrap();
        let total: f64 = fm.overlap.diag.iter().sum::<f64>() + 2.0 * fm.overlap.off.iter().sum::<f64>();
        let h0 = mesh.elements()[0].length;
        let hn = mesh.elements().last().unwrap().length;
        // missing: two edge diagonals (h/3) and their couplings (2·h/6)
        assert_relative_eq!(total + 2.0 * h0 / 3.0 + 2.0 * hn / 3.0, 18.0, max_relative = 1e-12);
    }

    #[test]
    fn mismatch_is_rejected() {
        let g = WellGeometry::new(6.0, 6.0).unwrap();
        let mat = MaterialSystem::preset(Preset::Sio2Si);
        let mesh = build_mesh(&g, 0.1).unwrap();
        let p = build_profile(&WellGeometry::new(5.0, 6.5).unwrap(), &mat, 0.0).unwrap();
        assert!(assemble(&mesh, &p, &mat).is_err());
    }
}
