use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fem::assembly::FemMatrices;
use crate::fem::eigen::lowest_eigenpairs;
use crate::fem::mesh::Mesh1D;

/// Subband energies and piecewise-linear envelopes, ∫|Ψ_n|² dz = 1.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    mesh: Mesh1D,
    energies: Vec<f64>,
    /// Nodal values over all nodes, zero at both domain edges.
    states: Vec<Vec<f64>>,
}

/// Lowest `n_states` eigenpairs of the assembled pencil.
pub fn solve_eigen(matrices: &FemMatrices, n_states: usize) -> Result<EigenSolution> {
    let pairs = lowest_eigenpairs(&matrices.hamiltonian, &matrices.overlap, n_states)?;
    let states = pairs
        .vectors
        .into_iter()
        .map(|v| {
            let mut full = Vec::with_capacity(v.len() + 2);
            full.push(0.0);
            full.extend(v);
            full.push(0.0);
            full
        })
        .collect();
    let mut sol = EigenSolution {
        mesh: matrices.mesh.clone(),
        energies: pairs.values,
        states,
    };
    // M-orthonormal coefficients already carry the exact L² norm of the
    // interpolant; rescale anyway so roundoff in the solver never leaks out.
    for n in 0..sol.states.len() {
        let norm = sol.norm_sq(n).sqrt();
        sol.states[n].iter_mut().for_each(|c| *c /= norm);
    }
    Ok(sol)
}

impl EigenSolution {
    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n < self.energies.len() {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                index: n,
                available: self.energies.len(),
            })
        }
    }

    pub fn energy(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.energies[n])
    }

    /// Nodal coefficients of Ψ_n, nm^{-1/2}.
    pub fn coefficients(&self, n: usize) -> Result<&[f64]> {
        self.check(n)?;
        Ok(&self.states[n])
    }

    /// Ψ_n(z) by linear interpolation; exact at nodes.
    pub fn evaluate_psi(&self, n: usize, z: f64) -> Result<f64> {
        self.check(n)?;
        let e = self.mesh.element_at(z)?;
        let nodes = self.mesh.nodes();
        let (z0, z1) = (nodes[e], nodes[e + 1]);
        let c = &self.states[n];
        if z == z0 {
            return Ok(c[e]);
        }
        if z == z1 {
            return Ok(c[e + 1]);
        }
        let t = (z - z0) / (z1 - z0);
        Ok(c[e] * (1.0 - t) + c[e + 1] * t)
    }

    /// ∫ Ψ_i Ψ_j dz, exact for the piecewise-linear interpolants.
    pub fn inner(&self, i: usize, j: usize) -> Result<f64> {
        self.check(i)?;
        self.check(j)?;
        let (a, b) = (&self.states[i], &self.states[j]);
        Ok(self
            .mesh
            .elements()
            .iter()
            .enumerate()
            .map(|(e, el)| {
                el.length / 6.0 * (2.0 * a[e] * b[e] + a[e] * b[e + 1] + a[e + 1] * b[e] + 2.0 * a[e + 1] * b[e + 1])
            })
            .sum())
    }

    fn norm_sq(&self, n: usize) -> f64 {
        self.inner(n, n).expect("index checked by caller")
    }

    /// Writes columns z, psi_0 … psi_{n-1}.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(out, "z_nm")?;
        for n in 0..self.len() {
            write!(out, ",psi_{n}")?;
        }
        writeln!(out)?;
        for (k, z) in self.mesh.nodes().iter().enumerate() {
            write!(out, "{z:.9e}")?;
            for s in &self.states {
                write!(out, ",{:.9e}", s[k])?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }
}
