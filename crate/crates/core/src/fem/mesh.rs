use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{PotentialProfile, Region, WellGeometry};

/// Tolerance used when matching a coordinate to a node, nm.
pub(crate) const NODE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Element {
    pub length: f64,
    /// Index of the profile segment the element lies in.
    pub segment: usize,
    pub region: Region,
}

/// Interface-aligned 1D mesh. Element `e` spans nodes `e` and `e + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    elements: Vec<Element>,
    breakpoint_nodes: Vec<usize>,
}

impl Mesh1D {
    /// Uniform spacing ≤ `target_h` inside every profile segment, with segment
    /// ends placed exactly on nodes.
    pub fn for_profile(profile: &PotentialProfile, target_h: f64) -> Result<Self> {
        if !(target_h.is_finite() && target_h > 0.0) {
            return Err(Error::invalid("target_h", format!("must be > 0, got {target_h}")));
        }
        let bps = profile.breakpoints();
        let mut nodes = vec![bps[0]];
        let mut elements = Vec::new();
        let mut breakpoint_nodes = vec![0];
        for (seg_idx, (seg, w)) in profile.segments().iter().zip(bps.windows(2)).enumerate() {
            let (lo, hi) = (w[0], w[1]);
            let len = hi - lo;
            // guard against 6.0/0.05 = 120.00000000000001
            let n = ((len / target_h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            for k in 1..n {
                nodes.push(lo + len * (k as f64) / (n as f64));
            }
            nodes.push(hi);
            breakpoint_nodes.push(nodes.len() - 1);
            let start = nodes.len() - 1 - n;
            for e in start..nodes.len() - 1 {
                elements.push(Element {
                    length: nodes[e + 1] - nodes[e],
                    segment: seg_idx,
                    region: seg.region,
                });
            }
        }
        if elements.iter().any(|e| !(e.length > 0.0)) {
            return Err(Error::invalid("mesh", "degenerate element"));
        }
        Ok(Mesh1D {
            nodes,
            elements,
            breakpoint_nodes,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn interior_len(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    /// Node indices of the profile breakpoints the mesh was built for.
    pub fn breakpoint_nodes(&self) -> &[usize] {
        &self.breakpoint_nodes
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    pub fn min_element(&self) -> f64 {
        self.elements.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    pub fn max_element(&self) -> f64 {
        self.elements.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    /// Index of the node at `z`, if there is one.
    pub fn node_index(&self, z: f64) -> Option<usize> {
        let i = self.nodes.partition_point(|&x| x < z - NODE_TOL);
        (i < self.nodes.len() && (self.nodes[i] - z).abs() <= NODE_TOL).then_some(i)
    }

    /// Index of the element containing z (left-closed; the last element owns the right edge).
    pub fn element_at(&self, z: f64) -> Result<usize> {
        let (min, max) = self.domain();
        if !(z >= min && z <= max) {
            return Err(Error::OutOfDomain { z, min, max });
        }
        let i = self.nodes.partition_point(|&x| x <= z);
        Ok(i.saturating_sub(1).min(self.elements.len() - 1))
    }

    /// Checks that this mesh can carry `profile`: same domain, breakpoints on nodes,
    /// and every element tagged with the segment it lies in.
    pub fn check_profile(&self, profile: &PotentialProfile) -> Result<()> {
        let bps = profile.breakpoints();
        for &z in bps {
            if self.node_index(z).is_none() {
                return Err(Error::MeshMismatch(format!("breakpoint {z} nm is not a node")));
            }
        }
        let (lo, hi) = profile.domain();
        let (mlo, mhi) = self.domain();
        if (lo - mlo).abs() > NODE_TOL || (hi - mhi).abs() > NODE_TOL {
            return Err(Error::MeshMismatch(format!(
                "mesh spans [{mlo}, {mhi}] but profile spans [{lo}, {hi}]"
            )));
        }
        for (e, el) in self.elements.iter().enumerate() {
            let mid = 0.5 * (self.nodes[e] + self.nodes[e + 1]);
            let seg = profile.segment_index(mid)?;
            if seg != el.segment || profile.segments()[seg].region != el.region {
                return Err(Error::MeshMismatch(format!(
                    "element {e} tagged with segment {} but lies in segment {seg}",
                    el.segment
                )));
            }
        }
        Ok(())
    }
}

/// Mesh for a barrier/well/barrier geometry.
pub fn build_mesh(geometry: &WellGeometry, target_h: f64) -> Result<Mesh1D> {
    geometry.validate()?;
    // Geometry-only profile: the mesh depends on breakpoints and regions, not values.
    let probe = PotentialProfile::new(
        geometry.breakpoints().to_vec(),
        vec![
            crate::potential::Segment { value: 1.0, region: Region::Barrier },
            crate::potential::Segment { value: 0.0, region: Region::Well },
            crate::potential::Segment { value: 1.0, region: Region::Barrier },
        ],
        0.0,
    )?;
    Mesh1D::for_profile(&probe, target_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{MaterialSystem, Preset};
    use crate::potential::build_profile;

    #[test]
    fn standard_mesh_has_361_nodes() {
        let g = WellGeometry::new(6.0, 6.0).unwrap();
        let m = build_mesh(&g, 0.05).unwrap();
        assert_eq!(m.len(), 361);
        assert_eq!(m.nodes()[m.breakpoint_nodes()[1]], -3.0);
        assert_eq!(m.nodes()[m.breakpoint_nodes()[2]], 3.0);
        assert_eq!(m.breakpoint_nodes(), &[0, 120, 240, 360]);
        assert_eq!(m.domain(), (-9.0, 9.0));
        assert!(m.max_element() <= 0.05 + 1e-15);
    }

    #[test]
    fn coarse_target_keeps_one_element_per_region() {
        let g = WellGeometry::new(6.0, 6.0).unwrap();
        let m = build_mesh(&g, 100.0).unwrap();
        assert_eq!(m.elements().len(), 3);
        assert_eq!(m.len(), 4);
    }

    #[test]
    fn domain_of_eight_nm_well() {
        let g = WellGeometry::new(8.0, 6.0).unwrap();
        let m = build_mesh(&g, 0.05).unwrap();
        assert_eq!(m.domain(), (-10.0, 10.0));
        assert!(m.node_index(-4.0).is_some() && m.node_index(4.0).is_some());
    }

    #[test]
    fn rejects_bad_spacing() {
        let g = WellGeometry::new(6.0, 6.0).unwrap();
        assert!(build_mesh(&g, 0.0).is_err());
        assert!(build_mesh(&g, f64::NAN).is_err());
    }

    #[test]
    fn spacing_bound_holds_for_awkward_widths() {
        let g = WellGeometry::new(3.33, 5.9).unwrap();
        let m = build_mesh(&g, 0.07).unwrap();
        assert!(m.max_element() <= 0.07 * (1.0 + 1e-12));
        assert!(m.nodes().windows(2).all(|w| w[1] > w[0]));
        let p = build_profile(&g, &MaterialSystem::preset(Preset::Sio2Si), 1e7).unwrap();
        m.check_profile(&p).unwrap();
    }

    #[test]
    fn detects_mismatched_profile() {
        let m = build_mesh(&WellGeometry::new(6.0, 6.0).unwrap(), 0.1).unwrap();
        let other = WellGeometry::new(6.03, 6.0).unwrap();
        let p = build_profile(&other, &MaterialSystem::preset(Preset::Sio2Si), 0.0).unwrap();
        assert!(matches!(m.check_profile(&p), Err(Error::MeshMismatch(_))));
    }

    #[test]
    fn element_lookup() {
        let m = build_mesh(&WellGeometry::new(6.0, 6.0).unwrap(), 1.0).unwrap();
        assert_eq!(m.element_at(-9.0).unwrap(), 0);
        assert_eq!(m.element_at(9.0).unwrap(), m.elements().len() - 1);
        assert_eq!(m.element_at(-8.0).unwrap(), 1);
        assert!(m.element_at(9.1).is_err());
    }
}
