//! Parabolic traction on the upper surface.

use crate::error::{ContactError, Result};
use crate::geometry::Geometry;
use crate::mesh::Mesh;

/// `f_N(x) = (0, −L·S·(1 − (x − c)²/c²))` with `c = length / 2`.
pub fn traction(geom: &Geometry, load: f64, x: f64) -> [f64; 2] {
    let c = 0.5 * geom.length;
    let r = (x - c) / c;
    [0.0, -load * geom.upper_surface * (1.0 - r * r)]
}

/// Nodal load over all `2 × n_nodes` dofs (`2k + c` for node `k`).
///
/// Each upper edge is integrated with the two-point Gauss rule, exact for
/// the cubic integrand (quadratic traction times linear hat function).
pub fn assemble_load_full(mesh: &Mesh, geom: &Geometry, load: f64) -> Result<Vec<f64>> {
    if !(load >= 0.0) || !load.is_finite() {
        return Err(ContactError::Geometry(format!(
            "load must be nonnegative and finite, got {load}"
        )));
    }
    let g = 0.5 / 3f64.sqrt();
    let mut b = vec![0.0; 2 * mesh.n_nodes()];
    for &[p, q] in &mesh.gamma_n {
        let (xp, xq) = (mesh.nodes[p][0], mesh.nodes[q][0]);
        let len = (xq - xp).abs();
        for s in [0.5 - g, 0.5 + g] {
            let f = traction(geom, load, xp + s * (xq - xp));
            let w = 0.5 * len;
            for (node, phi) in [(p, 1.0 - s), (q, s)] {
                b[2 * node] += w * phi * f[0];
                b[2 * node + 1] += w * phi * f[1];
            }
        }
    }
    Ok(b)
}

/// Load vector over the free dofs.
pub fn assemble_load(mesh: &Mesh, geom: &Geometry, load: f64) -> Result<Vec<f64>> {
    let full = assemble_load_full(mesh, geom, load)?;
    let mut b = vec![0.0; mesh.n_free_dofs];
    for (k, dofs) in mesh.dof_map.iter().enumerate() {
        for c in 0..2 {
            if let Some(d) = dofs[c] {
                b[d] = full[2 * k + c];
            }
        }
    }
    Ok(b)
}
