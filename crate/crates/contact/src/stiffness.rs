//! Plane-strain stiffness of linear (constant-strain) triangles.

use hemivar_core::SymMatrix;

use crate::error::{ContactError, Result};
use crate::geometry::Material;
use crate::mesh::Mesh;

/// 6×6 element matrix for dofs ordered `(u1x, u1y, u2x, u2y, u3x, u3y)`,
/// per unit out-of-plane depth.
pub fn element_stiffness(p: [[f64; 2]; 3], mat: &Material) -> Result<[[f64; 6]; 6]> {
    let two_area =
        (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    if !(two_area > 0.0) {
        return Err(ContactError::DegenerateElement(0));
    }
    let area = 0.5 * two_area;
    // shape-function gradients
    let mut grad = [[0.0; 2]; 3];
    for a in 0..3 {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        grad[a] = [
            (p[b][1] - p[c][1]) / two_area,
            (p[c][0] - p[b][0]) / two_area,
        ];
    }
    // strain-displacement matrix, rows [ε11, ε22, 2ε12]
    let mut bmat = [[0.0; 6]; 3];
    for a in 0..3 {
        bmat[0][2 * a] = grad[a][0];
        bmat[1][2 * a + 1] = grad[a][1];
        bmat[2][2 * a] = grad[a][1];
        bmat[2][2 * a + 1] = grad[a][0];
    }
    let d = mat.voigt();
    let mut db = [[0.0; 6]; 3];
    for i in 0..3 {
        for j in 0..6 {
            db[i][j] = (0..3).map(|k| d[i][k] * bmat[k][j]).sum();
        }
    }
    let mut ke = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            ke[i][j] = area * (0..3).map(|k| bmat[k][i] * db[k][j]).sum::<f64>();
        }
    }
    Ok(ke)
}

/// Stiffness over all `2 × n_nodes` dofs (no clamping), dof `2k + c` for
/// node `k`, component `c`.
pub fn assemble_stiffness_full(mesh: &Mesh, mat: &Material) -> Result<SymMatrix> {
    assemble(mesh, mat, 2 * mesh.n_nodes(), |node, c| Some(2 * node + c))
}

/// Stiffness over the free dofs of `mesh` (clamped rows and columns removed).
pub fn assemble_stiffness(mesh: &Mesh, mat: &Material) -> Result<SymMatrix> {
    assemble(mesh, mat, mesh.n_free_dofs, |node, c| mesh.dof_map[node][c])
}

fn assemble(
    mesh: &Mesh,
    mat: &Material,
    n: usize,
    dof: impl Fn(usize, usize) -> Option<usize>,
) -> Result<SymMatrix> {
    mat.validate()?;
    let mut triplets = Vec::with_capacity(36 * mesh.triangles.len());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let ke = element_stiffness(mesh.triangle_coords(t), mat)
            .map_err(|_| ContactError::DegenerateElement(t))?;
        let dofs: Vec<Option<usize>> = (0..6).map(|i| dof(tri[i / 2], i % 2)).collect();
        for i in 0..6 {
            let Some(gi) = dofs[i] else { continue };
            for j in 0..6 {
                if let Some(gj) = dofs[j] {
                    triplets.push((gi, gj, ke[i][j]));
                }
            }
        }
    }
    Ok(SymMatrix::sparse_from_triplets(n, &triplets)?)
}
