//! Structured triangulation of the beam and its boundary classification.

use crate::error::{ContactError, Result};
use crate::geometry::Geometry;

/// Boundary part an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPart {
    /// Clamped ends, `x = 0` and `x = length`.
    Dirichlet,
    /// Loaded upper surface, `y = thickness`.
    Neumann,
    /// Contact surface, `y = 0`, outward normal `(0, −1)`.
    Contact,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counter-clockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    pub nx: usize,
    pub ny: usize,
    /// Nodes on the clamped ends.
    pub gamma_d: Vec<usize>,
    /// Upper-surface edges, ordered by increasing x.
    pub gamma_n: Vec<[usize; 2]>,
    /// Contact edges, ordered by increasing x.
    pub gamma_c: Vec<[usize; 2]>,
    /// Edges on the clamped ends.
    pub gamma_d_edges: Vec<[usize; 2]>,
    /// Free-dof index of each node's x and y displacement (`None` if clamped).
    pub dof_map: Vec<[Option<usize>; 2]>,
    pub n_free_dofs: usize,
}

/// Structured grid of `⌈length/h_max⌉ × ⌈thickness/h_max⌉` cells, each cut
/// into two triangles with the diagonal direction alternating in a
/// checkerboard pattern.
pub fn build_mesh(geom: &Geometry) -> Result<Mesh> {
    geom.validate()?;
    let (nx, ny) = geom.cells();
    let dx = geom.length / nx as f64;
    let dy = geom.thickness / ny as f64;
    let id = |i: usize, j: usize| i * (ny + 1) + j;

    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for i in 0..=nx {
        for j in 0..=ny {
            let x = if i == nx { geom.length } else { i as f64 * dx };
            let y = if j == ny { geom.thickness } else { j as f64 * dy };
            nodes.push([x, y]);
        }
    }

    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }

    let mut gamma_d = Vec::with_capacity(2 * (ny + 1));
    let mut gamma_d_edges = Vec::with_capacity(2 * ny);
    for i in [0, nx] {
        for j in 0..=ny {
            gamma_d.push(id(i, j));
            if j < ny {
                gamma_d_edges.push([id(i, j), id(i, j + 1)]);
            }
        }
    }
    let gamma_n = (0..nx).map(|i| [id(i, ny), id(i + 1, ny)]).collect();
    let gamma_c = (0..nx).map(|i| [id(i, 0), id(i + 1, 0)]).collect();

    let mut dof_map = vec![[None, None]; nodes.len()];
    let mut n_free_dofs = 0;
    for (k, (node, dofs)) in nodes.iter().zip(dof_map.iter_mut()).enumerate() {
        let clamped = k < ny + 1 || k >= nx * (ny + 1);
        debug_assert_eq!(clamped, node[0] == 0.0 || node[0] == geom.length);
        if !clamped {
            *dofs = [Some(n_free_dofs), Some(n_free_dofs + 1)];
            n_free_dofs += 2;
        }
    }

    let mesh = Mesh {
        nodes,
        triangles,
        nx,
        ny,
        gamma_d,
        gamma_n,
        gamma_c,
        gamma_d_edges,
        dof_map,
        n_free_dofs,
    };
    for t in 0..mesh.triangles.len() {
        if mesh.signed_area(t) <= 0.0 {
            return Err(ContactError::DegenerateElement(t));
        }
    }
    Ok(mesh)
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn triangle_coords(&self, t: usize) -> [[f64; 2]; 3] {
        self.triangles[t].map(|k| self.nodes[k])
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.triangle_coords(t);
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]))
    }

    /// Longest axis-aligned cell side (the mesh size `h`).
    pub fn cell_size(&self) -> f64 {
        let (l, t) = (self.nodes.last().unwrap()[0], self.nodes.last().unwrap()[1]);
        (l / self.nx as f64).max(t / self.ny as f64)
    }

    /// Longest edge over all triangles.
    pub fn max_diameter(&self) -> f64 {
        let dist = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle_coords(t);
                dist(a, b).max(dist(b, c)).max(dist(c, a))
            })
            .fold(0.0, f64::max)
    }

    /// Contact nodes (`y = 0`) ordered by increasing x.
    pub fn contact_nodes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.gamma_c.iter().map(|e| e[0]).collect();
        if let Some(last) = self.gamma_c.last() {
            out.push(last[1]);
        }
        out
    }

    /// Boundary edges with their classification.
    pub fn boundary_edges(&self) -> Vec<([usize; 2], BoundaryPart)> {
        let parts = [
            (&self.gamma_d_edges, BoundaryPart::Dirichlet),
            (&self.gamma_n, BoundaryPart::Neumann),
            (&self.gamma_c, BoundaryPart::Contact),
        ];
        parts
            .into_iter()
            .flat_map(|(edges, part)| edges.iter().map(move |&e| (e, part)))
            .collect()
    }

    /// Full nodal displacement field `(u_x, u_y)` from a free-dof vector.
    pub fn expand(&self, u: &[f64]) -> Vec<[f64; 2]> {
        self.dof_map
            .iter()
            .map(|dofs| dofs.map(|d| d.map_or(0.0, |k| u[k])))
            .collect()
    }

    /// Index of the node on the contact surface closest to `x`.
    pub fn contact_node_near(&self, x: f64) -> usize {
        *self
            .contact_nodes()
            .iter()
            .min_by(|&&a, &&b| {
                (self.nodes[a][0] - x)
                    .abs()
                    .total_cmp(&(self.nodes[b][0] - x).abs())
            })
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn default_mesh_counts() {
        let mesh = build_mesh(&Geometry::default()).unwrap();
        assert_eq!((mesh.nx, mesh.ny), (120, 6));
        assert_eq!(mesh.n_nodes(), 121 * 7);
        assert_eq!(mesh.triangles.len(), 1440);
        assert_eq!(mesh.gamma_d.len(), 14);
        assert_eq!(mesh.n_free_dofs, 2 * (847 - 14));
        assert!(mesh.cell_size() <= 1.75 + 1e-12);
    }

    #[test]
    fn unit_square() {
        let g = Geometry {
            length: 1.0,
            thickness: 1.0,
            h_max: 1.0,
            upper_surface: 1.0,
        };
        let mesh = build_mesh(&g).unwrap();
        assert_eq!(mesh.n_nodes(), 4);
        assert_eq!(mesh.triangles.len(), 2);
        assert_eq!(mesh.n_free_dofs, 0);
    }

    #[test]
    fn rejects_h_max_above_thickness() {
        let g = Geometry {
            h_max: 12.0,
            ..Default::default()
        };
        assert!(build_mesh(&g).is_err());
    }

    #[test]
    fn triangles_positive_and_cover_domain() {
        let g = Geometry {
            length: 7.0,
            thickness: 2.0,
            h_max: 0.9,
            upper_surface: 1.0,
        };
        let mesh = build_mesh(&g).unwrap();
        let area: f64 = (0..mesh.triangles.len()).map(|t| mesh.signed_area(t)).sum();
        assert!((area - 14.0).abs() < 1e-12);
        assert!((0..mesh.triangles.len()).all(|t| mesh.signed_area(t) > 0.0));
    }

    #[test]
    fn boundary_edges_partition_the_boundary() {
        let g = Geometry {
            length: 9.0,
            thickness: 3.0,
            h_max: 1.0,
            upper_surface: 1.0,
        };
        let mesh = build_mesh(&g).unwrap();
        // edges used by exactly one triangle form the boundary
        let mut count: HashMap<[usize; 2], usize> = HashMap::new();
        for t in &mesh.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry([a.min(b), a.max(b)]).or_default() += 1;
            }
        }
        let mut boundary: Vec<[usize; 2]> = count
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(e, _)| e)
            .collect();
        boundary.sort();
        let mut classified: Vec<[usize; 2]> = mesh
            .boundary_edges()
            .into_iter()
            .map(|(e, _)| [e[0].min(e[1]), e[0].max(e[1])])
            .collect();
        classified.sort();
        let before = classified.len();
        classified.dedup();
        assert_eq!(before, classified.len(), "edge classified twice");
        assert_eq!(boundary, classified);
        for (e, part) in mesh.boundary_edges() {
            let [p, q] = [mesh.nodes[e[0]], mesh.nodes[e[1]]];
            match part {
                BoundaryPart::Contact => assert!(p[1] == 0.0 && q[1] == 0.0),
                BoundaryPart::Neumann => assert!(p[1] == 3.0 && q[1] == 3.0),
                BoundaryPart::Dirichlet => assert!(p[0] == q[0] && (p[0] == 0.0 || p[0] == 9.0)),
            }
        }
    }

    #[test]
    fn expand_places_zeros_on_clamped_nodes() {
        let mesh = build_mesh(&Geometry::default()).unwrap();
        let u: Vec<f64> = (0..mesh.n_free_dofs).map(|k| k as f64 + 1.0).collect();
        let full = mesh.expand(&u);
        for &k in &mesh.gamma_d {
            assert_eq!(full[k], [0.0, 0.0]);
        }
        let k = mesh.contact_node_near(105.0);
        assert_eq!(mesh.nodes[k], [105.0, 0.0]);
        let [dx, dy] = mesh.dof_map[k];
        assert_eq!(full[k], [u[dx.unwrap()], u[dy.unwrap()]]);
    }
}
