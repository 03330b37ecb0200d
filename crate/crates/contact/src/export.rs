//! Plain-text mesh and displacement tables.

use std::io::Write;
use std::path::Path;

use crate::error::{ContactError, Result};
use crate::mesh::Mesh;

/// Node table `id, x, y, u_x, u_y`. `displacement` holds one entry per node
/// (see [`Mesh::expand`]).
pub fn write_nodes<W: Write>(out: W, mesh: &Mesh, displacement: &[[f64; 2]]) -> Result<()> {
    if displacement.len() != mesh.n_nodes() {
        return Err(ContactError::Geometry(format!(
            "expected {} nodal displacements, got {}",
            mesh.n_nodes(),
            displacement.len()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "x", "y", "u_x", "u_y"])?;
    for (k, (p, u)) in mesh.nodes.iter().zip(displacement).enumerate() {
        w.write_record([
            k.to_string(),
            p[0].to_string(),
            p[1].to_string(),
            u[0].to_string(),
            u[1].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Element table `id, n1, n2, n3` (counter-clockwise).
pub fn write_elements<W: Write>(out: W, mesh: &Mesh) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "n1", "n2", "n3"])?;
    for (k, t) in mesh.triangles.iter().enumerate() {
        w.write_record([k, t[0], t[1], t[2]].map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `nodes.csv` and `elements.csv` into `dir`.
pub fn export_mesh(dir: &Path, mesh: &Mesh, displacement: &[[f64; 2]]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_nodes(std::fs::File::create(dir.join("nodes.csv"))?, mesh, displacement)?;
    write_elements(std::fs::File::create(dir.join("elements.csv"))?, mesh)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Geometry;
    use crate::mesh::build_mesh;

    #[test]
    fn tables_have_one_row_per_entity() {
        let g = Geometry {
            length: 4.0,
            thickness: 1.0,
            h_max: 1.0,
            upper_surface: 1.0,
        };
        let mesh = build_mesh(&g).unwrap();
        let disp = vec![[0.0, -0.5]; mesh.n_nodes()];
        let mut nodes = Vec::new();
        write_nodes(&mut nodes, &mesh, &disp).unwrap();
        let text = String::from_utf8(nodes).unwrap();
        assert_eq!(text.lines().count(), mesh.n_nodes() + 1);
        assert_eq!(text.lines().nth(1).unwrap(), "0,0,0,0,-0.5");
        let mut elems = Vec::new();
        write_elements(&mut elems, &mesh).unwrap();
        assert_eq!(String::from_utf8(elems).unwrap().lines().count(), 9);
        assert!(write_nodes(Vec::new(), &mesh, &disp[1..]).is_err());
    }
}
