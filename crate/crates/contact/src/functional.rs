//! Discrete contact functional `J(u) = Σ_i w_i j(ξ_i(u))`.

use hemivar_core::NonsmoothTerm;

use crate::law::ContactLaw;
use crate::mesh::Mesh;

/// One contact quadrature node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceNode {
    pub node: usize,
    /// Free index of the node's vertical displacement; `None` on clamped corners.
    pub dof: Option<usize>,
    /// Trapezoid weight (mm).
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct ContactFunctional {
    pub law: ContactLaw,
    pub nodes: Vec<TraceNode>,
}

impl ContactFunctional {
    pub fn new(mesh: &Mesh, law: ContactLaw) -> Self {
        let contact = mesh.contact_nodes();
        let mut weights = vec![0.0; contact.len()];
        for (e, &[p, q]) in mesh.gamma_c.iter().enumerate() {
            let half = 0.5 * (mesh.nodes[q][0] - mesh.nodes[p][0]).abs();
            weights[e] += half;
            weights[e + 1] += half;
        }
        let nodes = contact
            .iter()
            .zip(weights)
            .map(|(&node, weight)| TraceNode {
                node,
                dof: mesh.dof_map[node][1],
                weight,
            })
            .collect();
        Self { law, nodes }
    }

    /// Penetration `ξ_i = u_ν = −u_y` at each contact node.
    pub fn traces(&self, u: &[f64]) -> Vec<f64> {
        self.nodes
            .iter()
            .map(|t| t.dof.map_or(0.0, |d| -u[d]))
            .collect()
    }

    pub fn value_of_traces(&self, xi: &[f64]) -> f64 {
        self.nodes
            .iter()
            .zip(xi)
            .map(|(t, &x)| t.weight * self.law.energy(x))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|t| t.weight).sum()
    }
}

impl NonsmoothTerm for ContactFunctional {
    fn eval_add(&self, u: &[f64], grad: &mut [f64]) -> f64 {
        let mut value = 0.0;
        for t in &self.nodes {
            let Some(d) = t.dof else { continue };
            let (j, p) = self.law.eval(-u[d]);
            value += t.weight * j;
            grad[d] -= t.weight * p;
        }
        value
    }

    fn value(&self, u: &[f64]) -> f64 {
        self.nodes
            .iter()
            .filter_map(|t| t.dof.map(|d| t.weight * self.law.energy(-u[d])))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Geometry;
    use crate::law::LayeredParams;
    use crate::mesh::build_mesh;

    fn setup() -> (Mesh, ContactFunctional) {
        let mesh = build_mesh(&Geometry::default()).unwrap();
        let law = ContactLaw::layered(7, &LayeredParams::default()).unwrap();
        let f = ContactFunctional::new(&mesh, law);
        (mesh, f)
    }

    #[test]
    fn weights_sum_to_contact_length() {
        let (_, f) = setup();
        assert_eq!(f.nodes.len(), 121);
        assert!((f.total_weight() - 210.0).abs() < 1e-12);
        assert!(f.nodes.first().unwrap().dof.is_none());
        assert!(f.nodes.last().unwrap().dof.is_none());
    }

    #[test]
    fn zero_displacement_gives_zero() {
        let (mesh, f) = setup();
        let u = vec![0.0; mesh.n_free_dofs];
        let mut g = vec![0.0; mesh.n_free_dofs];
        assert_eq!(f.eval_add(&u, &mut g), 0.0);
        assert!(g.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn uniform_penetration_integrates_constant() {
        let (_, f) = setup();
        let xi = vec![1.7; f.nodes.len()];
        let expected = f.law.energy(1.7) * 210.0;
        assert!((f.value_of_traces(&xi) - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn gradient_matches_force_on_vertical_dofs() {
        let (mesh, f) = setup();
        let mut u = vec![0.0; mesh.n_free_dofs];
        for t in &f.nodes {
            if let Some(d) = t.dof {
                u[d] = -0.02 * (mesh.nodes[t.node][0] / 10.0);
            }
        }
        let mut g = vec![0.0; u.len()];
        let v = f.eval_add(&u, &mut g);
        assert_eq!(v, f.value(&u));
        for t in &f.nodes {
            if let Some(d) = t.dof {
                assert_eq!(g[d], -t.weight * f.law.force(-u[d]));
            }
        }
    }
}
