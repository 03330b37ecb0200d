//! The assembled energy `½⟨Au, u⟩ − ⟨b_load, u⟩ + J(u)` over the free dofs.

use hemivar_core::{EvalResult, Objective, QuadPlusJ};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functional::ContactFunctional;
use crate::geometry::{Geometry, Material};
use crate::law::{ContactLaw, LayeredParams};
use crate::load::assemble_load;
use crate::mesh::{build_mesh, Mesh};
use crate::stiffness::assemble_stiffness;

#[derive(Debug, Clone)]
pub struct ContactProblem {
    pub mesh: Mesh,
    pub geometry: Geometry,
    pub material: Material,
    pub load: f64,
    /// Nodal load `b_load` over the free dofs.
    pub b_load: Vec<f64>,
    pub energy: QuadPlusJ<ContactFunctional>,
}

pub fn build_energy_problem(
    geom: &Geometry,
    mat: &Material,
    law: &ContactLaw,
    load: f64,
) -> Result<ContactProblem> {
    mat.validate()?;
    law.validate()?;
    let mesh = build_mesh(geom)?;
    let a = assemble_stiffness(&mesh, mat)?;
    let b_load = assemble_load(&mesh, geom, load)?;
    let functional = ContactFunctional::new(&mesh, law.clone());
    let b = b_load.iter().map(|x| -x).collect();
    let energy = QuadPlusJ::new(a, b, functional)?;
    Ok(ContactProblem {
        mesh,
        geometry: geom.clone(),
        material: mat.clone(),
        load,
        b_load,
        energy,
    })
}

impl ContactProblem {
    pub fn from_config(cfg: &ProblemConfig) -> Result<Self> {
        build_energy_problem(&cfg.geometry, &cfg.material, &cfg.law.build()?, cfg.load)
    }

    pub fn functional(&self) -> &ContactFunctional {
        self.energy.term()
    }

    pub fn law(&self) -> &ContactLaw {
        &self.energy.term().law
    }

    /// Minimizer without the obstacle, `A u = b_load`.
    pub fn linear_solution(&self) -> Result<Vec<f64>> {
        let chol = self.energy.matrix().cholesky()?;
        Ok(chol.solve(&self.b_load))
    }

    /// Vertical displacement of the bottom node closest to mid-span.
    pub fn midspan_deflection(&self, u: &[f64]) -> f64 {
        let k = self.mesh.contact_node_near(0.5 * self.geometry.length);
        self.mesh.dof_map[k][1].map_or(0.0, |d| u[d])
    }

    /// Nodal displacements including the clamped nodes.
    pub fn displacement_field(&self, u: &[f64]) -> Vec<[f64; 2]> {
        self.mesh.expand(u)
    }
}

impl Objective for ContactProblem {
    fn dim(&self) -> usize {
        self.energy.dim()
    }

    fn eval(&self, u: &[f64]) -> hemivar_core::Result<EvalResult> {
        self.energy.eval(u)
    }

    fn value(&self, u: &[f64]) -> hemivar_core::Result<f64> {
        self.energy.value(u)
    }
}

/// Contact law as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawSpec {
    /// No obstacle.
    None,
    /// `j_n` from the layered family.
    Layered {
        layers: usize,
        #[serde(default)]
        params: LayeredParams,
    },
    /// Fully explicit law.
    Custom(ContactLaw),
}

impl LawSpec {
    pub fn build(&self) -> Result<ContactLaw> {
        match self {
            LawSpec::None => Ok(ContactLaw::none()),
            LawSpec::Layered { layers, params } => ContactLaw::layered(*layers, params),
            LawSpec::Custom(law) => {
                law.validate()?;
                Ok(law.clone())
            }
        }
    }

    /// Short name used in reports, `j7` for a 7-layer law.
    pub fn name(&self) -> String {
        match self {
            LawSpec::None => "none".into(),
            LawSpec::Layered { layers, .. } => format!("j{layers}"),
            LawSpec::Custom(law) => format!("custom{}", law.n_layers()),
        }
    }
}

/// Single problem definition file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig {
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub material: Material,
    pub law: LawSpec,
    /// Load level `L` (MPa).
    pub load: f64,
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
