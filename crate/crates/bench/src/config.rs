use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hemivar_contact::{Geometry, LawSpec, LayeredParams, Material};
use hemivar_core::{AnnealConfig, SolverConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    PlainSubgradient,
    Asm,
    Hybrid,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [Self::PlainSubgradient, Self::Asm, Self::Hybrid];

    pub fn name(self) -> &'static str {
        match self {
            Self::PlainSubgradient => "plain_subgradient",
            Self::Asm => "asm",
            Self::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s || (s == "plain" && *k == Self::PlainSubgradient))
            .ok_or_else(|| BenchError::Config(format!("unknown solver {s:?}")))
    }
}

/// Diminishing-step subgradient baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlainConfig {
    /// Step scale `t₀` in `t_k = t₀ / √k`.
    pub t0: f64,
    pub max_iters: usize,
    pub record_trajectory: bool,
}

impl Default for PlainConfig {
    fn default() -> Self {
        Self {
            t0: 20.0,
            max_iters: 2000,
            record_trajectory: false,
        }
    }
}

/// Full sweep definition. Every field has a default, so `{}` is a valid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub laws: Vec<LawSpec>,
    /// Load levels `L` (MPa), strictly increasing.
    pub loads: Vec<f64>,
    pub solvers: Vec<SolverKind>,
    pub n_starts: usize,
    pub seed: u64,
    pub output_path: PathBuf,
    pub geometry: Geometry,
    pub material: Material,
    /// Local method settings, shared by `asm` and the local phase of `hybrid`.
    pub local: SolverConfig,
    pub anneal: AnnealConfig,
    pub plain: PlainConfig,
    /// Run the solvers in the variables `w = Lᵀu` with `A = LLᵀ`.
    pub cholesky_scaling: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
}

/// Foundation stiffness of the default laws (MPa/mm).
pub const DEFAULT_LAYER_STIFFNESS: f64 = 5000.0;

/// Default law set: `j2`, `j3`, `j7`, `j10`.
pub fn default_laws() -> Vec<LawSpec> {
    [2, 3, 7, 10]
        .into_iter()
        .map(|layers| LawSpec::Layered {
            layers,
            params: LayeredParams {
                stiffness: DEFAULT_LAYER_STIFFNESS,
                ..Default::default()
            },
        })
        .collect()
}

/// Ten evenly spaced levels, 0.5 to 23 MPa. At 0.5 no law has cracked yet;
/// at 23 the mid-span penetration exceeds the 3 mm protective depth for
/// every default law.
pub fn default_loads() -> Vec<f64> {
    (0..10).map(|k| 0.5 + 2.5 * k as f64).collect()
}

/// Local settings for the beam problem: energies are `O(10⁴–10⁶)` N·mm and
/// in scaled variables the quadratic part has unit curvature, so `10⁻³` on
/// `η` and `‖v̄‖` resolves the energy far below the category offset.
pub fn default_local() -> SolverConfig {
    SolverConfig {
        eps: 1e-3,
        delta: 1e-3,
        max_inner: 1000,
        max_serious: 100_000,
        ..Default::default()
    }
}

pub fn default_anneal() -> AnnealConfig {
    AnnealConfig {
        t0: 2.0,
        tmin: 0.05,
        alpha: 0.5,
        max_local_searches: 200,
        symmetric_perturbation: false,
    }
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            laws: default_laws(),
            loads: default_loads(),
            solvers: SolverKind::ALL.to_vec(),
            n_starts: 5,
            seed: 2024,
            output_path: PathBuf::from("results/sweep.csv"),
            geometry: Geometry::default(),
            material: Material::default(),
            local: default_local(),
            anneal: default_anneal(),
            plain: PlainConfig::default(),
            cholesky_scaling: true,
            workers: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.laws.is_empty() {
            return bad("laws must be nonempty");
        }
        if self.loads.is_empty() {
            return bad("loads must be nonempty");
        }
        if !self.loads.iter().all(|&l| l > 0.0 && l.is_finite()) {
            return bad("loads must be positive and finite");
        }
        if !self.loads.windows(2).all(|w| w[1] > w[0]) {
            return bad("loads must be strictly increasing");
        }
        if self.solvers.is_empty() {
            return bad("solvers must be nonempty");
        }
        if self.n_starts == 0 {
            return bad("n_starts must be at least 1");
        }
        if !(self.plain.t0 > 0.0) || self.plain.max_iters == 0 {
            return bad("plain baseline needs t0 > 0 and max_iters > 0");
        }
        if self.workers == Some(0) {
            return bad("workers must be positive");
        }
        for law in &self.laws {
            law.build()?;
        }
        self.geometry.validate()?;
        self.material.validate()?;
        self.local.validate()?;
        self.anneal.validate()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn law_names(&self) -> Vec<String> {
        self.laws.iter().map(LawSpec::name).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = BenchConfig::default();
        c.validate().unwrap();
        assert_eq!(c.law_names(), ["j2", "j3", "j7", "j10"]);
        assert_eq!(c.loads.len(), 10);
        assert_eq!(c.n_starts, 5);
    }

    #[test]
    fn empty_json_gives_defaults() {
        assert_eq!(BenchConfig::from_json("{}").unwrap(), BenchConfig::default());
        let c = BenchConfig::default();
        assert_eq!(BenchConfig::from_json(&c.to_json().unwrap()).unwrap(), c);
    }

    #[test]
    fn load_grid_checks() {
        for loads in [vec![], vec![1.0, 1.0], vec![2.0, 1.0], vec![0.0, 1.0]] {
            let c = BenchConfig {
                loads,
                ..Default::default()
            };
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn solver_names_roundtrip() {
        for k in SolverKind::ALL {
            assert_eq!(k.name().parse::<SolverKind>().unwrap(), k);
        }
        assert!("bfgs".parse::<SolverKind>().is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = BenchConfig::default();
        let b = BenchConfig {
            seed: 7,
            ..Default::default()
        };
        assert_eq!(a.hash(), BenchConfig::default().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
