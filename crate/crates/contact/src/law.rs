//! Layered nonmonotone contact law.
//!
//! The foundation is a soft base under `n − 1` protective layers of total
//! thickness 3 mm. Inside layer `i` the reaction grows linearly; when the
//! penetration reaches the layer's depth the layer cracks and the reaction
//! drops to the residual level of the next one. Past the last crack the
//! base pushes back with a constant force.

use serde::{Deserialize, Serialize};

use crate::error::{ContactError, Result};

/// Total thickness of the protective layers (mm).
pub const PROTECTIVE_DEPTH: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactLaw {
    /// Crack depths `s_1 < … < s_{n−1}`; empty for the trivial law.
    pub crack_depths: Vec<f64>,
    /// Force slope inside each protective layer (MPa/mm).
    pub layer_stiffness: Vec<f64>,
    /// Force at the top of each protective layer (MPa); the first is 0.
    pub residual_forces: Vec<f64>,
    /// Force past the last crack (MPa).
    pub base_force: f64,
    pub growth_c0: f64,
    pub growth_c1: f64,
}

/// Knobs of the default layered family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayeredParams {
    /// Force slope shared by all protective layers (MPa/mm).
    pub stiffness: f64,
    /// Ratio between consecutive layer thicknesses (> 1 makes deeper layers thicker).
    pub thickness_ratio: f64,
    /// Force right after an internal crack, as a fraction of the peak before it.
    pub residual_fraction: f64,
}

impl Default for LayeredParams {
    fn default() -> Self {
        Self {
            stiffness: 20.0,
            thickness_ratio: 1.3,
            residual_fraction: 0.5,
        }
    }
}

impl ContactLaw {
    /// `p ≡ 0`: no obstacle.
    pub fn none() -> Self {
        Self {
            crack_depths: Vec::new(),
            layer_stiffness: Vec::new(),
            residual_forces: Vec::new(),
            base_force: 0.0,
            growth_c0: 0.0,
            growth_c1: 0.0,
        }
    }

    /// One protective layer of the full depth over a base of constant force.
    pub fn single_layer(stiffness: f64, base_force: f64) -> Result<Self> {
        let peak = stiffness * PROTECTIVE_DEPTH;
        let law = Self {
            crack_depths: vec![PROTECTIVE_DEPTH],
            layer_stiffness: vec![stiffness],
            residual_forces: vec![0.0],
            base_force,
            growth_c0: peak.max(base_force),
            growth_c1: 0.0,
        };
        law.validate()?;
        Ok(law)
    }

    /// The `j_n` family: `n − 1` layers with geometrically growing
    /// thicknesses summing to 3 mm, equal slopes, and a drop to
    /// `residual_fraction × peak` at each internal crack. The base level equals
    /// the last peak, so `j_2` is convex and `C¹`.
    pub fn layered(n_layers: usize, params: &LayeredParams) -> Result<Self> {
        if n_layers < 2 {
            return Err(ContactError::Law(format!(
                "a layered law needs at least 2 layers, got {n_layers}"
            )));
        }
        let LayeredParams {
            stiffness,
            thickness_ratio: r,
            residual_fraction: frac,
        } = *params;
        if !(stiffness > 0.0) || !(r > 0.0) || !(0.0..=1.0).contains(&frac) {
            return Err(ContactError::Law(format!("invalid layered parameters {params:?}")));
        }
        let m = n_layers - 1;
        let weights: Vec<f64> = (0..m).map(|i| r.powi(i as i32)).collect();
        let total: f64 = weights.iter().sum();
        let mut crack_depths = Vec::with_capacity(m);
        let mut residual_forces = Vec::with_capacity(m);
        let (mut depth, mut start, mut peak) = (0.0, 0.0, 0.0);
        for (i, w) in weights.iter().enumerate() {
            let width = PROTECTIVE_DEPTH * w / total;
            depth += width;
            residual_forces.push(start);
            peak = start + stiffness * width;
            crack_depths.push(if i + 1 == m { PROTECTIVE_DEPTH } else { depth });
            start = frac * peak;
        }
        let max_force = residual_forces
            .iter()
            .zip(&crack_depths)
            .enumerate()
            .map(|(i, (r0, s))| {
                let prev = if i == 0 { 0.0 } else { crack_depths[i - 1] };
                r0 + stiffness * (s - prev)
            })
            .fold(peak, f64::max);
        let law = Self {
            crack_depths,
            layer_stiffness: vec![stiffness; m],
            residual_forces,
            base_force: peak,
            growth_c0: max_force,
            growth_c1: 0.0,
        };
        law.validate()?;
        Ok(law)
    }

    pub fn n_layers(&self) -> usize {
        self.crack_depths.len() + 1
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.crack_depths.len();
        if self.layer_stiffness.len() != m || self.residual_forces.len() != m {
            return Err(ContactError::Law(format!(
                "expected {m} slopes and residual forces, got {} and {}",
                self.layer_stiffness.len(),
                self.residual_forces.len()
            )));
        }
        if m == 0 {
            if self.base_force != 0.0 {
                return Err(ContactError::Law(
                    "a law without layers must have zero base force".into(),
                ));
            }
            return Ok(());
        }
        let mut prev = 0.0;
        for &s in &self.crack_depths {
            if !(s > prev) || !s.is_finite() {
                return Err(ContactError::Law(format!(
                    "crack depths must be positive and increasing: {:?}",
                    self.crack_depths
                )));
            }
            prev = s;
        }
        if (prev - PROTECTIVE_DEPTH).abs() > 1e-12 {
            return Err(ContactError::Law(format!(
                "the last crack depth must be {PROTECTIVE_DEPTH} mm, got {prev}"
            )));
        }
        if self.residual_forces[0] != 0.0 {
            return Err(ContactError::Law("the force must start from zero".into()));
        }
        let nonneg = |v: f64| v >= 0.0 && v.is_finite();
        if !self.layer_stiffness.iter().all(|&k| nonneg(k))
            || !self.residual_forces.iter().all(|&r| nonneg(r))
            || !nonneg(self.base_force)
            || !nonneg(self.growth_c0)
            || !nonneg(self.growth_c1)
        {
            return Err(ContactError::Law(
                "slopes, forces and growth constants must be nonnegative and finite".into(),
            ));
        }
        Ok(())
    }

    /// Force density `p(ξ)`. At a crack depth the left limit is returned.
    pub fn force(&self, xi: f64) -> f64 {
        self.eval(xi).1
    }

    /// `j(ξ) = ∫₀^ξ p`.
    pub fn energy(&self, xi: f64) -> f64 {
        self.eval(xi).0
    }

    /// `(j(ξ), p(ξ))`.
    pub fn eval(&self, xi: f64) -> (f64, f64) {
        if !(xi > 0.0) || self.crack_depths.is_empty() {
            return (0.0, 0.0);
        }
        let mut j = 0.0;
        let mut top = 0.0;
        for ((&s, &k), &r) in self
            .crack_depths
            .iter()
            .zip(&self.layer_stiffness)
            .zip(&self.residual_forces)
        {
            if xi <= s {
                let t = xi - top;
                return (j + r * t + 0.5 * k * t * t, r + k * t);
            }
            let w = s - top;
            j += r * w + 0.5 * k * w * w;
            top = s;
        }
        (j + self.base_force * (xi - top), self.base_force)
    }

    /// Largest violation of `|p(ξ)| ≤ c0 + c1|ξ|` over the given samples (≤ 0 means none).
    pub fn growth_violation(&self, samples: impl IntoIterator<Item = f64>) -> f64 {
        samples
            .into_iter()
            .map(|xi| self.force(xi).abs() - (self.growth_c0 + self.growth_c1 * xi.abs()))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
