use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Category {
    /// Equal to the lowest energy of the case.
    Best,
    /// Strictly between `L_best` and `0.9 L_best + 0.01`.
    NearBest,
    Off,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Self::Best => "Best",
            Self::NearBest => "NearBest",
            Self::Off => "Off",
        }
    }
}

/// Relative tolerance for "equal to `L_best`", scaled by `max(1, |L_best|)`.
pub const BEST_TOL: f64 = 1e-12;

/// Category of `energy` given the case best. Non-finite energies are `Off`.
pub fn classify(energy: f64, best: f64) -> Category {
    if !energy.is_finite() {
        return Category::Off;
    }
    if (energy - best).abs() <= BEST_TOL * best.abs().max(1.0) {
        return Category::Best;
    }
    let bound = 0.9 * best + 0.01;
    let (lo, hi) = (bound.min(best), bound.max(best));
    if energy > lo && energy < hi {
        Category::NearBest
    } else {
        Category::Off
    }
}

/// Categories for all energies of one (law, load) case.
pub fn categorize(energies: &[f64]) -> Result<(f64, Vec<Category>)> {
    if energies.is_empty() {
        return Err(BenchError::EmptyCase);
    }
    let best = energies
        .iter()
        .copied()
        .filter(|e| e.is_finite())
        .fold(f64::INFINITY, f64::min);
    Ok((best, energies.iter().map(|&e| classify(e, best)).collect()))
}
