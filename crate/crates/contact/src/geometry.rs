use serde::{Deserialize, Serialize};

use crate::error::{ContactError, Result};

/// Rectangular beam `[0, length] × [0, thickness]`, all lengths in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Geometry {
    pub length: f64,
    pub thickness: f64,
    /// Largest admissible cell side.
    pub h_max: f64,
    /// Upper-surface constant `S` (mm²) scaling the traction.
    pub upper_surface: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            length: 210.0,
            thickness: 10.0,
            h_max: 1.75,
            upper_surface: 1000.0,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("length", self.length),
            ("thickness", self.thickness),
            ("h_max", self.h_max),
            ("upper_surface", self.upper_surface),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ContactError::Geometry(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.h_max > self.thickness {
            return Err(ContactError::Geometry(format!(
                "h_max ({}) exceeds the thickness ({})",
                self.h_max, self.thickness
            )));
        }
        Ok(())
    }

    /// Cells along x and y: `⌈length / h_max⌉ × ⌈thickness / h_max⌉`.
    pub fn cells(&self) -> (usize, usize) {
        (
            (self.length / self.h_max).ceil() as usize,
            (self.thickness / self.h_max).ceil() as usize,
        )
    }
}

/// Isotropic linear elastic material under plane strain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Material {
    /// Young's modulus (MPa).
    pub young: f64,
    /// Poisson ratio.
    pub poisson: f64,
}

impl Default for Material {
    fn default() -> Self {
        Self {
            young: 9.646e7,
            poisson: 0.4,
        }
    }
}

impl Material {
    pub fn validate(&self) -> Result<()> {
        if !(self.young > 0.0) || !self.young.is_finite() {
            return Err(ContactError::Material(format!(
                "Young's modulus must be positive, got {}",
                self.young
            )));
        }
        if !(self.poisson >= 0.0 && self.poisson < 0.5) {
            return Err(ContactError::Material(format!(
                "Poisson ratio must lie in [0, 0.5), got {}",
                self.poisson
            )));
        }
        Ok(())
    }

    /// First Lamé parameter `Eκ / ((1 + κ)(1 − 2κ))`.
    pub fn lambda(&self) -> f64 {
        let k = self.poisson;
        self.young * k / ((1.0 + k) * (1.0 - 2.0 * k))
    }

    /// Shear modulus `E / (2(1 + κ))`.
    pub fn mu(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.poisson))
    }

    /// Stress `σ = λ tr(ε) I + E/(1+κ) ε` in Voigt form
    /// `[σ11, σ22, σ12]` from `[ε11, ε22, 2ε12]`.
    pub fn voigt(&self) -> [[f64; 3]; 3] {
        let l = self.lambda();
        let two_mu = self.young / (1.0 + self.poisson);
        [
            [l + two_mu, l, 0.0],
            [l, l + two_mu, 0.0],
            [0.0, 0.0, 0.5 * two_mu],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let g = Geometry::default();
        g.validate().unwrap();
        assert_eq!(g.cells(), (120, 6));
        Material::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_geometry() {
        let g = Geometry {
            h_max: 11.0,
            ..Default::default()
        };
        assert!(g.validate().is_err());
        let g = Geometry {
            length: -1.0,
            ..Default::default()
        };
        assert!(g.validate().is_err());
        let g = Geometry {
            thickness: f64::NAN,
            ..Default::default()
        };
        assert!(g.validate().is_err());
    }

    #[test]
    fn rejects_bad_material() {
        for poisson in [0.5, -0.1] {
            let m = Material {
                poisson,
                ..Default::default()
            };
            assert!(m.validate().is_err());
        }
    }

    #[test]
    fn voigt_matrix_reduces_to_lame_form() {
        let m = Material {
            young: 1.0,
            poisson: 0.25,
        };
        let d = m.voigt();
        let (l, mu) = (m.lambda(), m.mu());
        assert!((d[0][0] - (l + 2.0 * mu)).abs() < 1e-15);
        assert!((d[0][1] - l).abs() < 1e-15);
        assert!((d[2][2] - mu).abs() < 1e-15);
    }
}
