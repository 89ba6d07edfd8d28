//! Physical constants in SI units.

use serde::{Deserialize, Serialize};

/// Gravitational constant, m³ kg⁻¹ s⁻².
pub const G: f64 = 6.674e-11;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.0546e-34;
/// Speed of light, m s⁻¹.
pub const C: f64 = 299_792_458.0;

/// Overridable constant bundle. [`Constants::natural`] sets all three to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub g: f64,
    pub hbar: f64,
    pub c: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        g: G,
        hbar: HBAR,
        c: C,
    };

    pub fn natural() -> Self {
        Self {
            g: 1.0,
            hbar: 1.0,
            c: 1.0,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::SI
    }
}
