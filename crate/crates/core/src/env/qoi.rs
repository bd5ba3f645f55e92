use serde::{Deserialize, Serialize};

use crate::constraints::Quantities;

/// Quantities of interest for one design.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QoIVector {
    /// Fuel lifetime, years.
    pub lifetime: f64,
    /// Shutdown margin, pcm (negative).
    pub sdm: f64,
    /// Rod-integrated peaking factor.
    pub f_dh: f64,
    pub q_max: f64,
    pub q_avg: f64,
    /// kg of uranium.
    pub uranium_mass: f64,
    /// kg of U-235.
    pub u235_mass: f64,
    /// MWd/kgU.
    pub burnup: f64,
    pub power_density: f64,
    /// Currency per MWh.
    pub lcoe: f64,
    /// Isothermal temperature coefficient, carried through from tabular data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub itc: Option<f64>,
    /// Tabular answer outside the convex hull of the samples.
    #[serde(default)]
    pub extrapolated: bool,
}

impl QoIVector {
    pub const NAMES: [&'static str; 10] = [
        "lifetime",
        "sdm",
        "f_dh",
        "q_max",
        "q_avg",
        "uranium_mass",
        "u235_mass",
        "burnup",
        "power_density",
        "lcoe",
    ];

    pub fn values(&self) -> [f64; 10] {
        [
            self.lifetime,
            self.sdm,
            self.f_dh,
            self.q_max,
            self.q_avg,
            self.uranium_mass,
            self.u235_mass,
            self.burnup,
            self.power_density,
            self.lcoe,
        ]
    }
}

impl Quantities for QoIVector {
    fn quantity(&self, name: &str) -> Option<f64> {
        if name == "itc" {
            return self.itc;
        }
        Self::NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values()[i])
    }
}

/// The four neutronics quantities a proxy or tabular model supplies.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Neutronics {
    pub lifetime: f64,
    pub sdm: f64,
    pub f_dh: f64,
    pub q_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub itc: Option<f64>,
    #[serde(default)]
    pub extrapolated: bool,
}
