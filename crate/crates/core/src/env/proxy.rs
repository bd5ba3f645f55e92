//! Log-linear neutronics proxy anchored at the nominal core.
//!
//! Each quantity is `anchor * exp(beta . (z - z_nominal))` over the
//! unit-cube image `z` of the design. The shutdown margin is modelled
//! through its magnitude and negated afterwards. The peak heat flux is the
//! closed-form average flux scaled by a log-linear local peaking, clamped so
//! that it never drops below the average.

use serde::{Deserialize, Serialize};

use super::qoi::Neutronics;
use super::relations::{self, HEAT_FLUX_CONSTANT, THERMAL_POWER_MW, URANIUM_COEFFICIENT};
use crate::design::{DesignVector, DIM};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLinearModel {
    /// Value at the reference design.
    pub anchor: f64,
    /// Sensitivities in design field order.
    pub beta: [f64; DIM],
}

impl LogLinearModel {
    pub fn eval(&self, dz: &[f64; DIM]) -> f64 {
        let s: f64 = self.beta.iter().zip(dz).map(|(b, z)| b * z).sum();
        self.anchor * libm::exp(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxyCoefficients {
    pub lifetime: LogLinearModel,
    pub sdm_magnitude: LogLinearModel,
    pub f_dh: LogLinearModel,
    /// Peak heat flux at the reference design; scaled by the average-flux
    /// ratio and `peaking.beta`. `peaking.anchor` is unused.
    pub q_max: LogLinearModel,
}

impl ProxyCoefficients {
    /// Bounded least-squares fit over the nine reported non-nominal designs
    /// (see `tools/fit_proxy.py`).
    pub const FITTED: ProxyCoefficients = ProxyCoefficients {
        lifetime: LogLinearModel {
            anchor: 6.99,
            beta: [1.516362, -0.090701, 0.268689, 0.662109, 0.0, 2.032880, -0.630399],
        },
        sdm_magnitude: LogLinearModel {
            anchor: 6725.0,
            beta: [-0.159392, 0.040630, -0.261045, -0.555001, -0.406071, -0.349995, -0.446797],
        },
        f_dh: LogLinearModel {
            anchor: 1.469,
            beta: [0.087536, -0.021061, -0.074765, 0.288273, -0.091791, 0.141805, 0.240005],
        },
        q_max: LogLinearModel {
            anchor: 0.0188,
            beta: [-0.109978, 0.000819, 0.088374, 0.0, -0.110778, 0.163840, -0.108965],
        },
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxyModelConfig {
    pub heat_flux_constant: f64,
    pub uranium_coefficient: f64,
    pub thermal_power: f64,
    pub reference_design: DesignVector,
    /// `None` means uncalibrated; evaluation is refused.
    #[serde(default)]
    pub coefficients: Option<ProxyCoefficients>,
}

impl ProxyModelConfig {
    pub fn uncalibrated() -> Self {
        ProxyModelConfig {
            coefficients: None,
            ..Self::default()
        }
    }

    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("heat_flux_constant", self.heat_flux_constant),
            ("uranium_coefficient", self.uranium_coefficient),
            ("thermal_power", self.thermal_power),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(alloc::format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

impl Default for ProxyModelConfig {
    fn default() -> Self {
        ProxyModelConfig {
            heat_flux_constant: HEAT_FLUX_CONSTANT,
            uranium_coefficient: URANIUM_COEFFICIENT,
            thermal_power: THERMAL_POWER_MW,
            reference_design: DesignVector::NOMINAL,
            coefficients: Some(ProxyCoefficients::FITTED),
        }
    }
}

/// Neutronics quantities of a design from the log-linear proxy.
pub fn proxy_eval(d: &DesignVector, cfg: &ProxyModelConfig) -> Result<Neutronics> {
    let c = cfg.coefficients.as_ref().ok_or(Error::Uncalibrated)?;
    cfg.check()?;
    let z = d.to_unit_cube();
    let z0 = cfg.reference_design.to_unit_cube();
    let mut dz = [0.0; DIM];
    for k in 0..DIM {
        dz[k] = z[k] - z0[k];
    }
    let q_avg = relations::avg_heat_flux(d.x_cr, d.x_fh, cfg.heat_flux_constant)?;
    let q_avg_ref = relations::avg_heat_flux(
        cfg.reference_design.x_cr,
        cfg.reference_design.x_fh,
        cfg.heat_flux_constant,
    )?;
    let q_max = (c.q_max.eval(&dz) * (q_avg / q_avg_ref)).max(q_avg);
    Ok(Neutronics {
        lifetime: c.lifetime.eval(&dz),
        sdm: -c.sdm_magnitude.eval(&dz),
        f_dh: c.f_dh.eval(&dz),
        q_max,
        itc: None,
        extrapolated: false,
    })
}
