//! Closed-form relations between geometry, inventory and heat flux. The
//! constants were recovered from the reported design tables.

use alloc::format;

use crate::error::{Error, Result};

/// Heat-flux aggregate `P / (N_flakes * N_compacts * 2 pi)`, paper units x cm^2.
pub const HEAT_FLUX_CONSTANT: f64 = 1.68576;
/// Uranium mass per `x_cr^2 * x_fh`, kg/cm^3.
pub const URANIUM_COEFFICIENT: f64 = 3.2816;
/// Thermal power, MW.
pub const THERMAL_POWER_MW: f64 = 2.0;
/// `power_density = POWER_DENSITY_FACTOR * q_avg / x_cr`.
pub const POWER_DENSITY_FACTOR: f64 = 200.0;
pub const DAYS_PER_YEAR: f64 = 365.25;

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v}")))
    }
}

/// Average heat flux at the fuel/heat-pipe interface.
pub fn avg_heat_flux(x_cr: f64, x_fh: f64, k: f64) -> Result<f64> {
    positive("x_cr", x_cr)?;
    positive("x_fh", x_fh)?;
    Ok(k / (x_cr * x_fh))
}

pub fn uranium_mass(x_cr: f64, x_fh: f64, c_u: f64) -> Result<f64> {
    positive("x_cr", x_cr)?;
    positive("x_fh", x_fh)?;
    Ok(c_u * x_cr * x_cr * x_fh)
}

pub fn u235_mass(uranium_mass: f64, x_e: f64) -> Result<f64> {
    positive("uranium mass", uranium_mass)?;
    if !(x_e > 0.0 && x_e < 1.0) {
        return Err(Error::Domain(format!("x_e = {x_e}")));
    }
    Ok(uranium_mass * x_e)
}

/// Discharge burnup, MWd/kgU.
pub fn burnup(lifetime: f64, uranium_mass: f64, thermal_power_mw: f64) -> Result<f64> {
    positive("lifetime", lifetime)?;
    positive("uranium mass", uranium_mass)?;
    Ok(thermal_power_mw * DAYS_PER_YEAR * lifetime / uranium_mass)
}

pub fn power_density(q_avg: f64, x_cr: f64) -> Result<f64> {
    positive("q_avg", q_avg)?;
    positive("x_cr", x_cr)?;
    Ok(POWER_DENSITY_FACTOR * q_avg / x_cr)
}
