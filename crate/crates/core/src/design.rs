//! Decision variables, their static and pitch-coupled bounds, and decoding
//! from the unit cube the optimizers search over.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of decision variables.
pub const DIM: usize = 7;

/// Clearance subtracted twice from the pin pitch before bounding the
/// moderator radius, cm.
pub const MODERATOR_OFFSET_CM: f64 = 0.095;

pub const COATING_ANGLE: (f64, f64) = (35.0, 180.0);
pub const B10_ENRICHMENT: (f64, f64) = (0.20, 0.95);
pub const FUEL_HEIGHT: (f64, f64) = (130.0, 190.0);
pub const PIN_PITCH: (f64, f64) = (1.94, 2.78);
pub const U235_ENRICHMENT: (f64, f64) = (0.17, 0.20);

/// Field names in declaration order, as they appear in files.
pub const FIELD_NAMES: [&str; DIM] = ["x_ca", "x_B10", "x_fh", "x_pp", "x_e", "x_cr", "x_mr"];

/// Units per field, same order as [`FIELD_NAMES`].
pub const FIELD_UNITS: [&str; DIM] = ["deg", "fraction", "cm", "cm", "fraction", "cm", "cm"];

/// One candidate core geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignVector {
    /// Control drum coating angle, degrees.
    pub x_ca: f64,
    /// Drum absorber B-10 enrichment, fraction.
    #[serde(rename = "x_B10")]
    pub x_b10: f64,
    /// Active fuel height, cm.
    pub x_fh: f64,
    /// Pin pitch, cm.
    pub x_pp: f64,
    /// U-235 enrichment, fraction.
    pub x_e: f64,
    /// Fuel compact radius, cm.
    pub x_cr: f64,
    /// Moderator radius, cm.
    pub x_mr: f64,
}

impl DesignVector {
    /// The reference core.
    pub const NOMINAL: DesignVector = DesignVector {
        x_ca: 90.0,
        x_b10: 0.95,
        x_fh: 160.0,
        x_pp: 2.3,
        x_e: 0.197,
        x_cr: 1.0,
        x_mr: 0.825,
    };

    pub fn from_array(v: [f64; DIM]) -> Self {
        DesignVector {
            x_ca: v[0],
            x_b10: v[1],
            x_fh: v[2],
            x_pp: v[3],
            x_e: v[4],
            x_cr: v[5],
            x_mr: v[6],
        }
    }

    pub fn to_array(&self) -> [f64; DIM] {
        [self.x_ca, self.x_b10, self.x_fh, self.x_pp, self.x_e, self.x_cr, self.x_mr]
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        let arr: [f64; DIM] = v.try_into().map_err(|_| Error::Dimension {
            expected: DIM,
            got: v.len(),
        })?;
        Ok(Self::from_array(arr))
    }

    /// Checks every static and coupled bound, returning all violations.
    pub fn validate(&self) -> core::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let statics = [
            (Variable::CoatingAngle, self.x_ca, COATING_ANGLE),
            (Variable::B10Enrichment, self.x_b10, B10_ENRICHMENT),
            (Variable::FuelHeight, self.x_fh, FUEL_HEIGHT),
            (Variable::PinPitch, self.x_pp, PIN_PITCH),
            (Variable::U235Enrichment, self.x_e, U235_ENRICHMENT),
        ];
        for (var, value, (lo, hi)) in statics {
            check(&mut violations, var, value, lo, hi);
        }
        // Coupled bounds follow the pitch even when the pitch itself is out
        // of range, so every offending field is still named.
        let (cr, mr) = coupled_bounds(self.x_pp);
        check(&mut violations, Variable::CompactRadius, self.x_cr, cr.0, cr.1);
        check(&mut violations, Variable::ModeratorRadius, self.x_mr, mr.0, mr.1);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Decodes a point of the unit cube. The pitch is decoded first so the
    /// compact and moderator radii land inside their coupled intervals.
    pub fn from_unit_cube(u: &[f64]) -> Result<Self> {
        if u.len() != DIM {
            return Err(Error::Dimension {
                expected: DIM,
                got: u.len(),
            });
        }
        for (index, &value) in u.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Decode { index, value });
            }
        }
        let x_pp = lerp(PIN_PITCH, u[3]);
        let (cr, mr) = coupled_bounds(x_pp);
        Ok(DesignVector {
            x_ca: lerp(COATING_ANGLE, u[0]),
            x_b10: lerp(B10_ENRICHMENT, u[1]),
            x_fh: lerp(FUEL_HEIGHT, u[2]),
            x_pp,
            x_e: lerp(U235_ENRICHMENT, u[4]),
            x_cr: lerp(cr, u[5]),
            x_mr: lerp(mr, u[6]),
        })
    }

    /// Inverse of [`DesignVector::from_unit_cube`]; coordinates of designs
    /// outside the bounds fall outside `[0, 1]`.
    pub fn to_unit_cube(&self) -> [f64; DIM] {
        let (cr, mr) = coupled_bounds(self.x_pp);
        [
            unlerp(COATING_ANGLE, self.x_ca),
            unlerp(B10_ENRICHMENT, self.x_b10),
            unlerp(FUEL_HEIGHT, self.x_fh),
            unlerp(PIN_PITCH, self.x_pp),
            unlerp(U235_ENRICHMENT, self.x_e),
            unlerp(cr, self.x_cr),
            unlerp(mr, self.x_mr),
        ]
    }
}

impl Default for DesignVector {
    fn default() -> Self {
        Self::NOMINAL
    }
}

/// Compact- and moderator-radius intervals for a given pitch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledBounds {
    pub compact_radius: (f64, f64),
    pub moderator_radius: (f64, f64),
}

/// Resolves the pitch-dependent intervals, rejecting pitches outside their
/// own bounds.
pub fn resolve_bounds(x_pp: f64) -> Result<CoupledBounds> {
    if !(PIN_PITCH.0..=PIN_PITCH.1).contains(&x_pp) {
        return Err(Error::BoundDomain(x_pp));
    }
    let (compact_radius, moderator_radius) = coupled_bounds(x_pp);
    Ok(CoupledBounds {
        compact_radius,
        moderator_radius,
    })
}

fn coupled_bounds(x_pp: f64) -> ((f64, f64), (f64, f64)) {
    let free = x_pp - 2.0 * MODERATOR_OFFSET_CM;
    ((x_pp / 4.0, x_pp / 2.0), (free / 5.0, free / 2.0))
}

/// Static per-variable bounds plus the coupled rules for the radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignBounds {
    pub coating_angle: (f64, f64),
    pub b10_enrichment: (f64, f64),
    pub fuel_height: (f64, f64),
    pub pin_pitch: (f64, f64),
    pub u235_enrichment: (f64, f64),
}

impl DesignBounds {
    pub const TABLE: DesignBounds = DesignBounds {
        coating_angle: COATING_ANGLE,
        b10_enrichment: B10_ENRICHMENT,
        fuel_height: FUEL_HEIGHT,
        pin_pitch: PIN_PITCH,
        u235_enrichment: U235_ENRICHMENT,
    };

    /// Bounds of every variable at the given pitch, in field order.
    pub fn at_pitch(&self, x_pp: f64) -> Result<[(f64, f64); DIM]> {
        let c = resolve_bounds(x_pp)?;
        Ok([
            self.coating_angle,
            self.b10_enrichment,
            self.fuel_height,
            self.pin_pitch,
            self.u235_enrichment,
            c.compact_radius,
            c.moderator_radius,
        ])
    }
}

impl Default for DesignBounds {
    fn default() -> Self {
        Self::TABLE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    CoatingAngle,
    B10Enrichment,
    FuelHeight,
    PinPitch,
    U235Enrichment,
    CompactRadius,
    ModeratorRadius,
}

impl Variable {
    pub fn field_name(self) -> &'static str {
        FIELD_NAMES[self as usize]
    }
}

/// A single violated bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub variable: Variable,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = if self.value < self.lower { "<" } else { ">" };
        let limit = if self.value < self.lower {
            self.lower
        } else {
            self.upper
        };
        write!(
            f,
            "{} = {} {} {} (allowed [{}, {}])",
            self.variable.field_name(),
            self.value,
            side,
            limit,
            self.lower,
            self.upper
        )
    }
}

fn check(out: &mut Vec<Violation>, variable: Variable, value: f64, lower: f64, upper: f64) {
    // Rounded table values must sit on the bound, so allow a few ulps.
    let tol = 1e-12 * (1.0 + libm::fabs(lower).max(libm::fabs(upper)));
    if !(value >= lower - tol && value <= upper + tol) {
        out.push(Violation {
            variable,
            value,
            lower,
            upper,
        });
    }
}

fn lerp((lo, hi): (f64, f64), t: f64) -> f64 {
    lo + (hi - lo) * t
}

fn unlerp((lo, hi): (f64, f64), x: f64) -> f64 {
    (x - lo) / (hi - lo)
}
