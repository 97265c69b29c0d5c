//! Collapse geometry: horizon location, Hawking temperature and the
//! per-mode squeezing parameters.
//!
//! Natural units throughout (G = c = ħ = k_B = 1). Every entropy in this
//! crate depends on the black-hole mass `m` and the mode frequency `ω` only
//! through the dimensionless product `x = 4πmω`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `x` accepted by state-construction paths.
pub const DEFAULT_X_MIN: f64 = 1e-6;

const FOUR_PI: f64 = 4.0 * PI;

/// Field statistics of a mode channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }

    pub(crate) fn expect(self, expected: Statistics) -> Result<()> {
        if self == expected {
            Ok(())
        } else {
            Err(Error::StatisticsMismatch {
                expected: expected.as_str(),
                found: self.as_str(),
            })
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boson" => Ok(Statistics::Boson),
            "fermion" => Ok(Statistics::Fermion),
            other => Err(Error::invalid(format!("unknown statistics {other:?}"))),
        }
    }
}

/// Vaidya collapse parameters: the shell mass and the advanced time `v0`
/// at which the null shockwave comes in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlackHoleParams {
    mass: f64,
    v0: f64,
}

impl BlackHoleParams {
    pub fn new(mass: f64, v0: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::invalid(format!("mass must be finite and > 0, got {mass}")));
        }
        if !v0.is_finite() {
            return Err(Error::invalid(format!("v0 must be finite, got {v0}")));
        }
        Ok(Self { mass, v0 })
    }

    /// Black hole with the shockwave at `v0 = 0`.
    pub fn with_mass(mass: f64) -> Result<Self> {
        Self::new(mass, 0.0)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Last ingoing null ray that still escapes to future null infinity,
    /// `v_H = v0 - 4m`.
    pub fn horizon_formation(&self) -> f64 {
        self.v0 - 4.0 * self.mass
    }

    /// Hawking temperature `1 / (8πm)`.
    pub fn hawking_temperature(&self) -> f64 {
        1.0 / (8.0 * PI * self.mass)
    }

    /// Frequency corresponding to a dimensionless `x` for this mass.
    pub fn omega_for_x(&self, x: f64) -> f64 {
        x / (FOUR_PI * self.mass)
    }
}

/// A single frequency mode of a given statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeChannel {
    omega: f64,
    statistics: Statistics,
}

impl ModeChannel {
    pub fn new(omega: f64, statistics: Statistics) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid(format!("omega must be finite and > 0, got {omega}")));
        }
        Ok(Self { omega, statistics })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }
}

/// `x = 4πmω`.
pub fn dimensionless_x(p: &BlackHoleParams, c: &ModeChannel) -> f64 {
    FOUR_PI * p.mass * c.omega
}

/// Squeezing of one mode pair.
///
/// For bosons `tanh r = e^{-x}`, for fermions `tan r = e^{-x}`. The shared
/// value `e^{-x}` is kept as `boltzmann_weight` and is the single source both
/// relations are evaluated from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingParams {
    statistics: Statistics,
    r: f64,
    x: f64,
    boltzmann_weight: f64,
}

impl SqueezingParams {
    /// Squeezing for a given `x > 0`. No floor is applied here; closed-form
    /// entropies are valid for any positive `x`.
    pub fn from_x(statistics: Statistics, x: f64) -> Result<Self> {
        if !(x > 0.0) {
            return Err(Error::invalid(format!("x must be > 0, got {x}")));
        }
        let w = (-x).exp();
        let r = match statistics {
            // artanh(w) = ½ ln(1 + 2w / (1 - w)), with 1 - w = -expm1(-x)
            Statistics::Boson => {
                if x.is_infinite() {
                    0.0
                } else {
                    0.5 * (2.0 * w / -(-x).exp_m1()).ln_1p()
                }
            }
            Statistics::Fermion => w.atan(),
        };
        Ok(Self {
            statistics,
            r,
            x,
            boltzmann_weight: w,
        })
    }

    /// Squeezing for a mode pair, rejecting `x` below `x_min`.
    pub fn with_floor(statistics: Statistics, x: f64, x_min: f64) -> Result<Self> {
        if x < x_min {
            return Err(Error::SqueezingOverflow {
                x,
                reason: format!("x below the configured floor {x_min:e}"),
            });
        }
        Self::from_x(statistics, x)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// `r` for bosons, `r̃` for fermions.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// `e^{-x}`, equal to `tanh r` (boson) or `tan r̃` (fermion).
    pub fn boltzmann_weight(&self) -> f64 {
        self.boltzmann_weight
    }

    /// `ω / T_H = 8πmω = 2x`.
    pub fn omega_over_temperature(&self) -> f64 {
        2.0 * self.x
    }
}

/// Squeezing for `(m, ω)` with the default `x` floor.
pub fn squeezing_for(p: &BlackHoleParams, c: &ModeChannel) -> Result<SqueezingParams> {
    squeezing_for_with_floor(p, c, DEFAULT_X_MIN)
}

pub fn squeezing_for_with_floor(
    p: &BlackHoleParams,
    c: &ModeChannel,
    x_min: f64,
) -> Result<SqueezingParams> {
    SqueezingParams::with_floor(c.statistics, dimensionless_x(p, c), x_min)
}
