//! The four photon-added Bell-type entangled coherent states.
//!
//! Each family is `N a†^m b†^n (|γ, s γ⟩ + σ |-γ, -s γ⟩)` with
//!
//! | family | `s` | `σ` |
//! |--------|-----|-----|
//! | Psi1   | +1  | +1  |
//! | Psi2   | +1  | -1  |
//! | Psi3   | -1  | +1  |
//! | Psi4   | -1  | -1  |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Psi1,
    Psi2,
    Psi3,
    Psi4,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Psi1, Family::Psi2, Family::Psi3, Family::Psi4];

    /// Relative sign of the mode-b amplitude (`|γ, sγ⟩`).
    pub fn b_sign(self) -> f64 {
        match self {
            Family::Psi1 | Family::Psi2 => 1.0,
            Family::Psi3 | Family::Psi4 => -1.0,
        }
    }

    /// Sign between the two branches of the superposition.
    pub fn superposition_sign(self) -> f64 {
        match self {
            Family::Psi1 | Family::Psi3 => 1.0,
            Family::Psi2 | Family::Psi4 => -1.0,
        }
    }

    /// The family whose mode-a reduced state is identical (Psi1 <-> Psi3,
    /// Psi2 <-> Psi4).
    pub fn partner(self) -> Family {
        match self {
            Family::Psi1 => Family::Psi3,
            Family::Psi2 => Family::Psi4,
            Family::Psi3 => Family::Psi1,
            Family::Psi4 => Family::Psi2,
        }
    }

    /// Odd superpositions vanish at `γ = 0` before photon addition.
    pub fn is_odd(self) -> bool {
        self.superposition_sign() < 0.0
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Psi1 => "psi1",
            Family::Psi2 => "psi2",
            Family::Psi3 => "psi3",
            Family::Psi4 => "psi4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "psi1" | "1" => Ok(Family::Psi1),
            "psi2" | "2" => Ok(Family::Psi2),
            "psi3" | "3" => Ok(Family::Psi3),
            "psi4" | "4" => Ok(Family::Psi4),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

/// A family member with coherent amplitude `gamma` and `m` (`n`) photons
/// added to mode a (b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    pub family: Family,
    pub gamma: C64,
    pub m: u32,
    pub n: u32,
}

impl StateSpec {
    pub fn new(family: Family, gamma: impl Into<C64>, m: u32, n: u32) -> Result<Self> {
        let spec = StateSpec { family, gamma: gamma.into(), m, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.re.is_finite() && self.gamma.im.is_finite()) {
            return Err(Error::InvalidArgument("gamma must be finite".into()));
        }
        if self.family.is_odd() && self.gamma.norm() == 0.0 {
            return Err(Error::DegenerateState { norm_sq: 0.0 });
        }
        Ok(())
    }

    /// The two coherent-amplitude pairs and their superposition weights.
    pub(crate) fn branches(&self) -> [(C64, C64, f64); 2] {
        let g = self.gamma;
        let s = self.family.b_sign();
        [(g, g * s, 1.0), (-g, -g * s, self.family.superposition_sign())]
    }

    /// Same state with the roles of the two modes exchanged (`m <-> n`).
    /// Mode-b quantities of `self` are mode-a quantities of the swap.
    pub fn swap_modes(&self) -> StateSpec {
        StateSpec { m: self.n, n: self.m, gamma: self.gamma * self.family.b_sign(), ..*self }
    }
}
