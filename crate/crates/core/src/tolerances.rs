//! Every numerical tolerance in one place, loadable from a config file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Length ties on cell walls, relative to max(1, ℓ).
    pub wall: f64,
    /// Wall tolerance for coordinates typed on the command line.
    pub cli_wall: f64,
    /// Agreement of optimized extrema with closed forms.
    pub optimizer: f64,
    /// Slack added to the systole when enumerating competitors.
    pub enumeration_slack: f64,
    /// Minimum convex weight for strict eutaxy.
    pub eutaxy_slack: f64,
    /// Closed-form vs holonomy lengths, relative to max(1, ℓ).
    pub oracle: f64,
    /// Reduction and invariance under the modular group.
    pub action: f64,
    /// Slack on the global systole bound.
    pub bound: f64,
    /// Finite-difference agreement: max(fd_abs, fd_rel·|∂|).
    pub fd_abs: f64,
    pub fd_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            wall: 1e-9,
            cli_wall: 1e-3,
            optimizer: 1e-7,
            enumeration_slack: 1e-6,
            eutaxy_slack: 1e-10,
            oracle: 1e-9,
            action: 1e-8,
            bound: 1e-9,
            fd_abs: 1e-6,
            fd_rel: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("wall", self.wall),
            ("cli_wall", self.cli_wall),
            ("optimizer", self.optimizer),
            ("enumeration_slack", self.enumeration_slack),
            ("eutaxy_slack", self.eutaxy_slack),
            ("oracle", self.oracle),
            ("action", self.action),
            ("bound", self.bound),
            ("fd_abs", self.fd_abs),
            ("fd_rel", self.fd_rel),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::InvalidConfig(format!("tolerance {name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
        let bad = Tolerances { wall: -1.0, ..Tolerances::default() };
        assert!(bad.validate().is_err());
        let bad = Tolerances { fd_rel: f64::NAN, ..Tolerances::default() };
        assert!(bad.validate().is_err());
    }
}
