//! Size caps for the combinatorial parts (strategy enumeration, budget
//! distributions, brute-force solving, lasso enumeration).

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "NATUREGAMES_GUARD";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Candidate strategies produced by one enumeration.
    pub strategies: u128,
    /// Distribution vertices of one budget game.
    pub distributions: u128,
    /// Positional strategy pairs tried by the brute-force solver.
    pub brute_force: u128,
    /// Partial paths explored by lasso enumeration and finite counting.
    pub paths: u128,
    /// Vertices of a product or reduced game.
    pub states: u128,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            strategies: 200_000,
            distributions: 100_000,
            brute_force: 1 << 20,
            paths: 2_000_000,
            states: 2_000_000,
        }
    }
}

impl Guards {
    /// Defaults, scaled by `NATUREGAMES_GUARD` when set. The variable is either
    /// a single multiplier (`4`) or a list of `name=cap` overrides
    /// (`strategies=1000000,paths=50000`).
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(s) => Guards::default().with_overrides(&s),
            Err(_) => Ok(Guards::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(factor) = spec.parse::<u128>() {
            self.strategies = self.strategies.saturating_mul(factor);
            self.distributions = self.distributions.saturating_mul(factor);
            self.brute_force = self.brute_force.saturating_mul(factor);
            self.paths = self.paths.saturating_mul(factor);
            self.states = self.states.saturating_mul(factor);
            return Ok(self);
        }
        for item in spec.split(',') {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("bad {ENV_VAR} entry `{item}`")))?;
            let value: u128 = value
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad {ENV_VAR} value in `{item}`")))?;
            match name.trim() {
                "strategies" => self.strategies = value,
                "distributions" => self.distributions = value,
                "brute_force" => self.brute_force = value,
                "paths" => self.paths = value,
                "states" => self.states = value,
                other => return Err(Error::Format(format!("unknown {ENV_VAR} key `{other}`"))),
            }
        }
        Ok(self)
    }
}

pub(crate) fn check(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::Guard { what, size, cap })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let g = Guards::default().with_overrides("paths=7, states=9").unwrap();
        assert_eq!(g.paths, 7);
        assert_eq!(g.states, 9);
        let g = Guards::default().with_overrides("2").unwrap();
        assert_eq!(g.strategies, 2 * Guards::default().strategies);
        assert!(Guards::default().with_overrides("bogus=1").is_err());
        assert!(Guards::default().with_overrides("x").is_err());
    }

    #[test]
    fn check_trips_above_cap() {
        assert!(check("x", 3, 3).is_ok());
        assert!(check("x", 4, 3).unwrap_err().is_guard());
    }
}
