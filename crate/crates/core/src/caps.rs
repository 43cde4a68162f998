//! Enumeration caps.

use crate::bisection::{DEFAULT_BISECTION_ARROW_CAP, DEFAULT_FULL_GROUP_CAP};

/// Environment variable overriding [`Caps::full_group`].
pub const CAP_ENV: &str = "FULLGROUP_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `|F(G)|` that will be enumerated.
    pub full_group: usize,
    /// Largest `|G|` for exhaustive enumeration of all bisections.
    pub bisection_arrows: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { full_group: DEFAULT_FULL_GROUP_CAP, bisection_arrows: DEFAULT_BISECTION_ARROW_CAP }
    }
}

impl Caps {
    /// Defaults, with `full_group` taken from `FULLGROUP_CAP` when it is set
    /// to a positive integer.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(cap) = std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&c| c > 0) {
            caps.full_group = cap;
        }
        caps
    }
}
