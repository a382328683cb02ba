use crate::error::{Error, Result};

/// Caps on the exponential scans. Every brute-force routine checks its cost
/// against one of these before starting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest edge set `cycles_within` will expand.
    pub max_cycle_edges: usize,
    /// Largest number of subsets an exhaustive scan may visit.
    pub max_subsets: u64,
    /// Largest `2^m * m^2` budget for exhaustive rank-axiom checks.
    pub max_axiom_checks: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cycle_edges: 24,
            max_subsets: 1 << 24,
            max_axiom_checks: 1 << 26,
        }
    }
}

impl Limits {
    /// Unbounded cycle expansion; used internally once a graph has already
    /// been admitted under a cap.
    pub(crate) fn unbounded_cycles() -> Self {
        Limits {
            max_cycle_edges: usize::MAX,
            ..Limits::default()
        }
    }

    pub fn check_cycle_edges(&self, edges: usize) -> Result<()> {
        if edges > self.max_cycle_edges {
            return Err(Error::Resource {
                what: "cycle enumeration",
                needed: edges as u128,
                cap: self.max_cycle_edges as u128,
            });
        }
        Ok(())
    }

    /// Cost of visiting every subset of an `m`-element ground set, times
    /// `multiplier` passes.
    pub fn check_subsets(&self, what: &'static str, m: usize, multiplier: u64) -> Result<()> {
        let needed = pow2(m).saturating_mul(multiplier as u128);
        if needed > self.max_subsets as u128 {
            return Err(Error::Resource {
                what,
                needed,
                cap: self.max_subsets as u128,
            });
        }
        Ok(())
    }

    pub fn check_axioms(&self, m: usize) -> Result<()> {
        let needed = pow2(m).saturating_mul((m * m) as u128);
        if needed > self.max_axiom_checks as u128 {
            return Err(Error::Resource {
                what: "exhaustive rank-axiom check",
                needed,
                cap: self.max_axiom_checks as u128,
            });
        }
        Ok(())
    }
}

fn pow2(m: usize) -> u128 {
    if m >= 127 {
        u128::MAX
    } else {
        1u128 << m
    }
}
