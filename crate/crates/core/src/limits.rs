//! Enumeration caps. Strategy spaces, valuation spaces and deviation grids
//! all grow exponentially, so every enumerating operation checks its size
//! against a cap first and fails loudly instead of hanging.

/// Caps for the enumerating operations. `Limits::default()` is deliberate
/// desk scale; callers that mean it can raise individual fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Max `|S_i|` for a single player's strategy space.
    pub strategies_per_player: u64,
    /// Max `|S|` for the joint strategy space.
    pub strategy_combinations: u64,
    /// Max valuations enumerated by a tautology check.
    pub tautology_valuations: u64,
    /// Max candidate distributions scanned per deviation grid, and max grid
    /// profiles enumerated by an equilibrium search.
    pub deviation_candidates: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            strategies_per_player: 1_000_000,
            strategy_combinations: 10_000_000,
            tautology_valuations: 10_000_000,
            deviation_candidates: 10_000_000,
        }
    }
}

impl Limits {
    pub fn check(
        &self,
        what: &'static str,
        needed: u128,
        cap: u64,
        unit: &'static str,
    ) -> crate::error::Result<()> {
        if needed > u128::from(cap) {
            return Err(crate::error::Error::CapExceeded {
                what,
                needed,
                cap,
                unit,
            });
        }
        Ok(())
    }
}
