//! Revenue-maximizing envy-free prices for the unit-demand perfect matching
//! problem: `n` consumers, `n` items, one unit of each.
//!
//! The pipeline is [`matching::solve_assignment`] for a welfare-maximizing
//! allocation, [`model::reorder`] and [`model::build_gap_matrix`] to express it
//! as utility gaps, then either [`pricing::prices_efpm`] or
//! [`pricing::prices_bellman_ford`] for the prices. [`verify`] holds
//! independent checkers and small-instance oracles.

pub mod bench;
pub mod cli;
pub mod error;
pub mod instance;
pub mod matching;
pub mod model;
pub mod pricing;
pub mod solve;
pub mod verify;

pub use error::{Error, Result};
pub use matching::{brute_force_assignment, solve_assignment, MatchingResult};
pub use model::{build_gap_matrix, reorder, Allocation, ReorderedValuation, UtilityGapMatrix, ValuationMatrix};
pub use pricing::{prices_bellman_ford, prices_efpm, PriceVector, UtilityVector};
pub use solve::{solve, Method};
