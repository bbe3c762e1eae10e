//! Topological entropy from word counts, Markov matrices and lap numbers.

mod counting;
mod estimate;
mod laps;
mod linalg;
mod markov;

pub use counting::{adm_count, adm_counts, neg_count, neg_count_report, NegCount};
pub use estimate::{entropy_from_adm, entropy_from_neg, EntropyEstimate, Method};
pub use laps::{fixed_point_count, lap_count_exact, lap_count_with_budget, PIECE_BUDGET};
pub use linalg::{characteristic_polynomial, determinant, largest_real_root, perron_root};
pub use markov::{folding_orbits, markov_from_map, markov_from_orbit_map, FourStep, MarkovMatrix, MarkovReport};
