//! Block maps: shifts, symbol and partial-track permutations, conditioned
//! permutations, rule comparison, and the action on periodic points.

mod builders;
mod doc;
mod fix;
mod map;

pub use builders::{conditioned_perm, partial_shift, shift, symbol_perm, track_swap, Condition, Cylinder};
pub use doc::{BlockMapDoc, BuilderDoc, ConditionDoc, RuleEntry, TableDoc};
pub use fix::{periodic_action, permutation_parity, square_root_obstruction, PermutationOnFix};
pub use map::{certify_inverse, exact_commutes, maps_equal, BlockMap, LocalRule, Verdict};
