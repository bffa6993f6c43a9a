//! Pattern avoidance in permutations on partially ordered sets.
//!
//! A permutation of a poset is an ordered listing of its elements; it
//! contains a pattern (a permutation of a smaller poset) when some
//! increasing position tuple realizes the same pairwise
//! less/greater/incomparable relations, and avoids it otherwise. The
//! 21-avoiders are exactly the linear extensions, so avoider counting
//! generalizes extension counting.
//!
//! What lives where:
//!
//! - [`poset`]: bit-row posets, Boolean lattices, duals, induced subposets,
//!   isomorphism, and exhaustive generation of all non-isomorphic posets up
//!   to seven elements.
//! - [`pattern`]: the pattern notations (`132` chain form, `{1}{1,2}{2}`
//!   set form), occurrence search, and the reverse/complement symmetries.
//! - [`counting`]: avoider counts by pruned backtracking or naive
//!   filtering, linear extensions by dynamic programming over order ideals,
//!   the left/right reorientation bound, and the Boolean-lattice bounds
//!   with their V-shaped witness family.
//! - [`lrme`]: left-to-right minimal elements, admissible LRME sets, the
//!   residual ω-labeling, and the f/g algorithms injecting prefix-minimal
//!   legal fillings into prefix-maximal ones.
//! - [`verify`]: named witness posets, the 132-vs-123 check, the
//!   conjectured split-pattern inequality, exhaustive scans, Wilf-class
//!   tables, and the left-to-right-minima probe.
//!
//! ```
//! use posetperm::counting::{av_count, CountMode};
//! use posetperm::{Pattern, Poset};
//!
//! let lattice = Poset::boolean_lattice(2, true).unwrap();
//! let pattern = Pattern::parse("{1}{1,2}{2}").unwrap();
//! let avoiders = av_count(&lattice, &pattern, CountMode::Pruned);
//! assert_eq!(avoiders.to_string(), "16");
//! ```

pub mod counting;
pub mod error;
pub mod lrme;
pub mod pattern;
pub mod poset;
pub mod verify;

pub use counting::{Count, CountMode};
pub use error::{Error, Result};
pub use pattern::{Pattern, PosetPermutation};
pub use poset::{Poset, Rel};
