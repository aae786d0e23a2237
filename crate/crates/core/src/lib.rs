//! Square-tiled surfaces (origamis): geometric invariants, the
//! Kontsevich–Zorich monodromy on zero-holonomy homology, and exact
//! certificates of Zariski density and arithmeticity.

pub mod census;
pub mod certificates;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod linalg;
pub mod lyapunov;
pub mod monodromy;
pub mod origami;
pub mod perm;
pub mod serde_int;

pub use error::{Error, Result};
pub use origami::{Origami, OrigamiInput, Stratum, VeechGenerator};
pub use perm::Permutation;
