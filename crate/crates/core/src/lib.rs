//! Complexes of groups over scwols and their covering theory, on finite
//! desk-scale instances: quotient complexes from group actions,
//! developments and universal covers, fundamental groups, induced maps on
//! fundamental groups and covers, the covering/overgroup bijection, and a
//! constructive conjugacy solver — everything cross-checked against
//! brute-force oracles.

pub mod action;
pub mod bij;
pub mod cog;
pub mod dev;
pub mod error;
pub mod fixtures;
pub mod fp;
pub mod functor;
pub mod perm;
pub mod report;
pub mod scwol;

pub use cog::{CogMorphism, ComplexOfGroups, MorphismToGroup};
pub use perm::{GroupHom, Perm, PermGroup};
pub use report::ValidationReport;
pub use scwol::{Scwol, ScwolMorphism};
