//! Tubes around zero components, and the numerical checks that compare a
//! global graded Chern character number with its localized pieces.

mod check;
pub mod fiber;
pub mod fields;
mod tubes;
pub mod verify;

pub use check::CheckResult;
pub use fiber::{line_bundle_normal_euler, localized_pairing, polar_disk_rule};
pub use fields::{ConstantFrame, LineSection, RotationField};
pub use tubes::{tube_masks, Locus, RegionMasks, Tubes, ZeroComponent};
pub use verify::{sweep, Problem, Sweep};
