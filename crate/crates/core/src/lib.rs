//! Additive track categories at desk scale.
//!
//! * [`nilgroup`]: free groups and free class-2 nilpotent groups.
//! * [`linalg`]: exact integer linear algebra.
//! * [`catcore`]: finite categories and natural systems.
//! * [`cohomology`]: cochain complexes and cohomology groups.
//! * [`trackcat`]: track categories and linear track extensions.
//! * [`gamma`]: weak nil₂ cogroups and canonical interchange structures.

pub mod catcore;
pub mod cohomology;
pub mod gamma;
pub mod linalg;
pub mod nilgroup;
pub mod report;
pub mod trackcat;
