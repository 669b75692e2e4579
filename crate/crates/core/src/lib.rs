//! Exact and asymptotic enumeration of locally restricted sequential
//! structures (generalized integer compositions).
//!
//! A class is described by a [`PartSpec`] (how many parts of each size
//! exist) and a [`LocalRule`] (which neighbouring parts may coexist). The
//! rule is materialized as a size-truncated [`ClassDigraph`] whose
//! start-to-finish walks are in bijection with the structures of the class.
//! On top of the digraph sit:
//!
//! - [`count`]: exact graded walk counting, occurrence distributions and
//!   moment profiles, all in unbounded-precision integers;
//! - [`runs`]: the run-replacement bijection that turns maximal runs of a
//!   fixed subcomposition into single "run parts", and exact maximum-run
//!   statistics built on it;
//! - [`asymptotics`]: growth-constant estimation, closed-form radii and the
//!   limit laws for run lengths and large-part counts.

pub mod asymptotics;
pub mod count;
pub mod digraph;
mod error;
pub mod parts;
pub mod runs;
pub mod series;

pub use count::{ExactDistribution, MomentRow};
pub use digraph::{ClassDigraph, LocalRule, Role, Vertex};
pub use error::{Error, Result};
pub use parts::{Letter, Part, PartSpec, Radius};
pub use runs::RunDescriptor;
pub use series::CoeffSeries;

/// Default cap on the number of structures a brute-force enumeration may
/// produce before giving up.
pub const DEFAULT_ENUM_CAP: usize = 1 << 22;
