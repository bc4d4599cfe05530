//! Differential polynomial rings: derivatives, rankings, differentiation,
//! leaders and prolongation.

mod derivative;
mod ring;
mod system;

pub use derivative::{DerOp, Derivative};
pub use ring::{DiffPoly, DiffRing, LeaderData, OrderStats, Rank, Ranking};
pub use system::{AnySystem, DiffSystem};
