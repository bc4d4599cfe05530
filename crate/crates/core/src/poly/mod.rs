//! Exact polynomial arithmetic and Gröbner bases.

mod field;
mod groebner;
mod monomial;
mod order;
#[allow(clippy::module_inception)]
mod poly;
mod ratfunc;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{Field, FieldKind};
pub use groebner::{buchberger, fresh_slack, ideal_membership, normal_form, radical_membership, Caps, GroebnerBasis};
pub use monomial::{Monomial, VarId, VarNames, VarTable};
pub use order::{MonomialOrder, OrderKind};
pub use poly::{poly_arith, pseudo_divide, rational, ArithOp, Poly, PolyDisplay, PseudoDivision};
pub use ratfunc::{RatFunc, UniPoly};

/// Which resource limit a computation ran into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapKind {
    BasisSize,
    Terms,
    Time,
}

/// State of a computation at the moment it was aborted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapExceeded {
    pub kind: CapKind,
    pub basis_len: usize,
    pub pending_pairs: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("resource cap exceeded ({:?}) with {} basis elements and {} pending pairs after {:?}", .0.kind, .0.basis_len, .0.pending_pairs, .0.elapsed)]
    Capped(CapExceeded),
}
