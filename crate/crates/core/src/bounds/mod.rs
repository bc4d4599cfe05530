//! Bound calculus: Ackermann values, symbolic bound expressions and the
//! recurrences behind them.

mod ackermann;
mod expr;
mod formulas;
mod recurrence;

pub use ackermann::{ack_exact, ackermann};
pub use expr::{cbrt_ceil, cbrt_floor, log2_ceil, AckExpr, ExprParseError, DEFAULT_BIT_CAP};
pub use formulas::{
    degree_exponent, degree_growth_step, lemma_q, lifting_bounds, p_bound, q_of, structural_bounds, t_bound_closed,
    BoundEntry, BoundReport, LiftingInput,
};
pub use recurrence::{proof_recurrence_check, x_inequality_holds, RecurrenceReport, RecurrenceRow, RECURRENCE_BIT_CAP};
pub(crate) use expr::decimal;
