//! Exact-integer checks of the recurrences used to bound the number of
//! iterations. `u_k` is tracked through an integer lower bound `U_k ≤ u_k`,
//! `D_k` through its exact value or an upper bound on `log2 D_k`, so every
//! reported pass is a proof of the real-valued inequality.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::expr::{cbrt_ceil, cbrt_floor, decimal, log2_ceil, AckExpr};

/// Fixed-point scale used for `∛x` and `log2 x`.
const SCALE: u64 = 64;

/// Bit budget for the tracked lower bound `U_k`.
pub const RECURRENCE_BIT_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceRow {
    pub k: u64,
    pub h: u64,
    /// `log2 U_k`, rounded down.
    #[serde(with = "decimal")]
    pub u_log2_floor: BigInt,
    #[serde(with = "decimal")]
    pub d_log2_upper: BigInt,
    pub h_ok: bool,
    pub d_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub rows: Vec<RecurrenceRow>,
    /// Steps requested but not checked because `U_k` outgrew the bit cap.
    pub truncated_at: Option<u64>,
    /// `(x, holds)` for `2^(∛x(2+log2 x)) ≤ 2^(x+2) − 3`.
    pub x_checks: Vec<(u64, bool)>,
}

impl RecurrenceReport {
    pub fn prefix_holds(&self) -> bool {
        self.rows.iter().all(|r| r.h_ok && r.d_ok)
    }

    pub fn x_holds(&self) -> bool {
        self.x_checks.iter().all(|&(_, ok)| ok)
    }

    pub fn all_hold(&self) -> bool {
        self.prefix_holds() && self.x_holds()
    }
}

/// `⌊N·∛x⌋`.
fn scaled_cbrt_floor(x: &BigInt) -> BigInt {
    cbrt_floor(&(x * BigInt::from(SCALE.pow(3))))
}

/// `⌊N·log2 x⌋` for `x ≥ 1`.
fn scaled_log2_floor(x: &BigInt) -> u64 {
    num_traits::pow(x.clone(), SCALE as usize).bits() - 1
}

/// `U_k`: exact for `k = 1`, afterwards a power of two known by its exponent.
enum Lower {
    Exact(BigInt),
    Pow2(BigInt),
}

impl Lower {
    /// `⌊log2 U⌋`.
    fn log2_floor(&self) -> BigInt {
        match self {
            Lower::Exact(u) => BigInt::from(u.bits() - 1),
            Lower::Pow2(l) => l.clone(),
        }
    }

    fn ge(&self, d: &BigInt) -> bool {
        match self {
            Lower::Exact(u) => d <= u,
            Lower::Pow2(l) => BigInt::from(d.bits()) <= *l,
        }
    }

    /// Lower bound on `log2 u_{k+1} = ∛u_k (2 + log2 u_k)`, if `U` is small
    /// enough to take its cube root.
    fn next(&self) -> Option<BigInt> {
        match self {
            Lower::Exact(u) => {
                let a = scaled_cbrt_floor(u);
                let b = scaled_log2_floor(u);
                Some(a * (2 * SCALE + b) / (SCALE * SCALE))
            }
            Lower::Pow2(l) => {
                let e = u64::try_from(l).ok().filter(|&e| e <= RECURRENCE_BIT_CAP)?;
                let a = scaled_cbrt_floor(&(BigInt::one() << e));
                Some(a * (l + 2u32) / SCALE)
            }
        }
    }
}

/// Conservative check of `2^(∛x(2+log2 x)) ≤ 2^(x+2) − 3`: both `∛x` and
/// `log2 x` are replaced by fixed-point ceilings, then compared exactly.
pub fn x_inequality_holds(x: u64) -> bool {
    let xb = BigInt::from(x);
    let a = cbrt_ceil(&(&xb * BigInt::from(SCALE.pow(3))));
    let b = log2_ceil(&num_traits::pow(xb, SCALE as usize));
    // 2^(a(2N+b)/N²) ≤ 2^(x+2) − 3  ⇔  2^(a(2N+b)) ≤ (2^(x+2) − 3)^(N²)
    let Ok(lhs_exp) = u64::try_from(a * BigInt::from(2 * SCALE + b)) else { return false };
    let rhs = num_traits::pow((BigInt::one() << (x + 2)) - 3u32, (SCALE * SCALE) as usize);
    // rhs ≥ 2^lhs_exp  ⇔  bits(rhs) > lhs_exp
    rhs.bits() > lhs_exp
}

/// Tabulates `H_k`, `D_k`, `u_k` for `k = 1..=steps` and checks
/// `9·H_k ≤ log2 u_k` and `D_k ≤ u_k`.
pub fn proof_recurrence_check(h_f: u64, d_f: u64, m: u64, n: u64, steps: u64) -> RecurrenceReport {
    let mut rows = Vec::new();
    let mut truncated_at = None;

    let mut h = h_f.max(m);
    let d1 = BigInt::from(d_f);
    let mut d_exact = Some(d1.clone());
    let mut d_log2 = BigInt::from(log2_ceil(&d1.clone().max(BigInt::one())));
    let zero_d = d1.is_zero();
    let nine_h = AckExpr::pow(AckExpr::c(2), AckExpr::c(9 * h_f));
    let u1 = [BigInt::from(n), BigInt::from(9), nine_h.eval(RECURRENCE_BIT_CAP).unwrap_or_else(BigInt::zero), d1]
        .into_iter()
        .max()
        .unwrap();
    let mut u = Lower::Exact(u1);

    for k in 1..=steps {
        let u_log2 = u.log2_floor();
        let h_ok = BigInt::from(9 * h) <= u_log2;
        let d_ok = zero_d
            || match &d_exact {
                Some(d) => u.ge(d),
                None => d_log2 <= u_log2,
            };
        rows.push(RecurrenceRow { k, h, u_log2_floor: u_log2, d_log2_upper: d_log2.clone(), h_ok, d_ok });
        if k == steps {
            break;
        }

        // D_{k+1} = (4 D_k)^(C(2H_k+m, m) + 1)
        let e = binom(2 * h + m, m) + 1u32;
        d_log2 = &e * (&d_log2 + 2u32);
        d_exact = d_exact.and_then(|d| {
            let e = usize::try_from(&e).ok()?;
            let bits = (d.bits() + 2).checked_mul(e as u64)?;
            (bits <= RECURRENCE_BIT_CAP).then(|| num_traits::pow(d * 4u32, e))
        });
        h *= 2;
        match u.next() {
            Some(l) => u = Lower::Pow2(l),
            None => {
                truncated_at = Some(k + 1);
                break;
            }
        }
    }

    let x_checks = (9..=64).map(|x| (x, x_inequality_holds(x))).collect();
    RecurrenceReport { rows, truncated_at, x_checks }
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_inequality() {
        for x in 9..=64 {
            assert!(x_inequality_holds(x), "x = {x}");
        }
        // far outside the claimed range the inequality is false
        assert!(!x_inequality_holds(2));
    }

    #[test]
    fn small_prefix() {
        let r = proof_recurrence_check(1, 2, 1, 1, 2);
        assert_eq!(r.rows.len(), 2);
        assert!(r.all_hold());
        assert_eq!(r.rows[1].u_log2_floor, BigInt::from(88));
        assert_eq!(r.rows[1].h, 2);
    }

    #[test]
    fn empty_prefix() {
        let r = proof_recurrence_check(1, 2, 1, 1, 0);
        assert!(r.rows.is_empty());
        assert!(r.prefix_holds());
    }

    #[test]
    fn base_fails_below_m() {
        // H(F) < m: the base case 9·max(H, m) ≤ log2 u_1 breaks
        let r = proof_recurrence_check(0, 1, 1, 1, 1);
        assert!(!r.rows[0].h_ok);
    }

    #[test]
    fn truncates() {
        let r = proof_recurrence_check(1, 2, 1, 1, 6);
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.truncated_at, Some(4));
        assert!(r.rows[2].u_log2_floor > BigInt::from(1u64 << 34));
        assert!(r.prefix_holds());
    }
}
