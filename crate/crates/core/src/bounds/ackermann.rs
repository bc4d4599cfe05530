use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::expr::{AckExpr, DEFAULT_BIT_CAP};

/// Exact `A(m, n)` if it fits in `cap` bits; closed forms for `m ≤ 4`,
/// unfolding of `A(m, n) = A(m−1, A(m, n−1))` above that.
pub fn ack_exact(m: u32, n: &BigInt, cap: u64) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let v = match m {
        0 => n + 1,
        1 => n + 2,
        2 => n * 2 + 3,
        3 => {
            let e = n.to_u64()?.checked_add(3)?;
            if e > cap {
                return None;
            }
            (BigInt::one() << e) - 3u32
        }
        4 => {
            // tower of k+3 twos, minus 3
            let k = n.to_u64()?;
            if k > 8 {
                return None;
            }
            let mut t = BigInt::one();
            for _ in 0..k + 3 {
                let e = t.to_u64().filter(|&e| e <= cap)?;
                t = BigInt::one() << e;
            }
            t - 3u32
        }
        _ => {
            let mut v = ack_exact(m - 1, &BigInt::one(), cap)?;
            let mut i = BigInt::from(0);
            while &i < n {
                v = ack_exact(m - 1, &v, cap)?;
                i += 1;
            }
            v
        }
    };
    (v.bits() <= cap).then_some(v)
}

/// `A(m, n)` as an expression: a constant when small, symbolic otherwise.
pub fn ackermann(m: u32, n: &BigInt) -> AckExpr {
    match ack_exact(m, n, DEFAULT_BIT_CAP) {
        Some(v) => AckExpr::Const(v),
        None => AckExpr::ack(m, AckExpr::Const(n.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let a = |m, n: u32| ack_exact(m, &BigInt::from(n), 1 << 17);
        assert_eq!(a(0, 5), Some(BigInt::from(6)));
        assert_eq!(a(3, 0), Some(BigInt::from(5)));
        assert_eq!(a(4, 0), Some(BigInt::from(13)));
        assert_eq!(a(4, 1), Some(BigInt::from(65533)));
        assert_eq!(a(5, 0), Some(BigInt::from(65533)));
        assert_eq!(a(4, 2).map(|v| v.bits()), Some(65536));
        assert_eq!(a(5, 1), None);
    }

    #[test]
    fn symbolic_when_large() {
        assert_eq!(ackermann(9, &BigInt::from(2)).to_string(), "(ack 9 2)");
        assert_eq!(ackermann(2, &BigInt::from(2)).to_string(), "7");
    }
}
