//! Symbolic bound expressions over the Ackermann function.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ackermann::ack_exact;

/// Default number of bits an exact value may occupy before it stays symbolic.
pub const DEFAULT_BIT_CAP: u64 = 4096;

/// A bound expression. Evaluation is exact or refused, never approximate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AckExpr {
    Const(#[serde(with = "decimal")] BigInt),
    Ack(u32, Box<AckExpr>),
    Max(Vec<AckExpr>),
    Pow(Box<AckExpr>, Box<AckExpr>),
    Log2Ceil(Box<AckExpr>),
    Binom(Box<AckExpr>, Box<AckExpr>),
    Add(Box<AckExpr>, Box<AckExpr>),
    Mul(Box<AckExpr>, Box<AckExpr>),
    Sub(Box<AckExpr>, Box<AckExpr>),
}

pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

impl From<u64> for AckExpr {
    fn from(v: u64) -> Self {
        AckExpr::Const(BigInt::from(v))
    }
}

impl From<BigInt> for AckExpr {
    fn from(v: BigInt) -> Self {
        AckExpr::Const(v)
    }
}

fn fits(v: &BigInt, cap: u64) -> Option<BigInt> {
    (v.bits() <= cap).then(|| v.clone())
}

impl AckExpr {
    pub fn c(v: u64) -> Self {
        v.into()
    }

    pub fn ack(m: u32, arg: AckExpr) -> Self {
        AckExpr::Ack(m, Box::new(arg))
    }

    pub fn max(items: Vec<AckExpr>) -> Self {
        AckExpr::Max(items)
    }

    pub fn pow(a: AckExpr, b: AckExpr) -> Self {
        AckExpr::Pow(Box::new(a), Box::new(b))
    }

    pub fn log2_ceil(a: AckExpr) -> Self {
        AckExpr::Log2Ceil(Box::new(a))
    }

    pub fn binom(a: AckExpr, b: AckExpr) -> Self {
        AckExpr::Binom(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: AckExpr, b: AckExpr) -> Self {
        AckExpr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: AckExpr, b: AckExpr) -> Self {
        AckExpr::Mul(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: AckExpr, b: AckExpr) -> Self {
        AckExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn as_const(&self) -> Option<&BigInt> {
        match self {
            AckExpr::Const(v) => Some(v),
            _ => None,
        }
    }

    /// Exact value if it and every intermediate value fit in `cap` bits.
    pub fn eval(&self, cap: u64) -> Option<BigInt> {
        use AckExpr::*;
        match self {
            Const(v) => fits(v, cap),
            Ack(m, a) => ack_exact(*m, &a.eval(cap)?, cap),
            Max(items) => {
                let mut best: Option<BigInt> = None;
                for it in items {
                    let v = it.eval(cap)?;
                    best = Some(match best {
                        Some(b) if b >= v => b,
                        _ => v,
                    });
                }
                best
            }
            Pow(a, b) => {
                let (a, b) = (a.eval(cap)?, b.eval(cap)?);
                if b.is_negative() {
                    return None;
                }
                if a.is_zero() || a.abs().is_one() {
                    return Some(num_traits::pow(a, b.to_usize()?));
                }
                let e = b.to_u64()?;
                // |a|^e has more than (bits(a) - 1) * e bits
                if (a.bits() - 1).checked_mul(e)? >= cap {
                    return None;
                }
                fits(&num_traits::pow(a, usize::try_from(e).ok()?), cap)
            }
            Log2Ceil(a) => {
                let a = a.eval(cap)?;
                if !a.is_positive() {
                    return None;
                }
                let bits = if a.is_one() { 0 } else { (&a - 1u32).bits() };
                Some(BigInt::from(bits))
            }
            Binom(n, k) => {
                let (n, k) = (n.eval(cap)?, k.eval(cap)?);
                if n.is_negative() || k.is_negative() {
                    return None;
                }
                if k > n {
                    return Some(BigInt::zero());
                }
                let k = k.clone().min(&n - &k).to_u64()?;
                let mut r = BigInt::one();
                for i in 0..k {
                    r = r * (&n - i) / (i + 1);
                    if r.bits() > cap {
                        return None;
                    }
                }
                Some(r)
            }
            Add(a, b) => fits(&(a.eval(cap)? + b.eval(cap)?), cap),
            Mul(a, b) => fits(&(a.eval(cap)? * b.eval(cap)?), cap),
            Sub(a, b) => fits(&(a.eval(cap)? - b.eval(cap)?), cap),
        }
    }

    pub fn is_evaluable(&self, cap: u64) -> bool {
        self.eval(cap).is_some()
    }

    /// Collapses every subtree that evaluates within `cap` bits to a constant.
    pub fn simplify(&self, cap: u64) -> AckExpr {
        if let Some(v) = self.eval(cap) {
            return AckExpr::Const(v);
        }
        use AckExpr::*;
        let s = |e: &AckExpr| Box::new(e.simplify(cap));
        match self {
            Const(v) => Const(v.clone()),
            Ack(m, a) => Ack(*m, s(a)),
            Max(items) => Max(items.iter().map(|e| e.simplify(cap)).collect()),
            Pow(a, b) => Pow(s(a), s(b)),
            Log2Ceil(a) => Log2Ceil(s(a)),
            Binom(a, b) => Binom(s(a), s(b)),
            Add(a, b) => Add(s(a), s(b)),
            Mul(a, b) => Mul(s(a), s(b)),
            Sub(a, b) => Sub(s(a), s(b)),
        }
    }

    /// Replaces every Ackermann node by `A(level, ·)`; with `level = 1` the
    /// result is an evaluable stand-in for testing monotonicity.
    pub fn substitute_ack(&self, level: u32) -> AckExpr {
        use AckExpr::*;
        let s = |e: &AckExpr| Box::new(e.substitute_ack(level));
        match self {
            Const(v) => Const(v.clone()),
            Ack(_, a) => Ack(level, s(a)),
            Max(items) => Max(items.iter().map(|e| e.substitute_ack(level)).collect()),
            Pow(a, b) => Pow(s(a), s(b)),
            Log2Ceil(a) => Log2Ceil(s(a)),
            Binom(a, b) => Binom(s(a), s(b)),
            Add(a, b) => Add(s(a), s(b)),
            Mul(a, b) => Mul(s(a), s(b)),
            Sub(a, b) => Sub(s(a), s(b)),
        }
    }

    /// Number of nodes; a crude size measure for reports.
    pub fn size(&self) -> usize {
        use AckExpr::*;
        match self {
            Const(_) => 1,
            Ack(_, a) | Log2Ceil(a) => 1 + a.size(),
            Max(items) => 1 + items.iter().map(AckExpr::size).sum::<usize>(),
            Pow(a, b) | Binom(a, b) | Add(a, b) | Mul(a, b) | Sub(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for AckExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AckExpr::*;
        match self {
            Const(v) => write!(f, "{v}"),
            Ack(m, a) => write!(f, "(ack {m} {a})"),
            Max(items) => {
                f.write_str("(max")?;
                for it in items {
                    write!(f, " {it}")?;
                }
                f.write_str(")")
            }
            Pow(a, b) => write!(f, "(pow {a} {b})"),
            Log2Ceil(a) => write!(f, "(log2ceil {a})"),
            Binom(a, b) => write!(f, "(binom {a} {b})"),
            Add(a, b) => write!(f, "(add {a} {b})"),
            Mul(a, b) => write!(f, "(mul {a} {b})"),
            Sub(a, b) => write!(f, "(sub {a} {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("bad bound expression at byte {pos}: {msg}")]
pub struct ExprParseError {
    pub pos: usize,
    pub msg: String,
}

impl FromStr for AckExpr {
    type Err = ExprParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprParseError {
        ExprParseError { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.s.len() && !self.s[self.pos].is_ascii_whitespace() && !matches!(self.s[self.pos], b'(' | b')') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
    }

    fn expr(&mut self) -> Result<AckExpr, ExprParseError> {
        self.ws();
        if self.s.get(self.pos) != Some(&b'(') {
            let at = self.pos;
            let a = self.atom().to_string();
            return a.parse::<BigInt>().map(AckExpr::Const).map_err(|_| ExprParseError { pos: at, msg: format!("expected integer, found {a:?}") });
        }
        self.pos += 1;
        self.ws();
        let head = self.atom().to_string();
        let mut args = Vec::new();
        let mut level = None;
        loop {
            self.ws();
            match self.s.get(self.pos) {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                None => return Err(self.err("unclosed parenthesis")),
                _ => {
                    if head == "ack" && level.is_none() {
                        let at = self.pos;
                        let a = self.atom().to_string();
                        level = Some(a.parse::<u32>().map_err(|_| ExprParseError { pos: at, msg: "expected Ackermann level".into() })?);
                    } else {
                        args.push(self.expr()?);
                    }
                }
            }
        }
        let two = |args: Vec<AckExpr>, f: fn(Box<AckExpr>, Box<AckExpr>) -> AckExpr| -> Result<AckExpr, ExprParseError> {
            let [a, b]: [AckExpr; 2] = args.try_into().map_err(|_| self.err("expected two arguments"))?;
            Ok(f(Box::new(a), Box::new(b)))
        };
        match head.as_str() {
            "ack" => {
                let m = level.ok_or_else(|| self.err("missing Ackermann level"))?;
                let [a]: [AckExpr; 1] = args.try_into().map_err(|_| self.err("expected one argument"))?;
                Ok(AckExpr::Ack(m, Box::new(a)))
            }
            "max" => Ok(AckExpr::Max(args)),
            "log2ceil" => {
                let [a]: [AckExpr; 1] = args.try_into().map_err(|_| self.err("expected one argument"))?;
                Ok(AckExpr::Log2Ceil(Box::new(a)))
            }
            "pow" => two(args, AckExpr::Pow),
            "binom" => two(args, AckExpr::Binom),
            "add" => two(args, AckExpr::Add),
            "mul" => two(args, AckExpr::Mul),
            "sub" => two(args, AckExpr::Sub),
            other => Err(self.err(&format!("unknown operator {other:?}"))),
        }
    }
}

/// `⌈log2 x⌉` for a positive integer.
pub fn log2_ceil(x: &BigInt) -> u64 {
    if x <= &BigInt::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

/// Integer cube root rounded up.
pub fn cbrt_ceil(x: &BigInt) -> BigInt {
    let r = x.cbrt();
    if &(&r * &r * &r) < x {
        r + 1
    } else {
        r
    }
}

/// Integer cube root rounded down.
pub fn cbrt_floor(x: &BigInt) -> BigInt {
    x.cbrt()
}
