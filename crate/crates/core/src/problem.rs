//! Problem files: an INI-like description of a differential system.
//!
//! ```text
//! # comments start with '#'
//! [ring]
//! derivations = 1
//! indeterminates = y1, y2
//! field = Q            # or Q(x), which needs derivations = 1
//!
//! [system]
//! F = y1^2; y1 - y2^2; 1 - y2[1]
//! f = 1                # optional, defaults to 1
//!
//! [ranking]            # optional
//! type = orderly
//! tie = index-then-lex
//! ```
//!
//! `F` may be repeated; its lists are concatenated. Polynomials use `+ - * / ^`
//! and parentheses; `y2[1,0]` is `∂₁y₂` (one entry per derivation) and a bare
//! name is the indeterminate itself. Division is only by nonzero constants, and
//! over `Q(x)` the base variable is written `x`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::diff::{AnySystem, DiffPoly, DiffRing, DiffSystem};
use crate::poly::{Field, FieldKind, Poly, RatFunc};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

type PResult<T> = Result<T, ParseError>;

/// A location in the source, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

impl Pos {
    fn err<T>(self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { line: self.line, col: self.col, msg: msg.into() })
    }

    fn advance(self, chars: usize) -> Pos {
        Pos { line: self.line, col: self.col + chars }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    key_pos: Pos,
    value: String,
    value_pos: Pos,
}

const SECTIONS: [(&str, &[&str]); 3] = [
    ("ring", &["derivations", "indeterminates", "field"]),
    ("system", &["F", "f"]),
    ("ranking", &["type", "tie"]),
];

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

/// Leading whitespace measured in characters.
fn indent(s: &str) -> usize {
    s.chars().take_while(|c| c.is_whitespace()).count()
}

fn read_entries(text: &str) -> PResult<BTreeMap<(String, String), Vec<Entry>>> {
    let mut out: BTreeMap<(String, String), Vec<Entry>> = BTreeMap::new();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let pos = Pos { line: i + 1, col: indent(line) + 1 };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return pos.advance(trimmed.chars().count()).err("expected ']'");
            };
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return pos.err(format!("unknown section [{name}]"));
            }
            section = Some(name.to_string());
            continue;
        }
        let Some(eq) = line.find('=') else {
            return pos.err("expected 'key = value'");
        };
        let key = line[..eq].trim();
        let Some(sec) = &section else {
            return pos.err("entry outside of a section");
        };
        let keys = SECTIONS.iter().find(|(s, _)| s == sec).unwrap().1;
        if !keys.contains(&key) {
            return pos.err(format!("unknown key '{key}' in [{sec}]"));
        }
        let after = &line[eq + 1..];
        let value_col = line[..eq + 1].chars().count() + indent(after) + 1;
        let entry = Entry { key_pos: pos, value: after.trim().to_string(), value_pos: Pos { line: i + 1, col: value_col } };
        let slot = out.entry((sec.clone(), key.to_string())).or_default();
        if key != "F" && !slot.is_empty() {
            return pos.err(format!("duplicate key '{key}'"));
        }
        slot.push(entry);
    }
    Ok(out)
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> PResult<AnySystem> {
    let entries = read_entries(text)?;
    let get = |sec: &str, key: &str| entries.get(&(sec.to_string(), key.to_string())).map(|v| &v[0]);
    let eof = Pos { line: text.lines().count().max(1), col: 1 };

    let Some(d) = get("ring", "derivations") else {
        return eof.err("missing 'derivations' in [ring]");
    };
    let m: usize = match d.value.parse() {
        Ok(m) if m >= 1 => m,
        _ => return d.value_pos.err("derivations must be a positive integer"),
    };
    let Some(ind) = get("ring", "indeterminates") else {
        return eof.err("missing 'indeterminates' in [ring]");
    };
    let names: Vec<String> = ind.value.split(',').map(|s| s.trim().to_string()).collect();
    if let Some(bad) = names.iter().find(|s| !is_identifier(s)) {
        return ind.value_pos.err(format!("invalid indeterminate name '{bad}'"));
    }
    let kind = match get("ring", "field") {
        None => FieldKind::Rationals,
        Some(e) => match e.value.as_str() {
            "Q" => FieldKind::Rationals,
            "Q(x)" => FieldKind::RationalFunctions,
            other => return e.value_pos.err(format!("unknown field '{other}', expected Q or Q(x)")),
        },
    };
    if let Some(e) = get("ranking", "type") {
        if e.value != "orderly" {
            return e.value_pos.err("only the orderly ranking is supported");
        }
    }
    if let Some(e) = get("ranking", "tie") {
        if e.value != "index-then-lex" {
            return e.value_pos.err("only 'index-then-lex' tie-breaking is supported");
        }
    }
    let gens = entries.get(&("system".to_string(), "F".to_string())).cloned().unwrap_or_default();
    if gens.is_empty() {
        return eof.err("missing 'F' in [system]");
    }
    let f = get("system", "f").cloned();

    match kind {
        FieldKind::Rationals => build::<BigRational>(m, names, ind.key_pos, &gens, f.as_ref(), None).map(AnySystem::from),
        FieldKind::RationalFunctions => {
            if names.iter().any(|n| n == "x") {
                return ind.value_pos.err("'x' is the base variable of Q(x)");
            }
            build::<RatFunc>(m, names, ind.key_pos, &gens, f.as_ref(), Some(RatFunc::x())).map(AnySystem::from)
        }
    }
}

fn build<K: Field>(
    m: usize,
    names: Vec<String>,
    ring_pos: Pos,
    gens: &[Entry],
    f: Option<&Entry>,
    x: Option<K>,
) -> PResult<DiffSystem<K>> {
    let ring = match DiffRing::<K>::new(m, names) {
        Ok(r) => r,
        Err(e) => return ring_pos.err(e.to_string()),
    };
    let mut polys = Vec::new();
    for e in gens {
        let mut offset = 0;
        for piece in e.value.split(';') {
            let lead = indent(piece);
            let pos = e.value_pos.advance(offset + lead);
            offset += piece.chars().count() + 1;
            if piece.trim().is_empty() {
                return pos.err("empty polynomial in list");
            }
            polys.push(PolyParser::new(piece.trim(), pos, &ring, x.as_ref()).parse()?);
        }
    }
    let mut sys = DiffSystem::new(ring, polys);
    if let Some(e) = f {
        let p = PolyParser::new(&e.value, e.value_pos, &sys.ring, x.as_ref()).parse()?;
        sys = sys.with_f(p);
    }
    Ok(sys)
}

/// Parses one polynomial over `ring`; `x` is the base variable of `Q(x)`.
pub fn parse_poly<K: Field>(text: &str, ring: &DiffRing<K>, x: Option<&K>) -> PResult<DiffPoly<K>> {
    PolyParser::new(text.trim(), Pos { line: 1, col: indent(text) + 1 }, ring, x).parse()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String, Option<Vec<u32>>),
    Op(char),
    End,
}

struct PolyParser<'a, K> {
    chars: Vec<char>,
    i: usize,
    start: Pos,
    ring: &'a DiffRing<K>,
    x: Option<&'a K>,
    peeked: Option<(Tok, usize)>,
}

impl<'a, K: Field> PolyParser<'a, K> {
    fn new(text: &str, start: Pos, ring: &'a DiffRing<K>, x: Option<&'a K>) -> Self {
        Self { chars: text.chars().collect(), i: 0, start, ring, x, peeked: None }
    }

    fn pos_at(&self, i: usize) -> Pos {
        self.start.advance(i)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.i).is_some_and(|c| c.is_whitespace()) {
            self.i += 1;
        }
    }

    fn digits(&mut self) -> String {
        let s = self.i;
        while self.chars.get(self.i).is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        self.chars[s..self.i].iter().collect()
    }

    /// Next token and the index where it starts.
    fn lex(&mut self) -> PResult<(Tok, usize)> {
        self.skip_ws();
        let at = self.i;
        let Some(&c) = self.chars.get(self.i) else {
            return Ok((Tok::End, at));
        };
        if c.is_ascii_digit() {
            let d = self.digits();
            return Ok((Tok::Num(d.parse().unwrap()), at));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while self.chars.get(self.i).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                self.i += 1;
            }
            let name: String = self.chars[at..self.i].iter().collect();
            if self.chars.get(self.i) != Some(&'[') {
                return Ok((Tok::Ident(name, None), at));
            }
            self.i += 1;
            let mut idx = Vec::new();
            loop {
                self.skip_ws();
                let p = self.i;
                let d = self.digits();
                let Ok(k) = d.parse::<u32>() else {
                    return self.pos_at(p).err("expected a derivative order");
                };
                idx.push(k);
                self.skip_ws();
                match self.chars.get(self.i) {
                    Some(',') => self.i += 1,
                    Some(']') => {
                        self.i += 1;
                        break;
                    }
                    _ => return self.pos_at(self.i).err("expected ',' or ']' in multi-index"),
                }
            }
            return Ok((Tok::Ident(name, Some(idx)), at));
        }
        if "+-*/^()".contains(c) {
            self.i += 1;
            return Ok((Tok::Op(c), at));
        }
        self.pos_at(at).err(format!("unexpected character '{c}'"))
    }

    fn peek(&mut self) -> PResult<&Tok> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(&self.peeked.as_ref().unwrap().0)
    }

    fn next(&mut self) -> PResult<(Tok, usize)> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lex(),
        }
    }

    fn parse(mut self) -> PResult<DiffPoly<K>> {
        let p = self.expr()?;
        match self.next()? {
            (Tok::End, _) => Ok(p),
            (_, at) => self.pos_at(at).err("unexpected trailing input"),
        }
    }

    fn expr(&mut self) -> PResult<DiffPoly<K>> {
        let mut acc = self.term()?;
        loop {
            match self.peek()? {
                Tok::Op('+') => {
                    self.next()?;
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.next()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<DiffPoly<K>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek()? {
                Tok::Op('*') => {
                    self.next()?;
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    let (_, at) = self.next()?;
                    let d = self.unary()?;
                    let inv = d.constant_value().and_then(|c| c.inv());
                    let Some(inv) = inv else {
                        return self.pos_at(at).err("division only by a nonzero constant");
                    };
                    acc = &acc * &Poly::constant(inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<DiffPoly<K>> {
        if self.peek()? == &Tok::Op('-') {
            self.next()?;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> PResult<DiffPoly<K>> {
        let base = self.atom()?;
        if self.peek()? != &Tok::Op('^') {
            return Ok(base);
        }
        self.next()?;
        match self.next()? {
            (Tok::Num(e), at) => match u32::try_from(&e) {
                Ok(e) => Ok(base.pow(e)),
                Err(_) => self.pos_at(at).err("exponent too large"),
            },
            (_, at) => self.pos_at(at).err("expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> PResult<DiffPoly<K>> {
        match self.next()? {
            (Tok::Num(n), _) => Ok(Poly::constant(K::from_rational(BigRational::from_integer(n)))),
            (Tok::Op('('), _) => {
                let p = self.expr()?;
                match self.next()? {
                    (Tok::Op(')'), _) => Ok(p),
                    (_, at) => self.pos_at(at).err("expected ')'"),
                }
            }
            (Tok::Ident(name, idx), at) => {
                let m = self.ring.m();
                if let Some(ix) = self.ring.indet_index(&name) {
                    let op = idx.unwrap_or_else(|| vec![0; m]);
                    if op.len() != m {
                        return self.pos_at(at).err(format!(
                            "multi-index of '{name}' has {} entries but the ring has {m} derivations",
                            op.len()
                        ));
                    }
                    return Ok(self.ring.der(ix, &op));
                }
                match (name.as_str(), self.x, idx) {
                    ("x", Some(x), None) => Ok(Poly::constant(x.clone())),
                    _ => self.pos_at(at).err(format!("unknown name '{name}'")),
                }
            }
            (Tok::End, at) => self.pos_at(at).err("unexpected end of polynomial"),
            (Tok::Op(c), at) => self.pos_at(at).err(format!("unexpected '{c}'")),
        }
    }
}

/// Canonical problem-file text; parsing it gives back an identical system.
pub fn print_problem(sys: &AnySystem) -> String {
    crate::with_system!(sys, s => print_typed(s))
}

fn print_typed<K: Field>(sys: &DiffSystem<K>) -> String {
    let mut out = String::new();
    let ring = &sys.ring;
    let list: Vec<String> = sys.generators.iter().map(|g| g.display(ring).to_string()).collect();
    writeln!(out, "[ring]").unwrap();
    writeln!(out, "derivations = {}", ring.m()).unwrap();
    writeln!(out, "indeterminates = {}", ring.names().join(", ")).unwrap();
    writeln!(out, "field = {}", K::KIND).unwrap();
    writeln!(out, "\n[system]").unwrap();
    writeln!(out, "F = {}", list.join("; ")).unwrap();
    writeln!(out, "f = {}", sys.f.display(ring)).unwrap();
    writeln!(out, "\n[ranking]\ntype = orderly\ntie = index-then-lex").unwrap();
    out
}

impl fmt::Display for AnySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_problem(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullstellensatz::{example_family, Example};

    fn q(text: &str) -> DiffSystem<BigRational> {
        match parse_problem(text).unwrap() {
            AnySystem::Rational(s) => s,
            AnySystem::RationalFunctions(_) => panic!(),
        }
    }

    #[test]
    fn example_one_text() {
        let s = q("[ring]\nderivations = 1\nindeterminates = y1\n[system]\nF = y1[1] - 1; y1^2\n");
        let r = &s.ring;
        assert_eq!(s.generators, vec![&r.der(0, &[1]) - &Poly::one(), r.y(0).pow(2)]);
        assert!(s.f.is_one());
    }

    #[test]
    fn multi_index() {
        let s = q("[ring]\nderivations = 2\nindeterminates = u\n[system]\nF = u[2,0]^2\n");
        assert_eq!(s.generators, vec![s.ring.der(0, &[2, 0]).pow(2)]);
    }

    #[test]
    fn arity_error() {
        let e = parse_problem("[ring]\nderivations = 1\nindeterminates = y1\n[system]\nF = y1[1,0]\n").unwrap_err();
        assert_eq!((e.line, e.col), (5, 5));
        assert!(e.msg.contains("2 entries"), "{e}");
    }

    #[test]
    fn error_positions() {
        let base = "[ring]\nderivations = 1\nindeterminates = y\n[system]\n";
        let e = parse_problem(&format!("{base}F = y + ; y\n")).unwrap_err();
        assert_eq!((e.line, e.col), (5, 8));
        let e = parse_problem(&format!("{base}F = y; 2*z\n")).unwrap_err();
        assert_eq!((e.line, e.col, e.msg.as_str()), (5, 10, "unknown name 'z'"));
        let e = parse_problem(&format!("{base}F = y/y\n")).unwrap_err();
        assert_eq!((e.line, e.col), (5, 6));
        let e = parse_problem(&format!("{base}G = y\n")).unwrap_err();
        assert_eq!(e.line, 5);
        let e = parse_problem("[ring]\nderivations = 2\nindeterminates = y\nfield = Q(x)\n[system]\nF = y\n").unwrap_err();
        assert!(e.msg.contains("exactly one derivation"), "{e}");
        assert!(parse_problem("[ring]\nderivations = 1\nindeterminates = y\n[system]\nF = x*y\n").is_err());
    }

    #[test]
    fn fractions_and_base_variable() {
        let text = "[ring]\nderivations = 1\nindeterminates = y\nfield = Q(x)\n[system]\nF = y[1] - x^2/2 + 3/(x+1)\nf = y\n";
        let AnySystem::RationalFunctions(s) = parse_problem(text).unwrap() else { panic!() };
        let printed = print_problem(&s.clone().into());
        assert_eq!(parse_problem(&printed).unwrap(), AnySystem::from(s));
    }

    #[test]
    fn examples_round_trip() {
        for ex in [Example::Ex1(3), Example::Ex2(3), Example::Ex3(2), Example::Ex4(2)] {
            let sys = example_family(ex).unwrap();
            let text = print_problem(&sys);
            assert_eq!(parse_problem(&text).unwrap(), sys, "{text}");
        }
    }

    #[test]
    fn comments_and_repeated_lists() {
        let s = q("# header\n[ring]\nderivations = 1 # one\nindeterminates = a, b\n\n[system]\nF = a\nF = b^2 - 1/3*a\n");
        let r = &s.ring;
        let third = Poly::constant(BigRational::new(1.into(), 3.into()));
        assert_eq!(s.generators, vec![r.y(0), &r.y(1).pow(2) - &(&third * &r.y(0))]);
    }
}
