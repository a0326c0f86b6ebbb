//! Countable order types built from 1..n, ω, ω*, ζ, η by ordered sum and
//! lexicographic product, with a small text DSL.
//!
//! ```text
//! expr := term ('+' term)*
//! term := atom ('*' atom)*
//! atom := N | omega | omega* | zeta | eta | '(' expr ')'
//! ```
//!
//! `A * B` is the lexicographic product ordered by the `A` coordinate first:
//! `(a, b) < (a', b')` iff `a < a'`, or `a = a'` and `b < b'`. So `3 * eta`
//! is three consecutive copies of ℚ.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::rational::{eta_enumerate, eta_index, parse_rational, simplest_between, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderTypeExpr {
    /// `n` points, `n >= 1`.
    Fin(u64),
    Omega,
    /// ω*, the reverse of ω.
    OmegaRev,
    Zeta,
    Eta,
    Sum(Box<OrderTypeExpr>, Box<OrderTypeExpr>),
    LexProd(Box<OrderTypeExpr>, Box<OrderTypeExpr>),
}

/// Element of an order type. `Int` serves `Fin` (0-based), `Omega` (k >= 0),
/// `OmegaRev` (k <= 0, read in the usual order of ℤ) and `Zeta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderElement {
    Int(i64),
    Rat(Rational),
    L(Box<OrderElement>),
    R(Box<OrderElement>),
    Pair(Box<OrderElement>, Box<OrderElement>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderTypeError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{elem} is not an element of {ty}")]
    NotMember { elem: String, ty: String },
}

use OrderElement as E;
use OrderTypeExpr as T;

impl OrderElement {
    pub fn pair(a: OrderElement, b: OrderElement) -> Self {
        E::Pair(Box::new(a), Box::new(b))
    }

    pub fn left(a: OrderElement) -> Self {
        E::L(Box::new(a))
    }

    pub fn right(a: OrderElement) -> Self {
        E::R(Box::new(a))
    }

    pub fn as_pair(&self) -> Option<(&OrderElement, &OrderElement)> {
        match self {
            E::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&Rational> {
        match self {
            E::Rat(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Int(k) => write!(f, "{k}"),
            E::Rat(q) => write!(f, "{q}"),
            E::L(x) => write!(f, "L({x})"),
            E::R(x) => write!(f, "R({x})"),
            E::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

pub fn parse_ordertype(src: &str) -> Result<OrderTypeExpr, OrderTypeError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let e = p.expr()?;
    if let Some(t) = p.toks.get(p.at) {
        return Err(syntax(t.pos, format!("unexpected {}", t.kind.describe())));
    }
    Ok(e)
}

impl FromStr for OrderTypeExpr {
    type Err = OrderTypeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordertype(s)
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> OrderTypeError {
    OrderTypeError::Syntax { pos, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Omega,
    OmegaStar,
    Zeta,
    Eta,
    Open,
    Close,
    Plus,
    Star,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Omega => "'omega'".into(),
            Tok::OmegaStar => "'omega*'".into(),
            Tok::Zeta => "'zeta'".into(),
            Tok::Eta => "'eta'".into(),
            Tok::Open => "'('".into(),
            Tok::Close => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
        }
    }
}

struct Spanned {
    kind: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, OrderTypeError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' | b')' | b'+' | b'*' => {
                let kind = match c {
                    b'(' => Tok::Open,
                    b')' => Tok::Close,
                    b'+' => Tok::Plus,
                    _ => Tok::Star,
                };
                out.push(Spanned { kind, pos: i });
                i += 1;
            }
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = src[start..i]
                    .parse()
                    .map_err(|_| syntax(start, "number too large"))?;
                if n == 0 {
                    return Err(syntax(start, "finite order types need at least one point"));
                }
                out.push(Spanned { kind: Tok::Num(n), pos: start });
            }
            c if c.is_ascii_alphabetic() => {
                while i < b.len() && b[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let kind = match &src[start..i] {
                    "omega" => {
                        // `omega*` is ω* unless the star is followed by an atom.
                        if b.get(i) == Some(&b'*') && !atom_follows(b, i + 1) {
                            i += 1;
                            Tok::OmegaStar
                        } else {
                            Tok::Omega
                        }
                    }
                    "zeta" => Tok::Zeta,
                    "eta" => Tok::Eta,
                    w => return Err(syntax(start, format!("unknown name {w:?}"))),
                };
                out.push(Spanned { kind, pos: start });
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}

fn atom_follows(b: &[u8], mut i: usize) -> bool {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'(')
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.kind)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<OrderTypeExpr, OrderTypeError> {
        let mut e = self.term()?;
        while self.peek() == Some(&Tok::Plus) {
            self.at += 1;
            let r = self.term()?;
            e = T::Sum(Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<OrderTypeExpr, OrderTypeError> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            let r = self.atom()?;
            e = T::LexProd(Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<OrderTypeExpr, OrderTypeError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        self.at += 1;
        Ok(match tok {
            Tok::Num(n) => T::Fin(n),
            Tok::Omega => T::Omega,
            Tok::OmegaStar => T::OmegaRev,
            Tok::Zeta => T::Zeta,
            Tok::Eta => T::Eta,
            Tok::Open => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.at += 1;
                e
            }
            other => return Err(syntax(pos, format!("unexpected {}", other.describe()))),
        })
    }
}

impl fmt::Display for OrderTypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T::Fin(n) => write!(f, "{n}"),
            T::Omega => f.write_str("omega"),
            T::OmegaRev => f.write_str("omega*"),
            T::Zeta => f.write_str("zeta"),
            T::Eta => f.write_str("eta"),
            T::Sum(a, b) => {
                write!(f, "{a} + ")?;
                if matches!(**b, T::Sum(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            T::LexProd(a, b) => {
                if matches!(**a, T::Sum(..)) {
                    write!(f, "({a}) * ")?;
                } else {
                    write!(f, "{a} * ")?;
                }
                if matches!(**b, T::Sum(..) | T::LexProd(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

// Cantor pairing on u64, `None` on overflow.
fn cantor_pair(x: u64, y: u64) -> Option<u64> {
    let s = (x as u128) + (y as u128);
    let v = s * (s + 1) / 2 + y as u128;
    u64::try_from(v).ok()
}

pub(crate) fn cantor_unpair(i: u64) -> (u64, u64) {
    let i = i as u128;
    let mut w = (((8 * i + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= i {
        w += 1;
    }
    while w * (w + 1) / 2 > i {
        w -= 1;
    }
    let y = i - w * (w + 1) / 2;
    ((w - y) as u64, y as u64)
}

fn int_of(e: &OrderElement) -> i64 {
    match e {
        E::Int(k) => *k,
        _ => unreachable!("validated element"),
    }
}

impl OrderTypeExpr {
    pub fn sum(a: OrderTypeExpr, b: OrderTypeExpr) -> Self {
        T::Sum(Box::new(a), Box::new(b))
    }

    pub fn lex(a: OrderTypeExpr, b: OrderTypeExpr) -> Self {
        T::LexProd(Box::new(a), Box::new(b))
    }

    /// Number of points, `None` if infinite.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            T::Fin(n) => Some(*n),
            T::Sum(a, b) => a.cardinality()?.checked_add(b.cardinality()?),
            T::LexProd(a, b) => a.cardinality()?.checked_mul(b.cardinality()?),
            _ => None,
        }
    }

    pub fn has_min(&self) -> bool {
        match self {
            T::Fin(_) | T::Omega => true,
            T::OmegaRev | T::Zeta | T::Eta => false,
            T::Sum(a, _) => a.has_min(),
            T::LexProd(a, b) => a.has_min() && b.has_min(),
        }
    }

    pub fn has_max(&self) -> bool {
        match self {
            T::Fin(_) | T::OmegaRev => true,
            T::Omega | T::Zeta | T::Eta => false,
            T::Sum(_, b) => b.has_max(),
            T::LexProd(a, b) => a.has_max() && b.has_max(),
        }
    }

    pub fn is_dense(&self) -> bool {
        match self {
            T::Fin(n) => *n == 1,
            T::Omega | T::OmegaRev | T::Zeta => false,
            T::Eta => true,
            T::Sum(a, b) => a.is_dense() && b.is_dense() && !(a.has_max() && b.has_min()),
            T::LexProd(a, b) => {
                b.is_dense() && (a.is_dense() || !b.has_min() || !b.has_max())
            }
        }
    }

    /// Dense without endpoints, i.e. isomorphic to ℚ.
    pub fn is_dlo(&self) -> bool {
        self.is_dense() && !self.has_min() && !self.has_max()
    }

    pub fn contains(&self, e: &OrderElement) -> bool {
        match (self, e) {
            (T::Fin(n), E::Int(k)) => *k >= 0 && (*k as u64) < *n,
            (T::Omega, E::Int(k)) => *k >= 0,
            (T::OmegaRev, E::Int(k)) => *k <= 0,
            (T::Zeta, E::Int(_)) => true,
            (T::Eta, E::Rat(_)) => true,
            (T::Sum(a, _), E::L(x)) => a.contains(x),
            (T::Sum(_, b), E::R(x)) => b.contains(x),
            (T::LexProd(a, b), E::Pair(x, y)) => a.contains(x) && b.contains(y),
            _ => false,
        }
    }

    pub fn check(&self, e: &OrderElement) -> Result<(), OrderTypeError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(OrderTypeError::NotMember { elem: e.to_string(), ty: self.to_string() })
        }
    }

    pub fn compare(&self, a: &OrderElement, b: &OrderElement) -> Result<Ordering, OrderTypeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.cmp_members(a, b))
    }

    /// Comparison for elements already known to be members.
    pub fn cmp_members(&self, a: &OrderElement, b: &OrderElement) -> Ordering {
        match (self, a, b) {
            (T::Eta, E::Rat(x), E::Rat(y)) => x.cmp(y),
            (T::Sum(s, _), E::L(x), E::L(y)) => s.cmp_members(x, y),
            (T::Sum(_, t), E::R(x), E::R(y)) => t.cmp_members(x, y),
            (T::Sum(..), E::L(_), E::R(_)) => Ordering::Less,
            (T::Sum(..), E::R(_), E::L(_)) => Ordering::Greater,
            (T::LexProd(m, n), E::Pair(x1, y1), E::Pair(x2, y2)) => {
                m.cmp_members(x1, x2).then_with(|| n.cmp_members(y1, y2))
            }
            (_, E::Int(x), E::Int(y)) => x.cmp(y),
            _ => unreachable!("cmp_members on non-members"),
        }
    }

    /// The `i`-th element of a fixed enumeration; `None` past the end of a
    /// finite type.
    pub fn enumerate(&self, i: u64) -> Option<OrderElement> {
        Some(match self {
            T::Fin(n) => {
                if i >= *n {
                    return None;
                }
                E::Int(i as i64)
            }
            T::Omega => E::Int(i64::try_from(i).ok()?),
            T::OmegaRev => E::Int(-i64::try_from(i).ok()?),
            T::Zeta => {
                let k = i64::try_from(i.div_ceil(2)).ok()?;
                E::Int(if i % 2 == 1 { k } else { -k })
            }
            T::Eta => E::Rat(eta_enumerate(i)),
            T::Sum(a, b) => match (a.cardinality(), b.cardinality()) {
                (Some(ca), _) if i < ca => E::left(a.enumerate(i)?),
                (Some(ca), _) => E::right(b.enumerate(i - ca)?),
                (None, Some(cb)) if i < cb => E::right(b.enumerate(i)?),
                (None, Some(cb)) => E::left(a.enumerate(i - cb)?),
                (None, None) if i % 2 == 0 => E::left(a.enumerate(i / 2)?),
                (None, None) => E::right(b.enumerate(i / 2)?),
            },
            T::LexProd(a, b) => {
                let (x, y) = match (a.cardinality(), b.cardinality()) {
                    (_, Some(cb)) => (i / cb, i % cb),
                    (Some(ca), None) => (i % ca, i / ca),
                    (None, None) => cantor_unpair(i),
                };
                E::pair(a.enumerate(x)?, b.enumerate(y)?)
            }
        })
    }

    /// Inverse of [`enumerate`](Self::enumerate); `None` for non-members or
    /// indices beyond `u64`.
    pub fn index_of(&self, e: &OrderElement) -> Option<u64> {
        if !self.contains(e) {
            return None;
        }
        self.index_unchecked(e)
    }

    fn index_unchecked(&self, e: &OrderElement) -> Option<u64> {
        match (self, e) {
            (T::Fin(_) | T::Omega, E::Int(k)) => Some(*k as u64),
            (T::OmegaRev, E::Int(k)) => Some(k.unsigned_abs()),
            (T::Zeta, E::Int(k)) => {
                let m = k.unsigned_abs();
                Some(if *k > 0 { 2 * m - 1 } else { 2 * m })
            }
            (T::Eta, E::Rat(q)) => eta_index(q),
            (T::Sum(a, b), _) => {
                let (ca, cb) = (a.cardinality(), b.cardinality());
                match e {
                    E::L(x) => {
                        let j = a.index_unchecked(x)?;
                        match (ca, cb) {
                            (Some(_), _) => Some(j),
                            (None, Some(cb)) => j.checked_add(cb),
                            (None, None) => j.checked_mul(2),
                        }
                    }
                    E::R(y) => {
                        let j = b.index_unchecked(y)?;
                        match (ca, cb) {
                            (Some(ca), _) => j.checked_add(ca),
                            (None, Some(_)) => Some(j),
                            (None, None) => j.checked_mul(2)?.checked_add(1),
                        }
                    }
                    _ => None,
                }
            }
            (T::LexProd(a, b), E::Pair(x, y)) => {
                let (i, j) = (a.index_unchecked(x)?, b.index_unchecked(y)?);
                match (a.cardinality(), b.cardinality()) {
                    (_, Some(cb)) => i.checked_mul(cb)?.checked_add(j),
                    (Some(ca), None) => j.checked_mul(ca)?.checked_add(i),
                    (None, None) => cantor_pair(i, j),
                }
            }
            _ => None,
        }
    }

    /// An element strictly between `lo` and `hi` (`None` = unbounded), or
    /// `None` if the cut is empty. Bounds must be members with `lo < hi`.
    ///
    /// Unbounded cuts are filled by moving the most significant coordinate,
    /// so iterating `witness(Some(x), None)` is cofinal when there is no
    /// maximum (dually for minima).
    pub fn witness(&self, lo: Option<&OrderElement>, hi: Option<&OrderElement>) -> Option<OrderElement> {
        match self {
            T::Fin(n) => {
                let c = lo.map_or(0, |l| int_of(l) + 1);
                (c < *n as i64 && hi.is_none_or(|h| c < int_of(h))).then_some(E::Int(c))
            }
            T::Omega => {
                let c = lo.map_or(0, |l| int_of(l) + 1);
                hi.is_none_or(|h| c < int_of(h)).then_some(E::Int(c))
            }
            T::OmegaRev => {
                let c = hi.map_or(0, |h| int_of(h) - 1);
                lo.is_none_or(|l| c > int_of(l)).then_some(E::Int(c))
            }
            T::Zeta => match (lo, hi) {
                (Some(l), h) => {
                    let c = int_of(l) + 1;
                    h.is_none_or(|h| c < int_of(h)).then_some(E::Int(c))
                }
                (None, Some(h)) => Some(E::Int(int_of(h) - 1)),
                (None, None) => Some(E::Int(0)),
            },
            T::Eta => {
                let l = lo.and_then(|e| e.as_rat());
                let h = hi.and_then(|e| e.as_rat());
                Some(E::Rat(simplest_between(l, h)))
            }
            T::Sum(a, b) => match (lo, hi) {
                (l, Some(E::L(h))) => {
                    let l = match l {
                        None => None,
                        Some(E::L(x)) => Some(&**x),
                        Some(_) => return None,
                    };
                    a.witness(l, Some(h)).map(E::left)
                }
                (Some(E::R(l)), h) => {
                    let h = match h {
                        None => None,
                        Some(E::R(y)) => Some(&**y),
                        Some(_) => return None,
                    };
                    b.witness(Some(l), h).map(E::right)
                }
                (l, h) => {
                    let l = l.map(|x| match x {
                        E::L(x) => &**x,
                        _ => unreachable!(),
                    });
                    let h = h.map(|y| match y {
                        E::R(y) => &**y,
                        _ => unreachable!(),
                    });
                    let left = || a.witness(l, None).map(E::left);
                    let right = || b.witness(None, h).map(E::right);
                    match (l, h) {
                        (Some(_), None) => b.witness(None, None).map(E::right).or_else(left),
                        (None, Some(_)) => a.witness(None, None).map(E::left).or_else(right),
                        _ => left().or_else(right),
                    }
                }
            },
            T::LexProd(m, n) => {
                let lo = lo.map(|e| e.as_pair().expect("pair"));
                let hi = hi.map(|e| e.as_pair().expect("pair"));
                let any = || n.witness(None, None).expect("non-empty");
                match (lo, hi) {
                    (Some((a1, b1)), Some((a2, b2))) if a1 == a2 => {
                        n.witness(Some(b1), Some(b2)).map(|y| E::pair(a1.clone(), y))
                    }
                    (Some((a1, b1)), None) => m
                        .witness(Some(a1), None)
                        .map(|x| E::pair(x, any()))
                        .or_else(|| n.witness(Some(b1), None).map(|y| E::pair(a1.clone(), y))),
                    (None, Some((a2, b2))) => m
                        .witness(None, Some(a2))
                        .map(|x| E::pair(x, any()))
                        .or_else(|| n.witness(None, Some(b2)).map(|y| E::pair(a2.clone(), y))),
                    (None, None) => m.witness(None, None).map(|x| E::pair(x, any())),
                    (Some((a1, b1)), Some((a2, b2))) => m
                        .witness(Some(a1), Some(a2))
                        .map(|x| E::pair(x, any()))
                        .or_else(|| n.witness(Some(b1), None).map(|y| E::pair(a1.clone(), y)))
                        .or_else(|| n.witness(None, Some(b2)).map(|y| E::pair(a2.clone(), y))),
                }
            }
        }
    }

    /// Parses an element in the text form printed by `Display`.
    pub fn parse_element(&self, src: &str) -> Result<OrderElement, OrderTypeError> {
        let mut cur = Cursor { s: src.as_bytes(), src, at: 0 };
        let e = cur.element(self)?;
        cur.ws();
        if cur.at != src.len() {
            return Err(syntax(cur.at, "trailing input after element"));
        }
        self.check(&e)?;
        Ok(e)
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    src: &'a str,
    at: usize,
}

impl Cursor<'_> {
    fn ws(&mut self) {
        while self.at < self.s.len() && self.s[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), OrderTypeError> {
        self.ws();
        if self.src[self.at..].starts_with(lit) {
            self.at += lit.len();
            Ok(())
        } else {
            Err(syntax(self.at, format!("expected {lit:?}")))
        }
    }

    fn number(&mut self) -> &str {
        self.ws();
        let start = self.at;
        while self.at < self.s.len() && matches!(self.s[self.at], b'-' | b'+' | b'/' | b'.' | b'0'..=b'9') {
            self.at += 1;
        }
        &self.src[start..self.at]
    }

    fn element(&mut self, ty: &OrderTypeExpr) -> Result<OrderElement, OrderTypeError> {
        self.ws();
        let pos = self.at;
        match ty {
            T::Fin(_) | T::Omega | T::OmegaRev | T::Zeta => {
                let t = self.number();
                t.parse::<i64>()
                    .map(E::Int)
                    .map_err(|_| syntax(pos, format!("expected an integer, found {t:?}")))
            }
            T::Eta => {
                let t = self.number().to_string();
                parse_rational(&t)
                    .map(E::Rat)
                    .map_err(|_| syntax(pos, format!("expected a rational, found {t:?}")))
            }
            T::Sum(a, b) => {
                if self.src[self.at..].starts_with("L(") {
                    self.at += 2;
                    let x = self.element(a)?;
                    self.expect(")")?;
                    Ok(E::left(x))
                } else if self.src[self.at..].starts_with("R(") {
                    self.at += 2;
                    let y = self.element(b)?;
                    self.expect(")")?;
                    Ok(E::right(y))
                } else {
                    Err(syntax(pos, "expected L(..) or R(..)"))
                }
            }
            T::LexProd(a, b) => {
                self.expect("(")?;
                let x = self.element(a)?;
                self.expect(",")?;
                let y = self.element(b)?;
                self.expect(")")?;
                Ok(E::pair(x, y))
            }
        }
    }
}
