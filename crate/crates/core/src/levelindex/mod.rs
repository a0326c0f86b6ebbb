//! Level-index numbers for the real transexponential
//! `T(x) = exp^{⌊x⌋+1}(x - ⌊x⌋)` on `x ≥ 0`, `T(x) = 1 / T(-x)` on `x < 0`.
//!
//! A value is `(reciprocal, level m, index r)` with `r ∈ [0, 1)`, read as
//! `exp^m(r)` or `1 / exp^m(r)`. Level 0 stands for `r` itself, so zero and
//! rationals in `[0, 1)` stay exact. `T` maps a rational to an exact
//! level-index triple; other operations fall back to rigorous intervals.

pub mod checks;
pub mod real;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::rational::{int, Rational};
pub use real::Real;

/// Arguments above this are not exponentiated into an interval.
const EXP_CAP: i64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Num {
    Exact(Rational),
    Approx(Real),
}

impl Num {
    pub fn to_real(&self, bits: u32) -> Real {
        match self {
            Num::Exact(q) => Real::from_rational(q, bits),
            Num::Approx(r) => r.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Num::Approx(r) => r.mid_f64(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Exact(_))
    }

    fn is_zero(&self) -> bool {
        matches!(self, Num::Exact(q) if q.is_zero())
    }

    fn cmp_num(&self, o: &Num) -> Option<Ordering> {
        match (self, o) {
            (Num::Exact(a), Num::Exact(b)) => Some(a.cmp(b)),
            _ => {
                let bits = self.bits().max(o.bits());
                self.to_real(bits).cmp_certain(&o.to_real(bits))
            }
        }
    }

    fn bits(&self) -> u32 {
        match self {
            Num::Exact(_) => 0,
            Num::Approx(r) => r.bits(),
        }
    }

    /// Decimal text with `digits` fractional digits, `~` marking an interval
    /// midpoint.
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            Num::Exact(q) => decimal(q, digits),
            Num::Approx(r) => {
                let (a, b) = r.endpoints();
                format!("~{}", decimal(&((a + b) / int(2)), digits))
            }
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(q) => write!(f, "{q}"),
            Num::Approx(r) => write!(f, "{r}"),
        }
    }
}

fn decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = if s.len() <= digits { format!("{}{s}", "0".repeat(digits + 1 - s.len())) } else { s };
    let (whole, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelIndex {
    pub reciprocal: bool,
    pub level: u32,
    pub index: Num,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiOrdering {
    Less,
    Equal,
    Greater,
    Unknown,
}

impl From<Ordering> for LiOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => LiOrdering::Less,
            Ordering::Equal => LiOrdering::Equal,
            Ordering::Greater => LiOrdering::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LiError {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
}

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 30 }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision { digits }
    }

    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
    }
}

impl LevelIndex {
    pub fn zero() -> Self {
        LevelIndex { reciprocal: false, level: 0, index: Num::Exact(Rational::zero()) }
    }

    pub fn one() -> Self {
        LevelIndex { reciprocal: false, level: 1, index: Num::Exact(Rational::zero()) }
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0 && self.index.is_zero()
    }

    pub fn is_one(&self) -> bool {
        !self.reciprocal && self.level == 1 && self.index.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.index.is_exact()
    }

    /// `f64` approximation of the value; infinite when out of range.
    pub fn to_f64(&self) -> f64 {
        let mut v = self.index.to_f64();
        for _ in 0..self.level {
            v = v.exp();
        }
        if self.reciprocal {
            1.0 / v
        } else {
            v
        }
    }

    pub fn render(&self, digits: usize) -> String {
        let inner = format!("E^{}({})", self.level, self.index.to_decimal(digits));
        if self.reciprocal {
            format!("1/{inner}")
        } else {
            inner
        }
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let index = match &self.index {
            Num::Exact(q) => json!({ "exact": q.to_string() }),
            Num::Approx(r) => {
                let (a, b) = r.endpoints();
                json!({ "lo": decimal(&a, digits), "hi": decimal(&b, digits) })
            }
        };
        json!({ "reciprocal": self.reciprocal, "level": self.level, "index": index })
    }

    fn with_index(&self, index: Num) -> Self {
        LevelIndex { reciprocal: self.reciprocal, level: self.level, index }
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reciprocal {
            write!(f, "1/")?;
        }
        write!(f, "E^{}({})", self.level, self.index)
    }
}

/// `T(x)` for rational `x`; always exact.
pub fn tr_eval(x: &Rational) -> LevelIndex {
    let reciprocal = x.is_negative();
    let y = x.abs();
    let fl = y.floor();
    let level = fl.to_integer().to_u32().expect("argument within u32 levels") + 1;
    LevelIndex { reciprocal, level, index: Num::Exact(y - fl) }
}

/// `slog`, the inverse of `T`: `(m - 1) + r` on `exp^m(r)`, negated for
/// reciprocals.
pub fn slog(x: &LevelIndex, prec: Precision) -> Result<Num, LiError> {
    if x.level == 0 {
        // r = 1 / T(y) with y = slog(1/r) >= 0
        let big = match &x.index {
            Num::Exact(q) if q.is_zero() => return Err(LiError::Domain("slog(0)".into())),
            Num::Exact(q) => li_from_rational(&q.recip(), prec)?,
            Num::Approx(r) => {
                let v = r.recip().ok_or_else(|| LiError::PrecisionExhausted("index straddles 0".into()))?;
                from_real_at_least_one(&v)?
            }
        };
        let s = slog(&big, prec)?;
        return Ok(match s {
            Num::Exact(q) => Num::Exact(-q),
            Num::Approx(r) => Num::Approx(r.neg()),
        });
    }
    let m = int(x.level as i64 - 1);
    let v = match &x.index {
        Num::Exact(r) => Num::Exact(m + r),
        Num::Approx(r) => Num::Approx(r.add(&Real::from_rational(&m, r.bits()))),
    };
    Ok(if x.reciprocal {
        match v {
            Num::Exact(q) => Num::Exact(-q),
            Num::Approx(r) => Num::Approx(r.neg()),
        }
    } else {
        v
    })
}

fn from_real_at_least_one(v: &Real) -> Result<LevelIndex, LiError> {
    if !v.at_least(1) {
        return Err(LiError::PrecisionExhausted(format!("cannot place {v} relative to 1")));
    }
    let mut v = v.clone();
    let mut level = 0;
    loop {
        v = v.ln().ok_or_else(|| LiError::PrecisionExhausted("logarithm of a non-positive enclosure".into()))?;
        level += 1;
        if v.below(1) {
            return Ok(LevelIndex { reciprocal: false, level, index: Num::Approx(v.clamp(0, 1)) });
        }
        if !v.at_least(1) {
            return Err(LiError::PrecisionExhausted(format!("iterated logarithm {v} straddles 1")));
        }
    }
}

/// Level-index form of a non-negative rational. Exact on `[0, 1]`.
pub fn li_from_rational(q: &Rational, prec: Precision) -> Result<LevelIndex, LiError> {
    if q.is_negative() {
        return Err(LiError::Domain(format!("{q} is negative")));
    }
    if q < &Rational::one() {
        return Ok(LevelIndex { reciprocal: false, level: 0, index: Num::Exact(q.clone()) });
    }
    if q.is_one() {
        return Ok(LevelIndex::one());
    }
    from_real_at_least_one(&Real::from_rational(q, prec.bits()))
}

/// Enclosure of the value, if it fits below `exp(EXP_CAP)`. Reciprocals of
/// huge values come back as `[0, ulp]`.
pub fn li_to_real(x: &LevelIndex, prec: Precision) -> Option<Real> {
    let bits = prec.bits().max(x.index.bits());
    let mut v = x.index.to_real(bits);
    for _ in 0..x.level {
        if !v.below(EXP_CAP) {
            if x.reciprocal {
                return Some(Real::from_int(0, bits).widen(1).clamp(0, 1));
            }
            return None;
        }
        v = v.exp()?;
    }
    if x.reciprocal {
        v.recip()
    } else {
        Some(v)
    }
}

/// `exp` on level-index numbers.
pub fn li_exp(x: &LevelIndex, prec: Precision) -> LevelIndex {
    if !x.reciprocal {
        return LevelIndex { reciprocal: false, level: x.level + 1, index: x.index.clone() };
    }
    // exp(s) with s = 1/exp^m(r) in (0, 1): level 1, index s
    let s = li_to_real(x, prec).expect("reciprocals always have an enclosure");
    LevelIndex { reciprocal: false, level: 1, index: Num::Approx(s.clamp(0, 1)) }
}

/// `ln` on level-index numbers; defined for values `>= 1`.
pub fn li_log(x: &LevelIndex) -> Result<LevelIndex, LiError> {
    if x.reciprocal || x.level == 0 {
        return Err(LiError::Domain(format!("ln of {x} is negative or undefined")));
    }
    Ok(LevelIndex { reciprocal: false, level: x.level - 1, index: x.index.clone() })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Region {
    Small,
    Recip,
    Big,
}

fn region(x: &LevelIndex) -> Region {
    if x.level == 0 {
        Region::Small
    } else if x.reciprocal {
        Region::Recip
    } else {
        Region::Big
    }
}

fn may_be_one(x: &LevelIndex) -> bool {
    x.level == 1 && x.index.cmp_num(&Num::Exact(Rational::zero())) != Some(Ordering::Greater)
}

/// Order comparison. `Unknown` when enclosures overlap.
pub fn li_compare(x: &LevelIndex, y: &LevelIndex) -> LiOrdering {
    use Region::*;
    let decided = |o: Option<Ordering>| o.map_or(LiOrdering::Unknown, LiOrdering::from);
    match (region(x), region(y)) {
        (Big, Big) => match x.level.cmp(&y.level) {
            Ordering::Equal => decided(x.index.cmp_num(&y.index)),
            o => o.into(),
        },
        (Recip, Recip) => match y.level.cmp(&x.level) {
            Ordering::Equal => decided(y.index.cmp_num(&x.index)),
            o => o.into(),
        },
        (Small, Small) => decided(x.index.cmp_num(&y.index)),
        (Big, Small) => LiOrdering::Greater,
        (Small, Big) => LiOrdering::Less,
        (Big, Recip) if may_be_one(x) && may_be_one(y) => LiOrdering::Unknown,
        (Big, Recip) => LiOrdering::Greater,
        (Recip, Big) if may_be_one(x) && may_be_one(y) => LiOrdering::Unknown,
        (Recip, Big) => LiOrdering::Less,
        (Small, Recip) | (Recip, Small) => {
            let p = Precision::default();
            match (li_to_real(x, p), li_to_real(y, p)) {
                (Some(a), Some(b)) => decided(a.cmp_certain(&b)),
                _ => LiOrdering::Unknown,
            }
        }
    }
}

// ln of the value, when representable.
fn log_real(x: &LevelIndex, prec: Precision) -> Result<Option<Real>, LiError> {
    if x.level == 0 {
        let r = x.index.to_real(prec.bits().max(x.index.bits()));
        return r.ln().map(Some).ok_or_else(|| LiError::PrecisionExhausted("ln of an enclosure touching 0".into()));
    }
    let inner = LevelIndex { reciprocal: false, level: x.level - 1, index: x.index.clone() };
    let v = li_to_real(&inner, prec);
    Ok(v.map(|v| if x.reciprocal { v.neg() } else { v }))
}

// Level-index form of exp(t).
fn exp_of_real(t: &Real) -> Result<LevelIndex, LiError> {
    if t.at_least(0) {
        if t.below(1) {
            return Ok(LevelIndex { reciprocal: false, level: 1, index: Num::Approx(t.clamp(0, 1)) });
        }
        if t.at_least(1) {
            let l = from_real_at_least_one(t)?;
            return Ok(LevelIndex { reciprocal: false, level: l.level + 1, index: l.index });
        }
        return Err(LiError::PrecisionExhausted(format!("log of product {t} straddles 1")));
    }
    if t.below(0) {
        let mut r = exp_of_real(&t.neg())?;
        r.reciprocal = true;
        return Ok(r);
    }
    Err(LiError::PrecisionExhausted(format!("log of product {t} straddles 0")))
}

/// Product of two level-index numbers.
///
/// Exact for zero, one and reciprocal pairs. Otherwise the logarithms are
/// added as intervals when both are below `e^10000`; when one logarithm is
/// beyond that and the other below `10^6`, the larger operand is returned
/// with its index widened by one ulp. Anything else is out of range.
pub fn li_mul(x: &LevelIndex, y: &LevelIndex, prec: Precision) -> Result<LevelIndex, LiError> {
    if x.is_zero() || y.is_zero() {
        return Ok(LevelIndex::zero());
    }
    if x.is_one() {
        return Ok(y.clone());
    }
    if y.is_one() {
        return Ok(x.clone());
    }
    if x.level == y.level && x.reciprocal != y.reciprocal && x.index == y.index && x.level > 0 {
        return Ok(LevelIndex::one());
    }
    match (log_real(x, prec)?, log_real(y, prec)?) {
        (Some(a), Some(b)) => exp_of_real(&a.add(&b)),
        (None, Some(b)) => dominated(x, &b, prec),
        (Some(a), None) => dominated(y, &a, prec),
        (None, None) => Err(LiError::PrecisionExhausted(format!("product of {x} and {y} is out of range"))),
    }
}

fn dominated(big: &LevelIndex, small_log: &Real, prec: Precision) -> Result<LevelIndex, LiError> {
    let bound = 1_000_000;
    if !(small_log.below(bound) && small_log.at_least(-bound)) {
        return Err(LiError::PrecisionExhausted("operands of comparable huge size".into()));
    }
    let bits = prec.bits().max(big.index.bits());
    let r = big.index.to_real(bits).widen(1).clamp(0, 1);
    Ok(big.with_index(Num::Approx(r)))
}
