//! Countable dense linear orders given by enumeration and comparison, and
//! lazily grown order isomorphisms between them (Cantor back-and-forth).
//!
//! A [`PartialIso`] is a finite, strictly increasing table of pairs. Queries
//! for unmatched elements insert a partner inside the cut the element
//! determines on the other side, so every table is extendable to a full
//! isomorphism and never changes once an entry is fixed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Bound;

use serde_json::{json, Value};

use crate::ordertype::{OrderElement, OrderTypeExpr};
use crate::rational::{eta_enumerate, parse_rational, simplest_between, Rational};

/// A countable linear order with a fixed enumeration.
pub trait DenseOrder {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    fn contains(&self, a: &Self::Elem) -> bool;

    /// Element at index `i`. May repeat or fall outside the order (a hole);
    /// callers filter with [`contains`](Self::contains).
    fn enumerate(&self, i: u64) -> Option<Self::Elem>;

    /// A member strictly inside the open cut, `None` if the cut is empty.
    fn witness(&self, lo: Option<&Self::Elem>, hi: Option<&Self::Elem>) -> Option<Self::Elem>;

    /// `(has minimum, has maximum)`.
    fn endpoints(&self) -> (bool, bool) {
        (false, false)
    }

    fn format(&self, a: &Self::Elem) -> String;

    fn parse(&self, s: &str) -> Result<Self::Elem, DloError>;

    /// Short identifier recorded in persisted tables.
    fn describe(&self) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DloError {
    #[error("{side} element {elem} is outside the presentation {order}")]
    OutOfDomain { side: &'static str, elem: String, order: String },
    #[error("no {side} element strictly between {lo} and {hi}: {order} is not dense here")]
    NotDense { side: &'static str, lo: String, hi: String, order: String },
    #[error("pin {left} -> {right} is not order-preserving against {other}")]
    NonMonotone { left: String, right: String, other: String },
    #[error("enumeration scan budget exhausted on the {0} side")]
    ScanExhausted(&'static str),
    #[error("bad iso artifact: {0}")]
    Artifact(String),
    #[error("replaying the query log does not reproduce the stored table: {0}")]
    Determinism(String),
}

/// ℚ with the Calkin-Wilf enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl DenseOrder for Rationals {
    type Elem = Rational;

    fn compare(&self, a: &Rational, b: &Rational) -> Ordering {
        a.cmp(b)
    }

    fn contains(&self, _: &Rational) -> bool {
        true
    }

    fn enumerate(&self, i: u64) -> Option<Rational> {
        Some(eta_enumerate(i))
    }

    fn witness(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> Option<Rational> {
        if let (Some(l), Some(h)) = (lo, hi) {
            if l >= h {
                return None;
            }
        }
        Some(simplest_between(lo, hi))
    }

    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<Rational, DloError> {
        parse_rational(s).map_err(|e| DloError::Artifact(e.to_string()))
    }

    fn describe(&self) -> String {
        "Q".into()
    }
}

impl DenseOrder for OrderTypeExpr {
    type Elem = OrderElement;

    fn compare(&self, a: &OrderElement, b: &OrderElement) -> Ordering {
        self.cmp_members(a, b)
    }

    fn contains(&self, a: &OrderElement) -> bool {
        OrderTypeExpr::contains(self, a)
    }

    fn enumerate(&self, i: u64) -> Option<OrderElement> {
        OrderTypeExpr::enumerate(self, i)
    }

    fn witness(&self, lo: Option<&OrderElement>, hi: Option<&OrderElement>) -> Option<OrderElement> {
        if let (Some(l), Some(h)) = (lo, hi) {
            if self.cmp_members(l, h) != Ordering::Less {
                return None;
            }
        }
        OrderTypeExpr::witness(self, lo, hi)
    }

    fn endpoints(&self) -> (bool, bool) {
        (self.has_min(), self.has_max())
    }

    fn format(&self, a: &OrderElement) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<OrderElement, DloError> {
        self.parse_element(s).map_err(|e| DloError::Artifact(e.to_string()))
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

/// Restriction of an order to an interval.
#[derive(Clone, Debug)]
pub struct Interval<O: DenseOrder> {
    pub inner: O,
    pub lower: Bound<O::Elem>,
    pub upper: Bound<O::Elem>,
}

impl<O: DenseOrder> Interval<O> {
    pub fn new(inner: O, lower: Bound<O::Elem>, upper: Bound<O::Elem>) -> Self {
        Interval { inner, lower, upper }
    }

    pub fn closed(inner: O, lo: O::Elem, hi: O::Elem) -> Self {
        Self::new(inner, Bound::Included(lo), Bound::Included(hi))
    }

    fn above_lower(&self, a: &O::Elem) -> bool {
        match &self.lower {
            Bound::Included(l) => self.inner.compare(a, l) != Ordering::Less,
            Bound::Excluded(l) => self.inner.compare(a, l) == Ordering::Greater,
            Bound::Unbounded => true,
        }
    }

    fn below_upper(&self, a: &O::Elem) -> bool {
        match &self.upper {
            Bound::Included(u) => self.inner.compare(a, u) != Ordering::Greater,
            Bound::Excluded(u) => self.inner.compare(a, u) == Ordering::Less,
            Bound::Unbounded => true,
        }
    }

    fn bound_text(&self) -> String {
        let lo = match &self.lower {
            Bound::Included(l) => format!("[{}", self.inner.format(l)),
            Bound::Excluded(l) => format!("({}", self.inner.format(l)),
            Bound::Unbounded => "(-inf".into(),
        };
        let hi = match &self.upper {
            Bound::Included(u) => format!("{}]", self.inner.format(u)),
            Bound::Excluded(u) => format!("{})", self.inner.format(u)),
            Bound::Unbounded => "+inf)".into(),
        };
        format!("{lo}, {hi}")
    }
}

impl<O: DenseOrder> DenseOrder for Interval<O> {
    type Elem = O::Elem;

    fn compare(&self, a: &O::Elem, b: &O::Elem) -> Ordering {
        self.inner.compare(a, b)
    }

    fn contains(&self, a: &O::Elem) -> bool {
        self.inner.contains(a) && self.above_lower(a) && self.below_upper(a)
    }

    fn enumerate(&self, i: u64) -> Option<O::Elem> {
        self.inner.enumerate(i).filter(|a| self.contains(a))
    }

    fn witness(&self, lo: Option<&O::Elem>, hi: Option<&O::Elem>) -> Option<O::Elem> {
        let bound_lo = match &self.lower {
            Bound::Included(l) | Bound::Excluded(l) => Some(l),
            Bound::Unbounded => None,
        };
        let bound_hi = match &self.upper {
            Bound::Included(u) | Bound::Excluded(u) => Some(u),
            Bound::Unbounded => None,
        };
        let lo = match (lo, bound_lo) {
            (Some(a), Some(b)) => Some(if self.inner.compare(a, b) == Ordering::Less { b } else { a }),
            (a, b) => a.or(b),
        };
        let hi = match (hi, bound_hi) {
            (Some(a), Some(b)) => Some(if self.inner.compare(a, b) == Ordering::Greater { b } else { a }),
            (a, b) => a.or(b),
        };
        self.inner.witness(lo, hi).filter(|w| self.contains(w))
    }

    fn endpoints(&self) -> (bool, bool) {
        let (imin, imax) = self.inner.endpoints();
        let min = match self.lower {
            Bound::Included(_) => true,
            Bound::Excluded(_) => false,
            Bound::Unbounded => imin,
        };
        let max = match self.upper {
            Bound::Included(_) => true,
            Bound::Excluded(_) => false,
            Bound::Unbounded => imax,
        };
        (min, max)
    }

    fn format(&self, a: &O::Elem) -> String {
        self.inner.format(a)
    }

    fn parse(&self, s: &str) -> Result<O::Elem, DloError> {
        let a = self.inner.parse(s)?;
        if !self.contains(&a) {
            return Err(DloError::Artifact(format!("{s} lies outside {}", self.bound_text())));
        }
        Ok(a)
    }

    fn describe(&self) -> String {
        format!("{}{}", self.inner.describe(), self.bound_text())
    }
}

/// Samples a presentation and checks that no two sampled neighbours are
/// adjacent and that missing endpoints are really missing.
pub fn spot_check_density<O: DenseOrder>(o: &O, samples: usize, scan: u64) -> Result<(), DloError> {
    let mut pts: Vec<O::Elem> = Vec::new();
    for i in 0..scan {
        if pts.len() >= samples {
            break;
        }
        if let Some(a) = o.enumerate(i) {
            if o.contains(&a) {
                pts.push(a);
            }
        }
    }
    if let Some(w) = o.witness(None, None) {
        pts.push(w);
    }
    pts.sort_by(|a, b| o.compare(a, b));
    pts.dedup_by(|a, b| o.compare(a, b) == Ordering::Equal);
    let not_dense = |lo: Option<&O::Elem>, hi: Option<&O::Elem>| DloError::NotDense {
        side: "sampled",
        lo: lo.map_or("-inf".into(), |a| o.format(a)),
        hi: hi.map_or("+inf".into(), |a| o.format(a)),
        order: o.describe(),
    };
    for w in pts.windows(2) {
        if o.witness(Some(&w[0]), Some(&w[1])).is_none() {
            return Err(not_dense(Some(&w[0]), Some(&w[1])));
        }
    }
    let (has_min, has_max) = o.endpoints();
    if let (Some(first), false) = (pts.first(), has_min) {
        if o.witness(None, Some(first)).is_none() {
            return Err(not_dense(None, Some(first)));
        }
    }
    if let (Some(last), false) = (pts.last(), has_max) {
        if o.witness(Some(last), None).is_none() {
            return Err(not_dense(Some(last), None));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Match<A, B> {
    pub left: A,
    pub right: B,
    pub pinned: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LogEntry<A, B> {
    Pin(A, B),
    Apply(A),
    Invert(B),
    Step,
}

const SCAN_BUDGET: u64 = 1 << 20;

/// A finite order-preserving table between two countable dense orders, grown
/// on demand.
#[derive(Clone, Debug)]
pub struct PartialIso<L: DenseOrder, R: DenseOrder> {
    left: L,
    right: R,
    seed: u64,
    pairs: Vec<Match<L::Elem, R::Elem>>,
    steps: u64,
    cursors: (u64, u64),
    log: Vec<LogEntry<L::Elem, R::Elem>>,
}

impl<L: DenseOrder, R: DenseOrder> PartialIso<L, R> {
    /// An empty table. Both sides are spot-checked for density first.
    pub fn new(left: L, right: R, seed: u64) -> Result<Self, DloError> {
        spot_check_density(&left, 16, 256)?;
        spot_check_density(&right, 16, 256)?;
        Ok(PartialIso { left, right, seed, pairs: Vec::new(), steps: 0, cursors: (0, 0), log: Vec::new() })
    }

    /// A table starting from the given pins, which must be increasing.
    pub fn pinned(left: L, right: R, seed: u64, pins: Vec<(L::Elem, R::Elem)>) -> Result<Self, DloError> {
        let mut iso = Self::new(left, right, seed)?;
        for (a, b) in pins {
            iso.add_pin(a, b)?;
        }
        Ok(iso)
    }

    pub fn left(&self) -> &L {
        &self.left
    }

    pub fn right(&self) -> &R {
        &self.right
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn pairs(&self) -> &[Match<L::Elem, R::Elem>] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn log(&self) -> &[LogEntry<L::Elem, R::Elem>] {
        &self.log
    }

    fn find_left(&self, a: &L::Elem) -> Result<usize, usize> {
        self.pairs.binary_search_by(|m| self.left.compare(&m.left, a))
    }

    fn find_right(&self, b: &R::Elem) -> Result<usize, usize> {
        self.pairs.binary_search_by(|m| self.right.compare(&m.right, b))
    }

    // Partner bounds around insertion point `i`, and whether only pins (or
    // nothing) delimit it.
    fn gap(&self, i: usize) -> (Option<&Match<L::Elem, R::Elem>>, Option<&Match<L::Elem, R::Elem>>, bool) {
        let pred = i.checked_sub(1).map(|j| &self.pairs[j]);
        let succ = self.pairs.get(i);
        let fresh = pred.is_none_or(|m| m.pinned) && succ.is_none_or(|m| m.pinned);
        (pred, succ, fresh)
    }

    fn right_partner(&self, i: usize) -> Result<R::Elem, DloError> {
        let (pred, succ, fresh) = self.gap(i);
        let lo = pred.map(|m| &m.right);
        let hi = succ.map(|m| &m.right);
        if fresh {
            if let Some(c) = self.right.enumerate(self.seed) {
                if self.right.contains(&c) && strictly_inside(&self.right, &c, lo, hi) {
                    return Ok(c);
                }
            }
        }
        self.right.witness(lo, hi).ok_or_else(|| DloError::NotDense {
            side: "right",
            lo: lo.map_or("-inf".into(), |b| self.right.format(b)),
            hi: hi.map_or("+inf".into(), |b| self.right.format(b)),
            order: self.right.describe(),
        })
    }

    fn left_partner(&self, i: usize) -> Result<L::Elem, DloError> {
        let (pred, succ, fresh) = self.gap(i);
        let lo = pred.map(|m| &m.left);
        let hi = succ.map(|m| &m.left);
        if fresh {
            if let Some(c) = self.left.enumerate(self.seed) {
                if self.left.contains(&c) && strictly_inside(&self.left, &c, lo, hi) {
                    return Ok(c);
                }
            }
        }
        self.left.witness(lo, hi).ok_or_else(|| DloError::NotDense {
            side: "left",
            lo: lo.map_or("-inf".into(), |a| self.left.format(a)),
            hi: hi.map_or("+inf".into(), |a| self.left.format(a)),
            order: self.left.describe(),
        })
    }

    /// Image of `a`, matching it first if needed.
    pub fn apply(&mut self, a: &L::Elem) -> Result<R::Elem, DloError> {
        if !self.left.contains(a) {
            return Err(DloError::OutOfDomain { side: "left", elem: self.left.format(a), order: self.left.describe() });
        }
        match self.find_left(a) {
            Ok(i) => Ok(self.pairs[i].right.clone()),
            Err(i) => {
                let b = self.right_partner(i)?;
                self.pairs.insert(i, Match { left: a.clone(), right: b.clone(), pinned: false });
                self.log.push(LogEntry::Apply(a.clone()));
                Ok(b)
            }
        }
    }

    /// Preimage of `b`, matching it first if needed.
    pub fn invert(&mut self, b: &R::Elem) -> Result<L::Elem, DloError> {
        if !self.right.contains(b) {
            return Err(DloError::OutOfDomain { side: "right", elem: self.right.format(b), order: self.right.describe() });
        }
        match self.find_right(b) {
            Ok(i) => Ok(self.pairs[i].left.clone()),
            Err(i) => {
                let a = self.left_partner(i)?;
                self.pairs.insert(i, Match { left: a.clone(), right: b.clone(), pinned: false });
                self.log.push(LogEntry::Invert(b.clone()));
                Ok(a)
            }
        }
    }

    /// Image of `a` if already matched.
    pub fn lookup(&self, a: &L::Elem) -> Option<&R::Elem> {
        self.find_left(a).ok().map(|i| &self.pairs[i].right)
    }

    /// Preimage of `b` if already matched.
    pub fn lookup_inverse(&self, b: &R::Elem) -> Option<&L::Elem> {
        self.find_right(b).ok().map(|i| &self.pairs[i].left)
    }

    pub fn add_pin(&mut self, a: L::Elem, b: R::Elem) -> Result<(), DloError> {
        if !self.left.contains(&a) {
            return Err(DloError::OutOfDomain { side: "left", elem: self.left.format(&a), order: self.left.describe() });
        }
        if !self.right.contains(&b) {
            return Err(DloError::OutOfDomain { side: "right", elem: self.right.format(&b), order: self.right.describe() });
        }
        let clash = |m: &Match<L::Elem, R::Elem>| DloError::NonMonotone {
            left: self.left.format(&a),
            right: self.right.format(&b),
            other: format!("{} -> {}", self.left.format(&m.left), self.right.format(&m.right)),
        };
        match self.find_left(&a) {
            Ok(i) => {
                if self.right.compare(&self.pairs[i].right, &b) != Ordering::Equal {
                    return Err(clash(&self.pairs[i]));
                }
                self.pairs[i].pinned = true;
            }
            Err(i) => {
                if let Some(m) = i.checked_sub(1).map(|j| &self.pairs[j]) {
                    if self.right.compare(&m.right, &b) != Ordering::Less {
                        return Err(clash(m));
                    }
                }
                if let Some(m) = self.pairs.get(i) {
                    if self.right.compare(&b, &m.right) != Ordering::Less {
                        return Err(clash(m));
                    }
                }
                self.pairs.insert(i, Match { left: a.clone(), right: b.clone(), pinned: true });
            }
        }
        self.log.push(LogEntry::Pin(a, b));
        Ok(())
    }

    /// One back-and-forth step: odd steps match the next unmatched left
    /// element in enumeration order, even steps the next unmatched right one.
    pub fn step(&mut self) -> Result<(), DloError> {
        let forth = self.steps % 2 == 0;
        let mut scanned = 0;
        loop {
            if scanned >= SCAN_BUDGET {
                return Err(DloError::ScanExhausted(if forth { "left" } else { "right" }));
            }
            scanned += 1;
            if forth {
                let c = self.cursors.0;
                self.cursors.0 += 1;
                let Some(a) = self.left.enumerate(c) else { continue };
                if !self.left.contains(&a) {
                    continue;
                }
                if let Err(i) = self.find_left(&a) {
                    let b = self.right_partner(i)?;
                    self.pairs.insert(i, Match { left: a, right: b, pinned: false });
                    break;
                }
            } else {
                let c = self.cursors.1;
                self.cursors.1 += 1;
                let Some(b) = self.right.enumerate(c) else { continue };
                if !self.right.contains(&b) {
                    continue;
                }
                if let Err(i) = self.find_right(&b) {
                    let a = self.left_partner(i)?;
                    self.pairs.insert(i, Match { left: a, right: b, pinned: false });
                    break;
                }
            }
        }
        self.steps += 1;
        self.log.push(LogEntry::Step);
        Ok(())
    }

    pub fn extend(&mut self, n: u64) -> Result<(), DloError> {
        (0..n).try_for_each(|_| self.step())
    }

    /// JSON form: seed, step count, presentations, pairs and the query log.
    pub fn to_json(&self) -> Value {
        let l = |a: &L::Elem| Value::String(self.left.format(a));
        let r = |b: &R::Elem| Value::String(self.right.format(b));
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|m| {
                if m.pinned {
                    json!([l(&m.left), r(&m.right), "pin"])
                } else {
                    json!([l(&m.left), r(&m.right)])
                }
            })
            .collect();
        let log: Vec<Value> = self
            .log
            .iter()
            .map(|e| match e {
                LogEntry::Pin(a, b) => json!(["pin", l(a), r(b)]),
                LogEntry::Apply(a) => json!(["apply", l(a)]),
                LogEntry::Invert(b) => json!(["invert", r(b)]),
                LogEntry::Step => json!(["step"]),
            })
            .collect();
        json!({
            "left": self.left.describe(),
            "right": self.right.describe(),
            "seed": self.seed,
            "steps": self.steps,
            "pairs": pairs,
            "log": log,
        })
    }

    /// Reloads a table: checks the stored pairs are strictly increasing, then
    /// replays the log from scratch and requires the same table.
    pub fn from_json(left: L, right: R, v: &Value) -> Result<Self, DloError> {
        let bad = |m: &str| DloError::Artifact(m.to_string());
        for (key, want) in [("left", left.describe()), ("right", right.describe())] {
            let got = v.get(key).and_then(Value::as_str).ok_or_else(|| bad(&format!("missing {key}")))?;
            if got != want {
                return Err(bad(&format!("{key} presentation is {got:?}, expected {want:?}")));
            }
        }
        let seed = v.get("seed").and_then(Value::as_u64).ok_or_else(|| bad("missing seed"))?;
        let steps = v.get("steps").and_then(Value::as_u64).ok_or_else(|| bad("missing steps"))?;
        let text = |x: &Value| x.as_str().map(str::to_string).ok_or_else(|| bad("expected a string"));
        let mut stored = Vec::new();
        for p in v.get("pairs").and_then(Value::as_array).ok_or_else(|| bad("missing pairs"))? {
            let p = p.as_array().ok_or_else(|| bad("pair is not an array"))?;
            if p.len() < 2 {
                return Err(bad("short pair"));
            }
            let a = left.parse(&text(&p[0])?)?;
            let b = right.parse(&text(&p[1])?)?;
            stored.push(Match { left: a, right: b, pinned: p.len() > 2 });
        }
        for w in stored.windows(2) {
            if left.compare(&w[0].left, &w[1].left) != Ordering::Less
                || right.compare(&w[0].right, &w[1].right) != Ordering::Less
            {
                return Err(DloError::NonMonotone {
                    left: left.format(&w[1].left),
                    right: right.format(&w[1].right),
                    other: format!("{} -> {}", left.format(&w[0].left), right.format(&w[0].right)),
                });
            }
        }
        let mut log = Vec::new();
        for e in v.get("log").and_then(Value::as_array).ok_or_else(|| bad("missing log"))? {
            let e = e.as_array().ok_or_else(|| bad("log entry is not an array"))?;
            let op = e.first().and_then(Value::as_str).ok_or_else(|| bad("log entry without op"))?;
            let arg = |k: usize| e.get(k).ok_or_else(|| bad("log entry too short")).and_then(text);
            log.push(match op {
                "pin" => LogEntry::Pin(left.parse(&arg(1)?)?, right.parse(&arg(2)?)?),
                "apply" => LogEntry::Apply(left.parse(&arg(1)?)?),
                "invert" => LogEntry::Invert(right.parse(&arg(1)?)?),
                "step" => LogEntry::Step,
                other => return Err(bad(&format!("unknown log op {other:?}"))),
            });
        }
        let mut iso = Self::new(left, right, seed)?;
        iso.replay(&log)?;
        if iso.steps != steps {
            return Err(DloError::Determinism(format!("step count {} != stored {steps}", iso.steps)));
        }
        if iso.pairs.len() != stored.len() {
            return Err(DloError::Determinism(format!("{} pairs != stored {}", iso.pairs.len(), stored.len())));
        }
        for (m, s) in iso.pairs.iter().zip(&stored) {
            if iso.left.compare(&m.left, &s.left) != Ordering::Equal
                || iso.right.compare(&m.right, &s.right) != Ordering::Equal
                || m.pinned != s.pinned
            {
                return Err(DloError::Determinism(format!(
                    "replayed {} -> {} but stored {} -> {}",
                    iso.left.format(&m.left),
                    iso.right.format(&m.right),
                    iso.left.format(&s.left),
                    iso.right.format(&s.right)
                )));
            }
        }
        Ok(iso)
    }

    /// Re-runs a query log against this table.
    pub fn replay(&mut self, log: &[LogEntry<L::Elem, R::Elem>]) -> Result<(), DloError> {
        for e in log {
            match e {
                LogEntry::Pin(a, b) => self.add_pin(a.clone(), b.clone())?,
                LogEntry::Apply(a) => {
                    self.apply(a)?;
                }
                LogEntry::Invert(b) => {
                    self.invert(b)?;
                }
                LogEntry::Step => self.step()?,
            }
        }
        Ok(())
    }
}

fn strictly_inside<O: DenseOrder>(o: &O, c: &O::Elem, lo: Option<&O::Elem>, hi: Option<&O::Elem>) -> bool {
    lo.is_none_or(|l| o.compare(l, c) == Ordering::Less) && hi.is_none_or(|h| o.compare(c, h) == Ordering::Less)
}

/// Isomorphism between two closed intervals with both endpoint pairs pinned.
pub fn pinned_interval_iso<L: DenseOrder, R: DenseOrder>(
    left: L,
    right: R,
    seed: u64,
    low: (L::Elem, R::Elem),
    high: (L::Elem, R::Elem),
) -> Result<PartialIso<Interval<L>, Interval<R>>, DloError> {
    let li = Interval::closed(left, low.0.clone(), high.0.clone());
    let ri = Interval::closed(right, low.1.clone(), high.1.clone());
    PartialIso::pinned(li, ri, seed, vec![low, high])
}
