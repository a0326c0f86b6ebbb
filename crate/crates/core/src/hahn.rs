//! Finite-support Hahn sums `G = ⨿_Δ ℚ`: maps `Δ → ℚ` with finite support,
//! ordered by the sign of the coefficient at the least exponent.
//!
//! Text form: `c@e` terms joined by `+`, e.g. `-1@0 + 1/2@3`, with `0` for
//! the zero element.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::dlo::{DenseOrder, DloError};
use crate::ordertype::{cantor_unpair, OrderElement, OrderTypeError, OrderTypeExpr};
use crate::rational::{eta_enumerate, parse_rational, simplest_between, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HahnElement {
    delta: Arc<OrderTypeExpr>,
    /// Sorted by exponent, no zero coefficients.
    terms: Vec<(OrderElement, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HahnError {
    #[error("elements live over different exponent orders: {0} vs {1}")]
    DeltaMismatch(String, String),
    #[error("the valuation of 0 is undefined")]
    ZeroValuation,
    #[error(transparent)]
    Exponent(#[from] OrderTypeError),
    #[error("bad Hahn literal at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl HahnElement {
    pub fn zero(delta: &Arc<OrderTypeExpr>) -> Self {
        HahnElement { delta: delta.clone(), terms: Vec::new() }
    }

    /// `c · 𝟙_e`.
    pub fn monomial(delta: &Arc<OrderTypeExpr>, e: OrderElement, c: Rational) -> Result<Self, HahnError> {
        delta.check(&e)?;
        let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
        Ok(HahnElement { delta: delta.clone(), terms })
    }

    /// The indicator `𝟙_e`.
    pub fn indicator(delta: &Arc<OrderTypeExpr>, e: OrderElement) -> Result<Self, HahnError> {
        Self::monomial(delta, e, Rational::one())
    }

    /// Builds an element from arbitrary terms, merging repeated exponents.
    pub fn from_terms(delta: &Arc<OrderTypeExpr>, terms: Vec<(OrderElement, Rational)>) -> Result<Self, HahnError> {
        let mut acc = Self::zero(delta);
        for (e, c) in terms {
            acc = acc.add(&Self::monomial(delta, e, c)?)?;
        }
        Ok(acc)
    }

    pub fn delta(&self) -> &Arc<OrderTypeExpr> {
        &self.delta
    }

    pub fn terms(&self) -> &[(OrderElement, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&OrderElement, &Rational)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// Sign as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some((_, c)) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    /// The valuation: least exponent in the support.
    pub fn vg(&self) -> Result<&OrderElement, HahnError> {
        self.leading().map(|(e, _)| e).ok_or(HahnError::ZeroValuation)
    }

    pub fn coefficient(&self, e: &OrderElement) -> Rational {
        self.terms
            .binary_search_by(|(x, _)| self.delta.cmp_members(x, e))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    fn same_delta(&self, other: &Self) -> Result<(), HahnError> {
        if Arc::ptr_eq(&self.delta, &other.delta) || self.delta == other.delta {
            Ok(())
        } else {
            Err(HahnError::DeltaMismatch(self.delta.to_string(), other.delta.to_string()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HahnError> {
        self.same_delta(other)?;
        let d = &self.delta;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => d.cmp_members(&x.0, &y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(HahnElement { delta: d.clone(), terms: out })
    }

    pub fn neg(&self) -> Self {
        HahnElement { delta: self.delta.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HahnError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.delta);
        }
        HahnElement { delta: self.delta.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect() }
    }

    pub fn compare(&self, other: &Self) -> Result<Ordering, HahnError> {
        self.same_delta(other)?;
        Ok(self.cmp_same_delta(other))
    }

    fn cmp_same_delta(&self, other: &Self) -> Ordering {
        let d = &self.delta;
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, c)), None) => return sign(c),
                (None, Some((_, c))) => return sign(c).reverse(),
                (Some((e1, c1)), Some((e2, c2))) => match d.cmp_members(e1, e2) {
                    Ordering::Less => return sign(c1),
                    Ordering::Greater => return sign(c2).reverse(),
                    Ordering::Equal => {
                        if c1 != c2 {
                            return c1.cmp(c2);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|(e, c)| json!([e.to_string(), c.to_string()])).collect();
        json!({ "delta": self.delta.to_string(), "terms": terms })
    }

    pub fn from_json(delta: &Arc<OrderTypeExpr>, v: &Value) -> Result<Self, HahnError> {
        let bad = |msg: &str| HahnError::Parse { pos: 0, msg: msg.to_string() };
        let d = v.get("delta").and_then(Value::as_str).ok_or_else(|| bad("missing delta"))?;
        if d != delta.to_string() {
            return Err(HahnError::DeltaMismatch(d.to_string(), delta.to_string()));
        }
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let (Some(e), Some(c)) = (t.get(0).and_then(Value::as_str), t.get(1).and_then(Value::as_str)) else {
                return Err(bad("term must be [exponent, coefficient]"));
            };
            let e = delta.parse_element(e)?;
            let c = parse_rational(c).map_err(|err| bad(&err.to_string()))?;
            terms.push((e, c));
        }
        Self::from_terms(delta, terms)
    }
}

fn sign(c: &Rational) -> Ordering {
    if c.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl PartialOrd for HahnElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl fmt::Display for HahnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}@{e}")?;
        }
        Ok(())
    }
}

/// Parses the `c@e + ...` text form over `delta`.
pub fn parse_hahn(delta: &Arc<OrderTypeExpr>, src: &str) -> Result<HahnElement, HahnError> {
    if src.trim() == "0" {
        return Ok(HahnElement::zero(delta));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for piece in src.split('+') {
        let at = start;
        start += piece.len() + 1;
        let lead = piece.len() - piece.trim_start().len();
        let Some((c, e)) = piece.split_once('@') else {
            return Err(HahnError::Parse { pos: at + lead, msg: format!("expected coeff@exponent, found {:?}", piece.trim()) });
        };
        let c = parse_rational(c).map_err(|err| HahnError::Parse { pos: at + lead, msg: err.to_string() })?;
        let e = delta.parse_element(e.trim()).map_err(|err| match err {
            OrderTypeError::Syntax { pos, msg } => HahnError::Parse { pos: at + piece.find('@').unwrap() + 1 + pos, msg },
            other => other.into(),
        })?;
        terms.push((e, c));
    }
    HahnElement::from_terms(delta, terms)
}

/// The Hahn sum over `delta` as a countable dense order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HahnGroup {
    pub delta: Arc<OrderTypeExpr>,
}

impl HahnGroup {
    pub fn new(delta: Arc<OrderTypeExpr>) -> Self {
        HahnGroup { delta }
    }

    pub fn indicator(&self, e: OrderElement) -> Result<HahnElement, HahnError> {
        HahnElement::indicator(&self.delta, e)
    }

    fn monomial(&self, e: &OrderElement, c: Rational) -> HahnElement {
        HahnElement { delta: self.delta.clone(), terms: vec![(e.clone(), c)] }
    }

    fn above(&self, g: &HahnElement) -> HahnElement {
        match g.signum() {
            Ordering::Less => HahnElement::zero(&self.delta),
            Ordering::Equal => {
                let w = self.delta.witness(None, None).expect("non-empty");
                self.monomial(&w, Rational::one())
            }
            Ordering::Greater => {
                let (d, c) = g.leading().unwrap();
                match self.delta.witness(None, Some(d)) {
                    Some(d2) => self.monomial(&d2, Rational::one()),
                    None => self.monomial(d, c.floor() + Rational::one()),
                }
            }
        }
    }
}

impl DenseOrder for HahnGroup {
    type Elem = HahnElement;

    fn compare(&self, a: &HahnElement, b: &HahnElement) -> Ordering {
        a.cmp_same_delta(b)
    }

    fn contains(&self, a: &HahnElement) -> bool {
        *a.delta == *self.delta && a.terms.iter().all(|(e, c)| self.delta.contains(e) && !c.is_zero())
    }

    /// `0` at index 0; otherwise `i - 1` splits into a term count `k + 1`
    /// and a code for `k + 1` terms, each an exponent index paired with a
    /// non-zero coefficient index.
    fn enumerate(&self, i: u64) -> Option<HahnElement> {
        let mut g = HahnElement::zero(&self.delta);
        if i == 0 {
            return Some(g);
        }
        let (k, mut rest) = cantor_unpair(i - 1);
        for t in 0..=k {
            let code = if t == k {
                rest
            } else {
                let (c, r) = cantor_unpair(rest);
                rest = r;
                c
            };
            let (x, y) = cantor_unpair(code);
            let x = match self.delta.cardinality() {
                Some(card) => x % card,
                None => x,
            };
            let e = self.delta.enumerate(x)?;
            g = g.add(&self.monomial(&e, eta_enumerate(y + 1))).ok()?;
        }
        Some(g)
    }

    fn witness(&self, lo: Option<&HahnElement>, hi: Option<&HahnElement>) -> Option<HahnElement> {
        match (lo, hi) {
            (None, None) => Some(HahnElement::zero(&self.delta)),
            (Some(g), None) => Some(self.above(g)),
            (None, Some(g)) => Some(self.above(&g.neg()).neg()),
            (Some(g1), Some(g2)) => {
                if g1.cmp_same_delta(g2) != Ordering::Less {
                    return None;
                }
                if g1.signum() == Ordering::Less && g2.signum() == Ordering::Greater {
                    return Some(HahnElement::zero(&self.delta));
                }
                let diff = g2.sub(g1).ok()?;
                let d = diff.vg().ok()?.clone();
                let mut terms: Vec<(OrderElement, Rational)> = g1
                    .terms
                    .iter()
                    .take_while(|(e, _)| self.delta.cmp_members(e, &d) == Ordering::Less)
                    .cloned()
                    .collect();
                let (c1, c2) = (g1.coefficient(&d), g2.coefficient(&d));
                let x = simplest_between(Some(&c1), Some(&c2));
                if !x.is_zero() {
                    terms.push((d, x));
                }
                Some(HahnElement { delta: self.delta.clone(), terms })
            }
        }
    }

    fn format(&self, a: &HahnElement) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<HahnElement, DloError> {
        parse_hahn(&self.delta, s).map_err(|e| DloError::Artifact(e.to_string()))
    }

    fn describe(&self) -> String {
        format!("G({})", self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordertype::parse_ordertype;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn eta() -> Arc<OrderTypeExpr> {
        Arc::new(OrderTypeExpr::Eta)
    }

    fn h(s: &str) -> HahnElement {
        parse_hahn(&eta(), s).unwrap()
    }

    #[test]
    fn ordering_is_leading_sign() {
        assert_eq!(h("1@0").compare(&h("1000@1")), Ok(Ordering::Greater));
        assert_eq!(h("-1@0").compare(&h("-1000@1")), Ok(Ordering::Less));
        assert_eq!(h("1@0 + -5@2").compare(&h("1@0 + -4@2")), Ok(Ordering::Less));
        assert_eq!(h("0").compare(&h("-1@7")), Ok(Ordering::Greater));
    }

    #[test]
    fn literal_roundtrip() {
        let g = h("2@1/2 + -1/3@-4 + 5@1/2");
        assert_eq!(g.to_string(), "-1/3@-4 + 7@1/2");
        assert_eq!(h(&g.to_string()), g);
        assert_eq!(h("1@0 + -1@0"), h("0"));
    }

    #[test]
    fn literal_errors() {
        assert!(matches!(parse_hahn(&eta(), "1@0 + x"), Err(HahnError::Parse { pos: 6, .. })));
        assert!(matches!(parse_hahn(&eta(), "q@0"), Err(HahnError::Parse { pos: 0, .. })));
        let three = Arc::new(parse_ordertype("3").unwrap());
        assert!(matches!(parse_hahn(&three, "1@5"), Err(HahnError::Exponent(_))));
    }

    #[test]
    fn delta_mismatch_is_an_error() {
        let other = Arc::new(parse_ordertype("eta + eta").unwrap());
        let g = HahnElement::indicator(&other, other.parse_element("L(0)").unwrap()).unwrap();
        assert!(matches!(h("1@0").add(&g), Err(HahnError::DeltaMismatch(..))));
        assert!(h("1@0").partial_cmp(&g).is_none());
    }

    #[test]
    fn valuation_of_zero_fails() {
        assert_eq!(h("0").vg(), Err(HahnError::ZeroValuation));
        assert_eq!(h("3@2 + 1@-1").vg().unwrap(), &OrderElement::Rat(int(-1)));
    }

    #[test]
    fn witness_inside_lambda_interval() {
        let gr = HahnGroup::new(eta());
        let w = gr.witness(Some(&h("-1@1")), Some(&h("-1@2"))).unwrap();
        assert_eq!(w, h("-1/2@1"));
        let w = gr.witness(Some(&h("1@0 + 1@3")), Some(&h("1@0 + 2@3"))).unwrap();
        assert_eq!(w, h("1@0 + 3/2@3"));
    }

    #[test]
    fn json_roundtrip() {
        let g = h("-1/3@-4 + 7@1/2");
        assert_eq!(HahnElement::from_json(&eta(), &g.to_json()).unwrap(), g);
    }

    #[test]
    fn enumeration_is_spread() {
        let gr = HahnGroup::new(eta());
        assert_eq!(gr.enumerate(0).unwrap(), h("0"));
        assert_eq!(gr.enumerate(1).unwrap(), h("1@0"));
        let seen: std::collections::HashSet<String> = (0..2000).map(|i| gr.enumerate(i).unwrap().to_string()).collect();
        assert!(seen.len() > 700, "{}", seen.len());
        assert!(seen.contains("-1@0"));
    }

    fn arb_elem() -> impl Strategy<Value = HahnElement> {
        prop::collection::vec((-6i64..6, 1i64..4, -5i64..5, 1i64..4), 0..5).prop_map(|ts| {
            let terms = ts.into_iter().map(|(en, ed, cn, cd)| (OrderElement::Rat(rat(en, ed)), rat(cn, cd))).collect();
            HahnElement::from_terms(&eta(), terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            let z = HahnElement::zero(&eta());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.add(&z).unwrap(), a.clone());
            prop_assert_eq!(a.add(&a.neg()).unwrap(), z);
            prop_assert_eq!(a.scale(&rat(2, 3)).scale(&rat(3, 2)), a.clone());
        }

        #[test]
        fn order_is_translation_invariant(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            let lhs = a.compare(&b).unwrap();
            prop_assert_eq!(a.add(&c).unwrap().compare(&b.add(&c).unwrap()).unwrap(), lhs);
            prop_assert_eq!(lhs, a.sub(&b).unwrap().signum());
        }

        #[test]
        fn valuation_ultrametric(a in arb_elem(), b in arb_elem()) {
            let s = a.add(&b).unwrap();
            if let (Ok(va), Ok(vb), Ok(vs)) = (a.vg(), b.vg(), s.vg()) {
                let m = if eta().cmp_members(va, vb) == Ordering::Less { va } else { vb };
                prop_assert_ne!(eta().cmp_members(vs, m), Ordering::Less);
            }
        }

        #[test]
        fn witness_between(a in arb_elem(), b in arb_elem()) {
            let gr = HahnGroup::new(eta());
            match a.compare(&b).unwrap() {
                Ordering::Equal => prop_assert!(gr.witness(Some(&a), Some(&b)).is_none()),
                ord => {
                    let (lo, hi) = if ord == Ordering::Less { (&a, &b) } else { (&b, &a) };
                    let w = gr.witness(Some(lo), Some(hi)).unwrap();
                    prop_assert_eq!(lo.compare(&w).unwrap(), Ordering::Less);
                    prop_assert_eq!(w.compare(hi).unwrap(), Ordering::Less);
                }
            }
            let up = gr.witness(Some(&a), None).unwrap();
            prop_assert_eq!(a.compare(&up).unwrap(), Ordering::Less);
            let down = gr.witness(None, Some(&a)).unwrap();
            prop_assert_eq!(down.compare(&a).unwrap(), Ordering::Less);
        }
    }
}
