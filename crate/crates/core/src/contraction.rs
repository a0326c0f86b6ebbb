//! Contraction maps `χ: G^{<0} → G^{<0}` on `G = ⨿_ℚ ℚ` whose rank (the
//! chain of `∼_χ` classes) is a prescribed countable order `Δ`.
//!
//! Fix an order isomorphism `η: Δ×ℚ → ℚ`. Block `δ` owns the convex set
//! `C_δ = η({δ}×ℚ)` with anchor `c_δ = η(δ,0)`, and `θ^k(c_δ) = η(δ,k)`.
//! On each block, `λ` maps `[θ^k c, θ^{k+1} c]` onto
//! `[-𝟙_{θ^{k+2} c}, -𝟙_{θ^{k+3} c}]` with both endpoints pinned, and
//! `χ(g) = λ(vg(g))`. Everything is materialized lazily.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::{Arc, LazyLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dlo::{pinned_interval_iso, DloError, Interval, PartialIso, Rationals};
use crate::hahn::{HahnElement, HahnError, HahnGroup};
use crate::ordertype::{OrderElement, OrderTypeError, OrderTypeExpr};
use crate::rational::{floor_i64, int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractionError {
    #[error("{0} is not a negative element")]
    NotNegative(String),
    #[error("iteration budget must be positive")]
    ZeroBudget,
    #[error("{0} does not fit the supported range")]
    Range(String),
    #[error("bad contraction artifact: {0}")]
    Artifact(String),
    #[error(transparent)]
    Dlo(#[from] DloError),
    #[error(transparent)]
    Hahn(#[from] HahnError),
    #[error(transparent)]
    OrderType(#[from] OrderTypeError),
}

type LambdaIso = PartialIso<Interval<Rationals>, Interval<HahnGroup>>;

/// A contraction map on negative elements.
pub trait Contraction {
    fn apply(&mut self, g: &HahnElement) -> Result<HahnElement, ContractionError>;

    /// Class label when the map knows it exactly.
    fn class_key(&mut self, _g: &HahnElement) -> Result<Option<OrderElement>, ContractionError> {
        Ok(None)
    }

    /// Some `p` with `apply(p) = g`, when the map can produce one.
    fn preimage(&mut self, _g: &HahnElement) -> Result<Option<HahnElement>, ContractionError> {
        Ok(None)
    }

    fn sample_negative(&mut self, rng: &mut ChaCha8Rng) -> Result<HahnElement, ContractionError>;
}

#[derive(Clone, Debug)]
pub struct ChiStructure {
    delta: Arc<OrderTypeExpr>,
    group: HahnGroup,
    seed: u64,
    eta: PartialIso<OrderTypeExpr, Rationals>,
    lambdas: BTreeMap<(String, i64), LambdaIso>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Equivalence {
    Equivalent { iterations: u32 },
    NotEquivalent,
    Unknown { budget: u32 },
}

pub const DEFAULT_BUDGET: u32 = 64;

static ETA: LazyLock<Arc<OrderTypeExpr>> = LazyLock::new(|| Arc::new(OrderTypeExpr::Eta));

/// `-𝟙_q` in `G`.
pub fn neg_indicator(q: Rational) -> HahnElement {
    HahnElement::indicator(&ETA, OrderElement::Rat(q)).expect("rational exponent").neg()
}

fn exponent(g: &HahnElement) -> Result<Rational, ContractionError> {
    match g.vg()? {
        OrderElement::Rat(q) => Ok(q.clone()),
        other => Err(ContractionError::Range(format!("exponent {other}"))),
    }
}

impl ChiStructure {
    pub fn new(delta: OrderTypeExpr, seed: u64) -> Result<Self, ContractionError> {
        let blocks = OrderTypeExpr::lex(delta.clone(), OrderTypeExpr::Eta);
        let eta = PartialIso::new(blocks, Rationals, seed)?;
        Ok(ChiStructure {
            delta: Arc::new(delta),
            group: HahnGroup::new(ETA.clone()),
            seed,
            eta,
            lambdas: BTreeMap::new(),
        })
    }

    /// The rank `Δ`.
    pub fn delta(&self) -> &Arc<OrderTypeExpr> {
        &self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `G = ⨿_ℚ ℚ`.
    pub fn group(&self) -> &HahnGroup {
        &self.group
    }

    pub fn eta_table(&self) -> &PartialIso<OrderTypeExpr, Rationals> {
        &self.eta
    }

    /// `θ^k(c_δ) = η(δ, k)`; `k` may be any rational.
    pub fn orbit(&mut self, block: &OrderElement, k: &Rational) -> Result<Rational, ContractionError> {
        self.delta.check(block)?;
        let e = OrderElement::pair(block.clone(), OrderElement::Rat(k.clone()));
        Ok(self.eta.apply(&e)?)
    }

    /// The anchor `c_δ`.
    pub fn anchor(&mut self, block: &OrderElement) -> Result<Rational, ContractionError> {
        self.orbit(block, &int(0))
    }

    /// `η⁻¹(q)` as (block, position within the block).
    pub fn locate(&mut self, q: &Rational) -> Result<(OrderElement, Rational), ContractionError> {
        let e = self.eta.invert(q)?;
        let (b, r) = e.as_pair().expect("block pair");
        Ok((b.clone(), r.as_rat().expect("rational coordinate").clone()))
    }

    /// `θ(q)`, the conjugated successor inside `q`'s block.
    pub fn theta(&mut self, q: &Rational) -> Result<Rational, ContractionError> {
        let (b, r) = self.locate(q)?;
        self.orbit(&b, &(r + int(1)))
    }

    fn floor_index(r: &Rational) -> Result<i64, ContractionError> {
        floor_i64(r).filter(|k| k.abs() < 1 << 40).ok_or_else(|| ContractionError::Range(format!("block position {r}")))
    }

    fn lambda_iso(&mut self, block: &OrderElement, k: i64) -> Result<&mut LambdaIso, ContractionError> {
        let key = (block.to_string(), k);
        if !self.lambdas.contains_key(&key) {
            let lo = self.orbit(block, &int(k))?;
            let hi = self.orbit(block, &int(k + 1))?;
            let glo = neg_indicator(self.orbit(block, &int(k + 2))?);
            let ghi = neg_indicator(self.orbit(block, &int(k + 3))?);
            let iso = pinned_interval_iso(Rationals, self.group.clone(), self.seed, (lo, glo), (hi, ghi))?;
            self.lambdas.insert(key.clone(), iso);
        }
        Ok(self.lambdas.get_mut(&key).unwrap())
    }

    /// `λ(q)` in `G^{<0}`.
    pub fn lambda(&mut self, q: &Rational) -> Result<HahnElement, ContractionError> {
        let (b, r) = self.locate(q)?;
        let k = Self::floor_index(&r)?;
        if r == int(k) {
            let top = self.orbit(&b, &int(k + 2))?;
            return Ok(neg_indicator(top));
        }
        Ok(self.lambda_iso(&b, k)?.apply(q)?)
    }

    /// `λ⁻¹(g)` for `g < 0`.
    pub fn lambda_inverse(&mut self, g: &HahnElement) -> Result<Rational, ContractionError> {
        self.require_negative(g)?;
        let q = exponent(g)?;
        let (b, r) = self.locate(&q)?;
        let mut j = Self::floor_index(&r)?;
        let floor_ind = neg_indicator(self.orbit(&b, &int(j))?);
        if g.compare(&floor_ind)? == Ordering::Less {
            j -= 1;
        }
        let k = j - 2;
        let edge = neg_indicator(self.orbit(&b, &int(j))?);
        if g.compare(&edge)? == Ordering::Equal {
            return self.orbit(&b, &int(k));
        }
        Ok(self.lambda_iso(&b, k)?.invert(g)?)
    }

    fn require_negative(&self, g: &HahnElement) -> Result<(), ContractionError> {
        if **g.delta() != OrderTypeExpr::Eta {
            return Err(HahnError::DeltaMismatch(g.delta().to_string(), "eta".into()).into());
        }
        if g.signum() != Ordering::Less {
            return Err(ContractionError::NotNegative(g.to_string()));
        }
        Ok(())
    }

    /// `χ(g) = λ(vg(g))`.
    pub fn chi_apply(&mut self, g: &HahnElement) -> Result<HahnElement, ContractionError> {
        self.require_negative(g)?;
        self.lambda(&exponent(g)?)
    }

    /// The `∼_χ` class of `g`, as an element of `Δ`.
    pub fn class_of(&mut self, g: &HahnElement) -> Result<OrderElement, ContractionError> {
        self.require_negative(g)?;
        Ok(self.locate(&exponent(g)?)?.0)
    }

    /// `ζ(q) = vg(λ(q))`.
    pub fn shift(&mut self, q: &Rational) -> Result<Rational, ContractionError> {
        exponent(&self.lambda(q)?)
    }

    pub fn equiv_budgeted(&mut self, g: &HahnElement, h: &HahnElement, budget: u32) -> Result<Equivalence, ContractionError> {
        equiv_budgeted(self, g, h, budget)
    }

    pub fn to_json(&self) -> Value {
        let lambdas: Vec<Value> = self
            .lambdas
            .iter()
            .map(|((b, k), iso)| json!({ "block": b, "k": k, "table": iso.to_json() }))
            .collect();
        json!({
            "kind": "chi",
            "delta": self.delta.to_string(),
            "seed": self.seed,
            "eta": self.eta.to_json(),
            "lambda": lambdas,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ContractionError> {
        let bad = |m: &str| ContractionError::Artifact(m.to_string());
        if v.get("kind").and_then(Value::as_str) != Some("chi") {
            return Err(bad("not a chi artifact"));
        }
        let delta: OrderTypeExpr = v.get("delta").and_then(Value::as_str).ok_or_else(|| bad("missing delta"))?.parse()?;
        let seed = v.get("seed").and_then(Value::as_u64).ok_or_else(|| bad("missing seed"))?;
        let blocks = OrderTypeExpr::lex(delta.clone(), OrderTypeExpr::Eta);
        let eta = PartialIso::from_json(blocks, Rationals, v.get("eta").ok_or_else(|| bad("missing eta"))?)?;
        if eta.seed() != seed {
            return Err(bad("eta table seed differs from the artifact seed"));
        }
        let mut chi = ChiStructure {
            delta: Arc::new(delta),
            group: HahnGroup::new(ETA.clone()),
            seed,
            eta,
            lambdas: BTreeMap::new(),
        };
        for entry in v.get("lambda").and_then(Value::as_array).ok_or_else(|| bad("missing lambda"))? {
            let block = entry.get("block").and_then(Value::as_str).ok_or_else(|| bad("lambda without block"))?;
            let k = entry.get("k").and_then(Value::as_i64).ok_or_else(|| bad("lambda without k"))?;
            let block = chi.delta.parse_element(block)?;
            let ends: Vec<Rational> = (0..4)
                .map(|i| {
                    let e = OrderElement::pair(block.clone(), OrderElement::Rat(int(k + i)));
                    chi.eta.lookup(&e).cloned().ok_or_else(|| bad("lambda interval endpoints missing from eta"))
                })
                .collect::<Result<_, _>>()?;
            let left = Interval::closed(Rationals, ends[0].clone(), ends[1].clone());
            let right = Interval::closed(
                chi.group.clone(),
                neg_indicator(ends[2].clone()),
                neg_indicator(ends[3].clone()),
            );
            let table = entry.get("table").ok_or_else(|| bad("lambda without table"))?;
            let iso = PartialIso::from_json(left, right, table)?;
            if iso.seed() != seed {
                return Err(bad("lambda table seed differs from the artifact seed"));
            }
            chi.lambdas.insert((block.to_string(), k), iso);
        }
        Ok(chi)
    }

    /// Draws a negative element whose valuation sits in one of the first
    /// three blocks, at an orbit point a third of the time.
    pub fn sample(&mut self, rng: &mut ChaCha8Rng) -> Result<HahnElement, ContractionError> {
        let nblocks = self.delta.cardinality().map_or(3, |c| c.min(3));
        let block = self.delta.enumerate(rng.gen_range(0..nblocks)).expect("block");
        let k = rng.gen_range(-4i64..=4);
        let pos = if rng.gen_range(0..3) == 0 {
            int(k)
        } else {
            let d = rng.gen_range(2i64..=7);
            int(k) + rat(rng.gen_range(1..d), d)
        };
        let q = self.orbit(&block, &pos)?;
        let lead = match rng.gen_range(0..3) {
            0 => int(-1),
            _ => -rat(rng.gen_range(1..=9), rng.gen_range(1..=4)),
        };
        let mut terms = vec![(OrderElement::Rat(q.clone()), lead)];
        if rng.gen_bool(0.5) {
            let gap = rat(rng.gen_range(1..=5), rng.gen_range(1..=4));
            terms.push((OrderElement::Rat(q + gap), rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))));
        }
        Ok(HahnElement::from_terms(&self.group.delta, terms)?)
    }
}

impl Contraction for ChiStructure {
    fn apply(&mut self, g: &HahnElement) -> Result<HahnElement, ContractionError> {
        self.chi_apply(g)
    }

    fn class_key(&mut self, g: &HahnElement) -> Result<Option<OrderElement>, ContractionError> {
        self.class_of(g).map(Some)
    }

    fn preimage(&mut self, g: &HahnElement) -> Result<Option<HahnElement>, ContractionError> {
        let q = self.lambda_inverse(g)?;
        Ok(Some(neg_indicator(q)))
    }

    fn sample_negative(&mut self, rng: &mut ChaCha8Rng) -> Result<HahnElement, ContractionError> {
        self.sample(rng)
    }
}

/// Decides `g ∼_χ h` by iterating `χ` from the smaller element at most
/// `budget` times.
pub fn equiv_budgeted<C: Contraction + ?Sized>(
    map: &mut C,
    g: &HahnElement,
    h: &HahnElement,
    budget: u32,
) -> Result<Equivalence, ContractionError> {
    if budget == 0 {
        return Err(ContractionError::ZeroBudget);
    }
    for x in [g, h] {
        if x.signum() != Ordering::Less {
            return Err(ContractionError::NotNegative(x.to_string()));
        }
    }
    if let (Some(a), Some(b)) = (map.class_key(g)?, map.class_key(h)?) {
        if a != b {
            return Ok(Equivalence::NotEquivalent);
        }
    }
    let (lo, hi) = if g.compare(h)? == Ordering::Greater { (h, g) } else { (g, h) };
    if lo == hi {
        return Ok(Equivalence::Equivalent { iterations: 0 });
    }
    let mut x = lo.clone();
    for n in 1..=budget {
        x = map.apply(&x)?;
        if x.compare(hi)? != Ordering::Less {
            return Ok(Equivalence::Equivalent { iterations: n });
        }
    }
    Ok(Equivalence::Unknown { budget })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Negativity,
    Centripetality,
    ClassConstancy,
    Monotonicity,
    Surjectivity,
    OrbitBounds,
    Shift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples negative elements and checks the contraction axioms on them:
/// negativity and centripetality of `χ(g)`, constancy on archimedean
/// classes, monotonicity across the sorted sample, and that produced
/// preimages map back.
pub fn check_contraction<C: Contraction + ?Sized>(map: &mut C, samples: usize, seed: u64) -> Result<ContractionReport, ContractionError> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ContractionReport { seed, samples, checks: 0, violations: Vec::new() };
    let mut pts: Vec<(HahnElement, HahnElement)> = Vec::with_capacity(samples);
    let flag = |report: &mut ContractionReport, kind, witness: String| {
        report.violations.push(Violation { kind, witness: format!("{witness} (seed {seed})") });
    };
    for _ in 0..samples {
        let g = map.sample_negative(&mut rng)?;
        let x = map.apply(&g)?;
        report.checks += 2;
        if x.signum() != Ordering::Less {
            flag(&mut report, ViolationKind::Negativity, format!("chi({g}) = {x}"));
        }
        if g.compare(&x)? != Ordering::Less {
            flag(&mut report, ViolationKind::Centripetality, format!("chi({g}) = {x}"));
        }
        let factor = rat(rng.gen_range(1..=7), rng.gen_range(1..=7));
        let twin = g.scale(&factor);
        let tx = map.apply(&twin)?;
        report.checks += 1;
        if tx != x {
            flag(&mut report, ViolationKind::ClassConstancy, format!("chi({g}) = {x} but chi({twin}) = {tx}"));
        }
        if let Some(p) = map.preimage(&g)? {
            let back = map.apply(&p)?;
            report.checks += 1;
            if back != g {
                flag(&mut report, ViolationKind::Surjectivity, format!("preimage {p} of {g} maps to {back}"));
            }
        }
        pts.push((g, x));
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("same group"));
    for w in pts.windows(2) {
        report.checks += 1;
        if w[0].1.compare(&w[1].1)? == Ordering::Greater {
            flag(
                &mut report,
                ViolationKind::Monotonicity,
                format!("{} <= {} but chi gives {} > {}", w[0].0, w[1].0, w[0].1, w[1].1),
            );
        }
    }
    Ok(report)
}

/// Checks `vg(g) ≤ θ^{k+1}c < θ^{k+2}c ≤ vg(χ(g))` where `vg(g)` lies in
/// `[θ^k c, θ^{k+1} c)` of its block, and `ζ(θ^k c) = θ^{k+2} c` for
/// `|k| ≤ orbit_radius` on the first three blocks.
pub fn check_orbit_bounds(chi: &mut ChiStructure, samples: usize, orbit_radius: i64, seed: u64) -> Result<ContractionReport, ContractionError> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ContractionReport { seed, samples, checks: 0, violations: Vec::new() };
    for _ in 0..samples {
        let g = chi.sample(&mut rng)?;
        let q = exponent(&g)?;
        let (b, r) = chi.locate(&q)?;
        let k = ChiStructure::floor_index(&r)?;
        let up = chi.orbit(&b, &int(k + 1))?;
        let up2 = chi.orbit(&b, &int(k + 2))?;
        let v = exponent(&chi.chi_apply(&g)?)?;
        report.checks += 1;
        if !(q <= up && up < up2 && up2 <= v) {
            report.violations.push(Violation {
                kind: ViolationKind::OrbitBounds,
                witness: format!("g = {g}: vg {q}, theta^(k+1) {up}, theta^(k+2) {up2}, vg(chi g) {v} (seed {seed})"),
            });
        }
    }
    let nblocks = chi.delta.cardinality().map_or(3, |c| c.min(3));
    for i in 0..nblocks {
        let b = chi.delta.enumerate(i).expect("block");
        for k in -orbit_radius..=orbit_radius {
            let at = chi.orbit(&b, &int(k))?;
            let want = chi.orbit(&b, &int(k + 2))?;
            let got = chi.shift(&at)?;
            report.checks += 1;
            if got != want {
                report.violations.push(Violation {
                    kind: ViolationKind::Shift,
                    witness: format!("block {b}, k = {k}: shift gives {got}, expected {want}"),
                });
            }
        }
    }
    Ok(report)
}
