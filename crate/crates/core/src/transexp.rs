//! Skeleton synthesis of left transexponentials on `(K, e)` with principal
//! exponential rank `Δ`.
//!
//! `A^{>0}` is indexed by `h ∈ G^{>0}`. The map `φ` from `A^{>0}` to the
//! classes of `P_K` is carried by two ℚ-coordinates: `κ: G^{>0} → ℚ`
//! (pinned at `κ(𝟙_{-k}) = k`) and `ψ: ℚ → ℚ`, so `φ(h) = ψ(κ(h))` is a
//! position. Position `p` is the `P_K` class whose `χ`-class in `G^{<0}` is
//! `ι⁻¹(-p)`, for a seeded isomorphism `ι: Δ → ℚ`. A term `PTerm(a, k, t)`
//! stands for `e^k(f_a(t))`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound;
use std::sync::Arc;

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::contraction::{neg_indicator, ChiStructure, ContractionError};
use crate::dlo::{DloError, Interval, PartialIso, Rationals};
use crate::hahn::{parse_hahn, HahnElement, HahnError, HahnGroup};
use crate::ordertype::{OrderElement, OrderTypeError, OrderTypeExpr};
use crate::rational::{floor_i64, format_rational, int, midpoint, parse_rational, Rational};

/// Largest `|k|` for which pins `κ(𝟙_{-k}) = k` are materialized.
pub const PIN_LIMIT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransexpError {
    #[error("no transexponential: rank {delta} {reason}")]
    Unsupported { delta: String, reason: String },
    #[error("{0} is not a positive element")]
    NotPositive(String),
    #[error("{0} is not a negative element")]
    NotNegative(String),
    #[error("{0} is outside the materialized range")]
    Range(String),
    #[error("bad phi artifact: {0}")]
    Artifact(String),
    #[error("bad term {0}")]
    Term(String),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error(transparent)]
    Dlo(#[from] DloError),
    #[error(transparent)]
    Hahn(#[from] HahnError),
    #[error(transparent)]
    OrderType(#[from] OrderTypeError),
}

/// Whether `Δ` admits a transexponential; `Err` carries the failing property.
pub fn exists_transexp(delta: &OrderTypeExpr) -> Result<(), &'static str> {
    if !delta.is_dense() {
        Err("not dense")
    } else if delta.has_min() {
        Err("has a minimum")
    } else if delta.has_max() {
        Err("has a maximum")
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMode {
    Generic,
    Growth,
    NoGrowth,
}

impl PhiMode {
    pub fn name(self) -> &'static str {
        match self {
            PhiMode::Generic => "generic",
            PhiMode::Growth => "growth",
            PhiMode::NoGrowth => "nogrowth",
        }
    }
}

impl std::str::FromStr for PhiMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "generic" => Ok(PhiMode::Generic),
            "growth" => Ok(PhiMode::Growth),
            "nogrowth" => Ok(PhiMode::NoGrowth),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

type Kappa = PartialIso<Interval<HahnGroup>, Rationals>;

#[derive(Clone, Debug)]
pub struct PhiMap {
    mode: PhiMode,
    seed: u64,
    chi: ChiStructure,
    iota: PartialIso<OrderTypeExpr, Rationals>,
    kappa: Kappa,
    kappa_pins: Option<(i64, i64)>,
    psi: PartialIso<Rationals, Rationals>,
    chain: BTreeMap<i64, Rational>,
}

/// `𝟙_q` in `G`.
pub fn indicator(q: Rational) -> HahnElement {
    neg_indicator(q).neg()
}

fn positive_half(group: &HahnGroup) -> Interval<HahnGroup> {
    let zero = HahnElement::zero(&group.delta);
    Interval::new(group.clone(), Bound::Excluded(zero), Bound::Unbounded)
}

fn exponent(g: &HahnElement) -> Result<Rational, TransexpError> {
    match g.vg()? {
        OrderElement::Rat(q) => Ok(q.clone()),
        other => Err(TransexpError::Range(format!("exponent {other}"))),
    }
}

fn pin_index(r: &Rational) -> Result<i64, TransexpError> {
    floor_i64(r).filter(|k| k.abs() < PIN_LIMIT).ok_or_else(|| TransexpError::Range(r.to_string()))
}

/// Builds `φ` over `χ`. Fails with `Unsupported` when `Δ` is not a dense
/// order without endpoints.
pub fn build_phi(chi: ChiStructure, mode: PhiMode, seed: u64) -> Result<PhiMap, TransexpError> {
    if let Err(reason) = exists_transexp(chi.delta()) {
        return Err(TransexpError::Unsupported { delta: chi.delta().to_string(), reason: reason.into() });
    }
    let iota = PartialIso::new((**chi.delta()).clone(), Rationals, seed)?;
    let kappa = PartialIso::pinned(positive_half(chi.group()), Rationals, seed.wrapping_add(1), vec![])?;
    let psi = PartialIso::pinned(Rationals, Rationals, seed.wrapping_add(2), vec![])?;
    let mut phi = PhiMap { mode, seed, chi, iota, kappa, kappa_pins: None, psi, chain: BTreeMap::new() };
    phi.ensure_kappa(0, 0)?;
    match mode {
        PhiMode::Generic => {}
        PhiMode::Growth => {
            let b0 = phi.m_position(&phi.a(1))? + int(1);
            phi.psi.add_pin(int(0), b0.clone())?;
            phi.chain.insert(0, b0);
        }
        PhiMode::NoGrowth => {
            let m = phi.m_position(&phi.a(0))?;
            phi.psi.add_pin(int(0), m.clone())?;
            phi.chain.insert(0, m);
        }
    }
    Ok(phi)
}

impl PhiMap {
    pub fn mode(&self) -> PhiMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chi(&self) -> &ChiStructure {
        &self.chi
    }

    pub fn chi_mut(&mut self) -> &mut ChiStructure {
        &mut self.chi
    }

    pub fn delta(&self) -> &Arc<OrderTypeExpr> {
        self.chi.delta()
    }

    /// The pinned chain `(k, b_k)` with `φ(a_k) = b_k`.
    pub fn chain(&self) -> &BTreeMap<i64, Rational> {
        &self.chain
    }

    /// `a_k = 𝟙_{-k}`, the element pinned at `κ = k`.
    pub fn a(&self, k: i64) -> HahnElement {
        indicator(int(-k))
    }

    /// The canonical index `h⁰ = 𝟙_0`.
    pub fn anchor_index(&self) -> HahnElement {
        self.a(0)
    }

    fn ensure_kappa(&mut self, lo: i64, hi: i64) -> Result<(), TransexpError> {
        for k in [lo, hi] {
            if k.abs() >= PIN_LIMIT {
                return Err(TransexpError::Range(format!("pin {k}")));
            }
        }
        let (mut cur_lo, mut cur_hi) = match self.kappa_pins {
            Some(r) => r,
            None => {
                self.kappa.add_pin(self.a(lo), int(lo))?;
                (lo, lo)
            }
        };
        while cur_hi < hi {
            cur_hi += 1;
            self.kappa.add_pin(self.a(cur_hi), int(cur_hi))?;
        }
        while cur_lo > lo {
            cur_lo -= 1;
            self.kappa.add_pin(self.a(cur_lo), int(cur_lo))?;
        }
        self.kappa_pins = Some((cur_lo, cur_hi));
        Ok(())
    }

    fn require_positive(&self, h: &HahnElement) -> Result<(), TransexpError> {
        if h.delta() != &self.chi.group().delta {
            return Err(HahnError::DeltaMismatch(h.delta().to_string(), self.chi.group().delta.to_string()).into());
        }
        if h.signum() != Ordering::Greater {
            return Err(TransexpError::NotPositive(h.to_string()));
        }
        Ok(())
    }

    fn require_negative(&self, g: &HahnElement) -> Result<(), TransexpError> {
        if g.signum() != Ordering::Less {
            return Err(TransexpError::NotNegative(g.to_string()));
        }
        self.require_positive(&g.neg())
    }

    /// `κ(h)`, the A-space coordinate.
    pub fn kappa(&mut self, h: &HahnElement) -> Result<Rational, TransexpError> {
        self.require_positive(h)?;
        let d = exponent(h)?;
        let j = match floor_i64(&d) {
            Some(f) if int(f) == d => {
                if h.compare(&indicator(d.clone()))? == Ordering::Less {
                    f + 1
                } else {
                    f
                }
            }
            Some(f) => f + 1,
            None => return Err(TransexpError::Range(d.to_string())),
        };
        self.ensure_kappa(-j, -j + 1)?;
        Ok(self.kappa.apply(h)?)
    }

    pub fn kappa_inverse(&mut self, x: &Rational) -> Result<HahnElement, TransexpError> {
        let k = pin_index(x)?;
        self.ensure_kappa(k, k + 1)?;
        Ok(self.kappa.invert(x)?)
    }

    /// `ι(δ)`.
    pub fn iota(&mut self, class: &OrderElement) -> Result<Rational, TransexpError> {
        self.chi.delta().check(class)?;
        Ok(self.iota.apply(class)?)
    }

    pub fn iota_inverse(&mut self, q: &Rational) -> Result<OrderElement, TransexpError> {
        Ok(self.iota.invert(q)?)
    }

    /// Position of the class `δ` of `G^{<0}`.
    pub fn class_position(&mut self, class: &OrderElement) -> Result<Rational, TransexpError> {
        Ok(-self.iota(class)?)
    }

    /// Class of `G^{<0}` at position `p`.
    pub fn position_class(&mut self, p: &Rational) -> Result<OrderElement, TransexpError> {
        self.iota_inverse(&-p.clone())
    }

    /// `m(h) = [−h]_χ`, the class associated with `a_h`.
    pub fn m_class(&mut self, h: &HahnElement) -> Result<OrderElement, TransexpError> {
        self.require_positive(h)?;
        Ok(self.chi.class_of(&h.neg())?)
    }

    pub fn m_position(&mut self, h: &HahnElement) -> Result<Rational, TransexpError> {
        let c = self.m_class(h)?;
        self.class_position(&c)
    }

    fn extend_chain_up(&mut self) -> Result<(), TransexpError> {
        let (&k, b) = self.chain.last_key_value().expect("chain has b_0");
        let b = b.clone();
        if k + 2 >= PIN_LIMIT {
            return Err(TransexpError::Range(format!("chain index {}", k + 1)));
        }
        self.ensure_kappa(k + 2, k + 2)?;
        let m = self.m_position(&self.a(k + 2))?;
        let next = b.max(m) + int(1);
        self.psi.add_pin(int(k + 1), next.clone())?;
        self.chain.insert(k + 1, next);
        Ok(())
    }

    fn extend_chain_down(&mut self) -> Result<(), TransexpError> {
        let (&k, b) = self.chain.first_key_value().expect("chain has b_0");
        let b = b.clone();
        if k - 1 <= -PIN_LIMIT {
            return Err(TransexpError::Range(format!("chain index {}", k - 1)));
        }
        self.ensure_kappa(k, k)?;
        let m = self.m_position(&self.a(k))?;
        let prev = midpoint(&m, &b);
        self.psi.add_pin(int(k - 1), prev.clone())?;
        self.chain.insert(k - 1, prev);
        Ok(())
    }

    fn ensure_chain_index(&mut self, k: i64) -> Result<(), TransexpError> {
        while *self.chain.last_key_value().unwrap().0 < k {
            self.extend_chain_up()?;
        }
        while *self.chain.first_key_value().unwrap().0 > k {
            self.extend_chain_down()?;
        }
        Ok(())
    }

    /// `ψ(x)`, the position of A-coordinate `x`.
    pub fn psi(&mut self, x: &Rational) -> Result<Rational, TransexpError> {
        if self.mode == PhiMode::Growth {
            let k = pin_index(x)?;
            self.ensure_chain_index(k)?;
            self.ensure_chain_index(k + 1)?;
        }
        Ok(self.psi.apply(x)?)
    }

    pub fn psi_inverse(&mut self, p: &Rational) -> Result<Rational, TransexpError> {
        if self.mode == PhiMode::Growth {
            while self.chain.last_key_value().unwrap().1 <= p {
                self.extend_chain_up()?;
            }
            while self.chain.first_key_value().unwrap().1 >= p {
                self.extend_chain_down()?;
            }
        }
        Ok(self.psi.invert(p)?)
    }

    /// `φ(h)` as a position.
    pub fn phi(&mut self, h: &HahnElement) -> Result<Rational, TransexpError> {
        let x = self.kappa(h)?;
        self.psi(&x)
    }

    /// `φ(h)` as a class of `G^{<0}`.
    pub fn phi_class(&mut self, h: &HahnElement) -> Result<OrderElement, TransexpError> {
        let p = self.phi(h)?;
        self.position_class(&p)
    }

    /// The index `h` with `φ(h) = p`.
    pub fn phi_inverse(&mut self, p: &Rational) -> Result<HahnElement, TransexpError> {
        let x = self.psi_inverse(p)?;
        self.kappa_inverse(&x)
    }

    /// `δ_T(g) = β(φ(−g))` for `g < 0`.
    pub fn delta_t(&mut self, g: &HahnElement) -> Result<OrderElement, TransexpError> {
        self.require_negative(g)?;
        self.phi_class(&g.neg())
    }

    /// `h̃(q) = χ(−𝟙_q)`.
    pub fn h_tilde(&mut self, q: &Rational) -> Result<HahnElement, TransexpError> {
        Ok(self.chi.chi_apply(&neg_indicator(q.clone()))?)
    }

    /// `γ` on classes; the identity on `Δ`-labels.
    pub fn gamma(&self, class: &OrderElement) -> Result<OrderElement, TransexpError> {
        self.chi.delta().check(class)?;
        Ok(class.clone())
    }

    /// `ε_T(q) = γ(δ_T(h̃(q)))`.
    pub fn epsilon_t(&mut self, q: &Rational) -> Result<OrderElement, TransexpError> {
        let g = self.h_tilde(q)?;
        let d = self.delta_t(&g)?;
        self.gamma(&d)
    }

    /// `[X_T(g)]_χ = m(φ⁻¹([g]_χ))` for `g < 0`.
    pub fn xt_class(&mut self, g: &HahnElement) -> Result<OrderElement, TransexpError> {
        self.require_negative(g)?;
        let class = self.chi.class_of(g)?;
        let p = self.class_position(&class)?;
        let h = self.phi_inverse(&p)?;
        let image = self.chi.chi_apply(&h.neg())?;
        Ok(self.chi.class_of(&image)?)
    }

    /// Compares two classes of `G^{<0}`.
    pub fn class_cmp(&self, a: &OrderElement, b: &OrderElement) -> Result<Ordering, TransexpError> {
        Ok(self.chi.delta().compare(a, b)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "phi",
            "mode": self.mode,
            "seed": self.seed,
            "chi": self.chi.to_json(),
            "iota": self.iota.to_json(),
            "kappa": self.kappa.to_json(),
            "kappa_pins": self.kappa_pins.map(|(a, b)| vec![a, b]),
            "psi": self.psi.to_json(),
            "chain": self.chain.iter().map(|(k, b)| json!([k, format_rational(b)])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, TransexpError> {
        let bad = |m: &str| TransexpError::Artifact(m.to_string());
        if v.get("kind").and_then(Value::as_str) != Some("phi") {
            return Err(bad("not a phi artifact"));
        }
        let mode: PhiMode = serde_json::from_value(v.get("mode").cloned().unwrap_or(Value::Null)).map_err(|_| bad("bad mode"))?;
        let seed = v.get("seed").and_then(Value::as_u64).ok_or_else(|| bad("missing seed"))?;
        let chi = ChiStructure::from_json(v.get("chi").ok_or_else(|| bad("missing chi"))?)?;
        if let Err(reason) = exists_transexp(chi.delta()) {
            return Err(TransexpError::Unsupported { delta: chi.delta().to_string(), reason: reason.into() });
        }
        let field = |name: &str| v.get(name).ok_or_else(|| bad(&format!("missing {name}")));
        let iota = PartialIso::from_json((**chi.delta()).clone(), Rationals, field("iota")?)?;
        let kappa = PartialIso::from_json(positive_half(chi.group()), Rationals, field("kappa")?)?;
        let psi = PartialIso::from_json(Rationals, Rationals, field("psi")?)?;
        let kappa_pins = match field("kappa_pins")? {
            Value::Null => None,
            Value::Array(a) if a.len() == 2 => {
                let lo = a[0].as_i64().ok_or_else(|| bad("kappa_pins"))?;
                let hi = a[1].as_i64().ok_or_else(|| bad("kappa_pins"))?;
                Some((lo, hi))
            }
            _ => return Err(bad("kappa_pins")),
        };
        let mut chain = BTreeMap::new();
        for e in field("chain")?.as_array().ok_or_else(|| bad("chain"))? {
            let k = e.get(0).and_then(Value::as_i64).ok_or_else(|| bad("chain index"))?;
            let b = e.get(1).and_then(Value::as_str).ok_or_else(|| bad("chain value"))?;
            let b = parse_rational(b).map_err(|_| bad("chain value"))?;
            chain.insert(k, b);
        }
        let phi = PhiMap { mode, seed, chi, iota, kappa, kappa_pins, psi, chain };
        phi.validate()?;
        Ok(phi)
    }

    fn validate(&self) -> Result<(), TransexpError> {
        let bad = |m: String| TransexpError::Artifact(m);
        let seeds = [self.iota.seed(), self.kappa.seed(), self.psi.seed()];
        let want = [self.seed, self.seed.wrapping_add(1), self.seed.wrapping_add(2)];
        if seeds != want {
            return Err(bad("table seeds disagree with the artifact seed".into()));
        }
        if let Some((lo, hi)) = self.kappa_pins {
            for k in lo..=hi {
                if self.kappa.lookup(&self.a(k)) != Some(&int(k)) {
                    return Err(bad(format!("kappa pin {k} missing")));
                }
            }
        }
        if self.mode != PhiMode::Generic && !self.chain.contains_key(&0) {
            return Err(bad("chain without b_0".into()));
        }
        let keys: Vec<i64> = self.chain.keys().copied().collect();
        if keys.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(bad("chain is not contiguous".into()));
        }
        for (k, b) in &self.chain {
            if self.psi.lookup(&int(*k)) != Some(b) {
                return Err(bad(format!("chain pin {k} missing from psi")));
            }
        }
        Ok(())
    }
}

/// `e^k(f_a(t))` with `t ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTerm {
    pub a: HahnElement,
    pub k: i64,
    pub t: Rational,
}

impl fmt::Display for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.a, self.k, format_rational(&self.t))
    }
}

/// Parses `hahn|k|t`.
pub fn parse_pterm(delta: &Arc<OrderTypeExpr>, src: &str) -> Result<PTerm, TransexpError> {
    let bad = || TransexpError::Term(src.to_string());
    let mut parts = src.rsplitn(3, '|');
    let t = parts.next().ok_or_else(bad)?;
    let k = parts.next().ok_or_else(bad)?;
    let a = parts.next().ok_or_else(bad)?;
    let a = parse_hahn(delta, a.trim())?;
    let k: i64 = k.trim().parse().map_err(|_| bad())?;
    let t = parse_rational(t.trim()).map_err(|_| bad())?;
    if a.signum() != Ordering::Greater {
        return Err(TransexpError::NotPositive(a.to_string()));
    }
    if t.is_negative() || t >= int(1) {
        return Err(bad());
    }
    Ok(PTerm { a, k, t })
}

/// `T_L(a + b) = e^{⌊b⌋}(f_a(b − ⌊b⌋))`.
pub fn tl_apply(a: &HahnElement, b: &Rational) -> Result<PTerm, TransexpError> {
    if a.signum() != Ordering::Greater {
        return Err(TransexpError::NotPositive(a.to_string()));
    }
    let k = floor_i64(b).ok_or_else(|| TransexpError::Range(b.to_string()))?;
    Ok(PTerm { a: a.clone(), k, t: b - int(k) })
}

pub fn pterm_exp(p: &PTerm) -> PTerm {
    PTerm { k: p.k + 1, ..p.clone() }
}

pub fn pterm_log(p: &PTerm) -> PTerm {
    PTerm { k: p.k - 1, ..p.clone() }
}

/// Order on terms: by `φ`-position of the index, then `k`, then `t`.
pub fn pterm_compare(phi: &mut PhiMap, p: &PTerm, q: &PTerm) -> Result<Ordering, TransexpError> {
    let (pa, qa) = (phi.phi(&p.a)?, phi.phi(&q.a)?);
    Ok(pa.cmp(&qa).then(p.k.cmp(&q.k)).then_with(|| p.t.cmp(&q.t)))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EncodingViolation {
    pub g: String,
    pub class: String,
    pub xt_class: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EncodingReport {
    pub mode: PhiMode,
    pub seed: u64,
    pub samples: usize,
    pub violations: Vec<EncodingViolation>,
}

impl EncodingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `[X_T(g)]_χ > [g]_χ` on `-𝟙_0` and on seeded negative samples.
pub fn check_growth_encoding(phi: &mut PhiMap, samples: usize, seed: u64) -> Result<EncodingReport, TransexpError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gs = vec![phi.anchor_index().neg()];
    for _ in 0..samples {
        gs.push(phi.chi.sample(&mut rng)?);
    }
    let mut violations = vec![];
    for g in &gs {
        let class = phi.chi.class_of(g)?;
        let xt = phi.xt_class(g)?;
        if phi.class_cmp(&xt, &class)? != Ordering::Greater {
            violations.push(EncodingViolation { g: g.to_string(), class: class.to_string(), xt_class: xt.to_string() });
        }
    }
    Ok(EncodingReport { mode: phi.mode, seed, samples: gs.len(), violations })
}

/// A positive index, the negation of a χ sample.
pub fn sample_index(phi: &mut PhiMap, rng: &mut ChaCha8Rng) -> Result<HahnElement, TransexpError> {
    Ok(phi.chi.sample(rng)?.neg())
}
