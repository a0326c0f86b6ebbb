//! Fixed-point real intervals `[lo, hi] / 2^bits` with outward rounding,
//! plus rigorous `exp` and `ln`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

const GUARD: u32 = 32;

/// Largest argument magnitude accepted by [`Real::exp`].
pub const EXP_LIMIT: i64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Real {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Real {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        let v = BigInt::from(n) << bits;
        Real { lo: v.clone(), hi: v, bits }
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        let scaled = q.numer() << bits;
        Real { lo: scaled.div_floor(q.denom()), hi: ceil_div(&scaled, q.denom()), bits }
    }

    /// `[lo, hi]` as rationals.
    pub fn endpoints(&self) -> (Rational, Rational) {
        let d = pow2(self.bits);
        (Rational::new(self.lo.clone(), d.clone()), Rational::new(self.hi.clone(), d))
    }

    pub fn lo_f64(&self) -> f64 {
        self.endpoints().0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.endpoints().1.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        let (a, b) = self.endpoints();
        ((a + b) / Rational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }

    /// Width in units of `2^-bits`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn rescale(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = bits - self.bits;
                Real { lo: &self.lo << s, hi: &self.hi << s, bits }
            }
            Ordering::Less => {
                let d = pow2(self.bits - bits);
                Real { lo: self.lo.div_floor(&d), hi: ceil_div(&self.hi, &d), bits }
            }
        }
    }

    fn align(a: &Real, b: &Real) -> (Real, Real) {
        let bits = a.bits.max(b.bits);
        (a.rescale(bits), b.rescale(bits))
    }

    pub fn add(&self, o: &Real) -> Real {
        let (a, b) = Self::align(self, o);
        Real { lo: &a.lo + &b.lo, hi: &a.hi + &b.hi, bits: a.bits }
    }

    pub fn neg(&self) -> Real {
        Real { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }

    pub fn sub(&self, o: &Real) -> Real {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Real) -> Real {
        let (a, b) = Self::align(self, o);
        let ps = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = ps.iter().min().unwrap();
        let max = ps.iter().max().unwrap();
        let d = pow2(a.bits);
        Real { lo: min.div_floor(&d), hi: ceil_div(max, &d), bits: a.bits }
    }

    /// Division; `None` if the divisor interval contains zero.
    pub fn div(&self, o: &Real) -> Option<Real> {
        let (a, b) = Self::align(self, o);
        if b.contains_zero() {
            return None;
        }
        let qs_lo: Vec<BigInt> = [(&a.lo, &b.lo), (&a.lo, &b.hi), (&a.hi, &b.lo), (&a.hi, &b.hi)]
            .iter()
            .map(|(x, y)| (*x << a.bits).div_floor(y))
            .collect();
        let qs_hi: Vec<BigInt> = [(&a.lo, &b.lo), (&a.lo, &b.hi), (&a.hi, &b.lo), (&a.hi, &b.hi)]
            .iter()
            .map(|(x, y)| ceil_div(&(*x << a.bits), y))
            .collect();
        Some(Real { lo: qs_lo.into_iter().min().unwrap(), hi: qs_hi.into_iter().max().unwrap(), bits: a.bits })
    }

    fn div_small(&self, n: u64) -> Real {
        let d = BigInt::from(n);
        Real { lo: self.lo.div_floor(&d), hi: ceil_div(&self.hi, &d), bits: self.bits }
    }

    pub fn recip(&self) -> Option<Real> {
        Real::from_int(1, self.bits).div(self)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Hull with `[lo, hi]` clamped into `[a, b]`.
    pub fn clamp(&self, a: i64, b: i64) -> Real {
        let (a, b) = (BigInt::from(a) << self.bits, BigInt::from(b) << self.bits);
        Real { lo: self.lo.clone().max(a.clone()).min(b.clone()), hi: self.hi.clone().min(b).max(a), bits: self.bits }
    }

    /// Widens by `ulps` units of `2^-bits` on both sides.
    pub fn widen(&self, ulps: i64) -> Real {
        Real { lo: &self.lo - ulps, hi: &self.hi + ulps, bits: self.bits }
    }

    /// `Less` / `Greater` when the intervals are disjoint, `Equal` when both
    /// are the same point, `None` otherwise.
    pub fn cmp_certain(&self, o: &Real) -> Option<Ordering> {
        let (a, b) = Self::align(self, o);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else if a.is_point() && b.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Is the whole interval strictly below `n`?
    pub fn below(&self, n: i64) -> bool {
        self.hi < (BigInt::from(n) << self.bits)
    }

    /// Is the whole interval at or above `n`?
    pub fn at_least(&self, n: i64) -> bool {
        self.lo >= (BigInt::from(n) << self.bits)
    }

    /// Rigorous enclosure of `exp` on the interval; `None` if an endpoint
    /// exceeds [`EXP_LIMIT`] in magnitude.
    pub fn exp(&self) -> Option<Real> {
        let lo = exp_point(&self.lo, self.bits)?;
        let hi = exp_point(&self.hi, self.bits)?;
        Some(Real { lo: lo.lo, hi: hi.hi, bits: self.bits })
    }

    /// Rigorous enclosure of `ln`; `None` unless the interval is positive.
    pub fn ln(&self) -> Option<Real> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_point(&self.lo, self.bits);
        let hi = ln_point(&self.hi, self.bits);
        Some(Real { lo: lo.lo, hi: hi.hi, bits: self.bits })
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo_f64(), self.hi_f64())
    }
}

type Constants = LazyLock<Mutex<HashMap<u32, Real>>>;

static E: Constants = LazyLock::new(Default::default);
static LN2: Constants = LazyLock::new(Default::default);

// Enclosure of a constant at `bits`, computed once per precision.
fn constant(table: &Constants, bits: u32, compute: impl FnOnce() -> Real) -> Real {
    if let Some(r) = table.lock().unwrap().get(&bits) {
        return r.clone();
    }
    let r = compute();
    table.lock().unwrap().insert(bits, r.clone());
    r
}

// Σ x^k / k! for x in [0, 1], with the tail bounded by the last term.
fn exp_taylor(x: &Real) -> Real {
    let w = x.bits;
    let mut sum = Real::from_int(1, w);
    let mut term = Real::from_int(1, w);
    let mut k = 1u64;
    loop {
        term = term.mul(x).div_small(k);
        sum = sum.add(&term);
        if term.hi <= BigInt::one() {
            break;
        }
        k += 1;
    }
    sum.hi += &term.hi + 1;
    sum
}

// exp(m / 2^bits) enclosed at `bits`.
fn exp_point(m: &BigInt, bits: u32) -> Option<Real> {
    let w = bits + GUARD;
    let x = Real { lo: m << GUARD, hi: m << GUARD, bits: w };
    let n = m.div_floor(&pow2(bits));
    let n = n.to_i64().filter(|n| n.abs() <= EXP_LIMIT)?;
    let frac = x.sub(&Real::from_int(n, w));
    let ef = exp_taylor(&frac);
    let e = constant(&E, w, || exp_taylor(&Real::from_int(1, w)));
    let mut pow = Real::from_int(1, w);
    let mut base = e;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            pow = pow.mul(&base);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul(&base);
        }
    }
    let en = if n < 0 { pow.recip()? } else { pow };
    let v = en.mul(&ef);
    let r = Real { lo: v.lo.max(BigInt::zero()), hi: v.hi, bits: w };
    Some(r.rescale(bits))
}

// Σ z^(2j+1) / (2j+1) for z in [0, 1/3].
fn atanh_series(z: &Real) -> Real {
    let z2 = z.mul(z);
    let mut p = z.clone();
    let mut sum = z.clone();
    let mut j = 1u64;
    loop {
        p = p.mul(&z2);
        let t = p.div_small(2 * j + 1);
        sum = sum.add(&t);
        if p.hi <= BigInt::one() {
            break;
        }
        j += 1;
    }
    sum.hi += &p.hi * 2 + 1;
    sum
}

// ln(m / 2^bits) for m > 0, enclosed at `bits`.
fn ln_point(m: &BigInt, bits: u32) -> Real {
    if m == &pow2(bits) {
        return Real::from_int(0, bits);
    }
    let w = bits + GUARD;
    let mut t = m.bits() as i64 - 1;
    // y = m / 2^t in [2/3, 4/3)
    if m * 3 >= BigInt::from(4) << t as u32 {
        t += 1;
    }
    let k = t - bits as i64;
    let shift = w as i64 - t;
    let y = if shift >= 0 {
        let v = m << (shift as u32);
        Real { lo: v.clone(), hi: v, bits: w }
    } else {
        let d = pow2((-shift) as u32);
        Real { lo: m.div_floor(&d), hi: ceil_div(m, &d), bits: w }
    };
    let one = Real::from_int(1, w);
    let two = Real::from_int(2, w);
    let ln_y = if y.lo < one.lo && y.hi >= one.lo {
        // |ln y| <= 2|y - 1| on [2/3, 4/3)
        let d: BigInt = (&y.hi - &y.lo) * 2 + 2;
        Real { lo: -d.clone(), hi: d, bits: w }
    } else {
        let below_one = y.hi < one.lo;
        let z = if below_one { one.sub(&y) } else { y.sub(&one) }.div(&y.add(&one)).expect("positive denominator");
        let z = Real { lo: z.lo.max(BigInt::zero()), hi: z.hi, bits: w };
        let ln_y = atanh_series(&z).mul(&two);
        if below_one {
            ln_y.neg()
        } else {
            ln_y
        }
    };
    let ln2 = constant(&LN2, w, || atanh_series(&Real::from_int(1, w).div_small(3)).mul(&two));
    let r = ln2.mul(&Real::from_int(k, w)).add(&ln_y);
    r.rescale(bits)
}
