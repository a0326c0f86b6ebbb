//! Exact rationals: parsing, the Calkin-Wilf enumeration of ℚ and
//! simplest-rational witnesses for cuts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {text:?}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

/// Accepts `p`, `-p`, `p/q` and finite decimals such as `1.25` or `-0.5`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let err = |reason| ParseRationalError { text: s.to_string(), reason };
    if t.is_empty() {
        return Err(err("empty"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let joined = format!("{digits}{frac}");
        let n: BigInt = joined.parse().map_err(|_| err("bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = t.parse().map_err(|_| err("not a number"))?;
    Ok(Rational::from_integer(n))
}

/// `p` or `p/q`, always reduced.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn floor_i64(q: &Rational) -> Option<i64> {
    q.floor().to_integer().to_i64()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Simplest rational (smallest denominator, then smallest magnitude) strictly
/// inside the open cut `(lo, hi)`; `None` bounds are infinite.
///
/// Requires `lo < hi` when both are present.
pub fn simplest_between(lo: Option<&Rational>, hi: Option<&Rational>) -> Rational {
    let below_zero = hi.is_some_and(|h| !h.is_positive());
    let above_zero = lo.is_some_and(|l| !l.is_negative());
    if above_zero {
        simplest_positive(lo.unwrap(), hi)
    } else if below_zero {
        let nlo = hi.map(|h| -h);
        let nhi = lo.map(|l| -l);
        -simplest_positive(nlo.as_ref().unwrap(), nhi.as_ref())
    } else {
        Rational::zero()
    }
}

// Simplest rational in (a, b) for a >= 0.
fn simplest_positive(a: &Rational, b: Option<&Rational>) -> Rational {
    let fl = a.floor();
    let n = &fl + Rational::one();
    if b.is_none_or(|b| &n < b) {
        return n;
    }
    let b = b.unwrap();
    let lo = (b - &fl).recip();
    let hi = if *a == fl { None } else { Some((a - &fl).recip()) };
    fl + simplest_positive(&lo, hi.as_ref()).recip()
}

/// Calkin-Wilf tree node `n >= 1`: 1 is 1/1, node `n` has children `2n`
/// (left, a/(a+b)) and `2n+1` (right, (a+b)/b).
pub fn calkin_wilf(n: u64) -> Rational {
    assert!(n >= 1, "Calkin-Wilf nodes start at 1");
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    let bits = 64 - n.leading_zeros();
    for i in (0..bits - 1).rev() {
        if (n >> i) & 1 == 0 {
            b = &a + &b;
        } else {
            a = &a + &b;
        }
    }
    Rational::new(a, b)
}

/// Inverse of [`calkin_wilf`]; `None` for non-positive input or when the
/// node index does not fit in `u64`.
pub fn calkin_wilf_index(q: &Rational) -> Option<u64> {
    if !q.is_positive() {
        return None;
    }
    let (mut a, mut b) = (q.numer().clone(), q.denom().clone());
    let mut path: Vec<bool> = Vec::new();
    while !(a.is_one() && b.is_one()) {
        if path.len() >= 63 {
            return None;
        }
        if a < b {
            b -= &a;
            path.push(false);
        } else {
            a -= &b;
            path.push(true);
        }
    }
    let mut n: u64 = 1;
    for bit in path.iter().rev() {
        n = (n << 1) | (*bit as u64);
    }
    Some(n)
}

/// Enumeration of ℚ: 0, then `2n-1 ↦ cw(n)` and `2n ↦ -cw(n)`.
pub fn eta_enumerate(i: u64) -> Rational {
    if i == 0 {
        Rational::zero()
    } else if i.is_odd() {
        calkin_wilf(i.div_ceil(2))
    } else {
        -calkin_wilf(i / 2)
    }
}

pub fn eta_index(q: &Rational) -> Option<u64> {
    if q.is_zero() {
        return Some(0);
    }
    let n = calkin_wilf_index(&q.abs())?;
    if q.is_positive() {
        n.checked_mul(2).map(|m| m - 1)
    } else {
        n.checked_mul(2)
    }
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn calkin_wilf_head() {
        let head: Vec<String> = (1..=9).map(|n| calkin_wilf(n).to_string()).collect();
        assert_eq!(head, ["1", "1/2", "2", "1/3", "3/2", "2/3", "3", "1/4", "4/3"]);
    }

    #[test]
    fn eta_head() {
        let head: Vec<String> = (0..7).map(|i| eta_enumerate(i).to_string()).collect();
        assert_eq!(head, ["0", "1", "-1", "1/2", "-1/2", "2", "-2"]);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn simplest_cases() {
        assert_eq!(simplest_between(None, None), int(0));
        assert_eq!(simplest_between(Some(&int(0)), Some(&int(1))), rat(1, 2));
        assert_eq!(simplest_between(Some(&rat(1, 3)), Some(&rat(1, 2))), rat(2, 5));
        assert_eq!(simplest_between(Some(&int(2)), None), int(3));
        assert_eq!(simplest_between(None, Some(&int(-2))), int(-3));
        assert_eq!(simplest_between(Some(&rat(-1, 2)), Some(&rat(3, 2))), int(0));
    }

    // Oracle: scan denominators upward, least magnitude numerator first.
    fn by_denominator(lo: &Rational, hi: &Rational) -> Rational {
        for d in 1i64.. {
            let mut best: Option<Rational> = None;
            let from = floor_i64(&(lo * int(d))).unwrap();
            let to = floor_i64(&(hi * int(d))).unwrap() + 1;
            for p in from..=to {
                let q = rat(p, d);
                if lo < &q && &q < hi && best.as_ref().is_none_or(|b| q.abs() < b.abs()) {
                    best = Some(q);
                }
            }
            if let Some(b) = best {
                return b;
            }
        }
        unreachable!()
    }

    fn min_index_in(lo: &Rational, hi: &Rational) -> Rational {
        (0..).map(eta_enumerate).find(|q| lo < q && q < hi).unwrap()
    }

    proptest! {
        #[test]
        fn index_roundtrip(i in 0u64..100_000) {
            prop_assert_eq!(eta_index(&eta_enumerate(i)), Some(i));
        }

        #[test]
        fn simplest_matches_denominator_scan(a in -40i64..40, b in 1i64..9, w in 1i64..30, c in 1i64..9) {
            let lo = rat(a, b);
            let hi = &lo + rat(w, c * 3);
            let s = simplest_between(Some(&lo), Some(&hi));
            prop_assert!(lo < s && s < hi);
            prop_assert_eq!(s, by_denominator(&lo, &hi));
        }

        #[test]
        fn simplest_is_min_index(a in -3i64..3, b in 1i64..5, w in 1i64..4) {
            let lo = rat(a, b);
            let hi = &lo + rat(w, 4);
            prop_assert_eq!(simplest_between(Some(&lo), Some(&hi)), min_index_in(&lo, &hi));
        }
    }
}
