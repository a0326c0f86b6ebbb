//! Verification suites for the real transexponential.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{li_compare, li_exp, li_from_rational, li_log, li_mul, slog, tr_eval, LevelIndex, LiError, LiOrdering, Num, Precision};
use crate::rational::{int, rat, Rational};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub check: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: Option<u64>,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub precision_exhausted: Vec<String>,
}

impl Report {
    fn new(suite: &str, seed: Option<u64>) -> Self {
        Report { suite: suite.into(), seed, checks: 0, failures: vec![], precision_exhausted: vec![] }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.precision_exhausted.is_empty()
    }

    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure { check: name.into(), witness: witness() });
        }
    }

    fn expect_order(&mut self, name: &str, got: Result<LiOrdering, LiError>, want: LiOrdering, witness: impl FnOnce() -> String) {
        match got {
            Ok(LiOrdering::Unknown) => {
                self.checks += 1;
                self.precision_exhausted.push(format!("{name}: {}", witness()));
            }
            Err(e) => {
                self.checks += 1;
                self.precision_exhausted.push(format!("{name}: {} ({e})", witness()));
            }
            Ok(o) => self.check(name, o == want, || format!("{} gave {o:?}", witness())),
        }
    }
}

fn sample_rational(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=12i64);
    rat(rng.gen_range(-50 * d..=50 * d), d)
}

fn exp_n(x: &LevelIndex, n: u32, prec: Precision) -> LevelIndex {
    (0..n).fold(x.clone(), |acc, _| li_exp(&acc, prec))
}

/// Representation-level checks of the axioms on seeded rationals in
/// `[-50, 50]`.
pub fn check_axioms(samples: usize, seed: u64, prec: Precision) -> Report {
    let mut rep = Report::new("axioms", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Rational> = (0..samples).map(|_| sample_rational(&mut rng)).collect();
    for x in &xs {
        let t = tr_eval(x);
        rep.check("slog_roundtrip", slog(&t, prec).ok() == Some(Num::Exact(x.clone())), || x.to_string());
        if x >= &int(0) {
            rep.check("successor", tr_eval(&(x + int(1))) == li_exp(&t, prec), || x.to_string());
            for m in 1..=3u32 {
                let up = tr_eval(&(x + int(m as i64)));
                rep.check("level_shift", up == exp_n(&t, m, prec), || format!("x={x} m={m}"));
                let down = (0..m).try_fold(up, |acc, _| li_log(&acc));
                rep.check("level_unshift", down.as_ref() == Ok(&t), || format!("x={x} m={m}"));
            }
        }
        let prod = li_mul(&t, &tr_eval(&-x.clone()), prec);
        rep.check("reciprocal", prod == Ok(LevelIndex::one()), || x.to_string());
        let u = x.abs() - x.abs().floor();
        let via_exp = li_from_rational(&u, prec).map(|l| li_exp(&l, prec));
        rep.check("unit_interval", via_exp == Ok(tr_eval(&u)), || u.to_string());
    }
    let mut sorted = xs.clone();
    sorted.sort();
    sorted.dedup();
    for w in sorted.windows(2) {
        rep.expect_order("monotone_sorted", Ok(li_compare(&tr_eval(&w[0]), &tr_eval(&w[1]))), LiOrdering::Less, || {
            format!("{} < {}", w[0], w[1])
        });
    }
    for _ in 0..samples {
        let (a, b) = (sample_rational(&mut rng), sample_rational(&mut rng));
        let want = LiOrdering::from(a.cmp(&b));
        rep.expect_order("monotone_pairs", Ok(li_compare(&tr_eval(&a), &tr_eval(&b))), want, || format!("{a} vs {b}"));
    }
    rep
}

/// Growth inequalities: `T(a) > e^n(a)` past `(n+1)^2`, `T(n) > 2^n`, the
/// integer lemma `2^(m-n) >= m+1`, `e(a) > a^n` for `a >= n^2`, and the
/// first-order bound on `e` near 0.
pub fn check_growth(n_max: u32, window: u32, seed: u64, prec: Precision) -> Report {
    let mut rep = Report::new("growth", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quarter = rat(1, 4);
    for n in 1..=n_max {
        let start = int(((n + 1) * (n + 1)) as i64);
        let mut grid: Vec<Rational> = (0..=4 * window).map(|i| &start + &quarter * int(i as i64)).collect();
        for _ in 0..8 {
            grid.push(&start + rat(rng.gen_range(0..=1000 * window as i64), 1000));
        }
        for a in &grid {
            let rhs = li_from_rational(a, prec).map(|l| exp_n(&l, n, prec));
            let got = rhs.map(|r| li_compare(&tr_eval(a), &r));
            rep.expect_order("T_beats_iterated_exp", got, LiOrdering::Greater, || format!("n={n} a={a}"));
        }
        let lo = (n * n) as i64;
        for i in 0..=4 * window as i64 {
            let a = int(lo) + &quarter * int(i);
            if a < int(1) {
                continue;
            }
            let power: Rational = Pow::pow(&a, n);
            let got = li_from_rational(&a, prec)
                .and_then(|l| li_from_rational(&power, prec).map(|p| li_compare(&li_exp(&l, prec), &p)));
            rep.expect_order("exp_beats_power", got, LiOrdering::Greater, || format!("n={n} a={a}"));
        }
    }
    for n in 1..=60u32.max(n_max) {
        let two_n = Rational::from_integer(BigInt::one() << n);
        let got = li_from_rational(&two_n, prec).map(|p| li_compare(&tr_eval(&int(n as i64)), &p));
        rep.expect_order("T_beats_power_of_two", got, LiOrdering::Greater, || format!("n={n}"));
    }
    for n in 0..=10u32 {
        for m in (n + 1) * (n + 1)..=200 {
            let ok = (BigInt::one() << (m - n)) >= BigInt::from(m + 1);
            rep.check("integer_lemma", ok, || format!("n={n} m={m}"));
        }
    }
    for _ in 0..200 {
        let a: f64 = rng.gen_range(-1.0..=1.0);
        if a == 0.0 {
            continue;
        }
        let err = (a.exp_m1() - a).abs();
        rep.check("first_order", err < a * a, || format!("a={a}"));
    }
    rep
}

/// `T` in double precision.
pub fn t_f64(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 / t_f64(-x);
    }
    let m = x.floor();
    (0..=m as u32).fold(x - m, |v, _| v.exp())
}

/// Closed-form `T'`, right-continuous at integers.
pub fn t_prime(x: f64) -> f64 {
    if x < 0.0 {
        let t = t_f64(-x);
        return t_prime(-x) / (t * t);
    }
    let m = x.floor();
    (1..=m as u32).fold((x - m).exp(), |p, i| p * t_f64(x - i as f64).exp())
}

/// One-sided limits of `T''` at a positive integer `n`, from the closed form.
pub fn t_second_limits(n: u32) -> (f64, f64) {
    let n_f = n as f64;
    let tp = t_prime(n_f);
    let sum = |upto: u32| (1..=upto).map(|i| t_prime(n_f - i as f64)).sum::<f64>();
    (tp * (1.0 + sum(n - 1)), tp * (1.0 + sum(n)))
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Finite-difference checks of `T'` and of the jump in `T''` at integers.
pub fn check_derivative(points: &[f64], h: f64, tol: f64) -> Report {
    let mut rep = Report::new("derivative", None);
    for &x in points {
        if (x - x.round()).abs() <= 2.0 * h {
            continue;
        }
        let fd = (t_f64(x + h) - t_f64(x - h)) / (2.0 * h);
        let cf = t_prime(x);
        rep.check("first_derivative", rel_err(fd, cf) < tol, || format!("x={x} fd={fd} closed={cf}"));
    }
    let h2 = 1e-4;
    let second_tol = 10.0 * h2;
    let mut ints: Vec<u32> = points.iter().map(|p| p.round()).filter(|p| *p >= 1.0 && *p <= 3.0).map(|p| p as u32).collect();
    ints.extend([1, 2]);
    ints.sort();
    ints.dedup();
    for n in ints {
        let nf = n as f64;
        let (left, right) = t_second_limits(n);
        // difference quotients at 1.5h and 2.5h, extrapolated linearly to n
        let side = |s: f64| {
            let d1 = (t_prime(nf + s * 2.0 * h2) - t_prime(nf + s * h2)) / (s * h2);
            let d2 = (t_prime(nf + s * 3.0 * h2) - t_prime(nf + s * 2.0 * h2)) / (s * h2);
            d1 - 1.5 * (d2 - d1)
        };
        let (fd_left, fd_right) = (side(-1.0), side(1.0));
        rep.check("second_left_limit", rel_err(fd_left, left) < second_tol, || format!("n={n} fd={fd_left} closed={left}"));
        rep.check("second_right_limit", rel_err(fd_right, right) < second_tol, || format!("n={n} fd={fd_right} closed={right}"));
        rep.check("second_limits_differ", rel_err(left, right) > second_tol, || format!("n={n}"));
        let eps = 1e-9;
        let (a, b) = (t_prime(nf - eps), t_prime(nf + eps));
        rep.check("first_continuous", rel_err(a, b) < 1e-6, || format!("n={n} left={a} right={b}"));
    }
    rep
}
