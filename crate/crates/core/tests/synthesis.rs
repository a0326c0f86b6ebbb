use std::cmp::Ordering;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use otf_core::contraction::ChiStructure;
use otf_core::dlo::{PartialIso, Rationals};
use otf_core::hahn::parse_hahn;
use otf_core::ordertype::{parse_ordertype, OrderTypeExpr};
use otf_core::rational::{int, rat};
use otf_core::transexp::{build_phi, check_growth_encoding, exists_transexp, indicator, parse_pterm, pterm_compare, pterm_exp, pterm_log, sample_index, tl_apply, PhiMap, PhiMode};

fn phi(delta: &str, mode: PhiMode, seed: u64) -> PhiMap {
    let chi = ChiStructure::new(parse_ordertype(delta).unwrap(), seed).unwrap();
    build_phi(chi, mode, seed).unwrap()
}

#[test]
fn existence_by_shape() {
    for (src, want) in [
        ("eta", Ok(())),
        ("eta + eta", Ok(())),
        ("2 * eta", Ok(())),
        ("eta * 2", Err("not dense")),
        ("1 + eta", Err("has a minimum")),
        ("eta + 1", Err("has a maximum")),
        ("3", Err("not dense")),
    ] {
        assert_eq!(exists_transexp(&parse_ordertype(src).unwrap()), want, "{src}");
    }
}

#[test]
fn growth_map_over_two_copies() {
    let mut p = phi("eta + eta", PhiMode::Growth, 3);
    let r = check_growth_encoding(&mut p, 300, 9).unwrap();
    assert!(r.passed(), "{:?}", r.violations.first());
}

#[test]
fn phi_is_an_order_isomorphism_on_samples() {
    let mut p = phi("eta + eta", PhiMode::Generic, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut hs: Vec<_> = (0..150).map(|_| sample_index(&mut p, &mut rng).unwrap()).collect();
    hs.sort_by(|a, b| a.compare(b).unwrap());
    hs.dedup();
    let ps: Vec<_> = hs.iter().map(|h| p.phi(h).unwrap()).collect();
    for w in ps.windows(2) {
        assert!(w[0] < w[1]);
    }
    for (h, q) in hs.iter().zip(&ps) {
        assert_eq!(&p.phi_inverse(q).unwrap(), h);
    }
}

#[test]
fn terms_round_trip_and_compare() {
    let mut p = phi("eta", PhiMode::Growth, 0);
    let delta: Arc<OrderTypeExpr> = p.delta().clone();
    let a = parse_hahn(&delta, "2@1/3").unwrap();
    let t = tl_apply(&a, &rat(-5, 2)).unwrap();
    assert_eq!(pterm_log(&pterm_exp(&t)), t);
    assert_eq!(pterm_compare(&mut p, &t, &pterm_exp(&t)).unwrap(), Ordering::Less);
    let x = parse_pterm(&delta, "1@0|2|3/4").unwrap();
    let y = parse_pterm(&delta, "1@0|3|0").unwrap();
    assert_eq!(pterm_compare(&mut p, &x, &y).unwrap(), Ordering::Less);
    assert_eq!(parse_pterm(&delta, &t.to_string()).unwrap(), t);
}

#[test]
fn indicators_sit_in_their_own_class() {
    let mut p = phi("eta", PhiMode::Growth, 2);
    for n in -6..6 {
        let g = indicator(rat(n, 3)).neg();
        let c = p.xt_class(&g).unwrap();
        let d = p.xt_class(&g.scale(&int(5))).unwrap();
        assert_eq!(c, d);
    }
}

#[test]
fn json_survives_and_replays() {
    let mut p = phi("eta", PhiMode::Growth, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let hs: Vec<_> = (0..40).map(|_| sample_index(&mut p, &mut rng).unwrap()).collect();
    let before: Vec<_> = hs.iter().map(|h| p.phi(h).unwrap()).collect();
    let mut q = PhiMap::from_json(&p.to_json()).unwrap();
    let after: Vec<_> = hs.iter().map(|h| q.phi(h).unwrap()).collect();
    assert_eq!(before, after);
}

#[test]
fn back_and_forth_between_rank_and_rationals() {
    let delta = parse_ordertype("eta + eta").unwrap();
    let mut iso = PartialIso::new(delta.clone(), Rationals, 0).unwrap();
    iso.extend(200).unwrap();
    let mut pairs: Vec<_> = iso.pairs().iter().map(|m| (m.left.clone(), m.right.clone())).collect();
    pairs.sort_by(|a, b| delta.cmp_members(&a.0, &b.0));
    for w in pairs.windows(2) {
        assert!(w[0].1 < w[1].1);
    }
    for (l, r) in &pairs {
        assert_eq!(&iso.invert(r).unwrap(), l);
    }
}
