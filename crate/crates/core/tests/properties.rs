mod common;

use common::*;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use wproj_core::exactnum::{factor, flog_combine, flog_compare, ord_rat, prime_to_s, FormalLog, Prime};
use wproj_core::search::{search_hypersurface, SearchConfig};
use wproj_core::wheight::{hwgcd_mult, log_hwgcd_point, lwh, wh_m_power};
use wproj_core::wpoint::integralize;
use wproj_core::wpoly::{VarTable, WPoly};
use wproj_core::{WPoint, WeightVector};

const WEIGHT_SETS: [&[u64]; 4] = [&[1, 2, 3], &[2, 4, 6, 10], &[2, 3], &[1, 1, 1]];

fn wv(q: &[u64]) -> WeightVector {
    WeightVector::classify(q).unwrap()
}

/// A weight set and a nonzero tuple `s^{q_i}·y_i`, so weighted gcds are
/// often nontrivial.
fn tuple() -> impl Strategy<Value = (Vec<u64>, Vec<i64>)> {
    (0..WEIGHT_SETS.len()).prop_flat_map(|k| {
        let q = WEIGHT_SETS[k].to_vec();
        let n = q.len();
        (Just(q), prop::collection::vec(-30i64..=30, n), 1i64..=4).prop_filter_map("all zero", |(q, y, s)| {
            if y.iter().all(|&v| v == 0) {
                return None;
            }
            let x = y.iter().zip(&q).map(|(&v, &qi)| v * s.pow(qi as u32)).collect();
            Some((q, x))
        })
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-100_000i64..=100_000, 1i64..=100_000).prop_filter_map("zero", |(n, d)| (n != 0).then(|| rat(n, d)))
}

fn flog() -> impl Strategy<Value = FormalLog> {
    prop::collection::vec((prop::sample::select(vec![2u64, 3, 5, 7, 11]), -6i64..=6, 1i64..=4), 0..4).prop_map(|ts| {
        ts.into_iter()
            .map(|(p, n, d)| FormalLog::prime_term(BigUint::from(p), rat(n, d)))
            .fold(FormalLog::zero(), |a, b| a + b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn factor_round_trip(n in -1_000_000_000_000i64..=1_000_000_000_000) {
        prop_assume!(n != 0);
        let f = factor(&BigInt::from(n)).unwrap();
        prop_assert_eq!(f.reconstruct(), BigInt::from(n));
        for (p, _) in f.factors() {
            let p: u64 = p.try_into().unwrap();
            prop_assert!(p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)), "{} is composite", p);
        }
    }

    #[test]
    fn ord_is_additive(a in rational(), b in rational(), p in prop::sample::select(vec![2u64, 3, 5, 7, 101])) {
        let p = BigUint::from(p);
        prop_assert_eq!(ord_rat(&(&a * &b), &p), ord_rat(&a, &p) + ord_rat(&b, &p));
    }

    #[test]
    fn product_formula(a in rational()) {
        // numerator and denominator are coprime, so each prime appears once
        let mut finite = FormalLog::zero();
        for n in [a.numer().abs(), a.denom().clone()] {
            for (p, _) in factor(&n).unwrap().factors() {
                finite = finite + FormalLog::prime_term(p.clone(), rat(ord_rat(&a, p), 1));
            }
        }
        prop_assert!((finite - FormalLog::log_rational(&a.abs())).is_zero());
    }

    #[test]
    fn prime_to_s_is_multiplicative(x in -1_000_000i64..=1_000_000, y in -1_000_000i64..=1_000_000) {
        prop_assume!(x != 0 && y != 0);
        let s = [Prime::from_u64(2).unwrap(), Prime::from_u64(3).unwrap(), Prime::from_u64(7).unwrap()];
        let xy = prime_to_s(&BigInt::from(x * y), &s).unwrap();
        prop_assert_eq!(xy, prime_to_s(&BigInt::from(x), &s).unwrap() * prime_to_s(&BigInt::from(y), &s).unwrap());
    }

    #[test]
    fn flog_order(a in flog(), b in flog(), c in flog()) {
        let ab = flog_compare(&a, &b);
        prop_assert_eq!(ab, flog_compare(&b, &a).reverse());
        if ab != std::cmp::Ordering::Greater && flog_compare(&b, &c) != std::cmp::Ordering::Greater {
            prop_assert_ne!(flog_compare(&a, &c), std::cmp::Ordering::Greater);
        }
        let diff = flog_combine(&[(rat(1, 1), a.clone()), (rat(-1, 1), b.clone())]);
        prop_assert_eq!(ab, diff.signum().cmp(&0));
    }

    #[test]
    fn normalize_is_idempotent((q, x) in tuple()) {
        let p = WPoint::from_i64(&wv(&q), &x).unwrap();
        let n = p.normalize();
        prop_assert!(n.wgcd().is_one());
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(p.equals(&n).unwrap());
    }

    #[test]
    fn wgcd_matches_definition((q, x) in tuple()) {
        let p = WPoint::from_i64(&wv(&q), &x).unwrap();
        prop_assert_eq!(p.wgcd().clone(), BigUint::from(wgcd_brute(&x, &q)));
    }

    #[test]
    fn canonical_forms((q, x) in tuple(), l in 1i64..=6, neg in any::<bool>()) {
        let w = wv(&q);
        let p = WPoint::from_i64(&w, &x).unwrap();
        let c = p.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(orbit_equivalent(p.coords(), c.coords(), &q));
        let lambda = rat(if neg { -l } else { l }, 1);
        let y = p.act(&lambda).unwrap();
        prop_assert_eq!(y.canonicalize(), c);
        prop_assert_eq!(y.veronese(), p.veronese());
    }

    #[test]
    fn veronese_identity_and_nonnegativity((q, x) in tuple()) {
        let w = wv(&q);
        let p = WPoint::from_i64(&w, &x).unwrap();
        let h = lwh(&p);
        prop_assert!(h.signum() >= 0);
        let m = rat(w.lcm() as i64, 1);
        let hv = veronese_height(p.coords(), &q);
        prop_assert_eq!(wh_m_power(&p), BigRational::from_integer(BigInt::from(hv.clone())));
        prop_assert!((h.scaled(&m) - FormalLog::log_uint(&hv)).is_zero());
    }

    #[test]
    fn representative_invariance((q, x) in tuple(), n in -20i64..=20, d in 1i64..=20) {
        prop_assume!(n != 0);
        let w = wv(&q);
        let p = WPoint::from_i64(&w, &x).unwrap();
        let lambda = rat(n, d);
        let moved: Vec<BigRational> = p
            .coords()
            .iter()
            .zip(&q)
            .map(|(c, &qi)| num_traits::pow(lambda.clone(), qi as usize) * BigRational::from_integer(c.clone()))
            .collect();
        let (y, _) = integralize(&moved, &w).unwrap();
        prop_assert_eq!(lwh(&y), lwh(&p));
    }

    #[test]
    fn rescaled_weights((q, x) in tuple(), d in 2u64..=4) {
        let p = WPoint::from_i64(&wv(&q), &x).unwrap();
        let dq: Vec<u64> = q.iter().map(|v| v * d).collect();
        let pd = WPoint::from_i64(&wv(&dq), &x).unwrap();
        prop_assert_eq!(lwh(&pd), lwh(&p).scaled(&rat(1, d as i64)));
    }

    #[test]
    fn hwgcd_mult_matches_point_form((q, x) in tuple()) {
        let w = wv(&q);
        let p = WPoint::from_i64(&w, &x).unwrap();
        let xs: Vec<BigRational> = x.iter().map(|&v| rat(v, 1)).collect();
        let g = hwgcd_mult(&xs, &w).unwrap();
        prop_assert_eq!(FormalLog::log_uint(&g), log_hwgcd_point(&p));
    }

    #[test]
    fn homogeneity(k in 0usize..6, seed in prop::collection::vec(-9i64..=9, 40), a in prop::collection::vec(-12i64..=12, 3), l in -5i64..=5) {
        prop_assume!(l != 0);
        let q = [1u64, 2, 3];
        let d = 2 + k as u64 * 2;
        let monos = monomials(&q, d);
        let coeffs: Vec<i64> = monos.iter().enumerate().map(|(i, _)| seed[i % seed.len()]).collect();
        let f = WPoly::parse(&poly_text(&coeffs, &monos), &VarTable::indexed(&wv(&q))).unwrap();
        let alpha = big(&a);
        prop_assert_eq!(f.eval(&alpha).unwrap(), eval_direct(&coeffs, &monos, &alpha));
        let scaled: Vec<BigInt> = alpha.iter().zip(&q).map(|(v, &qi)| v * BigInt::from(l).pow(qi as u32)).collect();
        prop_assert_eq!(f.eval(&scaled).unwrap(), f.eval(&alpha).unwrap() * BigInt::from(l).pow(d as u32));
        let printed = f.to_string();
        let again = WPoly::parse(&printed, f.vars()).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(again.to_string(), printed);
    }
}

#[test]
fn weight_vectors_reduce_and_well_formalize() {
    for n in 2..=5usize {
        let mut q = vec![1u64; n];
        loop {
            let w = wv(&q);
            let (r, d) = w.reduce_weights();
            assert!(r.is_reduced(), "{q:?}");
            assert_eq!(r.weights().iter().map(|v| v * d).collect::<Vec<_>>(), q);
            assert!(r.well_formalize().unwrap().weights.is_well_formed(), "{q:?}");
            let Some(i) = q.iter().position(|&v| v < 12) else { break };
            q[i] += 1;
            for v in &mut q[..i] {
                *v = 1;
            }
            if n == 5 && q[4] > 4 {
                break;
            }
        }
    }
}

#[test]
fn well_formalization_respects_equivalence() {
    for q in [&[1u64, 2, 2][..], &[2, 3, 6], &[6, 10, 15], &[1, 4, 6, 6]] {
        let w = wv(q);
        let wf = w.well_formalize().unwrap();
        for x in [[1i64, 2, 3, 4], [2, -1, 5, 7], [0, 3, 1, 1], [5, 0, -2, 3]] {
            let x = &x[..q.len()];
            if x.iter().all(|&v| v == 0) {
                continue;
            }
            let p = WPoint::from_i64(&w, x).unwrap();
            for l in [2i64, -3, 6] {
                let y = p.act(&rat(l, 1)).unwrap();
                let tp = WPoint::new(wf.weights.clone(), wf.transform_point(p.coords())).unwrap();
                let ty = WPoint::new(wf.weights.clone(), wf.transform_point(y.coords())).unwrap();
                assert!(tp.equals(&ty).unwrap(), "{q:?} {x:?} {l}");
            }
        }
    }
}

#[test]
fn search_soundness_on_random_curves() {
    let q = [1u64, 2, 3];
    let w = wv(&q);
    let monos = monomials(&q, 6);
    for s in 0..6i64 {
        let coeffs: Vec<i64> = (0..monos.len() as i64).map(|i| ((i * 7 + s * 13) % 9) - 4).collect();
        let f = WPoly::parse(&poly_text(&coeffs, &monos), &VarTable::indexed(&w)).unwrap();
        let b = rat(2, 1);
        let r = search_hypersurface(&SearchConfig::new(w.clone(), b.clone()).with_hypersurface(f)).unwrap();
        let bm = BigUint::from(64u32);
        for p in &r.points {
            assert!(eval_direct(&coeffs, &monos, p.point.coords()).is_zero());
            assert!(veronese_height(p.point.coords(), &q) <= bm);
            assert!(p.point.is_canonical());
        }
    }
}
