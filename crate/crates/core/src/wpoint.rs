//! Rational points of `P_w`: integral representatives, weighted gcds,
//! normalization, canonical orbit representatives and the Veronese map.
//!
//! Two integer tuples with the same support `J = {i : x_i ≠ 0}` lie in the
//! same orbit exactly when `y_i = c^{q_i/d_J}·x_i` for a rational `c`, where
//! `d_J = gcd(q_i : i ∈ J)`. Any `λ` with all `λ^{q_i}·x_i` rational has
//! `λ^{d_J}` rational by Bezout, which gives this description. Canonical
//! forms reduce each prime exponent modulo that lattice and then fix the
//! remaining sign.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{factor_magnitude, ord_int};
use crate::wspace::WeightVector;

/// An integral representative of a point of `P_w(Q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WPoint {
    w: WeightVector,
    coords: Vec<BigInt>,
    wgcd: BigUint,
}

impl WPoint {
    pub fn new(w: WeightVector, coords: Vec<BigInt>) -> Result<Self> {
        w.check_len(coords.len())?;
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::AllZeroPoint);
        }
        let wgcd = wgcd_of(&coords, w.weights());
        Ok(WPoint { w, coords, wgcd })
    }

    pub fn from_i64(w: &WeightVector, coords: &[i64]) -> Result<Self> {
        WPoint::new(w.clone(), coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn weights(&self) -> &WeightVector {
        &self.w
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    /// Largest `g` with `g^{q_i} | x_i` for every `i`.
    pub fn wgcd(&self) -> &BigUint {
        &self.wgcd
    }

    pub fn is_normalized(&self) -> bool {
        self.wgcd.is_one()
    }

    /// Indices of nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        support(&self.coords)
    }

    /// `(1/wgcd) ⋆ x`.
    pub fn normalize(&self) -> WPoint {
        if self.wgcd.is_one() {
            return self.clone();
        }
        let g = BigInt::from(self.wgcd.clone());
        let coords = self
            .coords
            .iter()
            .zip(self.w.weights())
            .map(|(x, &q)| x / num_traits::pow(g.clone(), q as usize))
            .collect();
        WPoint {
            w: self.w.clone(),
            coords,
            wgcd: BigUint::one(),
        }
    }

    /// Unique representative of the orbit of `x` under rational scaling.
    pub fn canonicalize(&self) -> WPoint {
        let coords = canonical_coords(&self.coords, self.w.weights());
        WPoint::new(self.w.clone(), coords).expect("canonical form is a valid point")
    }

    pub fn is_canonical(&self) -> bool {
        canonical_coords(&self.coords, self.w.weights()) == self.coords
    }

    /// Whether `self` and `other` represent the same point of `P_w`.
    pub fn equals(&self, other: &WPoint) -> Result<bool> {
        if self.w != other.w {
            return Err(Error::WeightMismatch(format!("{} vs {}", self.w, other.w)));
        }
        Ok(canonical_coords(&self.coords, self.w.weights())
            == canonical_coords(&other.coords, other.w.weights()))
    }

    /// `λ ⋆ x = (λ^{q_i}·x_i)`, which must stay integral.
    pub fn act(&self, lambda: &BigRational) -> Result<WPoint> {
        if lambda.is_zero() {
            return Err(Error::ZeroArgument { op: "act" });
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for (x, &q) in self.coords.iter().zip(self.w.weights()) {
            let v = num_traits::pow(lambda.clone(), q as usize) * BigRational::from_integer(x.clone());
            if !v.is_integer() {
                return Err(Error::NonIntegral(format!("({lambda})^{q} * {x} = {v}")));
            }
            coords.push(v.to_integer());
        }
        WPoint::new(self.w.clone(), coords)
    }

    /// Image under `φ_m`: `(x_i^{m/q_i})` divided by its gcd, first nonzero
    /// coordinate positive.
    pub fn veronese(&self) -> Vec<BigInt> {
        veronese_coords(&self.coords, &self.w)
    }

    pub fn is_singular(&self) -> Result<bool> {
        self.w.is_singular(&self.coords)
    }
}

impl fmt::Display for WPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tuple(&self.coords))
    }
}

impl Serialize for WPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn support(coords: &[BigInt]) -> Vec<usize> {
    coords
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Primes dividing every nonzero coordinate.
pub(crate) fn common_primes(coords: &[BigInt]) -> Vec<BigUint> {
    let g = coords
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigUint::zero(), |g, x| g.gcd(x.magnitude()));
    if g.is_zero() || g.is_one() {
        return vec![];
    }
    factor_magnitude(&g).into_keys().collect()
}

/// `Π_p p^{min_i ⌊ν_p(x_i)/q_i⌋}` over nonzero coordinates.
pub fn wgcd_of(coords: &[BigInt], q: &[u64]) -> BigUint {
    let mut out = BigUint::one();
    for p in common_primes(coords) {
        let e = coords
            .iter()
            .zip(q)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, &qi)| ord_int(x, &p) / qi)
            .min()
            .unwrap_or(0);
        out *= p.pow(e as u32);
    }
    out
}

pub(crate) fn canonical_coords(coords: &[BigInt], q: &[u64]) -> Vec<BigInt> {
    let supp = support(coords);
    let d = supp.iter().fold(0u64, |g, &i| g.gcd(&q[i]));
    let s: Vec<u64> = q.iter().map(|&qi| qi / d.max(1)).collect();
    let mut x = coords.to_vec();
    for p in common_primes(coords) {
        let t = supp
            .iter()
            .map(|&i| ord_int(&x[i], &p) / s[i])
            .min()
            .unwrap_or(0);
        if t > 0 {
            for &i in &supp {
                x[i] /= BigInt::from(p.pow((s[i] * t) as u32));
            }
        }
    }
    // c = -1 multiplies x_i by (-1)^{s_i}; make the last affected
    // coordinate positive.
    if let Some(&k) = supp.iter().rev().find(|&&i| s[i] % 2 == 1) {
        if x[k].sign() == Sign::Minus {
            for &i in &supp {
                if s[i] % 2 == 1 {
                    x[i] = -x[i].clone();
                }
            }
        }
    }
    x
}

pub(crate) fn veronese_coords(coords: &[BigInt], w: &WeightVector) -> Vec<BigInt> {
    let m = w.lcm();
    let mut y: Vec<BigInt> = coords
        .iter()
        .zip(w.weights())
        .map(|(x, &q)| num_traits::pow(x.clone(), (m / q) as usize))
        .collect();
    let g = y.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    let neg = y.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
    for v in &mut y {
        *v /= &g;
        if neg {
            *v = -v.clone();
        }
    }
    y
}

/// Scale rational coordinates by the least positive integer `λ` making every
/// `λ^{q_i}·x_i` integral. Returns the point and `λ`.
pub fn integralize(coords: &[BigRational], w: &WeightVector) -> Result<(WPoint, BigUint)> {
    w.check_len(coords.len())?;
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::AllZeroPoint);
    }
    let den = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut lambda = BigUint::one();
    if !den.is_one() {
        for p in factor_magnitude(den.magnitude()).into_keys() {
            let k = coords
                .iter()
                .zip(w.weights())
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, &q)| {
                    let neg = ord_int(c.denom(), &p) as i64 - ord_int(c.numer(), &p) as i64;
                    (neg.max(0) as u64).div_ceil(q)
                })
                .max()
                .unwrap_or(0);
            lambda *= p.pow(k as u32);
        }
    }
    let l = BigRational::from_integer(BigInt::from(lambda.clone()));
    let out = coords
        .iter()
        .zip(w.weights())
        .map(|(c, &q)| (num_traits::pow(l.clone(), q as usize) * c).to_integer())
        .collect();
    Ok((WPoint::new(w.clone(), out)?, lambda))
}

pub fn format_tuple<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(":")
}

/// Parses `a:b:c` with integer entries.
pub fn parse_int_tuple(s: &str) -> Result<Vec<BigInt>> {
    let mut pos = 0;
    s.split(':')
        .map(|t| {
            let r = t.trim().parse::<BigInt>().map_err(|_| Error::Parse {
                pos,
                msg: format!("`{t}` is not an integer"),
            });
            pos += t.len() + 1;
            r
        })
        .collect()
}

/// Parses `a:b/c:d` with rational entries.
pub fn parse_rational_tuple(s: &str) -> Result<Vec<BigRational>> {
    let mut pos = 0;
    s.split(':')
        .map(|t| {
            let r = parse_rational(t).map_err(|msg| Error::Parse { pos, msg });
            pos += t.len() + 1;
            r
        })
        .collect()
}

pub fn parse_rational(t: &str) -> std::result::Result<BigRational, String> {
    let t = t.trim();
    let bad = || format!("`{t}` is not a rational number");
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{t}`"));
            }
            Ok(BigRational::new(n, d))
        }
        None => match t.split_once('.') {
            Some((int, frac)) if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) => {
                let neg = int.starts_with('-');
                let int = int.trim_start_matches(['-', '+']);
                let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
                let den = num_traits::pow(BigInt::from(10), frac.len());
                let v = BigRational::new(digits, den);
                Ok(if neg { -v } else { v })
            }
            Some(_) => Err(bad()),
            None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(q: &[u64]) -> WeightVector {
        WeightVector::classify(q).unwrap()
    }

    fn p(w: &WeightVector, c: &[i64]) -> WPoint {
        WPoint::from_i64(w, c).unwrap()
    }

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parse_decimal_rationals() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("0.25"), Ok(r(1, 4)));
        assert_eq!(parse_rational("-1.5"), Ok(r(-3, 2)));
        assert_eq!(parse_rational(".5"), Ok(r(1, 2)));
        assert_eq!(parse_rational("3/6"), Ok(r(1, 2)));
        assert!(parse_rational("1.").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    // The defining property, searched directly.
    fn wgcd_brute(c: &[i64], q: &[u64]) -> u64 {
        let bound = c.iter().map(|x| x.unsigned_abs()).filter(|&x| x > 0).min().unwrap();
        (1..=bound)
            .filter(|&g| {
                c.iter()
                    .zip(q)
                    .all(|(&x, &qi)| x == 0 || (x as i128) % (g as i128).pow(qi as u32) == 0)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn integralize_examples() {
        let (x, l) = integralize(&[rat(1, 2), rat(1, 4)], &w(&[2, 4])).unwrap();
        assert_eq!((x.coords(), l), (&ints(&[2, 4])[..], BigUint::from(2u32)));
        let (x, l) = integralize(&[rat(5, 1), rat(-7, 1)], &w(&[2, 4])).unwrap();
        assert_eq!((x.coords(), l), (&ints(&[5, -7])[..], BigUint::one()));
        let (x, l) = integralize(&[rat(1, 3), rat(1, 1)], &w(&[1, 2])).unwrap();
        assert_eq!((x.coords(), l), (&ints(&[1, 9])[..], BigUint::from(3u32)));
        assert_eq!(
            integralize(&[rat(0, 1), rat(0, 1)], &w(&[1, 2])).unwrap_err(),
            Error::AllZeroPoint
        );
    }

    #[test]
    fn wgcd_examples() {
        assert_eq!(wgcd_brute(&[8, 16], &[2, 4]), 2);
        assert_eq!(p(&w(&[2, 4]), &[8, 16]).wgcd(), &BigUint::from(2u32));
        assert_eq!(p(&w(&[2, 4]), &[-1, 16]).wgcd(), &BigUint::one());
        assert_eq!(wgcd_brute(&[12, 144, 1728], &[1, 2, 3]), 12);
        assert_eq!(p(&w(&[1, 2, 3]), &[12, 144, 1728]).wgcd(), &BigUint::from(12u32));
        assert_eq!(p(&w(&[1, 2, 3]), &[0, 0, 1728]).wgcd(), &BigUint::from(12u32));
    }

    #[test]
    fn normalize_examples() {
        let a = p(&w(&[2, 4]), &[8, 16]).normalize();
        assert_eq!(a.coords(), &ints(&[2, 1])[..]);
        assert_eq!(a.normalize(), a);
        let b = p(&w(&[1, 2, 3]), &[12, 144, 1728]).normalize();
        assert_eq!(b.coords(), &ints(&[1, 1, 1])[..]);
        assert!(b.is_normalized());
    }

    #[test]
    fn canonicalize_examples() {
        let l2 = w(&[2, 4, 6, 10]);
        assert_eq!(p(&l2, &[3, 9, 27, 243]).canonicalize().coords(), &ints(&[1, 1, 1, 1])[..]);
        assert_eq!(p(&l2, &[-1, 1, -1, -1]).canonicalize().coords(), &ints(&[1, 1, 1, 1])[..]);
        let c = p(&l2, &[5, -7, 0, 11]).canonicalize();
        assert_eq!(c.canonicalize(), c);
        // support {1}: weight 4 alone, so [0:9:0:0] ~ [0:1:0:0]
        assert_eq!(p(&l2, &[0, 9, 0, 0]).canonicalize().coords(), &ints(&[0, 1, 0, 0])[..]);
        let p1 = w(&[1, 1]);
        assert_eq!(p(&p1, &[1, -1]).canonicalize().coords(), &ints(&[-1, 1])[..]);
        assert_eq!(p(&p1, &[-2, -4]).canonicalize().coords(), &ints(&[1, 2])[..]);
    }

    #[test]
    fn equals_examples() {
        let v = w(&[2, 4]);
        assert!(!p(&v, &[4, 8]).equals(&p(&v, &[2, 1])).unwrap());
        let x = p(&v, &[3, 5]);
        assert!(x.equals(&x.act(&rat(6, 1)).unwrap()).unwrap());
        let l2 = w(&[2, 4, 6, 10]);
        assert!(p(&l2, &[3, 9, 27, 243]).equals(&p(&l2, &[1, 1, 1, 1])).unwrap());
        assert!(p(&v, &[1, 1]).equals(&p(&l2, &[1, 1, 1, 1])).is_err());
    }

    #[test]
    fn act_examples() {
        let v = w(&[2, 4]);
        assert_eq!(p(&v, &[1, 1]).act(&rat(2, 1)).unwrap().coords(), &ints(&[4, 16])[..]);
        assert_eq!(p(&v, &[3, 7]).act(&rat(1, 1)).unwrap(), p(&v, &[3, 7]));
        assert_eq!(p(&v, &[4, 16]).act(&rat(1, 2)).unwrap().coords(), &ints(&[1, 1])[..]);
        assert!(matches!(p(&v, &[1, 1]).act(&rat(1, 2)), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn veronese_examples() {
        let l2 = w(&[2, 4, 6, 10]);
        let x = p(&l2, &[2, 3, 5, 7]);
        let expect: Vec<BigInt> = vec![
            BigInt::from(2).pow(30u32),
            BigInt::from(3).pow(15u32),
            BigInt::from(5).pow(10u32),
            BigInt::from(7).pow(6u32),
        ];
        assert_eq!(x.veronese(), expect);
        assert_eq!(p(&w(&[3, 5]), &[1, 1]).veronese(), ints(&[1, 1]));
        assert_eq!(p(&w(&[2, 4]), &[2, 1]).veronese(), ints(&[4, 1]));
        assert_eq!(p(&w(&[2, 4]), &[-2, 1]).veronese(), ints(&[4, 1]));
    }

    #[test]
    fn wgcd_floor_formula_matches_definition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [[1u64, 2, 3], [2, 3, 1], [2, 4, 6]] {
            for _ in 0..2000 {
                let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-2000..=2000)).collect();
                if c.iter().all(|&x| x == 0) {
                    continue;
                }
                let x = WPoint::new(w(&q), ints(&c)).unwrap();
                assert_eq!(x.wgcd(), &BigUint::from(wgcd_brute(&c, &q)), "{c:?} {q:?}");
            }
        }
    }

    #[test]
    fn parse_tuples() {
        assert_eq!(parse_int_tuple("-1:2:0").unwrap(), ints(&[-1, 2, 0]));
        assert!(parse_int_tuple("1:x").is_err());
        assert_eq!(
            parse_rational_tuple("1/2:4:-8").unwrap(),
            vec![rat(1, 2), rat(4, 1), rat(-8, 1)]
        );
        assert!(parse_rational_tuple("1/0:2").is_err());
    }
}
