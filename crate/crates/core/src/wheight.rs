//! Weighted heights, weighted gcds and the S-split heights of coordinate
//! divisors.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{factor_magnitude, floor_ln_div, format_significant, ord_int, ord_rat, FormalLog, Place, Prime};
use crate::wpoint::{common_primes, WPoint};
use crate::wspace::WeightVector;

fn frac(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Index `k` maximizing `|x_k|^{1/q_k}`, decided exactly in the `m`-th power.
pub(crate) fn archimedean_argmax(coords: &[BigInt], q: &[u64], m: u64) -> usize {
    let mut best: Option<(usize, BigUint)> = None;
    for (i, (x, &qi)) in coords.iter().zip(q).enumerate() {
        if x.is_zero() {
            continue;
        }
        let v = x.magnitude().pow((m / qi) as u32);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((i, v));
        }
    }
    best.expect("nonzero point").0
}

/// `log max_i |x_i|^{1/q_i}` at the archimedean place.
pub fn archimedean_log_max(coords: &[BigInt], w: &WeightVector) -> FormalLog {
    let k = archimedean_argmax(coords, w.weights(), w.lcm());
    FormalLog::log_abs(&coords[k]).scaled(&frac(1, w.weight(k)))
}

/// `min_{x_i ≠ 0} ν_p(x_i)/q_i`.
fn min_scaled_ord(coords: &[BigInt], q: &[u64], p: &BigUint) -> BigRational {
    coords
        .iter()
        .zip(q)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, &qi)| frac(ord_int(x, p), qi))
        .min()
        .expect("nonzero point")
}

/// `log max_i |x_i|_v^{1/q_i}`.
pub fn local_height(x: &WPoint, v: &Place) -> FormalLog {
    let q = x.weights().weights();
    match v {
        Place::Finite(p) => {
            let c = min_scaled_ord(x.coords(), q, p.value());
            FormalLog::prime_term(p.value().clone(), -c)
        }
        Place::Infinite => archimedean_log_max(x.coords(), x.weights()),
    }
}

/// Logarithmic weighted height: the sum of local heights over all places.
pub fn lwh(x: &WPoint) -> FormalLog {
    let q = x.weights().weights();
    let mut out = archimedean_log_max(x.coords(), x.weights());
    // only primes dividing every nonzero coordinate have a nonzero local term
    for p in common_primes(x.coords()) {
        let c = min_scaled_ord(x.coords(), q, &p);
        out.add_term(p, -c);
    }
    out
}

/// `wh(x)^m`, the classical height of the Veronese image.
pub fn wh_m_power(x: &WPoint) -> BigRational {
    let v = x.veronese();
    let h = v.iter().map(|c| c.magnitude().clone()).max().unwrap();
    BigRational::from_integer(BigInt::from(h))
}

fn min_clamped(a: Option<BigRational>, b: Option<BigRational>) -> Option<BigRational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Classical generalized logarithmic gcd `Σ_v min{ν_v⁺(α), ν_v⁺(β)}`.
pub fn hgcd(a: &BigRational, b: &BigRational) -> Result<FormalLog> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroArgument { op: "hgcd" });
    }
    let mut out = FormalLog::zero();
    // Primes where ν⁺ can be positive in both arguments.
    let candidates: Vec<BigUint> = match (a.is_zero(), b.is_zero()) {
        (false, false) => {
            let g = num_integer::Integer::gcd(a.numer().magnitude(), b.numer().magnitude());
            if g.is_one() { vec![] } else { factor_magnitude(&g).into_keys().collect() }
        }
        (true, false) => numerator_primes(b),
        (false, true) => numerator_primes(a),
        (true, true) => unreachable!(),
    };
    for p in candidates {
        let va = (!a.is_zero()).then(|| ord_rat(a, &p).max(0));
        let vb = (!b.is_zero()).then(|| ord_rat(b, &p).max(0));
        let e = match (va, vb) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!(),
        };
        out.add_term(p, BigRational::from_integer(BigInt::from(e)));
    }
    // archimedean ν⁺(α) = max(-log|α|, 0) = log(1/|α|) when |α| < 1
    let arch = |x: &BigRational| -> Option<BigRational> {
        (!x.is_zero()).then(|| {
            let r = x.abs().recip();
            if r > BigRational::one() { r } else { BigRational::one() }
        })
    };
    if let Some(r) = min_clamped(arch(a), arch(b)) {
        out += &FormalLog::log_rational(&r);
    }
    Ok(out)
}

fn numerator_primes(a: &BigRational) -> Vec<BigUint> {
    if a.numer().magnitude().is_one() {
        return vec![];
    }
    factor_magnitude(a.numer().magnitude()).into_keys().collect()
}

/// Primes `p` with `min_i ⌊ν_p⁺(x_i)/q_i⌋ > 0` possible: those dividing every
/// nonzero numerator.
fn tuple_primes(xs: &[BigRational]) -> Vec<BigUint> {
    let nums: Vec<BigInt> = xs.iter().map(|x| x.numer().clone()).collect();
    common_primes(&nums)
}

fn tuple_floor_exponent(xs: &[BigRational], q: &[u64], p: &BigUint) -> u64 {
    xs.iter()
        .zip(q)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, &qi)| ord_rat(x, p).max(0) as u64 / qi)
        .min()
        .unwrap_or(0)
}

fn check_tuple(xs: &[BigRational], w: &WeightVector) -> Result<()> {
    w.check_len(xs.len())?;
    if xs.iter().all(Zero::is_zero) {
        return Err(Error::AllZeroPoint);
    }
    Ok(())
}

/// Generalized weighted gcd `Π_p p^{min_i ⌊ν_p⁺(x_i)/q_i⌋}` (finite places).
pub fn hwgcd_mult(xs: &[BigRational], w: &WeightVector) -> Result<BigUint> {
    check_tuple(xs, w)?;
    let mut out = BigUint::one();
    for p in tuple_primes(xs) {
        let e = tuple_floor_exponent(xs, w.weights(), &p);
        out *= p.pow(e as u32);
    }
    Ok(out)
}

/// Generalized logarithmic weighted gcd, split into its finite-place part and
/// the archimedean floor `min_i ⌊ν_∞⁺(x_i)/q_i⌋`, which counts multiples of
/// `log e = 1` and so is kept outside the prime-log basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HwgcdLog {
    pub finite: FormalLog,
    pub archimedean: u64,
}

impl HwgcdLog {
    pub fn is_zero(&self) -> bool {
        self.finite.is_zero() && self.archimedean == 0
    }

    /// Both parts are nonnegative, so positivity means nonzero.
    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.finite.to_f64() + self.archimedean as f64
    }

    pub fn decimal(&self) -> String {
        format_significant(self.to_f64(), 15)
    }
}

impl fmt::Display for HwgcdLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.finite.is_zero(), self.archimedean) {
            (_, 0) => write!(f, "{}", self.finite),
            (true, k) => write!(f, "{k}"),
            (false, k) => write!(f, "{} + {k}", self.finite),
        }
    }
}

pub fn log_hwgcd_tuple(xs: &[BigRational], w: &WeightVector) -> Result<HwgcdLog> {
    check_tuple(xs, w)?;
    let mut finite = FormalLog::zero();
    for p in tuple_primes(xs) {
        let e = tuple_floor_exponent(xs, w.weights(), &p);
        finite.add_term(p, BigRational::from_integer(BigInt::from(e)));
    }
    let archimedean = xs
        .iter()
        .zip(w.weights())
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, &q)| {
            let inv = x.abs().recip();
            if inv > BigRational::one() {
                floor_ln_div(&inv, q)
            } else {
                0
            }
        })
        .min()
        .unwrap_or(0);
    Ok(HwgcdLog { finite, archimedean })
}

/// `log hwgcd(x)` of an integral representative, which equals `log wgcd(x)`:
/// the archimedean floor vanishes because `ν_∞⁺` is 0 on nonzero integers.
pub fn log_hwgcd_point(x: &WPoint) -> FormalLog {
    let xs: Vec<BigRational> = x
        .coords()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let h = log_hwgcd_tuple(&xs, x.weights()).expect("valid point");
    debug_assert_eq!(h.archimedean, 0);
    h.finite
}

/// A divisor `Σ a_i·H_i` built from coordinate hyperplanes `H_i = {x_i = 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateDivisor {
    multiplicities: Vec<u32>,
}

impl CoordinateDivisor {
    pub fn new(multiplicities: Vec<u32>) -> Self {
        CoordinateDivisor { multiplicities }
    }

    /// `-K = Σ_i H_i`.
    pub fn anticanonical(len: usize) -> Self {
        CoordinateDivisor::new(vec![1; len])
    }

    /// `H_i` alone.
    pub fn hyperplane(len: usize, i: usize) -> Self {
        let mut m = vec![0; len];
        m[i] = 1;
        CoordinateDivisor::new(m)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }
}

/// Height split into places in `S ∪ {∞}` and places outside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitHeight {
    pub in_s: FormalLog,
    pub out_s: FormalLog,
}

impl SplitHeight {
    pub fn total(&self) -> FormalLog {
        &self.in_s + &self.out_s
    }
}

/// Local heights of `H_i` on a normalized point, scaled by `1/m`:
/// `(1/m)·ν_p(x_i)·log p` at each prime and
/// `(1/m)·(q_i·log max_j |x_j|^{1/q_j} - log|x_i|)` at infinity. For the
/// anticanonical divisor the part outside `S` is `(1/m)·log|x_0⋯x_n|'_S`.
pub fn split_height_s(x: &WPoint, s: &[Prime], divisor: &CoordinateDivisor) -> Result<SplitHeight> {
    let w = x.weights();
    w.check_len(divisor.multiplicities.len())?;
    if !x.is_normalized() {
        return Err(Error::Config(format!("split heights need a normalized point, got {x}")));
    }
    let m = w.lcm();
    let arch_max = archimedean_log_max(x.coords(), w);
    let mut in_s = FormalLog::zero();
    let mut out_s = FormalLog::zero();
    for (i, (&a, xi)) in divisor.multiplicities.iter().zip(x.coords()).enumerate() {
        if a == 0 {
            continue;
        }
        if xi.is_zero() {
            return Err(Error::InfiniteHeight(format!("coordinate {i} vanishes on H_{i}")));
        }
        let scale = frac(a as u64, m);
        let log_xi = FormalLog::log_abs(xi);
        for (p, c) in log_xi.terms() {
            let term = FormalLog::prime_term(p.clone(), c * &scale);
            if s.iter().any(|sp| sp.value() == p) {
                in_s += &term;
            } else {
                out_s += &term;
            }
        }
        let arch = &arch_max.scaled(&frac(w.weight(i), 1)) - &log_xi;
        in_s += &arch.scaled(&scale);
    }
    Ok(SplitHeight { in_s, out_s })
}
