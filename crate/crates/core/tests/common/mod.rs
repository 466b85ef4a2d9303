//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use wproj_core::exactnum::FormalLog;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Primes by trial division.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

/// Largest `g` with `g^{q_i} | x_i` for all `i`, by direct search over
/// candidates dividing the smallest nonzero coordinate.
pub fn wgcd_brute(x: &[i64], q: &[u64]) -> u64 {
    let bound = x.iter().filter(|&&v| v != 0).map(|v| v.unsigned_abs()).min().unwrap();
    (1..=bound)
        .filter(|g| {
            x.iter().zip(q).all(|(&v, &qi)| match g.checked_pow(qi as u32) {
                Some(gq) => v.unsigned_abs() % gq == 0,
                None => v == 0,
            })
        })
        .max()
        .unwrap()
}

/// Classical height `max|v_i| / gcd(v)` of an integer vector.
pub fn classical_height(v: &[BigInt]) -> BigUint {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    v.iter().map(|c| (c / &g).magnitude().clone()).max().unwrap()
}

/// `H(φ_m(x))`, computed from the raw Veronese coordinates.
pub fn veronese_height(x: &[BigInt], q: &[u64]) -> BigUint {
    let m = q.iter().fold(1u64, |a, &b| a.lcm(&b));
    let v: Vec<BigInt> = x.iter().zip(q).map(|(c, &qi)| num_traits::pow(c.clone(), (m / qi) as usize)).collect();
    classical_height(&v)
}

/// Bezout coefficients `c` with `Σ c_i·a_i = gcd(a)`.
pub fn bezout(a: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut c: Vec<i64> = Vec::new();
    for &ai in a {
        let e = g.extended_gcd(&ai);
        c = c.into_iter().map(|ci| ci * e.x).collect();
        c.push(e.y);
        g = e.gcd;
    }
    (g, c)
}

fn rpow(r: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

/// Whether some `λ ∈ Q̄*` has `λ^{q_i}·x_i = y_i` for all `i`.
///
/// With `r_i = y_i/x_i` on the common support and `g = Σ c_i·q_i`, any such
/// `λ` has `λ^g = Π r_i^{c_i} = ρ`, so the condition is `r_i = ρ^{q_i/g}`.
pub fn orbit_equivalent(x: &[BigInt], y: &[BigInt], q: &[u64]) -> bool {
    if x.iter().zip(y).any(|(a, b)| a.is_zero() != b.is_zero()) {
        return false;
    }
    let idx: Vec<usize> = (0..x.len()).filter(|&i| !x[i].is_zero()).collect();
    let r: Vec<BigRational> = idx.iter().map(|&i| BigRational::new(y[i].clone(), x[i].clone())).collect();
    let qs: Vec<i64> = idx.iter().map(|&i| q[i] as i64).collect();
    let (g, c) = bezout(&qs);
    let rho = r.iter().zip(&c).fold(BigRational::one(), |acc, (ri, &ci)| acc * rpow(ri, ci));
    r.iter().zip(&qs).all(|(ri, &qi)| *ri == rpow(&rho, qi / g))
}

/// `log|n|` as a `FormalLog` from trial-division factorization.
pub fn log_int(n: u64) -> FormalLog {
    let mut n = n;
    let mut out = FormalLog::zero();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0i64;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out = out + FormalLog::prime_term(BigUint::from(p), rat(e, 1));
        }
        p += 1;
    }
    if n > 1 {
        out = out + FormalLog::prime_term(BigUint::from(n), rat(1, 1));
    }
    out
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).abs()
}

/// Every weighted monomial of degree `d` in variables of weights `q`.
pub fn monomials(q: &[u64], d: u64) -> Vec<Vec<u32>> {
    fn rec(q: &[u64], d: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == q.len() {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let qi = q[cur.len()];
        for e in 0..=d / qi {
            cur.push(e as u32);
            rec(q, d - e * qi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(q, d, &mut Vec::new(), &mut out);
    out
}

/// Text of `Σ c_k·mono_k` in the indexed variables `x0, x1, ...`.
pub fn poly_text(coeffs: &[i64], monos: &[Vec<u32>]) -> String {
    let mut s = String::new();
    for (c, m) in coeffs.iter().zip(monos) {
        if *c == 0 {
            continue;
        }
        let sign = if *c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
        s.push_str(&format!(" {sign} {}", c.abs()));
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                s.push_str(&format!(" x{i}^{e}"));
            }
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Direct evaluation of `Σ c_k·mono_k`.
pub fn eval_direct(coeffs: &[i64], monos: &[Vec<u32>], a: &[BigInt]) -> BigInt {
    coeffs
        .iter()
        .zip(monos)
        .map(|(&c, m)| {
            m.iter().zip(a).fold(BigInt::from(c), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
        })
        .sum()
}
