//! Integer factorization, place-wise valuations and the [`FormalLog`] value
//! type that carries every height in the crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Primality and factorization
// ---------------------------------------------------------------------------

const TRIAL_LIMIT: u64 = 10_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of an arbitrary positive integer (BPSW beyond 64 bits).
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => num_prime::nt_funcs::is_prime(n, Some(num_prime::PrimalityTestConfig::bpsw()))
            .probably(),
    }
}

// Brent's variant of Pollard rho. `n` must be odd and composite.
fn rho_split(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn factor_u64_into(mut n: u64, out: &mut BTreeMap<u64, u32>) {
    for p in [2u64, 3, 5] {
        while n.is_multiple_of(p) {
            *out.entry(p).or_default() += 1;
            n /= p;
        }
    }
    let mut p = 7u64;
    // wheel over 2·3·5
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while p <= TRIAL_LIMIT && p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_default() += 1;
            n /= p;
        }
        p += STEPS[i];
        i = (i + 1) % STEPS.len();
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            *out.entry(m).or_default() += 1;
            continue;
        }
        let d = rho_split(m);
        stack.push(d);
        stack.push(m / d);
    }
}

/// Factorization of a nonzero integer as a unit times increasing prime powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFactorization {
    unit: i8,
    factors: Vec<(BigUint, u32)>,
}

impl PrimeFactorization {
    pub fn unit(&self) -> i8 {
        self.unit
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn reconstruct(&self) -> BigInt {
        let mag = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        if self.unit < 0 {
            -BigInt::from(mag)
        } else {
            BigInt::from(mag)
        }
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factor the absolute value of a positive integer into a prime → exponent map.
pub fn factor_magnitude(n: &BigUint) -> BTreeMap<BigUint, u32> {
    assert!(!n.is_zero(), "factor_magnitude of zero");
    if let Some(small) = n.to_u64() {
        let mut out = BTreeMap::new();
        factor_u64_into(small, &mut out);
        return out.into_iter().map(|(p, e)| (BigUint::from(p), e)).collect();
    }
    let mut out: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            *out.entry(bp.clone()).or_default() += 1;
            rest = q;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(small) = rest.to_u64() {
        let mut tail = BTreeMap::new();
        factor_u64_into(small, &mut tail);
        for (p, e) in tail {
            *out.entry(BigUint::from(p)).or_default() += e;
        }
    } else if !rest.is_one() {
        for (p, e) in num_prime::nt_funcs::factorize(rest) {
            *out.entry(p).or_default() += e as u32;
        }
    }
    out
}

/// Factor a nonzero integer.
pub fn factor(n: &BigInt) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::ZeroArgument { op: "factor" });
    }
    let unit = if n.sign() == Sign::Minus { -1 } else { 1 };
    let factors = factor_magnitude(n.magnitude()).into_iter().collect();
    Ok(PrimeFactorization { unit, factors })
}

// ---------------------------------------------------------------------------
// Places and valuations
// ---------------------------------------------------------------------------

/// A verified rational prime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(BigUint);

impl Prime {
    pub fn new(p: BigUint) -> Result<Self> {
        if is_prime(&p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p.to_string()))
        }
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        Prime::new(BigUint::from(p))
    }

    pub(crate) fn new_unchecked(p: BigUint) -> Self {
        debug_assert!(is_prime(&p));
        Prime(p)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let n = BigUint::from_str(s.trim()).map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("`{s}` is not a positive integer"),
        })?;
        Prime::new(n)
    }
}

/// A place of Q: one per prime, plus the archimedean place.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(Prime),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => p.fmt(f),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinite),
            other => Ok(Place::Finite(other.parse()?)),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn ord_int(n: &BigInt, p: &BigUint) -> u64 {
    debug_assert!(!n.is_zero());
    if let (Some(mut m), Some(p)) = (n.magnitude().to_u64(), p.to_u64()) {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        return e;
    }
    let mut m = n.magnitude().clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// Exponent of `p` in a nonzero rational.
pub fn ord_rat(a: &BigRational, p: &BigUint) -> i64 {
    ord_int(a.numer(), p) as i64 - ord_int(a.denom(), p) as i64
}

/// Additive valuation at a place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Archimedean(FormalLog),
}

/// `ord(α, v)`: the exponent of `p` at a finite place, `-log|α|` at infinity.
pub fn ord(a: &BigRational, v: &Place) -> Result<Valuation> {
    if a.is_zero() {
        return Err(Error::ZeroArgument { op: "ord" });
    }
    Ok(match v {
        Place::Finite(p) => Valuation::Finite(ord_rat(a, p.value())),
        Place::Infinite => Valuation::Archimedean(-FormalLog::log_rational(a)),
    })
}

/// `max(ord(α, v), 0)`, with `+∞` at `α = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClampedOrd {
    Infinity,
    Finite(u64),
    Archimedean(FormalLog),
}

pub fn ord_plus(a: &BigRational, v: &Place) -> ClampedOrd {
    if a.is_zero() {
        return ClampedOrd::Infinity;
    }
    match v {
        Place::Finite(p) => ClampedOrd::Finite(ord_rat(a, p.value()).max(0) as u64),
        Place::Infinite => {
            let m = -FormalLog::log_rational(a);
            ClampedOrd::Archimedean(if m.signum() > 0 { m } else { FormalLog::zero() })
        }
    }
}

/// Largest divisor of `|x|` coprime to every prime in `s`.
pub fn prime_to_s(x: &BigInt, s: &[Prime]) -> Result<BigUint> {
    if x.is_zero() {
        return Err(Error::ZeroArgument { op: "prime_to_S" });
    }
    let mut m = x.magnitude().clone();
    for p in s {
        loop {
            let (q, r) = m.div_rem(p.value());
            if !r.is_zero() {
                break;
            }
            m = q;
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// FormalLog
// ---------------------------------------------------------------------------

/// An exact real number `Σ_p c_p · log p` with rational coefficients.
///
/// Since the logarithms of distinct primes are linearly independent over Q,
/// two values are equal exactly when their coefficient maps agree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FormalLog {
    coeffs: BTreeMap<BigUint, BigRational>,
}

impl FormalLog {
    pub fn zero() -> Self {
        FormalLog::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `c · log p`. `p` must be prime.
    pub fn prime_term(p: BigUint, c: BigRational) -> Self {
        let mut out = FormalLog::zero();
        out.add_term(p, c);
        out
    }

    /// `log n` for a positive integer.
    pub fn log_uint(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "log of zero");
        let coeffs = factor_magnitude(n)
            .into_iter()
            .map(|(p, e)| (p, BigRational::from_integer(BigInt::from(e))))
            .collect();
        FormalLog { coeffs }
    }

    /// `log |n|` for a nonzero integer.
    pub fn log_abs(n: &BigInt) -> Self {
        FormalLog::log_uint(n.magnitude())
    }

    /// `log |a|` for a nonzero rational.
    pub fn log_rational(a: &BigRational) -> Self {
        FormalLog::log_abs(a.numer()) - FormalLog::log_abs(a.denom())
    }

    pub fn coeff(&self, p: &BigUint) -> BigRational {
        self.coeffs.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.coeffs.iter()
    }

    pub(crate) fn add_term(&mut self, p: BigUint, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return FormalLog::zero();
        }
        FormalLog {
            coeffs: self.coeffs.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        }
    }

    /// Exact rational-linear combination `Σ c_k · v_k`.
    pub fn combine<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a BigRational, &'a FormalLog)>,
    {
        let mut out = FormalLog::zero();
        for (c, v) in terms {
            for (p, a) in &v.coeffs {
                out.add_term(p.clone(), a * c);
            }
        }
        out
    }

    /// Floating point value (rendering only).
    pub fn to_f64(&self) -> f64 {
        self.coeffs.iter().map(|(p, c)| rat_to_f64(c) * ln_big(p)).sum()
    }

    /// The value rendered with 15 significant digits.
    pub fn decimal(&self) -> String {
        format_significant(self.to_f64(), 15)
    }

    /// Sign of the represented real number.
    pub fn signum(&self) -> i32 {
        if self.coeffs.is_empty() {
            return 0;
        }
        // Certified floating point filter first.
        let mut approx = 0.0f64;
        let mut mag = 0.0f64;
        for (p, c) in &self.coeffs {
            let t = rat_to_f64(c) * ln_big(p);
            approx += t;
            mag += t.abs();
        }
        let err = mag * 1e-12 + f64::MIN_POSITIVE;
        if approx.is_finite() && approx.abs() > err {
            return if approx > 0.0 { 1 } else { -1 };
        }
        // Exact: clear denominators and compare two integer products.
        let l = self
            .coeffs
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut pos = BigUint::one();
        let mut neg = BigUint::one();
        for (p, c) in &self.coeffs {
            let e = (c.numer() * &l) / c.denom();
            let k = e.magnitude().to_u32().expect("exponent fits in u32");
            if e.is_positive() {
                pos *= p.pow(k);
            } else {
                neg *= p.pow(k);
            }
        }
        match pos.cmp(&neg) {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => unreachable!("distinct prime powers cannot coincide"),
        }
    }
}

impl Ord for FormalLog {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self - other).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => unreachable!(),
        }
    }
}

impl PartialOrd for FormalLog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Three-way comparison of represented values.
pub fn flog_compare(a: &FormalLog, b: &FormalLog) -> Ordering {
    a.cmp(b)
}

impl std::ops::Add<&FormalLog> for &FormalLog {
    type Output = FormalLog;
    fn add(self, rhs: &FormalLog) -> FormalLog {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::Add for FormalLog {
    type Output = FormalLog;
    fn add(mut self, rhs: FormalLog) -> FormalLog {
        self += &rhs;
        self
    }
}

impl std::ops::AddAssign<&FormalLog> for FormalLog {
    fn add_assign(&mut self, rhs: &FormalLog) {
        for (p, c) in &rhs.coeffs {
            self.add_term(p.clone(), c.clone());
        }
    }
}

impl std::ops::Sub<&FormalLog> for &FormalLog {
    type Output = FormalLog;
    fn sub(self, rhs: &FormalLog) -> FormalLog {
        let mut out = self.clone();
        for (p, c) in &rhs.coeffs {
            out.add_term(p.clone(), -c);
        }
        out
    }
}

impl std::ops::Sub for FormalLog {
    type Output = FormalLog;
    fn sub(self, rhs: FormalLog) -> FormalLog {
        &self - &rhs
    }
}

impl std::ops::Neg for FormalLog {
    type Output = FormalLog;
    fn neg(self) -> FormalLog {
        FormalLog {
            coeffs: self.coeffs.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl std::iter::Sum for FormalLog {
    fn sum<I: Iterator<Item = FormalLog>>(iter: I) -> Self {
        iter.fold(FormalLog::zero(), |acc, v| acc + v)
    }
}

impl fmt::Display for FormalLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "log {p}")?;
            } else if a.is_integer() {
                write!(f, "{}·log {p}", a.numer())?;
            } else {
                write!(f, "({}/{})·log {p}", a.numer(), a.denom())?;
            }
        }
        Ok(())
    }
}

impl FromStr for FormalLog {
    type Err = Error;

    /// Parses the `Display` form, e.g. `2·log 2 - (1/3)·log 5`. `*` may
    /// stand in for `·`.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.replace('·', "*");
        let t = text.trim();
        if t == "0" {
            return Ok(FormalLog::zero());
        }
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let bytes = t.as_bytes();
        let mut i = 0usize;
        let mut out = FormalLog::zero();
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        let read_int = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            (start < *i).then(|| t[start..*i].parse().unwrap())
        };
        let mut first = true;
        while i < bytes.len() {
            skip_ws(&mut i);
            let mut sign = BigInt::one();
            if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if !first {
                return Err(err(i, "expected `+` or `-`"));
            }
            first = false;
            skip_ws(&mut i);
            let coeff = if i < bytes.len() && bytes[i] == b'(' {
                i += 1;
                let n = read_int(&mut i).ok_or_else(|| err(i, "expected numerator"))?;
                if i >= bytes.len() || bytes[i] != b'/' {
                    return Err(err(i, "expected `/`"));
                }
                i += 1;
                let d = read_int(&mut i).ok_or_else(|| err(i, "expected denominator"))?;
                if i >= bytes.len() || bytes[i] != b')' || d.is_zero() {
                    return Err(err(i, "malformed fraction"));
                }
                i += 1;
                skip_ws(&mut i);
                if i >= bytes.len() || bytes[i] != b'*' {
                    return Err(err(i, "expected `·`"));
                }
                i += 1;
                BigRational::new(n, d)
            } else if let Some(n) = read_int(&mut i) {
                skip_ws(&mut i);
                if i >= bytes.len() || bytes[i] != b'*' {
                    return Err(err(i, "expected `·`"));
                }
                i += 1;
                BigRational::from_integer(n)
            } else {
                BigRational::one()
            };
            skip_ws(&mut i);
            if !t[i..].starts_with("log") {
                return Err(err(i, "expected `log`"));
            }
            i += 3;
            skip_ws(&mut i);
            let p = read_int(&mut i).ok_or_else(|| err(i, "expected a prime"))?;
            let p = Prime::new(p.magnitude().clone())?;
            out.add_term(p.0, coeff * BigRational::from_integer(sign));
        }
        Ok(out)
    }
}

impl Serialize for FormalLog {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FormalLog {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rational-linear combination of formal logarithms.
pub fn flog_combine(terms: &[(BigRational, FormalLog)]) -> FormalLog {
    FormalLog::combine(terms.iter().map(|(c, v)| (c, v)))
}

// ---------------------------------------------------------------------------
// Numeric helpers
// ---------------------------------------------------------------------------

pub(crate) fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top = (n >> shift).to_f64().unwrap();
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

pub(crate) fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().magnitude();
        let d = c.denom().magnitude();
        let v = (ln_big(n) - ln_big(d)).exp();
        if c.is_negative() {
            -v
        } else {
            v
        }
    })
}

pub(crate) fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// Compares `e^n` with a positive rational `r`. Never equal for `n > 0`.
pub(crate) fn cmp_exp(n: u64, r: &BigRational) -> Ordering {
    if n == 0 {
        return BigRational::one().cmp(r);
    }
    let mut terms = 16u64;
    loop {
        // e ∈ [Σ_{k≤N} 1/k!, Σ_{k≤N} 1/k! + 2/(N+1)!]
        let mut sum = BigRational::zero();
        let mut fact = BigInt::one();
        for k in 0..=terms {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            sum += BigRational::new(BigInt::one(), fact.clone());
        }
        let tail = BigRational::new(BigInt::from(2), fact * BigInt::from(terms + 1));
        let lo = num_traits::pow(sum.clone(), n as usize);
        let hi = num_traits::pow(sum + tail, n as usize);
        if &hi < r {
            return Ordering::Less;
        }
        if &lo > r {
            return Ordering::Greater;
        }
        terms *= 2;
    }
}

/// `⌊ln(r) / q⌋` for rational `r ≥ 1`, decided exactly.
pub(crate) fn floor_ln_div(r: &BigRational, q: u64) -> u64 {
    debug_assert!(*r >= BigRational::one());
    let guess = (rat_to_f64(r).ln() / q as f64).floor().max(0.0) as u64;
    let mut k = guess;
    while k > 0 && cmp_exp(k * q, r) == Ordering::Greater {
        k -= 1;
    }
    while cmp_exp((k + 1) * q, r) != Ordering::Greater {
        k += 1;
    }
    k
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> Option<u64> {
    (a / a.gcd(&b)).checked_mul(b)
}
