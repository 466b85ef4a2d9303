//! Weighted homogeneous polynomials with integer coefficients, and the
//! height functions of subschemes cut out by them.
//!
//! Text grammar:
//!
//! ```text
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := [integer] factor*        factors joined by whitespace or "*"
//! factor := ident ["^" uint]
//! ```
//!
//! A `.wpoly` file starts with a header `weights: x=2 y=4 z=6 w=10` and
//! holds one polynomial per blank-line separated stanza. `#` starts a comment.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{factor_magnitude, ord_int, FormalLog, Place};
use crate::wheight::archimedean_log_max;
use crate::wpoint::{common_primes, WPoint};
use crate::wspace::WeightVector;

/// Variable names with their weights, in coordinate order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VarTable {
    names: Vec<String>,
    weights: Vec<u64>,
}

impl VarTable {
    pub fn new(vars: Vec<(String, u64)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for (n, q) in vars {
            if q == 0 {
                return Err(Error::InvalidWeights(format!("variable {n} has weight 0")));
            }
            if names.contains(&n) {
                return Err(Error::Parse { pos: 0, msg: format!("variable {n} declared twice") });
            }
            names.push(n);
            weights.push(q);
        }
        if names.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "no variables declared".into() });
        }
        Ok(VarTable { names, weights })
    }

    /// Variables `x0, x1, …` carrying the given weights.
    pub fn indexed(w: &WeightVector) -> Self {
        VarTable {
            names: (0..w.len()).map(|i| format!("x{i}")).collect(),
            weights: w.weights().to_vec(),
        }
    }

    /// Parses a header such as `weights: x=2 y=4 z=6 w=10` (the `weights:`
    /// prefix is optional).
    pub fn parse_header(line: &str) -> Result<Self> {
        let body = line.trim();
        let body = body.strip_prefix("weights:").unwrap_or(body);
        let vars = body
            .split_whitespace()
            .map(|tok| {
                let (n, q) = tok.split_once('=').ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("expected name=weight, got `{tok}`"),
                })?;
                let q = q.parse::<u64>().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("bad weight in `{tok}`"),
                })?;
                if !is_ident(n) {
                    return Err(Error::Parse { pos: 0, msg: format!("bad variable name `{n}`") });
                }
                Ok((n.to_string(), q))
            })
            .collect::<Result<Vec<_>>>()?;
        VarTable::new(vars)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weight_vector(&self) -> Result<WeightVector> {
        WeightVector::classify(&self.weights)
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weights:")?;
        for (n, q) in self.names.iter().zip(&self.weights) {
            write!(f, " {n}={q}")?;
        }
        Ok(())
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub exps: Vec<u32>,
}

/// A weighted homogeneous polynomial over `Z`. The polynomial with no terms
/// is the zero polynomial and has degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WPoly {
    vars: VarTable,
    terms: Vec<Term>,
    degree: u64,
}

/// Graded reverse lexicographic order, largest monomial first.
fn grevlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller exponent in the last differing variable is larger
                return x.cmp(y);
            }
        }
        Ordering::Equal
    })
}

impl WPoly {
    /// Builds and validates a polynomial; like terms are merged.
    pub fn from_terms(vars: VarTable, terms: Vec<Term>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for t in terms {
            if t.exps.len() != vars.len() {
                return Err(Error::LengthMismatch { expected: vars.len(), got: t.exps.len() });
            }
            *merged.entry(t.exps).or_insert_with(BigInt::zero) += t.coeff;
        }
        let mut terms: Vec<Term> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Term { coeff, exps })
            .collect();
        terms.sort_by(|a, b| grevlex_desc(&a.exps, &b.exps));
        let degs: Vec<u64> = terms.iter().map(|t| weighted_degree(&t.exps, &vars.weights)).collect();
        let degree = degs.first().copied().unwrap_or(0);
        if degs.iter().any(|&d| d != degree) {
            let mut by_degree: BTreeMap<u64, Vec<String>> = BTreeMap::new();
            for (t, d) in terms.iter().zip(&degs) {
                by_degree.entry(*d).or_default().push(monomial_string(&t.exps, &vars.names));
            }
            let listing: Vec<String> = by_degree
                .into_iter()
                .map(|(d, ms)| format!("degree {d}: {}", ms.join(", ")))
                .collect();
            return Err(Error::Inhomogeneous(listing.join("; ")));
        }
        Ok(WPoly { vars, terms, degree })
    }

    pub fn parse(text: &str, vars: &VarTable) -> Result<Self> {
        let terms = Parser::new(text, vars).parse()?;
        WPoly::from_terms(vars.clone(), terms)
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, a: &[BigInt]) -> Result<BigInt> {
        if a.len() != self.vars.len() {
            return Err(Error::LengthMismatch { expected: self.vars.len(), got: a.len() });
        }
        let mut powers: Vec<Vec<BigInt>> = a.iter().map(|x| vec![BigInt::one(), x.clone()]).collect();
        let mut acc = BigInt::zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (i, &e) in t.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &a[i];
                    table.push(next);
                }
                v *= &table[e as usize];
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn eval_i64(&self, a: &[i64]) -> Result<BigInt> {
        let a: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        self.eval(&a)
    }
}

fn weighted_degree(exps: &[u32], weights: &[u64]) -> u64 {
    exps.iter().zip(weights).map(|(&e, &q)| e as u64 * q).sum()
}

fn monomial_string(exps: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

impl fmt::Display for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let c = t.coeff.abs();
            let mono = monomial_string(&t.exps, &self.vars.names);
            let constant = t.exps.iter().all(|&e| e == 0);
            if constant {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{c} {mono}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for WPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    vars: &'a VarTable,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vars: &'a VarTable) -> Self {
        Parser { src: text.as_bytes(), text, pos: 0, vars }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                self.pos += 1;
            }
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn parse(mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(c) => return Err(self.err(format!("expected `+` or `-`, found `{}`", c as char))),
            };
            first = false;
            terms.push(self.term(sign)?);
        }
        Ok(terms)
    }

    fn term(&mut self, sign: i32) -> Result<Term> {
        self.skip_ws();
        let start = self.pos;
        let mut coeff = BigInt::from(sign);
        let mut exps = vec![0u32; self.vars.len()];
        let mut seen = false;
        if let Some(n) = self.uint() {
            coeff *= n.parse::<BigInt>().unwrap();
            seen = true;
        }
        loop {
            if self.peek() == Some(b'*') {
                if !seen {
                    return Err(self.err("`*` without a left operand"));
                }
                self.pos += 1;
                if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
                    return Err(self.err("expected a variable after `*`"));
                }
            }
            let at = self.pos;
            let Some(name) = self.ident() else { break };
            let idx = self.vars.index_of(name).ok_or_else(|| {
                Error::UnknownVariable(name.to_string())
            })?;
            let mut e = 1u32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                e = self
                    .uint()
                    .ok_or_else(|| self.err("expected exponent after `^`"))?
                    .parse()
                    .map_err(|_| Error::Parse { pos: at, msg: "exponent too large".into() })?;
            }
            exps[idx] += e;
            seen = true;
        }
        if !seen {
            self.pos = start;
            return Err(self.err("expected a term"));
        }
        Ok(Term { coeff, exps })
    }
}

/// Contents of a `.wpoly` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPolyFile {
    pub vars: VarTable,
    pub polys: Vec<WPoly>,
}

impl WPolyFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim_end());
        let header = lines
            .by_ref()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse { pos: 0, msg: "missing `weights:` header".into() })?;
        if !header.trim_start().starts_with("weights:") {
            return Err(Error::Parse { pos: 0, msg: "first line must be a `weights:` header".into() });
        }
        let vars = VarTable::parse_header(header)?;
        let mut polys = Vec::new();
        let mut stanza = String::new();
        for line in lines.chain(std::iter::once("")) {
            if line.trim().is_empty() {
                if !stanza.trim().is_empty() {
                    polys.push(WPoly::parse(&stanza, &vars)?);
                }
                stanza.clear();
            } else {
                stanza.push_str(line);
                stanza.push('\n');
            }
        }
        Ok(WPolyFile { vars, polys })
    }
}

impl fmt::Display for WPolyFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.vars)?;
        for p in &self.polys {
            writeln!(f)?;
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A closed subscheme `Y = V(f_1, …, f_t)` with a caller-asserted codimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubschemeSpec {
    polys: Vec<WPoly>,
    asserted_codim: u32,
}

impl SubschemeSpec {
    pub fn new(polys: Vec<WPoly>, asserted_codim: u32) -> Result<Self> {
        let first = polys
            .first()
            .ok_or_else(|| Error::Config("a subscheme needs at least one polynomial".into()))?;
        if polys.iter().any(|p| p.vars != first.vars) {
            return Err(Error::Config("polynomials use different variable tables".into()));
        }
        if polys.iter().any(WPoly::is_zero) {
            return Err(Error::Config("zero polynomial in subscheme".into()));
        }
        if asserted_codim == 0 {
            return Err(Error::Config("codimension must be positive".into()));
        }
        Ok(SubschemeSpec { polys, asserted_codim })
    }

    pub fn polys(&self) -> &[WPoly] {
        &self.polys
    }

    pub fn codim(&self) -> u32 {
        self.asserted_codim
    }

    pub fn vars(&self) -> &VarTable {
        self.polys[0].vars()
    }

    pub fn check_weights(&self, w: &WeightVector) -> Result<()> {
        if self.vars().weights() != w.weights() {
            return Err(Error::WeightMismatch(format!(
                "subscheme weights {:?} vs point weights {w}",
                self.vars().weights()
            )));
        }
        Ok(())
    }

    pub fn values(&self, a: &[BigInt]) -> Result<Vec<BigInt>> {
        self.polys.iter().map(|f| f.eval(a)).collect()
    }
}

fn deg_times(d: u64, c: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(d)) * c
}

/// `λ_Y(x, v) = min_j { -log(|f_j(x)|_v / max_i |x_i|_v^{d_j/q_i}) }`;
/// `None` when every `f_j(x)` vanishes (`x ∈ Y`).
pub fn local_height_y(spec: &SubschemeSpec, x: &WPoint, v: &Place) -> Result<Option<FormalLog>> {
    spec.check_weights(x.weights())?;
    let vals = spec.values(x.coords())?;
    local_height_from_values(spec, x, &vals, v)
}

fn local_height_from_values(
    spec: &SubschemeSpec,
    x: &WPoint,
    vals: &[BigInt],
    v: &Place,
) -> Result<Option<FormalLog>> {
    let q = x.weights().weights();
    let candidates: Vec<FormalLog> = match v {
        Place::Finite(p) => {
            let p = p.value();
            let c = x
                .coords()
                .iter()
                .zip(q)
                .filter(|(xi, _)| !xi.is_zero())
                .map(|(xi, &qi)| BigRational::new(BigInt::from(ord_int(xi, p)), BigInt::from(qi)))
                .min()
                .unwrap();
            vals.iter()
                .zip(spec.polys())
                .filter(|(f, _)| !f.is_zero())
                .map(|(f, poly)| {
                    let e = BigRational::from_integer(BigInt::from(ord_int(f, p)));
                    FormalLog::prime_term(p.clone(), e - deg_times(poly.degree(), &c))
                })
                .collect()
        }
        Place::Infinite => {
            let a = archimedean_log_max(x.coords(), x.weights());
            vals.iter()
                .zip(spec.polys())
                .filter(|(f, _)| !f.is_zero())
                .map(|(f, poly)| {
                    &a.scaled(&BigRational::from_integer(BigInt::from(poly.degree())))
                        - &FormalLog::log_abs(f)
                })
                .collect()
        }
    };
    Ok(candidates.into_iter().min())
}

/// Primes at which `λ_Y(x, p)` can be nonzero.
fn height_support(x: &WPoint, vals: &[BigInt]) -> Vec<BigUint> {
    let g = vals.iter().fold(BigUint::zero(), |g, v| g.gcd(v.magnitude()));
    let mut primes: Vec<BigUint> = if g.is_zero() || g.is_one() {
        vec![]
    } else {
        factor_magnitude(&g).into_keys().collect()
    };
    primes.extend(common_primes(x.coords()));
    primes.sort();
    primes.dedup();
    primes
}

fn finite_sum(spec: &SubschemeSpec, x: &WPoint, vals: &[BigInt]) -> Result<FormalLog> {
    let mut out = FormalLog::zero();
    for p in height_support(x, vals) {
        let place = Place::Finite(crate::exactnum::Prime::new_unchecked(p));
        if let Some(h) = local_height_from_values(spec, x, vals, &place)? {
            out += &h;
        }
    }
    Ok(out)
}

/// `Σ_{finite p} λ_Y(x, p)`.
pub fn finite_height_y(spec: &SubschemeSpec, x: &WPoint) -> Result<FormalLog> {
    spec.check_weights(x.weights())?;
    let vals = spec.values(x.coords())?;
    if vals.iter().all(Zero::is_zero) {
        return Err(Error::InfiniteHeight(format!("{x} lies on the subscheme")));
    }
    finite_sum(spec, x, &vals)
}

/// Global height associated to `Y`: the sum of `λ_Y` over every place.
pub fn global_height_y(spec: &SubschemeSpec, x: &WPoint) -> Result<FormalLog> {
    spec.check_weights(x.weights())?;
    let vals = spec.values(x.coords())?;
    if vals.iter().all(Zero::is_zero) {
        return Err(Error::InfiniteHeight(format!("{x} lies on the subscheme")));
    }
    let mut out = finite_sum(spec, x, &vals)?;
    out += &local_height_from_values(spec, x, &vals, &Place::Infinite)?.unwrap();
    Ok(out)
}

/// `log gcd(f_1(α), …, f_t(α))`.
pub fn log_gcd_y(spec: &SubschemeSpec, a: &[BigInt]) -> Result<FormalLog> {
    let vals = spec.values(a)?;
    let g = vals.iter().fold(BigUint::zero(), |g, v| g.gcd(v.magnitude()));
    if g.is_zero() {
        return Err(Error::ZeroArgument { op: "log_gcd_Y" });
    }
    Ok(FormalLog::log_uint(&g))
}

/// `log gcd(f_j(α))` next to the finite-place height of `Y` at `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdIdentity {
    pub log_gcd: FormalLog,
    pub finite_local_sum: FormalLog,
    /// `log_gcd - finite_local_sum`; zero whenever `gcd(α) = 1`.
    pub residual: FormalLog,
    pub unit_content: bool,
}

pub fn gcd_identity(spec: &SubschemeSpec, a: &[BigInt], require_unit_content: bool) -> Result<GcdIdentity> {
    let w = spec.vars().weight_vector()?;
    let content = a.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    let unit_content = content.is_one();
    if require_unit_content && !unit_content {
        return Err(Error::Config(format!("gcd of coordinates is {content}, not 1")));
    }
    let log_gcd = log_gcd_y(spec, a)?;
    let x = WPoint::new(w, a.to_vec())?;
    let finite_local_sum = finite_height_y(spec, &x)?;
    let residual = &log_gcd - &finite_local_sum;
    Ok(GcdIdentity { log_gcd, finite_local_sum, residual, unit_content })
}
