//! Empirical scans of the gcd bound
//!
//! ```text
//! log gcd(f_j(α)) ≤ ε·log max_i |α_i|^{1/q_i} + (1/(m(r-1+δ)))·log|α_0⋯α_n|'_S
//! ```
//!
//! over sampled integer tuples. Every quantity is an exact [`FormalLog`]; the
//! report is a deterministic function of the configuration and seed.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{prime_to_s, FormalLog, Prime};
use crate::wheight::archimedean_log_max;
use crate::wpoint::{format_tuple, wgcd_of};
use crate::wpoly::SubschemeSpec;
use crate::wspace::WeightVector;

/// Upper bound on draws per accepted sample before giving up.
const MAX_DRAWS_PER_SAMPLE: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub spec: SubschemeSpec,
    pub weights: WeightVector,
    pub primes: Vec<Prime>,
    pub epsilons: Vec<BigRational>,
    pub deltas: Vec<BigRational>,
    pub radii: Vec<u64>,
    pub samples: usize,
    pub seed: u64,
    /// Keep only tuples with `gcd(α) = 1` (the wgcd = 1 filter always applies).
    pub require_unit_content: bool,
    pub keep_violations_only: bool,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.check_weights(&self.weights)?;
        if self.spec.codim() < 2 {
            return Err(Error::Config(format!(
                "asserted codimension {} is below 2",
                self.spec.codim()
            )));
        }
        for (name, grid) in [("epsilon", &self.epsilons), ("delta", &self.deltas)] {
            if grid.is_empty() {
                return Err(Error::Config(format!("{name} grid is empty")));
            }
            if grid.iter().any(|v| !v.is_positive()) {
                return Err(Error::Config(format!("{name} grid must be positive")));
            }
        }
        self.weights.check_len(self.radii.len())?;
        if self.radii.iter().all(|&r| r == 0) {
            return Err(Error::Config("sampling box contains only the origin".into()));
        }
        Ok(())
    }
}

fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_display_vec<T: std::fmt::Display, S: Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_opt_display<T: std::fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_tuple<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_tuple(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    #[serde(serialize_with = "ser_tuple")]
    pub alpha: Vec<BigInt>,
    /// `log gcd(f_j(α))`.
    pub lhs: FormalLog,
    /// `log max_i |α_i|^{1/q_i}`.
    pub height_term: FormalLog,
    /// `(1/m)·log|α_0⋯α_n|'_S`; absent when a coordinate vanishes.
    pub sunit_term: Option<FormalLog>,
    /// `RHS - LHS` per grid cell, epsilon-major.
    pub margins: Vec<FormalLog>,
}

impl ScanRecord {
    pub fn violates(&self, cell: usize) -> bool {
        self.margins[cell].signum() < 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCell {
    #[serde(serialize_with = "ser_display")]
    pub epsilon: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub delta: BigRational,
    pub records: u64,
    pub violations: u64,
    /// `max(LHS - RHS)` over records, the smallest constant making the
    /// inequality hold on the sample.
    pub empirical_c: Option<FormalLog>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    #[serde(serialize_with = "ser_tuple")]
    pub alpha: Vec<BigInt>,
    pub flags: Vec<String>,
    /// Margins recomputed from `alpha` are all negative.
    pub reverified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub weights: WeightVector,
    pub polynomials: Vec<String>,
    /// Caller-asserted codimension of the subscheme; not verified.
    pub asserted_codim: u32,
    #[serde(serialize_with = "ser_display_vec")]
    pub primes: Vec<Prime>,
    #[serde(serialize_with = "ser_display_vec")]
    pub epsilons: Vec<BigRational>,
    #[serde(serialize_with = "ser_display_vec")]
    pub deltas: Vec<BigRational>,
    pub radii: Vec<u64>,
    pub samples: usize,
    pub seed: u64,
    pub require_unit_content: bool,
    pub keep_violations_only: bool,
    pub draws: u64,
    pub rejected: u64,
    pub records: Vec<ScanRecord>,
    /// Records with a zero coordinate; kept out of the grid statistics.
    pub zero_coordinate_records: Vec<ScanRecord>,
    /// Sampled tuples lying on the subscheme.
    #[serde(serialize_with = "ser_tuples")]
    pub on_subscheme: Vec<Vec<BigInt>>,
    pub grid: Vec<GridCell>,
    pub candidates: Vec<Candidate>,
}

fn ser_tuples<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|t| format_tuple(t)))
}

fn frac(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sample_tuples(config: &ScanConfig) -> Result<(Vec<Vec<BigInt>>, u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let q = config.weights.weights();
    let mut out = Vec::with_capacity(config.samples);
    let mut draws = 0u64;
    let limit = (config.samples.max(1) * MAX_DRAWS_PER_SAMPLE) as u64;
    while out.len() < config.samples {
        if draws >= limit {
            return Err(Error::Config(format!(
                "only {} of {} samples accepted after {draws} draws",
                out.len(),
                config.samples
            )));
        }
        draws += 1;
        let a: Vec<BigInt> = config
            .radii
            .iter()
            .map(|&r| BigInt::from(rng.gen_range(-(r as i64)..=r as i64)))
            .collect();
        if a.iter().all(Zero::is_zero) || !wgcd_of(&a, q).is_one() {
            continue;
        }
        if config.require_unit_content && !a.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).is_one() {
            continue;
        }
        out.push(a);
    }
    let rejected = draws - out.len() as u64;
    Ok((out, draws, rejected))
}

/// Builds the record of one tuple, or `None` if it lies on the subscheme.
pub fn evaluate(config: &ScanConfig, alpha: &[BigInt]) -> Result<Option<ScanRecord>> {
    let vals = config.spec.values(alpha)?;
    let g = vals.iter().fold(BigUint::zero(), |g, v| g.gcd(v.magnitude()));
    if g.is_zero() {
        return Ok(None);
    }
    let w = &config.weights;
    let lhs = FormalLog::log_uint(&g);
    let height_term = archimedean_log_max(alpha, w);
    let sunit_term = if alpha.iter().any(Zero::is_zero) {
        None
    } else {
        let mut prod = BigUint::one();
        for a in alpha {
            prod *= prime_to_s(a, &config.primes)?;
        }
        Some(FormalLog::log_uint(&prod).scaled(&frac(1, w.lcm())))
    };
    let r1 = BigRational::from_integer(BigInt::from(config.spec.codim() as i64 - 1));
    let mut margins = Vec::with_capacity(config.epsilons.len() * config.deltas.len());
    for eps in &config.epsilons {
        let base = &height_term.scaled(eps) - &lhs;
        for delta in &config.deltas {
            let m = match &sunit_term {
                Some(s) => &base + &s.scaled(&(BigRational::one() / (&r1 + delta))),
                None => base.clone(),
            };
            margins.push(m);
        }
    }
    Ok(Some(ScanRecord {
        alpha: alpha.to_vec(),
        lhs,
        height_term,
        sunit_term,
        margins,
    }))
}

fn structural_flags(alpha: &[BigInt], lhs: &FormalLog) -> Vec<String> {
    let mut flags = Vec::new();
    for (i, a) in alpha.iter().enumerate() {
        if a.is_zero() {
            flags.push(format!("x{i}=0"));
        }
    }
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            if !alpha[i].is_zero() && alpha[i].magnitude() == alpha[j].magnitude() {
                let rel = if alpha[i] == alpha[j] { "=" } else { "=-" };
                flags.push(format!("x{i}{rel}x{j}"));
            }
        }
    }
    let content = alpha.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !content.is_one() {
        flags.push(format!("content={content}"));
    }
    if !lhs.is_zero() {
        flags.push(format!("gcd_values=exp({lhs})"));
    }
    flags
}

/// Tuples violating the bound at every grid cell, with structural hints.
pub fn exceptional_candidates(config: &ScanConfig, report: &ScanReport) -> Result<Vec<Candidate>> {
    let cells = config.epsilons.len() * config.deltas.len();
    report
        .records
        .iter()
        .filter(|r| (0..cells).all(|c| r.violates(c)))
        .map(|r| {
            let again = evaluate(config, &r.alpha)?;
            let reverified = again.is_some_and(|a| a == *r && a.margins.iter().all(|m| m.signum() < 0));
            Ok(Candidate {
                alpha: r.alpha.clone(),
                flags: structural_flags(&r.alpha, &r.lhs),
                reverified,
            })
        })
        .collect()
}

pub fn scan(config: &ScanConfig) -> Result<ScanReport> {
    config.validate()?;
    let (tuples, draws, rejected) = sample_tuples(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let evaluated: Vec<Result<Option<ScanRecord>>> =
        pool.install(|| tuples.par_iter().map(|a| evaluate(config, a)).collect());

    let mut records = Vec::new();
    let mut zero_coordinate_records = Vec::new();
    let mut on_subscheme = Vec::new();
    for (a, r) in tuples.iter().zip(evaluated) {
        match r? {
            None => on_subscheme.push(a.clone()),
            Some(r) if r.sunit_term.is_none() => zero_coordinate_records.push(r),
            Some(r) => records.push(r),
        }
    }

    let mut grid = Vec::new();
    for (ei, eps) in config.epsilons.iter().enumerate() {
        for (di, delta) in config.deltas.iter().enumerate() {
            let c = ei * config.deltas.len() + di;
            grid.push(GridCell {
                epsilon: eps.clone(),
                delta: delta.clone(),
                records: records.len() as u64,
                violations: records.iter().filter(|r| r.violates(c)).count() as u64,
                empirical_c: records.iter().map(|r| -r.margins[c].clone()).max(),
            });
        }
    }

    let mut report = ScanReport {
        weights: config.weights.clone(),
        polynomials: config.spec.polys().iter().map(|f| f.to_string()).collect(),
        asserted_codim: config.spec.codim(),
        primes: config.primes.clone(),
        epsilons: config.epsilons.clone(),
        deltas: config.deltas.clone(),
        radii: config.radii.clone(),
        samples: config.samples,
        seed: config.seed,
        require_unit_content: config.require_unit_content,
        keep_violations_only: config.keep_violations_only,
        draws,
        rejected,
        records,
        zero_coordinate_records,
        on_subscheme,
        grid,
        candidates: Vec::new(),
    };
    report.candidates = exceptional_candidates(config, &report)?;
    if config.keep_violations_only {
        let cells = report.grid.len();
        report.records.retain(|r| (0..cells).any(|c| r.violates(c)));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaEstimate {
    #[serde(serialize_with = "ser_display")]
    pub epsilon: BigRational,
    /// Largest grid `δ` meeting the threshold, if any.
    #[serde(serialize_with = "ser_opt_display")]
    pub delta: Option<BigRational>,
    /// Tuples still violating at that `δ` (at the smallest `δ` if none qualifies).
    #[serde(serialize_with = "ser_tuples")]
    pub violating: Vec<Vec<BigInt>>,
}

/// For each `ε`, the largest grid `δ` whose violation fraction is at most
/// `threshold`. Margins only shrink as `δ` grows, so this is the strongest
/// form of the bound the sample supports.
pub fn estimate_delta(report: &ScanReport, threshold: &BigRational) -> Result<Vec<DeltaEstimate>> {
    if report.epsilons.is_empty() || report.deltas.is_empty() {
        return Err(Error::Config("empty grid".into()));
    }
    let nd = report.deltas.len();
    let mut order: Vec<usize> = (0..nd).collect();
    order.sort_by(|&a, &b| report.deltas[a].cmp(&report.deltas[b]));
    let mut out = Vec::new();
    for (ei, eps) in report.epsilons.iter().enumerate() {
        let fraction_ok = |di: usize| {
            let cell = &report.grid[ei * nd + di];
            let total = BigInt::from(cell.records.max(1));
            BigRational::new(BigInt::from(cell.violations), total) <= *threshold
        };
        let chosen = order.iter().copied().rev().find(|&di| fraction_ok(di));
        let at = chosen.unwrap_or(order[0]);
        let violating = report
            .records
            .iter()
            .filter(|r| r.violates(ei * nd + at))
            .map(|r| r.alpha.clone())
            .collect();
        out.push(DeltaEstimate {
            epsilon: eps.clone(),
            delta: chosen.map(|di| report.deltas[di].clone()),
            violating,
        });
    }
    Ok(out)
}

/// Distinct tuples of a report, for cross-checks.
pub fn sampled_alphas(report: &ScanReport) -> BTreeSet<Vec<BigInt>> {
    report
        .records
        .iter()
        .chain(&report.zero_coordinate_records)
        .map(|r| r.alpha.clone())
        .chain(report.on_subscheme.iter().cloned())
        .collect()
}
