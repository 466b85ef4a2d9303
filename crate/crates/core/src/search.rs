//! Complete enumeration of the points of `P_w(Q)` with `wh(x) ≤ B`, and
//! point search on weighted hypersurfaces.
//!
//! Points are enumerated support by support. On a support `J` with
//! `d_J = gcd(q_J)` and `s = q_J/d_J` the bound becomes `wh_s ≤ β = B^{d_J}`.
//! A canonical point either has coprime coordinates, in which case it lies in
//! the base box `|x_i| ≤ ⌊β^{s_i}⌋` (phase 1), or some primes divide all of its
//! coordinates. For such a prime with exponent pattern `e` and
//! `c = min e_i/s_i < 1` the height drops by `p^c`, so writing
//! `x_i = p^{e_i}·y_i` leaves `|y_i| ≤ β^{s_i}·p^{-(e_i - c·s_i)}`. Every
//! pattern has a positive gap somewhere, which bounds `p`; deflations by
//! several primes are composed over increasing primes (phase 2).

use std::cmp::Ordering;
use std::collections::HashSet;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{factor_magnitude, is_prime_u64, ord_int, rat_to_f64};
use crate::wheight::wh_m_power;
use crate::wpoint::WPoint;
use crate::wpoly::WPoly;
use crate::wspace::WeightVector;

const SLACK: f64 = 1e-9;
const RADIUS_CAP: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub weights: WeightVector,
    pub bound: BigRational,
    pub hypersurface: Option<WPoly>,
    /// Coordinate indices required to be nonzero.
    pub nonvanishing: Vec<usize>,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
    pub phase2: bool,
}

impl SearchConfig {
    pub fn new(weights: WeightVector, bound: BigRational) -> Self {
        SearchConfig {
            weights,
            bound,
            hypersurface: None,
            nonvanishing: Vec::new(),
            jobs: 0,
            phase2: true,
        }
    }

    pub fn with_hypersurface(mut self, f: WPoly) -> Self {
        self.hypersurface = Some(f);
        self
    }

    pub fn with_nonvanishing(mut self, idx: Vec<usize>) -> Self {
        self.nonvanishing = idx;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.bound.is_positive() {
            return Err(Error::Config(format!("bound must be positive, got {}", self.bound)));
        }
        if let Some(f) = &self.hypersurface {
            if f.is_zero() {
                return Err(Error::Config("hypersurface polynomial is empty".into()));
            }
            if f.vars().weights() != self.weights.weights() {
                return Err(Error::WeightMismatch(format!(
                    "polynomial weights {:?} vs search weights {}",
                    f.vars().weights(),
                    self.weights
                )));
            }
        }
        if let Some(&i) = self.nonvanishing.iter().find(|&&i| i >= self.weights.len()) {
            return Err(Error::Config(format!("nonvanishing index {i} out of range")));
        }
        Ok(())
    }
}

fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchPoint {
    pub point: WPoint,
    #[serde(serialize_with = "ser_display")]
    pub wh_m_power: BigRational,
    /// Indices of the coordinates equal to zero.
    pub zero_coords: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub weights: WeightVector,
    #[serde(serialize_with = "ser_display")]
    pub bound: BigRational,
    pub hypersurface: Option<String>,
    pub nonvanishing: Vec<usize>,
    pub jobs: usize,
    pub phase2: bool,
    /// Tuples examined in the base boxes.
    pub phase1_candidates: u64,
    /// Tuples examined in deflation cells.
    pub phase2_candidates: u64,
    pub phase2_cells: u64,
    pub wall_time_secs: f64,
    pub points: Vec<SearchPoint>,
}

/// A box of residual coordinates `y` on one support, with `x_i = mult_i·y_i`.
#[derive(Debug, Clone)]
struct Cell {
    plan: usize,
    /// Admissible values of `y` at each support position.
    ranges: Vec<Vec<i64>>,
    mult: Vec<BigInt>,
    deflated: bool,
}

fn next_prime(p: u64) -> u64 {
    let mut n = p + 1;
    while !is_prime_u64(n) {
        n += 1;
    }
    n
}

fn radius_from_log(log_r: f64) -> u64 {
    let r = (log_r + SLACK).exp().floor();
    if r >= RADIUS_CAP as f64 {
        RADIUS_CAP
    } else {
        r.max(0.0) as u64
    }
}

fn make_ranges(radii: &[u64], s: &[u64], primes: &[u64]) -> Vec<Vec<i64>> {
    let sign_pos = s.iter().rposition(|&si| si % 2 == 1);
    radii
        .iter()
        .enumerate()
        .map(|(pos, &r)| {
            let r = r.min(i64::MAX as u64) as i64;
            let lo = if Some(pos) == sign_pos { 1 } else { -r };
            (lo..=r)
                .filter(|&y| y != 0 && primes.iter().all(|&p| y.unsigned_abs() % p != 0))
                .collect()
        })
        .collect()
}

/// Exponent patterns at `p` whose deflation still fits the budgets.
fn patterns(s: &[u64], log_r: &[f64], p: u64) -> Vec<(Vec<u32>, Vec<f64>)> {
    let lp = (p as f64).ln();
    let caps: Vec<u32> = s
        .iter()
        .zip(log_r)
        .map(|(&si, &lr)| si as u32 + ((lr + SLACK) / lp).max(0.0).floor() as u32)
        .collect();
    let mut out = Vec::new();
    let mut e = vec![1u32; s.len()];
    loop {
        if e.iter().zip(s).any(|(&ei, &si)| (ei as u64) < si) {
            // c = e_j/s_j at the argmin
            let j = (0..s.len())
                .min_by(|&a, &b| (e[a] as u64 * s[b]).cmp(&(e[b] as u64 * s[a])))
                .unwrap();
            let gaps: Vec<f64> = (0..s.len())
                .map(|i| (e[i] as u64 * s[j] - e[j] as u64 * s[i]) as f64 / s[j] as f64)
                .collect();
            if gaps.iter().zip(log_r).all(|(g, lr)| g * lp <= lr + SLACK) {
                out.push((e.clone(), gaps));
            }
        }
        let mut i = 0;
        loop {
            if i == e.len() {
                return out;
            }
            if e[i] < caps[i] {
                e[i] += 1;
                break;
            }
            e[i] = 1;
            i += 1;
        }
    }
}

/// Terms of the hypersurface on a support, for the p-adic leading-term test.
///
/// With `x_i = p^{e_i}·y_i` and every `y_i` prime to `p`, a term has valuation
/// `ord_p(c) + Σ e_i·a_i`. If one term alone attains the minimum, `f(x)` has
/// exactly that valuation and cannot vanish.
#[derive(Debug, Clone)]
struct Newton {
    terms: Vec<(BigInt, Vec<u32>)>,
    /// Largest prime dividing a coefficient.
    coeff_prime_max: u64,
}

impl Newton {
    fn new(terms: Vec<(BigInt, Vec<u32>)>) -> Self {
        let coeff_prime_max = terms
            .iter()
            .flat_map(|(c, _)| factor_magnitude(c.magnitude()).into_keys().collect::<Vec<_>>())
            .map(|p| p.to_u64().unwrap_or(u64::MAX))
            .max()
            .unwrap_or(0);
        Newton { terms, coeff_prime_max }
    }

    fn admits(&self, e: &[u32], p: u64) -> bool {
        let pb = BigUint::from(p);
        let vals: Vec<u64> = self
            .terms
            .iter()
            .map(|(c, a)| {
                let base = if p > self.coeff_prime_max { 0 } else { ord_int(c, &pb) };
                base + e.iter().zip(a).map(|(&ei, &ai)| ei as u64 * ai as u64).sum::<u64>()
            })
            .collect();
        let min = *vals.iter().min().unwrap();
        vals.iter().filter(|&&v| v == min).count() >= 2
    }
}

/// Everything fixed on one support.
struct Plan {
    support: Vec<usize>,
    s: Vec<u64>,
    base_radii: Vec<u64>,
    log_r: Vec<f64>,
    newton: Option<Newton>,
    restricted: Option<Restricted>,
}

impl Plan {
    /// `None` when the hypersurface has no point with exactly this support.
    fn new(w: &WeightVector, support: Vec<usize>, bound: &BigRational, f: Option<&WPoly>) -> Option<Self> {
        let q = w.weights();
        let d = support.iter().fold(0u64, |g, &i| g.gcd(&q[i]));
        let s: Vec<u64> = support.iter().map(|&i| q[i] / d).collect();
        let beta = num_traits::pow(bound.clone(), d as usize);
        let base_radii = s
            .iter()
            .map(|&si| {
                num_traits::pow(beta.clone(), si as usize)
                    .floor()
                    .to_integer()
                    .to_u64()
                    .unwrap_or(RADIUS_CAP)
                    .min(RADIUS_CAP)
            })
            .collect();
        let log_beta = d as f64 * rat_to_f64(bound).ln();
        let log_r = s.iter().map(|&si| si as f64 * log_beta).collect();
        let mut newton = None;
        if let Some(f) = f {
            let terms: Vec<(BigInt, Vec<u32>)> = f
                .terms()
                .iter()
                .filter(|t| t.exps.iter().enumerate().all(|(i, &e)| e == 0 || support.contains(&i)))
                .map(|t| (t.coeff.clone(), support.iter().map(|&i| t.exps[i]).collect()))
                .collect();
            match terms.len() {
                0 => {}
                1 => return None,
                _ => newton = Some(Newton::new(terms)),
            }
        }
        let restricted = f.map(|f| Restricted::new(f, &support));
        Some(Plan { support, s, base_radii, log_r, newton, restricted })
    }

    fn admits(&self, e: &[u32], p: u64) -> bool {
        self.newton.as_ref().is_none_or(|nw| nw.admits(e, p))
    }

    /// Past this prime the leading-term test no longer depends on `p`.
    fn stops_after(&self, p: u64) -> bool {
        self.newton.as_ref().is_some_and(|nw| p > nw.coeff_prime_max)
    }
}

/// Streams the deflation cells of one support to `emit`.
fn deflate(
    id: usize,
    plan: &Plan,
    log_r: &[f64],
    mult: &[BigInt],
    primes: &mut Vec<u64>,
    last: u64,
    emit: &mut dyn FnMut(Cell),
) {
    let mut p = last;
    loop {
        p = next_prime(p);
        let pats = patterns(&plan.s, log_r, p);
        if pats.is_empty() {
            return;
        }
        let lp = (p as f64).ln();
        let mut kept = false;
        for (e, gaps) in pats {
            if !plan.admits(&e, p) {
                continue;
            }
            kept = true;
            let lr: Vec<f64> = log_r.iter().zip(&gaps).map(|(r, g)| r - g * lp).collect();
            let m: Vec<BigInt> = mult
                .iter()
                .zip(&e)
                .map(|(mi, &ei)| mi * num_traits::pow(BigInt::from(p), ei as usize))
                .collect();
            primes.push(p);
            let radii: Vec<u64> = lr.iter().map(|&l| radius_from_log(l)).collect();
            emit(Cell { plan: id, ranges: make_ranges(&radii, &plan.s, primes), mult: m.clone(), deflated: true });
            deflate(id, plan, &lr, &m, primes, p, emit);
            primes.pop();
        }
        if !kept && plan.stops_after(p) {
            return;
        }
    }
}

/// Terms sharing one exponent of the last support coordinate.
type Group = Vec<(i128, Vec<u32>)>;

/// The hypersurface restricted to one support, grouped by the exponent of
/// the last support coordinate.
struct Restricted {
    /// `groups[k]` holds `(coeff, exponents at the other positions)`;
    /// `None` when a coefficient exceeds `i128`.
    groups: Option<Vec<Group>>,
    poly: WPoly,
}

impl Restricted {
    fn new(f: &WPoly, support: &[usize]) -> Self {
        Restricted { groups: Self::group(f, support), poly: f.clone() }
    }

    fn group(f: &WPoly, support: &[usize]) -> Option<Vec<Group>> {
        let k = support.len();
        let mut groups: Vec<Group> = Vec::new();
        for t in f.terms() {
            if t.exps.iter().enumerate().any(|(i, &e)| e > 0 && !support.contains(&i)) {
                continue;
            }
            let c = t.coeff.to_i128()?;
            let last = t.exps[support[k - 1]] as usize;
            if groups.len() <= last {
                groups.resize(last + 1, Vec::new());
            }
            groups[last].push((c, support[..k - 1].iter().map(|&i| t.exps[i]).collect()));
        }
        Some(groups)
    }

    /// Coefficients of the polynomial in the last coordinate at fixed `outer`.
    fn coefficients(&self, outer: &[i128]) -> Option<Vec<i128>> {
        self.groups
            .as_ref()?
            .iter()
            .map(|g| {
                g.iter().try_fold(0i128, |acc, (c, exps)| {
                    let mut v = *c;
                    for (&x, &e) in outer.iter().zip(exps) {
                        v = v.checked_mul(x.checked_pow(e)?)?;
                    }
                    acc.checked_add(v)
                })
            })
            .collect()
    }
}

fn horner(a: &[i128], x: i128) -> Option<i128> {
    let mut v = 0i128;
    for &c in a.iter().rev() {
        v = v.checked_mul(x)?.checked_add(c)?;
    }
    Some(v)
}

struct Task<'a> {
    cell: &'a Cell,
    prefix: Vec<i64>,
}

#[derive(Default)]
struct TaskOut {
    examined: u64,
    hits: Vec<Vec<BigInt>>,
}

struct Ctx<'a> {
    n: usize,
    plans: &'a [Plan],
}

impl Ctx<'_> {
    fn full_coords(&self, cell: &Cell, y: &[i64]) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.n];
        for (pos, &i) in self.plans[cell.plan].support.iter().enumerate() {
            x[i] = &cell.mult[pos] * BigInt::from(y[pos]);
        }
        x
    }

    fn run(&self, task: &Task) -> TaskOut {
        let cell = task.cell;
        let mut out = TaskOut::default();
        let mut y = task.prefix.clone();
        let g = y.iter().fold(0u64, |g, v| g.gcd(&v.unsigned_abs()));
        let mult: Option<Vec<i128>> = cell.mult.iter().map(|m| m.to_i128()).collect();
        self.walk(cell, mult.as_deref(), &mut y, g, &mut out);
        out
    }

    fn walk(&self, cell: &Cell, mult: Option<&[i128]>, y: &mut Vec<i64>, g: u64, out: &mut TaskOut) {
        let k = cell.ranges.len();
        if y.len() + 1 < k {
            for &v in &cell.ranges[y.len()] {
                y.push(v);
                self.walk(cell, mult, y, g.gcd(&v.unsigned_abs()), out);
                y.pop();
            }
            return;
        }
        let last = &cell.ranges[k - 1];
        out.examined += last.len() as u64;
        let Some(f) = self.plans[cell.plan].restricted.as_ref() else {
            for &v in last {
                if g.gcd(&v.unsigned_abs()) == 1 {
                    y.push(v);
                    out.hits.push(self.full_coords(cell, y));
                    y.pop();
                }
            }
            return;
        };
        let outer: Option<Vec<i128>> = mult.and_then(|m| {
            y.iter().zip(m).map(|(&v, &mi)| mi.checked_mul(v as i128)).collect()
        });
        let coeffs = outer.as_deref().and_then(|o| f.coefficients(o));
        for &v in last {
            if g.gcd(&v.unsigned_abs()) != 1 {
                continue;
            }
            let fast = coeffs.as_deref().and_then(|a| {
                let x = mult?[k - 1].checked_mul(v as i128)?;
                horner(a, x)
            });
            y.push(v);
            let zero = match fast {
                Some(val) => val == 0,
                None => f.poly.eval(&self.full_coords(cell, y)).unwrap().is_zero(),
            };
            if zero {
                out.hits.push(self.full_coords(cell, y));
            }
            y.pop();
        }
    }
}

/// Tasks split each cell over its leading coordinates.
fn tasks(cells: &[Cell]) -> Vec<Task<'_>> {
    let mut out = Vec::new();
    for cell in cells {
        let split = cell.ranges.len().saturating_sub(2);
        let mut prefixes: Vec<Vec<i64>> = vec![vec![]];
        for pos in 0..split {
            prefixes = prefixes
                .into_iter()
                .flat_map(|p| {
                    cell.ranges[pos].iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out.extend(prefixes.into_iter().map(|prefix| Task { cell, prefix }));
    }
    out
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1 << n)).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Ordering of canonical outputs: height, then coordinate magnitudes, then
/// signs with `+` before `-`.
pub fn canonical_cmp(a: &(BigRational, WPoint), b: &(BigRational, WPoint)) -> Ordering {
    a.0.cmp(&b.0)
        .then_with(|| {
            let ma = a.1.coords().iter().map(|c| c.magnitude());
            let mb = b.1.coords().iter().map(|c| c.magnitude());
            ma.cmp(mb)
        })
        .then_with(|| {
            let sa = a.1.coords().iter().map(|c| c.is_negative());
            let sb = b.1.coords().iter().map(|c| c.is_negative());
            sa.cmp(sb)
        })
}

#[derive(Default)]
struct Tally {
    phase1: u64,
    phase2: u64,
    cells: u64,
    hits: Vec<Vec<BigInt>>,
}

impl Tally {
    fn absorb(&mut self, ctx: &Ctx, batch: &mut Vec<Cell>) {
        let all = tasks(batch);
        let results: Vec<(bool, TaskOut)> = all.par_iter().map(|t| (t.cell.deflated, ctx.run(t))).collect();
        for (deflated, out) in results {
            if deflated {
                self.phase2 += out.examined;
            } else {
                self.phase1 += out.examined;
            }
            self.hits.extend(out.hits);
        }
        self.cells += batch.iter().filter(|c| c.deflated).count() as u64;
        batch.clear();
    }
}

const BATCH: usize = 256;
const MAX_BASE_BOX: f64 = 1e13;

fn run(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let start = Instant::now();
    let w = &config.weights;
    let n = w.len();
    let plans: Vec<Plan> = nonempty_subsets(n)
        .filter(|j| config.nonvanishing.iter().all(|i| j.contains(i)))
        .filter_map(|j| Plan::new(w, j, &config.bound, config.hypersurface.as_ref()))
        .collect();
    for plan in &plans {
        let size: f64 = plan.base_radii.iter().map(|&r| 2.0 * r as f64 + 1.0).product();
        if size > MAX_BASE_BOX {
            return Err(Error::Config(format!(
                "base box on support {:?} has about {size:.1e} tuples",
                plan.support
            )));
        }
    }
    let ctx = Ctx { n, plans: &plans };
    let tally = with_pool(config.jobs, || {
        let mut tally = Tally::default();
        let mut batch = Vec::new();
        for (id, plan) in plans.iter().enumerate() {
            batch.push(Cell {
                plan: id,
                ranges: make_ranges(&plan.base_radii, &plan.s, &[]),
                mult: vec![BigInt::one(); plan.support.len()],
                deflated: false,
            });
            if config.phase2 && config.bound >= BigRational::one() {
                let ones = vec![BigInt::one(); plan.support.len()];
                let mut emit = |c: Cell| {
                    batch.push(c);
                    if batch.len() >= BATCH {
                        tally.absorb(&ctx, &mut batch);
                    }
                };
                deflate(id, plan, &plan.log_r, &ones, &mut Vec::new(), 1, &mut emit);
            }
            tally.absorb(&ctx, &mut batch);
        }
        tally
    })?;

    let bm = num_traits::pow(config.bound.clone(), w.lcm() as usize);
    let mut keyed: Vec<(BigRational, WPoint)> = Vec::with_capacity(tally.hits.len());
    for coords in tally.hits {
        if let Some(f) = &config.hypersurface {
            if !f.eval(&coords)?.is_zero() {
                continue;
            }
        }
        let x = WPoint::new(w.clone(), coords)?;
        let h = wh_m_power(&x);
        if h <= bm {
            keyed.push((h, x));
        }
    }
    keyed.sort_by(canonical_cmp);
    let points = keyed
        .into_iter()
        .map(|(h, x)| SearchPoint {
            zero_coords: (0..n).filter(|&i| x.coords()[i].is_zero()).collect(),
            point: x,
            wh_m_power: h,
        })
        .collect();
    Ok(SearchReport {
        weights: w.clone(),
        bound: config.bound.clone(),
        hypersurface: config.hypersurface.as_ref().map(|f| f.to_string()),
        nonvanishing: config.nonvanishing.clone(),
        jobs: config.jobs,
        phase2: config.phase2,
        phase1_candidates: tally.phase1,
        phase2_candidates: tally.phase2,
        phase2_cells: tally.cells,
        wall_time_secs: start.elapsed().as_secs_f64(),
        points,
    })
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Canonical representatives of all points with `wh ≤ B`, sorted.
pub fn enumerate_bounded(config: &SearchConfig) -> Result<Vec<WPoint>> {
    let mut c = config.clone();
    c.hypersurface = None;
    c.nonvanishing.clear();
    Ok(run(&c)?.points.into_iter().map(|p| p.point).collect())
}

/// Points of `V(f)` with `wh ≤ B` satisfying the nonvanishing constraints.
pub fn search_hypersurface(config: &SearchConfig) -> Result<SearchReport> {
    if config.hypersurface.is_none() {
        return Err(Error::Config("no hypersurface given".into()));
    }
    run(config)
}

/// Search with or without a hypersurface.
pub fn search(config: &SearchConfig) -> Result<SearchReport> {
    run(config)
}

/// Canonicalized, deduplicated in-box tuples with `wh ≤ B`, sorted.
pub fn brute_force_oracle(w: &WeightVector, bound: &BigRational, radii: &[u64]) -> Result<Vec<WPoint>> {
    w.check_len(radii.len())?;
    let bm = num_traits::pow(bound.clone(), w.lcm() as usize);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut y: Vec<i64> = radii.iter().map(|&r| -(r as i64)).collect();
    loop {
        if y.iter().any(|&v| v != 0) {
            let x = WPoint::from_i64(w, &y)?;
            if wh_m_power(&x) <= bm {
                let c = x.canonicalize();
                if seen.insert(c.coords().to_vec()) {
                    out.push((wh_m_power(&c), c));
                }
            }
        }
        let mut i = 0;
        loop {
            if i == y.len() {
                out.sort_by(canonical_cmp);
                return Ok(out.into_iter().map(|(_, x)| x).collect());
            }
            if y[i] < radii[i] as i64 {
                y[i] += 1;
                break;
            }
            y[i] = -(radii[i] as i64);
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::VarTable;

    fn w(q: &[u64]) -> WeightVector {
        WeightVector::classify(q).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn show(pts: &[WPoint]) -> Vec<String> {
        pts.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn projective_line_bound_two() {
        let pts = enumerate_bounded(&SearchConfig::new(w(&[1, 1]), rat(2, 1))).unwrap();
        assert_eq!(show(&pts), ["0:1", "1:0", "1:1", "-1:1", "1:2", "-1:2", "2:1", "-2:1"]);
    }

    #[test]
    fn weights_two_three_bound_one() {
        let pts = enumerate_bounded(&SearchConfig::new(w(&[2, 3]), rat(1, 1))).unwrap();
        assert_eq!(show(&pts), ["0:1", "1:0", "1:1", "-1:1"]);
    }

    #[test]
    fn bound_below_one_is_empty() {
        for q in [&[1u64, 1][..], &[2, 3], &[1, 2, 3]] {
            assert!(enumerate_bounded(&SearchConfig::new(w(q), rat(9, 10))).unwrap().is_empty());
        }
        assert!(SearchConfig::new(w(&[1, 1]), rat(0, 1)).validate().is_err());
    }

    #[test]
    fn coordinate_cross() {
        let vars = VarTable::indexed(&w(&[1, 1]));
        let f = WPoly::parse("x0 x1", &vars).unwrap();
        let cfg = SearchConfig::new(w(&[1, 1]), rat(2, 1)).with_hypersurface(f);
        let r = search_hypersurface(&cfg).unwrap();
        let pts: Vec<WPoint> = r.points.iter().map(|p| p.point.clone()).collect();
        assert_eq!(show(&pts), ["0:1", "1:0"]);
        assert_eq!(r.points[0].zero_coords, vec![0]);
    }

    #[test]
    fn empty_polynomial_rejected() {
        let vars = VarTable::indexed(&w(&[1, 1]));
        let f = WPoly::parse("x0 - x0", &vars).unwrap();
        let cfg = SearchConfig::new(w(&[1, 1]), rat(2, 1)).with_hypersurface(f);
        assert!(matches!(search_hypersurface(&cfg), Err(Error::Config(_))));
        assert!(search_hypersurface(&SearchConfig::new(w(&[1, 1]), rat(2, 1))).is_err());
    }

    #[test]
    fn deflated_points_are_found() {
        // [61:61] in P(2,3) has wh^6 = 61, far outside the base box
        let pts = enumerate_bounded(&SearchConfig::new(w(&[2, 3]), rat(2, 1))).unwrap();
        let x = WPoint::from_i64(&w(&[2, 3]), &[61, 61]).unwrap();
        assert_eq!(wh_m_power(&x), rat(61, 1));
        assert!(pts.contains(&x));
        let y = WPoint::from_i64(&w(&[2, 3]), &[67, 67]).unwrap();
        assert!(!pts.contains(&y));
    }

    #[test]
    fn oracle_small_boxes() {
        let pts = brute_force_oracle(&w(&[1, 1]), &rat(1, 1), &[1, 1]).unwrap();
        assert_eq!(show(&pts), ["0:1", "1:0", "1:1", "-1:1"]);
        assert!(brute_force_oracle(&w(&[1, 1]), &rat(1, 1), &[0, 0]).unwrap().is_empty());
    }

    fn in_box(x: &WPoint, radii: &[u64]) -> bool {
        x.coords().iter().zip(radii).all(|(c, &r)| c.magnitude() <= &r.into())
    }

    #[test]
    fn matches_oracle_inside_box() {
        for (q, b, radii) in [(&[2u64, 3][..], rat(2, 1), &[64u64, 512][..]), (&[1, 2], rat(2, 1), &[4, 16]), (&[1, 2, 3], rat(3, 2), &[3, 11, 38])] {
            let got: Vec<WPoint> = enumerate_bounded(&SearchConfig::new(w(q), b.clone()))
                .unwrap()
                .into_iter()
                .filter(|x| in_box(x, radii))
                .collect();
            assert_eq!(got, brute_force_oracle(&w(q), &b, radii).unwrap(), "{q:?}");
        }
    }

    #[test]
    fn two_three_against_orbit_invariant() {
        // full-support points of P(2,3) correspond to r = x0^3/x1^2 in Q^*,
        // with wh^6 equal to the height of r
        let pts = enumerate_bounded(&SearchConfig::new(w(&[2, 3]), rat(2, 1))).unwrap();
        let mut got: Vec<BigRational> = pts
            .iter()
            .filter(|x| x.coords().iter().all(|c| !c.is_zero()))
            .map(|x| {
                let c = x.coords();
                BigRational::new(c[0].pow(3), c[1].pow(2))
            })
            .collect();
        got.sort();
        let mut want = Vec::new();
        for a in -64i64..=64 {
            for b in 1i64..=64 {
                if a != 0 && a.gcd(&b) == 1 {
                    want.push(rat(a, b));
                }
            }
        }
        want.sort();
        assert_eq!(got, want);
        assert_eq!(pts.len(), want.len() + 2);
    }

    fn filtered(q: &[u64], b: &BigRational, f: &WPoly) -> Vec<WPoint> {
        enumerate_bounded(&SearchConfig::new(w(q), b.clone()))
            .unwrap()
            .into_iter()
            .filter(|x| f.eval(x.coords()).unwrap().is_zero())
            .collect()
    }

    #[test]
    fn pruned_search_matches_filtered_enumeration() {
        let cases: [(&[u64], &str, BigRational); 5] = [
            (&[2, 3], "4 x0^3 - 9 x1^2", rat(2, 1)),
            (&[2, 3], "x0^3 - 61 x1^2", rat(2, 1)),
            (&[2, 3], "x0^3 + 8 x1^2", rat(2, 1)),
            (&[1, 2, 3], "x0^6 - 2 x1^3 + x2^2 - x0 x1 x2", rat(2, 1)),
            (&[1, 2, 3], "x1^3 - 4 x2^2 + 12 x0^2 x1^2", rat(2, 1)),
        ];
        for (q, text, b) in cases {
            let f = WPoly::parse(text, &VarTable::indexed(&w(q))).unwrap();
            let r = search_hypersurface(&SearchConfig::new(w(q), b.clone()).with_hypersurface(f.clone())).unwrap();
            let got: Vec<WPoint> = r.points.into_iter().map(|p| p.point).collect();
            assert_eq!(got, filtered(q, &b, &f), "{text}");
        }
    }

    #[test]
    fn single_term_supports_are_skipped() {
        let f = WPoly::parse("x0^3 - 61 x1^2", &VarTable::indexed(&w(&[2, 3]))).unwrap();
        let r = search_hypersurface(&SearchConfig::new(w(&[2, 3]), rat(2, 1)).with_hypersurface(f)).unwrap();
        let pts: Vec<String> = r.points.iter().map(|p| p.point.to_string()).collect();
        assert_eq!(pts, ["61:61"]);
    }

    #[test]
    fn deterministic_across_jobs() {
        let base = SearchConfig::new(w(&[1, 2, 3]), rat(2, 1));
        let a = enumerate_bounded(&base.clone().with_jobs(1)).unwrap();
        let b = enumerate_bounded(&base.with_jobs(4)).unwrap();
        assert_eq!(a, b);
    }
}
