use serde_json::{json, Value};
use wproj_core::exactnum::factor;
use wproj_core::search::{search, SearchConfig};
use wproj_core::vojtalab::{scan, ScanConfig};
use wproj_core::wheight::{hgcd, local_height, log_hwgcd_tuple, lwh, split_height_s, CoordinateDivisor};
use wproj_core::wpoint::integralize;
use wproj_core::wpoly::{finite_height_y, global_height_y, local_height_y, VarTable, WPolyFile};
use wproj_core::{BigRational, FormalLog, SubschemeSpec, WPoint, WPoly, WeightVector};

use crate::args::{Command, PolySource, ScanArgs, SearchArgs, VojtaAction};
use crate::error::CliError;
use crate::output::Output;

type Res<T> = Result<T, CliError>;

pub fn execute(command: &Command, jobs: usize) -> Res<Output> {
    Ok(match command {
        Command::Factor { n } => Output::new("factor").field("factorization", factor(n)?.to_string()),
        Command::Wgcd(a) => {
            let x = WPoint::new(a.weights.clone(), a.tuple.0.clone())?;
            Output::new("wgcd").field("wgcd", x.wgcd().to_string())
        }
        Command::Normalize(a) => {
            let (x, _) = integralize(&a.tuple.0, &a.weights)?;
            Output::new("normalize").field("point", x.normalize().to_string())
        }
        Command::Canonical(a) => {
            let x = point(&a.weights, &a.point.0)?;
            Output::new("canonical").field("point", x.canonicalize().to_string())
        }
        Command::Equals { wp, other } => {
            let x = point(&wp.weights, &wp.point.0)?;
            let y = point(&wp.weights, &other.0)?;
            Output::new("equals").field("equal", x.equals(&y)?)
        }
        Command::Height { wp, place } => {
            let x = point(&wp.weights, &wp.point.0)?;
            let h = match place {
                Some(v) => local_height(&x, v),
                None => lwh(&x),
            };
            log_fields(Output::new("height"), "", &h)
        }
        Command::Hwgcd(a) => {
            let h = log_hwgcd_tuple(&a.tuple.0, &a.weights)?;
            Output::new("hwgcd")
                .field("exact", h.to_string())
                .field("decimal", h.decimal())
                .field("finite", h.finite.to_string())
                .field("archimedean_floor", h.archimedean)
                .field("archimedean_convention", "min_i floor(max(-ln|x_i|, 0) / q_i), natural log")
        }
        Command::Hgcd { a, b } => log_fields(Output::new("hgcd"), "", &hgcd(a, b)?),
        Command::SplitHeight { wp, primes, divisor } => {
            let x = point(&wp.weights, &wp.point.0)?.normalize();
            let d = match divisor {
                Some(m) => CoordinateDivisor::new(m.clone()),
                None => CoordinateDivisor::anticanonical(wp.weights.len()),
            };
            let h = split_height_s(&x, primes, &d)?;
            let out = log_fields(Output::new("split-height"), "in_s_", &h.in_s);
            let out = log_fields(out, "out_s_", &h.out_s);
            log_fields(out, "total_", &h.total())
        }
        Command::PolyCheck(src) => {
            let (vars, polys) = load_polys(src)?;
            Output::new("poly-check")
                .field("variables", vars.to_string())
                .field("degrees", polys.iter().map(WPoly::degree).collect::<Vec<_>>())
                .field("polynomials", polys.iter().map(|f| f.to_string()).collect::<Vec<_>>())
        }
        Command::PolyEval { poly, tuple } => {
            let (_, polys) = load_polys(poly)?;
            let values = polys.iter().map(|f| f.eval(&tuple.0).map(|v| v.to_string())).collect::<Result<Vec<_>, _>>()?;
            Output::new("poly-eval").field("values", values)
        }
        Command::SubschemeHeight { poly, codim, point: p, place } => {
            let (vars, polys) = load_polys(poly)?;
            let spec = SubschemeSpec::new(polys, *codim)?;
            let x = point(&vars.weight_vector()?, &p.0)?;
            match place {
                Some(v) => {
                    let out = Output::new("subscheme-height").field("place", v.to_string());
                    match local_height_y(&spec, &x, v)? {
                        Some(h) => log_fields(out, "", &h),
                        None => out.field("exact", "inf").field("decimal", "inf"),
                    }
                }
                None => {
                    let out = log_fields(Output::new("subscheme-height"), "finite_", &finite_height_y(&spec, &x)?);
                    log_fields(out, "global_", &global_height_y(&spec, &x)?)
                }
            }
        }
        Command::Singular(a) => {
            let x = point(&a.weights, &a.point.0)?;
            Output::new("singular").field("singular", x.is_singular()?)
        }
        Command::ReduceWeights { weights } => {
            let (reduced, d) = weights.reduce_weights();
            let wf = reduced.well_formalize()?;
            let steps: Vec<Value> = wf.steps.iter().map(|s| json!({"index": s.index, "divisor": s.divisor})).collect();
            Output::new("reduce-weights")
                .field("reduced", reduced.to_string())
                .field("divisor", d)
                .field("well_formed", weights.is_well_formed())
                .field("well_formed_weights", wf.weights.to_string())
                .field("steps", steps)
        }
        Command::Search(a) => run_search(a, jobs)?,
        Command::VojtaScan(a) | Command::Vojta { action: VojtaAction::Scan(a) } => run_scan(a, jobs)?,
    })
}

/// Exact form first, decimal rendering second.
fn log_fields(out: Output, prefix: &str, h: &FormalLog) -> Output {
    out.field(&format!("{prefix}exact"), h.to_string())
        .field(&format!("{prefix}decimal"), h.decimal())
}

fn point(w: &WeightVector, coords: &[BigRational]) -> Res<WPoint> {
    Ok(integralize(coords, w)?.0)
}

fn read(path: &std::path::Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

pub fn load_polys(src: &PolySource) -> Res<(VarTable, Vec<WPoly>)> {
    if let Some(path) = &src.poly {
        let file = WPolyFile::parse(&read(path)?)?;
        if let Some(w) = &src.weights {
            if w.weights() != file.vars.weights() {
                return Err(CliError::Usage(format!("--weights {w} disagrees with the header of {}", path.display())));
            }
        }
        return Ok((file.vars, file.polys));
    }
    let Some(w) = &src.weights else {
        return Err(CliError::Usage("give --poly FILE or --expr with --weights".into()));
    };
    if src.expr.is_empty() {
        return Err(CliError::Usage("give --poly FILE or --expr with --weights".into()));
    }
    let vars = VarTable::indexed(w);
    let polys = src.expr.iter().map(|e| WPoly::parse(e, &vars)).collect::<Result<Vec<_>, _>>()?;
    Ok((vars, polys))
}

/// Coordinates given by variable name or index.
fn resolve_coords(names: &[String], vars: &VarTable) -> Res<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            vars.index_of(n)
                .or_else(|| n.parse::<usize>().ok().filter(|&i| i < vars.len()))
                .ok_or_else(|| CliError::Usage(format!("unknown coordinate `{n}`")))
        })
        .collect()
}

fn run_search(a: &SearchArgs, jobs: usize) -> Res<Output> {
    let src = PolySource { poly: a.poly.clone(), expr: a.expr.iter().cloned().collect(), weights: Some(a.weights.clone()) };
    let (vars, poly) = if a.poly.is_some() || a.expr.is_some() {
        let (vars, mut polys) = load_polys(&src)?;
        if polys.len() != 1 {
            return Err(CliError::Usage(format!("search takes one polynomial, got {}", polys.len())));
        }
        (vars, polys.pop())
    } else {
        (VarTable::indexed(&a.weights), None)
    };
    let mut config = SearchConfig::new(a.weights.clone(), a.bound.clone())
        .with_nonvanishing(resolve_coords(&a.require_nonzero, &vars)?)
        .with_jobs(jobs);
    config.hypersurface = poly;
    config.phase2 = !a.no_deflation;
    let report = search(&config)?;
    log::info!(
        "search: {} phase-1 and {} phase-2 candidates, {} points in {:.2}s",
        report.phase1_candidates,
        report.phase2_candidates,
        report.points.len(),
        report.wall_time_secs
    );
    Ok(Output::from_report("search", serde_json::to_value(&report).expect("report serializes"), "points"))
}

fn run_scan(a: &ScanArgs, jobs: usize) -> Res<Output> {
    let (vars, polys) = load_polys(&a.poly)?;
    let seed = a.seed.unwrap_or_else(rand::random);
    log::info!("seed: {seed}");
    let config = ScanConfig {
        spec: SubschemeSpec::new(polys, a.codim)?,
        weights: vars.weight_vector()?,
        primes: a.primes.clone(),
        epsilons: a.epsilons.clone(),
        deltas: a.deltas.clone(),
        radii: a.radii.clone(),
        samples: a.samples,
        seed,
        require_unit_content: a.require_unit_content,
        keep_violations_only: a.keep_violations_only,
        jobs,
    };
    let report = scan(&config)?;
    log::info!(
        "scan: {} records from {} draws, {} candidates",
        report.records.len(),
        report.draws,
        report.candidates.len()
    );
    Ok(Output::from_report("vojta-scan", serde_json::to_value(&report).expect("report serializes"), "records"))
}
