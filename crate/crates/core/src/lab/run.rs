//! Subcommand dispatch, caching and output.

use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::cache::Cache;
use super::config::{BoundsTable, Command, ExperimentConfig, PointSpec};
use super::record::{experiment_id, ResultRecord, SortKey, SCHEMA_VERSION, TIE_BREAK};
use super::report::write_report;
use crate::auxpoly::distance::{distance_audit, DistanceInput, TorusPoint};
use crate::auxpoly::omega::{omega, omega_rational, roots_of_unity_points};
use crate::auxpoly::philippon::{binomial_from_character, philippon_audit, PhilipponCase, PhilipponParams};
use crate::auxpoly::poly::SparsePoly;
use crate::auxpoly::schedule::{frontier, make_schedule};
use crate::auxpoly::siegel::{siegel_for_theta, GridSpec, SiegelParams};
use crate::bounds::{bound_report, corollary_witness_check, power_tuple_split};
use crate::dioph::{bituple_probe, genericity_probe, regularity_probe, BitupleParams, ProbeParams, RealTuple, RelationOutcome, SearchOptions};
use crate::error::{Error, Result};
use crate::lattice::zero_estimate_search;

pub struct RunOutcome {
    pub op: &'static str,
    pub records: Vec<ResultRecord>,
    /// Set when the run stopped early; `records` holds what completed.
    pub error: Option<Error>,
    pub cache_hit: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } => 3,
        Error::BudgetExhausted(_) => 4,
        _ => 2,
    }
}

/// Record op emitted by each subcommand.
pub fn op_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Relation { .. } => "relation",
        Command::Gen { .. } => "genericity",
        Command::Bigen { .. } => "bituple",
        Command::Schedule { frontier_cap: Some(_), .. } => "frontier",
        Command::Schedule { .. } => "schedule",
        Command::Auxpoly { .. } => "auxpoly",
        Command::Omega { .. } => "omega",
        Command::Zeroest { .. } => "zero_estimate",
        Command::DistAudit { .. } => "distance_audit",
        Command::Bounds { table: BoundsTable::Grid, .. } => "bounds",
        Command::Bounds { table: BoundsTable::Corollary, .. } => "corollary_check",
        Command::Bounds { table: BoundsTable::Split, .. } => "power_split",
        Command::PhilAudit { .. } => "philippon_audit",
    }
}

struct Emitter<'a> {
    cfg: &'a ExperimentConfig,
    op: &'static str,
    config_hash: String,
    inputs_digest: String,
    records: Vec<ResultRecord>,
}

impl Emitter<'_> {
    fn push(&mut self, key: SortKey, approximate: bool, payload: impl Serialize) -> Result<()> {
        if self.cfg.exact && approximate {
            return Err(Error::BudgetExhausted(format!("{} result is approximate under budget {}", self.op, self.cfg.budget)));
        }
        self.records.push(ResultRecord {
            schema_version: SCHEMA_VERSION,
            experiment_id: experiment_id(&self.config_hash, &self.inputs_digest),
            config_hash: self.config_hash.clone(),
            inputs_digest: self.inputs_digest.clone(),
            op: self.op.to_string(),
            seed: self.cfg.seed,
            precision: self.cfg.precision,
            approximate,
            tie_break: TIE_BREAK.to_string(),
            key,
            payload: serde_json::to_value(payload)?,
        });
        Ok(())
    }
}

fn key(d: Option<u64>, subset: &[usize], l: &[i64]) -> SortKey {
    SortKey { d, subset: subset.iter().map(|&x| x as i64).collect(), l: l.to_vec() }
}

fn tuple(path: &Path, prec: u32) -> Result<RealTuple> {
    RealTuple::from_file(path, prec)
}

/// One polynomial per line: `c*e1,e2,…` terms separated by whitespace, or
/// `binomial a1 a2 …` for `x^{a⁺} − x^{a⁻}`.
pub fn parse_family(text: &str, nvars: usize) -> Result<Vec<SparsePoly>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("binomial") {
            let chi = rest.split_whitespace().map(|x| x.parse::<i64>().map_err(|_| Error::invalid(format!("bad exponent {x:?}")))).collect::<Result<Vec<_>>>()?;
            if chi.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: chi.len() });
            }
            out.push(binomial_from_character(&chi));
            continue;
        }
        let mut terms = Vec::new();
        for t in line.split_whitespace() {
            let (c, e) = t.split_once('*').ok_or_else(|| Error::invalid(format!("bad term {t:?}")))?;
            let c: BigInt = c.parse().map_err(|_| Error::invalid(format!("bad coefficient {c:?}")))?;
            let e = e.split(',').map(|x| x.parse::<u32>().map_err(|_| Error::invalid(format!("bad exponent {x:?}")))).collect::<Result<Vec<_>>>()?;
            terms.push((e, c));
        }
        out.push(SparsePoly::from_terms(nvars, terms)?);
    }
    Ok(out)
}

fn read_points(path: &Path) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect())
}

fn compute(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let prec = cfg.precision;
    let opts = SearchOptions { budget: cfg.budget, precision: prec };
    match &cfg.command {
        Command::Relation { tuple: t, height, include_pi } => {
            let theta = tuple(t, prec)?;
            let out = regularity_probe(&theta, *include_pi, *height, &opts)?;
            let (l, approx) = match &out {
                RelationOutcome::RelationFound { l, exhaustive, .. } => (l.clone(), !exhaustive),
                RelationOutcome::NoRelationFound { exhaustive, .. } => (vec![], !exhaustive),
            };
            em.push(key(None, &[], &l), approx, out)?;
        }
        Command::Gen { tuple: t, mu, eta, c, d } => {
            let theta = tuple(t, prec)?;
            #[derive(Serialize)]
            struct P<'a> {
                label: &'a str,
                mu: usize,
                eta: f64,
                c: f64,
                record: &'a crate::dioph::genericity::DRecord,
            }
            for &dd in d {
                let rep = genericity_probe(&theta, &ProbeParams { mu: *mu, eta: *eta, c: *c, d_set: vec![dd] }, &opts)?;
                let r = &rep.records[0];
                let p = P { label: &theta.label, mu: *mu, eta: *eta, c: *c, record: r };
                em.push(key(Some(dd), &r.best.subset, &r.best.l), r.best.approximate, p)?;
            }
        }
        Command::Bigen { theta, kappa, mu, nu, eta, c, l, r } => {
            let th = tuple(theta, prec)?;
            let ka = tuple(kappa, prec)?;
            #[derive(Serialize)]
            struct P<'a> {
                theta: &'a str,
                kappa: &'a str,
                mu: usize,
                nu: usize,
                eta: f64,
                c: f64,
                point: &'a crate::dioph::bituple::BituplePoint,
            }
            for &ll in l {
                for &rr in r {
                    let prm = BitupleParams { mu: *mu, nu: *nu, eta: *eta, c: *c, l_set: vec![ll], r_set: vec![rr] };
                    let rep = bituple_probe(&th, &ka, &prm, &opts)?;
                    let pt = &rep.records[0];
                    let approx = pt.theta_best.approximate || pt.kappa_best.approximate;
                    let k = SortKey { d: Some(ll), subset: vec![rr as i64], l: pt.theta_best.l.clone() };
                    em.push(k, approx, P { theta: &th.label, kappa: &ka.label, mu: *mu, nu: *nu, eta: *eta, c: *c, point: pt })?;
                }
            }
        }
        Command::Schedule { d, k, mu, nu, frontier_cap } => match frontier_cap {
            Some(cap) => {
                let f = frontier(*mu, *nu, *k, *cap)?;
                em.push(key(f.d, &[], &[]), false, f)?;
            }
            None => {
                for &dd in d {
                    em.push(key(Some(dd), &[], &[]), false, make_schedule(dd, *k, *mu, *nu)?)?;
                }
            }
        },
        Command::Auxpoly { tuple: t, subset, k, nu, d, radius, strict, grid_points } => {
            let theta = tuple(t, prec)?;
            for &dd in d {
                let sch = make_schedule(dd, *k as u32, subset.len() as u32, *nu)?;
                let l = u32::try_from(sch.l).map_err(|_| Error::ScaleExceeded(format!("L = {} too large", sch.l)))?;
                let sp = SiegelParams { u: sch.u, delta: dd as f64, radius: *radius, strict: *strict };
                let grid = GridSpec { points: *grid_points, seed: cfg.seed, ..GridSpec::default() };
                let (poly, siegel) = siegel_for_theta(&theta, subset, *k, l, &sp, &grid)?;
                let payload = serde_json::json!({ "schedule": sch, "polynomial": poly, "siegel": siegel });
                em.push(key(Some(dd), subset, &[]), false, payload)?;
            }
        }
        Command::Omega { points, order } => {
            let rows = read_points(points)?;
            let res = match order {
                Some(n) => {
                    let exps = rows
                        .iter()
                        .map(|r| r.iter().map(|x| x.parse::<i64>().map_err(|_| Error::invalid(format!("bad exponent {x:?}")))).collect())
                        .collect::<Result<Vec<Vec<i64>>>>()?;
                    omega(&roots_of_unity_points(*n, &exps)?)?
                }
                None => {
                    let pts = rows
                        .iter()
                        .map(|r| r.iter().map(|x| x.parse::<BigRational>().map_err(|_| Error::invalid(format!("bad rational {x:?}")))).collect())
                        .collect::<Result<Vec<Vec<BigRational>>>>()?;
                    omega_rational(&pts)?
                }
            };
            em.push(key(None, &[], &[]), false, res)?;
        }
        Command::Zeroest { order, base, depth, degree } => {
            let rep = zero_estimate_search(*order, base, *depth, *degree)?;
            let l = rep.found.as_ref().map(|w| w.character.0.clone()).unwrap_or_default();
            em.push(key(None, &[], &l), false, rep)?;
        }
        Command::DistAudit { theta, kappa, i, j, k, d, eta, c, point } => {
            let th = tuple(theta, prec)?;
            let ka = tuple(kappa, prec)?;
            let z = match point {
                PointSpec::ThetaBar => TorusPoint::ThetaBar,
                PointSpec::Perturb { log_dist } => TorusPoint::perturbation(&th, &ka, *k, *log_dist, cfg.seed),
                PointSpec::Roots { order, exps } => TorusPoint::RootsOfUnity { order: *order, exps: exps.clone() },
            };
            let input = DistanceInput { theta: &th, kappa: &ka, i, j, k: *k, d: *d, eta: *eta, c: *c };
            let rep = distance_audit(&input, &z, &opts)?;
            em.push(key(Some(*d), i, &[]), rep.approximate, rep)?;
        }
        Command::Bounds { m, n, literal_kappa, table } => match table {
            BoundsTable::Grid => {
                for mm in m.0..=m.1 {
                    for nn in n.0..=n.1 {
                        em.push(key(None, &[mm as usize, nn as usize], &[]), false, bound_report(mm, nn, *literal_kappa)?)?;
                    }
                }
            }
            BoundsTable::Corollary => {
                for nn in n.0..=n.1 {
                    em.push(key(None, &[nn as usize], &[]), false, corollary_witness_check(nn)?)?;
                }
            }
            BoundsTable::Split => {
                for mm in m.0..=m.1 {
                    for nn in n.0.max(2 * mm)..=n.1 {
                        em.push(key(None, &[mm as usize, nn as usize], &[]), false, power_tuple_split(mm, nn)?)?;
                    }
                }
            }
        },
        Command::PhilAudit { theta, family, c1, c2, big_c, eta, d, infinitely_many, zero_distance_bound, starts } => {
            let th = tuple(theta, prec)?;
            let fam = parse_family(&std::fs::read_to_string(family)?, th.len())?;
            let prm = PhilipponParams {
                c1: *c1,
                c2: *c2,
                big_c: *big_c,
                eta: *eta,
                d: *d,
                case: if *infinitely_many { PhilipponCase::InfinitelyManyD } else { PhilipponCase::AllLargeD },
                zero_distance_bound: *zero_distance_bound,
                seed: cfg.seed,
                starts: *starts,
                precision: prec,
            };
            em.push(key(Some(*d), &[], &[]), false, philippon_audit(&fam, &th, &prm)?)?;
        }
    }
    Ok(())
}

/// Runs the experiment, consulting and filling the cache when configured.
pub fn execute(cfg: &ExperimentConfig) -> RunOutcome {
    let op = op_name(&cfg.command);
    let fail = |e| RunOutcome { op, records: vec![], error: Some(e), cache_hit: false };
    if let Err(e) = cfg.validate() {
        return fail(e);
    }
    let config_hash = cfg.config_hash();
    let inputs_digest = match cfg.inputs_digest() {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let cache = match cfg.cache_dir.as_deref().map(Cache::open).transpose() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Some(c) = &cache {
        if let Some(records) = c.lookup(&config_hash, &inputs_digest, cfg.exact) {
            log::info!("cache hit for {config_hash}");
            return RunOutcome { op, records, error: None, cache_hit: true };
        }
    }
    let mut em = Emitter { cfg, op, config_hash: config_hash.clone(), inputs_digest: inputs_digest.clone(), records: vec![] };
    let error = compute(cfg, &mut em).err();
    if let (Some(c), None) = (&cache, &error) {
        if let Err(e) = c.store(&config_hash, &inputs_digest, &em.records) {
            log::warn!("cache write failed: {e}");
        }
    }
    RunOutcome { op, records: em.records, error, cache_hit: false }
}

pub fn emit(cfg: &ExperimentConfig, outcome: &RunOutcome) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_report(&outcome.records, outcome.op, cfg.format, &mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_report(&outcome.records, outcome.op, cfg.format, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Execute, write whatever completed, and map the outcome to an exit code.
pub fn run(cfg: &ExperimentConfig) -> i32 {
    let outcome = execute(cfg);
    if let Err(e) = emit(cfg, &outcome) {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    match &outcome.error {
        None => 0,
        Some(e) => {
            eprintln!("error: {e}");
            exit_code(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn relation_on_dependent_tuple() {
        let dir = tempfile::tempdir().unwrap();
        let t = write(dir.path(), "deps.tup", "1\n2\n3\n");
        let cfg = ExperimentConfig::new(Command::Relation { tuple: t, height: 10, include_pi: false });
        let out = execute(&cfg);
        assert!(out.error.is_none());
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].payload["outcome"], "relation_found");
        assert_eq!(out.records[0].payload["l"], serde_json::json!([1, 1, -1]));
    }

    #[test]
    fn missing_file_is_exit_2() {
        let cfg = ExperimentConfig::new(Command::Relation { tuple: "/nonexistent/x.tup".into(), height: 3, include_pi: false });
        let out = execute(&cfg);
        assert_eq!(exit_code(out.error.as_ref().unwrap()), 2);
    }

    #[test]
    fn precision_overflow_is_exit_3() {
        let dir = tempfile::tempdir().unwrap();
        let t = write(dir.path(), "a.tup", "pi\n");
        let mut cfg = ExperimentConfig::new(Command::Relation { tuple: t, height: 3, include_pi: false });
        cfg.precision = 1 << 20;
        assert_eq!(exit_code(execute(&cfg).error.as_ref().unwrap()), 3);
    }

    #[test]
    fn exact_gate_is_exit_4() {
        let dir = tempfile::tempdir().unwrap();
        let t = write(dir.path(), "g.tup", "1\nphi\n");
        let mut cfg = ExperimentConfig::new(Command::Gen { tuple: t, mu: 2, eta: 1.0, c: 3.0, d: vec![2, 3, 40] });
        cfg.budget = 50;
        cfg.exact = true;
        let out = execute(&cfg);
        assert_eq!(exit_code(out.error.as_ref().unwrap()), 4);
        // 5² = 25 ≤ 50 and 7² = 49 ≤ 50 complete before the gate trips.
        assert_eq!(out.records.len(), 2);
    }

    #[test]
    fn cache_hit_and_misses() {
        let dir = tempfile::tempdir().unwrap();
        let t = write(dir.path(), "g.tup", "1\nphi\n");
        let mut cfg = ExperimentConfig::new(Command::Gen { tuple: t.clone(), mu: 2, eta: 1.0, c: 3.0, d: vec![2, 3] });
        cfg.cache_dir = Some(dir.path().join("cache"));
        let a = execute(&cfg);
        assert!(!a.cache_hit);
        let b = execute(&cfg);
        assert!(b.cache_hit);
        assert_eq!(a.records, b.records);
        cfg.precision = 256;
        assert!(!execute(&cfg).cache_hit);
        cfg.precision = 128;
        cfg.seed = 9;
        assert!(!execute(&cfg).cache_hit);
        // Corrupt entry: ignored and recomputed.
        cfg.seed = 0;
        let cache = Cache::open(cfg.cache_dir.as_ref().unwrap()).unwrap();
        std::fs::write(cache.path(&cfg.config_hash(), &cfg.inputs_digest().unwrap()), "garbage\n").unwrap();
        let c = execute(&cfg);
        assert!(!c.cache_hit && c.error.is_none());
        assert_eq!(c.records, a.records);
    }

    #[test]
    fn family_grammar() {
        let f = parse_family("# comment\n1*1,1 -1*0,0\nbinomial 2 -1\n", 2).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].as_binomial_character(), Some(vec![-1, -1]));
        assert_eq!(f[1].as_binomial_character().map(|c| c.iter().map(|x| x.abs()).collect::<Vec<_>>()), Some(vec![2, 1]));
        assert!(parse_family("1*1\n", 2).is_err());
    }

    #[test]
    fn bounds_grid_has_121_rows() {
        let cfg = ExperimentConfig::new(Command::Bounds { m: (2, 12), n: (2, 12), literal_kappa: false, table: BoundsTable::Grid });
        let out = execute(&cfg);
        assert_eq!(out.records.len(), 121);
        let mut buf = Vec::new();
        write_report(&out.records, out.op, super::super::config::Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 122);
    }
}
