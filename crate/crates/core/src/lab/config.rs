//! Experiment configuration and its content digests.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsTable {
    Grid,
    Corollary,
    Split,
}

/// Point argument of the distance audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSpec {
    ThetaBar,
    Perturb { log_dist: f64 },
    Roots { order: u64, exps: Vec<i64> },
}

impl std::str::FromStr for PointSpec {
    type Err = Error;

    /// `theta-bar`, `perturb:<log dist>` or `roots:<N>:<e1,e2,…>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("bad point spec {s:?}"));
        let mut parts = s.splitn(3, ':');
        match parts.next() {
            Some("theta-bar") => Ok(PointSpec::ThetaBar),
            Some("perturb") => {
                let v: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if !v.is_finite() {
                    return Err(bad());
                }
                Ok(PointSpec::Perturb { log_dist: v })
            }
            Some("roots") => {
                let order = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let exps = parse_i64_list(parts.next().ok_or_else(bad)?)?;
                Ok(PointSpec::Roots { order, exps })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    Relation { tuple: PathBuf, height: u64, include_pi: bool },
    Gen { tuple: PathBuf, mu: usize, eta: f64, c: f64, d: Vec<u64> },
    Bigen { theta: PathBuf, kappa: PathBuf, mu: usize, nu: usize, eta: f64, c: f64, l: Vec<u64>, r: Vec<u64> },
    Schedule { d: Vec<u64>, k: u32, mu: u32, nu: u32, frontier_cap: Option<u64> },
    Auxpoly { tuple: PathBuf, subset: Vec<usize>, k: usize, nu: u32, d: Vec<u64>, radius: f64, strict: bool, grid_points: usize },
    /// Rational points, or exponent vectors of `ζ_order` when `order` is set.
    Omega { points: PathBuf, order: Option<u64> },
    Zeroest { order: u64, base: Vec<Vec<i64>>, depth: usize, degree: u32 },
    DistAudit { theta: PathBuf, kappa: PathBuf, i: Vec<usize>, j: Vec<usize>, k: usize, d: u64, eta: f64, c: f64, point: PointSpec },
    Bounds { m: (u64, u64), n: (u64, u64), literal_kappa: bool, table: BoundsTable },
    PhilAudit {
        theta: PathBuf,
        family: PathBuf,
        c1: f64,
        c2: f64,
        big_c: f64,
        eta: f64,
        d: u64,
        infinitely_many: bool,
        zero_distance_bound: Option<f64>,
        starts: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Relation { .. } => "relation",
            Command::Gen { .. } => "gen",
            Command::Bigen { .. } => "bigen",
            Command::Schedule { .. } => "schedule",
            Command::Auxpoly { .. } => "auxpoly",
            Command::Omega { .. } => "omega",
            Command::Zeroest { .. } => "zeroest",
            Command::DistAudit { .. } => "dist-audit",
            Command::Bounds { .. } => "bounds",
            Command::PhilAudit { .. } => "phil-audit",
        }
    }

    /// Input files with their roles, in a fixed order.
    pub fn input_files(&self) -> Vec<(&'static str, &Path)> {
        match self {
            Command::Relation { tuple, .. } | Command::Gen { tuple, .. } | Command::Auxpoly { tuple, .. } => vec![("tuple", tuple)],
            Command::Bigen { theta, kappa, .. } | Command::DistAudit { theta, kappa, .. } => vec![("theta", theta), ("kappa", kappa)],
            Command::Omega { points, .. } => vec![("points", points)],
            Command::PhilAudit { theta, family, .. } => vec![("theta", theta), ("family", family)],
            Command::Schedule { .. } | Command::Zeroest { .. } | Command::Bounds { .. } => vec![],
        }
        .into_iter()
        .map(|(r, p)| (r, p.as_path()))
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub precision: u32,
    pub budget: u64,
    pub seed: u64,
    /// Refuse approximate (budget-limited) results.
    pub exact: bool,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            precision: 128,
            budget: crate::dioph::linear_form::DEFAULT_BUDGET,
            seed: 0,
            exact: false,
            out: None,
            cache_dir: None,
            format: Format::Jsonl,
        }
    }

    /// Digest of everything that determines the payload. Output location,
    /// cache location, format and the exactness gate are excluded.
    pub fn config_hash(&self) -> String {
        #[derive(Serialize)]
        struct View<'a> {
            command: &'a Command,
            precision: u32,
            budget: u64,
            seed: u64,
        }
        let v = View { command: &self.command, precision: self.precision, budget: self.budget, seed: self.seed };
        hex::encode(Sha256::digest(serde_json::to_vec(&v).expect("config serialises")))
    }

    /// Digest of the input files' contents.
    pub fn inputs_digest(&self) -> Result<String> {
        let mut h = Sha256::new();
        for (role, path) in self.command.input_files() {
            let bytes = std::fs::read(path).map_err(|e| Error::invalid(format!("cannot read {role} file {}: {e}", path.display())))?;
            h.update(role.as_bytes());
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(&bytes);
        }
        Ok(hex::encode(h.finalize()))
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::invalid(format!("empty {what} set")));
        match &self.command {
            Command::Gen { d, .. } if d.is_empty() => return empty("D"),
            Command::Bigen { l, r, .. } if l.is_empty() || r.is_empty() => return empty("L/R"),
            Command::Schedule { d, frontier_cap: None, .. } if d.is_empty() => return empty("D"),
            Command::Auxpoly { d, .. } if d.is_empty() => return empty("D"),
            Command::Zeroest { base, .. } if base.is_empty() => return empty("base point"),
            Command::Bounds { m, n, .. } if m.0 > m.1 || n.0 > n.1 => return empty("m/n range"),
            _ => {}
        }
        for (role, path) in self.command.input_files() {
            if !path.is_file() {
                return Err(Error::invalid(format!("{role} file {} does not exist", path.display())));
            }
        }
        Ok(())
    }
}

pub fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::invalid(format!("bad integer {x:?}"))))
        .collect()
}

/// `a..b` (inclusive), `a..b:step` or a comma list.
pub fn parse_u64_set(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::invalid(format!("bad integer set {s:?}"));
    if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, st)) => (b, st.trim().parse::<u64>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if step == 0 || a > b {
            return Err(bad());
        }
        return Ok((a..=b).step_by(step as usize).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let v = parse_u64_set(s)?;
    match (v.first(), v.last()) {
        (Some(&a), Some(&b)) => Ok((a, b)),
        _ => Err(Error::invalid(format!("bad range {s:?}"))),
    }
}

/// `"0,0;1,2"` → `[[0,0],[1,2]]`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    s.split(';').filter(|r| !r.trim().is_empty()).map(parse_i64_list).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets() {
        assert_eq!(parse_u64_set("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_u64_set("2..50").unwrap().len(), 49);
        assert_eq!(parse_u64_set("1..9:4").unwrap(), vec![1, 5, 9]);
        assert_eq!(parse_u64_set("3, 7").unwrap(), vec![3, 7]);
        assert!(parse_u64_set("5..2").is_err());
        assert_eq!(parse_matrix("0,0;1,2").unwrap(), vec![vec![0, 0], vec![1, 2]]);
    }

    #[test]
    fn point_specs() {
        assert_eq!("theta-bar".parse::<PointSpec>().unwrap(), PointSpec::ThetaBar);
        assert_eq!("perturb:-1".parse::<PointSpec>().unwrap(), PointSpec::Perturb { log_dist: -1.0 });
        assert_eq!("roots:3:1,2".parse::<PointSpec>().unwrap(), PointSpec::Roots { order: 3, exps: vec![1, 2] });
        assert!("roots:3".parse::<PointSpec>().is_err());
    }

    #[test]
    fn hash_ignores_output_plumbing() {
        let c = ExperimentConfig::new(Command::Bounds { m: (2, 3), n: (2, 3), literal_kappa: false, table: BoundsTable::Grid });
        let mut d = c.clone();
        d.out = Some("x.jsonl".into());
        d.format = Format::Csv;
        d.exact = true;
        assert_eq!(c.config_hash(), d.config_hash());
        d.seed = 1;
        assert_ne!(c.config_hash(), d.config_hash());
        d.seed = 0;
        d.precision = 256;
        assert_ne!(c.config_hash(), d.config_hash());
    }
}
