use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use torlab::lab::config::{parse_matrix, parse_range, parse_u64_set};
use torlab::lab::{BoundsTable, Command, ExperimentConfig, Format, PointSpec};

#[derive(Parser)]
#[command(name = "torlab", version, about = "Experiments on split tori: genericity, auxiliary polynomials, bounds")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    prec: u32,
    /// Enumeration budget before switching to lattice reduction.
    #[arg(long, global = true, default_value_t = torlab::dioph::linear_form::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Jsonl)]
    format: FormatArg,
    /// Fail with exit code 4 instead of returning budget-limited results.
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    cmd: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Grid,
    Corollary,
    Split,
}

#[derive(Clone)]
struct Set(Vec<u64>);

#[derive(Clone)]
struct Idx(Vec<usize>);

#[derive(Clone)]
struct Mat(Vec<Vec<i64>>);

fn u64_set(s: &str) -> Result<Set, String> {
    parse_u64_set(s).map(Set).map_err(|e| e.to_string())
}

fn usize_list(s: &str) -> Result<Idx, String> {
    parse_u64_set(s).map(|v| Idx(v.into_iter().map(|x| x as usize).collect())).map_err(|e| e.to_string())
}

fn range(s: &str) -> Result<(u64, u64), String> {
    parse_range(s).map_err(|e| e.to_string())
}

fn matrix(s: &str) -> Result<Mat, String> {
    parse_matrix(s).map(Mat).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<PointSpec, String> {
    s.parse().map_err(|e: torlab::Error| e.to_string())
}

#[derive(Subcommand)]
enum Sub {
    /// Integer relations of bounded height.
    Relation {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        height: u64,
        #[arg(long)]
        include_pi: bool,
    },
    /// Genericity probe over a set of heights.
    Gen {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        mu: usize,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long = "D", value_parser = u64_set)]
        d: Set,
    },
    /// Bituple probe over L × R.
    Bigen {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        kappa: PathBuf,
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        nu: usize,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long = "L", value_parser = u64_set)]
        l: Set,
        #[arg(long = "R", value_parser = u64_set)]
        r: Set,
    },
    /// Parameter schedules, or the feasibility frontier with --frontier-cap.
    Schedule {
        #[arg(long = "D", value_parser = u64_set, default_value = "16")]
        d: Set,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        mu: u32,
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        frontier_cap: Option<u64>,
    },
    /// Siegel-type auxiliary polynomial for scheduled parameters.
    Auxpoly {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, value_parser = usize_list)]
        subset: Idx,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        nu: u32,
        #[arg(long = "D", value_parser = u64_set)]
        d: Set,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 1000)]
        grid_points: usize,
    },
    /// Minimal vanishing degree of a point set.
    Omega {
        #[arg(long)]
        points: PathBuf,
        /// Read integer exponents of a primitive root of unity of this order.
        #[arg(long)]
        order: Option<u64>,
    },
    /// Obstruction-subgroup search for root-of-unity products.
    Zeroest {
        #[arg(long)]
        order: u64,
        /// Exponent vectors, `;`-separated, e.g. `0,0;1,2`.
        #[arg(long, value_parser = matrix)]
        base: Mat,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Distance audit at a point of the big torus.
    DistAudit {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        kappa: PathBuf,
        #[arg(long = "I", value_parser = usize_list)]
        i: Idx,
        #[arg(long = "J", value_parser = usize_list)]
        j: Idx,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long = "D")]
        d: u64,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// `theta-bar`, `perturb:<log dist>` or `roots:<N>:<e1,e2,…>`.
        #[arg(long, value_parser = point, default_value = "theta-bar")]
        point: PointSpec,
    },
    /// Exact bound tables.
    Bounds {
        #[arg(long, value_parser = range, default_value = "2..12")]
        m: (u64, u64),
        #[arg(long, value_parser = range, default_value = "2..12")]
        n: (u64, u64),
        #[arg(long)]
        literal_kappa: bool,
        #[arg(long, value_enum, default_value_t = TableArg::Grid)]
        table: TableArg,
    },
    /// Hypothesis audit for a polynomial family at a point.
    PhilAudit {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long = "C", default_value_t = 1.0)]
        big_c: f64,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long = "D")]
        d: u64,
        #[arg(long)]
        infinitely_many: bool,
        #[arg(long, allow_hyphen_values = true)]
        zero_distance_bound: Option<f64>,
        #[arg(long, default_value_t = 100)]
        starts: usize,
    },
}

impl Sub {
    fn into_command(self) -> Command {
        match self {
            Sub::Relation { tuple, height, include_pi } => Command::Relation { tuple, height, include_pi },
            Sub::Gen { tuple, mu, eta, c, d } => Command::Gen { tuple, mu, eta, c, d: d.0 },
            Sub::Bigen { theta, kappa, mu, nu, eta, c, l, r } => Command::Bigen { theta, kappa, mu, nu, eta, c, l: l.0, r: r.0 },
            Sub::Schedule { d, k, mu, nu, frontier_cap } => Command::Schedule { d: d.0, k, mu, nu, frontier_cap },
            Sub::Auxpoly { tuple, subset, k, nu, d, radius, strict, grid_points } => {
                Command::Auxpoly { tuple, subset: subset.0, k, nu, d: d.0, radius, strict, grid_points }
            }
            Sub::Omega { points, order } => Command::Omega { points, order },
            Sub::Zeroest { order, base, depth, degree } => Command::Zeroest { order, base: base.0, depth, degree },
            Sub::DistAudit { theta, kappa, i, j, k, d, eta, c, point } => Command::DistAudit { theta, kappa, i: i.0, j: j.0, k, d, eta, c, point },
            Sub::Bounds { m, n, literal_kappa, table } => Command::Bounds {
                m,
                n,
                literal_kappa,
                table: match table {
                    TableArg::Grid => BoundsTable::Grid,
                    TableArg::Corollary => BoundsTable::Corollary,
                    TableArg::Split => BoundsTable::Split,
                },
            },
            Sub::PhilAudit { theta, family, c1, c2, big_c, eta, d, infinitely_many, zero_distance_bound, starts } => {
                Command::PhilAudit { theta, family, c1, c2, big_c, eta, d, infinitely_many, zero_distance_bound, starts }
            }
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = ExperimentConfig {
        command: cli.cmd.into_command(),
        precision: cli.prec,
        budget: cli.budget,
        seed: cli.seed,
        exact: cli.exact,
        out: cli.out,
        cache_dir: cli.cache_dir,
        format: match cli.format {
            FormatArg::Jsonl => Format::Jsonl,
            FormatArg::Csv => Format::Csv,
        },
    };
    std::process::exit(torlab::lab::run(&cfg));
}
