//! Command-line front end. Every subcommand prints machine-readable records
//! (JSON lines or CSV) and maps its outcome to an exit code: 0 ok, 1 a
//! contract was refuted, 2 invalid input.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::kernels::{
    pick_certificate, search_pick_refutation, KernelSpec, PointSet, Verdict, DEFAULT_RADIUS,
};
use crate::multops::{
    counterexample_sweep, mult_matrix, row_from_column_report, scale_to_column_contraction,
    LeibnitzSetting, MultiplierTuple,
};
use crate::oracle::{
    cross_validate, max_entry_deviation, mult_matrix_raw, quad_monomial_norm, QuadratureConfig,
};
use crate::polyring::{monomials_up_to, parse_polynomial, Polynomial};
use crate::spaces::{bergman_part, RadialWeight, SpaceSpec, WeightConfig};
use crate::weakprod::{
    duality_check, hankel_build, hankel_intertwine_check, hankel_norm_lower, smirnov_verify,
    Factorization, SmirnovWitness, DEFAULT_R_SEQUENCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{0}")]
    Input(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Refuted,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => EXIT_OK,
            Outcome::Refuted => EXIT_REFUTED,
        }
    }

    fn from_refuted(refuted: bool) -> Self {
        if refuted {
            Outcome::Refuted
        } else {
            Outcome::Ok
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    JsonLines,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "besov-pick",
    version,
    about = "Finite-section checks for complete Pick and Besov spaces"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct CommonArgs {
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Slack allowed before a contract counts as refuted.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Output format; sweeps default to csv, everything else to json-lines.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write records here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Treat any negative sampled certificate as a refutation.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Omit the header line (which carries a timestamp).
    #[arg(long, global = true)]
    pub no_header: bool,
}

const DIRICHLET_TYPE: &str = r#"{"dim":1,"s":1.0,"weight":{"kind":"one"}}"#;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a polynomial in a space.
    Norm(NormArgs),
    /// Complete-Pick certificate for a kernel on sampled or given points.
    PickCheck(PickArgs),
    /// Row/column sweep for the unbounded-column family.
    Counterexample(CounterexampleArgs),
    /// Empirical row/column constant over random tuples.
    Rowcol(RowcolArgs),
    /// Empirical Leibnitz-type constant.
    Leibnitz(LeibnitzArgs),
    /// Truncated Hankel form: norm, intertwining and duality.
    Hankel(HankelArgs),
    /// Verify a Smirnov-type witness.
    Smirnov(SmirnovArgs),
    /// Cross-check closed forms against quadrature and sampling.
    Oracle(OracleArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm(_) => "norm",
            Command::PickCheck(_) => "pick-check",
            Command::Counterexample(_) => "counterexample",
            Command::Rowcol(_) => "rowcol",
            Command::Leibnitz(_) => "leibnitz",
            Command::Hankel(_) => "hankel",
            Command::Smirnov(_) => "smirnov",
            Command::Oracle(_) => "oracle",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Counterexample(_) => Format::Csv,
            _ => Format::JsonLines,
        }
    }

    fn config(&self) -> Value {
        let v = match self {
            Command::Norm(a) => serde_json::to_value(a),
            Command::PickCheck(a) => serde_json::to_value(a),
            Command::Counterexample(a) => serde_json::to_value(a),
            Command::Rowcol(a) => serde_json::to_value(a),
            Command::Leibnitz(a) => serde_json::to_value(a),
            Command::Hankel(a) => serde_json::to_value(a),
            Command::Smirnov(a) => serde_json::to_value(a),
            Command::Oracle(a) => serde_json::to_value(a),
        };
        v.expect("plain argument structs serialize")
    }
}

#[derive(Debug, Args, Serialize)]
pub struct NormArgs {
    /// Space as JSON, or @path to a JSON file.
    #[arg(long)]
    pub space: String,
    /// Polynomial expression or JSON term list.
    pub poly: String,
}

#[derive(Debug, Args, Serialize)]
pub struct PickArgs {
    /// Kernel as JSON (e.g. {"kind":"drury_arveson","dim":2}), or @path.
    #[arg(long)]
    pub kernel: String,
    /// Number of seeded random points.
    #[arg(long, default_value_t = 30)]
    pub count: usize,
    /// Explicit points as JSON `[[[re,im],...],...]`; overrides --count.
    #[arg(long)]
    pub points: Option<String>,
    /// Radius of the ball random points are drawn from.
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    /// Normalization point as JSON `[[re,im],...]`; defaults to the origin.
    #[arg(long)]
    pub z0: Option<String>,
    /// Number of random point sets to search for a refutation (0: no search).
    #[arg(long, default_value_t = 0)]
    pub search: usize,
    /// Largest point-set size used by the search.
    #[arg(long, default_value_t = 6)]
    pub max_points: usize,
    /// The search stops at an eigenvalue below -threshold.
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 20)]
    pub nmax: u32,
    /// Truncation degree; defaults to nmax + 1.
    #[arg(long)]
    pub degree: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct RowcolArgs {
    #[arg(long, default_value = DIRICHLET_TYPE)]
    pub space: String,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Tuple length.
    #[arg(long, default_value_t = 5)]
    pub len: usize,
    #[arg(long, default_value_t = 4)]
    pub poly_degree: u32,
    #[arg(long, default_value_t = 12)]
    pub degree: u32,
    /// Bound the empirical constant is compared against (default √18).
    #[arg(long)]
    pub bound: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct LeibnitzArgs {
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Integer order N of the source space.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    #[arg(long, default_value_t = 0)]
    pub j: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Weight as JSON (e.g. {"kind":"standard","a":1.0}); defaults to one.
    #[arg(long)]
    pub weight: Option<String>,
    /// Weight for the target levels; defaults to --weight.
    #[arg(long)]
    pub weight_tilde: Option<String>,
    /// Multipliers separated by ';'.
    #[arg(long, default_value = "1")]
    pub phis: String,
    /// Rescale the tuple to column norm one at this truncation first.
    #[arg(long)]
    pub normalize: Option<u32>,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 4)]
    pub poly_degree: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct HankelArgs {
    #[arg(long)]
    pub space: String,
    /// Symbol b.
    #[arg(long)]
    pub symbol: String,
    #[arg(long)]
    pub degree: u32,
    /// Multiplier for the intertwining check.
    #[arg(long)]
    pub phi: Option<String>,
    /// Inner degree for the intertwining check; defaults to D - deg φ.
    #[arg(long)]
    pub inner_degree: Option<u32>,
    /// Factor pair (f, g) for the duality check.
    #[arg(long, requires = "g")]
    pub f: Option<String>,
    #[arg(long, requires = "f")]
    pub g: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct SmirnovArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub phi: String,
    #[arg(long)]
    pub psi: String,
    #[arg(long, default_value_t = 15)]
    pub degree: u32,
    /// Comma-separated r values; defaults to 0.5,0.9,0.99.
    #[arg(long)]
    pub r: Option<String>,
    /// Number of seeded grid points for the pointwise residual.
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Weight as JSON; defaults to one.
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub max_degree: u32,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 64)]
    pub radial_nodes: usize,
    /// Largest acceptable Monte-Carlo z-score.
    #[arg(long, default_value_t = 3.0)]
    pub z_max: f64,
    /// Space for the matrix cross-check; defaults to Drury-Arveson.
    #[arg(long)]
    pub space: Option<String>,
    /// Multiplier for the matrix cross-check; defaults to a seeded random one.
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub degree: u32,
}

/// Record sink: JSON lines, or CSV with a fresh header row whenever the set
/// of columns changes.
struct Emitter {
    format: Format,
    out: Box<dyn Write>,
    seed: u64,
    config: Value,
    columns: Option<Vec<String>>,
}

impl Emitter {
    fn header(&mut self, command: &str, common: &CommonArgs) -> CliResult<()> {
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        match self.format {
            Format::JsonLines => {
                let h = json!({"header": {
                    "tool": "besov-pick",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": command,
                    "seed": common.seed,
                    "tol": common.tol,
                    "timestamp": ts,
                }});
                writeln!(self.out, "{h}")?;
            }
            Format::Csv => writeln!(
                self.out,
                "# besov-pick {} command={command} seed={} tol={} timestamp={ts}",
                env!("CARGO_PKG_VERSION"),
                common.seed,
                common.tol
            )?,
        }
        Ok(())
    }

    fn emit(&mut self, record: Value) -> CliResult<()> {
        let Value::Object(mut map) = record else {
            return Err(CliError::Input("record must be an object".into()));
        };
        map.insert("seed".into(), json!(self.seed));
        map.insert("config".into(), self.config.clone());
        match self.format {
            Format::JsonLines => writeln!(self.out, "{}", Value::Object(map))?,
            Format::Csv => self.emit_csv(map)?,
        }
        Ok(())
    }

    fn emit_csv(&mut self, map: Map<String, Value>) -> CliResult<()> {
        let keys: Vec<String> = map.keys().cloned().collect();
        let mut w = csv::WriterBuilder::new().from_writer(&mut self.out);
        if self.columns.as_ref() != Some(&keys) {
            w.write_record(&keys)?;
            self.columns = Some(keys);
        }
        w.write_record(map.values().map(|v| match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        }))?;
        w.flush()?;
        Ok(())
    }
}

fn read_arg(s: &str) -> CliResult<String> {
    match s.strip_prefix('@') {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
        }
        None => Ok(s.to_string()),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> CliResult<T> {
    let text = read_arg(s)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Lib(Error::Parse {
            line: e.line(),
            column: e.column(),
            message: format!("{what}: {e}"),
        })
    })
}

fn parse_space(s: &str) -> CliResult<SpaceSpec> {
    parse_json("space", s)
}

fn parse_weight(s: Option<&str>) -> CliResult<RadialWeight> {
    match s {
        None => Ok(RadialWeight::One),
        Some(s) => {
            let cfg: WeightConfig = parse_json("weight", s)?;
            Ok(RadialWeight::try_from(cfg)?)
        }
    }
}

fn parse_poly(s: &str, dim: usize) -> CliResult<Polynomial> {
    Ok(parse_polynomial(&read_arg(s)?, dim)?)
}

fn nonneg(x: f64) -> f64 {
    // JSON has no -0.0 worth printing.
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code;
/// errors are reported on stderr.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let common = &cli.common;
    if !(common.tol > 0.0) {
        return Err(CliError::Input(format!(
            "--tol must be positive, got {}",
            common.tol
        )));
    }
    let out: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let mut em = Emitter {
        format: common.format.unwrap_or(cli.command.default_format()),
        out,
        seed: common.seed,
        config: cli.command.config(),
        columns: None,
    };
    if !common.no_header {
        em.header(cli.command.name(), common)?;
    }
    let outcome = match &cli.command {
        Command::Norm(a) => cmd_norm(a, &mut em),
        Command::PickCheck(a) => cmd_pick_check(a, common, &mut em),
        Command::Counterexample(a) => cmd_counterexample(a, common, &mut em),
        Command::Rowcol(a) => cmd_rowcol(a, common, &mut em),
        Command::Leibnitz(a) => cmd_leibnitz(a, common, &mut em),
        Command::Hankel(a) => cmd_hankel(a, common, &mut em),
        Command::Smirnov(a) => cmd_smirnov(a, common, &mut em),
        Command::Oracle(a) => cmd_oracle(a, common, &mut em),
    }?;
    em.out.flush()?;
    Ok(outcome)
}

fn cmd_norm(a: &NormArgs, em: &mut Emitter) -> CliResult<Outcome> {
    let space = parse_space(&a.space)?;
    let p = parse_poly(&a.poly, space.dim())?;
    let norm = space.norm(&p)?;
    em.emit(json!({"space": space.label(), "poly": p.to_string(), "norm": norm}))?;
    Ok(Outcome::Ok)
}

fn cmd_pick_check(a: &PickArgs, common: &CommonArgs, em: &mut Emitter) -> CliResult<Outcome> {
    let kernel: KernelSpec = parse_json("kernel", &a.kernel)?;
    kernel.validate()?;
    let dim = kernel.dim();
    let z0: Vec<Complex64> = match &a.z0 {
        Some(s) => parse_json("z0", s)?,
        None => vec![Complex64::default(); dim],
    };
    let cert = if a.search > 0 {
        search_pick_refutation(
            &kernel,
            &z0,
            a.search,
            a.max_points,
            a.threshold,
            common.seed,
        )?
    } else {
        let pts = match &a.points {
            Some(s) => PointSet::new(dim, parse_json("points", s)?)?,
            None => PointSet::random(dim, a.count, a.radius, common.seed)?,
        };
        pick_certificate(&kernel, &pts, &z0)?
    };
    let refuted = cert.verdict == Verdict::Refuted || (common.strict && cert.min_eig < 0.0);
    let mut rec = json!({
        "kernel": cert.kernel,
        "n_points": cert.points.len(),
        "sets_tried": cert.sets_tried,
        "min_eig": nonneg(cert.min_eig),
        "verdict": cert.verdict,
    });
    if cert.verdict == Verdict::Refuted {
        rec["witness"] = json!(cert.points.points());
    }
    em.emit(rec)?;
    Ok(Outcome::from_refuted(refuted))
}

fn cmd_counterexample(
    a: &CounterexampleArgs,
    common: &CommonArgs,
    em: &mut Emitter,
) -> CliResult<Outcome> {
    if a.dim < 2 {
        return Err(CliError::Input(format!(
            "counterexample requires d >= 2, got d = {}",
            a.dim
        )));
    }
    let degree = a.degree.unwrap_or(a.nmax + 1);
    let rows = counterexample_sweep(a.dim, a.nmax, degree)?;
    let mut refuted = false;
    let mut partial_bound = 0.0;
    for r in &rows {
        partial_bound += 1.0 / (r.n as f64).powi(2);
        refuted |= r.row_upper_truncated.powi(2) > partial_bound + common.tol;
        em.emit(json!({
            "n": r.n,
            "D": degree,
            "column_sq_lower": r.column_sq_lower,
            "row_upper_truncated": r.row_upper_truncated,
        }))?;
    }
    let pi_sq_6 = std::f64::consts::PI.powi(2) / 6.0;
    let last = rows.last();
    let row = last.map_or(0.0, |r| r.row_upper_truncated);
    refuted |= row.powi(2) > pi_sq_6 + common.tol;
    em.emit(json!({
        "verdict": if refuted { "REFUTED" } else { "row-bounded" },
        "n_max": a.nmax,
        "column_sq_lower": last.map_or(0.0, |r| r.column_sq_lower),
        "row_sq": row.powi(2),
        "row_sq_bound": partial_bound,
        "pi_sq_over_6": pi_sq_6,
    }))?;
    Ok(Outcome::from_refuted(refuted))
}

fn cmd_rowcol(a: &RowcolArgs, common: &CommonArgs, em: &mut Emitter) -> CliResult<Outcome> {
    let space = parse_space(&a.space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let tuples: Vec<MultiplierTuple> = (0..a.count)
        .map(|_| MultiplierTuple::random(&mut rng, space.dim(), a.len, a.poly_degree))
        .collect();
    let report = row_from_column_report(&space, &space, &tuples, a.degree)?;
    let bound = a.bound.unwrap_or(18f64.sqrt());
    let refuted = report.empirical_c > bound + common.tol;
    em.emit(json!({
        "space": space.label(),
        "D": a.degree,
        "samples": report.ratios.len(),
        "empirical_c": report.empirical_c,
        "bound": bound,
        "verdict": if refuted { "REFUTED" } else { "within-bound" },
    }))?;
    Ok(Outcome::from_refuted(refuted))
}

fn cmd_leibnitz(a: &LeibnitzArgs, common: &CommonArgs, em: &mut Emitter) -> CliResult<Outcome> {
    let weight = parse_weight(a.weight.as_deref())?;
    let weight_tilde = match &a.weight_tilde {
        Some(s) => parse_weight(Some(s))?,
        None => weight.clone(),
    };
    let setting = LeibnitzSetting {
        dim: a.dim,
        order: a.order,
        weight,
        weight_tilde,
    };
    let phis = a
        .phis
        .split(';')
        .map(|s| parse_poly(s.trim(), a.dim))
        .collect::<CliResult<Vec<_>>>()?;
    let mut tuple = MultiplierTuple::new(a.dim, phis)?;
    if let Some(d) = a.normalize {
        let src = setting.src_level(a.order)?;
        tuple = scale_to_column_contraction(&src, &src, &tuple, d)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let samples: Vec<Polynomial> = (0..a.count)
        .map(|_| Polynomial::random(&mut rng, a.dim, a.poly_degree))
        .collect();
    let ratio = crate::multops::leibnitz_check(&setting, &tuple, a.j, a.k, &samples)?;
    em.emit(json!({
        "N": a.order,
        "j": a.j,
        "k": a.k,
        "samples": samples.len(),
        "ratio": ratio,
    }))?;
    Ok(Outcome::Ok)
}

fn cmd_hankel(a: &HankelArgs, common: &CommonArgs, em: &mut Emitter) -> CliResult<Outcome> {
    let space = parse_space(&a.space)?;
    let dim = space.dim();
    let b = parse_poly(&a.symbol, dim)?;
    let form = hankel_build(&space, &b, a.degree)?;
    let mut rec = json!({
        "space": space.label(),
        "symbol": b.to_string(),
        "D": a.degree,
        "hankel_norm_lower": hankel_norm_lower(&form),
    });
    let mut refuted = false;
    if let Some(s) = &a.phi {
        let phi = parse_poly(s, dim)?;
        let deg = phi.degree().max(0) as u32;
        let inner = match a.inner_degree {
            Some(d) => d,
            None => a.degree.checked_sub(deg).ok_or(Error::DegreeBudget {
                needed: deg as usize,
                available: a.degree as usize,
            })?,
        };
        let defect = hankel_intertwine_check(&form, &phi, inner)?;
        refuted |= defect > common.tol;
        rec["inner_degree"] = json!(inner);
        rec["intertwine_defect"] = json!(defect);
    }
    if let (Some(f), Some(g)) = (&a.f, &a.g) {
        let fact = Factorization::single(parse_poly(f, dim)?, parse_poly(g, dim)?)?;
        let slack = duality_check(&space, &fact, &b, a.degree)?;
        refuted |= slack < -common.tol;
        rec["duality_slack"] = json!(slack);
    }
    rec["verdict"] = json!(if refuted { "REFUTED" } else { "ok" });
    em.emit(rec)?;
    Ok(Outcome::from_refuted(refuted))
}

fn cmd_smirnov(a: &SmirnovArgs, common: &CommonArgs, em: &mut Emitter) -> CliResult<Outcome> {
    let space = parse_space(&a.space)?;
    let dim = space.dim();
    let mut w = SmirnovWitness::at_origin(
        space.clone(),
        parse_poly(&a.h, dim)?,
        parse_poly(&a.phi, dim)?,
        parse_poly(&a.psi, dim)?,
    );
    w.r_sequence = match &a.r {
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Input(format!("--r: `{t}`: {e}")))
            })
            .collect::<CliResult<Vec<_>>>()?,
        None => DEFAULT_R_SEQUENCE.to_vec(),
    };
    let grid = PointSet::random(dim, a.grid, DEFAULT_RADIUS, common.seed)?;
    let rec = smirnov_verify(&w, a.degree, &grid)?;
    let refuted = rec.refutes(common.tol);
    let (c, b) = rec.max_frac_bounds();
    em.emit(json!({
        "space": space.label(),
        "D": rec.degree,
        "residual": rec.residual,
        "pointwise_residual": rec.pointwise_residual,
        "psi_mult_lower": rec.psi_mult_lower,
        "frac_contraction_max": c,
        "frac_bounded_max": b,
        "frac_bounds": rec.frac_bounds,
        "verdict": if refuted { "REFUTED" } else { "ok" },
    }))?;
    Ok(Outcome::from_refuted(refuted))
}

/// Relative agreement required between quadrature and the closed form.
const QUAD_REL_TOL: f64 = 5e-3;
/// Entrywise agreement required between the two matrix constructions.
const MATRIX_TOL: f64 = 1e-11;

fn cmd_oracle(a: &OracleArgs, common: &CommonArgs, em: &mut Emitter) -> CliResult<Outcome> {
    let weight = parse_weight(a.weight.as_deref())?;
    let cfg = QuadratureConfig {
        n_samples: a.samples,
        seed: common.seed,
        radial_nodes: a.radial_nodes,
        ..QuadratureConfig::default()
    };
    let mut all_pass = true;
    let mut emit = |em: &mut Emitter,
                    check: String,
                    est: f64,
                    se: f64,
                    reference: f64,
                    score: f64,
                    limit: f64| {
        let pass = score <= limit;
        all_pass &= pass;
        em.emit(json!({
            "check": check,
            "estimate": est,
            "stderr": se,
            "reference": reference,
            "score": score,
            "limit": limit,
            "pass": pass,
        }))
    };
    for r in cross_validate(a.dim, &weight, a.max_degree, &cfg)? {
        emit(
            em,
            r.check,
            r.estimate,
            r.stderr,
            r.reference,
            r.z_score,
            a.z_max,
        )?;
    }
    for alpha in monomials_up_to(a.dim, a.max_degree) {
        let q = quad_monomial_norm(&weight, &alpha, a.radial_nodes)?;
        let c = bergman_part(&weight, &alpha)?;
        let rel = (q - c).abs() / c.abs();
        emit(
            em,
            format!("quad{:?}", alpha.exponents()),
            q,
            0.0,
            c,
            rel,
            QUAD_REL_TOL,
        )?;
    }
    let space = match &a.space {
        Some(s) => parse_space(s)?,
        None => SpaceSpec::drury_arveson(a.dim)?,
    };
    let phi = match &a.phi {
        Some(s) => parse_poly(s, space.dim())?,
        None => Polynomial::random(&mut ChaCha8Rng::seed_from_u64(common.seed), space.dim(), 2),
    };
    let raw = mult_matrix_raw(&space, &phi, a.degree)?;
    let fast = mult_matrix(&space, &space, &phi, a.degree)?.to_dense();
    let dev = max_entry_deviation(&raw, &fast);
    emit(em, "mult_matrix".into(), dev, 0.0, 0.0, dev, MATRIX_TOL)?;
    Ok(Outcome::from_refuted(!all_pass))
}
