//! Command-line front end: argument parsing, the end-to-end pipeline and its
//! report.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::{
    check_fuchs_indices, expand_laurent, indicial_polynomial, ode_residual, FuchsReport, LaurentSeries, OdeInstance,
    DEFAULT_DEPTH,
};
use crate::residues::{enumerate_conditions, match_elliptic_families, EllipticFamily, ResidueCondition};
use crate::solutions::{
    build_closed_form, classify_family, e0_cubic, s3a_instance, s3b_instance, BuildOptions, BuiltSolution, Classification,
    Family, FamilyParams, VerifyConfig,
};
use crate::subeq::{fit_subequation, FitReport, FitStatus, DEFAULT_EXTRA_ORDERS};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "SUBEQ_LAB_LOG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "subeq-lab", version, about = "Meromorphic solutions of c0 u''' + 6u^4 + c1 u'' + c2 u u' + c4 u' + c5 u^2 + c6 u + c7 = 0")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; `text` applies to `pipeline`, other commands always emit JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// The instance, from a JSON file and/or flags. Flags win.
#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// JSON file (`-` for stdin): an instance `{"a": "1", "c5": "-16", ...}`
    /// or a config `{"ode": {...}, "depth": 24, ...}`.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Residue `a` (so `c0 = a^3`), an element of Q(w) such as `2`, `1/2`, `1+w`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c4: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c5: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c6: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c7: Option<String>,
    /// Build the elliptic instance with parameter k1 and root e0 (c6 derived).
    #[arg(long, allow_hyphen_values = true, requires = "e0", conflicts_with = "k5sq")]
    pub k1: Option<String>,
    /// Build the binomial elliptic instance with k5^2 and root e0 (c6 derived).
    #[arg(long, allow_hyphen_values = true, requires = "e0")]
    pub k5sq: Option<String>,
    /// Exact root e0 of the family's cubic, used when building closed forms.
    #[arg(long, allow_hyphen_values = true)]
    pub e0: Option<String>,
}

/// Options of the solving and verification stages.
#[derive(Args, Debug, Clone, Default)]
pub struct SolveArgs {
    /// Centre of the solution, e.g. `0.1+0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Laurent series of the three branches at a movable pole.
    Expand {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        depth: Option<usize>,
        /// Only branch 0, 1 or 2 (residue a, w a, w^2 a).
        #[arg(long)]
        branch: Option<usize>,
    },
    /// Indicial polynomial and Fuchs indices.
    Indices {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Residue-sum conditions for elliptic solutions.
    ResidueConditions {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Fit a first-order subequation of the given degree.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        degree: u32,
        #[arg(long, value_delimiter = ',')]
        branches: Option<Vec<usize>>,
        #[arg(long)]
        extra_orders: Option<u32>,
    },
    /// Match the coefficients against the solution families.
    Classify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Build and verify the closed-form solution.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Verify the closed-form solution and report only the verification.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Run every stage and emit one report.
    Pipeline {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u32>>,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        nmax: Option<u32>,
    },
}

fn default_depth() -> usize {
    DEFAULT_DEPTH
}
fn default_degrees() -> Vec<u32> {
    vec![1, 2, 3]
}
fn default_kmax() -> u32 {
    4
}
fn default_nmax() -> u32 {
    10
}
fn default_tol() -> f64 {
    1e-9
}
fn default_points() -> usize {
    20
}
fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub ode: OdeInstance,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_degrees")]
    pub degrees: Vec<u32>,
    #[serde(default = "default_kmax")]
    pub kmax: u32,
    #[serde(default = "default_nmax")]
    pub nmax: u32,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e0: Option<CycloNumber>,
    #[serde(default)]
    pub z0: [f64; 2],
}

impl PipelineConfig {
    pub fn new(ode: OdeInstance) -> Self {
        PipelineConfig {
            ode,
            depth: default_depth(),
            degrees: default_degrees(),
            kmax: default_kmax(),
            nmax: default_nmax(),
            tol: default_tol(),
            points: default_points(),
            seed: default_seed(),
            e0: None,
            z0: [0.0, 0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.degrees.iter().find(|d| !(1..=3).contains(*d)) {
            return Err(Error::UnsupportedDegree(*d as usize));
        }
        let need = 2 * self.degrees.iter().copied().max().unwrap_or(0) as usize + 10;
        if self.depth < need {
            return Err(Error::InvalidArgument(format!("depth {} is below 2 max(degrees) + 10 = {need}", self.depth)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.points == 0 {
            return Err(Error::InvalidArgument("points must be at least 1".into()));
        }
        if self.kmax < 1 || self.nmax < 1 {
            return Err(Error::InvalidArgument("kmax and nmax must be at least 1".into()));
        }
        if let Some(e0) = &self.e0 {
            for cubic in classify_family(&self.ode).matches.iter().filter_map(e0_cubic) {
                if !num_traits::Zero::is_zero(&cubic.eval(e0)) {
                    return Err(Error::InvalidArgument(format!("e0 = {e0} is not a root of {cubic}")));
                }
            }
        }
        Ok(())
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { points: self.points, seed: self.seed, tolerance: self.tol, ..VerifyConfig::default() }
    }

    pub fn build_options(&self) -> BuildOptions {
        BuildOptions { e0: self.e0.clone(), z0: Complex64::new(self.z0[0], self.z0[1]), numeric_fallback: true }
    }
}

fn parse_exact(name: &str, s: &str) -> Result<CycloNumber> {
    s.parse::<CycloNumber>()
        .map_err(|e| Error::InvalidArgument(format!("--{name}: {e}")))
}

fn parse_z0(s: &str) -> Result<[f64; 2]> {
    let z: Complex64 = s
        .replace(' ', "")
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("--z0: cannot parse {s:?} as a complex number")))?;
    Ok([z.re, z.im])
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Assemble and validate the configuration from the input file and flags.
pub fn parse_input(input: &InputArgs, solve: &SolveArgs) -> Result<PipelineConfig> {
    let json_err = |e: serde_json::Error| {
        let msg = e.to_string();
        Error::InvalidArgument(msg.strip_prefix("invalid argument: ").unwrap_or(&msg).to_string())
    };
    let from_file = input.json.as_ref().map(read_json).transpose()?;
    let mut cfg = match from_file {
        Some(v) if v.get("ode").is_some() => serde_json::from_value::<PipelineConfig>(v).map_err(json_err)?,
        Some(mut v) => {
            if let Some(obj) = v.as_object_mut() {
                overlay_flags(obj, input);
            }
            PipelineConfig::new(serde_json::from_value::<OdeInstance>(v).map_err(json_err)?)
        }
        None => {
            let mut obj = serde_json::Map::new();
            overlay_flags(&mut obj, input);
            if !obj.contains_key("a") {
                return Err(Error::InvalidArgument("missing residue a (use --a or --json)".into()));
            }
            PipelineConfig::new(serde_json::from_value::<OdeInstance>(Value::Object(obj)).map_err(json_err)?)
        }
    };
    if input.json.is_some() && cfg_has_ode_flags(input) {
        // a config file with an "ode" object: flags still win
        let mut obj = serde_json::to_value(&cfg.ode).map_err(json_err)?;
        overlay_flags(obj.as_object_mut().expect("object"), input);
        cfg.ode = serde_json::from_value(obj).map_err(json_err)?;
    }
    if let Some(e0) = &input.e0 {
        cfg.e0 = Some(parse_exact("e0", e0)?);
    }
    let e0 = cfg.e0.clone();
    if let (Some(k1), Some(e0)) = (&input.k1, &e0) {
        let k1 = parse_exact("k1", k1)?;
        let k6 = -(e0.pow(3) + CycloNumber::from_int(20) * k1.pow(3));
        cfg.ode = s3a_instance(&cfg.ode.a, &k1, &k6)?;
    }
    if let (Some(k5sq), Some(e0)) = (&input.k5sq, &e0) {
        let k5sq = parse_exact("k5sq", k5sq)?;
        let k6 = CycloNumber::from_int(3) * k5sq.clone() * e0.clone() - e0.pow(3);
        cfg.ode = s3b_instance(&cfg.ode.a, &k5sq, &k6)?;
    }
    if let Some(z0) = &solve.z0 {
        cfg.z0 = parse_z0(z0)?;
    }
    if let Some(t) = solve.tol {
        cfg.tol = t;
    }
    if let Some(p) = solve.points {
        cfg.points = p;
    }
    if let Some(s) = solve.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn cfg_has_ode_flags(input: &InputArgs) -> bool {
    [&input.a, &input.c1, &input.c2, &input.c4, &input.c5, &input.c6, &input.c7].iter().any(|f| f.is_some())
}

fn overlay_flags(obj: &mut serde_json::Map<String, Value>, input: &InputArgs) {
    let flags = [
        ("a", &input.a),
        ("c1", &input.c1),
        ("c2", &input.c2),
        ("c4", &input.c4),
        ("c5", &input.c5),
        ("c6", &input.c6),
        ("c7", &input.c7),
    ];
    for (name, v) in flags {
        if let Some(v) = v {
            obj.insert(name.into(), Value::String(v.clone()));
        }
    }
}

/// One Laurent branch as reported.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchSummary {
    pub branch: usize,
    pub residue: CycloNumber,
    pub u0: CycloNumber,
    pub series: LaurentSeries,
    /// Every guaranteed coefficient of the ODE residual is zero.
    pub residual_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicialReport {
    pub polynomial: String,
    /// Monic coefficients, constant term first.
    pub coefficients: Vec<CycloNumber>,
    pub fuchs: FuchsReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub kmax: u32,
    pub nmax: u32,
    /// Nonvanishing residue sums in `(k, n)` order.
    pub violated: Vec<ResidueCondition>,
    pub elliptic_family: EllipticFamily,
}

/// Result of trying one family's closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveAttempt {
    pub family: Family,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: u32,
    pub instance: OdeInstance,
    pub classification: Classification,
    pub solution: Option<BuiltSolution>,
    pub attempts: Vec<SolveAttempt>,
    pub notes: Vec<String>,
}

impl SolveReport {
    pub fn passed(&self) -> bool {
        self.solution.as_ref().is_none_or(|s| s.verification.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema: u32,
    pub config: PipelineConfig,
    pub c0: CycloNumber,
    pub laurent: Vec<BranchSummary>,
    pub indicial: Option<IndicialReport>,
    pub residue_conditions: Option<ResidueReport>,
    pub fits: Vec<FitReport>,
    pub classification: Classification,
    pub solution: Option<BuiltSolution>,
    pub attempts: Vec<SolveAttempt>,
    pub stage_errors: Vec<StageError>,
    pub status: Status,
    pub notes: Vec<String>,
}

impl PipelineReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => EXIT_OK,
            Status::VerificationFailed => EXIT_VERIFICATION_FAILED,
        }
    }
}

pub fn branch_summaries(ode: &OdeInstance, depth: usize, only: Option<usize>) -> Result<Vec<BranchSummary>> {
    let residues = ode.residues();
    let mut out = Vec::new();
    for (i, r) in residues.iter().enumerate() {
        if only.is_some_and(|b| b != i) {
            continue;
        }
        let series = expand_laurent(ode, r, depth)?;
        let residual_vanishes = ode_residual(&series, ode)?.is_zero();
        out.push(BranchSummary { branch: i, residue: r.clone(), u0: series.coeff(0)?, series, residual_vanishes });
    }
    Ok(out)
}

pub fn indicial_report(ode: &OdeInstance) -> Result<IndicialReport> {
    let p = indicial_polynomial(ode, &ode.a)?;
    for r in &ode.residues()[1..] {
        debug_assert_eq!(indicial_polynomial(ode, r)?, p);
    }
    let fuchs = check_fuchs_indices(&p);
    Ok(IndicialReport { polynomial: p.to_string(), coefficients: p.coeffs().to_vec(), fuchs })
}

pub fn residue_report(ode: &OdeInstance, kmax: u32, nmax: u32) -> Result<ResidueReport> {
    Ok(ResidueReport {
        kmax,
        nmax,
        violated: enumerate_conditions(ode, kmax, nmax)?,
        elliptic_family: match_elliptic_families(ode),
    })
}

/// Try the matching families in precedence order and keep the first closed
/// form that verifies; fits already computed are reused.
pub fn solve(cfg: &PipelineConfig, fits: &[FitReport]) -> SolveReport {
    let ode = &cfg.ode;
    let classification = classify_family(ode);
    let mut attempts = Vec::new();
    let mut notes = Vec::new();
    let mut first_failed: Option<BuiltSolution> = None;
    let mut solution = None;
    for params in &classification.matches {
        let family = params.family();
        let m = family.degree();
        let fit = match fits.iter().find(|f| f.degree == m) {
            Some(f) => Some(f.clone()),
            None => fit_subequation(ode, m, None, DEFAULT_EXTRA_ORDERS).ok(),
        };
        if fit.as_ref().is_some_and(|f| f.status != FitStatus::Fitted) {
            notes.push(format!("{family}: degree-{m} fit not available, verifying against the ODE only"));
        }
        match build_closed_form(ode, params, fit.as_ref(), &cfg.build_options(), &cfg.verify_config()) {
            Ok(built) => {
                attempts.push(SolveAttempt { family, passed: built.verification.passed, error: None });
                if built.verification.passed {
                    solution = Some(built);
                    break;
                }
                first_failed.get_or_insert(built);
            }
            Err(e) => attempts.push(SolveAttempt { family, passed: false, error: Some(e.to_string()) }),
        }
    }
    if solution.is_none() {
        solution = first_failed;
    }
    if classification.family.is_none() {
        notes.push("no meromorphic solution family matched".into());
    } else if solution.is_none() {
        notes.push("no closed form could be built".into());
    }
    SolveReport { schema: SCHEMA, instance: ode.clone(), classification, solution, attempts, notes }
}

/// Every stage in order; a failing stage is recorded and the rest still run.
pub fn run_pipeline(cfg: &PipelineConfig) -> PipelineReport {
    let ode = &cfg.ode;
    let mut stage_errors = Vec::new();
    let mut record = |stage: &str, e: Error| {
        log::warn!("{stage}: {e}");
        stage_errors.push(StageError { stage: stage.into(), message: e.to_string() });
    };
    let laurent = branch_summaries(ode, cfg.depth, None).unwrap_or_else(|e| {
        record("expand", e);
        Vec::new()
    });
    let indicial = indicial_report(ode).map_err(|e| record("indices", e)).ok();
    let residue_conditions = residue_report(ode, cfg.kmax, cfg.nmax).map_err(|e| record("residue-conditions", e)).ok();
    let mut fits = Vec::new();
    for &m in &cfg.degrees {
        match fit_subequation(ode, m, None, DEFAULT_EXTRA_ORDERS) {
            Ok(f) => fits.push(f),
            Err(e) => record(&format!("fit degree {m}"), e),
        }
    }
    let solved = solve(cfg, &fits);
    let status = if solved.passed() { Status::Ok } else { Status::VerificationFailed };
    PipelineReport {
        schema: SCHEMA,
        config: cfg.clone(),
        c0: ode.c0(),
        laurent,
        indicial,
        residue_conditions,
        fits,
        classification: solved.classification,
        solution: solved.solution,
        attempts: solved.attempts,
        stage_errors,
        status,
        notes: solved.notes,
    }
}

fn params_text(p: &FamilyParams) -> String {
    match p {
        FamilyParams::S3a { k1, k6 } => format!("k1 = {k1}, k6 = {k6}"),
        FamilyParams::S3b { k5_squared, k6 } => format!("k5^2 = {k5_squared}, k6 = {k6}"),
        FamilyParams::S2A { k1, b_squared } => format!("k1 = {k1}, b^2 = {b_squared}"),
        FamilyParams::S2B { b } => format!("b = {b}"),
        FamilyParams::S1 { b1, b0 } => format!("b1 = {b1}, b0 = {b0}"),
    }
}

fn residual_text(x: Option<f64>) -> String {
    x.map_or("n/a".into(), |v| format!("{v:.3e}"))
}

/// Human-readable summary with exact coefficient strings.
pub fn report_text(r: &PipelineReport) -> String {
    let mut s = String::new();
    let o = &r.config.ode;
    let _ = writeln!(
        s,
        "instance: a = {}, c1 = {}, c2 = {}, c4 = {}, c5 = {}, c6 = {}, c7 = {} (c0 = {})",
        o.a, o.c1, o.c2, o.c4, o.c5, o.c6, o.c7, r.c0
    );
    if let Some(ind) = &r.indicial {
        let _ = writeln!(s, "indicial: {} ; integer roots {:?}", ind.polynomial, ind.fuchs.integer_roots);
    }
    for b in &r.laurent {
        let _ = writeln!(
            s,
            "branch {}: residue {}, u0 = {}, residual {}",
            b.branch,
            b.residue,
            b.u0,
            if b.residual_vanishes { "vanishes" } else { "NONZERO" }
        );
    }
    if let Some(rc) = &r.residue_conditions {
        match rc.violated.first() {
            None => {
                let _ = writeln!(s, "residue conditions (k <= {}, n <= {}): all vanish", rc.kmax, rc.nmax);
            }
            Some(c) => {
                let _ = writeln!(
                    s,
                    "residue conditions (k <= {}, n <= {}): {} violated, first (k={}, n={}) = {}",
                    rc.kmax,
                    rc.nmax,
                    rc.violated.len(),
                    c.k,
                    c.n,
                    c.value
                );
            }
        }
    }
    for f in &r.fits {
        let status = serde_json::to_value(f.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        match &f.subequation {
            Some(sub) if f.status == FitStatus::Fitted => {
                let _ = writeln!(s, "fit degree {}: {status}: {}", f.degree, sub.normalized());
            }
            _ => {
                let _ = writeln!(s, "fit degree {}: {status}", f.degree);
            }
        }
    }
    match &r.classification.family {
        Some(fam) => {
            let _ = writeln!(s, "family: {fam}");
            if let Some(p) = r.classification.matches.first() {
                let _ = writeln!(s, "  {}", params_text(p));
            }
            for p in r.classification.matches.iter().skip(1) {
                let _ = writeln!(s, "  also {}: {}", p.family(), params_text(p));
            }
        }
        None => {
            let _ = writeln!(s, "family: none");
        }
    }
    if let Some(sol) = &r.solution {
        let v = &sol.verification;
        let _ = writeln!(s, "solution: {} {} ({})", sol.family, sol.form.name(), sol.choice);
        let _ = writeln!(
            s,
            "verification: {} (max relative ODE residual {}, subequation {}, tol {:e})",
            if v.passed { "passed" } else { "FAILED" },
            residual_text(v.max_rel_ode_residual),
            residual_text(v.max_rel_subeq_residual),
            v.tolerance
        );
    }
    for e in &r.stage_errors {
        let _ = writeln!(s, "error in {}: {}", e.stage, e.message);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

/// Serialize a report: pretty JSON, or the text summary.
pub fn emit_report(r: &PipelineReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Text => report_text(r),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn with_schema(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("schema".into(), SCHEMA.into());
    }
    v
}

/// Exit code for an error: bad input is 2, anything else 1.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidArgument(_) | Error::UnsupportedDegree(_) | Error::InvalidResidue { .. } => {
            EXIT_INPUT_ERROR
        }
        _ => EXIT_VERIFICATION_FAILED,
    }
}

/// Output of one command invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => {
            log::error!("{e}");
            let code = exit_code_for(&e);
            let body = serde_json::json!({ "schema": SCHEMA, "error": { "message": e.to_string(), "exit_code": code } });
            Outcome { stdout: to_json(&body), exit_code: code }
        }
    }
}

fn json_outcome(v: Value, exit_code: i32) -> Outcome {
    Outcome { stdout: to_json(&with_schema(v)), exit_code }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let none = SolveArgs::default();
    let (input, solve_args) = match &cli.command {
        Command::Solve { input, solve } | Command::Verify { input, solve } | Command::Pipeline { input, solve, .. } => {
            (input, solve)
        }
        Command::Expand { input, .. }
        | Command::Indices { input }
        | Command::ResidueConditions { input, .. }
        | Command::Fit { input, .. }
        | Command::Classify { input } => (input, &none),
    };
    let mut cfg = parse_input(input, solve_args)?;
    match &cli.command {
        Command::Expand { depth, branch, .. } => {
            if branch.is_some_and(|b| b > 2) {
                return Err(Error::InvalidArgument("branch must be 0, 1 or 2".into()));
            }
            let depth = depth.unwrap_or(cfg.depth);
            let branches = branch_summaries(&cfg.ode, depth, *branch)?;
            let v = serde_json::json!({
                "instance": cfg.ode, "c0": cfg.ode.c0(), "depth": depth, "branches": branches,
            });
            Ok(json_outcome(v, EXIT_OK))
        }
        Command::Indices { .. } => Ok(json_outcome(to_value(&indicial_report(&cfg.ode)?), EXIT_OK)),
        Command::ResidueConditions { kmax, nmax, .. } => {
            let r = residue_report(&cfg.ode, kmax.unwrap_or(cfg.kmax), nmax.unwrap_or(cfg.nmax))?;
            Ok(json_outcome(to_value(&r), EXIT_OK))
        }
        Command::Fit { degree, branches, extra_orders, .. } => {
            let r = fit_subequation(&cfg.ode, *degree, branches.as_deref(), extra_orders.unwrap_or(DEFAULT_EXTRA_ORDERS))?;
            Ok(json_outcome(to_value(&r), EXIT_OK))
        }
        Command::Classify { .. } => Ok(json_outcome(to_value(&classify_family(&cfg.ode)), EXIT_OK)),
        Command::Solve { .. } => {
            cfg.validate()?;
            let r = solve(&cfg, &[]);
            let code = if r.passed() { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
            Ok(Outcome { stdout: to_json(&r), exit_code: code })
        }
        Command::Verify { .. } => {
            cfg.validate()?;
            let r = solve(&cfg, &[]);
            let code = if r.passed() { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
            let v = serde_json::json!({
                "family": r.classification.family,
                "choice": r.solution.as_ref().map(|s| s.choice.clone()),
                "verification": r.solution.as_ref().map(|s| s.verification.clone()),
                "notes": r.notes,
            });
            Ok(json_outcome(v, code))
        }
        Command::Pipeline { depth, degrees, kmax, nmax, .. } => {
            if let Some(d) = depth {
                cfg.depth = *d;
            }
            if let Some(d) = degrees {
                cfg.degrees = d.clone();
            }
            if let Some(k) = kmax {
                cfg.kmax = *k;
            }
            if let Some(n) = nmax {
                cfg.nmax = *n;
            }
            cfg.validate()?;
            let r = run_pipeline(&cfg);
            Ok(Outcome { stdout: emit_report(&r, cli.format), exit_code: r.exit_code() })
        }
    }
}

/// Entry point of the binary: logging from `SUBEQ_LAB_LOG`, then [`run`].
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = run(&cli);
    println!("{}", out.stdout);
    out.exit_code
}
