//! Command-line front end: spec-file parsing, subcommand dispatch and
//! tab-separated reports.
//!
//! Exit codes: `0` success, `2` input validation error, `3` internal
//! consistency failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use nilhopf::coalgebra::{
    cobar_cohomology, conil_filtration, conil_filtration_annihilator, conil_intersection_check,
};
use nilhopf::comodule::{
    depth, iterated_tower, universal_property_fuzz, verify_conil_factorization, Factorization,
};
use nilhopf::exactlin::{format_rational, parse_rational, Matrix};
use nilhopf::hopfcore::{build_heisenberg_hopf, check_hopf_axioms, HopfReport};
use nilhopf::quadpresent::{
    build_quad_hopf, build_quad_hopf_with_embedding, graded_dims, preset, tn_tower, validate_quadratic,
    QuadraticData,
};
use nilhopf::{Error, Exec, GradedHopf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;

pub const DEFAULT_TRUNCATION: usize = 4;
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Fuzz samples per tower level in `check --suite universal`.
const FUZZ_SAMPLES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetName {
    Curve,
    Abelian,
}

impl PresetName {
    fn as_str(self) -> &'static str {
        match self {
            PresetName::Curve => "curve",
            PresetName::Abelian => "abelian",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Preset { name: PresetName, g: usize },
    Quadratic { d1: usize, d2: usize, cup: Matrix },
}

/// A validated input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub payload: Payload,
    pub truncation: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreset {
    name: PresetName,
    g: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<RawPreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cup: Option<Vec<Vec<String>>>,
    #[serde(default = "default_truncation")]
    truncation: usize,
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Parses and validates a spec file. JSON errors carry line and column;
/// cup entries are located as `cup[row][col]`, 1-based.
pub fn parse_spec(text: &str) -> nilhopf::Result<SpecFile> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let quadratic_fields = raw.d1.is_some() || raw.d2.is_some() || raw.cup.is_some();
    let payload = match raw.kind.as_str() {
        "preset" => {
            if quadratic_fields {
                return Err(invalid("preset spec must not carry d1, d2 or cup"));
            }
            let p = raw.preset.ok_or_else(|| invalid("preset spec is missing \"preset\""))?;
            Payload::Preset { name: p.name, g: p.g }
        }
        "quadratic" => {
            if raw.preset.is_some() {
                return Err(invalid("quadratic spec must not carry \"preset\""));
            }
            let (Some(d1), Some(d2), Some(rows)) = (raw.d1, raw.d2, raw.cup) else {
                return Err(invalid("quadratic spec needs d1, d2 and cup"));
            };
            Payload::Quadratic { d1, d2, cup: parse_cup(d1, d2, &rows)? }
        }
        other => return Err(invalid(format!("unknown kind {other:?}, expected \"preset\" or \"quadratic\""))),
    };
    let spec = SpecFile { payload, truncation: raw.truncation };
    validate_quadratic(&spec.quadratic()?)?;
    Ok(spec)
}

fn parse_cup(d1: usize, d2: usize, rows: &[Vec<String>]) -> nilhopf::Result<Matrix> {
    let cols = d1 * d1;
    if rows.len() != d2 {
        return Err(invalid(format!("cup has {} rows, expected d2 = {d2}", rows.len())));
    }
    let mut entries = Vec::with_capacity(d2 * cols);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(format!("cup row {} has {} entries, expected d1² = {cols}", r + 1, row.len())));
        }
        for (c, text) in row.iter().enumerate() {
            let q = parse_rational(text).map_err(|e| Error::Parse(format!("cup[{}][{}]: {e}", r + 1, c + 1)))?;
            entries.push(q);
        }
    }
    Matrix::new(d2, cols, entries)
}

impl SpecFile {
    pub fn quadratic(&self) -> nilhopf::Result<QuadraticData> {
        match &self.payload {
            Payload::Preset { name, g } => preset(name.as_str(), *g),
            Payload::Quadratic { d1, d2, cup } => QuadraticData::new(*d1, *d2, cup.clone()),
        }
    }

    /// Serializes back to the input syntax, rationals as strings.
    pub fn to_json(&self) -> String {
        let mut raw = RawSpec {
            kind: String::new(),
            preset: None,
            d1: None,
            d2: None,
            cup: None,
            truncation: self.truncation,
        };
        match &self.payload {
            Payload::Preset { name, g } => {
                raw.kind = "preset".into();
                raw.preset = Some(RawPreset { name: *name, g: *g });
            }
            Payload::Quadratic { d1, d2, cup } => {
                raw.kind = "quadratic".into();
                raw.d1 = Some(*d1);
                raw.d2 = Some(*d2);
                raw.cup = Some((0..cup.rows()).map(|r| cup.row(r).iter().map(format_rational).collect()).collect());
            }
        }
        serde_json::to_string(&raw).expect("spec serialization cannot fail")
    }
}

#[derive(Parser, Debug)]
#[command(name = "nilhopf", version, about = "Exact computations with nilpotent Hopf algebras and their comodule towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// JSON spec file
    spec: Option<PathBuf>,
    /// Weight truncation N (overrides the spec file)
    #[arg(long)]
    truncation: Option<usize>,
    /// Seed for randomized suites
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graded dimensions of H(V,J)
    Dims(Common),
    /// Dimensions and depths of the iterated universal extensions E_n
    Tower(Common),
    /// Conilpotency filtration dimensions by both algorithms
    Conil(Common),
    /// Per-weight cobar cohomology dimensions
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: u8,
    },
    /// Run a property suite
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Compare graded conilpotency dims with H(V,J) built from the same quadratic data
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        against: Oracle,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Hopf,
    Closure,
    Tower,
    Universal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Oracle {
    Heisenberg,
}

enum Failure {
    Input(String),
    Consistency(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_consistency_failure() {
            Failure::Consistency(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

/// Runs one invocation. `args` includes the program name. The report goes
/// to `out`, diagnostics to `err`; the return value is the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let (report, code) = match dispatch(&cli.command) {
        Ok(report) => (report, EXIT_OK),
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INPUT;
        }
        Err(Failure::Consistency(msg)) => {
            let _ = writeln!(err, "consistency failure: {msg}");
            (String::new(), EXIT_CONSISTENCY)
        }
    };
    if out.write_all(report.as_bytes()).is_err() {
        return EXIT_INPUT;
    }
    code
}

fn load(common: &Common) -> Result<(QuadraticData, usize), Failure> {
    let path = common
        .spec
        .as_ref()
        .ok_or_else(|| Failure::Input("a spec file is required for this command".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let spec = parse_spec(&text)?;
    let n = common.truncation.unwrap_or(spec.truncation);
    Ok((spec.quadratic()?, n))
}

fn quad_hopf(q: &QuadraticData, n: usize) -> nilhopf::Result<GradedHopf> {
    build_quad_hopf(&tn_tower(q, n)?, n)
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join("\t");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join("\t"));
        s.push('\n');
    }
    s
}

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Dims(c) => {
            let (q, n) = load(c)?;
            let dims = tn_tower(&q, n)?.dims();
            Ok(table(&["weight", "dim"], dims.iter().enumerate().map(|(w, d)| vec![w.to_string(), d.to_string()])))
        }
        Command::Tower(c) => {
            let (q, n) = load(c)?;
            let h = Arc::new(quad_hopf(&q, n)?);
            let tower = iterated_tower(h, n.max(1))?;
            let mut rows = Vec::new();
            for (k, level) in tower.levels().iter().enumerate() {
                rows.push(vec![(k + 1).to_string(), level.module.dim().to_string(), depth(&level.module)?.to_string()]);
            }
            Ok(table(&["level", "dim", "depth"], rows))
        }
        Command::Conil(c) => {
            let (q, n) = load(c)?;
            let h = quad_hopf(&q, n)?;
            let kernel = conil_filtration(&h, n).dims();
            let annihilator = conil_filtration_annihilator(&h, n).dims();
            if kernel != annihilator {
                return Err(Failure::Consistency(format!(
                    "conilpotency algorithms disagree: {kernel:?} vs {annihilator:?}"
                )));
            }
            let rows = kernel.iter().zip(&annihilator).enumerate();
            Ok(table(
                &["level", "kernel", "annihilator"],
                rows.map(|(l, (a, b))| vec![l.to_string(), a.to_string(), b.to_string()]),
            ))
        }
        Command::Cohomology { common, degree } => {
            let (q, n) = load(common)?;
            let report = cobar_cohomology(&quad_hopf(&q, n)?, *degree as usize, n)?;
            let rows = report.dims().into_iter().enumerate();
            Ok(table(&["weight", "dim"], rows.map(|(w, d)| vec![w.to_string(), d.to_string()])))
        }
        Command::Check { common, suite } => {
            let (q, n) = load(common)?;
            let detail = match suite {
                Suite::Hopf => suite_hopf(&q, n)?,
                Suite::Closure => suite_closure(&q, n)?,
                Suite::Tower => suite_tower(&q, n)?,
                Suite::Universal => suite_universal(&q, n, common.seed)?,
            };
            let name = format!("{suite:?}").to_lowercase();
            Ok(table(&["suite", "status", "detail"], [vec![name, "pass".into(), detail]]))
        }
        Command::Compare { common, against: Oracle::Heisenberg } => {
            let n = common.truncation.unwrap_or(DEFAULT_TRUNCATION);
            compare_heisenberg(n)
        }
    }
}

fn suite_hopf(q: &QuadraticData, n: usize) -> Outcome {
    match check_hopf_axioms(&quad_hopf(q, n)?) {
        HopfReport::Pass { checks } => Ok(format!("{checks} axiom checks")),
        HopfReport::Fail(f) => Err(Failure::Consistency(format!(
            "{} fails at weight {} on {}",
            f.axiom,
            f.weight,
            f.witness.join(", ")
        ))),
    }
}

fn suite_closure(q: &QuadraticData, n: usize) -> Outcome {
    let built = build_quad_hopf_with_embedding(&tn_tower(q, n)?, n)?;
    let levels = conil_intersection_check(&built.hopf, &built.ambient, &built.embedding, n)?;
    if let Some(bad) = levels.iter().find(|l| !l.equal) {
        return Err(Failure::Consistency(format!(
            "C_{} differs from the intersection ({} vs {})",
            bad.level, bad.pushed_dim, bad.intersection_dim
        )));
    }
    Ok(format!("closed through weight {n}; C_n = C_n(H(V)) ∩ H(V,J) for n ≤ {n}"))
}

fn suite_tower(q: &QuadraticData, n: usize) -> Outcome {
    let h = Arc::new(quad_hopf(q, n)?);
    let c = conil_filtration(&h, n);
    let height = n.max(1);
    let tower = iterated_tower(h, height)?;
    for k in 1..=height {
        let e = &tower.level(k)?.module;
        let expected = c.dims()[k - 1];
        if e.dim() != expected {
            return Err(Failure::Consistency(format!("dim E_{k} = {} but dim C_{} = {expected}", e.dim(), k - 1)));
        }
        let dep = depth(e)?;
        if dep != k {
            return Err(Failure::Consistency(format!("depth E_{k} = {dep}")));
        }
        if let Factorization::Witness { row, col } = verify_conil_factorization(e, &c, k)? {
            return Err(Failure::Consistency(format!("E_{k} coefficient ({row},{col}) escapes C_{}", k - 1)));
        }
    }
    Ok(format!("dims {:?}, depth E_n = n", tower.dims()))
}

fn suite_universal(q: &QuadraticData, n: usize, seed: u64) -> Outcome {
    let height = n.clamp(1, 3);
    let tower = iterated_tower(Arc::new(quad_hopf(q, n)?), height)?;
    for k in 1..=height {
        let outcomes = universal_property_fuzz(&tower, k, FUZZ_SAMPLES, seed, Exec::default())?;
        if let Some(bad) = outcomes.iter().find(|o| !o.unique) {
            return Err(Failure::Consistency(format!(
                "E_{k}: sample seed {} (dim {}, depth {}) has no unique pointed morphism",
                bad.seed, bad.dim, bad.depth
            )));
        }
    }
    Ok(format!("{FUZZ_SAMPLES} samples per level n ≤ {height}, all unique"))
}

fn compare_heisenberg(n: usize) -> Outcome {
    let h = build_heisenberg_hopf(n);
    let levels = conil_filtration(&h, n).dims();
    let graded: Vec<usize> = (0..=n).map(|w| levels[w] - if w == 0 { 0 } else { levels[w - 1] }).collect();
    let (q, _) = QuadraticData::from_hopf(&h)?;
    let approx = graded_dims(&quad_hopf(&q, n)?);
    let first = (0..=n).find(|&w| graded[w] != approx[w]);
    let mut s = table(
        &["weight", "heisenberg", "quadratic", "diverges"],
        (0..=n).map(|w| {
            let flag = match first {
                Some(f) if f == w => "first",
                _ if graded[w] != approx[w] => "yes",
                _ => "no",
            };
            vec![w.to_string(), graded[w].to_string(), approx[w].to_string(), flag.into()]
        }),
    );
    match first {
        Some(w) => writeln!(s, "# first divergence at weight {w}"),
        None => writeln!(s, "# no divergence through weight {n}"),
    }
    .expect("writing to a String cannot fail");
    Ok(s)
}
