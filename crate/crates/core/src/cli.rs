//! Command-line front end.
//!
//! Exit codes: 0 when every check passes or is skipped, 1 on a mismatch or a
//! failed postcondition, 2 on usage and parse errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{format_matrix, format_vector, parse_matrix, parse_vector, FormSpace, LinalgError, TextError};
use crate::oracle::{
    check_hermitian_skew_split, check_skew_solution_sets, verify_all_with, EnumerationBudget, Section,
    VerifyOptions,
};
use crate::orders::{principal_branch, principal_structure, CountReport, PrincipalReport};
use crate::ring::{
    make_ring_with_budget, Ring, RingError, RingSpec, RingStats, SpecBuilder, DEFAULT_ELEMENT_BUDGET,
    EXHAUSTIVE_VALIDATION_LIMIT,
};
use crate::sample::random_unitary;
use crate::symplectic::{lift_unitary_via, symplectic_basis, transport, SymplecticError};

#[derive(Debug, Parser)]
#[command(name = "local-unitary", version, about = "Unitary groups of skew-hermitian forms over finite local rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ring cardinalities, axiom checks and the principal-radical analysis
    Ring {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Group orders from every closed form
    Order {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Also report kernel and image of reduction modulo this radical power
        #[arg(long)]
        j: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Basis-vector, symplectic-pair and stabilizer counts
    Count {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Symplectic basis of the form with the given Gram matrix
    Basis {
        #[command(flatten)]
        ring: RingArgs,
        /// File holding the Gram matrix (entries `c0|c1`, rows separated by `;` or newlines)
        #[arg(long)]
        gram: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lift a unitary matrix over the quotient by a radical power
    Lift {
        #[command(flatten)]
        ring: RingArgs,
        /// Radical power of the quotient
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// File holding the matrix over the quotient
        #[arg(long, conflicts_with = "random")]
        matrix: Option<PathBuf>,
        /// Lift this many seeded random unitaries instead
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A unitary matrix carrying one basis vector to another of the same length
    Transport {
        #[command(flatten)]
        ring: RingArgs,
        /// Source vector, or `@path` to read it from a file
        #[arg(long)]
        u: String,
        /// Target vector, or `@path`
        #[arg(long)]
        v: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Every formula against the oracle, for one ring or a sweep file
    Verify {
        #[command(flatten)]
        ring: RingArgs,
        /// Sweep file of ring blocks with `m=` lines
        #[arg(long, conflicts_with = "desk_suite")]
        sweep: Option<PathBuf>,
        /// Run the bundled suite of desk-scale rings
        #[arg(long)]
        desk_suite: bool,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Adds one to the named formula (harness self-test)
        #[arg(long, hide = true)]
        corrupt_formula: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StarArg {
    Quadratic,
    Trivial,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RingArgs {
    /// Ring spec file (`key=value` lines)
    #[arg(long, conflicts_with_all = ["p", "k", "d", "sigma", "b", "truncate", "star"])]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Order of the Frobenius twist, 1 or 2
    #[arg(long)]
    pub sigma: Option<u8>,
    /// `zero`, or an exponent `j` for `t² = pʲ`
    #[arg(long)]
    pub b: Option<String>,
    /// Truncate at `t^{2k−1}`
    #[arg(long)]
    pub truncate: bool,
    #[arg(long, value_enum)]
    pub star: Option<StarArg>,
    /// Largest ring that will be enumerated
    #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
    pub element_budget: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub max_vectors: Option<u64>,
    #[arg(long)]
    pub max_pairs: Option<u64>,
    #[arg(long)]
    pub max_matrices: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> EnumerationBudget {
        let d = EnumerationBudget::default();
        EnumerationBudget {
            max_vectors: self.max_vectors.unwrap_or(d.max_vectors),
            max_pairs: self.max_pairs.unwrap_or(d.max_pairs),
            max_matrices: self.max_matrices.unwrap_or(d.max_matrices),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Attach brute-force values within the budget
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Text(_) => 2,
            CliError::Ring(RingError::InvalidSpec(_) | RingError::BudgetExceeded(_)) => 2,
            CliError::Linalg(
                LinalgError::NotSkewHermitian | LinalgError::Degenerate | LinalgError::DimensionMismatch(_),
            ) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl RingArgs {
    pub fn to_spec(&self) -> Result<RingSpec> {
        if let Some(path) = &self.spec {
            let text = read_file(path)?;
            return RingSpec::parse(&text).map_err(|e| match e {
                RingError::InvalidSpec(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
                e => e.into(),
            });
        }
        let mut b = SpecBuilder::default();
        let mut set = |key: &str, value: String| {
            b.apply(key, &value, 0)
                .map_err(|e| CliError::Usage(e.to_string().replace("line 0: ", "")))
        };
        if let Some(p) = self.p {
            set("p", p.to_string())?;
        }
        if let Some(k) = self.k {
            set("k", k.to_string())?;
        }
        if let Some(d) = self.d {
            set("d", d.to_string())?;
        }
        if let Some(s) = self.sigma {
            set("sigma_order", s.to_string())?;
        }
        if let Some(bv) = &self.b {
            if bv == "zero" || bv == "0" {
                set("b", "zero".into())?;
            } else {
                set("b_exponent", bv.clone())?;
            }
        }
        if self.truncate {
            set("truncate_odd", "true".into())?;
        }
        if let Some(star) = self.star {
            let v = match star {
                StarArg::Quadratic => "quadratic",
                StarArg::Trivial => "trivial",
            };
            set("star_mode", v.into())?;
        }
        if b.is_empty() {
            return Err(CliError::Usage("give --spec FILE or inline --p --k --d --b".into()));
        }
        b.finish().map_err(|e| CliError::Usage(e.to_string().replace("line 0: ", "")))
    }

    pub fn to_ring(&self) -> Result<Ring> {
        Ok(make_ring_with_budget(self.to_spec()?, self.element_budget)?)
    }
}

/// One block of a sweep file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub name: Option<String>,
    pub spec: RingSpec,
    pub ms: Vec<u32>,
}

/// Blocks separated by blank lines; ring keys plus `m=1,2` and an optional `name=`.
pub fn parse_sweep(text: &str) -> Result<Vec<SweepEntry>> {
    let mut entries = Vec::new();
    let mut builder = SpecBuilder::default();
    let mut name = None;
    let mut ms: Option<Vec<u32>> = None;
    let mut start = 0;
    let mut flush = |builder: &mut SpecBuilder, name: &mut Option<String>, ms: &mut Option<Vec<u32>>, start: usize| {
        if builder.is_empty() && name.is_none() && ms.is_none() {
            return Ok(());
        }
        let spec = builder
            .finish()
            .map_err(|e| CliError::Usage(format!("block at line {start}: {e}")))?;
        let ms = ms
            .take()
            .ok_or_else(|| CliError::Usage(format!("block at line {start}: missing key `m`")))?;
        entries.push(SweepEntry {
            name: name.take(),
            spec,
            ms,
        });
        *builder = SpecBuilder::default();
        Ok::<(), CliError>(())
    };
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            if raw.trim().is_empty() {
                flush(&mut builder, &mut name, &mut ms, start)?;
            }
            continue;
        }
        if builder.is_empty() && name.is_none() && ms.is_none() {
            start = lineno;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("line {lineno}: expected key=value, got `{line}`")))?;
        match key.trim() {
            "name" => name = Some(value.trim().to_string()),
            "m" => {
                let parsed: std::result::Result<Vec<u32>, _> =
                    value.split(',').map(|s| s.trim().parse::<u32>()).collect();
                match parsed {
                    Ok(v) if !v.is_empty() && v.iter().all(|&m| m >= 1) => ms = Some(v),
                    _ => {
                        return Err(CliError::Usage(format!(
                            "line {lineno}: key `m`: expected positive integers separated by commas (got `{}`)",
                            value.trim()
                        )))
                    }
                }
            }
            _ => builder
                .apply_line(line, lineno)
                .map_err(|e| CliError::Usage(e.to_string().replace("invalid ring spec: ", "")))?,
        }
    }
    flush(&mut builder, &mut name, &mut ms, start)?;
    Ok(entries)
}

/// The bundled desk-scale suite.
pub const DESK_SUITE: &str = "\
name=F3[t]/(t^2)
p=3
k=1
d=1
b=zero
m=1,2

name=Z/9 with trivial involution
p=3
k=2
d=1
star_mode=trivial
m=1

name=Z/9[t]/(t^2-3)
p=3
k=2
d=1
b_exponent=1
m=1

name=Z/9[t]/(t^2-3, t^3)
p=3
k=2
d=1
b_exponent=1
truncate_odd=true
m=1

name=F9[t;sigma]/(t^2)
p=3
k=1
d=2
sigma_order=2
b=zero
m=1

name=Z/9[t]/(t^2)
p=3
k=2
d=1
b=zero
m=1
";

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub entries: Vec<SweepReportEntry>,
}

#[derive(Debug, Serialize)]
pub struct SweepReportEntry {
    pub ring: String,
    pub m: u32,
    pub reports: Vec<CountReport>,
}

impl SweepReport {
    pub fn has_mismatch(&self) -> bool {
        self.entries.iter().flat_map(|e| &e.reports).any(CountReport::is_mismatch)
    }
}

/// Runs every `(ring, m)` of a sweep; output order follows the file.
pub fn run_sweep(entries: &[SweepEntry], opts: &VerifyOptions, element_budget: u64) -> Result<SweepReport> {
    let rings: Vec<(String, Ring)> = entries
        .iter()
        .map(|e| {
            let ring = make_ring_with_budget(e.spec, element_budget)?;
            Ok((e.name.clone().unwrap_or_else(|| e.spec.label()), ring))
        })
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, u32)> = entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.ms.iter().map(move |&m| (i, m)))
        .collect();
    let entries = jobs
        .par_iter()
        .map(|&(i, m)| SweepReportEntry {
            ring: rings[i].0.clone(),
            m,
            reports: verify_all_with(&rings[i].1, m, opts),
        })
        .collect();
    Ok(SweepReport { entries })
}

fn opt_str(v: &Option<num_bigint::BigUint>) -> String {
    v.as_ref().map_or(String::new(), |v| v.to_string())
}

fn match_str(r: &CountReport) -> &'static str {
    match r.matches {
        Some(true) => "match",
        Some(false) => "MISMATCH",
        None => "skipped",
    }
}

fn reports_text(reports: &[CountReport], out: &mut String) {
    let w = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let _ = writeln!(out, "{:<w$}  {:>20}  {:>20}  {:<8}  note", "name", "formula", "oracle", "status");
    for r in reports {
        let _ = writeln!(
            out,
            "{:<w$}  {:>20}  {:>20}  {:<8}  {}",
            r.name,
            opt_str(&r.formula_value),
            opt_str(&r.oracle_value),
            match_str(r),
            r.note.as_deref().unwrap_or("")
        );
    }
}

fn csv_writer(prefix: &[&str]) -> csv::Writer<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = prefix.to_vec();
    header.extend(["name", "formula_value", "oracle_value", "match", "elapsed_ms"]);
    w.write_record(&header).expect("in-memory write");
    w
}

fn csv_row(w: &mut csv::Writer<Vec<u8>>, prefix: &[String], r: &CountReport) {
    let mut rec: Vec<String> = prefix.to_vec();
    rec.extend([
        r.name.clone(),
        opt_str(&r.formula_value),
        opt_str(&r.oracle_value),
        r.matches.map_or(String::new(), |m| m.to_string()),
        r.elapsed_ms.to_string(),
    ]);
    w.write_record(&rec).expect("in-memory write");
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn render_reports(reports: &[CountReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv_writer(&[]);
            for r in reports {
                csv_row(&mut w, &[], r);
            }
            csv_finish(w)
        }
        Format::Text => {
            let mut s = String::new();
            reports_text(reports, &mut s);
            s
        }
    }
}

pub fn render_sweep(report: &SweepReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv_writer(&["ring", "m"]);
            for e in &report.entries {
                for r in &e.reports {
                    csv_row(&mut w, &[e.ring.clone(), e.m.to_string()], r);
                }
            }
            csv_finish(w)
        }
        Format::Text => {
            let mut s = String::new();
            for e in &report.entries {
                let _ = writeln!(s, "== {} (m = {})", e.ring, e.m);
                reports_text(&e.reports, &mut s);
                s.push('\n');
            }
            let rows: Vec<&CountReport> = report.entries.iter().flat_map(|e| &e.reports).collect();
            let _ = writeln!(
                s,
                "{} rows: {} match, {} mismatch, {} skipped",
                rows.len(),
                rows.iter().filter(|r| r.matches == Some(true)).count(),
                rows.iter().filter(|r| r.is_mismatch()).count(),
                rows.iter().filter(|r| r.is_skipped()).count()
            );
            s
        }
    }
}

#[derive(Debug, Serialize)]
struct AxiomReport {
    /// `exhaustive` or `structural`
    validation: &'static str,
    enumerated_stats_agree: Option<bool>,
    hermitian_skew_split: Option<bool>,
    skew_solution_sets: Option<bool>,
}

#[derive(Debug, Serialize)]
struct RingReport {
    ring: String,
    spec: RingSpec,
    stats: RingStats,
    axioms: AxiomReport,
    principal: Option<PrincipalReport>,
    principal_branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    principal_note: Option<String>,
}

fn ring_report(ring: &Ring) -> Result<RingReport> {
    let spec = *ring.spec().expect("built from a spec");
    let exhaustive = ring.cardinality().is_some_and(|n| n <= EXHAUSTIVE_VALIDATION_LIMIT.min(ring.budget()));
    let axioms = AxiomReport {
        validation: if exhaustive { "exhaustive" } else { "structural" },
        enumerated_stats_agree: ring.enumerated_stats().ok().map(|s| s == ring.stats()),
        hermitian_skew_split: check_hermitian_skew_split(ring).ok(),
        skew_solution_sets: check_skew_solution_sets(ring).ok(),
    };
    let (principal, principal_note) = match principal_structure(ring) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let principal_branch = principal.as_ref().map(|r| {
        if r.branch_applies {
            principal_branch(r.e, !r.star_nontrivial).to_string()
        } else {
            format!("not applicable ({})", r.failure.clone().unwrap_or_default())
        }
    });
    Ok(RingReport {
        ring: ring.label(),
        spec,
        stats: ring.stats(),
        axioms,
        principal,
        principal_branch,
        principal_note,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt_yes(b: Option<bool>) -> &'static str {
    b.map_or("not checked", yes)
}

fn render_ring(r: &RingReport, format: Format) -> String {
    let s = &r.stats;
    let mut kv: Vec<(String, String)> = vec![
        ("ring".into(), r.ring.clone()),
        ("card_a".into(), s.card_a.to_string()),
        ("card_rad".into(), s.card_rad.to_string()),
        ("e".into(), s.e.to_string()),
        ("q".into(), s.q.to_string()),
        ("card_r".into(), s.card_r.to_string()),
        ("card_s".into(), s.card_s.to_string()),
        ("card_m".into(), s.card_m.to_string()),
        ("validation".into(), r.axioms.validation.into()),
        ("enumerated_stats_agree".into(), opt_yes(r.axioms.enumerated_stats_agree).into()),
        ("hermitian_skew_split".into(), opt_yes(r.axioms.hermitian_skew_split).into()),
        ("skew_solution_sets".into(), opt_yes(r.axioms.skew_solution_sets).into()),
    ];
    if let Some(p) = &r.principal {
        kv.extend([
            ("principal_radical".into(), yes(p.principal_radical).into()),
            (
                "generator".into(),
                match (&p.generator, p.generator_kind) {
                    (Some(g), Some(k)) => format!("{g} ({k:?})").to_lowercase(),
                    _ => "none".into(),
                },
            ),
            ("hermitian_commute".into(), yes(p.hermitian_commute).into()),
            ("star_nontrivial".into(), yes(p.star_nontrivial).into()),
            ("trivial_intersection".into(), opt_yes(p.trivial_intersection).into()),
            ("hermitian_closed".into(), yes(p.hermitian_closed).into()),
        ]);
        if let Some(par) = &p.parity {
            kv.push(("parity_profile_holds".into(), yes(par.holds).into()));
        }
    }
    if let Some(b) = &r.principal_branch {
        kv.push(("principal_branch".into(), b.clone()));
    }
    if let Some(n) = &r.principal_note {
        kv.push(("principal_note".into(), n.clone()));
    }
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, v) in &kv {
                w.write_record([k, v]).expect("in-memory write");
            }
            csv_finish(w)
        }
        Format::Text => {
            let width = kv.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            kv.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
        }
    }
}

fn read_arg_or_file(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path)),
        None => Ok(arg.to_string()),
    }
}

#[derive(Debug, Serialize)]
struct MatrixReport {
    matrix: String,
    checks: Vec<(String, bool)>,
}

fn render_matrix_report(title: &str, r: &MatrixReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"]).expect("in-memory write");
            w.write_record([title, &r.matrix]).expect("in-memory write");
            for (k, v) in &r.checks {
                w.write_record([k.as_str(), yes(*v)]).expect("in-memory write");
            }
            csv_finish(w)
        }
        Format::Text => {
            let mut s = format!("{title}:\n");
            for row in r.matrix.split(';') {
                let _ = writeln!(s, "  {}", row.trim());
            }
            for (k, v) in &r.checks {
                let _ = writeln!(s, "{k}: {}", yes(*v));
            }
            s
        }
    }
}

fn checks_ok(checks: &[(String, bool)]) -> bool {
    checks.iter().all(|(_, ok)| *ok)
}

fn cmd_basis(ring: &Ring, gram: &Path, format: Format) -> Result<(String, bool)> {
    let g = parse_matrix(ring, &read_file(gram)?)?;
    let space = FormSpace::new(g)?;
    let basis = symplectic_basis(&space)?;
    let p = basis.matrix();
    let j = crate::linalg::standard_j(ring, space.rank() / 2);
    let pulled = p.star_transpose().mul(space.gram())?.mul(&p)?;
    let r = MatrixReport {
        matrix: format_matrix(&p),
        checks: vec![("gram_is_standard".into(), pulled == j)],
    };
    let mut text = render_matrix_report("change of basis (columns u1..um, v1..vm)", &r, format);
    if format == Format::Text {
        for (i, v) in basis.vectors().iter().enumerate() {
            let _ = writeln!(text, "basis[{i}] = {}", format_vector(v));
        }
    }
    Ok((text, checks_ok(&r.checks)))
}

fn cmd_transport(ring: &Ring, u: &str, v: &str, format: Format) -> Result<(String, bool)> {
    let u = parse_vector(ring, read_arg_or_file(u)?.trim())?;
    let v = parse_vector(ring, read_arg_or_file(v)?.trim())?;
    if u.dim() % 2 != 0 || u.dim() != v.dim() {
        return Err(CliError::Usage(format!(
            "vectors must have the same even length, got {} and {}",
            u.dim(),
            v.dim()
        )));
    }
    let space = FormSpace::standard(ring, u.dim() / 2);
    let g = transport(&space, &u, &v)?;
    let r = MatrixReport {
        matrix: format_matrix(&g),
        checks: vec![
            ("unitary".into(), space.is_unitary(&g)?),
            ("maps_u_to_v".into(), g.mul_vec(&u)? == v),
        ],
    };
    Ok((render_matrix_report("transport matrix", &r, format), checks_ok(&r.checks)))
}

fn cmd_lift(
    ring: &Ring,
    j: u32,
    matrix: Option<&Path>,
    random: Option<usize>,
    m: u32,
    seed: u64,
    format: Format,
) -> Result<(String, bool)> {
    let red = ring.quotient_ring(j)?;
    if let Some(path) = matrix {
        let xbar = parse_matrix(red.target(), &read_file(path)?)?;
        if xbar.rows() % 2 != 0 || !xbar.is_square() {
            return Err(CliError::Usage("the matrix must be square of even size".into()));
        }
        let space = FormSpace::standard(ring, xbar.rows() / 2);
        let x = lift_unitary_via(&space, &xbar, &red)?;
        let r = MatrixReport {
            matrix: format_matrix(&x),
            checks: vec![
                ("unitary".into(), space.is_unitary(&x)?),
                ("reduces_to_input".into(), x.reduce(&red) == xbar),
            ],
        };
        return Ok((render_matrix_report("lift", &r, format), checks_ok(&r.checks)));
    }
    let count = random.ok_or_else(|| CliError::Usage("give --matrix FILE or --random N".into()))?;
    let space = FormSpace::standard(ring, m as usize);
    let down = FormSpace::standard(red.target(), m as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0usize;
    for _ in 0..count {
        let xbar = random_unitary(&down, &mut rng)?;
        let x = lift_unitary_via(&space, &xbar, &red)?;
        if space.is_unitary(&x)? && x.reduce(&red) == xbar {
            ok += 1;
        }
    }
    let summary = LiftSummary {
        ring: ring.label(),
        level: j,
        m,
        seed,
        attempted: count,
        verified: ok,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&summary).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(&summary).expect("in-memory write");
            csv_finish(w)
        }
        Format::Text => format!(
            "lifted {ok}/{count} random unitaries from level {j} (m = {m}, seed = {seed})\n"
        ),
    };
    Ok((text, ok == count))
}

#[derive(Debug, Serialize)]
struct LiftSummary {
    ring: String,
    level: u32,
    m: u32,
    seed: u64,
    attempted: usize,
    verified: usize,
}

fn write_output(out: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return Err(CliError::Usage("m must be at least 1".into()));
    }
    Ok(())
}

/// Runs a parsed command; returns the exit code.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    let status = |ok: bool| if ok { 0 } else { 1 };
    match cli.command {
        Command::Ring { ring, out } => {
            let ring = ring.to_ring()?;
            let report = ring_report(&ring)?;
            write_output(&out, &render_ring(&report, out.format), stdout)?;
            let ok = report.axioms.enumerated_stats_agree != Some(false)
                && report.axioms.hermitian_skew_split != Some(false)
                && report.axioms.skew_solution_sets != Some(false);
            Ok(status(ok))
        }
        Command::Order { ring, run, j, out } => {
            check_m(run.m)?;
            let ring = ring.to_ring()?;
            let mut sections = vec![Section::Orders];
            if let Some(j) = j {
                let e = ring.nilpotency();
                if j == 0 || j >= e {
                    return Err(CliError::Usage(format!("--j must lie in 1..{e}")));
                }
                sections.push(Section::Levels);
            }
            let opts = VerifyOptions {
                budget: run.budget.budget(),
                oracle: run.oracle,
                sections,
                level: j,
                corrupt: None,
            };
            let reports = verify_all_with(&ring, run.m, &opts);
            write_output(&out, &render_reports(&reports, out.format), stdout)?;
            Ok(status(!reports.iter().any(CountReport::is_mismatch)))
        }
        Command::Count { ring, run, out } => {
            check_m(run.m)?;
            let ring = ring.to_ring()?;
            let opts = VerifyOptions {
                budget: run.budget.budget(),
                oracle: run.oracle,
                sections: vec![Section::Counts],
                level: None,
                corrupt: None,
            };
            let reports = verify_all_with(&ring, run.m, &opts);
            write_output(&out, &render_reports(&reports, out.format), stdout)?;
            Ok(status(!reports.iter().any(CountReport::is_mismatch)))
        }
        Command::Basis { ring, gram, out } => {
            let ring = ring.to_ring()?;
            let (text, ok) = cmd_basis(&ring, &gram, out.format)?;
            write_output(&out, &text, stdout)?;
            Ok(status(ok))
        }
        Command::Lift {
            ring,
            j,
            matrix,
            random,
            m,
            seed,
            out,
        } => {
            check_m(m)?;
            let ring = ring.to_ring()?;
            let (text, ok) = cmd_lift(&ring, j, matrix.as_deref(), random, m, seed, out.format)?;
            write_output(&out, &text, stdout)?;
            Ok(status(ok))
        }
        Command::Transport { ring, u, v, out } => {
            let ring = ring.to_ring()?;
            let (text, ok) = cmd_transport(&ring, &u, &v, out.format)?;
            write_output(&out, &text, stdout)?;
            Ok(status(ok))
        }
        Command::Verify {
            ring,
            sweep,
            desk_suite,
            m,
            budget,
            corrupt_formula,
            out,
        } => {
            check_m(m)?;
            let entries = if desk_suite {
                parse_sweep(DESK_SUITE)?
            } else if let Some(path) = &sweep {
                parse_sweep(&read_file(path)?).map_err(|e| match e {
                    CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
                    e => e,
                })?
            } else {
                vec![SweepEntry {
                    name: None,
                    spec: ring.to_spec()?,
                    ms: vec![m],
                }]
            };
            let opts = VerifyOptions {
                budget: budget.budget(),
                corrupt: corrupt_formula,
                ..Default::default()
            };
            let report = run_sweep(&entries, &opts, ring.element_budget)?;
            write_output(&out, &render_sweep(&report, out.format), stdout)?;
            Ok(status(!report.has_mismatch()))
        }
    }
}

/// Parses arguments, runs, prints errors to stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
