//! Command-line front end: argument parsing, report envelopes and the
//! text, JSON and CSV renderers. `main.rs` only forwards to [`run`].

use chrono::{SecondsFormat, Utc};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use towerforge::abelian::AbelianType;
use towerforge::gamma::{presentation_consistency, summarize, ConsistencyReport, GammaSummary};
use towerforge::intarith::validate_triple;
use towerforge::qforms::{class_group, QuadForm};
use towerforge::quadunits::{fundamental_unit, FundamentalUnit};
use towerforge::scan::{scan, ScanBounds, ScanSummary};
use towerforge::towers::{verify_tower, Check, CheckKind, TowerCertificate};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const SCAN_LIMIT_VAR: &str = "TOWERFORGE_SCAN_LIMIT";
pub const DEFAULT_SCAN_LIMIT: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "towerforge",
    version,
    about = "Verify 2-class field towers of Q(sqrt(-pqq'))"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Leave the timestamp out of the report.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Treat a mismatch against a tabulated value as a failure (true) or a
    /// warning (false).
    #[arg(
        long,
        global = true,
        default_value_t = true,
        action = ArgAction::Set,
        num_args = 0..=1,
        default_missing_value = "true"
    )]
    pub strict_tables: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify a single triple (p, q, q').
    Verify {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        qprime: i64,
    },
    /// Verify every admissible triple below the bounds.
    Scan {
        /// Common bound for p, q and q'.
        #[arg(long)]
        max: Option<i64>,
        #[arg(long)]
        max_p: Option<i64>,
        #[arg(long)]
        max_q: Option<i64>,
        #[arg(long)]
        max_qprime: Option<i64>,
        /// Worker threads; 0 uses every core, 1 runs sequentially.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Class group of a fundamental discriminant.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Structure of the group G_n.
    Gamma {
        #[arg(long)]
        n: u32,
    },
    /// Fundamental unit of Q(sqrt m).
    Unit {
        #[arg(long)]
        m: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupReport {
    pub disc: i64,
    pub h: usize,
    pub invariants: AbelianType,
    pub two_sylow: AbelianType,
    /// Wide class number and 2-class group (real fields only).
    pub wide_h: Option<usize>,
    pub wide_two_sylow: Option<AbelianType>,
    pub forms: Vec<QuadForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub summary: GammaSummary,
    pub presentation: ConsistencyReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitReport {
    pub unit: FundamentalUnit,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Verify {
        certificate: TowerCertificate,
    },
    Scan {
        bounds: ScanBounds,
        summary: ScanSummary,
        certificates: Vec<TowerCertificate>,
    },
    Classgroup {
        report: ClassGroupReport,
    },
    Gamma {
        report: GammaReport,
    },
    Unit {
        report: UnitReport,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: bool,
    pub checks: usize,
    pub discrepancies: usize,
    /// Table mismatches tolerated because `--strict-tables false`.
    pub warnings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub payload: Payload,
    pub summary: Summary,
}

impl Summary {
    /// Totals over `certs`. Table mismatches count as warnings unless
    /// `strict_tables` is set.
    pub fn of(certs: &[TowerCertificate], strict_tables: bool) -> Self {
        let checks: usize = certs.iter().map(|c| c.checks.len()).sum();
        let discrepancies: usize = certs.iter().map(|c| c.discrepancies.len()).sum();
        let blocking: usize = certs
            .iter()
            .map(|c| c.blocking(strict_tables).count())
            .sum();
        Summary {
            pass: blocking == 0,
            checks,
            discrepancies: blocking,
            warnings: discrepancies - blocking,
        }
    }
}

impl ReportEnvelope {
    pub fn exit_code(&self) -> i32 {
        if self.summary.pass {
            EXIT_PASS
        } else {
            EXIT_DISCREPANCY
        }
    }
}

/// Outcome of a command before rendering.
enum Outcome {
    Report(Box<ReportEnvelope>),
    Invalid(String),
    Usage(String),
}

fn query_summary() -> Summary {
    Summary {
        pass: true,
        checks: 0,
        discrepancies: 0,
        warnings: 0,
    }
}

fn scan_limit() -> Result<i64, String> {
    match std::env::var(SCAN_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|&l| l > 0)
            .ok_or_else(|| format!("{SCAN_LIMIT_VAR} must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_SCAN_LIMIT),
    }
}

fn execute(cli: &Cli, argv: Vec<String>) -> Outcome {
    let envelope = |payload: Payload, summary: Summary| {
        Outcome::Report(Box::new(ReportEnvelope {
            tool: "towerforge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: argv.clone(),
            timestamp: (!cli.no_timestamp)
                .then(|| Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)),
            payload,
            summary,
        }))
    };
    match &cli.command {
        Command::Verify { p, q, qprime } => match validate_triple(*p, *q, *qprime) {
            Ok(t) => {
                let cert = verify_tower(&t);
                let summary = Summary::of(std::slice::from_ref(&cert), cli.strict_tables);
                envelope(Payload::Verify { certificate: cert }, summary)
            }
            Err(e) => Outcome::Invalid(format!(
                "invalid triple ({p}, {q}, {qprime}): {e} [{}]",
                e.code()
            )),
        },
        Command::Scan {
            max,
            max_p,
            max_q,
            max_qprime,
            jobs,
        } => {
            let limit = match scan_limit() {
                Ok(l) => l,
                Err(e) => return Outcome::Usage(e),
            };
            let bound = |b: &Option<i64>| b.or(*max);
            let (Some(bp), Some(bq), Some(bqp)) = (bound(max_p), bound(max_q), bound(max_qprime))
            else {
                return Outcome::Usage(
                    "scan needs --max or all of --max-p, --max-q, --max-qprime".into(),
                );
            };
            let bounds = ScanBounds {
                max_p: bp,
                max_q: bq,
                max_qprime: bqp,
            };
            if bounds.largest() > limit {
                return Outcome::Usage(format!(
                    "scan bound {} exceeds the limit {limit} (set {SCAN_LIMIT_VAR} to raise it)",
                    bounds.largest()
                ));
            }
            let certificates = scan(bounds, *jobs);
            let summary = Summary::of(&certificates, cli.strict_tables);
            envelope(
                Payload::Scan {
                    bounds,
                    summary: ScanSummary::of(&certificates, cli.strict_tables),
                    certificates,
                },
                summary,
            )
        }
        Command::Classgroup { disc } => match class_group(*disc) {
            Ok(g) => {
                let real = *disc > 0;
                let report = ClassGroupReport {
                    disc: *disc,
                    h: g.h,
                    invariants: g.invariants().clone(),
                    two_sylow: g.two_sylow.clone(),
                    wide_h: real.then(|| g.wide_class_number()),
                    wide_two_sylow: real.then(|| g.wide_two_sylow()),
                    forms: g.classes.clone(),
                };
                envelope(Payload::Classgroup { report }, query_summary())
            }
            Err(e) => Outcome::Invalid(format!("invalid discriminant {disc}: {e}")),
        },
        Command::Gamma { n } => match (summarize(*n), presentation_consistency(*n)) {
            (Ok(summary), Ok(presentation)) => {
                let pass = presentation.adopted_passes();
                let report = GammaReport {
                    summary,
                    presentation,
                };
                let mut s = query_summary();
                s.pass = pass;
                s.discrepancies = usize::from(!pass);
                envelope(Payload::Gamma { report }, s)
            }
            (Err(e), _) | (_, Err(e)) => Outcome::Invalid(format!("invalid n = {n}: {e}")),
        },
        Command::Unit { m } => match fundamental_unit(*m) {
            Ok(unit) => {
                let display = unit_display(&unit);
                envelope(
                    Payload::Unit {
                        report: UnitReport { unit, display },
                    },
                    query_summary(),
                )
            }
            Err(e) => Outcome::Invalid(format!("invalid m = {m}: {e}")),
        },
    }
}

fn unit_display(u: &FundamentalUnit) -> String {
    let core = format!("{} + {}*sqrt({})", u.x, u.y, u.m);
    if u.half {
        format!("({core})/2")
    } else {
        core
    }
}

pub fn render_json(env: &ReportEnvelope) -> String {
    // Going through `Value` sorts object keys.
    let value = serde_json::to_value(env).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

#[derive(Serialize)]
struct CheckRow<'a> {
    p: i64,
    q: i64,
    qprime: i64,
    table: &'a str,
    row: Option<u8>,
    col: &'a str,
    method: &'a str,
    kind: CheckKind,
    expected: &'a str,
    computed: &'a str,
    pass: bool,
}

#[derive(Serialize)]
struct ScanRow {
    p: i64,
    q: i64,
    qprime: i64,
    case: String,
    n: Option<u32>,
    gamma_order: Option<usize>,
    h_row: String,
    kappa_orders: String,
    unit_index_row: String,
    checks: usize,
    discrepancies: usize,
    pass: bool,
}

fn join<T: std::fmt::Display>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn scan_row(c: &TowerCertificate, strict: bool) -> ScanRow {
    ScanRow {
        p: c.p,
        q: c.q,
        qprime: c.qprime,
        case: c.case_label.to_string(),
        n: c.n,
        gamma_order: c.gamma_order,
        h_row: join(c.h_row()),
        kappa_orders: join(c.kappa_orders()),
        unit_index_row: join(
            c.unit_index_row()
                .into_iter()
                .map(|q| q.map_or("?".to_string(), |q| q.to_string())),
        ),
        checks: c.checks.len(),
        discrepancies: c.blocking(strict).count(),
        pass: c.passes(strict),
    }
}

pub fn render_csv(env: &ReportEnvelope, strict: bool) -> String {
    let mut w = csv_writer();
    match &env.payload {
        Payload::Verify { certificate: c } => {
            for ch in &c.checks {
                w.serialize(CheckRow {
                    p: c.p,
                    q: c.q,
                    qprime: c.qprime,
                    table: &ch.table,
                    row: ch.row,
                    col: &ch.col,
                    method: &ch.method,
                    kind: ch.kind,
                    expected: &ch.expected,
                    computed: &ch.computed,
                    pass: ch.pass,
                })
                .expect("csv row");
            }
        }
        Payload::Scan { certificates, .. } => {
            for c in certificates {
                w.serialize(scan_row(c, strict)).expect("csv row");
            }
        }
        other => {
            w.write_record(["key", "value"]).expect("csv header");
            for (k, v) in flatten(
                &serde_json::to_value(other).expect("payload serializes"),
                "",
            ) {
                w.write_record([k, v]).expect("csv row");
            }
        }
    }
    finish_csv(w)
}

/// Leaf values of a JSON tree keyed by dotted paths.
fn flatten(v: &serde_json::Value, prefix: &str) -> Vec<(String, String)> {
    use serde_json::Value;
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().flat_map(|(k, v)| flatten(v, &key(k))).collect(),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .flat_map(|(i, v)| flatten(v, &key(&i.to_string())))
            .collect(),
        Value::String(s) => vec![(prefix.to_string(), s.clone())],
        other => vec![(prefix.to_string(), other.to_string())],
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn text_certificate(out: &mut String, c: &TowerCertificate, strict: bool) {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "?".into());
    let _ = writeln!(
        out,
        "triple (p, q, q') = ({}, {}, {})  d = {}  case {}  n = {}  |G| = {}  Cl_2(k) = {}",
        c.p,
        c.q,
        c.qprime,
        c.d,
        c.case_label,
        opt(c.n.map(|n| n.to_string())),
        opt(c.gamma_order.map(|g| g.to_string())),
        opt(c.cl2_k.as_ref().map(|t| t.to_string())),
    );
    if !c.quadratic.is_empty() {
        let _ = writeln!(out, "\nquadratic extensions k_j = k(sqrt e)");
        let _ = writeln!(
            out,
            "{:>2} {:>6} {:>5} {:>7}  {:<16} {:<12} {:<16} witnessed",
            "j", "e", "h_j", "#kappa", "N_j Cl_2(k_j)", "Cl_2(k_j)", "kappa_j"
        );
        for r in &c.quadratic {
            let _ = writeln!(
                out,
                "{:>2} {:>6} {:>5} {:>7}  {:<16} {:<12} {:<16} {}",
                r.j,
                r.e,
                r.h_kuroda,
                r.kappa_order_transfer,
                r.norm_group_genus,
                r.cl2_gamma.to_string(),
                r.kappa_transfer,
                r.kappa_witnessed
            );
        }
    }
    if !c.quartic.is_empty() {
        let _ = writeln!(out, "\nquartic extensions K_j");
        let _ = writeln!(
            out,
            "{:>2} {:>14} {:>9}  {:<12} {:<14} q(K_j/k)",
            "j", "radicands", "contains", "Cl_2(K_j)", "N_j Cl_2(K_j)"
        );
        for r in &c.quartic {
            let _ = writeln!(
                out,
                "{:>2} {:>14} {:>9}  {:<12} {:<14} {}",
                r.j,
                format!("{}, {}", r.radicands.0, r.radicands.1),
                join(r.contains),
                r.cl2_gamma.to_string(),
                r.norm_group_genus,
                r.unit_index.map_or("?".into(), |q| q.to_string())
            );
        }
    }
    if let Some(w) = &c.unit_witness {
        let _ = writeln!(
            out,
            "\nunit witness: {} x^2 - {} y^2 = -4 at (x, y) = ({}, {}); eta^2 = eps^{}",
            w.p,
            w.q * w.qprime,
            w.x,
            w.y,
            w.u
        );
    }
    let blocking: Vec<&Check> = c.blocking(strict).collect();
    let warnings = c.discrepancies.len() - blocking.len();
    let _ = writeln!(
        out,
        "\nchecks: {}  discrepancies: {}  warnings: {}",
        c.checks.len(),
        blocking.len(),
        warnings
    );
    for d in &c.discrepancies {
        let tag = if blocking.contains(&d) {
            "discrepancy"
        } else {
            "warning"
        };
        let _ = writeln!(
            out,
            "  {tag}: {} row {} {} [{}]: expected {}, computed {}",
            d.table,
            d.row.map_or("-".into(), |r| r.to_string()),
            d.col,
            d.method,
            d.expected,
            d.computed
        );
    }
}

pub fn render_text(env: &ReportEnvelope, strict: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {}  {}",
        env.tool,
        env.version,
        env.command.join(" ")
    );
    if let Some(ts) = &env.timestamp {
        let _ = writeln!(out, "generated {ts}");
    }
    let _ = writeln!(out);
    match &env.payload {
        Payload::Verify { certificate } => text_certificate(&mut out, certificate, strict),
        Payload::Scan {
            bounds,
            summary,
            certificates,
        } => {
            let _ = writeln!(
                out,
                "bounds p <= {}, q <= {}, q' <= {}",
                bounds.max_p, bounds.max_q, bounds.max_qprime
            );
            for c in certificates {
                let _ = writeln!(
                    out,
                    "({}, {}, {})  case {}  n = {}  |G| = {}  h = [{}]  {}",
                    c.p,
                    c.q,
                    c.qprime,
                    c.case_label,
                    c.n.map_or("?".into(), |n| n.to_string()),
                    c.gamma_order.map_or("?".into(), |g| g.to_string()),
                    join(c.h_row()),
                    verdict(c.passes(strict))
                );
            }
            let _ = writeln!(
                out,
                "\ntriples: {}  passed: {}  failed: {}  case A: {}  case B: {}",
                summary.total, summary.passed, summary.failed, summary.case_a, summary.case_b
            );
        }
        Payload::Classgroup { report } => {
            let _ = writeln!(out, "discriminant {}", report.disc);
            let _ = writeln!(
                out,
                "h = {}  invariants {}  2-part {}",
                report.h, report.invariants, report.two_sylow
            );
            if let (Some(h), Some(t)) = (report.wide_h, &report.wide_two_sylow) {
                let _ = writeln!(out, "wide h = {h}  wide 2-part {t}");
            }
            let forms: Vec<String> = report.forms.iter().map(|f| f.to_string()).collect();
            let _ = writeln!(out, "classes: {}", forms.join(" "));
        }
        Payload::Gamma { report } => {
            let s = &report.summary;
            let _ = writeln!(out, "G_{}: order {}  exponent {}", s.n, s.order, s.exponent);
            let _ = writeln!(out, "G^ab = {}", s.abelianization);
            let _ = writeln!(
                out,
                "G' order {} type {} abelian {}  |G''| = {}",
                s.derived_order, s.derived_type, s.derived_is_abelian, s.second_derived_order
            );
            let _ = writeln!(out, "\nindex-2 subgroups");
            for h in &s.index2 {
                let _ = writeln!(
                    out,
                    "  lambda {:03b}  <{}>  ab {}  transfer kernel {} (order {})",
                    h.lambda,
                    h.generators.join(", "),
                    h.abelianization,
                    h.transfer_kernel,
                    h.transfer_kernel_order
                );
            }
            let _ = writeln!(out, "\npresentation variants [r,t] = s^E t^2");
            for v in &report.presentation.variants {
                let _ = writeln!(
                    out,
                    "  E = 2^{} {:?}: order {} ab {}  {}",
                    v.sigma_exponent_log2,
                    v.orientation,
                    v.order.map_or("?".into(), |o| o.to_string()),
                    v.abelianization
                        .as_ref()
                        .map_or("?".into(), |a| a.to_string()),
                    verdict(v.passes)
                );
            }
        }
        Payload::Unit { report } => {
            let _ = writeln!(
                out,
                "eps_{} = {}  norm {:+}",
                report.unit.m, report.display, report.unit.norm
            );
        }
    }
    let s = &env.summary;
    let _ = writeln!(
        out,
        "\n{}  (checks {}, discrepancies {}, warnings {})",
        verdict(s.pass),
        s.checks,
        s.discrepancies,
        s.warnings
    );
    out
}

/// Parses `args`, runs the command, and writes the report. Returns the
/// process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_PASS {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let argv: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let env = match execute(&cli, argv) {
        Outcome::Report(env) => env,
        Outcome::Invalid(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INVALID;
        }
        Outcome::Usage(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let body = match cli.format {
        Format::Text => render_text(&env, cli.strict_tables),
        Format::Json => render_json(&env),
        Format::Csv => render_csv(&env, cli.strict_tables),
    };
    if env.summary.warnings > 0 {
        let _ = writeln!(
            stderr,
            "warning: {} table mismatch(es) tolerated by --strict-tables false",
            env.summary.warnings
        );
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => stdout.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    env.exit_code()
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
