//! Command-line front end: property checks, classification, construction,
//! counting, enumeration, theorem verification, and grid rendering for
//! binary operations on `{1,…,n}`.
//!
//! Exit codes: 0 on success, 1 when a verification finds counterexamples,
//! 2 on input errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qtops::construct::{build, classify, Proj, ProjectionChoice};
use qtops::enumerate::{
    brute_force_count, count_closed, count_operations, count_recurrence,
    enumerate_operations, series_coefficients, verify, BruteForceLimits, ClassSpec,
    SequenceId, TheoremId, VerificationReport,
};
use qtops::optable::{OpTable, PropertyReport};
use qtops::order::{LinearOrder, WeakOrder};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "qtops", version, about = "Quasitrivial binary operation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every property of an op-table file
    Check {
        file: PathBuf,
        /// Base linear order, e.g. `2,3,1` (natural order by default)
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the degree sequence of an op-table file
    Degrees {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a table into its canonical weak order and projections
    Classify {
        file: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Build a table from a weak ordering and projection choices
    Build {
        /// Weak ordering, e.g. `2~3 < 1 < 4`
        #[arg(long = "weak-order")]
        weak_order: String,
        /// Comma-separated `p1`/`p2`, one per tied block in block order
        #[arg(long, value_delimiter = ',')]
        choice: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate one of the twelve counting sequences
    Count {
        /// Sequence name: p, p_e, p_a, q, q_e, q_a, u, u_e, u_a, v, v_e, v_a
        sequence: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Print the whole prefix as CSV `n,value` lines
        #[arg(long)]
        prefix: bool,
        #[arg(long)]
        json: bool,
        /// Worker threads for the brute-force method
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Stream or count the tables matching a class of properties
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Comma-separated properties: quasitrivial, bisymmetric,
        /// associative, commutative, order-preserving, neutral, annihilator
        #[arg(long)]
        class: String,
        #[arg(long = "count-only")]
        count_only: bool,
        /// Base for `order-preserving` (natural order by default)
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Exhaustively check one of the structural theorems
    Verify {
        /// Theorem id, e.g. THM_B, BS_QUASILINEAR, LEVELSET
        #[arg(long)]
        theorem: String,
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print a table as a grid, first argument along the horizontal axis
    Render { file: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Recurrence,
    Series,
    Brute,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Recurrence => "recurrence",
            Method::Series => "series",
            Method::Brute => "brute",
        }
    }
}

/// An error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn limits() -> BruteForceLimits {
    match std::env::var("QTOPS_MAX_BRUTE_N") {
        Ok(value) => match value.trim().parse::<usize>() {
            Ok(n) if n >= 1 => BruteForceLimits::uniform(n),
            _ => BruteForceLimits::default(),
        },
        Err(_) => BruteForceLimits::default(),
    }
}

fn configure_jobs(jobs: Option<usize>) {
    if let Some(jobs) = jobs {
        // a later call fails once the global pool exists; that is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

fn read_table(path: &PathBuf) -> Result<OpTable, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    text.parse()
        .map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_base(spec: &Option<String>, n: usize) -> Result<LinearOrder, Failure> {
    match spec {
        None => Ok(LinearOrder::natural(n)),
        Some(text) => {
            let base: LinearOrder =
                text.parse().map_err(|e| input_error(format!("--base: {e}")))?;
            if base.n() != n {
                return Err(input_error(format!(
                    "--base has {} elements but the table has {n}",
                    base.n()
                )));
            }
            Ok(base)
        }
    }
}

fn print_json(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Check { file, base, json } => {
            let table = read_table(&file)?;
            let base = parse_base(&base, table.n())?;
            let report = PropertyReport::new(&table, &base);
            if json {
                print_json(json!({
                    "schema": SCHEMA,
                    "report": serde_json::to_value(&report).expect("serializable"),
                }));
            } else {
                print!("{}", format_report(&report));
            }
            Ok(())
        }
        Command::Degrees { file, json } => {
            let table = read_table(&file)?;
            let degrees = table.degree_sequence();
            if json {
                print_json(json!({
                    "schema": SCHEMA,
                    "n": table.n(),
                    "degree_sequence": degrees.as_slice(),
                }));
            } else {
                println!("{degrees}");
            }
            Ok(())
        }
        Command::Classify { file, base, json } => {
            let table = read_table(&file)?;
            let base = parse_base(&base, table.n())?;
            let classification = classify(&table, &base);
            if json {
                print_json(json!({
                    "schema": SCHEMA,
                    "classification": serde_json::to_value(&classification)
                        .expect("serializable"),
                }));
            } else {
                for (name, flag) in [
                    ("quasitrivial", classification.quasitrivial),
                    ("associative", classification.associative),
                    ("bisymmetric", classification.bisymmetric),
                    ("commutative", classification.commutative),
                    ("order-preserving", classification.order_preserving),
                ] {
                    println!("{name}: {}", if flag { "yes" } else { "no" });
                }
                match &classification.decomposition_text {
                    Some(text) => println!("{text}"),
                    None => println!("not associative-quasitrivial"),
                }
                match classification.shape {
                    Some(k) => println!("shape: k={k}"),
                    None => println!("shape: absent"),
                }
            }
            Ok(())
        }
        Command::Build { weak_order, choice, json } => {
            let w: WeakOrder = weak_order
                .parse()
                .map_err(|e| input_error(format!("--weak-order: {e}")))?;
            let projections = choice
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Proj>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| input_error(format!("--choice: {e}")))?;
            let table = build(&w, &ProjectionChoice::new(projections))
                .map_err(|e| input_error(e.to_string()))?;
            if json {
                print_json(json!({
                    "schema": SCHEMA,
                    "n": table.n(),
                    "rows": table.rows().collect::<Vec<_>>(),
                }));
            } else {
                print!("{table}");
            }
            Ok(())
        }
        Command::Count { sequence, n, method, prefix, json, jobs } => {
            configure_jobs(jobs);
            let id: SequenceId =
                sequence.parse().map_err(|e| input_error(format!("{e}")))?;
            let values = count_values(id, n, method, prefix)?;
            if json {
                let rows: Vec<serde_json::Value> = values
                    .iter()
                    .map(|(n, v)| json!({ "n": n, "value": v }))
                    .collect();
                let mut body = json!({
                    "schema": SCHEMA,
                    "sequence": id.to_string(),
                    "oeis": id.oeis(),
                    "method": method.name(),
                });
                if prefix {
                    body["values"] = json!(rows);
                } else {
                    body["n"] = json!(n);
                    body["value"] = json!(values.last().expect("one value").1);
                }
                print_json(body);
            } else if prefix {
                println!("n,value");
                for (n, value) in &values {
                    println!("{n},{value}");
                }
            } else {
                println!("{}", values.last().expect("one value").1);
            }
            Ok(())
        }
        Command::Enumerate { n, class, count_only, base, json, jobs } => {
            configure_jobs(jobs);
            let base = parse_base(&base, n)?;
            let spec = parse_class(&class, base)?;
            if count_only {
                let count = count_operations(n, &spec, &limits())
                    .map_err(|e| input_error(e.to_string()))?;
                if json {
                    print_json(json!({
                        "schema": SCHEMA,
                        "n": n,
                        "class": class,
                        "count": count.to_string(),
                    }));
                } else {
                    println!("{count}");
                }
                return Ok(());
            }
            let tables = enumerate_operations(n, spec, &limits())
                .map_err(|e| input_error(e.to_string()))?;
            if json {
                let rows: Vec<serde_json::Value> = tables
                    .map(|t| json!(t.rows().collect::<Vec<_>>()))
                    .collect();
                print_json(json!({
                    "schema": SCHEMA,
                    "n": n,
                    "class": class,
                    "count": rows.len(),
                    "tables": rows,
                }));
            } else {
                let mut first = true;
                for table in tables {
                    if !first {
                        println!();
                    }
                    first = false;
                    print!("{table}");
                }
            }
            Ok(())
        }
        Command::Verify { theorem, max_n, json, jobs } => {
            configure_jobs(jobs);
            let id: TheoremId =
                theorem.parse().map_err(|e| input_error(format!("{e}")))?;
            let report =
                verify(id, max_n, &limits()).map_err(|e| input_error(e.to_string()))?;
            if json {
                print_json(json!({
                    "schema": SCHEMA,
                    "report": serde_json::to_value(&report).expect("serializable"),
                }));
            } else {
                print!("{}", format_verification(&report));
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure { code: 1, message: String::new() })
            }
        }
        Command::Render { file } => {
            let table = read_table(&file)?;
            print!("{}", table.render());
            Ok(())
        }
    }
}

/// `(n, value)` rows for `count`: the single requested term, or the whole
/// prefix. Brute-force prefixes start at n = 1.
fn count_values(
    id: SequenceId,
    n: usize,
    method: Method,
    prefix: bool,
) -> Result<Vec<(usize, String)>, Failure> {
    let range = |start: usize| (start..=n).collect::<Vec<_>>();
    let ns = if prefix {
        range(if method == Method::Brute { 1 } else { 0 })
    } else {
        vec![n]
    };
    match method {
        Method::Closed => Ok(ns.iter().map(|&m| (m, count_closed(id, m).to_string())).collect()),
        Method::Recurrence => {
            let all = count_recurrence(id, n);
            Ok(ns.iter().map(|&m| (m, all[m].to_string())).collect())
        }
        Method::Series => {
            let all = series_coefficients(id, n);
            Ok(ns.iter().map(|&m| (m, all[m].to_string())).collect())
        }
        Method::Brute => {
            let limits = limits();
            ns.iter()
                .map(|&m| {
                    brute_force_count(id, m, &limits)
                        .map(|v| (m, v.to_string()))
                        .map_err(|e| input_error(e.to_string()))
                })
                .collect()
        }
    }
}

fn parse_class(class: &str, base: LinearOrder) -> Result<ClassSpec, Failure> {
    let mut spec = ClassSpec::default();
    for token in class.split(',') {
        match token.trim() {
            "quasitrivial" => spec.quasitrivial = true,
            "bisymmetric" => spec.bisymmetric = true,
            "associative" => spec.associative = true,
            "commutative" => spec.commutative = true,
            "order-preserving" => spec.order_preserving = Some(base.clone()),
            "neutral" => spec.has_neutral = true,
            "annihilator" => spec.has_annihilator = true,
            "" => {}
            other => {
                return Err(input_error(format!(
                    "unknown class property {other:?} (expected quasitrivial, bisymmetric, \
                     associative, commutative, order-preserving, neutral, annihilator)"
                )))
            }
        }
    }
    Ok(spec)
}

fn format_report(report: &PropertyReport) -> String {
    let mut out = String::new();
    let yes_no = |flag: bool| if flag { "yes" } else { "no" };
    let _ = writeln!(out, "n: {}", report.n);
    let _ = writeln!(out, "base: {}", report.base);
    let _ = writeln!(out, "idempotent: {}", yes_no(report.idempotent));
    if let Some(x) = report.idempotent_witness {
        let _ = writeln!(out, "  witness: F({x},{x}) != {x}");
    }
    let _ = writeln!(out, "quasitrivial: {}", yes_no(report.quasitrivial));
    if let Some((x, y)) = report.quasitrivial_witness {
        let _ = writeln!(out, "  witness: F({x},{y}) not in {{{x},{y}}}");
    }
    let _ = writeln!(out, "commutative: {}", yes_no(report.commutative));
    if let Some((x, y)) = report.commutative_witness {
        let _ = writeln!(out, "  witness: F({x},{y}) != F({y},{x})");
    }
    let _ = writeln!(out, "associative: {}", yes_no(report.associative));
    if let Some([x, y, z]) = report.associative_witness {
        let _ = writeln!(out, "  witness: x={x} y={y} z={z}");
    }
    let _ = writeln!(out, "bisymmetric: {}", yes_no(report.bisymmetric));
    if let Some([x, y, u, v]) = report.bisymmetric_witness {
        let _ = writeln!(out, "  witness: x={x} y={y} u={u} v={v}");
    }
    let _ = writeln!(out, "autodistributive: {}", yes_no(report.autodistributive));
    if let Some(w) = report.autodistributive_witness {
        let [x, y, z] = w.triple;
        let side = match w.side {
            qtops::optable::DistributivitySide::Left => "left",
            qtops::optable::DistributivitySide::Right => "right",
        };
        let _ = writeln!(out, "  witness: {side} identity at x={x} y={y} z={z}");
    }
    let _ = writeln!(out, "order-preserving: {}", yes_no(report.order_preserving));
    if let Some([x, y, xp, yp]) = report.order_preserving_witness {
        let _ = writeln!(out, "  witness: F({x},{y}) > F({xp},{yp})");
    }
    let _ = writeln!(
        out,
        "neutral element: {}",
        report.neutral_element.map_or("none".to_string(), |e| e.to_string())
    );
    let _ = writeln!(
        out,
        "annihilator: {}",
        report.annihilator.map_or("none".to_string(), |a| a.to_string())
    );
    let _ = writeln!(out, "degree sequence: {}", report.degree_sequence);
    let ls = &report.level_sets;
    let _ = writeln!(
        out,
        "disconnected level sets: general {} / horizontal {} / vertical {}",
        yes_no(ls.general),
        yes_no(ls.horizontal),
        yes_no(ls.vertical)
    );
    if let Some([a, b, c]) = ls.general_witness {
        let _ = writeln!(
            out,
            "  witness: ({},{}) < ({},{}) < ({},{})",
            a.0, a.1, b.0, b.1, c.0, c.1
        );
    }
    out
}

fn format_verification(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "theorem: {}", report.theorem);
    let _ = writeln!(out, "n: {}..={}", report.min_n, report.max_n);
    let _ = writeln!(out, "instances: {}", report.instances);
    let _ = writeln!(out, "counterexamples: {}", report.counterexamples.len());
    let _ = writeln!(out, "time: {} ms", report.wall_ms);
    for cx in &report.counterexamples {
        let _ = writeln!(out, "counterexample (n={}): {}", cx.n, cx.detail);
        for (key, value) in &cx.artifacts {
            if value.contains('\n') {
                let _ = writeln!(out, "  {key}:");
                for line in value.lines() {
                    let _ = writeln!(out, "    {line}");
                }
            } else {
                let _ = writeln!(out, "  {key}: {value}");
            }
        }
    }
    out
}
