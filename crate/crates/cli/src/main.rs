use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use k3fix::classifier::{build_table, PURELY_ORDERS};
use k3fix::data::file_names;
use k3fix::elliptic::{verify_all, verify_example};
use k3fix::lefschetz::{enumerate_type_counts, oracle_type_counts, TypeCountConstraints};
use k3fix::{Classification, Classifier, DataStore, Error, ExampleStatus, Format, Mode, TableKind};

/// Fixed loci of non-symplectic K3 automorphisms of orders 7, 14, 21, 28, 42.
///
/// Data is read from the embedded copy unless K3FIX_DATA_DIR names a directory.
#[derive(Parser, Debug)]
#[command(name = "k3fix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// write output here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// seed for generic parameter sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify automorphisms of one order
    Classify(ClassifyArgs),
    /// Recompute the fibers and 2-form multiplier of registered Weierstrass examples
    Verify(VerifyArgs),
    /// Compare a floating-point brute force with the exact type-count enumeration
    Oracle {
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print a shipped data file
    Data {
        /// file name, with or without .json; fixtures by table name
        #[arg(long)]
        dump: Option<String>,
        /// list the available names
        #[arg(long, conflicts_with = "dump")]
        list: bool,
    },
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    order: u32,
    /// σ^K symplectic instead of purely non-symplectic
    #[arg(long, value_name = "K")]
    not_purely: Option<u32>,
    #[arg(long, value_enum, default_value_t = Fmt::Markdown)]
    format: Fmt,
    /// compare every table of the run with its fixture; exit 1 on mismatch
    #[arg(long)]
    check: bool,
    /// also list excluded cases with stage and reason
    #[arg(long)]
    show_excluded: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_name = "ID", required_unless_present = "all", conflicts_with = "all")]
    example: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value_t = Fmt::Markdown)]
    format: Fmt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Fmt {
    Markdown,
    Json,
    Csv,
}

impl From<Fmt> for Format {
    fn from(f: Fmt) -> Format {
        match f {
            Fmt::Markdown => Format::Markdown,
            Fmt::Json => Format::Json,
            Fmt::Csv => Format::Csv,
        }
    }
}

/// Exit 1: output produced, but a check or verification failed.
struct Outcome {
    text: String,
    failed: bool,
}

enum Failure {
    Usage(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedOrder(_) | Error::Invalid(_) | Error::UnknownExample(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let res = match &cli.output {
                Some(p) => std::fs::write(p, &out.text),
                None => std::io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = res {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let data = DataStore::from_env()?;
    match &cli.command {
        Command::Classify(a) => classify(data, a),
        Command::Verify(a) => verify(&data, a, cli.seed),
        Command::Oracle { order, tol } => oracle(*order, *tol),
        Command::Data { dump, list } => dump_data(&data, dump.as_deref(), *list),
    }
}

fn classify(data: DataStore, a: &ClassifyArgs) -> Result<Outcome, Failure> {
    let n = a.order;
    if !PURELY_ORDERS.contains(&n) {
        return Err(Error::UnsupportedOrder(n).into());
    }
    let c = Classifier::new(data);
    let (cl, kinds) = match a.not_purely {
        None => (c.classify_purely(n)?, TableKind::for_purely(n)),
        Some(k) => match c.classify_not_purely(n, k) {
            Ok(cl) => (cl, TableKind::for_not_purely(n, k)),
            Err(Error::NoSymplectic(g)) => {
                let why = format!("no admissible cases: symplectic automorphisms of order {g} do not exist");
                return Ok(Outcome {
                    text: empty_run(n, k, a.format, &why),
                    failed: false,
                });
            }
            Err(e) => return Err(e.into()),
        },
    };
    let shown = match cl.mode {
        Mode::Purely => TableKind::final_for(n),
        Mode::NotPurely { .. } => kinds.first().copied().unwrap_or(TableKind::NotPurely),
    };
    let mut text = match a.format {
        Fmt::Json => json_run(&cl, a.show_excluded),
        f => {
            let mut s = build_table(shown, &cl).render(f.into());
            if a.show_excluded {
                s.push('\n');
                s.push_str(&build_table(TableKind::Records, &cl).render(f.into()));
            }
            if matches!(f, Fmt::Markdown) {
                if let Mode::NotPurely { .. } = cl.mode {
                    for (reading, count) in &cl.verdicts {
                        s.push_str(&format!("\n{reading} reading: {count} admissible"));
                    }
                    s.push('\n');
                }
                for note in &cl.notes {
                    s.push_str(&format!("note: {note}\n"));
                }
            }
            s
        }
    };
    let mut failed = false;
    if a.check {
        let mut log = String::new();
        for kind in &kinds {
            let t = build_table(*kind, &cl);
            match c.data().fixture(&t.name) {
                Ok(fx) => {
                    let r = t.check(fx);
                    log.push_str(&format!(
                        "check {}: {}\n",
                        r.table,
                        if r.passed { "ok" } else { "MISMATCH" }
                    ));
                    for d in &r.diffs {
                        log.push_str(&format!("  {d}\n"));
                    }
                    for w in &r.waived {
                        log.push_str(&format!("  waived {w}\n"));
                    }
                    failed |= !r.passed;
                }
                Err(_) => log.push_str(&format!("check {}: no fixture\n", t.name)),
            }
        }
        if kinds.is_empty() {
            log.push_str("check: no fixture covers this run\n");
        }
        if matches!(a.format, Fmt::Markdown) {
            text.push('\n');
            text.push_str(&log);
        } else {
            eprint!("{log}");
        }
    }
    Ok(Outcome { text, failed })
}

fn empty_run(n: u32, k: u32, f: Fmt, why: &str) -> String {
    match f {
        Fmt::Json => {
            let v = serde_json::json!({
                "order": n,
                "mode": Mode::NotPurely { power: k },
                "records": [],
                "notes": [why],
            });
            serde_json::to_string_pretty(&v).unwrap_or_default() + "\n"
        }
        Fmt::Csv => "N,dims,fixed_locus_of_powers\n".into(),
        Fmt::Markdown => format!("{why}\n"),
    }
}

fn json_run(cl: &Classification, show_excluded: bool) -> String {
    let mut cl = cl.clone();
    if !show_excluded {
        let keep: Vec<_> = cl.admissible().into_iter().cloned().collect();
        cl.records = keep;
    }
    serde_json::to_string_pretty(&cl).unwrap_or_default() + "\n"
}

fn verify(data: &DataStore, a: &VerifyArgs, seed: u64) -> Result<Outcome, Failure> {
    let reports = match &a.example {
        Some(id) => vec![verify_example(data, id, seed)?],
        None => verify_all(data, seed)?,
    };
    let failed = reports.iter().any(|r| r.status == ExampleStatus::Fail);
    let text = match a.format {
        Fmt::Json => serde_json::to_string_pretty(&reports).unwrap_or_default() + "\n",
        _ => {
            let mut s: String = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            if a.all {
                let count = |st| reports.iter().filter(|r| r.status == st).count();
                s.push_str(&format!(
                    "\n{} passed, {} failed, {} skipped\n",
                    count(ExampleStatus::Pass),
                    count(ExampleStatus::Fail),
                    count(ExampleStatus::Skipped)
                ));
            }
            s
        }
    };
    Ok(Outcome { text, failed })
}

const ALPHAS: [i64; 3] = [0, 1, 2];

fn oracle(n: u32, tol: f64) -> Result<Outcome, Failure> {
    if !PURELY_ORDERS.contains(&n) {
        return Err(Error::UnsupportedOrder(n).into());
    }
    if n > 21 {
        return Err(Failure::Usage(format!(
            "order {n}: the brute-force box is too large to search; the oracle covers orders 7, 14 and 21"
        )));
    }
    let float = oracle_type_counts(n, &ALPHAS, tol);
    let mut exact = Vec::new();
    for a in ALPHAS {
        exact.extend(enumerate_type_counts(n, &TypeCountConstraints::euler_box(n, a))?);
    }
    exact.sort();
    let mut s = format!(
        "order {n}, α ∈ {{0,1,2}}, N + 2α ≤ 24, tolerance {tol:e}\nexact: {} solutions\nfloat: {} solutions\n",
        exact.len(),
        float.len()
    );
    for v in exact.iter().filter(|v| !float.contains(v)) {
        s.push_str(&format!("  only exact: {v}\n"));
    }
    for v in float.iter().filter(|v| !exact.contains(v)) {
        s.push_str(&format!("  only float: {v}\n"));
    }
    let failed = float != exact;
    s.push_str(if failed { "disagree\n" } else { "agree\n" });
    Ok(Outcome { text: s, failed })
}

fn dump_data(data: &DataStore, name: Option<&str>, list: bool) -> Result<Outcome, Failure> {
    let names = file_names();
    let Some(name) = name.filter(|_| !list) else {
        return Ok(Outcome {
            text: names.join("\n") + "\n",
            failed: false,
        });
    };
    let found = [
        name.to_string(),
        format!("{name}.json"),
        format!("fixtures/{name}.json"),
        format!("fixtures/{name}"),
    ]
    .into_iter()
    .find(|c| names.contains(&c.as_str()));
    match found.and_then(|f| data.raw(&f)) {
        Some(text) => Ok(Outcome {
            text: text.to_string(),
            failed: false,
        }),
        None => Err(Failure::Usage(format!(
            "unknown data file {name}; try `k3fix data --list`"
        ))),
    }
}
