use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use bsgraph::dot::{bs_graph_dot, factor_graph_dot};
use bsgraph::graph::{unique_return_path_check, validate_gray_code};
use bsgraph::ham::{build_hamiltonian_cycle, BaseMode, BuildOptions};
use bsgraph::prisms::{check_table1_entry, prism_hamilton_connected, table1_paths};
use bsgraph::small_cycles::{census, certify, OracleScope};
use bsgraph::{sjt_cycle, Error, Form, Permutation, DEFAULT_N_CAP, MAX_N};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const CENSUS_SCHEMA: &str = "bsgraph.census/v1";
const PLAN_SCHEMA: &str = "bsgraph.plan/v1";
const WALK_SCHEMA: &str = "bsgraph.walk/v1";

#[derive(Parser)]
#[command(
    name = "bsgraph",
    version,
    about = "Bubble-sort graph cycles and Hamiltonian Gray codes"
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 4- and 6-cycle census.
    #[command(subcommand)]
    Cycles(CyclesCmd),
    /// Hamiltonian cycles of BS_n.
    #[command(subcommand)]
    Ham(HamCmd),
    /// Built-in fixture checks.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
    /// Small-case structural checks.
    #[command(subcommand)]
    Props(PropsCmd),
    /// Graphviz export.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Subcommand)]
enum CyclesCmd {
    Census {
        #[arg(long)]
        n: usize,
        /// Check the census against exhaustive enumeration.
        #[arg(long)]
        certify: bool,
        /// `full` or `sample:<count>`; defaults to full for n <= 6.
        #[arg(long)]
        scope: Option<Scope>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum HamCmd {
    /// Prism-lifted Hamiltonian cycle (n >= 5).
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Base::Sjt)]
        base: Base,
        #[arg(long, value_enum, default_value_t = Emit::Indices)]
        emit: Emit,
        #[arg(long, default_value_t = DEFAULT_N_CAP)]
        n_cap: usize,
    },
    /// Steinhaus–Johnson–Trotter cycle.
    Sjt {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Indices)]
        emit: Emit,
        #[arg(long, default_value_t = DEFAULT_N_CAP)]
        n_cap: usize,
    },
    /// Re-check a Gray code read from a file of generator indices.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        file: PathBuf,
        /// Treat the file as a Hamiltonian path rather than a cycle.
        #[arg(long)]
        open: bool,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    Table1,
}

#[derive(Subcommand)]
enum PropsCmd {
    Check,
}

#[derive(Subcommand)]
enum ExportCmd {
    Dot {
        #[arg(long, value_enum)]
        what: DotTarget,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    Sjt,
    Recursive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Indices,
    Perms,
    Plan,
}

#[derive(Clone, Copy, ValueEnum)]
enum DotTarget {
    Bs,
    Factor,
}

#[derive(Clone, Copy)]
struct Scope(OracleScope);

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "full" {
            return Ok(Scope(OracleScope::Full));
        }
        let count = s
            .strip_prefix("sample:")
            .and_then(|c| c.parse::<usize>().ok())
            .filter(|&c| c >= 1)
            .ok_or_else(|| {
                format!("expected `full` or `sample:<count>` with count >= 1, got {s:?}")
            })?;
        Ok(Scope(OracleScope::Sample(count)))
    }
}

/// Exit statuses: 1 usage, 2 failed verification, 3 broken invariant.
enum Failure {
    Usage(String),
    Verify,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::InPrism { .. } => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verify) => ExitCode::from(2),
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Cycles(CyclesCmd::Census {
            n,
            certify,
            scope,
            seed,
        }) => cycles_census(n, certify, scope.map(|s| s.0), seed),
        Command::Ham(HamCmd::Build {
            n,
            base,
            emit,
            n_cap,
        }) => ham_build(n, base, emit, n_cap),
        Command::Ham(HamCmd::Sjt { n, emit, n_cap }) => ham_sjt(n, emit, n_cap),
        Command::Ham(HamCmd::Verify { n, file, open }) => ham_verify(n, &file, open),
        Command::Fixtures(FixturesCmd::Table1) => fixtures_table1(),
        Command::Props(PropsCmd::Check) => props_check(),
        Command::Export(ExportCmd::Dot { what, n }) => {
            let dot = match what {
                DotTarget::Bs => bs_graph_dot(n)?,
                DotTarget::Factor => factor_graph_dot(n)?,
            };
            write_stdout(&dot);
            Ok(())
        }
    }
}

/// Writes to stdout; a reader that hangs up early (`| head`) is not an error.
fn write_stdout(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush());
}

fn print_json(v: &Value) {
    write_stdout(&(serde_json::to_string_pretty(v).expect("json values always serialize") + "\n"));
}

fn cycles_census(n: usize, want_certify: bool, scope: Option<OracleScope>, seed: u64) -> Outcome {
    // The closed forms are cheap at any size; enumeration is capped.
    let cap = if want_certify { DEFAULT_N_CAP } else { MAX_N };
    if n > cap {
        return Err(Failure::Usage(format!(
            "n = {n} exceeds the cap of {cap} for this command"
        )));
    }
    let c = serde_json::to_value(census(n)).map_err(|e| Failure::Internal(e.to_string()))?;
    let mut out = json!({
        "schema": CENSUS_SCHEMA,
        "n": n,
        "per_vertex": {
            "families": c["per_vertex"],
            "c4": c["per_vertex_total_c4"],
            "c6": c["per_vertex_total_c6"],
        },
        "totals": { "c4": c["total_c4"], "c6": c["total_c6"] },
        "certified": Value::Null,
    });
    if !want_certify {
        print_json(&out);
        return Ok(());
    }
    let scope = scope.unwrap_or_else(|| OracleScope::default_for(n));
    let report = certify(n, scope, seed)?;
    let certified = report.certified;
    out["certified"] = json!(certified);
    out["oracle_scope"] = json!(scope.label());
    if let OracleScope::Sample(k) = scope {
        out["sample_size"] = json!(k);
    }
    out["seed"] = json!(seed);
    out["certification"] =
        serde_json::to_value(&report).map_err(|e| Failure::Internal(e.to_string()))?;
    print_json(&out);
    if certified {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn emit_walk(start: &Permutation, form: &Form, emit: Emit) -> Outcome {
    let mut buf = String::new();
    match emit {
        Emit::Indices => {
            for g in form.indices() {
                writeln!(buf, "{g}").unwrap();
            }
        }
        Emit::Perms => {
            let mut walk = form.trace(start)?;
            walk.pop();
            for v in walk {
                writeln!(buf, "{}", v.label()).unwrap();
            }
        }
        Emit::Plan => unreachable!("handled by the caller"),
    }
    write_stdout(&buf);
    Ok(())
}

fn ham_build(n: usize, base: Base, emit: Emit, n_cap: usize) -> Outcome {
    if n < 5 {
        return Err(Failure::Usage(format!(
            "the prism construction needs n >= 5 (got {n}); try `bsgraph ham sjt --n {n}`"
        )));
    }
    if n > n_cap {
        return Err(Failure::Usage(format!("n = {n} exceeds --n-cap {n_cap}")));
    }
    let opts = BuildOptions {
        base: match base {
            Base::Sjt => BaseMode::Sjt,
            Base::Recursive => BaseMode::Recursive,
        },
        n_cap,
    };
    let cycle = build_hamiltonian_cycle(n, &opts)?;
    // The builder validates too, but nothing leaves unchecked.
    if !validate_gray_code(n, &cycle.form, true).ok {
        return Err(Failure::Internal(
            "emitted cycle failed re-validation".into(),
        ));
    }
    if emit == Emit::Plan {
        let mut plan =
            serde_json::to_value(&cycle.plan).map_err(|e| Failure::Internal(e.to_string()))?;
        plan["schema"] = json!(PLAN_SCHEMA);
        plan["start"] = json!(cycle.start.label());
        plan["length"] = json!(cycle.form.len());
        print_json(&plan);
        return Ok(());
    }
    emit_walk(&cycle.start, &cycle.form, emit)
}

fn ham_sjt(n: usize, emit: Emit, n_cap: usize) -> Outcome {
    if n > n_cap {
        return Err(Failure::Usage(format!("n = {n} exceeds --n-cap {n_cap}")));
    }
    if emit == Emit::Plan {
        return Err(Failure::Usage(
            "`--emit plan` only applies to `ham build`".into(),
        ));
    }
    let form = sjt_cycle(n)?;
    emit_walk(&Permutation::identity(n)?, &form, emit)
}

fn ham_verify(n: usize, file: &PathBuf, open: bool) -> Outcome {
    if !(2..=DEFAULT_N_CAP).contains(&n) {
        return Err(Failure::Usage(format!(
            "n = {n} is outside 2..={DEFAULT_N_CAP}"
        )));
    }
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let mut indices = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = line.parse::<usize>().map_err(|_| {
            Failure::Usage(format!("line {}: {line:?} is not an index", lineno + 1))
        })?;
        indices.push(g);
    }
    let report = validate_gray_code(n, &Form::raw(indices.clone()), !open);
    print_json(&json!({
        "schema": WALK_SCHEMA,
        "n": n,
        "closed": !open,
        "length": indices.len(),
        "ok": report.ok,
        "first_violation": report.first_violation,
    }));
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn fixtures_table1() -> Outcome {
    // The 6-prism P_6(4, 2) of BS_5 through the identity.
    let (i, k) = (4, 2);
    let start = Permutation::identity(5)?;
    let entries = table1_paths(i, k, 5)?;
    let mut out = String::new();
    let mut passed = 0;
    for (idx, e) in entries.iter().enumerate() {
        let steps: Vec<String> = e.path.indices().iter().map(usize::to_string).collect();
        match check_table1_entry(&start, e, i, k) {
            Ok(()) => {
                passed += 1;
                writeln!(
                    out,
                    "row {} path {:2}: pass  {}",
                    e.row + 1,
                    idx + 1,
                    steps.join(" ")
                )
                .unwrap();
            }
            Err(err) => writeln!(
                out,
                "row {} path {:2}: FAIL  {}  ({err})",
                e.row + 1,
                idx + 1,
                steps.join(" ")
            )
            .unwrap(),
        }
    }
    writeln!(out, "{passed}/{} pass", entries.len()).unwrap();
    write_stdout(&out);
    if passed == entries.len() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn props_check() -> Outcome {
    let mut out = String::new();
    let mut all_ok = true;
    let mut row = Vec::new();
    for m in 3..=7 {
        let connected = prism_hamilton_connected(m)?;
        all_ok &= connected == (m % 2 == 1);
        row.push(if connected { "T" } else { "F" });
    }
    writeln!(
        out,
        "prism C_m x K_2 Hamilton-connected, m = 3..7: [{}]",
        row.join(",")
    )
    .unwrap();

    writeln!(out, "unique return paths (n, j, d):").unwrap();
    for n in 3..=6 {
        let mut cells = Vec::new();
        for d in 1..=4.min(n - 2) {
            for j in 1..=4.min(n - d) {
                let holds = unique_return_path_check(n, j, d)?;
                all_ok &= holds;
                cells.push(format!("({n},{j},{d})={}", if holds { "T" } else { "F" }));
            }
        }
        writeln!(out, "  n={n}: {}", cells.join(" ")).unwrap();
    }
    writeln!(
        out,
        "{}",
        if all_ok {
            "all checks pass"
        } else {
            "CHECK FAILED"
        }
    )
    .unwrap();
    write_stdout(&out);
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
