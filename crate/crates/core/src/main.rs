use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qxopt::bench::{self, Format};
use qxopt::circuit::{Circuit, Placement};
use qxopt::error::SourceSpan;
use qxopt::nonclassicality::{self, ProbabilityDistribution, PsdPolicy, CLASSICAL_BOUND, QUANTUM_BOUND};
use qxopt::peephole::simplify_traced;
use qxopt::placement::{optimize, MappingResult};
use qxopt::qasm;
use qxopt::realization::{build_table, RealizationTable};
use qxopt::simulator::{equivalent, DensityMatrix};
use qxopt::{CouplingGraph, Error};

const EXIT_ERROR: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "qxopt", version, about = "Map and optimize Clifford+T circuits for CNOT-restricted devices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum TableFormat {
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Find the cheapest placement and write the mapped circuit.
    Optimize {
        /// qx2, qx4 or @path to a coupling-graph file
        #[arg(long, default_value = "qx4")]
        arch: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
        /// Reject measure/barrier instead of dropping them
        #[arg(long)]
        strict: bool,
    },
    /// Apply the peephole rules without mapping.
    Simplify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print each rewrite to stderr
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        strict: bool,
    },
    /// Check two circuits for equivalence up to global phase, or run a
    /// seeded random self-check of the optimizer.
    Verify {
        /// Original and mapped circuit
        #[arg(num_args = 2, required_unless_present = "random")]
        files: Vec<PathBuf>,
        /// Comma-separated logical→physical map, e.g. 0,1,2
        #[arg(long)]
        placement: Option<String>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "qx4")]
        arch: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Optimize every .qasm file in a directory and print a table.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value = "qx4")]
        arch: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        /// Report per-file errors as rows instead of failing
        #[arg(long)]
        keep_going: bool,
    },
    /// Three-qubit Mermin value from two measured distributions.
    Mermin {
        #[arg(long)]
        xxy: PathBuf,
        #[arg(long)]
        yyy: PathBuf,
    },
    /// Uhlmann fidelity between two density-matrix files.
    Fidelity {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Clip negative eigenvalues before renormalizing
        #[arg(long)]
        clamp: bool,
    },
    /// CNOT realization table utilities.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
}

#[derive(Subcommand)]
enum TableAction {
    /// Print every entry of the table.
    Dump {
        #[arg(long, default_value = "qx4")]
        arch: String,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_circuit(path: &Path, strict: bool) -> Result<Circuit, Error> {
    let report = qasm::parse_with_report(&read(path)?, strict)?;
    for d in &report.dropped {
        eprintln!("warning: {}:{}: dropped `{}`", path.display(), d.span, d.statement);
    }
    Ok(report.circuit)
}

fn table_for(arch: &str) -> Result<RealizationTable, Error> {
    build_table(&CouplingGraph::from_arch_spec(arch)?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report(r: &MappingResult, format: Option<ReportFormat>) {
    match format {
        Some(ReportFormat::Json) => println!("{}", serde_json::to_string_pretty(r).expect("report serializes")),
        Some(ReportFormat::Csv) => {
            println!("placement,gates_in,levels_in,gates_out,levels_out,gates_pct,levels_pct");
            let p: Vec<String> = r.placement.as_slice().iter().map(usize::to_string).collect();
            println!(
                "{},{},{},{},{},{},{}",
                p.join(" "),
                r.initial_cost.gates,
                r.initial_cost.levels,
                r.final_cost.gates,
                r.final_cost.levels,
                r.reduction_pct.gates,
                r.reduction_pct.levels
            );
        }
        None => {
            eprintln!("placement {}", r.placement);
            eprintln!(
                "gates {} -> {} ({}%), levels {} -> {} ({}%)",
                r.initial_cost.gates,
                r.final_cost.gates,
                r.reduction_pct.gates,
                r.initial_cost.levels,
                r.final_cost.levels,
                r.reduction_pct.levels
            );
        }
    }
}

fn parse_placement(s: &str) -> Result<Placement, Error> {
    let mut column = 1;
    let mut map = Vec::new();
    for t in s.split(',') {
        let q = t.trim().parse::<usize>().map_err(|_| Error::Parse {
            span: SourceSpan { line: 1, column },
            message: format!("bad placement entry {t:?}"),
        })?;
        map.push(q);
        column += t.len() + 1;
    }
    Placement::new(map)
}

fn load_dm(path: &Path, policy: PsdPolicy) -> Result<DensityMatrix, Error> {
    nonclassicality::sanitize_complex(DensityMatrix::parse_raw(&read(path)?)?, policy)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Optimize { arch, input, out, report, strict } => {
            let c = load_circuit(&input, strict)?;
            let table = table_for(&arch)?;
            let r = optimize(&c, &table)?;
            let text = qasm::emit(&r.mapped);
            match &out {
                Some(p) => std::fs::write(p, text)?,
                // keep stdout for the report when one was asked for
                None if report.is_some() => {}
                None => print!("{text}"),
            }
            print_report(&r, report);
        }
        Command::Simplify { input, out, trace, strict } => {
            let c = load_circuit(&input, strict)?;
            let (s, events) = simplify_traced(&c);
            if trace {
                for e in &events {
                    eprintln!("{} at {} with {}", e.rule, e.position, e.partner);
                }
            }
            write_or_print(out.as_deref(), &qasm::emit(&s))?;
            eprintln!(
                "gates {} -> {}, levels {} -> {}",
                c.gate_count(),
                s.gate_count(),
                c.level_count(),
                s.level_count()
            );
        }
        Command::Verify { files, placement, random, seed, arch, tol } => {
            if let Some(n) = random {
                let table = table_for(&arch)?;
                let s = bench::random_check(&table, n, seed, 25)?;
                println!(
                    "{} circuits: {} inequivalent, {} illegal, {} worse than naive",
                    s.circuits, s.inequivalent, s.illegal, s.worse_than_naive
                );
                return Ok(if s.passed() { 0 } else { EXIT_VERIFY_FAILED });
            }
            let a = load_circuit(&files[0], false)?;
            let b = load_circuit(&files[1], false)?;
            let ok = match placement {
                Some(p) => equivalent(&a, &b, &parse_placement(&p)?, tol)?,
                None => find_placement(&a, &b, tol)?.is_some(),
            };
            println!("{}", if ok { "equivalent" } else { "NOT equivalent" });
            if !ok {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Bench { dir, arch, format, keep_going } => {
            let table = table_for(&arch)?;
            let report = bench::bench(&dir, &table)?;
            if !keep_going {
                if let Some(e) = report.errors.first() {
                    return Err(Error::Bench(format!("{}: {}", e.name, e.message)));
                }
            }
            let format = match format {
                TableFormat::Csv => Format::Csv,
                TableFormat::Markdown => Format::Markdown,
            };
            print!("{}", report.render(format));
            if report.failed_verification(&table) > 0 {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Mermin { xxy, yyy } => {
            let xxy = ProbabilityDistribution::parse(&read(&xxy)?)?;
            let yyy = ProbabilityDistribution::parse(&read(&yyy)?)?;
            let m = nonclassicality::mermin3(&xxy, &yyy)?;
            println!("m3 = {:.3}", m.m3);
            println!("violation = {:.3}", m.violation);
            println!("classical bound = {CLASSICAL_BOUND}, quantum bound = {QUANTUM_BOUND}");
        }
        Command::Fidelity { a, b, clamp } => {
            let policy = if clamp { PsdPolicy::Clamp } else { PsdPolicy::Keep };
            let f = nonclassicality::uhlmann_fidelity(&load_dm(&a, policy)?, &load_dm(&b, policy)?)?;
            println!("fidelity = {f:.3}");
        }
        Command::Table { action: TableAction::Dump { arch } } => {
            print!("{}", table_for(&arch)?.dump());
        }
    }
    Ok(0)
}

/// Searches injections of `a`'s qubits into `b`'s for one under which the
/// two circuits agree.
fn find_placement(a: &Circuit, b: &Circuit, tol: f64) -> Result<Option<Placement>, Error> {
    use itertools::Itertools;
    if a.num_qubits() > b.num_qubits() {
        return Ok(None);
    }
    for p in (0..b.num_qubits()).permutations(a.num_qubits()) {
        let p = Placement::new(p)?;
        if equivalent(a, b, &p, tol)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
