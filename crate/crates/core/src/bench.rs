//! Batch optimization of a directory of `.qasm` files with a tabular report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::circuit::CostReport;
use crate::error::{Error, Result};
use crate::placement::{optimize, Reduction};
use crate::qasm;
use crate::realization::RealizationTable;
use crate::simulator::equivalent;

/// Widest device on which rows are checked against the dense simulator.
pub const VERIFY_MAX_QUBITS: usize = 5;
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub name: String,
    pub qubits: usize,
    pub initial: CostReport,
    pub final_: CostReport,
    pub reduction: Reduction,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowError {
    pub name: String,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub errors: Vec<RowError>,
}

impl BenchReport {
    /// Rows whose mapped circuit failed the equivalence check (as opposed to
    /// rows that were too wide to check).
    pub fn failed_verification(&self, table: &RealizationTable) -> usize {
        if table.graph().num_physical() > VERIFY_MAX_QUBITS {
            0
        } else {
            self.rows.iter().filter(|r| !r.verified).count()
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Markdown => self.render_markdown(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out =
            String::from("name,qubits,gates_in,levels_in,gates_out,levels_out,gates_pct,levels_pct,verified\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.name,
                r.qubits,
                r.initial.gates,
                r.initial.levels,
                r.final_.gates,
                r.final_.levels,
                r.reduction.gates,
                r.reduction.levels,
                r.verified
            )
            .unwrap();
        }
        for e in &self.errors {
            writeln!(out, "{},,,,,,,,error", e.name).unwrap();
        }
        out
    }

    fn render_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| Circuit | Qubits | Initial gates | Initial levels | Final gates | Final levels | % Gates | % Levels | Verified |\n");
        out.push_str("|---|---:|---:|---:|---:|---:|---:|---:|:---:|\n");
        for r in &self.rows {
            writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                r.name,
                r.qubits,
                r.initial.gates,
                r.initial.levels,
                r.final_.gates,
                r.final_.levels,
                r.reduction.gates,
                r.reduction.levels,
                if r.verified { "yes" } else { "**no** ⚠" }
            )
            .unwrap();
        }
        for e in &self.errors {
            writeln!(out, "| {} | error: {} | | | | | | | |", e.name, e.message.replace('|', "\\|")).unwrap();
        }
        out
    }
}

fn run_one(path: &Path, table: &RealizationTable) -> Result<BenchRow> {
    let text = std::fs::read_to_string(path)?;
    let circuit = qasm::parse(&text)?;
    let result = optimize(&circuit, table)?;

    // Closed loop: what we would write out must parse back and match.
    let reparsed = qasm::parse(&qasm::emit(&result.mapped))?;
    let verified = if reparsed != result.mapped {
        false
    } else if table.graph().num_physical() <= VERIFY_MAX_QUBITS {
        equivalent(&circuit, &reparsed, &result.placement, VERIFY_TOL)?
    } else {
        false
    };

    Ok(BenchRow {
        name: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        qubits: circuit.num_qubits(),
        initial: result.initial_cost,
        final_: result.final_cost,
        reduction: result.reduction_pct,
        verified,
    })
}

fn qasm_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "qasm"))
        .collect();
    files.sort();
    Ok(files)
}

/// Optimizes every `.qasm` file in `dir`. Per-file failures become
/// [`RowError`]s; an empty directory is an error.
pub fn bench(dir: &Path, table: &RealizationTable) -> Result<BenchReport> {
    let files = qasm_files(dir)?;
    if files.is_empty() {
        return Err(Error::Bench(format!("no .qasm files in {}", dir.display())));
    }
    let outcomes: Vec<(PathBuf, Result<BenchRow>)> = files
        .into_par_iter()
        .map(|p| {
            let r = run_one(&p, table);
            (p, r)
        })
        .collect();

    let mut report = BenchReport::default();
    for (path, outcome) in outcomes {
        match outcome {
            Ok(row) => report.rows.push(row),
            Err(e) => report.errors.push(RowError {
                name: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                message: e.to_string(),
            }),
        }
    }
    report.rows.sort_by(|a, b| b.reduction.gates.cmp(&a.reduction.gates).then_with(|| a.name.cmp(&b.name)));
    report.errors.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(report)
}

/// Outcome of [`random_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RandomCheck {
    pub circuits: usize,
    pub inequivalent: usize,
    pub illegal: usize,
    pub worse_than_naive: usize,
}

impl RandomCheck {
    pub fn passed(&self) -> bool {
        self.inequivalent == 0 && self.illegal == 0 && self.worse_than_naive == 0
    }
}

/// Optimizes `count` seeded random circuits (3 to 5 qubits, capped at the
/// device width, up to `max_gates` gates) and checks each result for
/// equivalence, legality and cost against naive substitution.
pub fn random_check(table: &RealizationTable, count: usize, seed: u64, max_gates: usize) -> Result<RandomCheck> {
    use rand::{Rng, SeedableRng};

    let n = table.graph().num_physical();
    if n > VERIFY_MAX_QUBITS {
        return Err(Error::TooManyQubits { what: "random verification", limit: VERIFY_MAX_QUBITS, got: n });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut summary = RandomCheck { circuits: count, ..Default::default() };
    for _ in 0..count {
        let width = rng.gen_range(3.min(n)..=n.min(5));
        let len = rng.gen_range(1..=max_gates.max(1));
        let c = crate::circuit::random_circuit(&mut rng, width, len);
        let r = optimize(&c, table)?;
        if !equivalent(&c, &r.mapped, &r.placement, VERIFY_TOL)? {
            summary.inequivalent += 1;
        }
        let legal = r
            .mapped
            .gates()
            .iter()
            .filter(|g| g.qubits().len() == 2)
            .all(|g| table.graph().allows(g.qubits()[0], g.qubits()[1]).unwrap_or(false));
        if !legal {
            summary.illegal += 1;
        }
        if r.final_cost.gates > crate::placement::naive_substitution_cost(&c, table)? {
            summary.worse_than_naive += 1;
        }
    }
    Ok(summary)
}
