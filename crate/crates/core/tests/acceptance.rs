//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use qxopt::circuit::{random_circuit, Circuit, Gate, GateKind, Placement};
use qxopt::nonclassicality::{
    lhv_bound, mermin3, sanitize_complex, uhlmann_fidelity, ProbabilityDistribution, PsdPolicy,
};
use qxopt::peephole::{simplify, verify_rules, RULES};
use qxopt::placement::{naive_substitution_cost, optimize};
use qxopt::qasm;
use qxopt::realization::{build_table, RealizationTable};
use qxopt::simulator::{equivalent, run_ideal, run_noisy, DensityMatrix, NoiseSpec, StateVector};
use qxopt::CouplingGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn dist(rel: &str) -> ProbabilityDistribution {
    ProbabilityDistribution::parse(&read(rel)).unwrap()
}

fn circuit(rel: &str) -> Circuit {
    qasm::parse(&read(rel)).unwrap()
}

fn table(arch: &str) -> RealizationTable {
    build_table(&CouplingGraph::builtin(arch).unwrap()).unwrap()
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mermin_reproduction() -> Outcome {
    let m = |x: &str, y: &str| mermin3(&dist(x), &dist(y)).unwrap();
    let short = m("distributions/xxy_original_1024.txt", "distributions/yyy_original_1024.txt");
    let long = m("distributions/xxy_original_8192.txt", "distributions/yyy_original_8192.txt");
    let opt = m("distributions/xxy_optimized_8192.txt", "distributions/yyy_optimized_8192.txt");
    let ok = within(short.m3, 2.85, 0.02)
        && within(long.m3, 3.009, 0.01)
        && within(opt.m3, 3.126, 0.01)
        && within(opt.violation, 1.116, 0.01);
    check(
        ok,
        format!("m3 = {:.4} / {:.4} / {:.4}, optimized violation = {:.4}", short.m3, long.m3, opt.m3, opt.violation),
    )
}

fn fidelity_reproduction() -> Outcome {
    let dm = |rel: &str| sanitize_complex(DensityMatrix::parse_raw(&read(rel)).unwrap(), PsdPolicy::Keep).unwrap();
    let ideal = dm("density/ideal_xxy.dm");
    let a = uhlmann_fidelity(&ideal, &dm("density/experiment_original.dm")).unwrap();
    let b = uhlmann_fidelity(&ideal, &dm("density/experiment_optimized.dm")).unwrap();
    check(within(a, 0.72, 0.03) && within(b, 0.90, 0.03), format!("F = {a:.4} (original), {b:.4} (optimized)"))
}

fn quantum_and_classical_bounds() -> Outcome {
    let ideal = |rel: &str| {
        let c = circuit(rel);
        run_ideal(&c, &StateVector::zero(c.num_qubits())).unwrap().probabilities()
    };
    let m = mermin3(&ideal("circuits/ghz_xxy.qasm"), &ideal("circuits/ghz_yyy.qasm")).unwrap();
    let lhv = lhv_bound();
    check(within(m.m3, 4.0, 1e-9) && lhv == 2.0, format!("ideal m3 = {:.12}, lhv bound = {lhv}", m.m3))
}

fn realization_table_soundness() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut qx2_14 = usize::MAX;
    for arch in ["qx2", "qx4"] {
        let t = table(arch);
        let n = t.graph().num_physical();
        for e in t.entries() {
            let want = Circuit::from_gates(n, vec![Gate::cnot(e.control, e.target)]).unwrap();
            if !equivalent(&want, &e.sequence, &Placement::identity(n), 1e-9).unwrap() {
                bad.push(format!("{arch} ({},{})", e.control, e.target));
            }
            checked += 1;
        }
        if arch == "qx2" {
            qx2_14 = t.lookup(1, 4).unwrap().total_gates;
        }
    }
    let elapsed = start.elapsed();
    check(
        bad.is_empty() && checked == 40 && qx2_14 <= 10 && elapsed < Duration::from_secs(1),
        format!("{checked} entries, unsound {bad:?}, QX2 (1,4) = {qx2_14} gates, {elapsed:.2?}"),
    )
}

fn worked_example_placement() -> Outcome {
    let c = Circuit::from_gates(3, vec![Gate::cnot(0, 1), Gate::cnot(1, 2)]).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for (arch, stated) in [("qx2", [0, 1, 2]), ("qx4", [3, 2, 0])] {
        let r = optimize(&c, &table(arch)).unwrap();
        ok &= r.placement.as_slice() == stated || r.final_cost.gates == 2;
        parts.push(format!("{arch}: {} with {} gates", r.placement, r.final_cost.gates));
    }
    check(ok, parts.join("; "))
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let t = table("qx4");
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut inequivalent, mut illegal, mut worse) = (0, 0, 0);
    for i in 0..200 {
        let width = 3 + i % 3;
        let len = 1 + (i * 7) % 25;
        let c = random_circuit(&mut rng, width, len);
        let r = optimize(&c, &t).unwrap();
        if !equivalent(&c, &r.mapped, &r.placement, 1e-8).unwrap() {
            inequivalent += 1;
        }
        let legal = r
            .mapped
            .gates()
            .iter()
            .filter(|g| g.kind() == GateKind::CNOT)
            .all(|g| t.graph().allows(g.qubits()[0], g.qubits()[1]).unwrap());
        if !legal {
            illegal += 1;
        }
        if r.final_cost.gates > naive_substitution_cost(&c, &t).unwrap() {
            worse += 1;
        }
    }
    let elapsed = start.elapsed();
    check(
        inequivalent + illegal + worse == 0 && elapsed < Duration::from_secs(60),
        format!("200 circuits: {inequivalent} inequivalent, {illegal} illegal, {worse} above naive; {elapsed:.2?}"),
    )
}

fn noise_monotonicity() -> Outcome {
    let noise = NoiseSpec::default();
    let fid = |rel: &str| {
        let c = circuit(rel);
        let ideal = DensityMatrix::pure(&run_ideal(&c, &StateVector::zero(c.num_qubits())).unwrap());
        let noisy = run_noisy(&c, &noise).unwrap();
        (c.gate_count(), uhlmann_fidelity(&ideal, &noisy).unwrap())
    };
    let (g0, f0) = fid("circuits/mermin_xxy_original.qasm");
    let (g1, f1) = fid("circuits/mermin_xxy_optimized.qasm");
    check(g0 == 12 && g1 == 4 && f1 > f0, format!("{g0} gates: F = {f0:.6}; {g1} gates: F = {f1:.6}"))
}

fn peephole_suite() -> Outcome {
    let unsound = verify_rules();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut grew, mut not_idempotent, mut inequivalent) = (0, 0, 0);
    for i in 0..500 {
        let width = 1 + i % 4;
        let c = random_circuit(&mut rng, width, 30);
        let s = simplify(&c);
        if s.gate_count() > c.gate_count() {
            grew += 1;
        }
        if simplify(&s) != s {
            not_idempotent += 1;
        }
        if !equivalent(&c, &s, &Placement::identity(width), 1e-9).unwrap() {
            inequivalent += 1;
        }
    }
    check(
        unsound.is_empty() && grew + not_idempotent + inequivalent == 0,
        format!(
            "{} rules, unsound {unsound:?}; 500 circuits: {grew} grew, {not_idempotent} not idempotent, {inequivalent} inequivalent",
            RULES.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 mermin reproduction", mermin_reproduction),
        ("2 fidelity reproduction", fidelity_reproduction),
        ("3 quantum and classical bounds", quantum_and_classical_bounds),
        ("4 realization table soundness", realization_table_soundness),
        ("5 worked example placement", worked_example_placement),
        ("6 random circuit properties", property_suite),
        ("7 noise vs gate count", noise_monotonicity),
        ("8 peephole rules", peephole_suite),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", 8 - failed, 8);
    if failed > 0 {
        std::process::exit(1);
    }
}
