//! Local rewriting to a fixpoint.
//!
//! Two gates are adjacent when every gate between them acts on qubits
//! disjoint from theirs. A rule matches an adjacent pair acting on exactly the
//! same qubits (same control/target order for CNOT). Each rewrite removes at
//! least one gate, so the loop terminates.

use crate::circuit::{Circuit, Gate, GateKind};

/// `pattern` (two gates on the same qubits) rewrites to `replacement`, zero
/// or one gate on those qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: &'static str,
    pub pattern: [GateKind; 2],
    pub replacement: Option<GateKind>,
}

const fn cancel(name: &'static str, a: GateKind, b: GateKind) -> RewriteRule {
    RewriteRule { name, pattern: [a, b], replacement: None }
}

const fn merge(name: &'static str, a: GateKind, into: GateKind) -> RewriteRule {
    RewriteRule { name, pattern: [a, a], replacement: Some(into) }
}

/// Fixed rule list; the first matching rule wins.
pub const RULES: &[RewriteRule] = &[
    cancel("cancel-h-h", GateKind::H, GateKind::H),
    cancel("cancel-x-x", GateKind::X, GateKind::X),
    cancel("cancel-y-y", GateKind::Y, GateKind::Y),
    cancel("cancel-z-z", GateKind::Z, GateKind::Z),
    cancel("cancel-s-sdg", GateKind::S, GateKind::Sdg),
    cancel("cancel-sdg-s", GateKind::Sdg, GateKind::S),
    cancel("cancel-t-tdg", GateKind::T, GateKind::Tdg),
    cancel("cancel-tdg-t", GateKind::Tdg, GateKind::T),
    cancel("cancel-cnot-cnot", GateKind::CNOT, GateKind::CNOT),
    merge("merge-t-t", GateKind::T, GateKind::S),
    merge("merge-tdg-tdg", GateKind::Tdg, GateKind::Sdg),
    merge("merge-s-s", GateKind::S, GateKind::Z),
    merge("merge-sdg-sdg", GateKind::Sdg, GateKind::Z),
];

/// A rule that fired at gate index `position` (of the circuit at that step).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteEvent {
    pub rule: &'static str,
    pub position: usize,
    pub partner: usize,
}

/// Index of the next gate adjacent to `gates[i]` that acts on exactly the
/// same qubits, if nothing in between touches them.
fn partner(gates: &[Gate], i: usize) -> Option<usize> {
    let g = &gates[i];
    let j = i + 1 + gates[i + 1..].iter().position(|h| h.shares_qubit(g))?;
    (gates[j].qubits() == g.qubits()).then_some(j)
}

fn find_rewrite(gates: &[Gate]) -> Option<(usize, usize, &'static RewriteRule)> {
    for i in 0..gates.len() {
        if let Some(j) = partner(gates, i) {
            let pair = [gates[i].kind(), gates[j].kind()];
            if let Some(rule) = RULES.iter().find(|r| r.pattern == pair) {
                return Some((i, j, rule));
            }
        }
    }
    None
}

pub fn simplify(c: &Circuit) -> Circuit {
    simplify_traced(c).0
}

/// Like [`simplify`], also returning each rewrite in the order applied.
pub fn simplify_traced(c: &Circuit) -> (Circuit, Vec<RewriteEvent>) {
    let mut gates = c.gates().to_vec();
    let mut trace = Vec::new();
    while let Some((i, j, rule)) = find_rewrite(&gates) {
        trace.push(RewriteEvent { rule: rule.name, position: i, partner: j });
        match rule.replacement {
            None => {
                gates.remove(j);
                gates.remove(i);
            }
            Some(kind) => {
                gates[i] = Gate::single(kind, gates[i].qubits()[0]);
                gates.remove(j);
            }
        }
    }
    (Circuit::from_parts_unchecked(c.num_qubits(), gates), trace)
}

/// Checks every rule's pattern against its replacement with the dense
/// simulator (up to global phase). Returns the names of rules that fail.
pub fn verify_rules() -> Vec<&'static str> {
    use crate::circuit::Placement;
    use crate::simulator::equivalent;

    RULES
        .iter()
        .filter(|rule| {
            let (width, qubits): (usize, &[usize]) =
                if rule.pattern[0] == GateKind::CNOT { (2, &[0, 1]) } else { (1, &[0]) };
            let lhs = Circuit::from_gates(width, rule.pattern.iter().map(|&k| Gate::new(k, qubits).unwrap()).collect())
                .unwrap();
            let rhs =
                Circuit::from_gates(width, rule.replacement.iter().map(|&k| Gate::new(k, qubits).unwrap()).collect())
                    .unwrap();
            !equivalent(&lhs, &rhs, &Placement::identity(width), 1e-12).unwrap_or(false)
        })
        .map(|r| r.name)
        .collect()
}
