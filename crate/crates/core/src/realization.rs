//! Per-device table of the cheapest known legal realization of every
//! `CNOT(c, t)`.
//!
//! Adjacent pairs use the native CNOT or its Hadamard-conjugated reverse.
//! Distant pairs try, along every shortest undirected path, (a) swapping one
//! endpoint next to the other, applying the CNOT and swapping back, and
//! (b) the four-CNOT bridge `CX(a,c) = CX(a,b) CX(b,c) CX(a,b) CX(b,c)`
//! applied recursively. Each candidate is simplified and the cheapest kept.

use std::fmt::Write as _;

use crate::circuit::{Circuit, CostReport, Gate, GateKind};
use crate::error::{Error, Result};
use crate::peephole::simplify;
use crate::topology::CouplingGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationEntry {
    pub control: usize,
    pub target: usize,
    /// Gates over the device's physical qubits.
    pub sequence: Circuit,
    pub total_gates: usize,
    pub levels: usize,
}

impl RealizationEntry {
    pub fn cost(&self) -> CostReport {
        CostReport { gates: self.total_gates, levels: self.levels }
    }
}

#[derive(Clone, Debug)]
pub struct RealizationTable {
    graph: CouplingGraph,
    entries: Vec<Option<RealizationEntry>>,
}

/// CNOT across an edge present in at least one direction.
fn cnot_on_edge(g: &CouplingGraph, c: usize, t: usize) -> Vec<Gate> {
    if g.has_edge(c, t) {
        vec![Gate::cnot(c, t)]
    } else {
        debug_assert!(g.has_edge(t, c), "{c} and {t} are not adjacent");
        let (lo, hi) = (c.min(t), c.max(t));
        vec![Gate::h(lo), Gate::h(hi), Gate::cnot(t, c), Gate::h(lo), Gate::h(hi)]
    }
}

/// `CX(x,y) CX(y,x) CX(x,y)` with `x→y` the native direction.
fn swap_on_edge(g: &CouplingGraph, a: usize, b: usize) -> Vec<Gate> {
    let (x, y) = if g.has_edge(a, b) { (a, b) } else { (b, a) };
    let mut out = vec![Gate::cnot(x, y)];
    out.extend(cnot_on_edge(g, y, x));
    out.push(Gate::cnot(x, y));
    out
}

/// Moves one endpoint along `path` until adjacent to the other, applies the
/// CNOT there, then undoes the swaps.
fn swap_route(g: &CouplingGraph, path: &[usize], move_control: bool) -> Vec<Gate> {
    let d = path.len() - 1;
    let hops: Vec<(usize, usize)> = if move_control {
        (0..d - 1).map(|i| (path[i], path[i + 1])).collect()
    } else {
        (0..d - 1).rev().map(|i| (path[i + 2], path[i + 1])).collect()
    };
    let mut out = Vec::new();
    for &(a, b) in &hops {
        out.extend(swap_on_edge(g, a, b));
    }
    if move_control {
        out.extend(cnot_on_edge(g, path[d - 1], path[d]));
    } else {
        out.extend(cnot_on_edge(g, path[0], path[1]));
    }
    for &(a, b) in hops.iter().rev() {
        out.extend(swap_on_edge(g, a, b));
    }
    out
}

/// `CX(path[0], path[last])` from CNOTs on consecutive path edges only.
fn bridge(g: &CouplingGraph, path: &[usize]) -> Vec<Gate> {
    if path.len() == 2 {
        return cnot_on_edge(g, path[0], path[1]);
    }
    let (m, t) = (path[path.len() - 2], path[path.len() - 1]);
    let head = bridge(g, &path[..path.len() - 1]);
    let tail = cnot_on_edge(g, m, t);
    let mut out = head.clone();
    out.extend_from_slice(&tail);
    out.extend(head);
    out.extend(tail);
    out
}

/// Ordering key: gate count, then depth, then the kind sequence, then the
/// full gate list so that ties resolve deterministically.
fn rank(c: &Circuit) -> (usize, usize, Vec<GateKind>, Vec<Gate>) {
    let cost = c.cost();
    (cost.gates, cost.levels, c.gates().iter().map(Gate::kind).collect(), c.gates().to_vec())
}

fn best_realization(g: &CouplingGraph, c: usize, t: usize) -> Circuit {
    let n = g.num_physical();
    let raw: Vec<Vec<Gate>> = if g.adjacent(c, t) {
        vec![cnot_on_edge(g, c, t)]
    } else {
        g.shortest_paths(c, t)
            .iter()
            .flat_map(|p| [swap_route(g, p, true), swap_route(g, p, false), bridge(g, p)])
            .collect()
    };
    raw.into_iter()
        .map(|gates| simplify(&Circuit::from_parts_unchecked(n, gates)))
        .min_by_key(rank)
        .expect("connected graph yields at least one candidate")
}

impl RealizationTable {
    pub fn build(g: &CouplingGraph) -> Result<Self> {
        let n = g.num_physical();
        if g.distances_from(0).iter().any(Option::is_none) {
            return Err(Error::Topology("graph is disconnected".into()));
        }
        let mut entries = vec![None; n * n];
        for c in 0..n {
            for t in (0..n).filter(|&t| t != c) {
                let sequence = best_realization(g, c, t);
                let cost = sequence.cost();
                entries[c * n + t] = Some(RealizationEntry {
                    control: c,
                    target: t,
                    sequence,
                    total_gates: cost.gates,
                    levels: cost.levels,
                });
            }
        }
        Ok(RealizationTable { graph: g.clone(), entries })
    }

    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    pub fn lookup(&self, control: usize, target: usize) -> Result<&RealizationEntry> {
        let n = self.graph.num_physical();
        for q in [control, target] {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, width: n });
            }
        }
        if control == target {
            return Err(Error::SameQubit(control));
        }
        Ok(self.entries[control * n + target].as_ref().expect("table covers all distinct pairs"))
    }

    /// Entries in `(control, target)` order.
    pub fn entries(&self) -> impl Iterator<Item = &RealizationEntry> {
        self.entries.iter().flatten()
    }

    /// Human-readable listing: a cost comment per pair followed by its gates
    /// as OpenQASM statements.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "// CNOT realization table: {} physical qubits, {} native edges",
            self.graph.num_physical(),
            self.graph.edge_count()
        )
        .unwrap();
        for e in self.entries() {
            writeln!(out, "\n// CNOT(Q{},Q{}): gates={} levels={}", e.control, e.target, e.total_gates, e.levels)
                .unwrap();
            for g in e.sequence.gates() {
                match g.qubits() {
                    [q] => writeln!(out, "{} q[{}];", g.kind().qasm_name(), q).unwrap(),
                    [a, b] => writeln!(out, "cx q[{a}],q[{b}];").unwrap(),
                    _ => unreachable!(),
                }
            }
        }
        out
    }
}

pub fn build_table(g: &CouplingGraph) -> Result<RealizationTable> {
    RealizationTable::build(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Placement;
    use crate::simulator::equivalent;

    fn table(name: &str) -> RealizationTable {
        build_table(&CouplingGraph::builtin(name).unwrap()).unwrap()
    }

    fn cnot_circuit(n: usize, c: usize, t: usize) -> Circuit {
        Circuit::from_gates(n, vec![Gate::cnot(c, t)]).unwrap()
    }

    #[test]
    fn qx2_examples() {
        let t = table("qx2");
        assert_eq!(t.lookup(0, 1).unwrap().total_gates, 1);
        let rev = t.lookup(1, 0).unwrap();
        assert_eq!(rev.total_gates, 5);
        assert_eq!(rev.sequence.gates(), &[Gate::h(0), Gate::h(1), Gate::cnot(0, 1), Gate::h(0), Gate::h(1)]);
        assert!(t.lookup(1, 4).unwrap().total_gates <= 10);
        assert!(matches!(t.lookup(0, 0), Err(Error::SameQubit(0))));
        assert!(t.lookup(0, 5).is_err());
    }

    #[test]
    fn qx4_examples() {
        let t = table("qx4");
        assert_eq!(t.lookup(2, 0).unwrap().total_gates, 1);
        assert_eq!(t.lookup(0, 2).unwrap().total_gates, 5);
    }

    #[test]
    fn every_entry_is_sound_and_legal() {
        for name in ["qx2", "qx4"] {
            let t = table(name);
            assert_eq!(t.entries().count(), 20);
            for e in t.entries() {
                let want = cnot_circuit(5, e.control, e.target);
                assert!(equivalent(&want, &e.sequence, &Placement::identity(5), 1e-9).unwrap());
                for g in e.sequence.gates().iter().filter(|g| g.kind() == GateKind::CNOT) {
                    assert!(t.graph().allows(g.qubits()[0], g.qubits()[1]).unwrap());
                }
                assert_eq!(e.cost(), e.sequence.cost());
            }
        }
    }

    #[test]
    fn minimum_cost_grows_with_distance() {
        for name in ["qx2", "qx4"] {
            let t = table(name);
            let g = t.graph();
            let mut min_by_dist = std::collections::BTreeMap::new();
            for e in t.entries() {
                let d = g.distance(e.control, e.target).unwrap();
                let m = min_by_dist.entry(d).or_insert(usize::MAX);
                *m = (*m).min(e.total_gates);
                if d == 1 {
                    let expect = if g.has_edge(e.control, e.target) { 1 } else { 5 };
                    assert_eq!(e.total_gates, expect);
                }
            }
            let mins: Vec<usize> = min_by_dist.values().copied().collect();
            assert!(mins.windows(2).all(|w| w[0] <= w[1]), "{name}: {mins:?}");
        }
    }

    #[test]
    fn longer_paths_on_a_line() {
        // 0→1→2→3, every pair realizable and sound
        let g = CouplingGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let t = build_table(&g).unwrap();
        for e in t.entries() {
            let want = cnot_circuit(4, e.control, e.target);
            assert!(equivalent(&want, &e.sequence, &Placement::identity(4), 1e-9).unwrap());
            for gate in e.sequence.gates().iter().filter(|g| g.kind() == GateKind::CNOT) {
                assert!(g.has_edge(gate.qubits()[0], gate.qubits()[1]));
            }
        }
        // 0→1→2 native both ways round the bridge
        assert_eq!(t.lookup(0, 2).unwrap().total_gates, 4);
    }

    #[test]
    fn swap_routes_are_sound_before_selection() {
        let g = CouplingGraph::builtin("qx2").unwrap();
        for p in g.shortest_paths(1, 4) {
            for mv in [true, false] {
                let c = Circuit::from_parts_unchecked(5, swap_route(&g, &p, mv));
                assert!(equivalent(&cnot_circuit(5, 1, 4), &c, &Placement::identity(5), 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn build_is_deterministic() {
        let a = table("qx4");
        let b = table("qx4");
        assert_eq!(a.dump(), b.dump());
        assert!(a.dump().contains("// CNOT(Q0,Q2): gates=5"));
    }
}
