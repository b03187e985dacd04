//! Circuit IR over the closed Clifford+T gate set, plus cost metrics.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    CNOT,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::CNOT,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT => 2,
            _ => 1,
        }
    }

    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            other => other,
        }
    }

    /// Lower-case OpenQASM name.
    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::CNOT => "cx",
        }
    }

    pub fn from_qasm_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.qasm_name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateKind::Sdg => "Sdg",
            GateKind::Tdg => "Tdg",
            GateKind::CNOT => "CNOT",
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
        };
        f.write_str(name)
    }
}

/// A gate applied to one qubit, or to `(control, target)` for CNOT.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gate {
    kind: GateKind,
    qubits: [usize; 2],
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Arity { kind: kind.to_string(), expected: kind.arity(), got: qubits.len() });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::DuplicateQubit(kind.to_string(), qubits[0]));
        }
        let mut q = [qubits[0], 0];
        if qubits.len() == 2 {
            q[1] = qubits[1];
        }
        Ok(Gate { kind, qubits: q })
    }

    /// Single-qubit gate. Panics if `kind` is CNOT.
    pub fn single(kind: GateKind, qubit: usize) -> Self {
        assert_eq!(kind.arity(), 1, "{kind} is not a single-qubit gate");
        Gate { kind, qubits: [qubit, 0] }
    }

    /// CNOT gate. Panics if `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "CNOT control equals target");
        Gate { kind: GateKind::CNOT, qubits: [control, target] }
    }

    pub fn h(q: usize) -> Self {
        Gate::single(GateKind::H, q)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn touches(&self, q: usize) -> bool {
        self.qubits().contains(&q)
    }

    pub fn shares_qubit(&self, other: &Gate) -> bool {
        self.qubits().iter().any(|&q| other.touches(q))
    }

    pub fn inverse(&self) -> Gate {
        Gate { kind: self.kind.inverse(), qubits: self.qubits }
    }

    fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        let mut qubits = self.qubits;
        for q in qubits.iter_mut().take(self.kind.arity()) {
            *q = f(*q);
        }
        Gate { kind: self.kind, qubits }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.qubits() {
            [q] => write!(f, "{} q{}", self.kind, q),
            [c, t] => write!(f, "{} q{} q{}", self.kind, c, t),
            _ => unreachable!(),
        }
    }
}

/// Gate count and ASAP depth.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CostReport {
    pub gates: usize,
    pub levels: usize,
}

/// Injective map from logical qubit `i` to physical qubit `self[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Placement(Vec<usize>);

impl Placement {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &p in &map {
            if !seen.insert(p) {
                return Err(Error::NonInjective(p));
            }
        }
        Ok(Placement(map))
    }

    pub fn identity(width: usize) -> Self {
        Placement((0..width).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, logical: usize) -> usize {
        self.0[logical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Inverse map for a bijection onto `0..len`. `None` if the image is not
    /// exactly `0..len`.
    pub fn inverse(&self) -> Option<Placement> {
        let mut inv = vec![usize::MAX; self.0.len()];
        for (l, &p) in self.0.iter().enumerate() {
            *inv.get_mut(p)? = l;
        }
        Some(Placement(inv))
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}->Q{p}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::QubitOutOfRange { index: q, width: self.num_qubits });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::CNOT).count()
    }

    /// Depth under as-soon-as-possible scheduling.
    pub fn level_count(&self) -> usize {
        let mut frontier = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let level = 1 + g.qubits().iter().map(|&q| frontier[q]).max().unwrap_or(0);
            for &q in g.qubits() {
                frontier[q] = level;
            }
            depth = depth.max(level);
        }
        depth
    }

    pub fn cost(&self) -> CostReport {
        CostReport { gates: self.gate_count(), levels: self.level_count() }
    }

    /// Rewrites every qubit index through `placement` onto a register of
    /// `target_width` qubits. Gate order is unchanged.
    pub fn relabel(&self, placement: &Placement, target_width: usize) -> Result<Circuit> {
        if placement.len() != self.num_qubits {
            return Err(Error::PlacementWidth { expected: self.num_qubits, got: placement.len() });
        }
        if let Some(&p) = placement.as_slice().iter().find(|&&p| p >= target_width) {
            return Err(Error::QubitOutOfRange { index: p, width: target_width });
        }
        let gates = self.gates.iter().map(|g| g.map_qubits(|q| placement.get(q))).collect();
        Ok(Circuit { num_qubits: target_width, gates })
    }

    /// Same gates on a wider register.
    pub fn widen(&self, width: usize) -> Result<Circuit> {
        if width < self.num_qubits {
            return Err(Error::CircuitTooWide { circuit: self.num_qubits, device: width });
        }
        Ok(Circuit { num_qubits: width, gates: self.gates.clone() })
    }

    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch(self.num_qubits, other.num_qubits));
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { num_qubits: self.num_qubits, gates })
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, gates: Vec<Gate>) -> Circuit {
        debug_assert!(gates.iter().all(|g| g.qubits().iter().all(|&q| q < num_qubits)));
        Circuit { num_qubits, gates }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// Uniformly random Clifford+T circuit. CNOTs are drawn with probability
/// `1/3` when `width >= 2`.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, width: usize, len: usize) -> Circuit {
    const SINGLE: [GateKind; 8] =
        [GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::Sdg, GateKind::T, GateKind::Tdg];
    let mut gates = Vec::with_capacity(len);
    for _ in 0..len {
        if width >= 2 && rng.gen_ratio(1, 3) {
            let c = rng.gen_range(0..width);
            let mut t = rng.gen_range(0..width - 1);
            if t >= c {
                t += 1;
            }
            gates.push(Gate::cnot(c, t));
        } else {
            let kind = SINGLE[rng.gen_range(0..SINGLE.len())];
            gates.push(Gate::single(kind, rng.gen_range(0..width)));
        }
    }
    Circuit::from_parts_unchecked(width, gates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn gate_count_examples() {
        assert_eq!(Circuit::new(3).gate_count(), 0);
        let c = circ(2, vec![Gate::h(0), Gate::cnot(0, 1), Gate::single(GateKind::T, 1)]);
        assert_eq!(c.gate_count(), 3);
    }

    #[test]
    fn level_count_examples() {
        assert_eq!(Circuit::new(2).level_count(), 0);
        assert_eq!(circ(2, vec![Gate::h(0), Gate::h(1)]).level_count(), 1);
        assert_eq!(circ(2, vec![Gate::h(0), Gate::h(0)]).level_count(), 2);
        assert_eq!(circ(2, vec![Gate::h(0), Gate::cnot(0, 1), Gate::h(1)]).level_count(), 3);
    }

    #[test]
    fn inverse_kinds() {
        assert_eq!(GateKind::H.inverse(), GateKind::H);
        assert_eq!(GateKind::T.inverse(), GateKind::Tdg);
        assert_eq!(GateKind::S.inverse(), GateKind::Sdg);
        assert_eq!(GateKind::CNOT.inverse(), GateKind::CNOT);
        for k in GateKind::ALL {
            assert_eq!(k.inverse().inverse(), k);
        }
    }

    #[test]
    fn gate_construction_checks_arity_and_duplicates() {
        assert!(matches!(Gate::new(GateKind::CNOT, &[0]), Err(Error::Arity { .. })));
        assert!(matches!(Gate::new(GateKind::H, &[0, 1]), Err(Error::Arity { .. })));
        assert!(matches!(Gate::new(GateKind::CNOT, &[2, 2]), Err(Error::DuplicateQubit(..))));
        assert_eq!(Gate::new(GateKind::CNOT, &[1, 0]).unwrap().qubits(), &[1, 0]);
    }

    #[test]
    fn push_rejects_out_of_range() {
        let mut c = Circuit::new(2);
        assert!(matches!(c.push(Gate::cnot(0, 2)), Err(Error::QubitOutOfRange { index: 2, .. })));
    }

    #[test]
    fn relabel_examples() {
        let c = circ(3, vec![Gate::cnot(0, 1), Gate::cnot(1, 2)]);
        assert_eq!(c.relabel(&Placement::identity(3), 3).unwrap(), c);

        let ab = circ(2, vec![Gate::cnot(0, 1)]);
        let mapped = ab.relabel(&Placement::new(vec![0, 1]).unwrap(), 5).unwrap();
        assert_eq!(mapped.gates(), &[Gate::cnot(0, 1)]);
        assert_eq!(mapped.num_qubits(), 5);

        let perm = Placement::new(vec![2, 0, 1]).unwrap();
        let there = c.relabel(&perm, 3).unwrap();
        assert_eq!(there.gates(), &[Gate::cnot(2, 0), Gate::cnot(0, 1)]);
        let back = there.relabel(&perm.inverse().unwrap(), 3).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn relabel_errors() {
        assert!(matches!(Placement::new(vec![1, 1]), Err(Error::NonInjective(1))));
        let c = circ(2, vec![Gate::cnot(0, 1)]);
        let p = Placement::new(vec![0, 7]).unwrap();
        assert!(matches!(c.relabel(&p, 5), Err(Error::QubitOutOfRange { index: 7, .. })));
        assert!(matches!(c.relabel(&Placement::identity(3), 5), Err(Error::PlacementWidth { .. })));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #[test]
            fn levels_bounded_by_gates(seed in any::<u64>(), width in 1usize..6, len in 0usize..40) {
                let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), width, len);
                let cost = c.cost();
                prop_assert!(cost.levels <= cost.gates);
                prop_assert_eq!(cost.levels == 0, cost.gates == 0);
            }

            #[test]
            fn levels_subadditive(seed in any::<u64>(), width in 1usize..6, l1 in 0usize..20, l2 in 0usize..20) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_circuit(&mut rng, width, l1);
                let b = random_circuit(&mut rng, width, l2);
                let ab = a.concat(&b).unwrap();
                prop_assert!(ab.level_count() <= a.level_count() + b.level_count());
            }

            #[test]
            fn relabel_preserves_cost(seed in any::<u64>(), len in 0usize..30) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let c = random_circuit(&mut rng, 4, len);
                let mut map: Vec<usize> = (0..5).collect();
                rand::seq::SliceRandom::shuffle(map.as_mut_slice(), &mut rng);
                map.truncate(4);
                let r = c.relabel(&Placement::new(map).unwrap(), 5).unwrap();
                prop_assert_eq!(r.cost(), c.cost());
            }
        }
    }
}
