//! Directed coupling graphs: which `(control, target)` CNOTs a device runs
//! natively.

use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingGraph {
    num_physical: usize,
    edges: BTreeSet<(usize, usize)>,
}

const QX2: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (4, 2), (4, 3), (3, 2)];
const QX4: [(usize, usize); 6] = [(3, 4), (3, 2), (2, 4), (2, 0), (2, 1), (1, 0)];

impl CouplingGraph {
    /// Validates the graph: no self-loops, endpoints in range, connected.
    pub fn new(num_physical: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if num_physical == 0 {
            return Err(Error::Topology("graph needs at least one qubit".into()));
        }
        let mut set = BTreeSet::new();
        for (c, t) in edges {
            if c == t {
                return Err(Error::Topology(format!("self-loop on qubit {c}")));
            }
            if c >= num_physical || t >= num_physical {
                return Err(Error::Topology(format!("edge {c}->{t} out of range for {num_physical} qubits")));
            }
            if !set.insert((c, t)) {
                return Err(Error::Topology(format!("duplicate edge {c}->{t}")));
            }
        }
        let g = CouplingGraph { num_physical, edges: set };
        let dist = g.distances_from(0);
        if let Some(q) = dist.iter().position(Option::is_none) {
            return Err(Error::Topology(format!("graph is disconnected (qubit {q} unreachable)")));
        }
        Ok(g)
    }

    /// IBM QX2 (`"qx2"`) or QX4 (`"qx4"`).
    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "qx2" => CouplingGraph::new(5, QX2),
            "qx4" => CouplingGraph::new(5, QX4),
            _ => Err(Error::UnknownArchitecture(name.to_string())),
        }
    }

    /// Text format: a `qubits N` header followed by one `control target` pair
    /// per line. Blank lines and `#` comments are ignored.
    pub fn load(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or_else(|| Error::Topology("empty coupling graph file".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["qubits", n] => {
                n.parse::<usize>().map_err(|_| Error::Topology(format!("line {lineno}: bad qubit count {n:?}")))?
            }
            _ => return Err(Error::Topology(format!("line {lineno}: expected 'qubits N', got {header:?}"))),
        };
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let parts: Vec<_> = line.split_whitespace().collect();
            let pair = match parts[..] {
                [c, t] => c.parse::<usize>().ok().zip(t.parse::<usize>().ok()),
                _ => None,
            };
            let (c, t) =
                pair.ok_or_else(|| Error::Topology(format!("line {lineno}: expected 'control target', got {line:?}")))?;
            edges.push((c, t));
        }
        CouplingGraph::new(n, edges)
    }

    /// Resolves a `--arch` value: `qx2`, `qx4` or `@path/to/file`.
    pub fn from_arch_spec(spec: &str) -> Result<Self> {
        match spec.strip_prefix('@') {
            Some(path) => CouplingGraph::load(&std::fs::read_to_string(Path::new(path))?),
            None => CouplingGraph::builtin(spec),
        }
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn allows(&self, control: usize, target: usize) -> Result<bool> {
        for q in [control, target] {
            if q >= self.num_physical {
                return Err(Error::QubitOutOfRange { index: q, width: self.num_physical });
            }
        }
        Ok(self.edges.contains(&(control, target)))
    }

    pub(crate) fn has_edge(&self, control: usize, target: usize) -> bool {
        self.edges.contains(&(control, target))
    }

    /// Adjacent in either direction.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        (0..self.num_physical).filter(|&p| self.adjacent(q, p)).collect()
    }

    /// Undirected BFS distances from `src`; `None` for unreachable qubits.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_physical];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        self.distances_from(a)[b]
    }

    /// Every shortest undirected path from `a` to `b`, endpoints included,
    /// in lexicographic order.
    pub fn shortest_paths(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let to_b = self.distances_from(b);
        let mut out = Vec::new();
        if to_b[a].is_none() {
            return out;
        }
        let mut path = vec![a];
        self.extend_paths(&to_b, b, &mut path, &mut out);
        out
    }

    fn extend_paths(&self, to_b: &[Option<usize>], b: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == b {
            out.push(path.clone());
            return;
        }
        let d = to_b[u].unwrap();
        for v in self.neighbors(u) {
            if to_b[v] == Some(d - 1) {
                path.push(v);
                self.extend_paths(to_b, b, path, out);
                path.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let qx2 = CouplingGraph::builtin("qx2").unwrap();
        assert_eq!(qx2.num_physical(), 5);
        assert_eq!(qx2.edge_count(), 6);
        assert!(qx2.allows(0, 1).unwrap());

        let qx4 = CouplingGraph::builtin("qx4").unwrap();
        assert_eq!(qx4.num_physical(), 5);
        assert_eq!(qx4.edge_count(), 6);
        assert!(qx4.allows(1, 0).unwrap());

        assert!(matches!(CouplingGraph::builtin("qx9"), Err(Error::UnknownArchitecture(_))));
    }

    #[test]
    fn allows_is_directed() {
        let qx2 = CouplingGraph::builtin("qx2").unwrap();
        assert!(qx2.allows(0, 1).unwrap());
        assert!(!qx2.allows(1, 0).unwrap());
        assert!(!qx2.allows(1, 4).unwrap());
        assert!(qx2.allows(5, 0).is_err());
        for (c, t) in qx2.edges() {
            assert!(qx2.allows(c, t).unwrap());
            assert!(!qx2.allows(t, c).unwrap());
        }
    }

    #[test]
    fn load_examples() {
        let g = CouplingGraph::load("qubits 2\n0 1").unwrap();
        assert_eq!(g.num_physical(), 2);
        assert_eq!(g.edge_count(), 1);

        let e = CouplingGraph::load("qubits 3\n0 1").unwrap_err();
        assert!(e.to_string().contains("disconnected"), "{e}");

        let text = "# IBM QX4\nqubits 5\n3 4\n3 2\n2 4\n2 0\n2 1\n1 0\n";
        assert_eq!(CouplingGraph::load(text).unwrap(), CouplingGraph::builtin("qx4").unwrap());
    }

    #[test]
    fn load_errors() {
        assert!(CouplingGraph::load("qubits 2\n1 1").unwrap_err().to_string().contains("self-loop"));
        assert!(CouplingGraph::load("qubits 2\n0 1 2").is_err());
        assert!(CouplingGraph::load("qubits two\n0 1").is_err());
        assert!(CouplingGraph::load("0 1").is_err());
        assert!(CouplingGraph::load("qubits 2\n0 5").is_err());
        assert!(CouplingGraph::load("").is_err());
    }

    #[test]
    fn shortest_paths_on_qx2() {
        let qx2 = CouplingGraph::builtin("qx2").unwrap();
        assert_eq!(qx2.distance(1, 4), Some(2));
        assert_eq!(qx2.shortest_paths(1, 4), vec![vec![1, 2, 4]]);
        assert_eq!(qx2.shortest_paths(0, 3), vec![vec![0, 2, 3]]);
        assert_eq!(qx2.shortest_paths(0, 1), vec![vec![0, 1]]);
    }

    #[test]
    fn multiple_shortest_paths() {
        // square 0-1-3, 0-2-3
        let g = CouplingGraph::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(g.shortest_paths(0, 3), vec![vec![0, 1, 3], vec![0, 2, 3]]);
    }
}
