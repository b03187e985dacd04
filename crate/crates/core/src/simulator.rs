//! Dense statevector, unitary and density-matrix simulation.
//!
//! Basis index bit `q` holds qubit `q`, so qubit 0 is the least significant
//! bit. Bitstrings printed for humans are most-significant first.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::circuit::{Circuit, Gate, GateKind, Placement};
use crate::error::{Error, Result};
use crate::nonclassicality::ProbabilityDistribution;

pub const MAX_UNITARY_QUBITS: usize = 10;
pub const MAX_DENSITY_QUBITS: usize = 6;

const NORM_TOL: f64 = 1e-10;

pub type Matrix = DMatrix<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2×2 matrix of a single-qubit gate, row-major.
pub fn single_qubit_matrix(kind: GateKind) -> [[C64; 2]; 2] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let h = c(FRAC_1_SQRT_2, 0.0);
    match kind {
        GateKind::H => [[h, h], [h, -h]],
        GateKind::X => [[z, one], [one, z]],
        GateKind::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        GateKind::Z => [[one, z], [z, -one]],
        GateKind::S => [[one, z], [z, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, z], [z, c(0.0, -1.0)]],
        GateKind::T => [[one, z], [z, c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)]],
        GateKind::Tdg => [[one, z], [z, c(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)]],
        GateKind::CNOT => panic!("CNOT is not a single-qubit gate"),
    }
}

/// Applies `gate` in place to an amplitude vector of length `2^n`.
pub(crate) fn apply_gate(amps: &mut [C64], gate: &Gate) {
    match *gate.qubits() {
        [q] => {
            let m = single_qubit_matrix(gate.kind());
            let bit = 1usize << q;
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let j = i | bit;
                    let (a0, a1) = (amps[i], amps[j]);
                    amps[i] = m[0][0] * a0 + m[0][1] * a1;
                    amps[j] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
        [ctl, tgt] => {
            let (cb, tb) = (1usize << ctl, 1usize << tgt);
            for i in 0..amps.len() {
                if i & cb != 0 && i & tb == 0 {
                    amps.swap(i, i | tb);
                }
            }
        }
        _ => unreachable!(),
    }
}

/// Left-multiplies every column of `m` by `gate`.
fn apply_to_columns(m: &mut Matrix, gate: &Gate) {
    let dim = m.nrows();
    for col in m.as_mut_slice().chunks_mut(dim) {
        apply_gate(col, gate);
    }
}

/// `ρ → G ρ G†`.
fn conjugate(rho: &Matrix, gate: &Gate) -> Matrix {
    let mut a = rho.clone();
    apply_to_columns(&mut a, gate);
    let mut b = a.adjoint();
    apply_to_columns(&mut b, gate);
    b.adjoint()
}

fn check_width(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooManyQubits { what, limit, got: n });
    }
    Ok(())
}

pub fn unitary_of(c: &Circuit) -> Result<Matrix> {
    check_width("unitary simulation", c.num_qubits(), MAX_UNITARY_QUBITS)?;
    let dim = 1usize << c.num_qubits();
    let mut u = Matrix::identity(dim, dim);
    for col in u.as_mut_slice().chunks_mut(dim) {
        for g in c.gates() {
            apply_gate(col, g);
        }
    }
    Ok(u)
}

/// Largest entrywise deviation between `a` and `e^{iφ}·b`, with `φ` fixed by
/// the first entry of `a` (column-major) whose magnitude exceeds `1e-9`.
pub fn phase_aligned_distance(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(a.nrows(), b.nrows()));
    }
    let Some(k) = a.iter().position(|z| z.norm() > 1e-9) else {
        return Ok(b.iter().map(|z| z.norm()).fold(0.0, f64::max));
    };
    let (za, zb) = (a.as_slice()[k], b.as_slice()[k]);
    if zb.norm() < 1e-12 {
        return Ok(za.norm());
    }
    let phase = (za / zb) / (za / zb).norm();
    Ok(a.iter().zip(b.iter()).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max))
}

/// True iff `unitary(c2) = e^{iφ} · P · unitary(c1) · P†` within `tol`,
/// where `P` carries logical qubit `i` of `c1` to qubit `perm[i]` of `c2`.
pub fn equivalent(c1: &Circuit, c2: &Circuit, perm: &Placement, tol: f64) -> Result<bool> {
    if perm.len() != c1.num_qubits() {
        return Err(Error::DimensionMismatch(perm.len(), c1.num_qubits()));
    }
    let embedded = c1.relabel(perm, c2.num_qubits())?;
    let (u1, u2) = (unitary_of(&embedded)?, unitary_of(c2)?);
    Ok(phase_aligned_distance(&u2, &u1)? <= tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.is_empty() || 1usize << n != amps.len() {
            return Err(Error::DensityMatrix(format!("length {} is not a power of two", amps.len())));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DensityMatrix(format!("state norm² is {norm}, expected 1")));
        }
        Ok(StateVector { num_qubits: n, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = C64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn zero(num_qubits: usize) -> Self {
        StateVector::basis(num_qubits, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn probabilities(&self) -> ProbabilityDistribution {
        let probs = self.amps.iter().map(|a| a.norm_sqr()).collect();
        ProbabilityDistribution::from_vec_unchecked(self.num_qubits, probs)
    }
}

pub fn run_ideal(c: &Circuit, initial: &StateVector) -> Result<StateVector> {
    check_width("statevector simulation", c.num_qubits(), MAX_UNITARY_QUBITS)?;
    if initial.num_qubits != c.num_qubits() {
        return Err(Error::DimensionMismatch(initial.num_qubits, c.num_qubits()));
    }
    let mut amps = initial.amps.clone();
    for g in c.gates() {
        apply_gate(&mut amps, g);
    }
    Ok(StateVector { num_qubits: initial.num_qubits, amps })
}

/// Per-gate depolarizing strengths: `p1` after single-qubit gates, `p2` on
/// each participant of a CNOT.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NoiseSpec {
    p1: f64,
    p2: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec { p1: 0.001, p2: 0.01 }
    }
}

impl NoiseSpec {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Noise(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(NoiseSpec { p1, p2 })
    }

    pub fn noiseless() -> Self {
        NoiseSpec { p1: 0.0, p2: 0.0 }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }
}

/// `ρ → (1−p)ρ + (p/3)(XρX + YρY + ZρZ)` on qubit `q`.
pub fn depolarize(rho: &Matrix, q: usize, p: f64) -> Matrix {
    if p == 0.0 {
        return rho.clone();
    }
    let mut out = rho * C64::new(1.0 - p, 0.0);
    for kind in [GateKind::X, GateKind::Y, GateKind::Z] {
        out += conjugate(rho, &Gate::single(kind, q)) * C64::new(p / 3.0, 0.0);
    }
    out
}

pub fn run_noisy(c: &Circuit, noise: &NoiseSpec) -> Result<DensityMatrix> {
    let n = c.num_qubits();
    check_width("density-matrix simulation", n, MAX_DENSITY_QUBITS)?;
    let dim = 1usize << n;
    let mut rho = Matrix::zeros(dim, dim);
    rho[(0, 0)] = C64::new(1.0, 0.0);
    for g in c.gates() {
        rho = conjugate(&rho, g);
        let p = if g.kind().arity() == 2 { noise.p2 } else { noise.p1 };
        for &q in g.qubits() {
            rho = depolarize(&rho, q, p);
        }
    }
    DensityMatrix::from_matrix(rho)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    m: Matrix,
}

impl DensityMatrix {
    /// Accepts a square `2^n` matrix that is Hermitian and has unit trace
    /// (both within `1e-8`). Positivity is not required here; see
    /// [`DensityMatrix::is_physical`].
    pub fn from_matrix(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DensityMatrix(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        let dim = m.nrows();
        let n = dim.trailing_zeros() as usize;
        if dim == 0 || 1usize << n != dim {
            return Err(Error::DensityMatrix(format!("dimension {dim} is not a power of two")));
        }
        let herm = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > 1e-8 {
            return Err(Error::DensityMatrix(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::DensityMatrix(format!("trace is {tr}, expected 1")));
        }
        Ok(DensityMatrix { num_qubits: n, m })
    }

    pub fn pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityMatrix { num_qubits: state.num_qubits(), m: &v * v.adjoint() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Positive semidefinite up to `-tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    pub fn probabilities(&self) -> ProbabilityDistribution {
        let probs = (0..self.dim()).map(|i| self.m[(i, i)].re).collect();
        ProbabilityDistribution::from_vec_unchecked(self.num_qubits, probs)
    }

    /// `dm N` header, then `2^N` lines of `re im` pairs.
    pub fn to_text(&self) -> String {
        let mut out = format!("dm {}\n", self.num_qubits);
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.m[(i, j)];
                    format!("{:e} {:e}", z.re, z.im)
                })
                .collect();
            writeln!(out, "{}", row.join("  ")).unwrap();
        }
        out
    }

    /// Reads the raw matrix of a `dm N` file without validating it.
    pub fn parse_raw(text: &str) -> Result<Matrix> {
        let body: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n");
        let mut tokens = body.split_whitespace();
        let bad = |m: String| Error::DensityMatrix(m);
        match (tokens.next(), tokens.next()) {
            (Some("dm"), Some(n)) => {
                let n: usize = n.parse().map_err(|_| bad(format!("bad qubit count {n:?}")))?;
                if n > MAX_UNITARY_QUBITS {
                    return Err(Error::TooManyQubits {
                        what: "density matrix file",
                        limit: MAX_UNITARY_QUBITS,
                        got: n,
                    });
                }
                let dim = 1usize << n;
                let vals: Vec<f64> = tokens
                    .map(|t| t.parse::<f64>().map_err(|_| bad(format!("bad number {t:?}"))))
                    .collect::<Result<_>>()?;
                if vals.len() != 2 * dim * dim {
                    return Err(bad(format!("expected {} numbers, found {}", 2 * dim * dim, vals.len())));
                }
                Ok(Matrix::from_fn(dim, dim, |i, j| {
                    let k = 2 * (i * dim + j);
                    C64::new(vals[k], vals[k + 1])
                }))
            }
            _ => Err(bad("missing 'dm N' header".into())),
        }
    }
}

pub fn measure_probs(state: &StateVector) -> ProbabilityDistribution {
    state.probabilities()
}
