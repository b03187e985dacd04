//! Nonclassicality witnesses computed from measurement data: parity
//! expectation values, the three-qubit Mermin polynomial and its local
//! hidden-variable bound, and Uhlmann fidelity between density matrices.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::simulator::{DensityMatrix, Matrix};

/// Default tolerance on `Σ Pᵢ = 1`; published tables are rounded to three
/// decimals.
pub const DEFAULT_SUM_TOL: f64 = 0.005;

/// Classical (local realistic) bound on `⟨M₃⟩`.
pub const CLASSICAL_BOUND: f64 = 2.0;
/// Quantum bound on `⟨M₃⟩`.
pub const QUANTUM_BOUND: f64 = 4.0;

/// Outcome probabilities indexed by basis state (qubit 0 = least significant bit).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityDistribution {
    num_qubits: usize,
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(num_qubits: usize, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(num_qubits, probs, DEFAULT_SUM_TOL)
    }

    pub fn with_tolerance(num_qubits: usize, probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.len() != 1usize << num_qubits {
            return Err(Error::Distribution(format!("{} entries for {num_qubits} qubits", probs.len())));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Distribution(format!("probability {p} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::Distribution(format!("probabilities sum to {total}")));
        }
        Ok(ProbabilityDistribution { num_qubits, probs })
    }

    pub(crate) fn from_vec_unchecked(num_qubits: usize, probs: Vec<f64>) -> Self {
        ProbabilityDistribution { num_qubits, probs }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Most-significant-first label for `index`, e.g. `011` for index 3.
    pub fn label(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.num_qubits)
    }

    /// One `bitstring value` line per outcome.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.probs.iter().enumerate() {
            writeln!(out, "{} {}", self.label(i), p).unwrap();
        }
        out
    }

    /// Parses `bitstring value` lines. Missing outcomes count as zero;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut width = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Distribution(format!("line {}: expected 'bitstring value', got {line:?}", lineno + 1));
            let (bits, value) = match line.split_whitespace().collect::<Vec<_>>()[..] {
                [b, v] => (b, v),
                _ => return Err(bad()),
            };
            if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(bad());
            }
            match width {
                None => width = Some(bits.len()),
                Some(w) if w != bits.len() => {
                    return Err(Error::Distribution(format!(
                        "line {}: bitstring width {} differs from {w}",
                        lineno + 1,
                        bits.len()
                    )))
                }
                _ => {}
            }
            let index = usize::from_str_radix(bits, 2).map_err(|_| bad())?;
            let value: f64 = value.parse().map_err(|_| bad())?;
            entries.push((index, value));
        }
        let n = width.ok_or_else(|| Error::Distribution("no outcomes".into()))?;
        let mut probs = vec![0.0; 1 << n];
        for (i, v) in entries {
            if probs[i] != 0.0 {
                return Err(Error::Distribution(format!("outcome {i:0n$b} listed twice")));
            }
            probs[i] = v;
        }
        ProbabilityDistribution::new(n, probs)
    }

    fn check_sum(&self, tol: f64) -> Result<()> {
        let total = self.total();
        if (total - 1.0).abs() > tol {
            return Err(Error::Distribution(format!("probabilities sum to {total}")));
        }
        Ok(())
    }
}

/// `Σ Pᵢ Eᵢ` with `Eᵢ = (−1)^popcount(i)`: the expectation of a product of
/// single-qubit observables after rotating each into the computational basis.
pub fn parity_expectation(p: &ProbabilityDistribution) -> Result<f64> {
    p.check_sum(DEFAULT_SUM_TOL)?;
    Ok(p.probs.iter().enumerate().map(|(i, &pi)| if i.count_ones() % 2 == 0 { pi } else { -pi }).sum())
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MerminValue {
    /// `⟨M₃⟩`
    pub m3: f64,
    /// `⟨M₃⟩ − 2`; positive means the classical bound is violated.
    pub violation: f64,
}

/// `⟨M₃⟩ = 3⟨XXY⟩ − ⟨YYY⟩` for a permutation-symmetric three-qubit state.
pub fn mermin3(xxy: &ProbabilityDistribution, yyy: &ProbabilityDistribution) -> Result<MerminValue> {
    for p in [xxy, yyy] {
        if p.num_qubits != 3 {
            return Err(Error::Distribution(format!(
                "Mermin polynomial needs 3-qubit data, got {} qubits",
                p.num_qubits
            )));
        }
    }
    let m3 = 3.0 * parity_expectation(xxy)? - parity_expectation(yyy)?;
    Ok(MerminValue { m3, violation: m3 - CLASSICAL_BOUND })
}

/// Maximum of `|x₁x₂y₃ + x₁y₂x₃ + y₁x₂x₃ − y₁y₂y₃|` over all 64 deterministic
/// `±1` assignments of `(xₖ, yₖ)` to the three parties.
pub fn lhv_bound() -> f64 {
    (0u32..64)
        .map(|bits| {
            let v = |k: u32| if bits >> k & 1 == 1 { -1i32 } else { 1 };
            let (x, y) = ([v(0), v(1), v(2)], [v(3), v(4), v(5)]);
            lhv_term(x, y)
        })
        .max()
        .unwrap() as f64
}

fn lhv_term(x: [i32; 3], y: [i32; 3]) -> i32 {
    (x[0] * x[1] * y[2] + x[0] * y[1] * x[2] + y[0] * x[1] * x[2] - y[0] * y[1] * y[2]).abs()
}

/// What [`sanitize`] does about negative eigenvalues.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum PsdPolicy {
    /// Keep the Hermitian part as is (it may have small negative eigenvalues).
    #[default]
    Keep,
    /// Clamp negative eigenvalues to zero before renormalizing.
    Clamp,
}

/// Turns a printed `Re`/`Im` pair into a density matrix: Hermitize, then
/// renormalize the trace to one.
pub fn sanitize(raw_re: &DMatrix<f64>, raw_im: &DMatrix<f64>) -> Result<DensityMatrix> {
    sanitize_with(raw_re, raw_im, PsdPolicy::Keep)
}

pub fn sanitize_with(raw_re: &DMatrix<f64>, raw_im: &DMatrix<f64>, policy: PsdPolicy) -> Result<DensityMatrix> {
    if !raw_re.is_square() || raw_re.shape() != raw_im.shape() {
        return Err(Error::DensityMatrix(format!(
            "real part {:?} and imaginary part {:?} must be equal square shapes",
            raw_re.shape(),
            raw_im.shape()
        )));
    }
    let m = Matrix::from_fn(raw_re.nrows(), raw_re.ncols(), |i, j| C64::new(raw_re[(i, j)], raw_im[(i, j)]));
    sanitize_complex(m, policy)
}

pub fn sanitize_complex(m: Matrix, policy: PsdPolicy) -> Result<DensityMatrix> {
    let mut h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    if policy == PsdPolicy::Clamp {
        h = psd_function(&h, |l| l);
    }
    let tr = h.trace().re;
    if tr <= 0.0 {
        return Err(Error::DensityMatrix(format!("trace {tr} is not positive")));
    }
    let mut rho = h / C64::new(tr, 0.0);
    // The division leaves tiny asymmetries; make it exactly Hermitian.
    rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::from_matrix(rho)
}

/// `V f(max(λ, 0)) V†` for Hermitian `h`.
fn psd_function(h: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let vals = eig.eigenvalues.map(|l| C64::new(f(l.max(0.0)), 0.0));
    &eig.eigenvectors * Matrix::from_diagonal(&vals) * eig.eigenvectors.adjoint()
}

/// `F = Tr √(√ρ₁ ρ₂ √ρ₁)`, clamped to `[0, 1]`. Negative eigenvalues of `ρ₁`
/// and of the inner product are clamped to zero before each square root.
pub fn uhlmann_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let s = psd_function(rho1.matrix(), f64::sqrt);
    let inner = &s * rho2.matrix() * &s;
    let herm = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);
    let f: f64 = herm.symmetric_eigenvalues().iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}
