//! Density operators over qubits and the decoherence channel induced by
//! the averaged Wigner rotation.
//!
//! Qubit ordering: the leftmost tensor factor (qubit index 0) is the most
//! significant bit of the basis index. `|q0 q1 … q(N-1)⟩` sits at row
//! `Σ q_i 2^(N-1-i)`.
//!
//! The channel is kept in the closed form fixed by `c̄` and `s̄`:
//!
//! ```text
//! ℰ[|0⟩⟨0|] = ½ [[1+c̄,  s̄  ], [ s̄,   1-c̄]]
//! ℰ[|0⟩⟨1|] = ½ [[ -s̄,  1+c̄], [-1+c̄,  s̄ ]]
//! ℰ[|1⟩⟨0|] = ½ [[ -s̄, -1+c̄], [ 1+c̄,  s̄ ]]
//! ℰ[|1⟩⟨1|] = ½ [[1-c̄, -s̄   ], [-s̄,   1+c̄]]
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wavepacket::{deficit_sq, DecoherenceFactor};

pub mod eigen;

pub use eigen::{herm_eigen, herm_eigenvalues};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_SLACK: f64 = 1e-10;
pub const MAX_QUBITS: usize = 10;

type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Unit-trace Hermitian operator on `N` labelled qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct DensityOperator {
    data: CMatrix,
    qubits: Vec<String>,
}

/// Wire form: `{dim, qubits, re, im}` with row-major entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub dim: usize,
    pub qubits: Vec<String>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<DensityOperator> for DensityJson {
    fn from(d: DensityOperator) -> Self {
        let n = d.dim();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for r in 0..n {
            for col in 0..n {
                re.push(d.data[(r, col)].re);
                im.push(d.data[(r, col)].im);
            }
        }
        DensityJson {
            dim: n,
            qubits: d.qubits,
            re,
            im,
        }
    }
}

impl TryFrom<DensityJson> for DensityOperator {
    type Error = Error;

    fn try_from(j: DensityJson) -> Result<Self> {
        let n = j.dim;
        if j.re.len() != n * n || j.im.len() != n * n {
            return Err(Error::param(
                "density",
                format!("expected {} entries per part, got re {} / im {}", n * n, j.re.len(), j.im.len()),
            ));
        }
        let data = CMatrix::from_fn(n, n, |r, col| Complex64::new(j.re[r * n + col], j.im[r * n + col]));
        DensityOperator::new(data, j.qubits)
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

impl DensityOperator {
    pub fn new(data: CMatrix, qubits: Vec<String>) -> Result<Self> {
        let n = qubits.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::param("qubits", format!("need 1..={MAX_QUBITS} qubits, got {n}")));
        }
        let dim = 1usize << n;
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::param(
                "density",
                format!("{} qubits need a {dim}×{dim} matrix, got {}×{}", n, data.nrows(), data.ncols()),
            ));
        }
        for (i, a) in qubits.iter().enumerate() {
            if qubits[..i].contains(a) {
                return Err(Error::param("qubits", format!("duplicate label `{a}`")));
            }
        }
        let defect = eigen::hermitian_defect(&data);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = data.trace();
        if (tr - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::param("density", format!("trace {tr} differs from 1")));
        }
        Ok(DensityOperator { data, qubits })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn from_pure(psi: &DVector<Complex64>, qubits: Vec<String>) -> Result<Self> {
        DensityOperator::new(psi * psi.adjoint(), qubits)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn qubits(&self) -> &[String] {
        &self.qubits
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn with_labels(mut self, qubits: Vec<String>) -> Result<Self> {
        if qubits.len() != self.qubits.len() {
            return Err(Error::param("qubits", "label count must match"));
        }
        self.qubits = qubits;
        DensityOperator::new(self.data, self.qubits)
    }

    pub fn qubit_index(&self, label: &str) -> Result<usize> {
        self.qubits
            .iter()
            .position(|q| q == label)
            .ok_or_else(|| Error::InvalidSubsystem(format!("no qubit labelled `{label}`")))
    }

    /// Bit mask selecting qubit `i` in a basis index.
    fn mask(&self, i: usize) -> usize {
        1 << (self.n_qubits() - 1 - i)
    }

    /// Sorted spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        herm_eigenvalues(&self.data)
    }

    /// Fails if any eigenvalue is below `-POSITIVITY_SLACK`.
    pub fn check_positive(&self) -> Result<Vec<f64>> {
        let ev = self.eigenvalues()?;
        if let Some(&lo) = ev.first() {
            if lo < -POSITIVITY_SLACK {
                return Err(Error::PositivityViolation(lo));
            }
        }
        Ok(ev)
    }

    pub fn kron(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let mut labels = self.qubits.clone();
        labels.extend(other.qubits.iter().cloned());
        DensityOperator::new(self.data.kronecker(&other.data), labels)
    }

    /// Reduced state on the listed qubits, in the listed order.
    pub fn partial_trace_keep(&self, keep: &[usize]) -> Result<DensityOperator> {
        let n = self.n_qubits();
        check_subset(keep, n, true)?;
        let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let k = keep.len();
        let dim_k = 1usize << k;
        let compose = |kept: usize, rest: usize| -> usize {
            let mut idx = 0;
            for (pos, &q) in keep.iter().enumerate() {
                if kept >> (k - 1 - pos) & 1 == 1 {
                    idx |= self.mask(q);
                }
            }
            for (pos, &q) in traced.iter().enumerate() {
                if rest >> (traced.len() - 1 - pos) & 1 == 1 {
                    idx |= self.mask(q);
                }
            }
            idx
        };
        let mut out = CMatrix::zeros(dim_k, dim_k);
        for r in 0..dim_k {
            for col in 0..dim_k {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..1usize << traced.len() {
                    acc += self.data[(compose(r, e), compose(col, e))];
                }
                out[(r, col)] = acc;
            }
        }
        DensityOperator::new(out, keep.iter().map(|&i| self.qubits[i].clone()).collect())
    }
}

fn check_subset(subset: &[usize], n: usize, allow_full: bool) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubsystem("empty subset".into()));
    }
    if subset.iter().any(|&i| i >= n) {
        return Err(Error::InvalidSubsystem(format!("qubit index out of range for {n} qubits: {subset:?}")));
    }
    for (i, a) in subset.iter().enumerate() {
        if subset[..i].contains(a) {
            return Err(Error::InvalidSubsystem(format!("repeated qubit {a}")));
        }
    }
    if !allow_full && subset.len() == n {
        return Err(Error::InvalidSubsystem("subset must be a proper subset".into()));
    }
    Ok(())
}

/// `R^{jk} = |j⟩⟨k|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisOp {
    pub j: usize,
    pub k: usize,
}

impl BasisOp {
    pub const ALL: [BasisOp; 4] = [
        BasisOp { j: 0, k: 0 },
        BasisOp { j: 0, k: 1 },
        BasisOp { j: 1, k: 0 },
        BasisOp { j: 1, k: 1 },
    ];

    pub fn new(j: usize, k: usize) -> Result<Self> {
        if j > 1 || k > 1 {
            return Err(Error::param("basis_op", format!("indices must be 0 or 1, got ({j}, {k})")));
        }
        Ok(BasisOp { j, k })
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let mut m = [[0.0; 2]; 2];
        m[self.j][self.k] = 1.0;
        m
    }
}

/// The single-qubit channel `ℰ` fixed by `ū`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelU(pub DecoherenceFactor);

impl ChannelU {
    pub fn new(u: DecoherenceFactor) -> Self {
        ChannelU(u)
    }

    pub fn identity() -> Self {
        ChannelU(DecoherenceFactor::identity())
    }

    pub fn from_complex(c_bar: f64, s_bar: f64) -> Result<Self> {
        Ok(ChannelU(DecoherenceFactor::from_complex(c_bar, s_bar)?))
    }

    pub fn factor(&self) -> &DecoherenceFactor {
        &self.0
    }
}

/// Signature shared by [`channel_table`] and substitutes used in
/// validation fixtures.
pub type ChannelTableFn = fn(&ChannelU, BasisOp) -> [[f64; 2]; 2];

/// `ℰ[R^{jk}]`.
pub fn channel_table(u: &ChannelU, b: BasisOp) -> [[f64; 2]; 2] {
    let cb = u.0.c_bar();
    let sb = u.0.s_bar();
    // 1 - c̄ kept from the accumulator rather than re-subtracted
    let dc = u.0.re_deficit();
    match (b.j, b.k) {
        (0, 0) => [[0.5 * (1.0 + cb), 0.5 * sb], [0.5 * sb, 0.5 * dc]],
        (0, 1) => [[-0.5 * sb, 0.5 * (1.0 + cb)], [-0.5 * dc, 0.5 * sb]],
        (1, 0) => [[-0.5 * sb, -0.5 * dc], [0.5 * (1.0 + cb), 0.5 * sb]],
        _ => [[0.5 * dc, -0.5 * sb], [-0.5 * sb, 0.5 * (1.0 + cb)]],
    }
}

fn table(u: &ChannelU, table_fn: ChannelTableFn) -> [[[f64; 2]; 2]; 4] {
    BasisOp::ALL.map(|b| table_fn(u, b))
}

/// Applies `ℰ` to one qubit by expanding that qubit's slot in the
/// `R^{jk}` basis.
pub fn apply_channel(u: &ChannelU, rho: &DensityOperator, target: &str) -> Result<DensityOperator> {
    let idx = rho.qubit_index(target)?;
    apply_channel_at(u, rho, idx)
}

pub fn apply_channel_at(u: &ChannelU, rho: &DensityOperator, idx: usize) -> Result<DensityOperator> {
    apply_channel_with(u, rho, idx, channel_table)
}

/// As [`apply_channel_at`] with an explicit channel table.
pub fn apply_channel_with(
    u: &ChannelU,
    rho: &DensityOperator,
    idx: usize,
    table_fn: ChannelTableFn,
) -> Result<DensityOperator> {
    if idx >= rho.n_qubits() {
        return Err(Error::InvalidSubsystem(format!("qubit {idx} out of range")));
    }
    let t = table(u, table_fn);
    let m = rho.mask(idx);
    let dim = rho.dim();
    let src = &rho.data;
    let out = CMatrix::from_fn(dim, dim, |r, col| {
        let a = usize::from(r & m != 0);
        let b = usize::from(col & m != 0);
        let (r0, c0) = (r & !m, col & !m);
        let mut acc = Complex64::new(0.0, 0.0);
        for (op, e) in BasisOp::ALL.iter().zip(&t) {
            let v = e[a][b];
            if v != 0.0 {
                acc += src[(r0 | (op.j * m), c0 | (op.k * m))] * v;
            }
        }
        acc
    });
    DensityOperator::new(out, rho.qubits.clone())
}

fn kron_power(m: &[[f64; 2]; 2], n: usize) -> CMatrix {
    let base = CMatrix::from_fn(2, 2, |r, col| c(m[r][col]));
    let mut out = base.clone();
    for _ in 1..n {
        out = out.kronecker(&base);
    }
    out
}

fn check_particles(n: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::param("particles", format!("need 1..={MAX_QUBITS}, got {n}")));
    }
    Ok(())
}

/// `½ Σ_{jk} (R^{jk})^{⊗N}`, the GHZ projector.
pub fn ghz(n: usize) -> Result<DensityOperator> {
    check_particles(n)?;
    let dim = 1usize << n;
    let mut acc = CMatrix::zeros(dim, dim);
    for b in BasisOp::ALL {
        acc += kron_power(&b.matrix(), n) * c(0.5);
    }
    DensityOperator::new(acc, default_labels(n))
}

/// `½ Σ_{jk} ℰ[R^{jk}]^{⊗N}`.
pub fn evolve_ghz(n: usize, u: &ChannelU) -> Result<DensityOperator> {
    check_particles(n)?;
    let dim = 1usize << n;
    let mut acc = CMatrix::zeros(dim, dim);
    for b in BasisOp::ALL {
        acc += kron_power(&channel_table(u, b), n) * c(0.5);
    }
    DensityOperator::new(acc, default_labels(n))
}

/// Pauli matrices, `σ⁰` being the identity.
pub fn pauli(i: usize) -> [[Complex64; 2]; 2] {
    let z = c(0.0);
    let one = c(1.0);
    let im = Complex64::new(0.0, 1.0);
    match i {
        0 => [[one, z], [z, one]],
        1 => [[z, one], [one, z]],
        2 => [[z, -im], [im, z]],
        3 => [[one, z], [z, -one]],
        _ => panic!("pauli index {i} out of range"),
    }
}

/// `(σⁱ ⊗ σ⁰)(|00⟩ + |11⟩)/√2`.
pub fn bell_vector(i: usize) -> Result<DVector<Complex64>> {
    if i > 3 {
        return Err(Error::param("outcome", format!("Bell index must be 0..=3, got {i}")));
    }
    let s = pauli(i);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::zeros(4);
    // |00⟩ → σ|0⟩ ⊗ |0⟩, |11⟩ → σ|1⟩ ⊗ |1⟩
    for (first, second) in [(0usize, 0usize), (1, 1)] {
        for out in 0..2 {
            v[(out << 1) | second] += s[out][first] * h;
        }
    }
    Ok(v)
}

pub fn bell_state(i: usize) -> Result<DensityOperator> {
    DensityOperator::from_pure(&bell_vector(i)?, vec!["A".into(), "B".into()])
}

/// Entries transposed on the chosen qubits only.
pub fn partial_transpose(rho: &DensityOperator, subset: &[usize]) -> Result<CMatrix> {
    check_subset(subset, rho.n_qubits(), false)?;
    let mask = subset.iter().fold(0usize, |m, &i| m | rho.mask(i));
    let d = &rho.data;
    Ok(CMatrix::from_fn(rho.dim(), rho.dim(), |r, col| {
        let r2 = (r & !mask) | (col & mask);
        let c2 = (col & !mask) | (r & mask);
        d[(r2, c2)]
    }))
}

/// `max(-2 Σ negative eigenvalues of ρ^{T_subset}, 0)`.
pub fn negativity(rho: &DensityOperator, subset: &[usize]) -> Result<f64> {
    let pt = partial_transpose(rho, subset)?;
    let ev = herm_eigenvalues(&pt)?;
    let neg: f64 = ev.iter().filter(|v| **v < 0.0).sum();
    Ok((-2.0 * neg).max(0.0))
}

/// Negativity across every bipartition, each listed once by the side that
/// holds qubit 0.
pub fn bipartition_negativities(rho: &DensityOperator) -> Result<Vec<(Vec<usize>, f64)>> {
    let n = rho.n_qubits();
    let mut out = Vec::new();
    for bits in 0..(1usize << (n - 1)) {
        let side: Vec<usize> = std::iter::once(0)
            .chain((1..n).filter(|i| bits >> (i - 1) & 1 == 1))
            .collect();
        if side.len() == n {
            continue;
        }
        out.push((side.clone(), negativity(rho, &side)?));
    }
    Ok(out)
}

/// `-Σ η log₂ η` over the spectrum; eigenvalues in `[-slack, 0)` count as 0.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let ev = rho.check_positive()?;
    Ok(ev
        .iter()
        .filter(|&&v| v > 0.0)
        .fold(0.0, |acc, &v| acc - v * v.log2()))
}

/// `-P log₂ P - (1-P) log₂(1-P)`, accurate for tiny `P`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let ln2 = std::f64::consts::LN_2;
    -p * p.log2() - (1.0 - p) * (-p).ln_1p() / ln2
}

/// Entropy of the evolved single-particle state, `P = (1 - |ū|)/2`.
pub fn analytic_single_particle_entropy(d: &DecoherenceFactor) -> f64 {
    binary_entropy(0.5 * d.deficit())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticle {
    pub entropy: f64,
    pub negativity: f64,
    pub negativity_deficit: f64,
}

/// Entropy and negativity of the evolved Bell pair in deficit arithmetic.
pub fn analytic_two_particle(d: &DecoherenceFactor) -> TwoParticle {
    let d2 = deficit_sq(d.deficit());
    TwoParticle {
        entropy: binary_entropy(0.5 * d2),
        negativity: 1.0 - d2,
        negativity_deficit: d2,
    }
}

/// Evolved single-particle state `ℰ[|0⟩⟨0|]`.
pub fn evolve_single(u: &ChannelU) -> Result<DensityOperator> {
    let m = channel_table(u, BasisOp { j: 0, k: 0 });
    DensityOperator::new(CMatrix::from_fn(2, 2, |r, col| c(m[r][col])), default_labels(1))
}
