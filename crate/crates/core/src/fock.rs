//! Labeled occupation-basis linear algebra for a single frequency.
//!
//! A [`PureBipartiteState`] lives on `hor ⊗ out`, with one occupation label
//! per side. Tracing out one side gives a [`DensityOperator`] on the other,
//! and its von Neumann entropy is the entanglement entropy of the pair.
//! This is the numerical oracle the closed forms are checked against.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::Statistics;

/// Eigenvalues at or below this are dropped from `-Σ λ log₂ λ`.
pub const EIGENVALUE_FLOOR: f64 = 1e-30;
/// Allowed slack in `Σ|a|²` after accounting for the truncation tail.
pub const EPS_NORM: f64 = 1e-12;
/// Largest trace deficit a density operator may carry.
pub const MAX_TRACE_DEFICIT: f64 = 1e-6;
/// Maximum elementwise Hermitian asymmetry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue still treated as zero.
pub const POSITIVITY_TOL: f64 = -1e-10;
/// Off-diagonal mass allowed where a diagonal operator is required.
pub const DIAGONAL_TOL: f64 = 1e-10;

/// Occupation of one subsystem at one frequency.
///
/// Bosonic modes carry a single occupation number. Fermionic modes carry a
/// particle bit and an antiparticle bit, ordered `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Occupation {
    Boson(u32),
    Fermion { particle: bool, antiparticle: bool },
}

impl Occupation {
    pub const FERMION_BASIS: [Occupation; 4] = [
        Occupation::fermion(false, false),
        Occupation::fermion(false, true),
        Occupation::fermion(true, false),
        Occupation::fermion(true, true),
    ];

    pub const fn fermion(particle: bool, antiparticle: bool) -> Self {
        Occupation::Fermion {
            particle,
            antiparticle,
        }
    }

    pub fn statistics(&self) -> Statistics {
        match self {
            Occupation::Boson(_) => Statistics::Boson,
            Occupation::Fermion { .. } => Statistics::Fermion,
        }
    }

    /// Number of quanta in the requested sector.
    pub fn count(&self, which: Sector) -> Result<u32> {
        match (*self, which) {
            (Occupation::Boson(n), Sector::Particle | Sector::Total) => Ok(n),
            (Occupation::Boson(_), Sector::Antiparticle) => Err(Error::invalid(
                "bosonic modes have no separate antiparticle sector",
            )),
            (Occupation::Fermion { particle, .. }, Sector::Particle) => Ok(particle as u32),
            (Occupation::Fermion { antiparticle, .. }, Sector::Antiparticle) => {
                Ok(antiparticle as u32)
            }
            (
                Occupation::Fermion {
                    particle,
                    antiparticle,
                },
                Sector::Total,
            ) => Ok(particle as u32 + antiparticle as u32),
        }
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Occupation::Boson(n) => write!(f, "{n}"),
            Occupation::Fermion {
                particle,
                antiparticle,
            } => write!(f, "{}{}", *particle as u8, *antiparticle as u8),
        }
    }
}

// Bosonic labels serialize as integers, fermionic ones as "00".."11".
impl Serialize for Occupation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Occupation::Boson(n) => s.serialize_u32(*n),
            Occupation::Fermion { .. } => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Occupation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u32),
            Bits(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(n) => Ok(Occupation::Boson(n)),
            Raw::Bits(s) => match s.as_str() {
                "00" => Ok(Occupation::fermion(false, false)),
                "01" => Ok(Occupation::fermion(false, true)),
                "10" => Ok(Occupation::fermion(true, false)),
                "11" => Ok(Occupation::fermion(true, true)),
                _ => Err(de::Error::custom(format!("bad fermionic label {s:?}"))),
            },
        }
    }
}

/// Which occupation component to average in [`DensityOperator::mean_occupation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Particle,
    Antiparticle,
    Total,
}

/// Side of the bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// Modes reaching future null infinity (Hawking radiation).
    Out,
    /// Modes falling through the horizon.
    Hor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub hor: Occupation,
    pub out: Occupation,
}

impl BasisLabel {
    pub fn new(hor: Occupation, out: Occupation) -> Self {
        Self { hor, out }
    }

    fn side(&self, which: Subsystem) -> Occupation {
        match which {
            Subsystem::Out => self.out,
            Subsystem::Hor => self.hor,
        }
    }
}

/// The only `(hor, out)` pairs a single-frequency fermionic state may populate.
fn fermion_label_allowed(label: &BasisLabel) -> bool {
    use Occupation as O;
    matches!(
        (label.hor, label.out),
        (
            O::Fermion { particle: false, antiparticle: false },
            O::Fermion { particle: false, antiparticle: false }
        ) | (
            O::Fermion { particle: false, antiparticle: true },
            O::Fermion { particle: true, antiparticle: false }
        ) | (
            O::Fermion { particle: true, antiparticle: false },
            O::Fermion { particle: false, antiparticle: true }
        ) | (
            O::Fermion { particle: true, antiparticle: true },
            O::Fermion { particle: true, antiparticle: true }
        )
    )
}

/// Pure state of one `hor`/`out` mode pair in a (possibly truncated) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBipartiteState {
    statistics: Statistics,
    n_max: u32,
    tail_bound: f64,
    amplitudes: BTreeMap<BasisLabel, Complex64>,
}

impl PureBipartiteState {
    /// Validates label shapes and normalization.
    ///
    /// `tail_bound` is an upper bound on the probability discarded by
    /// truncation, so the retained norm must lie in
    /// `[1 - tail_bound - EPS_NORM, 1 + EPS_NORM]`.
    pub fn new(
        statistics: Statistics,
        n_max: u32,
        tail_bound: f64,
        amplitudes: impl IntoIterator<Item = (BasisLabel, Complex64)>,
    ) -> Result<Self> {
        if !(tail_bound >= 0.0 && tail_bound.is_finite()) {
            return Err(Error::invalid(format!("tail bound must be >= 0, got {tail_bound}")));
        }
        if statistics == Statistics::Fermion && n_max != 1 {
            return Err(Error::invalid("fermionic states have n_max = 1"));
        }
        let mut map = BTreeMap::new();
        for (label, amp) in amplitudes {
            for side in [label.hor, label.out] {
                match side {
                    Occupation::Boson(n) if statistics == Statistics::Boson && n <= n_max => {}
                    Occupation::Fermion { .. } if statistics == Statistics::Fermion => {}
                    _ => {
                        return Err(Error::invalid(format!(
                            "label ({}, {}) does not fit a {statistics} basis with n_max = {n_max}",
                            label.hor, label.out
                        )))
                    }
                }
            }
            if statistics == Statistics::Fermion && amp != Complex64::ZERO && !fermion_label_allowed(&label) {
                return Err(Error::invalid(format!(
                    "fermionic label ({}, {}) cannot carry amplitude",
                    label.hor, label.out
                )));
            }
            if amp != Complex64::ZERO {
                *map.entry(label).or_insert(Complex64::ZERO) += amp;
            }
        }
        let state = Self {
            statistics,
            n_max,
            tail_bound,
            amplitudes: map,
        };
        let norm = state.norm_squared();
        if norm > 1.0 + EPS_NORM || norm < 1.0 - tail_bound - EPS_NORM {
            return Err(Error::invalid(format!(
                "norm {norm} inconsistent with tail bound {tail_bound:e}"
            )));
        }
        Ok(state)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.amplitudes.get(label).copied().unwrap_or(Complex64::ZERO)
    }

    /// Nonzero amplitudes in label order.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Ordered single-subsystem basis, identical for both sides.
    pub fn subsystem_basis(&self) -> Vec<Occupation> {
        match self.statistics {
            Statistics::Boson => (0..=self.n_max).map(Occupation::Boson).collect(),
            Statistics::Fermion => Occupation::FERMION_BASIS.to_vec(),
        }
    }

    /// `Tr(ρ²)` of the global projector `|ψ⟩⟨ψ|`, summed elementwise.
    pub fn global_purity(&self) -> f64 {
        let amps: Vec<Complex64> = self.amplitudes.values().copied().collect();
        let mut acc = 0.0;
        for a in &amps {
            for b in &amps {
                acc += (a * b.conj()).norm_sqr();
            }
        }
        acc
    }

    /// Reduced operator on `keep`: `ρ[i, j] = Σ_k ψ(k, i) ψ*(k, j)`.
    pub fn partial_trace(&self, keep: Subsystem) -> DensityOperator {
        let traced = match keep {
            Subsystem::Out => Subsystem::Hor,
            Subsystem::Hor => Subsystem::Out,
        };
        let basis = self.subsystem_basis();
        let index: BTreeMap<Occupation, usize> =
            basis.iter().enumerate().map(|(i, o)| (*o, i)).collect();

        let mut groups: BTreeMap<Occupation, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (label, amp) in &self.amplitudes {
            groups
                .entry(label.side(traced))
                .or_default()
                .push((index[&label.side(keep)], *amp));
        }

        let mut entries: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for terms in groups.values() {
            for &(i, ai) in terms {
                for &(j, aj) in terms {
                    *entries.entry((i, j)).or_insert(Complex64::ZERO) += ai * aj.conj();
                }
            }
        }

        let off_diagonal = entries
            .iter()
            .any(|(&(i, j), v)| i != j && *v != Complex64::ZERO);
        let matrix = if off_diagonal {
            let n = basis.len();
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            for ((i, j), v) in entries {
                m[(i, j)] = v;
            }
            OperatorMatrix::Dense(m)
        } else {
            let mut d = vec![0.0; basis.len()];
            for ((i, _), v) in entries.into_iter().filter(|((i, j), _)| i == j) {
                d[i] = v.re;
            }
            OperatorMatrix::Diagonal(d)
        };
        DensityOperator { basis, matrix }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum OperatorMatrix {
    /// Exactly diagonal in the occupation basis.
    Diagonal(Vec<f64>),
    Dense(DMatrix<Complex64>),
}

/// Hermitian, unit-trace (up to truncation loss) operator on a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    basis: Vec<Occupation>,
    matrix: OperatorMatrix,
}

/// JSON form: diagonal plus the Frobenius norm of the off-diagonal part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOperatorJson {
    pub basis: Vec<Occupation>,
    pub diag: Vec<f64>,
    pub offdiag_norm: f64,
}

fn check_basis(basis: &[Occupation], dim: usize) -> Result<()> {
    if basis.is_empty() || basis.len() != dim {
        return Err(Error::InvalidOperator(format!(
            "basis has {} labels for dimension {dim}",
            basis.len()
        )));
    }
    let stats = basis[0].statistics();
    if basis.iter().any(|o| o.statistics() != stats) {
        return Err(Error::InvalidOperator("mixed statistics in basis".into()));
    }
    if basis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidOperator("basis labels must be strictly ordered".into()));
    }
    Ok(())
}

fn check_trace(trace: f64) -> Result<()> {
    if !(1.0 - MAX_TRACE_DEFICIT..=1.0 + EPS_NORM).contains(&trace) {
        return Err(Error::InvalidOperator(format!("trace {trace} outside [1 - {MAX_TRACE_DEFICIT:e}, 1]")));
    }
    Ok(())
}

impl DensityOperator {
    pub fn from_diagonal(basis: Vec<Occupation>, diag: Vec<f64>) -> Result<Self> {
        check_basis(&basis, diag.len())?;
        if let Some(p) = diag.iter().find(|p| !(p.is_finite() && **p >= POSITIVITY_TOL)) {
            return Err(Error::InvalidOperator(format!("diagonal entry {p} is not a probability")));
        }
        check_trace(diag.iter().sum())?;
        Ok(Self {
            basis,
            matrix: OperatorMatrix::Diagonal(diag),
        })
    }

    /// Dense operator; Hermiticity and trace are checked here, positivity when
    /// the spectrum is taken.
    pub fn from_matrix(basis: Vec<Occupation>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidOperator("matrix is not square".into()));
        }
        check_basis(&basis, matrix.nrows())?;
        let n = matrix.nrows();
        for i in 0..n {
            for j in i..n {
                let asym = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if !(asym <= HERMITIAN_TOL) {
                    return Err(Error::InvalidOperator(format!(
                        "not Hermitian at ({i}, {j}): asymmetry {asym:e}"
                    )));
                }
            }
        }
        check_trace(matrix.diagonal().iter().map(|z| z.re).sum())?;
        Ok(Self {
            basis,
            matrix: OperatorMatrix::Dense(matrix),
        })
    }

    pub fn from_json(json: &DensityOperatorJson) -> Result<Self> {
        if json.offdiag_norm > DIAGONAL_TOL {
            return Err(Error::InvalidOperator(format!(
                "serialized operator has off-diagonal norm {:e}; only diagonal dumps can be restored",
                json.offdiag_norm
            )));
        }
        Self::from_diagonal(json.basis.clone(), json.diag.clone())
    }

    pub fn to_json(&self) -> DensityOperatorJson {
        DensityOperatorJson {
            basis: self.basis.clone(),
            diag: self.diagonal(),
            offdiag_norm: self.offdiag_norm(),
        }
    }

    pub fn basis(&self) -> &[Occupation] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn statistics(&self) -> Statistics {
        self.basis[0].statistics()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        match &self.matrix {
            OperatorMatrix::Diagonal(d) => d.clone(),
            OperatorMatrix::Dense(m) => m.diagonal().iter().map(|z| z.re).collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.matrix {
            OperatorMatrix::Diagonal(d) => {
                let n = d.len();
                DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(d[i], 0.0) } else { Complex64::ZERO })
            }
            OperatorMatrix::Dense(m) => m.clone(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// Frobenius norm of the off-diagonal part.
    pub fn offdiag_norm(&self) -> f64 {
        match &self.matrix {
            OperatorMatrix::Diagonal(_) => 0.0,
            OperatorMatrix::Dense(m) => {
                let n = m.nrows();
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            acc += m[(i, j)].norm_sqr();
                        }
                    }
                }
                acc.sqrt()
            }
        }
    }

    /// Eigenvalues, ascending. Diagonal operators skip the decomposition.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut eig = match &self.matrix {
            OperatorMatrix::Diagonal(d) => d.clone(),
            OperatorMatrix::Dense(_) => return self.spectrum_dense(),
        };
        eig.sort_by(f64::total_cmp);
        check_positive(&eig)?;
        Ok(eig)
    }

    /// Eigenvalues from a full Hermitian decomposition, ascending.
    pub fn spectrum_dense(&self) -> Result<Vec<f64>> {
        let eigen = SymmetricEigen::new(self.to_dense());
        let mut eig: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        check_positive(&eig)?;
        Ok(eig)
    }

    /// Von Neumann entropy `-Σ λ log₂ λ`, in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        Ok(entropy_bits(&self.spectrum()?))
    }

    /// Same as [`Self::von_neumann_entropy`] but always through the eigensolver.
    pub fn von_neumann_entropy_dense(&self) -> Result<f64> {
        Ok(entropy_bits(&self.spectrum_dense()?))
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        match &self.matrix {
            OperatorMatrix::Diagonal(d) => d.iter().map(|p| p * p).sum(),
            OperatorMatrix::Dense(m) => m.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// `Σ n p(n)` for the chosen occupation component. Requires an operator
    /// diagonal in the occupation basis.
    pub fn mean_occupation(&self, which: Sector) -> Result<f64> {
        let off = self.offdiag_norm();
        if off > DIAGONAL_TOL {
            return Err(Error::InvalidOperator(format!(
                "mean occupation needs a diagonal operator, off-diagonal norm is {off:e}"
            )));
        }
        let diag = self.diagonal();
        let mut acc = 0.0;
        for (label, p) in self.basis.iter().zip(&diag) {
            acc += label.count(which)? as f64 * p;
        }
        Ok(acc)
    }
}

fn check_positive(eig: &[f64]) -> Result<()> {
    match eig.first() {
        Some(&min) if min < POSITIVITY_TOL || min.is_nan() => Err(Error::InvalidOperator(format!(
            "not positive semidefinite: eigenvalue {min:e}"
        ))),
        _ => Ok(()),
    }
}

/// `-Σ p log₂ p` over entries above [`EIGENVALUE_FLOOR`].
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    let s: f64 = probabilities
        .iter()
        .filter(|&&p| p > EIGENVALUE_FLOOR)
        .map(|&p| -p * p.log2())
        .sum();
    s.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_like() -> PureBipartiteState {
        let h = 0.5;
        let labels = [
            (Occupation::fermion(false, false), Occupation::fermion(false, false), h),
            (Occupation::fermion(false, true), Occupation::fermion(true, false), -h),
            (Occupation::fermion(true, false), Occupation::fermion(false, true), h),
            (Occupation::fermion(true, true), Occupation::fermion(true, true), -h),
        ];
        PureBipartiteState::new(
            Statistics::Fermion,
            1,
            0.0,
            labels.iter().map(|&(a, b, v)| (BasisLabel::new(a, b), c(v))),
        )
        .unwrap()
    }

    #[test]
    fn vacuum_traces_to_projector() {
        let s = PureBipartiteState::new(
            Statistics::Boson,
            3,
            0.0,
            [(BasisLabel::new(Occupation::Boson(0), Occupation::Boson(0)), c(1.0))],
        )
        .unwrap();
        let rho = s.partial_trace(Subsystem::Out);
        assert_eq!(rho.diagonal(), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(rho.von_neumann_entropy().unwrap(), 0.0);
        assert_eq!(rho.purity(), 1.0);
        assert_eq!(rho.mean_occupation(Sector::Total).unwrap(), 0.0);
    }

    #[test]
    fn maximal_fermion_state_is_uniform() {
        let rho = bell_like().partial_trace(Subsystem::Out);
        for p in rho.diagonal() {
            assert!((p - 0.25).abs() < 1e-15);
        }
        assert!((rho.von_neumann_entropy().unwrap() - 2.0).abs() < 1e-14);
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn uniform_and_mixed_examples() {
        let basis = Occupation::FERMION_BASIS.to_vec();
        let rho = DensityOperator::from_diagonal(basis, vec![0.25; 4]).unwrap();
        assert!((rho.von_neumann_entropy().unwrap() - 2.0).abs() < 1e-15);
        let half = DensityOperator::from_diagonal(
            vec![Occupation::Boson(0), Occupation::Boson(1)],
            vec![0.5, 0.5],
        )
        .unwrap();
        assert_eq!(half.purity(), 0.5);
    }

    #[test]
    fn geometric_ladder_entropy() {
        // brute-force -Σ p log₂ p over (1 - q) qⁿ, q = e^-2
        let q = (-2.0f64).exp();
        let mut expect = 0.0;
        let mut n = 0;
        loop {
            let p = (1.0 - q) * q.powi(n);
            if p < 1e-300 {
                break;
            }
            expect -= p * p.log2();
            n += 1;
        }
        let diag: Vec<f64> = (0..60).map(|n| (1.0 - q) * q.powi(n)).collect();
        let basis = (0..60).map(Occupation::Boson).collect();
        let rho = DensityOperator::from_diagonal(basis, diag).unwrap();
        let s = rho.von_neumann_entropy().unwrap();
        assert!((s - expect).abs() < 1e-13);
        assert!((s - 0.661_401_728_559_065).abs() < 1e-12);
    }

    #[test]
    fn diagonal_and_eigen_paths_agree() {
        let diag = vec![0.5, 0.3, 0.15, 0.05];
        let basis = (0..4).map(Occupation::Boson).collect();
        let rho = DensityOperator::from_diagonal(basis, diag).unwrap();
        let a = rho.von_neumann_entropy().unwrap();
        let b = rho.von_neumann_entropy_dense().unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn dense_partial_trace_for_superposed_state() {
        // (|0,0⟩ + |0,1⟩)/√2 is a product state; reduced out is |+⟩⟨+|.
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let s = PureBipartiteState::new(
            Statistics::Boson,
            1,
            0.0,
            [
                (BasisLabel::new(Occupation::Boson(0), Occupation::Boson(0)), c(a)),
                (BasisLabel::new(Occupation::Boson(0), Occupation::Boson(1)), c(a)),
            ],
        )
        .unwrap();
        let out = s.partial_trace(Subsystem::Out);
        assert!((out.offdiag_norm() - 2f64.sqrt() * 0.5).abs() < 1e-15);
        assert!(out.von_neumann_entropy().unwrap().abs() < 1e-12);
        assert!((out.purity() - 1.0).abs() < 1e-15);
        assert!(out.mean_occupation(Sector::Total).is_err());
        let hor = s.partial_trace(Subsystem::Hor);
        assert_eq!(hor.offdiag_norm(), 0.0);
        assert!((hor.diagonal()[0] - 1.0).abs() < 1e-15);
        assert_eq!(hor.diagonal()[1], 0.0);
    }

    #[test]
    fn rejects_bad_operators() {
        let basis = vec![Occupation::Boson(0), Occupation::Boson(1)];
        assert!(DensityOperator::from_diagonal(basis.clone(), vec![0.7, 0.7]).is_err());
        assert!(DensityOperator::from_diagonal(basis.clone(), vec![1.2, -0.2]).is_err());
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = c(0.5);
        m[(1, 1)] = c(0.5);
        m[(0, 1)] = c(0.9);
        m[(1, 0)] = c(0.9);
        // Hermitian, unit trace, eigenvalues 1.4 and -0.4
        let rho = DensityOperator::from_matrix(basis.clone(), m.clone()).unwrap();
        assert!(matches!(rho.von_neumann_entropy(), Err(Error::InvalidOperator(_))));
        m[(1, 0)] = c(0.1);
        assert!(DensityOperator::from_matrix(basis, m).is_err());
    }

    #[test]
    fn rejects_bad_states() {
        let l = BasisLabel::new(Occupation::Boson(0), Occupation::Boson(5));
        assert!(PureBipartiteState::new(Statistics::Boson, 3, 0.0, [(l, c(1.0))]).is_err());
        let l = BasisLabel::new(Occupation::Boson(0), Occupation::Boson(0));
        assert!(PureBipartiteState::new(Statistics::Boson, 3, 0.0, [(l, c(0.9))]).is_err());
        assert!(PureBipartiteState::new(Statistics::Boson, 3, 0.2, [(l, c(0.9))]).is_ok());
        let bad = BasisLabel::new(Occupation::fermion(true, false), Occupation::fermion(true, false));
        assert!(PureBipartiteState::new(Statistics::Fermion, 1, 0.0, [(bad, c(1.0))]).is_err());
    }

    #[test]
    fn labels_round_trip_through_json() {
        let rho = bell_like().partial_trace(Subsystem::Hor);
        let text = serde_json::to_string(&rho.to_json()).unwrap();
        assert!(text.contains("\"01\""));
        let back: DensityOperatorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(DensityOperator::from_json(&back).unwrap(), rho);
        let boson: Vec<Occupation> = serde_json::from_str("[0, 1, 2]").unwrap();
        assert_eq!(boson, vec![Occupation::Boson(0), Occupation::Boson(1), Occupation::Boson(2)]);
        assert!(serde_json::from_str::<Occupation>("\"12\"").is_err());
    }

    #[test]
    fn fermion_sector_counts() {
        let rho = bell_like().partial_trace(Subsystem::Out);
        assert!((rho.mean_occupation(Sector::Particle).unwrap() - 0.5).abs() < 1e-15);
        assert!((rho.mean_occupation(Sector::Antiparticle).unwrap() - 0.5).abs() < 1e-15);
        assert!((rho.mean_occupation(Sector::Total).unwrap() - 1.0).abs() < 1e-15);
    }
}
