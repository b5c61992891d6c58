//! Quasi-probability decomposition of inverse channels and the resulting
//! sampling overhead factor, via three independent computation paths.

use nalgebra::{DMatrix, DVector};

use crate::basis::BasisSet;
use crate::channel::{PTMChannel, PauliChannelEta};
use crate::error::{QemError, Result};
use crate::pauli::{hadamard_matrix, pauli_mul_index, vec_matrix};

/// Coefficients expressing an inverse channel over a basis of operations.
#[derive(Debug, Clone)]
pub struct QuasiProbability {
    pub mu: DVector<f64>,
    pub one_norm: f64,
    pub basis_id: String,
    /// True when the coefficients live on the 4^n Pauli columns only.
    pub reduced: bool,
    pub n: usize,
}

impl QuasiProbability {
    fn new(n: usize, mu: DVector<f64>, basis_id: String, reduced: bool) -> QuasiProbability {
        let one_norm = mu.iter().map(|m| m.abs()).sum();
        QuasiProbability {
            mu,
            one_norm,
            basis_id,
            reduced,
            n,
        }
    }
}

/// Sampling overhead factor of a single mitigated operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sof {
    pub gamma: f64,
}

pub fn sof(mu: &QuasiProbability) -> Sof {
    Sof {
        gamma: (mu.one_norm * mu.one_norm - 1.0).max(0.0),
    }
}

fn inverse_ptm(c: &PTMChannel) -> Result<DMatrix<f64>> {
    let svd = c.matrix().clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 {
        return Err(QemError::SingularChannel);
    }
    if smax / smin > 1e12 {
        return Err(QemError::IllConditioned(smax / smin));
    }
    c.matrix()
        .clone()
        .lu()
        .solve(&DMatrix::identity(c.dim(), c.dim()))
        .ok_or(QemError::SingularChannel)
}

/// Coefficients of C^{-1} over the basis, solved as two linear systems with
/// an enforced reconstruction residual.
pub fn quasi_probability(c: &PTMChannel, basis: &BasisSet) -> Result<QuasiProbability> {
    if c.n() != basis.n() {
        return Err(QemError::SizeMismatch(c.n(), basis.n()));
    }
    let target = vec_matrix(&inverse_ptm(c)?);
    let mu = basis.solve(&target)?;
    let residual = (basis.matrix() * &mu - &target).amax();
    if residual > 1e-9 {
        return Err(QemError::ResidualTooLarge(residual));
    }
    Ok(QuasiProbability::new(
        c.n(),
        mu,
        format!("table1-n{}", c.n()),
        false,
    ))
}

/// Pauli-only coefficients from the diagonal picture: invert each PTM
/// diagonal entry and rotate back with the Walsh-Hadamard transform.
pub fn reduced_pauli_qp(eta: &PauliChannelEta) -> Result<QuasiProbability> {
    let n = eta.n();
    let dim = 1usize << (2 * n);
    let d = eta.ptm_diagonal();
    let mut inv = DVector::zeros(dim);
    for i in 0..dim {
        if d[i].abs() < 1e-12 {
            return Err(QemError::SingularChannel);
        }
        inv[i] = 1.0 / d[i];
    }
    let mu = hadamard_matrix(n) * inv / dim as f64;
    Ok(QuasiProbability::new(n, mu, format!("pauli-n{n}"), true))
}

/// Random-walk matrix over Pauli labels: entry (i, j) is the probability of
/// the error taking label j to label i.
pub fn prw_matrix(eta: &PauliChannelEta) -> DMatrix<f64> {
    let n = eta.n();
    let dim = 1usize << (2 * n);
    DMatrix::from_fn(dim, dim, |i, j| eta.eta()[pauli_mul_index(n, i, j)])
}

/// Pauli-only coefficients from the random-walk picture: one solve against
/// the first unit vector.
pub fn prw_qp(eta: &PauliChannelEta) -> Result<QuasiProbability> {
    let n = eta.n();
    let dim = 1usize << (2 * n);
    let m = prw_matrix(eta);
    let mut e1 = DVector::zeros(dim);
    e1[0] = 1.0;
    let mu = m.lu().solve(&e1).ok_or(QemError::SingularChannel)?;
    Ok(QuasiProbability::new(n, mu, format!("prw-n{n}"), true))
}

/// Monte-Carlo recipe extracted from a quasi-probability vector: candidate
/// operations, their selection probabilities and signed weights.
#[derive(Debug, Clone)]
pub struct SamplingPlan {
    /// Indices into the basis column list.
    pub candidates: Vec<usize>,
    pub probs: Vec<f64>,
    pub weights: Vec<f64>,
    pub one_norm: f64,
}

impl SamplingPlan {
    /// Weighted mixture of the candidate PTMs; reconstructs the inverse
    /// channel the coefficients were solved for.
    pub fn mixture_ptm(&self, basis: &BasisSet) -> DMatrix<f64> {
        let dim = 1usize << (2 * basis.n());
        let mut m = DMatrix::zeros(dim, dim);
        for ((&k, &p), &w) in self.candidates.iter().zip(&self.probs).zip(&self.weights) {
            m += &basis.ops()[k].ptm * (p * w);
        }
        m
    }
}

/// Turns coefficients into a sampling recipe, dropping numerically dead
/// entries. Reduced coefficient vectors index the leading Pauli columns.
pub fn sampling_plan(mu: &QuasiProbability, basis: &BasisSet) -> Result<SamplingPlan> {
    if mu.n != basis.n() {
        return Err(QemError::SizeMismatch(mu.n, basis.n()));
    }
    if mu.one_norm <= 0.0 {
        return Err(QemError::InvalidPlan("zero coefficient vector".into()));
    }
    if mu.mu.len() > basis.len() {
        return Err(QemError::InvalidPlan(format!(
            "{} coefficients for a basis of {}",
            mu.mu.len(),
            basis.len()
        )));
    }
    let mut candidates = Vec::new();
    let mut probs = Vec::new();
    let mut weights = Vec::new();
    for (k, &m) in mu.mu.iter().enumerate() {
        if m.abs() < 1e-14 {
            continue;
        }
        candidates.push(k);
        probs.push(m.abs() / mu.one_norm);
        weights.push(m.signum() * mu.one_norm);
    }
    Ok(SamplingPlan {
        candidates,
        probs,
        weights,
        one_norm: mu.one_norm,
    })
}

/// Total overhead of a circuit mitigated gate by gate.
pub fn circuit_sof(gammas: &[f64]) -> f64 {
    gammas.iter().fold(1.0, |acc, g| acc * (1.0 + g)) - 1.0
}
