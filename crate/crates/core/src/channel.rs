//! Channel models in Pauli-transfer-matrix form, quality metrics, and the
//! coherent/triangular split of single-qubit CPTP maps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QemError, Result};
use crate::pauli::{hadamard_matrix, pauli_ptm_diagonal, ptm_of_kraus, PauliString};

/// A quantum channel as a real 4^n x 4^n Pauli transfer matrix.
///
/// The operation elements are kept when the channel was built from them.
#[derive(Debug, Clone)]
pub struct PTMChannel {
    n: usize,
    m: DMatrix<f64>,
    kraus: Option<Vec<DMatrix<Complex64>>>,
}

impl PTMChannel {
    pub fn from_ptm(n: usize, m: DMatrix<f64>) -> Result<PTMChannel> {
        let dim = 1usize << (2 * n);
        if m.nrows() != dim || m.ncols() != dim {
            return Err(QemError::SizeMismatch(m.nrows(), dim));
        }
        Ok(PTMChannel { n, m, kraus: None })
    }

    pub fn from_kraus(kraus: Vec<DMatrix<Complex64>>) -> Result<PTMChannel> {
        let m = ptm_of_kraus(&kraus)?;
        let n = kraus[0].nrows().trailing_zeros() as usize;
        Ok(PTMChannel {
            n,
            m,
            kraus: Some(kraus),
        })
    }

    pub fn from_unitary(u: DMatrix<Complex64>) -> Result<PTMChannel> {
        PTMChannel::from_kraus(vec![u])
    }

    pub fn identity(n: usize) -> PTMChannel {
        let dim = 1usize << (2 * n);
        PTMChannel {
            n,
            m: DMatrix::identity(dim, dim),
            kraus: None,
        }
    }

    /// Conjugation by a single Pauli string.
    pub fn of_pauli(p: &PauliString) -> PTMChannel {
        let diag = pauli_ptm_diagonal(p);
        PTMChannel {
            n: p.n(),
            m: DMatrix::from_diagonal(&diag),
            kraus: Some(vec![p.matrix()]),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << (2 * self.n)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn kraus(&self) -> Option<&[DMatrix<Complex64>]> {
        self.kraus.as_deref()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.m[(i, j)].abs() <= tol))
    }

    /// Probability vector over Pauli errors; defined for Pauli (diagonal PTM)
    /// channels only.
    pub fn to_eta(&self) -> Result<PauliChannelEta> {
        if !self.is_diagonal(1e-10) {
            return Err(QemError::InvalidParameter(
                "PTM is not diagonal; not a Pauli channel".into(),
            ));
        }
        let h = hadamard_matrix(self.n);
        let d = self.m.diagonal();
        let eta = (&h * d) / self.dim() as f64;
        PauliChannelEta::new(self.n, eta)
    }
}

/// Probability vector over the 4^n Pauli errors of a Pauli channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannelEta {
    n: usize,
    eta: DVector<f64>,
}

impl PauliChannelEta {
    pub fn new(n: usize, mut eta: DVector<f64>) -> Result<PauliChannelEta> {
        let dim = 1usize << (2 * n);
        if eta.len() != dim {
            return Err(QemError::SizeMismatch(eta.len(), dim));
        }
        let mut sum = 0.0;
        for e in eta.iter_mut() {
            if *e < -1e-10 {
                return Err(QemError::InvalidProbability(format!(
                    "negative entry {e:.3e}"
                )));
            }
            // roundoff clamp
            if *e < 0.0 {
                *e = 0.0;
            }
            sum += *e;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(QemError::InvalidProbability(format!(
                "entries sum to {sum}, expected 1"
            )));
        }
        Ok(PauliChannelEta { n, eta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> &DVector<f64> {
        &self.eta
    }

    pub fn ggep(&self) -> f64 {
        1.0 - self.eta[0]
    }

    /// Diagonal of the corresponding PTM: d = H_n * eta.
    pub fn ptm_diagonal(&self) -> DVector<f64> {
        hadamard_matrix(self.n) * &self.eta
    }

    pub fn to_channel(&self) -> PTMChannel {
        PTMChannel {
            n: self.n,
            m: DMatrix::from_diagonal(&self.ptm_diagonal()),
            kraus: None,
        }
    }
}

/// GGEP and average fidelity of a channel (consistent by construction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelQuality {
    pub ggep: f64,
    pub avg_fidelity: f64,
}

/// Generalized gate error probability: 1 - Tr{C} / 4^n.
pub fn ggep(c: &PTMChannel) -> f64 {
    1.0 - c.m.trace() / c.dim() as f64
}

/// Average fidelity in closed form: (Tr{C} + 2^n) / (4^n + 2^n).
pub fn avg_fidelity(c: &PTMChannel) -> f64 {
    let d2 = (1usize << c.n) as f64;
    let d4 = c.dim() as f64;
    (c.m.trace() + d2) / (d4 + d2)
}

pub fn quality(c: &PTMChannel) -> ChannelQuality {
    ChannelQuality {
        ggep: ggep(c),
        avg_fidelity: avg_fidelity(c),
    }
}

// -------------------------------------------------------------------------
// Channel zoo
// -------------------------------------------------------------------------

/// n-qubit depolarizing channel with the given GGEP.
pub fn depolarizing(n: usize, eps: f64) -> Result<PTMChannel> {
    let dim = 1usize << (2 * n);
    // eps = 1 - eta_I, so anything in [0, 1] is a valid Pauli channel
    if !(0.0..=1.0).contains(&eps) {
        return Err(QemError::InvalidParameter(format!(
            "depolarizing GGEP {eps} outside [0, 1]"
        )));
    }
    let shrink = 1.0 - eps * dim as f64 / (dim as f64 - 1.0);
    let mut d = DVector::from_element(dim, shrink);
    d[0] = 1.0;
    PTMChannel::from_ptm(n, DMatrix::from_diagonal(&d))
}

pub fn bit_flip(p: f64) -> Result<PTMChannel> {
    pauli_channel_1q([1.0 - p, p, 0.0, 0.0])
}

pub fn phase_flip(p: f64) -> Result<PTMChannel> {
    pauli_channel_1q([1.0 - p, 0.0, 0.0, p])
}

fn pauli_channel_1q(eta: [f64; 4]) -> Result<PTMChannel> {
    let eta = PauliChannelEta::new(1, DVector::from_row_slice(&eta))?;
    Ok(pauli_channel(&eta))
}

/// Pauli channel from its error probability vector.
pub fn pauli_channel(eta: &PauliChannelEta) -> PTMChannel {
    eta.to_channel()
}

/// Single-qubit amplitude damping with decay probability `delta`.
pub fn amplitude_damping(delta: f64) -> Result<PTMChannel> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(QemError::InvalidParameter(format!(
            "damping probability {delta} outside [0, 1]"
        )));
    }
    let o = Complex64::new(0.0, 0.0);
    let e0 = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            o,
            o,
            Complex64::new((1.0 - delta).sqrt(), 0.0),
        ],
    );
    let e1 = DMatrix::from_row_slice(2, 2, &[o, Complex64::new(delta.sqrt(), 0.0), o, o]);
    PTMChannel::from_kraus(vec![e0, e1])
}

/// Coherent over-rotation about the X axis, angle controlled by `phi`.
pub fn over_rotation(phi: f64) -> Result<PTMChannel> {
    let theta = 4.0 * phi / std::f64::consts::PI;
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(0.0, theta.sin());
    let u = DMatrix::from_row_slice(2, 2, &[c, s, s, c]);
    PTMChannel::from_unitary(u)
}

/// Kronecker product of channels in qubit order.
pub fn tensor(channels: &[PTMChannel]) -> Result<PTMChannel> {
    let mut iter = channels.iter();
    let first = iter
        .next()
        .ok_or_else(|| QemError::InvalidParameter("empty channel list".into()))?;
    let mut n = first.n;
    let mut m = first.m.clone();
    for c in iter {
        n += c.n;
        m = m.kronecker(&c.m);
    }
    PTMChannel::from_ptm(n, m)
}

/// Composition: `outer` applied after `inner`.
pub fn compose(outer: &PTMChannel, inner: &PTMChannel) -> Result<PTMChannel> {
    if outer.n != inner.n {
        return Err(QemError::SizeMismatch(outer.n, inner.n));
    }
    PTMChannel::from_ptm(outer.n, &outer.m * &inner.m)
}

// -------------------------------------------------------------------------
// CPTP check
// -------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct CptpReport {
    pub trace_preserving: bool,
    pub min_choi_eigenvalue: f64,
}

impl CptpReport {
    pub fn is_cptp(&self) -> bool {
        self.trace_preserving && self.min_choi_eigenvalue >= -1e-10
    }
}

/// Normalized Choi matrix reconstructed from the PTM by basis change.
pub fn choi_matrix(c: &PTMChannel) -> DMatrix<Complex64> {
    let n = c.n;
    let np = c.dim();
    let hdim = 1usize << n;
    let mut choi = DMatrix::<Complex64>::zeros(hdim * hdim, hdim * hdim);
    let paulis: Vec<DMatrix<Complex64>> = (0..np)
        .map(|i| PauliString::new(n, i).unwrap().matrix())
        .collect();
    let scale = Complex64::new(1.0 / np as f64, 0.0);
    for i in 0..np {
        for j in 0..np {
            let cij = c.m[(i, j)];
            if cij == 0.0 {
                continue;
            }
            let term = paulis[j].transpose().kronecker(&paulis[i]);
            choi += term * (scale * cij);
        }
    }
    choi
}

/// Trace preservation plus complete positivity via Choi eigenvalues.
pub fn is_cptp(c: &PTMChannel) -> CptpReport {
    let np = c.dim();
    let mut tp = (c.m[(0, 0)] - 1.0).abs() <= 1e-10;
    for j in 1..np {
        tp &= c.m[(0, j)].abs() <= 1e-10;
    }
    let choi = choi_matrix(c);
    let eig = choi.symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    CptpReport {
        trace_preserving: tp,
        min_choi_eigenvalue: min,
    }
}

// -------------------------------------------------------------------------
// Coherent / triangular decomposition (single qubit)
// -------------------------------------------------------------------------

/// Rotation-diagonal-rotation split of a single-qubit trace-preserving PTM.
#[derive(Debug, Clone)]
pub struct CoherentTriangularParts {
    /// Left coherent factor (unital rotation channel).
    pub u: PTMChannel,
    /// Central triangular channel carrying the scaling and translation.
    pub d: PTMChannel,
    /// Right coherent factor; the input reconstructs as u * d * v^T.
    pub v: PTMChannel,
}

impl CoherentTriangularParts {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.u.matrix() * self.d.matrix() * self.v.matrix().transpose()
    }
}

/// Splits a trace-preserving single-qubit channel into two rotations and a
/// triangular core, with both rotation blocks forced into SO(3) by folding
/// any reflection into the core's last diagonal entry.
pub fn coherent_triangular_decompose(c: &PTMChannel) -> Result<CoherentTriangularParts> {
    if c.n != 1 {
        return Err(QemError::UnsupportedQubitCount(c.n));
    }
    if (c.m[(0, 0)] - 1.0).abs() > 1e-10
        || c.m[(0, 1)].abs() > 1e-10
        || c.m[(0, 2)].abs() > 1e-10
        || c.m[(0, 3)].abs() > 1e-10
    {
        return Err(QemError::InvalidParameter(
            "channel is not trace preserving".into(),
        ));
    }
    let block = c.m.view((1, 1), (3, 3)).into_owned();
    let b = c.m.view((1, 0), (3, 1)).into_owned();

    let svd = block.svd(true, true);
    let mut u = svd.u.unwrap();
    let mut vt = svd.v_t.unwrap();
    let mut s = svd.singular_values.clone();
    if u.determinant() < 0.0 {
        for r in 0..3 {
            u[(r, 2)] = -u[(r, 2)];
        }
        s[2] = -s[2];
    }
    if vt.determinant() < 0.0 {
        for cidx in 0..3 {
            vt[(2, cidx)] = -vt[(2, cidx)];
        }
        s[2] = -s[2];
    }
    let v = vt.transpose();

    let embed = |r: &DMatrix<f64>| {
        let mut m = DMatrix::identity(4, 4);
        m.view_mut((1, 1), (3, 3)).copy_from(r);
        m
    };
    let mut d = DMatrix::identity(4, 4);
    for i in 0..3 {
        d[(i + 1, i + 1)] = s[i];
    }
    let translated = u.transpose() * &b;
    for i in 0..3 {
        d[(i + 1, 0)] = translated[(i, 0)];
    }

    Ok(CoherentTriangularParts {
        u: PTMChannel::from_ptm(1, embed(&u))?,
        d: PTMChannel::from_ptm(1, d)?,
        v: PTMChannel::from_ptm(1, embed(&v))?,
    })
}

// -------------------------------------------------------------------------
// Parameter calibration
// -------------------------------------------------------------------------

/// Single-parameter channel families with a monotone parameter -> GGEP map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibratedModel {
    Depolarizing,
    AmplitudeDamping,
    OverRotation,
}

impl CalibratedModel {
    pub fn channel(self, param: f64) -> Result<PTMChannel> {
        match self {
            CalibratedModel::Depolarizing => depolarizing(1, param),
            CalibratedModel::AmplitudeDamping => amplitude_damping(param),
            CalibratedModel::OverRotation => over_rotation(param),
        }
    }

    fn param_range(self) -> (f64, f64) {
        match self {
            CalibratedModel::Depolarizing => (0.0, 1.0),
            CalibratedModel::AmplitudeDamping => (0.0, 1.0),
            // 8*phi/pi spans [0, pi]: GGEP runs monotonically from 0 to 1.
            CalibratedModel::OverRotation => (0.0, std::f64::consts::PI * std::f64::consts::PI / 8.0),
        }
    }
}

/// Bisection for the parameter reproducing `target_eps` to 1e-12.
pub fn calibrate_to_ggep(model: CalibratedModel, target_eps: f64) -> Result<f64> {
    if model == CalibratedModel::Depolarizing {
        // parameter is the GGEP itself
        depolarizing(1, target_eps)?;
        return Ok(target_eps);
    }
    let (mut lo, mut hi) = model.param_range();
    let eps_of = |p: f64| -> Result<f64> { Ok(ggep(&model.channel(p)?)) };
    let (eps_lo, eps_hi) = (eps_of(lo)?, eps_of(hi)?);
    if target_eps < eps_lo - 1e-12 || target_eps > eps_hi + 1e-12 {
        return Err(QemError::InvalidParameter(format!(
            "target GGEP {target_eps} unreachable (range [{eps_lo}, {eps_hi}])"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let e = eps_of(mid)?;
        if (e - target_eps).abs() <= 1e-12 {
            return Ok(mid);
        }
        if e < target_eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
