//! Closed-form bounds and exact expressions for the sampling overhead of
//! channels with a known error probability.

use nalgebra::DMatrix;

use crate::channel::PauliChannelEta;
use crate::error::{QemError, Result};

/// Lower and upper overhead bounds evaluated at one error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub eps: f64,
}

/// Overhead of the best-case Pauli channel: 4 eps / (1 - eps)^2.
pub fn sof_lower_bound(eps: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(QemError::InvalidParameter(format!(
            "GGEP {eps} outside [0, 1)"
        )));
    }
    Ok(4.0 * eps / ((1.0 - eps) * (1.0 - eps)))
}

/// Overhead of the worst-case Pauli channel: 4 eps (1 - eps) / (1 - 2 eps)^2.
/// Diverges at eps = 1/2, where single-error channels stop being invertible.
pub fn sof_upper_bound(eps: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&eps) {
        return Err(QemError::InvalidParameter(format!(
            "GGEP {eps} outside [0, 0.5)"
        )));
    }
    let d = 1.0 - 2.0 * eps;
    Ok(4.0 * eps * (1.0 - eps) / (d * d))
}

pub fn bound_pair(eps: f64) -> Result<BoundPair> {
    Ok(BoundPair {
        lower: sof_lower_bound(eps)?,
        upper: sof_upper_bound(eps)?,
        eps,
    })
}

/// Exact overhead of the n-qubit depolarizing channel.
pub fn depolarizing_sof(n: usize, eps: f64) -> f64 {
    let d = (1usize << (2 * n)) as f64;
    let r = (d * (1.0 + eps) - 1.0 - 2.0 * eps) / (d * (1.0 - eps) - 1.0);
    r * r - 1.0
}

/// The expression as printed in the source derivation. Kept for comparison
/// only: it is negative at (n=1, eps=0.03) and contradicts the worked
/// example, so [`depolarizing_sof`] uses the corrected form.
pub fn depolarizing_sof_printed(n: usize, eps: f64) -> f64 {
    let d = (1usize << (2 * n)) as f64;
    let r = ((d - 1.0) * (1.0 - 2.0 * eps) - eps) / (d * (1.0 - eps) - 1.0);
    r * r - 1.0
}

/// Hashing bound of a Pauli channel in qubits per channel use: n - H(eta).
pub fn hashing_bound(eta: &PauliChannelEta) -> f64 {
    let h: f64 = eta
        .eta()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    eta.n() as f64 - h
}

/// Applies a doubly stochastic mixing matrix that fixes the identity label,
/// spreading error mass without changing the error probability.
pub fn doubly_stochastic_mix(eta: &PauliChannelEta, q: &DMatrix<f64>) -> Result<PauliChannelEta> {
    let dim = 1usize << (2 * eta.n());
    if q.nrows() != dim || q.ncols() != dim {
        return Err(QemError::SizeMismatch(q.nrows(), dim));
    }
    for i in 0..dim {
        if q.row(i).iter().any(|&x| x < -1e-12) {
            return Err(QemError::InvalidParameter("negative entry in q".into()));
        }
        if (q.row(i).sum() - 1.0).abs() > 1e-10 || (q.column(i).sum() - 1.0).abs() > 1e-10 {
            return Err(QemError::InvalidParameter(
                "q is not doubly stochastic".into(),
            ));
        }
    }
    if (q[(0, 0)] - 1.0).abs() > 1e-12 {
        return Err(QemError::InvalidParameter(
            "q must fix the identity label".into(),
        ));
    }
    PauliChannelEta::new(eta.n(), q * eta.eta())
}

/// Upper bounds on the overhead reduction obtainable by letting errors
/// proliferate through one extra gate instead of mitigating them in place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProliferationRatios {
    pub generic: f64,
    pub depolarizing: f64,
}

pub fn proliferation_ratio_bounds(eps: f64) -> Result<ProliferationRatios> {
    if !(0.0..0.5).contains(&eps) {
        return Err(QemError::InvalidParameter(format!(
            "GGEP {eps} outside [0, 0.5)"
        )));
    }
    let g = (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps) / (1.0 - eps).powi(3);
    let d = (3.0 - 4.0 * eps) * (3.0 - 4.0 * eps)
        / (3.0 * (1.0 - eps) * (1.0 - eps) * (3.0 - eps));
    Ok(ProliferationRatios {
        generic: g,
        depolarizing: d,
    })
}
