//! Overhead trade-offs of mitigation combined with error-correcting or
//! error-detecting codes: concatenation critical points, scheme selection,
//! and post-selection overhead for detection codes.

use crate::bounds::depolarizing_sof;
use crate::error::{QemError, Result};

/// Concatenated-code error model: each stage maps the gate error probability
/// through f(eps) = eps^2 / threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcatModel {
    /// Physical qubits per logical qubit at each stage.
    pub n_code: usize,
    /// Fault-tolerance threshold; the fixed point of f.
    pub threshold: f64,
}

impl ConcatModel {
    pub fn steane() -> ConcatModel {
        ConcatModel {
            n_code: 7,
            threshold: 1.5e-3,
        }
    }

    fn f(&self, eps: f64) -> f64 {
        eps * eps / self.threshold
    }
}

/// Error probability after `l` stages of concatenation.
pub fn concat_ggep(model: &ConcatModel, eps: f64, l: usize) -> f64 {
    let mut e = eps;
    for _ in 0..l {
        e = model.f(e);
    }
    e
}

/// Circuit size at which adding stage l+1 starts paying off, exactly and in
/// its first-order (Maclaurin) form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub exact: f64,
    pub maclaurin: f64,
}

pub fn critical_point(model: &ConcatModel, eps: f64, l: usize) -> Result<CriticalPoint> {
    let el = concat_ggep(model, eps, l);
    let el1 = concat_ggep(model, eps, l + 1);
    if el1 >= el {
        return Err(QemError::InvalidParameter(format!(
            "stage {} does not suppress errors ({el} -> {el1})",
            l + 1
        )));
    }
    let log_n = (model.n_code as f64).ln();
    let exact = log_n / ((1.0 + 4.0 * el).ln() - (1.0 + 4.0 * el1).ln());
    let maclaurin = log_n / (4.0 * (el - el1));
    Ok(CriticalPoint { exact, maclaurin })
}

/// Concatenation depth minimizing the total overhead for a circuit of
/// `n_gates` mitigated gates, with the per-depth log-overheads it compared.
#[derive(Debug, Clone, PartialEq)]
pub struct BestScheme {
    pub stage: usize,
    /// log(n_code^l (1 + 4 f^(l)(eps))^N) per candidate depth l.
    pub log_overheads: Vec<f64>,
}

pub fn best_scheme(model: &ConcatModel, eps: f64, n_gates: f64, max_stages: usize) -> BestScheme {
    let log_n = (model.n_code as f64).ln();
    let mut log_overheads = Vec::with_capacity(max_stages + 1);
    for l in 0..=max_stages {
        let el = concat_ggep(model, eps, l);
        log_overheads.push(l as f64 * log_n + n_gates * (1.0 + 4.0 * el).ln());
    }
    let stage = log_overheads
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(l, _)| l)
        .unwrap_or(0);
    BestScheme {
        stage,
        log_overheads,
    }
}

/// Post-selection overhead of an error-detecting code that discards a run
/// with probability `p_detect`.
pub fn qedc_sof(p_detect: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p_detect) {
        return Err(QemError::InvalidProbability(format!(
            "detection probability {p_detect} outside [0, 1)"
        )));
    }
    Ok(p_detect / (1.0 - p_detect))
}

/// Combined overhead of detection plus mitigation of the residual channel.
pub fn qedc_total_sof(gamma_qedc: f64, gamma_qem: f64) -> f64 {
    (1.0 + gamma_qedc) * (1.0 + gamma_qem) - 1.0
}

/// Physical-gate budget of one logical gate on the detection code.
#[derive(Debug, Clone, PartialEq)]
pub struct QedcGateSpec {
    pub name: String,
    pub one_qubit_gates: usize,
    pub two_qubit_gates: usize,
    pub transversal: bool,
}

impl QedcGateSpec {
    /// Logical CNOT pair, transversal: four physical two-qubit gates.
    pub fn transversal_cnot() -> QedcGateSpec {
        QedcGateSpec {
            name: "cnot".into(),
            one_qubit_gates: 0,
            two_qubit_gates: 4,
            transversal: true,
        }
    }

    /// Logical CZ, built from six physical single-qubit gates.
    pub fn cz() -> QedcGateSpec {
        QedcGateSpec {
            name: "cz".into(),
            one_qubit_gates: 6,
            two_qubit_gates: 0,
            transversal: false,
        }
    }

    /// Logical SWAP composed with Hadamards on both logical qubits, done
    /// with four physical Hadamards.
    pub fn swap_hadamards() -> QedcGateSpec {
        QedcGateSpec {
            name: "swap_h2".into(),
            one_qubit_gates: 4,
            two_qubit_gates: 0,
            transversal: true,
        }
    }
}

/// Model knobs for the residual error after post-selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QedcConfig {
    /// Coefficient of the O(p^2) undetected-error mass.
    pub residual_coeff: f64,
    /// Additive detection probability from imperfect stabilizer readout.
    pub stabilizer_error: f64,
}

impl Default for QedcConfig {
    fn default() -> QedcConfig {
        QedcConfig {
            residual_coeff: 0.5,
            stabilizer_error: 0.0,
        }
    }
}

/// Overhead breakdown of one logical gate on the detection code versus
/// mitigating the bare gate directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QedcAnalysis {
    pub p_detect: f64,
    pub gamma_qedc: f64,
    pub gamma_qem_post: f64,
    pub gamma_total: f64,
    pub gamma_pure_qem: f64,
}

/// First-order detection probability from the gate budget, residual channel
/// modeled as two-qubit depolarizing noise of the undetected O(p^2) mass.
pub fn qedc_gate_analysis(
    spec: &QedcGateSpec,
    eps1: f64,
    eps2: f64,
    cfg: &QedcConfig,
) -> Result<QedcAnalysis> {
    if eps1 < 0.0 || eps2 < 0.0 || cfg.residual_coeff < 0.0 || cfg.stabilizer_error < 0.0 {
        return Err(QemError::InvalidParameter(
            "negative error probability".into(),
        ));
    }
    let p = spec.one_qubit_gates as f64 * eps1
        + spec.two_qubit_gates as f64 * eps2
        + cfg.stabilizer_error;
    let gamma_qedc = qedc_sof(p)?;
    let residual = cfg.residual_coeff * p * p;
    let gamma_qem_post = depolarizing_sof(2, residual);
    let gamma_total = qedc_total_sof(gamma_qedc, gamma_qem_post);
    let gamma_pure_qem = depolarizing_sof(2, eps2);
    Ok(QedcAnalysis {
        p_detect: p,
        gamma_qedc,
        gamma_qem_post,
        gamma_total,
        gamma_pure_qem,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn concat_model_fixed_point() {
        let m = ConcatModel::steane();
        assert_abs_diff_eq!(concat_ggep(&m, 1e-4, 0), 1e-4, epsilon = 1e-18);
        assert_abs_diff_eq!(concat_ggep(&m, m.threshold, 1), m.threshold, epsilon = 1e-18);
        assert_abs_diff_eq!(concat_ggep(&m, 1e-4, 1), 1e-8 / 1.5e-3, epsilon = 1e-12);
        assert_abs_diff_eq!(concat_ggep(&m, 1e-4, 1), 6.666666666666667e-6, epsilon = 1e-15);
        // below threshold errors shrink, above they grow
        assert!(concat_ggep(&m, 1e-3, 1) < 1e-3);
        assert!(concat_ggep(&m, 3e-3, 1) > 3e-3);
    }

    #[test]
    fn critical_point_values() {
        let m = ConcatModel::steane();
        let cp = critical_point(&m, 1e-4, 0).unwrap();
        // the first stage pays off only beyond thousands of gates
        assert!(cp.exact > 3e3 && cp.exact < 9e3, "{}", cp.exact);
        assert!((cp.exact - 5214.0).abs() / 5214.0 < 0.01, "{}", cp.exact);
        assert!((cp.maclaurin - cp.exact).abs() / cp.exact < 0.005);

        // no payoff above threshold
        assert!(critical_point(&m, 3e-3, 0).is_err());
    }

    #[test]
    fn critical_point_grows_as_errors_shrink() {
        let m = ConcatModel::steane();
        let mut prev = 0.0;
        for &eps in &[1e-4, 3e-5, 1e-5, 3e-6, 1e-6] {
            let cp = critical_point(&m, eps, 0).unwrap();
            assert!(cp.exact > prev, "eps={eps}");
            prev = cp.exact;
        }
    }

    #[test]
    fn best_scheme_selection() {
        let m = ConcatModel::steane();
        assert_eq!(best_scheme(&m, 1e-6, 1.0, 4).stage, 0);

        // beyond the first critical point one stage wins
        let n0 = critical_point(&m, 1e-4, 0).unwrap().exact;
        let pick = best_scheme(&m, 1e-4, 1e4, 4);
        assert!(1e4 > n0);
        assert_eq!(pick.stage, 1);
        assert_eq!(pick.log_overheads.len(), 5);

        // above threshold concatenation never helps
        for &n in &[1.0, 1e3, 1e6, 1e9] {
            assert_eq!(best_scheme(&m, 3e-3, n, 4).stage, 0);
        }

        // selection boundary tracks the critical point within a grid step
        let mut last = 0usize;
        let mut boundary = None;
        for k in 0..400 {
            let n = 10f64.powf(2.0 + k as f64 * 0.005);
            let s = best_scheme(&m, 1e-4, n, 1).stage;
            if s != last {
                boundary = Some(n);
                last = s;
            }
        }
        let b = boundary.expect("scheme boundary crossed");
        assert!((b.log10() - n0.log10()).abs() < 0.01, "{b} vs {n0}");
    }

    #[test]
    fn qedc_basics() {
        assert_abs_diff_eq!(qedc_sof(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(qedc_sof(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(qedc_sof(0.04).unwrap(), 0.041666666666666664, epsilon = 1e-15);
        assert!(qedc_sof(1.0).is_err());

        assert_abs_diff_eq!(qedc_total_sof(0.0, 0.3), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(qedc_total_sof(0.1, 0.2), 0.32, epsilon = 1e-15);
        let (gd, gm) = (0.07, 0.21);
        assert_abs_diff_eq!(
            qedc_total_sof(gd, gm),
            gd + gm + gd * gm,
            epsilon = 1e-15
        );
        assert!(qedc_total_sof(gd, gm) >= gd.max(gm));
    }

    #[test]
    fn gate_analysis_orderings() {
        let cfg = QedcConfig::default();

        // transversal CNOT: detection overhead exceeds plain mitigation
        let eps2 = 0.01;
        let a = qedc_gate_analysis(&QedcGateSpec::transversal_cnot(), eps2 / 10.0, eps2, &cfg)
            .unwrap();
        assert_abs_diff_eq!(a.p_detect, 0.04, epsilon = 1e-15);
        assert!(a.gamma_total > a.gamma_pure_qem, "{a:?}");

        // logical Hadamard pair: only cheap single-qubit gates, detection wins
        let b = qedc_gate_analysis(&QedcGateSpec::swap_hadamards(), eps2 / 10.0, eps2, &cfg)
            .unwrap();
        assert_abs_diff_eq!(b.p_detect, 0.004, epsilon = 1e-15);
        assert!(b.gamma_total < b.gamma_pure_qem, "{b:?}");

        // noiseless limit
        let z = qedc_gate_analysis(&QedcGateSpec::cz(), 0.0, 0.0, &cfg).unwrap();
        assert_eq!(
            (z.gamma_qedc, z.gamma_qem_post, z.gamma_total, z.gamma_pure_qem),
            (0.0, 0.0, 0.0, 0.0)
        );

        // stabilizer imperfection only adds detection mass
        let noisy_cfg = QedcConfig {
            residual_coeff: 0.5,
            stabilizer_error: 0.01,
        };
        let c = qedc_gate_analysis(&QedcGateSpec::swap_hadamards(), 0.001, 0.01, &noisy_cfg)
            .unwrap();
        assert!(c.gamma_total > b.gamma_total);
    }
}
