//! Channel precoders: Pauli and Clifford twirls, the gate-referred variant
//! for noisy Clifford gates, and a noise model for imperfect twirl gates.

use nalgebra::DMatrix;

use crate::channel::{compose, depolarizing, ggep, tensor, PTMChannel, PauliChannelEta};
use crate::error::{QemError, Result};
use crate::pauli::{hadamard_matrix, pauli_ptm_diagonal, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwirlKind {
    Pauli,
    Clifford,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwirlConfig {
    pub kind: TwirlKind,
    /// GGEP of each twirl-gate layer; zero means ideal gates.
    pub gate_noise_ggep: f64,
}

impl TwirlConfig {
    pub fn ideal(kind: TwirlKind) -> TwirlConfig {
        TwirlConfig {
            kind,
            gate_noise_ggep: 0.0,
        }
    }
}

/// Averages the channel over Pauli conjugations, which keeps exactly the
/// diagonal of the PTM. The result must be a valid Pauli channel.
pub fn pauli_twirl(c: &PTMChannel) -> Result<PTMChannel> {
    let n = c.n();
    let dim = c.dim();
    let d = c.matrix().diagonal();
    let mut eta = hadamard_matrix(n) * &d / dim as f64;
    for e in eta.iter_mut() {
        if *e < -1e-12 {
            return Err(QemError::InvalidProbability(format!(
                "twirled channel has error probability {e:.3e}; input was not CPTP"
            )));
        }
        if *e < 0.0 {
            *e = 0.0;
        }
    }
    Ok(PauliChannelEta::new(n, eta)?.to_channel())
}

/// Explicit 4^n-term Pauli average, used as a validation path for
/// [`pauli_twirl`].
pub fn pauli_twirl_montecarlo(c: &PTMChannel) -> Result<PTMChannel> {
    let n = c.n();
    if n > 2 {
        return Err(QemError::UnsupportedQubitCount(n));
    }
    let dim = c.dim();
    let mut acc = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let p = PauliString::new(n, i)?;
        let d = DMatrix::from_diagonal(&pauli_ptm_diagonal(&p));
        acc += &d * c.matrix() * &d;
    }
    PTMChannel::from_ptm(n, acc / dim as f64)
}

/// Clifford twirling turns any channel into the depolarizing channel with
/// the same error probability.
pub fn clifford_twirl(c: &PTMChannel) -> Result<PTMChannel> {
    depolarizing(c.n(), ggep(c))
}

/// All 24 single-qubit Clifford PTMs, generated as the closure of the
/// Hadamard and phase-gate rotations.
pub fn single_qubit_clifford_ptms() -> Vec<DMatrix<f64>> {
    // H: X<->Z, Y -> -Y; S: X -> Y, Y -> -X, Z -> Z
    let h = DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, -1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0,
        ],
    );
    let s = DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, -1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    );
    let key = |m: &DMatrix<f64>| -> Vec<i8> { m.iter().map(|&x| x.round() as i8).collect() };
    let mut seen = std::collections::HashSet::new();
    let mut out = vec![DMatrix::<f64>::identity(4, 4)];
    seen.insert(key(&out[0]));
    let mut frontier = out.clone();
    while let Some(m) = frontier.pop() {
        for g in [&h, &s] {
            let next = g * &m;
            if seen.insert(key(&next)) {
                out.push(next.clone());
                frontier.push(next);
            }
        }
    }
    out
}

/// 24-element average used to validate the analytic Clifford twirl for one
/// qubit.
pub fn clifford_twirl_enumerated(c: &PTMChannel) -> Result<PTMChannel> {
    if c.n() != 1 {
        return Err(QemError::UnsupportedQubitCount(c.n()));
    }
    let cliffords = single_qubit_clifford_ptms();
    let mut acc = DMatrix::zeros(4, 4);
    for u in &cliffords {
        acc += u.transpose() * c.matrix() * u;
    }
    PTMChannel::from_ptm(1, acc / cliffords.len() as f64)
}

/// Twirls the noise of a noisy Clifford gate without undoing the gate:
/// for noisy = C o G this returns pauli_twirl(C) o G.
pub fn gate_referred_twirl(gate: &PTMChannel, noisy_gate: &PTMChannel) -> Result<PTMChannel> {
    if gate.n() != noisy_gate.n() {
        return Err(QemError::SizeMismatch(gate.n(), noisy_gate.n()));
    }
    let dim = gate.dim();
    let gate_inv = gate
        .matrix()
        .clone()
        .lu()
        .solve(&DMatrix::identity(dim, dim))
        .ok_or(QemError::SingularChannel)?;
    let noise = PTMChannel::from_ptm(gate.n(), noisy_gate.matrix() * gate_inv)?;
    let twirled = pauli_twirl(&noise)?;
    PTMChannel::from_ptm(gate.n(), twirled.matrix() * gate.matrix())
}

/// Ideal twirl sandwiched between two noisy per-qubit gate layers, each a
/// depolarizing channel of error probability `gate_noise_ggep`.
pub fn imperfect_twirl(c: &PTMChannel, cfg: &TwirlConfig) -> Result<PTMChannel> {
    if cfg.gate_noise_ggep < 0.0 {
        return Err(QemError::InvalidParameter(format!(
            "negative twirl-gate noise {}",
            cfg.gate_noise_ggep
        )));
    }
    let twirled = match cfg.kind {
        TwirlKind::Pauli => pauli_twirl(c)?,
        TwirlKind::Clifford => clifford_twirl(c)?,
    };
    if cfg.gate_noise_ggep == 0.0 {
        return Ok(twirled);
    }
    let per_qubit = depolarizing(1, cfg.gate_noise_ggep)?;
    let layer = tensor(&vec![per_qubit; c.n()])?;
    compose(&layer, &compose(&twirled, &layer)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, bit_flip, is_cptp, over_rotation};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn pauli_twirl_fixes_pauli_channels() {
        let d = depolarizing(1, 0.1).unwrap();
        let t = pauli_twirl(&d).unwrap();
        assert!((t.matrix() - d.matrix()).norm() < 1e-14);
        let t2 = pauli_twirl(&t).unwrap();
        assert!((t2.matrix() - t.matrix()).norm() < 1e-14);
    }

    #[test]
    fn twirled_rotation_is_a_bit_flip() {
        let phi = 0.2;
        let c = over_rotation(phi).unwrap();
        let t = pauli_twirl(&c).unwrap();
        let theta2 = 2.0 * (4.0 * phi / std::f64::consts::PI);
        let p = (1.0 - theta2.cos()) / 2.0;
        let oracle = bit_flip(p).unwrap();
        assert!((t.matrix() - oracle.matrix()).norm() < 1e-12);
    }

    #[test]
    fn twirled_amplitude_damping_probabilities() {
        let delta = 0.3;
        let c = amplitude_damping(delta).unwrap();
        let t = pauli_twirl(&c).unwrap();
        let eta = t.to_eta().unwrap();
        let root = (1.0f64 - delta).sqrt();
        let expect = DVector::from_row_slice(&[
            (1.0 + root) * (1.0 + root) / 4.0,
            delta / 4.0,
            delta / 4.0,
            (1.0 - root) * (1.0 - root) / 4.0,
        ]);
        assert!((eta.eta() - expect).norm() < 1e-12);
        assert_abs_diff_eq!(ggep(&t), ggep(&c), epsilon = 1e-14);
    }

    #[test]
    fn explicit_average_matches_diagonal_path() {
        let mut rng = StdRng::seed_from_u64(31);
        assert!(
            (pauli_twirl_montecarlo(&PTMChannel::identity(2)).unwrap().matrix()
                - DMatrix::<f64>::identity(16, 16))
            .norm()
                < 1e-14
        );
        for n in 1..=2usize {
            for _ in 0..5 {
                let c = crate::random::random_cptp_channel(n, &mut rng);
                let a = pauli_twirl(&c).unwrap();
                let b = pauli_twirl_montecarlo(&c).unwrap();
                assert!((a.matrix() - b.matrix()).amax() < 1e-12);
                assert!(b.is_diagonal(1e-13));
            }
        }
        let c = amplitude_damping(0.3).unwrap();
        assert!(
            (pauli_twirl(&c).unwrap().matrix() - pauli_twirl_montecarlo(&c).unwrap().matrix())
                .amax()
                < 1e-13
        );
    }

    #[test]
    fn clifford_twirl_gives_depolarizing() {
        let d = depolarizing(1, 0.07).unwrap();
        let t = clifford_twirl(&d).unwrap();
        assert!((t.matrix() - d.matrix()).norm() < 1e-13);

        let c = amplitude_damping(0.1).unwrap();
        let t = clifford_twirl(&c).unwrap();
        let eps = 1.0 - (2.0 + 2.0 * 0.9f64.sqrt() - 0.1) / 4.0;
        assert_abs_diff_eq!(eps, 0.0506584, epsilon = 1e-7);
        assert!((t.matrix() - depolarizing(1, eps).unwrap().matrix()).norm() < 1e-12);
    }

    #[test]
    fn clifford_group_closure_has_24_rotations() {
        let cliffords = single_qubit_clifford_ptms();
        assert_eq!(cliffords.len(), 24);
        for u in &cliffords {
            assert!((u * u.transpose() - DMatrix::<f64>::identity(4, 4)).norm() < 1e-12);
            assert_abs_diff_eq!(u[(0, 0)], 1.0, epsilon = 1e-14);
            assert!((u.view((1, 1), (3, 3)).determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn enumerated_clifford_average_matches_analytic() {
        let mut rng = StdRng::seed_from_u64(77);
        for _ in 0..10 {
            let c = crate::random::random_cptp_channel(1, &mut rng);
            let analytic = clifford_twirl(&c).unwrap();
            let enumerated = clifford_twirl_enumerated(&c).unwrap();
            assert!((analytic.matrix() - enumerated.matrix()).amax() < 1e-12);
        }
    }

    #[test]
    fn gate_referred_twirl_cases() {
        let c = amplitude_damping(0.2).unwrap();
        // identity gate reduces to the plain twirl
        let id = PTMChannel::identity(1);
        let noisy = compose(&c, &id).unwrap();
        let t = gate_referred_twirl(&id, &noisy).unwrap();
        assert!((t.matrix() - pauli_twirl(&c).unwrap().matrix()).norm() < 1e-12);

        // X gate: result is twirl(C) composed with X
        let x = PTMChannel::of_pauli(&PauliString::parse("X").unwrap());
        let noisy = compose(&c, &x).unwrap();
        let t = gate_referred_twirl(&x, &noisy).unwrap();
        let oracle = compose(&pauli_twirl(&c).unwrap(), &x).unwrap();
        assert!((t.matrix() - oracle.matrix()).norm() < 1e-12);
    }

    #[test]
    fn cliffords_normalize_the_pauli_group() {
        // conjugating a Pauli PTM by any Clifford PTM yields a signed Pauli PTM
        for u in single_qubit_clifford_ptms() {
            for idx in 0..4usize {
                let p = DMatrix::from_diagonal(&pauli_ptm_diagonal(
                    &PauliString::new(1, idx).unwrap(),
                ));
                let conj = u.transpose() * &p * &u;
                // still a +-1 diagonal matrix
                for i in 0..4 {
                    for j in 0..4 {
                        if i == j {
                            assert!((conj[(i, j)].abs() - 1.0).abs() < 1e-12);
                        } else {
                            assert!(conj[(i, j)].abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn imperfect_twirl_raises_error_probability() {
        let c = amplitude_damping(0.2).unwrap();
        let ideal = imperfect_twirl(&c, &TwirlConfig::ideal(TwirlKind::Pauli)).unwrap();
        assert!((ideal.matrix() - pauli_twirl(&c).unwrap().matrix()).norm() < 1e-13);

        let cfg = TwirlConfig {
            kind: TwirlKind::Pauli,
            gate_noise_ggep: 0.02,
        };
        let noisy = imperfect_twirl(&c, &cfg).unwrap();
        assert!(ggep(&noisy) > ggep(&c));
        assert!(is_cptp(&noisy).is_cptp());
        // composition of traces for diagonal factors
        let t = pauli_twirl(&c).unwrap();
        let layer = depolarizing(1, 0.02).unwrap();
        let oracle = compose(&layer, &compose(&t, &layer).unwrap()).unwrap();
        assert!((noisy.matrix() - oracle.matrix()).norm() < 1e-13);

        // two-qubit channel gets per-qubit single-qubit layers
        let c2 = depolarizing(2, 0.05).unwrap();
        let noisy2 = imperfect_twirl(&c2, &cfg).unwrap();
        assert_eq!(noisy2.n(), 2);
        assert!(ggep(&noisy2) > 0.05);

        assert!(imperfect_twirl(
            &c,
            &TwirlConfig {
                kind: TwirlKind::Pauli,
                gate_noise_ggep: -0.1
            }
        )
        .is_err());
    }

    #[test]
    fn ggep_invariance_of_ideal_twirls() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..20 {
            let c = crate::random::random_cptp_channel(1, &mut rng);
            assert_abs_diff_eq!(ggep(&pauli_twirl(&c).unwrap()), ggep(&c), epsilon = 1e-12);
            assert_abs_diff_eq!(ggep(&clifford_twirl(&c).unwrap()), ggep(&c), epsilon = 1e-12);
        }
    }

    #[test]
    fn twirls_are_idempotent() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..10 {
            let c = crate::random::random_cptp_channel(1, &mut rng);
            let p = pauli_twirl(&c).unwrap();
            assert!((pauli_twirl(&p).unwrap().matrix() - p.matrix()).amax() < 1e-12);
            let cl = clifford_twirl(&c).unwrap();
            assert!((clifford_twirl(&cl).unwrap().matrix() - cl.matrix()).amax() < 1e-12);
        }
    }

    #[test]
    fn twirling_never_raises_the_overhead_of_triangular_channels() {
        use crate::basis::BasisSet;
        use crate::qp::{quasi_probability, sof};
        let basis = BasisSet::standard(1).unwrap();
        let mut rng = StdRng::seed_from_u64(101);
        for _ in 0..100 {
            let c = crate::random::random_triangular_channel(&mut rng);
            let mu_c = quasi_probability(&c, &basis).unwrap();
            let tw = pauli_twirl(&c).unwrap();
            let mu_t = quasi_probability(&tw, &basis).unwrap();
            assert!(
                mu_t.one_norm <= mu_c.one_norm + 1e-10,
                "pauli twirl raised the norm: {} -> {}",
                mu_c.one_norm,
                mu_t.one_norm
            );
            let cl = clifford_twirl(&c).unwrap();
            let mu_cl = quasi_probability(&cl, &basis).unwrap();
            assert!(sof(&mu_cl).gamma <= sof(&mu_t).gamma + 1e-10);
        }
    }
}
