//! Named unitary gates as PTM channels.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::PTMChannel;
use crate::error::{QemError, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn hadamard() -> PTMChannel {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
    PTMChannel::from_unitary(u).expect("unitary")
}

pub fn phase() -> PTMChannel {
    let u = DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
    );
    PTMChannel::from_unitary(u).expect("unitary")
}

/// Controlled NOT with qubit 0 (most significant) as control.
pub fn cnot() -> PTMChannel {
    let mut u = DMatrix::from_element(4, 4, c(0.0, 0.0));
    u[(0, 0)] = c(1.0, 0.0);
    u[(1, 1)] = c(1.0, 0.0);
    u[(2, 3)] = c(1.0, 0.0);
    u[(3, 2)] = c(1.0, 0.0);
    PTMChannel::from_unitary(u).expect("unitary")
}

/// Gate lookup for circuit descriptors; single-qubit names plus "cnot".
pub fn by_name(name: &str) -> Result<PTMChannel> {
    use crate::pauli::{Pauli, PauliString};
    match name {
        "h" => Ok(hadamard()),
        "s" => Ok(phase()),
        "x" => Ok(PTMChannel::of_pauli(&PauliString::from_letters(&[Pauli::X]).unwrap())),
        "y" => Ok(PTMChannel::of_pauli(&PauliString::from_letters(&[Pauli::Y]).unwrap())),
        "z" => Ok(PTMChannel::of_pauli(&PauliString::from_letters(&[Pauli::Z]).unwrap())),
        "i" => Ok(PTMChannel::identity(1)),
        "cnot" => Ok(cnot()),
        other => Err(QemError::InvalidDescriptor(format!(
            "unknown gate name {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hadamard_swaps_x_and_z() {
        let m = hadamard();
        let m = m.matrix();
        assert_abs_diff_eq!(m[(1, 3)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(3, 1)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(2, 2)], -1.0, epsilon = 1e-12);
        // involution
        assert!((m * m - DMatrix::<f64>::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn phase_rotates_x_to_y() {
        let m = phase();
        let m = m.matrix();
        assert_abs_diff_eq!(m[(2, 1)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 2)], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(3, 3)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cnot_maps_basis_states() {
        use crate::pauli::{all_zero_vector, state_to_vector};
        use nalgebra::DVector;
        // |10> -> |11>
        let mut psi = DVector::from_element(4, Complex64::new(0.0, 0.0));
        psi[2] = Complex64::new(1.0, 0.0);
        let rho = &psi * psi.adjoint();
        let x_in = state_to_vector(&rho).unwrap();
        let x_out = cnot().matrix() * x_in.x;

        let mut psi = DVector::from_element(4, Complex64::new(0.0, 0.0));
        psi[3] = Complex64::new(1.0, 0.0);
        let rho = &psi * psi.adjoint();
        let expect = state_to_vector(&rho).unwrap();
        assert!((x_out - expect.x).norm() < 1e-12);

        // fixes |00>
        let zero = all_zero_vector(2);
        assert!((cnot().matrix() * &zero.x - &zero.x).norm() < 1e-12);
    }

    #[test]
    fn lookup() {
        assert!(by_name("h").is_ok());
        assert!(by_name("cnot").is_ok());
        assert_eq!(by_name("x").unwrap().n(), 1);
        assert!(by_name("toffoli").is_err());
    }
}
