//! Seeded samplers for random channels used in scatter studies and tests.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{
    amplitude_damping, bit_flip, compose, depolarizing, phase_flip, PTMChannel, PauliChannelEta,
};

/// Random Pauli channel with the exact GGEP `eps`: the error mass is spread
/// uniformly (flat Dirichlet) over the 4^n - 1 non-identity outcomes.
pub fn random_pauli_eta<R: Rng>(n: usize, eps: f64, rng: &mut R) -> PauliChannelEta {
    let dim = 1usize << (2 * n);
    let mut eta = DVector::zeros(dim);
    let mut weights = vec![0.0; dim - 1];
    let mut total = 0.0;
    for w in weights.iter_mut() {
        // -ln(U) gives Exp(1); normalizing yields a flat Dirichlet draw
        *w = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln();
        total += *w;
    }
    eta[0] = 1.0 - eps;
    for (i, w) in weights.iter().enumerate() {
        eta[i + 1] = eps * w / total;
    }
    PauliChannelEta::new(n, eta).expect("constructed probability vector")
}

/// Random CPTP channel from Gaussian operation elements, renormalized so they
/// close to the identity.
pub fn random_cptp_channel<R: Rng>(n: usize, rng: &mut R) -> PTMChannel {
    let dim = 1usize << n;
    let num_kraus = dim * dim;
    let gs: Vec<DMatrix<Complex64>> = (0..num_kraus)
        .map(|_| {
            DMatrix::from_fn(dim, dim, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
        })
        .collect();
    let mut s = DMatrix::<Complex64>::zeros(dim, dim);
    for g in &gs {
        s += g.adjoint() * g;
    }
    let eig = s.symmetric_eigen();
    let mut inv_sqrt = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, lam) in eig.eigenvalues.iter().enumerate() {
        let col = eig.eigenvectors.column(i);
        inv_sqrt += col * col.adjoint() * Complex64::new(1.0 / lam.sqrt(), 0.0);
    }
    let kraus: Vec<DMatrix<Complex64>> = gs.into_iter().map(|g| g * &inv_sqrt).collect();
    PTMChannel::from_kraus(kraus).expect("Gaussian Kraus set is well formed")
}

/// Random single-qubit channel with a lower-triangular PTM, built by mixing
/// and chaining the triangular zoo members.
pub fn random_triangular_channel<R: Rng>(rng: &mut R) -> PTMChannel {
    let pick = |rng: &mut R| -> PTMChannel {
        let p = rng.gen_range(0.0..0.3);
        match rng.gen_range(0..4u8) {
            0 => depolarizing(1, p * 0.75 / 0.3).unwrap(),
            1 => bit_flip(p).unwrap(),
            2 => phase_flip(p).unwrap(),
            _ => amplitude_damping(p).unwrap(),
        }
    };
    let mut c = pick(rng);
    for _ in 0..rng.gen_range(1..4usize) {
        c = compose(&pick(rng), &c).unwrap();
    }
    c
}

/// Random doubly stochastic matrix over Pauli labels that fixes the identity
/// label: a convex combination of permutations of the non-identity block.
pub fn random_doubly_stochastic<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let dim = 1usize << (2 * n);
    let k = dim - 1;
    let mut q = DMatrix::zeros(dim, dim);
    q[(0, 0)] = 1.0;
    let num_perms = 2 * k;
    let mut weights = vec![0.0; num_perms];
    let mut total = 0.0;
    for w in weights.iter_mut() {
        *w = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln();
        total += *w;
    }
    let mut perm: Vec<usize> = (1..dim).collect();
    for w in weights {
        // Fisher-Yates shuffle of the non-identity labels
        for i in (1..k).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let wt = w / total;
        for (src, &dst) in perm.iter().enumerate() {
            q[(dst, src + 1)] += wt;
        }
    }
    q
}
