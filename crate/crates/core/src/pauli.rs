//! Pauli-group algebra and the Pauli transfer matrix (PTM) coordinate system.
//!
//! Conventions shared by the whole crate:
//! - Pauli strings are indexed in base 4 with qubit 0 most significant and
//!   I=0, X=1, Y=2, Z=3.
//! - `vec`/`unvec` are column-stacking.
//! - The PTM of a channel `C` is `[C]_{ij} = Tr{S_i C(S_j)} / 2^n`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QemError, Result};

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub fn from_u8(v: u8) -> Pauli {
        match v & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Result<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(QemError::InvalidDescriptor(format!(
                "unknown Pauli letter '{other}'"
            ))),
        }
    }

    /// 2x2 matrix under the computational basis.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            Pauli::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Pauli::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }
}

/// Single-qubit product S_a S_b = i^k S_c; returns (c, k).
fn mul_1q(a: Pauli, b: Pauli) -> (Pauli, u8) {
    use Pauli::*;
    match (a, b) {
        (I, p) => (p, 0),
        (p, I) => (p, 0),
        (X, X) | (Y, Y) | (Z, Z) => (I, 0),
        (X, Y) => (Z, 1),
        (Y, X) => (Z, 3),
        (Y, Z) => (X, 1),
        (Z, Y) => (X, 3),
        (Z, X) => (Y, 1),
        (X, Z) => (Y, 3),
    }
}

/// An n-qubit Pauli string, identified with its canonical base-4 index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    index: usize,
}

impl PauliString {
    pub fn new(n: usize, index: usize) -> Result<PauliString> {
        if n == 0 {
            return Err(QemError::InvalidParameter("n must be >= 1".into()));
        }
        if index >= 1 << (2 * n) {
            return Err(QemError::InvalidParameter(format!(
                "Pauli index {index} out of range for n={n}"
            )));
        }
        Ok(PauliString { n, index })
    }

    pub fn identity(n: usize) -> PauliString {
        PauliString { n, index: 0 }
    }

    pub fn from_letters(letters: &[Pauli]) -> Result<PauliString> {
        if letters.is_empty() {
            return Err(QemError::InvalidParameter("empty Pauli string".into()));
        }
        let mut index = 0usize;
        for &p in letters {
            index = index * 4 + p as usize;
        }
        Ok(PauliString {
            n: letters.len(),
            index,
        })
    }

    pub fn parse(s: &str) -> Result<PauliString> {
        let letters: Vec<Pauli> = s.chars().map(Pauli::from_letter).collect::<Result<_>>()?;
        PauliString::from_letters(&letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Letters with qubit 0 first (most significant base-4 digit).
    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n)
            .map(|q| Pauli::from_u8(((self.index >> (2 * (self.n - 1 - q))) & 3) as u8))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.index == 0
    }

    /// Dense 2^n x 2^n matrix (Kronecker product of single-qubit factors).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::identity(1, 1);
        for p in self.letters() {
            m = m.kronecker(&p.matrix());
        }
        m
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for p in self.letters() {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

/// A Pauli string with an i^k phase, closed under multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedPauli {
    pub pauli: PauliString,
    /// Phase exponent k in i^k, k in 0..4.
    pub phase_exp: u8,
}

impl PhasedPauli {
    pub fn phase(&self) -> Complex64 {
        match self.phase_exp & 3 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

/// Group product of two Pauli strings, with phase tracked.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<PhasedPauli> {
    if a.n != b.n {
        return Err(QemError::SizeMismatch(a.n, b.n));
    }
    let mut phase = 0u8;
    let mut letters = Vec::with_capacity(a.n);
    for (la, lb) in a.letters().into_iter().zip(b.letters()) {
        let (c, k) = mul_1q(la, lb);
        letters.push(c);
        phase = (phase + k) & 3;
    }
    Ok(PhasedPauli {
        pauli: PauliString::from_letters(&letters)?,
        phase_exp: phase,
    })
}

/// Phase-free product index, i.e. the random-walk step S_a S_b ~ S_l.
pub fn pauli_mul_index(n: usize, a: usize, b: usize) -> usize {
    // xor of base-4 digits in the symplectic (x,z) encoding:
    // I=00 X=01 Y=10 Z=11 under our numbering; letterwise product index
    // is the digitwise "xor" of the two letters in GF(2)^2.
    let mut out = 0usize;
    for q in 0..n {
        let sh = 2 * (n - 1 - q);
        let la = (a >> sh) & 3;
        let lb = (b >> sh) & 3;
        let lc = symplectic_mul(la, lb);
        out |= lc << sh;
    }
    out
}

fn symplectic_mul(a: usize, b: usize) -> usize {
    // Map I,X,Y,Z = 0,1,2,3 to bit pairs where the product letter is an xor.
    // X=01, Y=11, Z=10 in (x,z) bits.
    const TO_XZ: [usize; 4] = [0b00, 0b01, 0b11, 0b10];
    const FROM_XZ: [usize; 4] = [0, 1, 3, 2];
    FROM_XZ[TO_XZ[a] ^ TO_XZ[b]]
}

/// Diagonal of the PTM of conjugation by the Pauli `p`: entry j is +1 when
/// S_p and S_j commute and -1 otherwise.
pub fn pauli_ptm_diagonal(p: &PauliString) -> DVector<f64> {
    let dim = 1 << (2 * p.n);
    let letters = p.letters();
    DVector::from_fn(dim, |j, _| {
        let mut sign = 1.0;
        for (q, &lp) in letters.iter().enumerate() {
            let lj = Pauli::from_u8(((j >> (2 * (p.n - 1 - q))) & 3) as u8);
            if lp != Pauli::I && lj != Pauli::I && lp != lj {
                sign = -sign;
            }
        }
        sign
    })
}

/// The 4^n x 4^n transform whose columns are the vectorized PTM diagonals of
/// the Pauli operators; satisfies H_n * H_n = 4^n * I.
pub fn hadamard_matrix(n: usize) -> DMatrix<f64> {
    let h1 = DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, 1.0, 1.0, 1.0, //
            1.0, 1.0, -1.0, -1.0, //
            1.0, -1.0, 1.0, -1.0, //
            1.0, -1.0, -1.0, 1.0,
        ],
    );
    let mut h = DMatrix::identity(1, 1);
    for _ in 0..n {
        h = h.kronecker(&h1);
    }
    h
}

/// Column-stacking vectorization.
pub fn vec_matrix(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_matrix`] for a square matrix of side `dim`.
pub fn unvec_matrix(v: &DVector<f64>, dim: usize) -> Result<DMatrix<f64>> {
    if v.len() != dim * dim {
        return Err(QemError::InvalidParameter(format!(
            "vector of length {} is not a vectorized {dim}x{dim} matrix",
            v.len()
        )));
    }
    Ok(DMatrix::from_column_slice(dim, dim, v.as_slice()))
}

/// PTM of a channel given by its operation elements (Kraus matrices).
pub fn ptm_of_kraus(kraus: &[DMatrix<Complex64>]) -> Result<DMatrix<f64>> {
    let dim = match kraus.first() {
        Some(k) => k.nrows(),
        None => return Err(QemError::InvalidParameter("empty Kraus set".into())),
    };
    if !dim.is_power_of_two() || dim < 2 {
        return Err(QemError::NotPowerOfTwo(dim));
    }
    for k in kraus {
        if k.nrows() != dim || k.ncols() != dim {
            return Err(QemError::SizeMismatch(k.nrows(), dim));
        }
    }
    let n = dim.trailing_zeros() as usize;
    let np = 1usize << (2 * n);
    let norm = 1.0 / dim as f64;

    let paulis: Vec<DMatrix<Complex64>> = (0..np)
        .map(|i| PauliString::new(n, i).unwrap().matrix())
        .collect();

    let mut out = DMatrix::zeros(np, np);
    let mut max_imag: f64 = 0.0;
    for j in 0..np {
        // sum_k K S_j K^dagger
        let mut acted = DMatrix::zeros(dim, dim);
        for k in kraus {
            acted += k * &paulis[j] * k.adjoint();
        }
        for i in 0..np {
            let tr: Complex64 = (&paulis[i] * &acted).trace();
            max_imag = max_imag.max(tr.im.abs());
            out[(i, j)] = tr.re * norm;
        }
    }
    if max_imag > 1e-12 {
        return Err(QemError::NonRealPtm(max_imag));
    }
    Ok(out)
}

/// PTM coordinates of a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityVector {
    pub n: usize,
    pub x: DVector<f64>,
}

/// Projects a density matrix onto PTM coordinates: x_i = Tr{S_i rho} / sqrt(2^n).
pub fn state_to_vector(rho: &DMatrix<Complex64>) -> Result<DensityVector> {
    let dim = rho.nrows();
    if !dim.is_power_of_two() || dim < 2 || rho.ncols() != dim {
        return Err(QemError::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
        return Err(QemError::InvalidParameter(format!(
            "density matrix trace {trace} is not 1"
        )));
    }
    let np = 1usize << (2 * n);
    let norm = 1.0 / (dim as f64).sqrt();
    let x = DVector::from_fn(np, |i, _| {
        let s = PauliString::new(n, i).unwrap().matrix();
        (&s * rho).trace().re * norm
    });
    Ok(DensityVector { n, x })
}

/// All-zero computational state |0...0><0...0| in PTM coordinates.
pub fn all_zero_vector(n: usize) -> DensityVector {
    let np = 1usize << (2 * n);
    let norm = 1.0 / ((1usize << n) as f64).sqrt();
    // Tr{S_i |0..0><0..0|} is 1 for strings over {I, Z}, 0 otherwise.
    let x = DVector::from_fn(np, |i, _| {
        let mut v = norm;
        for q in 0..n {
            let l = (i >> (2 * (n - 1 - q))) & 3;
            if l == 1 || l == 2 {
                v = 0.0;
            }
        }
        v
    });
    DensityVector { n, x }
}
