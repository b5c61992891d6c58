//! The sixteen implementable single-qubit operations used as a decomposition
//! basis, and their two-qubit tensor products.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QemError, Result};
use crate::pauli::{ptm_of_kraus, vec_matrix, Pauli};

/// One basis operation: a name plus its (single) operation element.
#[derive(Debug, Clone)]
pub struct BasisOp {
    pub name: String,
    pub kraus: Vec<DMatrix<Complex64>>,
    pub ptm: DMatrix<f64>,
}

/// Invertible set of 16^n implementable operations, stored as the matrix of
/// vectorized PTMs together with its factorization.
pub struct BasisSet {
    n: usize,
    ops: Vec<BasisOp>,
    b: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    condition_number: f64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_qubit_ops() -> Vec<(String, DMatrix<Complex64>)> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    let sx = Pauli::X.matrix();
    let sy = Pauli::Y.matrix();
    let sz = Pauli::Z.matrix();
    let inv_sqrt2 = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let half = c(0.5, 0.0);
    let i = c(0.0, 1.0);

    let rot = |s: &DMatrix<Complex64>| (&id + s * i) * inv_sqrt2;
    let rot2 = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| (a + b) * inv_sqrt2;
    let proj = |s: &DMatrix<Complex64>| (&id + s) * half;

    vec![
        ("i".into(), id.clone()),
        ("x".into(), sx.clone()),
        ("y".into(), sy.clone()),
        ("z".into(), sz.clone()),
        ("rx".into(), rot(&sx)),
        ("ry".into(), rot(&sy)),
        ("rz".into(), rot(&sz)),
        ("ryz".into(), rot2(&sy, &sz)),
        ("rxz".into(), rot2(&sx, &sz)),
        ("rxy".into(), rot2(&sx, &sy)),
        ("pix".into(), proj(&sx)),
        ("piy".into(), proj(&sy)),
        ("piz".into(), proj(&sz)),
        ("piyz".into(), (&sy + &sz * i) * half),
        ("pixz".into(), (&sx + &sz * i) * half),
        ("pixy".into(), (&sx + &sy * i) * half),
    ]
}

impl BasisSet {
    /// The canonical implementable basis: 16 operations for one qubit, their
    /// 256 pairwise tensor products (first factor major) for two.
    pub fn standard(n: usize) -> Result<BasisSet> {
        let singles = single_qubit_ops();
        let raw: Vec<(String, DMatrix<Complex64>)> = match n {
            1 => singles,
            2 => {
                // Pauli pairs lead in canonical label order so the first 16
                // columns stay the Pauli operators; the rest follow with the
                // first factor varying slowest.
                let mut out = Vec::with_capacity(256);
                for (na, ka) in &singles[..4] {
                    for (nb, kb) in &singles[..4] {
                        out.push((format!("{na}*{nb}"), ka.kronecker(kb)));
                    }
                }
                for (a, (na, ka)) in singles.iter().enumerate() {
                    for (b, (nb, kb)) in singles.iter().enumerate() {
                        if a < 4 && b < 4 {
                            continue;
                        }
                        out.push((format!("{na}*{nb}"), ka.kronecker(kb)));
                    }
                }
                out
            }
            _ => return Err(QemError::UnsupportedQubitCount(n)),
        };

        let dim = 1usize << (2 * n);
        let mut b = DMatrix::zeros(dim * dim, raw.len());
        let mut ops = Vec::with_capacity(raw.len());
        for (col, (name, k)) in raw.into_iter().enumerate() {
            let ptm = ptm_of_kraus(std::slice::from_ref(&k))?;
            b.set_column(col, &vec_matrix(&ptm));
            ops.push(BasisOp {
                name,
                kraus: vec![k],
                ptm,
            });
        }

        let svd = b.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin <= 0.0 {
            return Err(QemError::SingularChannel);
        }
        let condition_number = smax / smin;
        let lu = b.clone().lu();
        Ok(BasisSet {
            n,
            ops,
            b,
            lu,
            condition_number,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[BasisOp] {
        &self.ops
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    /// Solves B x = rhs against the stored factorization.
    pub(crate) fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        if self.condition_number > 1e12 {
            return Err(QemError::IllConditioned(self.condition_number));
        }
        self.lu.solve(rhs).ok_or(QemError::SingularChannel)
    }
}

/// Per-column trace non-increase check: largest eigenvalue of sum K'K.
#[derive(Debug, Clone)]
pub struct CptniReport {
    pub max_eigenvalues: Vec<f64>,
    pub all_pass: bool,
}

/// Verifies every basis column is completely positive and trace
/// non-increasing by bounding the eigenvalues of sum K'K by one.
pub fn validate_cptni(basis: &BasisSet) -> CptniReport {
    let hdim = 1usize << basis.n;
    let mut max_eigenvalues = Vec::with_capacity(basis.len());
    let mut all_pass = true;
    for op in basis.ops() {
        let mut s = DMatrix::<Complex64>::zeros(hdim, hdim);
        for k in &op.kraus {
            s += k.adjoint() * k;
        }
        let max = s
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        all_pass &= max <= 1.0 + 1e-12;
        max_eigenvalues.push(max);
    }
    CptniReport {
        max_eigenvalues,
        all_pass,
    }
}
