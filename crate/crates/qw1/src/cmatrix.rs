//! Raw dense complex matrices and the JSON wire format.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::register::QuditRegister;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub(crate) const ZERO: C64 = Complex::new(0.0, 0.0);


pub(crate) fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Largest entry modulus; zero for empty matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Frobenius norm.
pub fn fro_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian part (A + A†)/2.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Deviation from Hermitian symmetry, max-entry norm of A − A†.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Identity scaled so its trace is 1.
pub fn maximally_mixed(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim).scale(1.0 / dim as f64)
}

/// Outer product ψψ† of a (not necessarily normalized) vector.
pub fn projector(psi: &nalgebra::DVector<C64>) -> CMatrix {
    psi * psi.adjoint()
}

/// Row-major matrix JSON: `{"rows": R, "cols": C, "data": [[re, im], ...]}`.
///
/// The optional register field disambiguates the tensor factorization when
/// the dimension alone cannot (e.g. 4 = 2^2 or 4^1); absent, a power-of-two
/// dimension is read as qubits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub register: Option<RegisterJson>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegisterJson {
    pub n: usize,
    pub d: usize,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
            register: None,
        }
    }

    pub fn with_register(mut self, reg: QuditRegister) -> Self {
        self.register = Some(RegisterJson {
            n: reg.num_qudits(),
            d: reg.local_dim(),
        });
        self
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.rows * self.cols != self.data.len() {
            return Err(Error::Parse {
                field: "data".into(),
                message: format!(
                    "expected {} entries for a {}x{} matrix, found {}",
                    self.rows * self.cols,
                    self.rows,
                    self.cols,
                    self.data.len()
                ),
            });
        }
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let [re, im] = self.data[r * self.cols + c];
                m[(r, c)] = Complex::new(re, im);
            }
        }
        Ok(m)
    }

    /// Resolves the register: explicit field first, otherwise the dimension
    /// is factored as 2^n.
    pub fn resolve_register(&self) -> Result<QuditRegister> {
        if let Some(r) = self.register {
            let reg = QuditRegister::new(r.n, r.d)?;
            if reg.dim() != self.rows {
                return Err(Error::Parse {
                    field: "register".into(),
                    message: format!(
                        "register dimension {} does not match matrix rows {}",
                        reg.dim(),
                        self.rows
                    ),
                });
            }
            return Ok(reg);
        }
        if self.rows < 2 || !self.rows.is_power_of_two() {
            return Err(Error::Parse {
                field: "register".into(),
                message: format!(
                    "dimension {} is not a power of two; supply an explicit register",
                    self.rows
                ),
            });
        }
        QuditRegister::new(self.rows.trailing_zeros() as usize, 2)
    }
}
