//! Operator types with role-specific construction invariants.

use nalgebra::DVector;

use crate::cmatrix::{fro_norm, hermitian_part, hermiticity_defect, max_abs, trace, CMatrix, C64};
use crate::error::{Error, Result};
use crate::linalg;
use crate::register::QuditRegister;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;
pub const UNITARITY_TOL: f64 = 1e-9;

fn check_shape(reg: &QuditRegister, m: &CMatrix) -> Result<()> {
    if m.nrows() != reg.dim() || m.ncols() != reg.dim() {
        return Err(Error::dim(format!(
            "matrix is {}x{} but the register needs {0}x{0}",
            m.nrows(),
            m.ncols(),
        )));
    }
    Ok(())
}

/// A Hermitian operator on a qudit register.
///
/// Construction symmetrizes near-Hermitian inputs to (A + A†)/2 instead of
/// rejecting them; iterative solvers routinely produce 1e-14 asymmetries.
/// Inputs farther than 1e-6 from Hermitian are rejected as genuine mistakes.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    register: QuditRegister,
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(register: QuditRegister, matrix: CMatrix) -> Result<Self> {
        check_shape(&register, &matrix)?;
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-6 * max_abs(&matrix).max(1.0) {
            return Err(Error::arg(format!(
                "matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let matrix = if defect == 0.0 {
            matrix
        } else {
            hermitian_part(&matrix)
        };
        debug_assert!(hermiticity_defect(&matrix) <= HERMITICITY_TOL);
        Ok(HermitianOperator { register, matrix })
    }

    /// Zero operator on a register.
    pub fn zero(register: QuditRegister) -> Self {
        let dim = register.dim();
        HermitianOperator {
            register,
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn register(&self) -> QuditRegister {
        self.register
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    pub fn fro_norm(&self) -> f64 {
        fro_norm(&self.matrix)
    }

    /// Difference A − B on a shared register.
    pub fn sub(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        if self.register != other.register {
            return Err(Error::dim("operands live on different registers"));
        }
        Ok(HermitianOperator {
            register: self.register,
            matrix: &self.matrix - &other.matrix,
        })
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: QuditRegister,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(register: QuditRegister, matrix: CMatrix) -> Result<Self> {
        check_shape(&register, &matrix)?;
        let herm = HermitianOperator::new(register, matrix)?;
        let tr = herm.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::arg(format!("trace is {tr}, expected 1")));
        }
        let (eigs, _) = linalg::hermitian_eig_matrix(herm.matrix());
        if eigs[0] < -PSD_TOL {
            return Err(Error::arg(format!(
                "matrix has negative eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(DensityMatrix {
            register,
            matrix: herm.into_matrix(),
        })
    }

    /// Pure state ψψ† from a normalized state vector.
    pub fn pure(register: QuditRegister, psi: &DVector<C64>) -> Result<Self> {
        if psi.len() != register.dim() {
            return Err(Error::dim(format!(
                "state vector length {} does not match register dimension {}",
                psi.len(),
                register.dim()
            )));
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::arg(format!("state vector norm is {norm}, expected 1")));
        }
        Ok(DensityMatrix {
            register,
            matrix: crate::cmatrix::projector(psi),
        })
    }

    pub fn register(&self) -> QuditRegister {
        self.register
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        trace(&(&self.matrix * &self.matrix)).re
    }

    pub fn as_hermitian(&self) -> HermitianOperator {
        HermitianOperator {
            register: self.register,
            matrix: self.matrix.clone(),
        }
    }

    /// ρ − σ as a traceless Hermitian operator.
    pub fn diff(&self, other: &DensityMatrix) -> Result<HermitianOperator> {
        self.as_hermitian().sub(&other.as_hermitian())
    }
}

/// A unitary operator: ‖U†U − I‖_max ≤ 1e-9 at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    register: QuditRegister,
    matrix: CMatrix,
}

impl UnitaryOperator {
    pub fn new(register: QuditRegister, matrix: CMatrix) -> Result<Self> {
        check_shape(&register, &matrix)?;
        let dim = register.dim();
        let defect = max_abs(&(matrix.adjoint() * &matrix - CMatrix::identity(dim, dim)));
        if defect > UNITARITY_TOL {
            return Err(Error::arg(format!(
                "matrix is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(UnitaryOperator { register, matrix })
    }

    pub fn identity(register: QuditRegister) -> Self {
        let dim = register.dim();
        UnitaryOperator {
            register,
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn register(&self) -> QuditRegister {
        self.register
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> UnitaryOperator {
        UnitaryOperator {
            register: self.register,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Matrix product self · other.
    pub fn compose(&self, other: &UnitaryOperator) -> Result<UnitaryOperator> {
        if self.register != other.register {
            return Err(Error::dim("operands live on different registers"));
        }
        Ok(UnitaryOperator {
            register: self.register,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Conjugation U ρ U†.
    pub fn conjugate_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if self.register != rho.register() {
            return Err(Error::dim("operands live on different registers"));
        }
        Ok(DensityMatrix {
            register: self.register,
            matrix: &self.matrix * rho.matrix() * self.matrix.adjoint(),
        })
    }

    /// Conjugation U ψ of a state vector.
    pub fn apply_vector(&self, psi: &DVector<C64>) -> DVector<C64> {
        &self.matrix * psi
    }
}
