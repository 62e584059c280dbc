//! Eigenphases of unitaries and the smallest covering arc.

use std::f64::consts::{PI, TAU};

use crate::cmatrix::{CMatrix, C64};
use crate::linalg::hermitian_eig_matrix;
use crate::operator::UnitaryOperator;

/// Eigenphases θ_j in [0, 2π) with matching eigenvector columns, so that
/// W = Σ_j e^{iθ_j} v_j v_j†.
pub struct EigenphaseDecomposition {
    phases: Vec<f64>,
    vectors: CMatrix,
}

impl EigenphaseDecomposition {
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Eigendecomposition of a unitary via its commuting Hermitian parts.
///
/// W is normal, so A = (W+W†)/2 and B = (W−W†)/2i commute and share
/// eigenvectors with W. Diagonalizing A, then B inside each degenerate
/// eigenspace of A, yields a joint eigenbasis without a general complex
/// eigensolver. cos θ comes from A, sin θ from B.
pub(crate) fn unitary_eigenphases(w: &CMatrix) -> EigenphaseDecomposition {
    let dim = w.nrows();
    let a = (w + w.adjoint()).scale(0.5);
    let b = (w - w.adjoint()) * C64::new(0.0, -0.5);

    let (avals, mut vecs) = hermitian_eig_matrix(&a);

    // Cluster near-equal cosines; within a cluster the basis is ambiguous
    // until B is diagonalized there.
    let cluster_tol = 1e-10 * avals.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && (avals[end] - avals[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let sub = vecs.columns(start, end - start).clone_owned();
            let b_sub = sub.adjoint() * &b * &sub;
            let (_, rot) = hermitian_eig_matrix(&b_sub.clone());
            let rotated = sub * rot;
            for (offset, col) in (start..end).enumerate() {
                vecs.set_column(col, &rotated.column(offset));
            }
        }
        start = end;
    }

    let mut phases = Vec::with_capacity(dim);
    for k in 0..dim {
        let v = vecs.column(k);
        let cos_part = (v.adjoint() * &a * v)[(0, 0)].re;
        let sin_part = (v.adjoint() * &b * v)[(0, 0)].re;
        let mut theta = sin_part.atan2(cos_part);
        if theta < 0.0 {
            theta += TAU;
        }
        if theta >= TAU {
            theta -= TAU;
        }
        phases.push(theta);
    }
    EigenphaseDecomposition { phases, vectors: vecs }
}

/// The smallest circular arc containing all eigenvalues of a unitary.
#[derive(Debug, Clone)]
pub struct ArcResult {
    /// Eigenphases in [0, 2π), sorted ascending, with multiplicity.
    pub eigenphases: Vec<f64>,
    /// Arc length Θ = 2π − (largest circular gap between sorted phases).
    pub theta: f64,
}

/// Computes the arc Θ(W) from the eigenphases of `w`.
pub fn smallest_arc(w: &UnitaryOperator) -> ArcResult {
    let mut phases = unitary_eigenphases(w.matrix()).phases.clone();
    phases.sort_by(f64::total_cmp);
    let theta = arc_from_sorted_phases(&phases);
    ArcResult {
        eigenphases: phases,
        theta,
    }
}

/// 2π minus the largest gap; gaps are measured between circularly
/// consecutive phases, so the result never depends on where the circle is
/// cut.
pub(crate) fn arc_from_sorted_phases(phases: &[f64]) -> f64 {
    let m = phases.len();
    if m <= 1 {
        return 0.0;
    }
    let mut max_gap: f64 = 0.0;
    for i in 1..m {
        max_gap = max_gap.max(phases[i] - phases[i - 1]);
    }
    max_gap = max_gap.max(TAU - (phases[m - 1] - phases[0]));
    (TAU - max_gap).clamp(0.0, TAU)
}

/// Single-qudit closed form: sin(Θ/2) while the arc fits in a half circle, 1
/// beyond.
pub(crate) fn distance_from_arc(theta: f64) -> f64 {
    if theta < PI {
        (theta / 2.0).sin()
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{cr, max_abs};
    use crate::register::QuditRegister;
    use approx::assert_relative_eq;

    fn diag_unitary(phases: &[f64]) -> UnitaryOperator {
        let dim = phases.len();
        let reg = if dim == 2 {
            QuditRegister::qubits(1).unwrap()
        } else if dim == 4 {
            QuditRegister::qubits(2).unwrap()
        } else {
            QuditRegister::new(1, dim).unwrap()
        };
        let mut m = CMatrix::zeros(dim, dim);
        for (i, &p) in phases.iter().enumerate() {
            m[(i, i)] = C64::from_polar(1.0, p);
        }
        UnitaryOperator::new(reg, m).unwrap()
    }

    #[test]
    fn two_points_on_circle() {
        for alpha in [0.3, 1.0, PI - 0.1, PI] {
            let arc = smallest_arc(&diag_unitary(&[0.0, alpha]));
            assert_relative_eq!(arc.theta, alpha, epsilon = 1e-12);
        }
    }

    #[test]
    fn identity_has_zero_arc() {
        let reg = QuditRegister::qubits(2).unwrap();
        let arc = smallest_arc(&UnitaryOperator::identity(reg));
        assert_relative_eq!(arc.theta, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fourth_roots_cover_three_quarters() {
        let arc = smallest_arc(&diag_unitary(&[0.0, PI / 2.0, PI, 3.0 * PI / 2.0]));
        assert_relative_eq!(arc.theta, 3.0 * PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn arc_is_rotation_invariant() {
        for shift in [0.0, 1.0, 5.9] {
            let phis: Vec<f64> = [0.1, 0.4, 2.0]
                .iter()
                .map(|p| (p + shift) % TAU)
                .collect();
            let arc = smallest_arc(&diag_unitary(&phis));
            assert_relative_eq!(arc.theta, 1.9, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenphases_reconstruct_degenerate_unitaries() {
        // CNOT has phases {0,0,0,π}; the A-spectrum is degenerate
        let reg = QuditRegister::qubits(2).unwrap();
        let mut m = CMatrix::identity(4, 4);
        m[(2, 2)] = cr(0.0);
        m[(3, 3)] = cr(0.0);
        m[(2, 3)] = cr(1.0);
        m[(3, 2)] = cr(1.0);
        let u = UnitaryOperator::new(reg, m).unwrap();
        let dec = unitary_eigenphases(u.matrix());
        let mut sorted = dec.phases().to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_relative_eq!(sorted[2], 0.0, epsilon = 1e-9);
        assert_relative_eq!(sorted[3], PI, epsilon = 1e-9);
        // ±i pair: degenerate A-block with opposite B signs
        let v = diag_unitary(&[PI / 2.0, 3.0 * PI / 2.0]);
        let dec = unitary_eigenphases(v.matrix());
        let mut sorted = dec.phases().to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_relative_eq!(sorted[0], PI / 2.0, epsilon = 1e-9);
        assert_relative_eq!(sorted[1], 3.0 * PI / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn random_unitary_reconstruction() {
        let reg = QuditRegister::qubits(2).unwrap();
        for seed in 0..6u64 {
            let u = crate::random::haar_random_unitary(reg, seed).unwrap();
            let dec = unitary_eigenphases(u.matrix());
            let mut rec = CMatrix::zeros(4, 4);
            for k in 0..4 {
                let v = dec.vectors().column(k);
                rec += (v * v.adjoint()) * C64::from_polar(1.0, dec.phases()[k]);
            }
            assert!(max_abs(&(rec - u.matrix())) < 1e-8);
        }
    }
}
