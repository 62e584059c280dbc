//! Explicit feasible decompositions for X = ρ − U_θ^(3) ρ U_θ^(3)†, built
//! in closed form from the input amplitudes. The pair certifies
//! c₁ + c₂ = √2 sin(θ/2) as an upper bound on the W1 norm of X.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DVector;

use crate::cmatrix::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::register::QuditRegister;

const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessBranch {
    /// a₁₀ ∈ {0, 1}: the difference vanishes and so does the witness.
    DegenerateZero,
    /// a₀₀ = a₁₁ = 0: the symmetric split c₁ = c₂.
    Antidiagonal,
    /// All remaining amplitude patterns.
    General,
}

#[derive(Debug, Clone)]
pub struct ControlledPhaseWitness {
    pub c1: f64,
    pub c2: f64,
    pub f1: HermitianOperator,
    pub f2: HermitianOperator,
    pub branch: WitnessBranch,
}

impl ControlledPhaseWitness {
    /// The certified upper bound c₁ + c₂.
    pub fn bound(&self) -> f64 {
        self.c1 + self.c2
    }

    /// c₁F^(1) + c₂F^(2) as a single operator.
    pub fn reconstruction(&self) -> HermitianOperator {
        let m = self.f1.matrix().scale(self.c1) + self.f2.matrix().scale(self.c2);
        HermitianOperator::new(self.f1.register(), m).expect("combination stays Hermitian")
    }
}

/// diag(1, 1, e^{iθ}, 1) on two qubits.
pub fn controlled_phase_gate_3(theta: f64) -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(2, 2)] = C64::from_polar(1.0, theta);
    m
}

/// X = ρ − U_θ^(3) ρ U_θ^(3)† for the pure state with the given amplitudes.
pub fn controlled_phase_difference(theta: f64, amps: &[C64; 4]) -> Result<HermitianOperator> {
    let reg = QuditRegister::qubits(2)?;
    let psi = DVector::from_column_slice(amps);
    let rho = crate::cmatrix::projector(&psi);
    let u = controlled_phase_gate_3(theta);
    let moved = &u * &rho * u.adjoint();
    HermitianOperator::new(reg, rho - moved)
}

fn check_inputs(theta: f64, amps: &[C64; 4]) -> Result<()> {
    if !(0.0..TAU).contains(&theta) {
        return Err(Error::arg(format!("theta = {theta} outside [0, 2π)")));
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::arg(format!(
            "amplitudes have squared norm {norm}, expected 1"
        )));
    }
    Ok(())
}

/// Hermitian matrix with the two stated upper-triangle entries of the
/// F-patterns; everything else zero.
fn pattern(entries: &[((usize, usize), C64)]) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for &((r, c), v) in entries {
        m[(r, c)] = v;
        m[(c, r)] = v.conj();
    }
    m
}

fn phase(a: C64) -> C64 {
    if a.norm() <= EPS {
        C64::new(1.0, 0.0)
    } else {
        a / a.norm()
    }
}

/// Closed-form decomposition ρ − U_θ^(3) ρ U_θ^(3)† = c₁F^(1) + c₂F^(2)
/// with Tr₁F^(1) = Tr₂F^(2) = 0, c₁ + c₂ = √2 sin(θ/2) except on the
/// degenerate branch, where the difference is zero and c₁ = c₂ = 0.
///
/// Amplitudes are ordered (a₀₀, a₀₁, a₁₀, a₁₁). The free angle α₃ is fixed
/// at π/2 and α₀ recovered as ½·arcsin of the right-hand side, which the
/// normalization keeps inside [0, 1].
pub fn witness_controlled_phase(
    theta: f64,
    amps: &[C64; 4],
) -> Result<ControlledPhaseWitness> {
    check_inputs(theta, amps)?;
    let reg = QuditRegister::qubits(2)?;
    let [a00, a01, a10, a11] = *amps;
    let half_sin = (theta / 2.0).sin();

    let r10 = a10.norm();
    if r10 <= EPS || r10 >= 1.0 - EPS {
        return Ok(ControlledPhaseWitness {
            c1: 0.0,
            c2: 0.0,
            f1: HermitianOperator::zero(reg),
            f2: HermitianOperator::zero(reg),
            branch: WitnessBranch::DegenerateZero,
        });
    }

    let (r00, r01, r11) = (a00.norm(), a01.norm(), a11.norm());
    if r00 <= EPS && r11 <= EPS {
        let c = half_sin / std::f64::consts::SQRT_2;
        let tilt = C64::from_polar(1.0, theta / 2.0 - FRAC_PI_2);
        let g01 = a10.conj() * tilt.conj();
        let g10 = a01.conj() / C64::new(std::f64::consts::SQRT_2, 0.0);
        let h01 = a01 / C64::new(std::f64::consts::SQRT_2, 0.0);
        let h10 = a10 * tilt;
        let two = C64::new(2.0, 0.0);
        let f1 = pattern(&[((1, 2), two * g01 * g10.conj())]);
        let f2 = pattern(&[((1, 2), two * h01 * h10.conj())]);
        return Ok(ControlledPhaseWitness {
            c1: c,
            c2: c,
            f1: HermitianOperator::new(reg, f1)?,
            f2: HermitianOperator::new(reg, f2)?,
            branch: WitnessBranch::Antidiagonal,
        });
    }

    // General branch, phases reattached to the nonnegative-real solution.
    let s = (r01 * r01 + (r00 + r11) * (r00 + r11)).sqrt();
    let c1 = std::f64::consts::SQRT_2 * half_sin * r00 / (r00 + r11);
    let c2 = std::f64::consts::SQRT_2 * half_sin * r11 / (r00 + r11);
    let sin_a1 = (r00 + r11) / s;
    let cos_a1 = r01 / s;
    let rhs = r10 / std::f64::consts::SQRT_2 * s;
    let a0 = 0.5 * (2.0 * rhs).clamp(-1.0, 1.0).asin();
    let (sin_a0, cos_a0) = a0.sin_cos();
    let tilt = C64::from_polar(1.0, theta / 2.0 - FRAC_PI_2);

    let g00 = C64::new(cos_a0 * sin_a1, 0.0) * phase(a00);
    let g01 = C64::new(cos_a0 * cos_a1, 0.0) * phase(a01);
    let g10 = C64::new(sin_a0, 0.0) * tilt * phase(a10);
    let h01 = g01;
    let h10 = g10;
    let h11 = C64::new(cos_a0 * sin_a1, 0.0) * phase(a11);

    let two = C64::new(2.0, 0.0);
    let f1 = pattern(&[
        ((0, 2), two * g00 * g10.conj()),
        ((1, 2), two * g01 * g10.conj()),
    ]);
    let f2 = pattern(&[
        ((1, 2), two * h01 * h10.conj()),
        ((2, 3), two * h10 * h11.conj()),
    ]);
    Ok(ControlledPhaseWitness {
        c1,
        c2,
        f1: HermitianOperator::new(reg, f1)?,
        f2: HermitianOperator::new(reg, f2)?,
        branch: WitnessBranch::General,
    })
}
