//! Standard gates and the gate identifiers the analytic catalog covers.

use std::f64::consts::TAU;

use crate::cmatrix::{cr, CMatrix, C64};
use crate::error::{Error, Result};
use crate::operator::UnitaryOperator;
use crate::register::QuditRegister;

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[cr(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), cr(0.0)],
    )
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

pub fn hadamard() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(1.0), cr(1.0), cr(-1.0)])
        .scale(std::f64::consts::FRAC_1_SQRT_2)
}

pub fn cnot() -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(2, 2)] = cr(0.0);
    m[(3, 3)] = cr(0.0);
    m[(2, 3)] = cr(1.0);
    m[(3, 2)] = cr(1.0);
    m
}

pub fn cz() -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(3, 3)] = cr(-1.0);
    m
}

pub fn swap() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = cr(1.0);
    m[(1, 2)] = cr(1.0);
    m[(2, 1)] = cr(1.0);
    m[(3, 3)] = cr(1.0);
    m
}

/// U_θ^(k): the two-qubit diagonal with e^{iθ} at 1-based position k.
pub fn controlled_phase(theta: f64, k: u8) -> Result<CMatrix> {
    if !(1..=4).contains(&k) {
        return Err(Error::arg(format!("controlled-phase index k = {k} outside 1..=4")));
    }
    if !(0.0..TAU).contains(&theta) {
        return Err(Error::arg(format!("theta = {theta} outside [0, 2π)")));
    }
    let mut m = CMatrix::identity(4, 4);
    m[((k - 1) as usize, (k - 1) as usize)] = C64::from_polar(1.0, theta);
    Ok(m)
}

/// Single-qudit shift X|q⟩ = |q+1 mod d⟩.
pub fn qudit_shift(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for q in 0..d {
        m[((q + 1) % d, q)] = cr(1.0);
    }
    m
}

/// Single-qudit clock Z|q⟩ = ω^q |q⟩ with ω = e^{2πi/d}.
pub fn qudit_clock(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for q in 0..d {
        m[(q, q)] = C64::from_polar(1.0, TAU * q as f64 / d as f64);
    }
    m
}

/// I^{⊗(n−k)} ⊗ X^{⊗k} on n qudits of dimension d.
pub fn tensor_shift(k: usize, n: usize, d: usize) -> Result<CMatrix> {
    if k > n || k < 1 {
        return Err(Error::arg(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut m = CMatrix::identity(1, 1);
    for _ in 0..(n - k) {
        m = m.kronecker(&CMatrix::identity(d, d));
    }
    let x = qudit_shift(d);
    for _ in 0..k {
        m = m.kronecker(&x);
    }
    Ok(m)
}

/// All 24 permutations of (0,1,2,3) in lexicographic order; index 1-based
/// to match the usual numbering of the order-4 permutation gates.
pub fn perm4_sigma(index: u8) -> Result<[usize; 4]> {
    if !(1..=24).contains(&index) {
        return Err(Error::arg(format!("permutation index {index} outside 1..=24")));
    }
    let mut all: Vec<[usize; 4]> = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for e in 0..4 {
                    let s = [a, b, c, e];
                    let mut seen = [false; 4];
                    if s.iter().all(|&v| !std::mem::replace(&mut seen[v], true)) {
                        all.push(s);
                    }
                }
            }
        }
    }
    Ok(all[(index - 1) as usize])
}

/// Permutation matrix |σ(j)⟩⟨j| for a permutation of (0,1,2,3).
pub fn perm4_matrix(index: u8) -> Result<CMatrix> {
    let sigma = perm4_sigma(index)?;
    let mut m = CMatrix::zeros(4, 4);
    for (j, &i) in sigma.iter().enumerate() {
        m[(i, j)] = cr(1.0);
    }
    Ok(m)
}

/// Distance from the identity for an order-4 permutation gate.
///
/// A permutation that carries some basis label across Hamming distance 2
/// (0↔3 or 1↔2) reaches the two-qubit maximum of 2. The nine remaining
/// permutations are the identity (0), the two one-sided flips (1), the four
/// CNOT-like gates (√2), and the two 4-cycles, which also reach 2 through
/// their product-state witnesses.
pub fn perm4_value(sigma: &[usize; 4]) -> f64 {
    if sigma == &[0, 1, 2, 3] {
        return 0.0;
    }
    if sigma[0] == 3 || sigma[1] == 2 || sigma[2] == 1 || sigma[3] == 0 {
        return 2.0;
    }
    match sigma {
        [0, 1, 3, 2] | [1, 0, 2, 3] | [0, 3, 2, 1] | [2, 1, 0, 3] => std::f64::consts::SQRT_2,
        [1, 0, 3, 2] | [2, 3, 0, 1] => 1.0,
        [2, 0, 3, 1] | [1, 3, 0, 2] => 2.0,
        _ => unreachable!("all 24 permutations are classified"),
    }
}

/// A gate with an analytic catalog entry, or a custom matrix without one.
#[derive(Debug, Clone)]
pub enum GateId {
    Identity,
    PauliX,
    Hadamard,
    ControlledPhase { theta: f64, k: u8 },
    Cz,
    Cnot,
    Swap,
    Permutation4(u8),
    TensorPauliX { k: usize, n: usize },
    Custom(CMatrix),
}

impl GateId {
    pub fn matrix(&self) -> Result<CMatrix> {
        Ok(match self {
            GateId::Identity => CMatrix::identity(2, 2),
            GateId::PauliX => pauli_x(),
            GateId::Hadamard => hadamard(),
            GateId::ControlledPhase { theta, k } => controlled_phase(*theta, *k)?,
            GateId::Cz => cz(),
            GateId::Cnot => cnot(),
            GateId::Swap => swap(),
            GateId::Permutation4(i) => perm4_matrix(*i)?,
            GateId::TensorPauliX { k, n } => tensor_shift(*k, *n, 2)?,
            GateId::Custom(m) => m.clone(),
        })
    }

    pub fn register(&self) -> Result<QuditRegister> {
        match self {
            GateId::Identity | GateId::PauliX | GateId::Hadamard => QuditRegister::qubits(1),
            GateId::ControlledPhase { .. } | GateId::Cz | GateId::Cnot | GateId::Swap => {
                QuditRegister::qubits(2)
            }
            GateId::Permutation4(_) => QuditRegister::qubits(2),
            GateId::TensorPauliX { n, .. } => QuditRegister::qubits(*n),
            GateId::Custom(m) => {
                let rows = m.nrows();
                if rows >= 2 && rows.is_power_of_two() {
                    QuditRegister::new(rows.trailing_zeros() as usize, 2)
                } else {
                    QuditRegister::new(1, rows)
                }
            }
        }
    }

    pub fn unitary(&self) -> Result<UnitaryOperator> {
        UnitaryOperator::new(self.register()?, self.matrix()?)
    }
}
