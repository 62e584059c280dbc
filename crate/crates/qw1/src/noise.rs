//! Noise channels, the W1 gate error rate, and recovery-operation cost
//! bounds.
//!
//! The noisy implementation of a gate U is fixed to V = G∘E with
//! G(·) = U(·)U†: the noise channel E acts first, then the ideal gate.
//! Noise after the gate is representable by conjugating E with U.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::cmatrix::{maximally_mixed, projector, CMatrix, C64};
use crate::error::{Error, Result};
use crate::linalg::trace_norm_matrix;
use crate::operator::{DensityMatrix, UnitaryOperator};
use crate::register::QuditRegister;
use crate::unitary::{ascent, d_unitary, AscentOptions, DistanceMethod};

/// A noise model: a mixed-unitary Kraus list, a depolarizing parameter, or
/// a single coherent error.
#[derive(Debug, Clone)]
pub enum NoiseChannel {
    MixedUnitary {
        register: QuditRegister,
        terms: Vec<(f64, CMatrix)>,
    },
    Depolarizing {
        register: QuditRegister,
        p: f64,
    },
    Unitary {
        register: QuditRegister,
        matrix: CMatrix,
    },
}

impl NoiseChannel {
    pub fn depolarizing(register: QuditRegister, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::arg(format!("depolarizing p = {p} outside [0, 1]")));
        }
        Ok(NoiseChannel::Depolarizing { register, p })
    }

    pub fn unitary(e: &UnitaryOperator) -> Self {
        NoiseChannel::Unitary {
            register: e.register(),
            matrix: e.matrix().clone(),
        }
    }

    pub fn mixed_unitary(register: QuditRegister, terms: Vec<(f64, CMatrix)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::arg("mixed-unitary channel needs at least one term"));
        }
        let mut total = 0.0;
        for (p, v) in &terms {
            if *p < 0.0 {
                return Err(Error::arg(format!("negative Kraus weight {p}")));
            }
            total += p;
            UnitaryOperator::new(register, v.clone())?;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!(
                "Kraus weights sum to {total}, expected 1"
            )));
        }
        Ok(NoiseChannel::MixedUnitary { register, terms })
    }

    pub fn register(&self) -> QuditRegister {
        match self {
            NoiseChannel::MixedUnitary { register, .. }
            | NoiseChannel::Depolarizing { register, .. }
            | NoiseChannel::Unitary { register, .. } => *register,
        }
    }

    /// Channel action on a raw density matrix.
    pub(crate) fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        match self {
            NoiseChannel::MixedUnitary { terms, .. } => {
                let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
                for (p, v) in terms {
                    out += (v * rho * v.adjoint()).scale(*p);
                }
                out
            }
            NoiseChannel::Depolarizing { register, p } => {
                rho.scale(1.0 - p) + maximally_mixed(register.dim()).scale(*p)
            }
            NoiseChannel::Unitary { matrix, .. } => matrix * rho * matrix.adjoint(),
        }
    }
}

/// Applies a channel to a state; trace- and positivity-preserving.
pub fn apply_channel(ch: &NoiseChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.register() != rho.register() {
        return Err(Error::dim("channel and state live on different registers"));
    }
    DensityMatrix::new(rho.register(), ch.apply_matrix(rho.matrix()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorRateMethod {
    /// Unitary noise: exact via the recovery operation and D(I, UE†U†).
    RecoveryExact,
    /// Depolarizing on one qudit: the sandwich collapses to p(1−1/d).
    DepolarizingExact,
    /// Depolarizing on several qudits: sandwich bracket plus ascent point.
    DepolarizingBracket,
    /// Mixed-unitary: convexity upper bound plus ascent point.
    MixedUnitaryBound,
}

/// The W1 error rate e(U, V) = (1/n)·max_ρ ‖UρU† − V(ρ)‖_W1 of a noisy
/// gate implementation, reported as whatever mix of exact value, bracket,
/// and convexity bound the channel model admits. All values live in [0, 1].
#[derive(Debug, Clone)]
pub struct ErrorRateReport {
    pub exact: Option<f64>,
    pub bracket: (f64, f64),
    pub upper_bound_mixed: Option<f64>,
    /// Best rate actually achieved by a state the ascent visited.
    pub point_estimate: Option<f64>,
    pub method: ErrorRateMethod,
}

impl ErrorRateReport {
    /// The single number to quote: the exact rate when available, else the
    /// ascent point estimate, else the bracket midpoint.
    pub fn headline(&self) -> f64 {
        self.exact
            .or(self.point_estimate)
            .unwrap_or(0.5 * (self.bracket.0 + self.bracket.1))
    }
}

/// P^E = U E† U†, the unitary undoing noise E applied before the ideal
/// gate: P·(U·E) = U exactly.
pub fn recovery_operation(u: &UnitaryOperator, e: &UnitaryOperator) -> Result<UnitaryOperator> {
    if u.register() != e.register() {
        return Err(Error::dim("operands live on different registers"));
    }
    u.compose(&e.adjoint())?.compose(&u.adjoint())
}

fn ascent_point_estimate(
    reg: QuditRegister,
    build: impl Fn(&DVector<C64>) -> CMatrix + Sync,
    opts: &AscentOptions,
) -> (f64, f64) {
    let outcome = ascent::maximize_w1_objective(reg, &build, opts);
    (outcome.value, outcome.lower)
}

/// W1 error rate of gate U under the channel, per the V = G∘E convention.
///
/// Unitary noise gives the exact rate (1/n)·D(I, UE†U†) through the
/// recovery operation. Depolarizing noise gives the sandwich bracket
/// [(p/n)(1−1/dim), p(1−1/dim)] — exact on a single qudit — plus an ascent
/// point estimate inside it. Mixed-unitary noise gives the convexity upper
/// bound Σ p_k (1/n) D(I, U V_k U†) and an ascent point estimate.
pub fn w1_error_rate(
    u: &UnitaryOperator,
    ch: &NoiseChannel,
    opts: &AscentOptions,
) -> Result<ErrorRateReport> {
    let reg = u.register();
    if ch.register() != reg {
        return Err(Error::dim("gate and channel live on different registers"));
    }
    let n = reg.num_qudits() as f64;
    let dim = reg.dim() as f64;

    match ch {
        NoiseChannel::Unitary { matrix, .. } => {
            let e = UnitaryOperator::new(reg, matrix.clone())?;
            let recovery = recovery_operation(u, &e)?;
            let d = d_unitary(&UnitaryOperator::identity(reg), &recovery, opts)?;
            let rate = d.value / n;
            let low = d.lower_bound() / n;
            let high = (d.upper_bound / n).min(1.0);
            Ok(ErrorRateReport {
                exact: Some(rate),
                bracket: (low.min(rate), high.max(rate)),
                upper_bound_mixed: None,
                point_estimate: (d.method == DistanceMethod::NumericAscent).then_some(rate),
                method: ErrorRateMethod::RecoveryExact,
            })
        }
        NoiseChannel::Depolarizing { p, .. } => {
            let spread = 1.0 - 1.0 / dim;
            let low = p / n * spread;
            let high = p * spread;
            if reg.num_qudits() == 1 {
                return Ok(ErrorRateReport {
                    exact: Some(low),
                    bracket: (low, high),
                    upper_bound_mixed: None,
                    point_estimate: None,
                    method: ErrorRateMethod::DepolarizingExact,
                });
            }
            let point = if *p == 0.0 {
                None
            } else {
                // UρU† − (1−p)UρU† − p·I/dim = p(σ − I/dim) with σ = UρU†
                // ranging over all pure states, so the gate drops out.
                let mixed = maximally_mixed(reg.dim());
                let build = move |psi: &DVector<C64>| projector(psi) - &mixed;
                let (w1_max, _) = ascent_point_estimate(reg, build, opts);
                Some((p / n * w1_max).clamp(low, high))
            };
            Ok(ErrorRateReport {
                exact: None,
                bracket: (low, high),
                upper_bound_mixed: None,
                point_estimate: point,
                method: ErrorRateMethod::DepolarizingBracket,
            })
        }
        NoiseChannel::MixedUnitary { terms, .. } => {
            let eye = UnitaryOperator::identity(reg);
            let mut upper = 0.0;
            for (p, v) in terms {
                if *p == 0.0 {
                    continue;
                }
                let conj = UnitaryOperator::new(reg, u.matrix() * v * u.matrix().adjoint())?;
                upper += p * d_unitary(&eye, &conj, opts)?.value / n;
            }
            let upper = upper.min(1.0);

            let um = u.matrix().clone();
            let ch2 = ch.clone();
            let build = move |psi: &DVector<C64>| -> CMatrix {
                let rho = projector(psi);
                let ideal = &um * &rho * um.adjoint();
                let noisy = &um * ch2.apply_matrix(&rho) * um.adjoint();
                ideal - noisy
            };
            let (w1_max, w1_low) = ascent_point_estimate(reg, build, opts);
            let point = (w1_max / n).min(upper);
            Ok(ErrorRateReport {
                exact: None,
                bracket: ((w1_low / n).min(point), upper),
                upper_bound_mixed: Some(upper),
                point_estimate: Some(point),
                method: ErrorRateMethod::MixedUnitaryBound,
            })
        }
    }
}

/// Circuit- and experiment-cost lower bounds implied by an error rate:
/// C ≥ 4√2·n·e and R ≥ (n/2)·e for the recovery operation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CostBounds {
    pub circuit_cost_lb: f64,
    pub experiment_cost_lb: f64,
}

pub fn cost_lower_bounds(e: f64, n: usize) -> CostBounds {
    let n = n as f64;
    CostBounds {
        circuit_cost_lb: 4.0 * std::f64::consts::SQRT_2 * n * e,
        experiment_cost_lb: 0.5 * n * e,
    }
}

/// Outcome of the e ≤ e₁ ordering check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderingReport {
    /// W1 rate (exact or point estimate).
    pub e_w1: f64,
    /// Ascent estimate of e₁ = max_ρ ½‖UρU† − V(ρ)‖₁.
    pub e_one: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Estimates e₁ by the same multi-start ascent on the trace-norm objective
/// and checks e ≤ e₁ + slack. The diamond-norm rate is out of reach here;
/// only the first inequality of the chain is tested.
pub fn error_rate_ordering_check(
    u: &UnitaryOperator,
    ch: &NoiseChannel,
    opts: &AscentOptions,
) -> Result<OrderingReport> {
    let report = w1_error_rate(u, ch, opts)?;
    let e_w1 = report.headline();

    let reg = u.register();
    let um = u.matrix().clone();
    let ch2 = ch.clone();
    let objective = move |psi: &DVector<C64>| -> f64 {
        let rho = projector(psi);
        let ideal = &um * &rho * um.adjoint();
        let noisy = &um * ch2.apply_matrix(&rho) * um.adjoint();
        0.5 * trace_norm_matrix(&(ideal - noisy))
    };
    let (_, e_one, _) = ascent::maximize_cheap_objective(reg.dim(), &objective, opts);

    let slack = 2e-2;
    Ok(OrderingReport {
        e_w1,
        e_one,
        slack,
        holds: e_w1 <= e_one + slack,
    })
}

/// Literature reference values for the average gate fidelity: 1 − p/2 for
/// single-qubit depolarizing noise and 1/3 + (2/3)cos²θ for a coherent
/// error with eigenvalues e^{±iθ}. Other channels have no closed form
/// here.
pub fn average_gate_fidelity_reference(ch: &NoiseChannel) -> Option<f64> {
    match ch {
        NoiseChannel::Depolarizing { register, p }
            if register.num_qudits() == 1 && register.local_dim() == 2 =>
        {
            Some(1.0 - p / 2.0)
        }
        NoiseChannel::Unitary { register, matrix } if register.dim() == 2 => {
            // eigenvalues e^{±iθ} mean det = 1 and trace = 2cosθ
            let det = matrix[(0, 0)] * matrix[(1, 1)] - matrix[(0, 1)] * matrix[(1, 0)];
            let tr = matrix[(0, 0)] + matrix[(1, 1)];
            if (det - C64::new(1.0, 0.0)).norm() > 1e-9 || tr.im.abs() > 1e-9 {
                return None;
            }
            let cos = (tr.re / 2.0).clamp(-1.0, 1.0);
            Some(1.0 / 3.0 + 2.0 / 3.0 * cos * cos)
        }
        _ => None,
    }
}
