//! Circuit estimators: POVM probability bounds, gate-sequence closeness
//! budgets, and per-gate tolerance thresholds.

use serde::{Deserialize, Serialize};

use crate::cmatrix::{cr, CMatrix, C64};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_matrix, max_eigenvalue};
use crate::operator::{HermitianOperator, UnitaryOperator};
use crate::register::QuditRegister;
use crate::unitary::{d_unitary, AscentOptions, DistanceEstimate};

/// A positive operator-valued measure: PSD elements summing to the
/// identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianOperator>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::arg("a POVM needs at least one element"));
        }
        let reg = elements[0].register();
        let dim = reg.dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for (i, m) in elements.iter().enumerate() {
            if m.register() != reg {
                return Err(Error::dim("POVM elements live on different registers"));
            }
            let (eigs, _) = hermitian_eig_matrix(m.matrix());
            if eigs[0] < -1e-9 {
                return Err(Error::arg(format!(
                    "POVM element {i} has negative eigenvalue {:.3e}",
                    eigs[0]
                )));
            }
            sum += m.matrix();
        }
        let defect = crate::cmatrix::max_abs(&(&sum - CMatrix::identity(dim, dim)));
        if defect > 1e-9 {
            return Err(Error::arg(format!(
                "POVM elements sum to identity only within {defect:.3e}"
            )));
        }
        Ok(Povm { elements })
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn register(&self) -> QuditRegister {
        self.elements[0].register()
    }

    /// max_m λ₀(M_m), the largest eigenvalue over all elements.
    pub fn max_eigenvalue(&self) -> f64 {
        self.elements.iter().map(max_eigenvalue).fold(0.0, f64::max)
    }
}

/// |P_U − P_V| ≤ 2·λ₀(M)·D(U, V) for a single POVM element.
pub fn povm_bound(element: &HermitianOperator, distance: f64) -> Result<f64> {
    let (eigs, _) = hermitian_eig_matrix(element.matrix());
    if eigs[0] < -1e-9 {
        return Err(Error::arg(format!(
            "POVM element has negative eigenvalue {:.3e}",
            eigs[0]
        )));
    }
    if distance < 0.0 {
        return Err(Error::arg("distance must be nonnegative"));
    }
    Ok(2.0 * eigs.last().copied().unwrap_or(0.0) * distance)
}

/// An ideal/actual gate sequence pair on a shared register; the circuit
/// applies index 0 first.
#[derive(Debug, Clone)]
pub struct GateSequencePair {
    pairs: Vec<(UnitaryOperator, UnitaryOperator)>,
}

impl GateSequencePair {
    pub fn new(pairs: Vec<(UnitaryOperator, UnitaryOperator)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::arg("gate sequence is empty"));
        }
        let reg = pairs[0].0.register();
        for (u, v) in &pairs {
            if u.register() != reg || v.register() != reg {
                return Err(Error::dim("sequence gates live on different registers"));
            }
        }
        Ok(GateSequencePair { pairs })
    }

    pub fn pairs(&self) -> &[(UnitaryOperator, UnitaryOperator)] {
        &self.pairs
    }

    pub fn register(&self) -> QuditRegister {
        self.pairs[0].0.register()
    }
}

/// Budget for a gate sequence: per-gate distances, their sum (the bound on
/// the distance of the composed circuits), and the POVM-probability
/// consequences.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetReport {
    pub per_gate_distances: Vec<f64>,
    pub sum: f64,
    pub lambda_max: f64,
    /// 2·λ_max·sum, the bound on any outcome-probability difference.
    pub probability_bound: f64,
    /// α/(2·t·λ_max) when a tolerance α was supplied.
    pub per_gate_threshold: Option<f64>,
    /// Set when some actual gate is not a tensor product of single-qudit
    /// gates; the linear-accumulation bound is only proved under that
    /// premise.
    pub premise_violated: bool,
}

/// Options for sequence budgeting.
#[derive(Debug, Clone, Default)]
pub struct SequenceOptions {
    pub ascent: AscentOptions,
    /// POVM whose largest element eigenvalue enters the probability bound;
    /// λ_max = 1 (a projective worst case) when absent.
    pub povm: Option<Povm>,
    /// Probability tolerance α for the per-gate threshold.
    pub alpha: Option<f64>,
}

/// Operator Schmidt test: U is a tensor product of single-qudit factors
/// exactly when every single-site reshuffling has one nonzero singular
/// value.
pub(crate) fn is_local_product(u: &UnitaryOperator) -> bool {
    let reg = u.register();
    let (n, d) = (reg.num_qudits(), reg.local_dim());
    if n == 1 {
        return true;
    }
    let dim = reg.dim();
    let rest = dim / d;
    let m = u.matrix();
    for site in 1..=n {
        // R[(a_s, b_s), (a_r, b_r)] = U[(a_s, a_r), (b_s, b_r)] with the
        // site digit split out of both indices
        let mut r = CMatrix::zeros(d * d, rest * rest);
        let stride = d.pow((n - site) as u32);
        let split = |idx: usize| -> (usize, usize) {
            let digit = (idx / stride) % d;
            let hi = idx / (stride * d);
            let lo = idx % stride;
            (digit, hi * stride + lo)
        };
        for a in 0..dim {
            let (a_s, a_r) = split(a);
            for b in 0..dim {
                let (b_s, b_r) = split(b);
                r[(a_s * d + b_s, a_r * rest + b_r)] = m[(a, b)];
            }
        }
        let svd = r.svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        if sv.len() > 1 && sv[1] > 1e-9 {
            return false;
        }
    }
    true
}

/// Per-gate distances and their sum for an ideal/actual sequence pair.
///
/// The sum bounds D(U_t···U_1, V_t···V_1); the proof needs every actual
/// gate to factor into single-qudit tensors, so the report flags sequences
/// outside that premise instead of refusing them.
pub fn sequence_bound(seq: &GateSequencePair, opts: &SequenceOptions) -> Result<BudgetReport> {
    let mut per_gate = Vec::with_capacity(seq.pairs().len());
    let mut premise_violated = false;
    for (u, v) in seq.pairs() {
        let d: DistanceEstimate = d_unitary(u, v, &opts.ascent)?;
        per_gate.push(d.value);
        if !is_local_product(v) {
            premise_violated = true;
        }
    }
    let sum: f64 = per_gate.iter().sum();
    let lambda_max = opts
        .povm
        .as_ref()
        .map(|p| p.max_eigenvalue())
        .unwrap_or(1.0);
    let t = per_gate.len();
    let per_gate_threshold = match opts.alpha {
        Some(alpha) => Some(budget_threshold(alpha, t, lambda_max)?),
        None => None,
    };
    Ok(BudgetReport {
        per_gate_distances: per_gate,
        sum,
        lambda_max,
        probability_bound: 2.0 * lambda_max * sum,
        per_gate_threshold,
        premise_violated,
    })
}

fn budget_threshold(alpha: f64, t: usize, lambda_max: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
        return Err(Error::arg(format!("alpha = {alpha} outside (0, 1]")));
    }
    if t < 1 {
        return Err(Error::arg("sequence length t must be at least 1"));
    }
    if lambda_max <= 0.0 {
        return Err(Error::arg("POVM maximum eigenvalue must be positive"));
    }
    Ok(alpha / (2.0 * t as f64 * lambda_max))
}

/// The per-gate distance threshold G = α/(2t·max_m λ₀(M_m)) that keeps
/// every outcome-probability difference of the two circuits within α.
pub fn tolerance_budget(alpha: f64, t: usize, povm: &Povm) -> Result<f64> {
    budget_threshold(alpha, t, povm.max_eigenvalue())
}

/// The eight single-qubit POVM elements of the worked tolerance scenario:
/// six rank-one elements at weight 1/8 with off-diagonal phases 0, π, ±π/2
/// and ±π/4, plus the two computational projectors at 1/4.
pub fn example_povm() -> Povm {
    let reg = QuditRegister::qubits(1).expect("single qubit");
    let e = |off: C64| -> HermitianOperator {
        let m = CMatrix::from_row_slice(2, 2, &[cr(0.125), off, off.conj(), cr(0.125)]);
        HermitianOperator::new(reg, m).expect("Hermitian by construction")
    };
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    let mut elements = vec![
        e(C64::new(0.0, -0.125)),
        e(C64::new(0.0, 0.125)),
        e(cr(0.125)),
        e(cr(-0.125)),
        e(C64::from_polar(0.125, quarter_pi)),
        e(C64::from_polar(0.125, 5.0 * quarter_pi)),
    ];
    let proj = |top: f64, bot: f64| -> HermitianOperator {
        let m = CMatrix::from_row_slice(2, 2, &[cr(top), cr(0.0), cr(0.0), cr(bot)]);
        HermitianOperator::new(reg, m).expect("diagonal")
    };
    elements.push(proj(0.25, 0.0));
    elements.push(proj(0.0, 0.25));
    Povm::new(elements).expect("the example elements form a POVM")
}

/// End-to-end tolerance scenario: t diagonal qubit gates under the
/// coherent noise diag(e^{iθ}, e^{−iθ}), measured by the example POVM.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    /// Per-gate distance |sin θ|.
    pub per_gate_distance: f64,
    /// Threshold G = α/(2t·max λ₀).
    pub threshold: f64,
    pub admissible: bool,
    /// [0, arcsin G] and [π − arcsin G, π].
    pub admissible_ranges: [(f64, f64); 2],
    pub sum_bound: f64,
    pub probability_bound: f64,
}

/// Evaluates the worked scenario at noise angle θ and tolerance α over t
/// gates. Diagonal ideal gates commute with the noise, so every pair sits
/// at distance |sin θ| and the circuits stay within tolerance exactly when
/// |sin θ| ≤ G.
pub fn example_scenario(theta: f64, alpha: f64, t: usize) -> Result<ScenarioReport> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::arg(format!("theta = {theta} outside [0, π]")));
    }
    let povm = example_povm();
    let threshold = tolerance_budget(alpha, t, &povm)?;
    let per_gate = theta.sin().abs();
    let sum = per_gate * t as f64;
    let edge = threshold.clamp(0.0, 1.0).asin();
    Ok(ScenarioReport {
        per_gate_distance: per_gate,
        threshold,
        admissible: per_gate <= threshold,
        admissible_ranges: [
            (0.0, edge),
            (std::f64::consts::PI - edge, std::f64::consts::PI),
        ],
        sum_bound: sum,
        probability_bound: 2.0 * povm.max_eigenvalue() * sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_random_unitary, haar_unitary_matrix, rng_from_seed};
    use crate::unitary::gates;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn example_povm_is_exact() {
        let povm = example_povm();
        assert_eq!(povm.elements().len(), 8);
        let mut sum = CMatrix::zeros(2, 2);
        for m in povm.elements() {
            sum += m.matrix();
        }
        assert!(crate::cmatrix::max_abs(&(&sum - CMatrix::identity(2, 2))) < 1e-15);
        assert_relative_eq!(povm.max_eigenvalue(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn povm_bound_examples() {
        let povm = example_povm();
        let b = povm_bound(&povm.elements()[0], std::f64::consts::SQRT_2).unwrap();
        assert_relative_eq!(b, std::f64::consts::SQRT_2 / 2.0, epsilon = 1e-12);
        assert_eq!(povm_bound(&povm.elements()[0], 0.0).unwrap(), 0.0);
        assert!(povm_bound(&povm.elements()[0], -1.0).is_err());
    }

    #[test]
    fn povm_validation() {
        let reg = QuditRegister::qubits(1).unwrap();
        let half = HermitianOperator::new(reg, CMatrix::identity(2, 2).scale(0.5)).unwrap();
        assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
        assert!(Povm::new(vec![half.clone()]).is_err()); // sums to I/2
        let neg = HermitianOperator::new(
            reg,
            CMatrix::from_row_slice(2, 2, &[cr(1.5), cr(0.0), cr(0.0), cr(-0.5)]),
        )
        .unwrap();
        let comp = HermitianOperator::new(
            reg,
            CMatrix::from_row_slice(2, 2, &[cr(-0.5), cr(0.0), cr(0.0), cr(1.5)]),
        )
        .unwrap();
        assert!(Povm::new(vec![neg, comp]).is_err());
    }

    #[test]
    fn tolerance_budget_values() {
        let povm = example_povm();
        let g = tolerance_budget(0.3, 5, &povm).unwrap();
        assert_relative_eq!(g, 0.12, epsilon = 1e-12);
        // basis measurement on one qubit has λ₀ = 1
        let reg = QuditRegister::qubits(1).unwrap();
        let p0 = HermitianOperator::new(
            reg,
            CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]),
        )
        .unwrap();
        let p1 = HermitianOperator::new(
            reg,
            CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(0.0), cr(0.0), cr(1.0)]),
        )
        .unwrap();
        let basis = Povm::new(vec![p0, p1]).unwrap();
        assert_relative_eq!(
            tolerance_budget(0.3, 5, &basis).unwrap(),
            0.03,
            epsilon = 1e-12
        );
        // α → 0 sends the threshold to 0
        assert!(tolerance_budget(1e-12, 5, &povm).unwrap() < 1e-11);
        assert!(tolerance_budget(0.0, 5, &povm).is_err());
        assert!(tolerance_budget(1.5, 5, &povm).is_err());
    }

    #[test]
    fn scenario_reproduces_worked_numbers() {
        let r = example_scenario(0.1, 0.3, 5).unwrap();
        assert_relative_eq!(r.threshold, 0.12, epsilon = 1e-12);
        assert!(r.admissible); // sin 0.1 ≈ 0.0998 ≤ 0.12
        assert_relative_eq!(r.admissible_ranges[0].1, 0.12f64.asin(), epsilon = 1e-12);
        assert_relative_eq!(
            r.admissible_ranges[1].0,
            PI - 0.12f64.asin(),
            epsilon = 1e-12
        );

        let r = example_scenario(PI / 2.0, 0.3, 5).unwrap();
        assert!(!r.admissible);
    }

    #[test]
    fn local_product_detection() {
        let reg = QuditRegister::qubits(2).unwrap();
        let mut rng = rng_from_seed(3);
        let a = haar_unitary_matrix(2, &mut rng);
        let b = haar_unitary_matrix(2, &mut rng);
        let prod = UnitaryOperator::new(reg, a.kronecker(&b)).unwrap();
        assert!(is_local_product(&prod));

        let cnot = UnitaryOperator::new(reg, gates::cnot()).unwrap();
        assert!(!is_local_product(&cnot));

        let reg3 = QuditRegister::qubits(3).unwrap();
        let mid = CMatrix::identity(2, 2)
            .kronecker(&gates::cnot());
        let ent = UnitaryOperator::new(reg3, mid).unwrap();
        assert!(!is_local_product(&ent));
        let all = UnitaryOperator::new(
            reg3,
            a.kronecker(&b).kronecker(&haar_unitary_matrix(2, &mut rng)),
        )
        .unwrap();
        assert!(is_local_product(&all));
    }

    #[test]
    fn sequence_bound_examples() {
        let reg = QuditRegister::qubits(1).unwrap();
        let theta: f64 = 0.25;
        let mut noise = CMatrix::zeros(2, 2);
        noise[(0, 0)] = C64::from_polar(1.0, theta);
        noise[(1, 1)] = C64::from_polar(1.0, -theta);

        // five random diagonal ideal gates under shared coherent noise
        let mut rng = rng_from_seed(11);
        let mut pairs = Vec::new();
        for _ in 0..5 {
            let mut u = CMatrix::zeros(2, 2);
            use rand::Rng;
            u[(0, 0)] = C64::from_polar(1.0, rng.gen_range(0.0..PI));
            u[(1, 1)] = C64::from_polar(1.0, rng.gen_range(0.0..PI));
            let v = &u * &noise;
            pairs.push((
                UnitaryOperator::new(reg, u).unwrap(),
                UnitaryOperator::new(reg, v).unwrap(),
            ));
        }
        let seq = GateSequencePair::new(pairs).unwrap();
        let opts = SequenceOptions {
            povm: Some(example_povm()),
            alpha: Some(0.3),
            ascent: AscentOptions::fast(0),
        };
        let report = sequence_bound(&seq, &opts).unwrap();
        assert_relative_eq!(report.sum, 5.0 * theta.sin(), epsilon = 1e-9);
        assert!(!report.premise_violated);
        assert_relative_eq!(report.per_gate_threshold.unwrap(), 0.12, epsilon = 1e-12);
        assert_relative_eq!(
            report.probability_bound,
            2.0 * 0.25 * 5.0 * theta.sin(),
            epsilon = 1e-9
        );

        // identical sequences cost nothing, and (I, I) padding is free
        let eye = UnitaryOperator::identity(reg);
        let seq = GateSequencePair::new(vec![(eye.clone(), eye.clone())]).unwrap();
        let report = sequence_bound(&seq, &SequenceOptions::default()).unwrap();
        assert_eq!(report.sum, 0.0);
    }

    #[test]
    fn sequence_rejects_mixed_registers() {
        let one = QuditRegister::qubits(1).unwrap();
        let two = QuditRegister::qubits(2).unwrap();
        let a = UnitaryOperator::identity(one);
        let b = UnitaryOperator::identity(two);
        assert!(GateSequencePair::new(vec![]).is_err());
        assert!(GateSequencePair::new(vec![(a.clone(), a.clone()), (b.clone(), b)]).is_err());
    }

    #[test]
    fn sequence_premise_flag_and_padding_invariance() {
        let reg = QuditRegister::qubits(2).unwrap();
        let eye = UnitaryOperator::identity(reg);
        let cnot = UnitaryOperator::new(reg, gates::cnot()).unwrap();
        let u = haar_random_unitary(reg, 8).unwrap();

        let opts = SequenceOptions {
            ascent: AscentOptions::fast(0).with_restarts(4),
            ..SequenceOptions::default()
        };
        let base = GateSequencePair::new(vec![(u.clone(), cnot.clone())]).unwrap();
        let report = sequence_bound(&base, &opts).unwrap();
        assert!(report.premise_violated); // CNOT is not a local product

        let padded = GateSequencePair::new(vec![
            (u.clone(), cnot.clone()),
            (eye.clone(), eye.clone()),
        ])
        .unwrap();
        let padded_report = sequence_bound(&padded, &opts).unwrap();
        assert_relative_eq!(padded_report.sum, report.sum, epsilon = 1e-12);
    }

    #[test]
    fn two_gate_subadditivity_numeric() {
        // D(U₂U₁, V₂V₁) ≤ D(U₁,V₁) + D(U₂,V₂) for local-product actuals
        let reg = QuditRegister::qubits(1).unwrap();
        let opts = AscentOptions::fast(0);
        for seed in 0..4u64 {
            let u1 = haar_random_unitary(reg, 100 + 4 * seed).unwrap();
            let u2 = haar_random_unitary(reg, 101 + 4 * seed).unwrap();
            let v1 = haar_random_unitary(reg, 102 + 4 * seed).unwrap();
            let v2 = haar_random_unitary(reg, 103 + 4 * seed).unwrap();
            let lhs = d_unitary(
                &u2.compose(&u1).unwrap(),
                &v2.compose(&v1).unwrap(),
                &opts,
            )
            .unwrap()
            .value;
            let rhs = d_unitary(&u1, &v1, &opts).unwrap().value
                + d_unitary(&u2, &v2, &opts).unwrap().value;
            assert!(lhs <= rhs + 2e-2, "{lhs} vs {rhs}");
        }
    }
}
