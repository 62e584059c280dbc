//! The reproduction table: one row per analytic value, each recomputed and
//! compared at a pinned tolerance. Backs the `reproduce-paper` CLI command
//! and the final acceptance gate.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::time::Instant;


use serde::{Deserialize, Serialize};

use crate::cmatrix::{CMatrix, C64};
use crate::error::Result;
use crate::noise::{
    average_gate_fidelity_reference, cost_lower_bounds, w1_error_rate, NoiseChannel,
};
use crate::operator::UnitaryOperator;
use crate::register::QuditRegister;
use crate::unitary::{catalog_distance, d_unitary, gates, AscentOptions, GateId};
use crate::w1::witness::{controlled_phase_difference, witness_controlled_phase, WitnessBranch};
use crate::w1::{w1_norm, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    /// |computed − reference| ≤ tolerance.
    Equality,
    /// computed ≤ reference + tolerance.
    AtMost,
    /// computed ≥ reference − tolerance.
    AtLeast,
    /// Recorded for the ledger, never asserted.
    Flagged,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PaperRow {
    pub quantity: String,
    pub paper_value: String,
    pub reference: f64,
    pub computed: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub method: String,
    pub kind: RowKind,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PaperReport {
    pub rows: Vec<PaperRow>,
    pub passed: bool,
    pub elapsed_seconds: f64,
}

fn row(
    quantity: impl Into<String>,
    paper_value: impl Into<String>,
    reference: f64,
    computed: f64,
    tolerance: f64,
    method: &str,
    kind: RowKind,
) -> PaperRow {
    let abs_diff = (computed - reference).abs();
    let passed = match kind {
        RowKind::Equality => abs_diff <= tolerance,
        RowKind::AtMost => computed <= reference + tolerance,
        RowKind::AtLeast => computed >= reference - tolerance,
        RowKind::Flagged => true,
    };
    PaperRow {
        quantity: quantity.into(),
        paper_value: paper_value.into(),
        reference,
        computed,
        abs_diff,
        tolerance,
        method: method.to_string(),
        kind,
        passed,
    }
}

/// Expected distance for each order-4 permutation, stated independently of
/// the catalog: gates crossing Hamming distance 2 reach the maximum, the
/// nine exceptions are listed by their permutation.
fn expected_perm_value(sigma: &[usize; 4]) -> f64 {
    match sigma {
        [0, 1, 2, 3] => 0.0,
        [1, 0, 3, 2] | [2, 3, 0, 1] => 1.0,
        [0, 1, 3, 2] | [1, 0, 2, 3] | [0, 3, 2, 1] | [2, 1, 0, 3] => SQRT_2,
        _ => 2.0,
    }
}

/// Recomputes every analytic value at seed-controlled effort and compares
/// at the pinned tolerances. Restart count applies to the numeric-ascent
/// rows.
pub fn reproduce_paper(seed: u64, restarts: usize) -> Result<PaperReport> {
    let start = Instant::now();
    let mut rows: Vec<PaperRow> = Vec::new();
    let two = QuditRegister::qubits(2)?;
    let eye2 = UnitaryOperator::identity(two);
    let opts = AscentOptions::default()
        .with_seed(seed)
        .with_restarts(restarts);

    // --- controlled-phase family, CZ, CNOT, SWAP (analytic) ---
    for k in 1..=4u8 {
        for theta in [PI / 6.0, FRAC_PI_2, PI] {
            let d = catalog_distance(&GateId::ControlledPhase { theta, k })?;
            rows.push(row(
                format!("D(I, U_theta^({k})) at theta={theta:.4}"),
                "sqrt(2) sin(theta/2)",
                SQRT_2 * (theta / 2.0).sin(),
                d.value,
                1e-12,
                "analytic-catalog",
                RowKind::Equality,
            ));
        }
    }
    for (name, gate, expect) in [
        ("D(I, CZ)", GateId::Cz, SQRT_2),
        ("D(I, CNOT)", GateId::Cnot, SQRT_2),
        ("D(I, SWAP)", GateId::Swap, 2.0),
    ] {
        rows.push(row(
            name,
            format!("{expect:.6}"),
            expect,
            catalog_distance(&gate)?.value,
            1e-12,
            "analytic-catalog",
            RowKind::Equality,
        ));
    }

    // --- order-4 permutation table ---
    for index in 1..=24u8 {
        let sigma = gates::perm4_sigma(index)?;
        let expect = expected_perm_value(&sigma);
        let d = catalog_distance(&GateId::Permutation4(index))?;
        rows.push(row(
            format!("D(I, P_{index})"),
            format!("{expect:.6}"),
            expect,
            d.value,
            1e-12,
            "analytic-catalog",
            RowKind::Equality,
        ));
    }

    // --- tensored Pauli-X ---
    for (k, n) in [(1usize, 2usize), (2, 2), (2, 5), (3, 3)] {
        let d = catalog_distance(&GateId::TensorPauliX { k, n })?;
        rows.push(row(
            format!("D(I, I^({})⊗X^({k}))", n - k),
            format!("{k}"),
            k as f64,
            d.value,
            1e-12,
            "analytic-catalog",
            RowKind::Equality,
        ));
    }

    // --- local-distinguishability values, including the conjugated CNOT ---
    let q_gate = {
        let ix = CMatrix::identity(2, 2).kronecker(&gates::pauli_x());
        let xi = gates::pauli_x().kronecker(&CMatrix::identity(2, 2));
        UnitaryOperator::new(two, ix * gates::cnot() * xi)?
    };
    for (name, v, expect) in [
        (
            "D(I, I⊗X)",
            UnitaryOperator::new(two, gates::tensor_shift(1, 2, 2)?)?,
            1.0,
        ),
        (
            "D(I, X⊗X)",
            UnitaryOperator::new(two, gates::tensor_shift(2, 2, 2)?)?,
            2.0,
        ),
        ("D(I, (I⊗X)CNOT(X⊗I))", q_gate, 2.0),
    ] {
        let d = d_unitary(&eye2, &v, &opts)?;
        rows.push(row(
            name,
            format!("{expect:.6}"),
            expect,
            d.value,
            1e-12,
            "analytic-catalog",
            RowKind::Equality,
        ));
    }

    // --- numeric ascent against the analytic values ---
    let numeric_gates: Vec<(&str, CMatrix, f64)> = vec![
        ("CNOT", gates::cnot(), SQRT_2),
        ("CZ", gates::cz(), SQRT_2),
        ("SWAP", gates::swap(), 2.0),
        ("U_pi^(3)", gates::controlled_phase(PI, 3)?, SQRT_2),
        ("I⊗X", gates::tensor_shift(1, 2, 2)?, 1.0),
        ("X⊗X", gates::tensor_shift(2, 2, 2)?, 2.0),
    ];
    for (name, m, expect) in numeric_gates {
        let v = UnitaryOperator::new(two, m)?;
        // the catalog would answer these exactly; take the ascent path so
        // the optimizer itself is validated against the closed forms
        let d = crate::unitary::d_unitary_numeric(&eye2, &v, &opts)?;
        rows.push(row(
            format!("numeric D(I, {name})"),
            format!("{expect:.6}"),
            expect,
            d.value,
            1e-2,
            "numeric-ascent",
            RowKind::Equality,
        ));
    }

    // --- worked tolerance scenario ---
    let theta1 = 0.1;
    let scenario = crate::budget::example_scenario(theta1, 0.3, 5)?;
    rows.push(row(
        "per-gate D(U_k, V_k) at theta=0.1",
        "|sin theta|",
        theta1.sin().abs(),
        scenario.per_gate_distance,
        1e-12,
        "single-qudit-arc",
        RowKind::Equality,
    ));
    rows.push(row(
        "threshold G (alpha=0.3, t=5)",
        "0.12",
        0.12,
        scenario.threshold,
        1e-12,
        "analytic",
        RowKind::Equality,
    ));
    rows.push(row(
        "admissible range end arcsin(G)",
        "arcsin(0.12)",
        0.12f64.asin(),
        scenario.admissible_ranges[0].1,
        1e-9,
        "analytic",
        RowKind::Equality,
    ));
    rows.push(row(
        "sequence bound (5 gates)",
        "5 |sin theta|",
        5.0 * theta1.sin(),
        scenario.sum_bound,
        1e-9,
        "single-qudit-arc",
        RowKind::Equality,
    ));
    // per-gate arc distance verified through the actual diagonal pair
    let one = QuditRegister::qubits(1)?;
    let mut noise = CMatrix::zeros(2, 2);
    noise[(0, 0)] = C64::from_polar(1.0, theta1);
    noise[(1, 1)] = C64::from_polar(1.0, -theta1);
    let mut ideal = CMatrix::zeros(2, 2);
    ideal[(0, 0)] = C64::from_polar(1.0, 0.7);
    ideal[(1, 1)] = C64::from_polar(1.0, 1.9);
    let u_k = UnitaryOperator::new(one, ideal.clone())?;
    let v_k = UnitaryOperator::new(one, ideal * noise)?;
    let d = d_unitary(&u_k, &v_k, &opts)?;
    rows.push(row(
        "D(U_1, V_1) through the gate pair",
        "|sin theta|",
        theta1.sin().abs(),
        d.value,
        1e-9,
        "single-qudit-arc",
        RowKind::Equality,
    ));

    // --- single-qubit error rates ---
    for p in [0.1, 0.5, 1.0] {
        let ch = NoiseChannel::depolarizing(one, p)?;
        let hadamard = UnitaryOperator::new(one, gates::hadamard())?;
        let report = w1_error_rate(&hadamard, &ch, &opts)?;
        rows.push(row(
            format!("e(U, depolarizing p={p})"),
            "p/2",
            p / 2.0,
            report.exact.unwrap_or(f64::NAN),
            1e-3,
            "analytic",
            RowKind::Equality,
        ));
    }
    let dep01 = NoiseChannel::depolarizing(one, 0.1)?;
    rows.push(row(
        "average gate fidelity, depolarizing p=0.1",
        "1 - p/2 = 0.95",
        0.95,
        average_gate_fidelity_reference(&dep01).unwrap_or(f64::NAN),
        1e-12,
        "reference",
        RowKind::Equality,
    ));
    for theta in [0.3, 1.0] {
        let mut e = CMatrix::zeros(2, 2);
        e[(0, 0)] = C64::from_polar(1.0, theta);
        e[(1, 1)] = C64::from_polar(1.0, -theta);
        let ch = NoiseChannel::Unitary {
            register: one,
            matrix: e.clone(),
        };
        let hadamard = UnitaryOperator::new(one, gates::hadamard())?;
        let report = w1_error_rate(&hadamard, &ch, &opts)?;
        rows.push(row(
            format!("e(U, unitary noise theta={theta})"),
            "|sin theta| (arc closed form)",
            theta.sin().abs(),
            report.exact.unwrap_or(f64::NAN),
            1e-9,
            "single-qudit-arc",
            RowKind::Equality,
        ));
        let fid = NoiseChannel::Unitary {
            register: one,
            matrix: e,
        };
        rows.push(row(
            format!("average gate fidelity, unitary theta={theta}"),
            "1/3 + (2/3)cos^2(theta)",
            1.0 / 3.0 + 2.0 / 3.0 * theta.cos().powi(2),
            average_gate_fidelity_reference(&fid).unwrap_or(f64::NAN),
            1e-12,
            "reference",
            RowKind::Equality,
        ));
    }
    // the quoted sqrt(1 − cos 2θ) exceeds the closed form by √2 and leaves
    // [0,1] near θ = π/2; recorded, not asserted
    let theta_flag: f64 = PI / 3.0;
    rows.push(row(
        format!("quoted unitary-noise rate at theta={theta_flag:.4}"),
        "sqrt(1 - cos 2 theta) (discrepant)",
        (1.0 - (2.0 * theta_flag).cos()).sqrt(),
        theta_flag.sin().abs(),
        0.0,
        "flagged-discrepancy",
        RowKind::Flagged,
    ));

    // --- CNOT error rates ---
    let cnot = UnitaryOperator::new(two, gates::cnot())?;
    for theta in [FRAC_PI_4, FRAC_PI_2, PI] {
        let cp = UnitaryOperator::new(two, gates::controlled_phase(theta, 4)?)?;
        let ch = NoiseChannel::unitary(&cp);
        let report = w1_error_rate(&cnot, &ch, &opts)?;
        let e = report.exact.unwrap_or(f64::NAN);
        rows.push(row(
            format!("e(CNOT, V_uni) at theta={theta:.4}"),
            "sin(theta/2)/sqrt(2)",
            (theta / 2.0).sin() / SQRT_2,
            e,
            1e-2,
            "analytic-catalog",
            RowKind::Equality,
        ));
        if (theta - FRAC_PI_2).abs() < 1e-12 {
            let costs = cost_lower_bounds(e, 2);
            rows.push(row(
                "circuit cost bound at theta=pi/2",
                "8 sin(theta/2)",
                8.0 * (theta / 2.0).sin(),
                costs.circuit_cost_lb,
                1e-9,
                "analytic",
                RowKind::Equality,
            ));
            rows.push(row(
                "experiment cost bound at theta=pi/2",
                "sin(theta/2)/sqrt(2)",
                (theta / 2.0).sin() / SQRT_2,
                costs.experiment_cost_lb,
                1e-9,
                "analytic",
                RowKind::Equality,
            ));
        }
    }
    for p in [0.2, 0.6] {
        let ch = NoiseChannel::depolarizing(two, p)?;
        let report = w1_error_rate(&cnot, &ch, &opts)?;
        rows.push(row(
            format!("dep bracket low at p={p}"),
            "3p/8",
            3.0 * p / 8.0,
            report.bracket.0,
            1e-12,
            "analytic",
            RowKind::Equality,
        ));
        rows.push(row(
            format!("dep bracket high at p={p}"),
            "3p/4",
            3.0 * p / 4.0,
            report.bracket.1,
            1e-12,
            "analytic",
            RowKind::Equality,
        ));
        let point = report.point_estimate.unwrap_or(f64::NAN);
        rows.push(row(
            format!("e(CNOT, dep) point >= 3p/8 at p={p}"),
            "3p/8",
            3.0 * p / 8.0,
            point,
            1e-9,
            "numeric-ascent",
            RowKind::AtLeast,
        ));
        rows.push(row(
            format!("e(CNOT, dep) point <= 3p/4 at p={p}"),
            "3p/4",
            3.0 * p / 4.0,
            point,
            1e-9,
            "numeric-ascent",
            RowKind::AtMost,
        ));
    }

    // --- averaged recovery-cost bounds for the sixteen-term Weyl channel ---
    let p_avg = 0.2;
    let x4 = gates::qudit_shift(4);
    let z4 = gates::qudit_clock(4);
    let mut cost_c = 0.0;
    let mut cost_r = 0.0;
    for s in 0..4u32 {
        for t in 0..4u32 {
            if s == 0 && t == 0 {
                continue;
            }
            let mut kraus = CMatrix::identity(4, 4);
            for _ in 0..s {
                kraus = &x4 * kraus;
            }
            for _ in 0..t {
                kraus *= &z4;
            }
            let conj = UnitaryOperator::new(two, gates::cnot() * kraus * gates::cnot())?;
            let d = d_unitary(&eye2, &conj, &opts)?.value;
            cost_c += p_avg / 16.0 * 4.0 * SQRT_2 * d;
            cost_r += p_avg / 16.0 * 0.5 * d;
        }
    }
    rows.push(row(
        format!("averaged circuit cost bound at p={p_avg}"),
        "3 sqrt(2) p",
        3.0 * SQRT_2 * p_avg,
        cost_c,
        1e-2,
        "numeric-ascent",
        RowKind::AtLeast,
    ));
    rows.push(row(
        format!("averaged experiment cost bound at p={p_avg}"),
        "3p/8",
        3.0 * p_avg / 8.0,
        cost_r,
        1e-3,
        "numeric-ascent",
        RowKind::AtLeast,
    ));

    // --- witness construction ---
    let special = [
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.0),
        C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        C64::new(0.5, 0.0),
    ];
    let w = witness_controlled_phase(PI, &special)?;
    rows.push(row(
        "witness bound c1+c2 at the equality state, theta=pi",
        "sqrt(2)",
        SQRT_2,
        w.bound(),
        1e-9,
        "witness",
        RowKind::Equality,
    ));

    let mut max_sum_dev: f64 = 0.0;
    let mut max_resid: f64 = 0.0;
    let mut max_gap: f64 = 0.0;
    let mut rng = crate::random::rng_from_seed(seed.wrapping_add(0xA11CE));
    let solver = SolverOptions::default();
    for _ in 0..30 {
        use rand::Rng;
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut amps = [C64::new(0.0, 0.0); 4];
        loop {
            for a in amps.iter_mut() {
                *a = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-3 {
                for a in amps.iter_mut() {
                    *a /= C64::new(norm, 0.0);
                }
                break;
            }
        }
        let w = witness_controlled_phase(theta, &amps)?;
        let x = controlled_phase_difference(theta, &amps)?;
        max_resid = max_resid
            .max(crate::cmatrix::max_abs(&(w.reconstruction().matrix() - x.matrix())));
        if w.branch != WitnessBranch::DegenerateZero {
            max_sum_dev = max_sum_dev.max((w.bound() - SQRT_2 * (theta / 2.0).sin()).abs());
        }
        let cert = w1_norm(&x, &solver)?;
        max_gap = max_gap.max(cert.value - w.bound());
    }
    rows.push(row(
        "witness sum deviation, max over 30 draws",
        "0",
        0.0,
        max_sum_dev,
        1e-9,
        "witness",
        RowKind::Equality,
    ));
    rows.push(row(
        "witness reconstruction residual, max over 30 draws",
        "0",
        0.0,
        max_resid,
        1e-9,
        "witness",
        RowKind::AtMost,
    ));
    rows.push(row(
        "solver value minus witness bound, max over 30 draws",
        "<= 0",
        0.0,
        max_gap,
        1e-4,
        "splitting-solver",
        RowKind::AtMost,
    ));

    // --- Hamming recovery spot checks ---
    let three = QuditRegister::qubits(3)?;
    let delta = |at: usize| -> Vec<f64> {
        let mut v = vec![0.0; 8];
        v[at] = 1.0;
        v
    };
    let got = crate::w1::transport::classical_w1_hamming(&three, &delta(0b010), &delta(0b101))?;
    rows.push(row(
        "classical W1(delta_010, delta_101)",
        "h = 3",
        3.0,
        got,
        1e-9,
        "transport-lp",
        RowKind::Equality,
    ));
    let pair = {
        let mut a = CMatrix::zeros(4, 4);
        a[(1, 1)] = crate::cmatrix::cr(1.0);
        a[(2, 2)] = crate::cmatrix::cr(-1.0);
        crate::operator::HermitianOperator::new(two, a)?
    };
    let cert = w1_norm(&pair, &solver)?;
    rows.push(row(
        "solver ||(|01><01| - |10><10|)||_W1",
        "2",
        2.0,
        cert.value,
        1e-4,
        "splitting-solver",
        RowKind::Equality,
    ));

    let passed = rows.iter().all(|r| r.passed);
    Ok(PaperReport {
        rows,
        passed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

impl PaperReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,paper_value,reference,computed,abs_diff,tolerance,method,status\n");
        for r in &self.rows {
            let status = match (r.kind, r.passed) {
                (RowKind::Flagged, _) => "flagged",
                (_, true) => "pass",
                (_, false) => "FAIL",
            };
            out.push_str(&format!(
                "\"{}\",\"{}\",{:.12},{:.12},{:.3e},{:.1e},{},{}\n",
                r.quantity.replace('"', "'"),
                r.paper_value.replace('"', "'"),
                r.reference,
                r.computed,
                r.abs_diff,
                r.tolerance,
                r.method,
                status
            ));
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        let width = self
            .rows
            .iter()
            .map(|r| r.quantity.len())
            .max()
            .unwrap_or(20)
            .max(20);
        out.push_str(&format!(
            "{:<width$}  {:>14}  {:>14}  {:>9}  {:<7}\n",
            "quantity", "reference", "computed", "|diff|", "status"
        ));
        for r in &self.rows {
            let status = match (r.kind, r.passed) {
                (RowKind::Flagged, _) => "flagged",
                (_, true) => "pass",
                (_, false) => "FAIL",
            };
            out.push_str(&format!(
                "{:<width$}  {:>14.9} {:>15.9}  {:>9.2e}  {:<7}\n",
                r.quantity, r.reference, r.computed, r.abs_diff, status
            ));
        }
        out.push_str(&format!(
            "\n{} rows, {} passed, {:.1}s\n",
            self.rows.len(),
            self.rows.iter().filter(|r| r.passed).count(),
            self.elapsed_seconds
        ));
        out
    }
}
