//! Acceptance gate: one test per criterion, each printing a pass line with
//! its measured slack. Tolerances are pinned here and nowhere else.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use qw1::budget::{example_scenario, povm_bound, tolerance_budget};
use qw1::cmatrix::{projector, CMatrix, C64};
use qw1::noise::{w1_error_rate, NoiseChannel};
use qw1::operator::{DensityMatrix, HermitianOperator, UnitaryOperator};
use qw1::random::{haar_random_unitary, haar_state_vector, rng_from_seed};
use qw1::register::QuditRegister;
use qw1::unitary::{catalog_distance, gates, property_suite, AscentOptions, GateId};
use qw1::w1::transport::{classical_w1_hamming, hamming_distance};
use qw1::w1::witness::{controlled_phase_difference, witness_controlled_phase, WitnessBranch};
use qw1::w1::{marginal_lower_bound, sandwich_bounds, w1_norm, SolverOptions};

fn report(criterion: u32, name: &str, detail: String) {
    println!("criterion {criterion:>2} PASS [{name}]: {detail}");
}

fn random_traceless(reg: QuditRegister, seed: u64) -> HermitianOperator {
    let mut rng = rng_from_seed(seed);
    let dim = reg.dim();
    let m = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let mut h = qw1::cmatrix::hermitian_part(&m);
    let tr = qw1::cmatrix::trace(&h) / C64::new(dim as f64, 0.0);
    for i in 0..dim {
        h[(i, i)] -= tr;
    }
    HermitianOperator::new(reg, h).unwrap()
}

fn random_distribution(dim: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

#[test]
fn criterion_01_catalog_exactness() {
    let start = Instant::now();
    let tol = 1e-12;
    let mut checked = 0usize;

    for k in 1..=4u8 {
        for i in 0..20 {
            let theta = TAU * (i as f64 + 0.5) / 20.0;
            let d = catalog_distance(&GateId::ControlledPhase { theta, k }).unwrap();
            assert!(
                (d.value - SQRT_2 * (theta / 2.0).sin()).abs() <= tol,
                "CP(k={k}, theta={theta})"
            );
            checked += 1;
        }
    }
    for (gate, expect) in [
        (GateId::Cnot, SQRT_2),
        (GateId::Cz, SQRT_2),
        (GateId::Swap, 2.0),
    ] {
        assert!((catalog_distance(&gate).unwrap().value - expect).abs() <= tol);
        checked += 1;
    }
    // the order-4 permutation table, expectations stated gate by gate
    let expected = |sigma: &[usize; 4]| -> f64 {
        match sigma {
            [0, 1, 2, 3] => 0.0,
            [1, 0, 3, 2] | [2, 3, 0, 1] => 1.0,
            [0, 1, 3, 2] | [1, 0, 2, 3] | [0, 3, 2, 1] | [2, 1, 0, 3] => SQRT_2,
            _ => 2.0,
        }
    };
    for index in 1..=24u8 {
        let sigma = gates::perm4_sigma(index).unwrap();
        let d = catalog_distance(&GateId::Permutation4(index)).unwrap();
        assert!(
            (d.value - expected(&sigma)).abs() <= tol,
            "permutation {index}"
        );
        checked += 1;
    }
    for (k, n) in [(1usize, 1usize), (1, 4), (2, 2), (2, 5), (3, 3), (6, 6)] {
        let d = catalog_distance(&GateId::TensorPauliX { k, n }).unwrap();
        assert!((d.value - k as f64).abs() <= tol, "XK(k={k}, n={n})");
        checked += 1;
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "catalog took {elapsed:.2}s, budget 1s");
    report(
        1,
        "analytic catalog exactness",
        format!("{checked} closed-form values exact to 1e-12 in {elapsed:.3}s"),
    );
}

#[test]
fn criterion_02_numeric_matches_analytic() {
    let start = Instant::now();
    let two = QuditRegister::qubits(2).unwrap();
    let opts = AscentOptions::default().with_seed(0).with_restarts(32);
    let cases: Vec<(&str, CMatrix, f64)> = vec![
        ("CNOT", gates::cnot(), SQRT_2),
        ("CZ", gates::cz(), SQRT_2),
        ("SWAP", gates::swap(), 2.0),
        (
            "U_pi^(3)",
            gates::controlled_phase(PI, 3).unwrap(),
            SQRT_2,
        ),
        ("I⊗X", gates::tensor_shift(1, 2, 2).unwrap(), 1.0),
        ("X⊗X", gates::tensor_shift(2, 2, 2).unwrap(), 2.0),
    ];
    let eye = UnitaryOperator::identity(two);
    let mut worst: f64 = 0.0;
    for (name, m, expect) in cases {
        // take the ascent path so the optimizer itself is exercised end to
        // end instead of the exact matcher
        let v = UnitaryOperator::new(two, m).unwrap();
        let d = qw1::unitary::d_unitary_numeric(&eye, &v, &opts).unwrap();
        let diff = (d.value - expect).abs();
        assert!(diff <= 1e-2, "{name}: numeric {} vs {expect}", d.value);
        worst = worst.max(diff);
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "numeric suite took {elapsed:.1}s, budget 300s");
    report(
        2,
        "numeric ascent vs analytic",
        format!("6 gates within 1e-2 (worst |diff| {worst:.2e}) in {elapsed:.1}s"),
    );
}

#[test]
fn criterion_03_hamming_recovery() {
    let three = QuditRegister::qubits(3).unwrap();
    for x in 0..8usize {
        for y in 0..8usize {
            let mut p = vec![0.0; 8];
            let mut q = vec![0.0; 8];
            p[x] = 1.0;
            q[y] = 1.0;
            let got = classical_w1_hamming(&three, &p, &q).unwrap();
            let expect = hamming_distance(&three, x, y) as f64;
            assert!(
                (got - expect).abs() <= 1e-9,
                "delta pair ({x},{y}): {got} vs {expect}"
            );
        }
    }

    let two = QuditRegister::qubits(2).unwrap();
    let solver = SolverOptions::default();
    let mut rng = rng_from_seed(30);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = random_distribution(4, &mut rng);
        let q = random_distribution(4, &mut rng);
        let lp = classical_w1_hamming(&two, &p, &q).unwrap();
        let mut diag = CMatrix::zeros(4, 4);
        for i in 0..4 {
            diag[(i, i)] = C64::new(p[i] - q[i], 0.0);
        }
        let x = HermitianOperator::new(two, diag).unwrap();
        let cert = w1_norm(&x, &solver).unwrap();
        let diff = (cert.value - lp).abs();
        assert!(diff <= 1e-4, "diagonal pair: solver {} vs lp {lp}", cert.value);
        worst = worst.max(diff);
    }
    report(
        3,
        "Hamming recovery",
        format!("64 delta pairs exact; 50 diagonal pairs within 1e-4 (worst {worst:.2e})"),
    );
}

#[test]
fn criterion_04_sandwich_and_marginal_bounds() {
    let solver = SolverOptions::default();
    let cases: Vec<(usize, u64)> = (0..200)
        .map(|i| ((i % 3) + 1, 4000 + i as u64))
        .collect();
    let worst = cases
        .par_iter()
        .map(|&(n, seed)| {
            let reg = QuditRegister::qubits(n).unwrap();
            let x = random_traceless(reg, seed);
            let cert = w1_norm(&x, &solver).unwrap();
            let (low_tn, high) = sandwich_bounds(&x);
            // marginal bound through the state-pair API: split X across a
            // maximally mixed background, scaled to keep both halves PSD
            let scale = reg.dim() as f64 * qw1::linalg::trace_norm(&x).max(1.0);
            let shift = x.matrix().scale(0.5 / scale);
            let mixed = qw1::cmatrix::maximally_mixed(reg.dim());
            let rho = DensityMatrix::new(reg, &mixed + &shift).unwrap();
            let sigma = DensityMatrix::new(reg, &mixed - &shift).unwrap();
            let marg = marginal_lower_bound(&rho, &sigma).unwrap() * scale;
            let low = low_tn.max(marg);
            assert!(
                cert.value >= low - 1e-6,
                "n={n} seed={seed}: value {} below {low}",
                cert.value
            );
            assert!(
                cert.value <= high + 1e-6,
                "n={n} seed={seed}: value {} above {high}",
                cert.value
            );
            (cert.value - low).min(high - cert.value)
        })
        .reduce(|| f64::INFINITY, f64::min);
    report(
        4,
        "sandwich and marginal bounds",
        format!("200 random operators inside the bracket (tightest margin {worst:.2e})"),
    );
}

#[test]
fn criterion_05_property_suite() {
    let start = Instant::now();
    let results: Vec<(usize, bool, String)> = (0..50usize)
        .into_par_iter()
        .map(|i| {
            let n = if i % 2 == 0 { 1 } else { 2 };
            let reg = QuditRegister::qubits(n).unwrap();
            let base = 9000 + 10 * i as u64;
            let u = haar_random_unitary(reg, base).unwrap();
            let v = haar_random_unitary(reg, base + 1).unwrap();
            let m = haar_random_unitary(reg, base + 2).unwrap();
            let opts = AscentOptions::fast(base + 3);
            let rep = property_suite(&u, &v, &m, &opts).unwrap();
            let failures: Vec<String> = rep
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{} ({:.4} vs {:.4})", c.name, c.lhs, c.rhs))
                .collect();
            (i, rep.passed, failures.join("; "))
        })
        .collect();
    for (i, passed, failures) in &results {
        assert!(*passed, "instance {i}: {failures}");
    }
    report(
        5,
        "distance property suite",
        format!(
            "properties 1-10 on 50 instances at slack 2e-2 in {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_06_povm_probability_bound() {
    let two = QuditRegister::qubits(2).unwrap();
    let cnot = gates::cnot();
    let d_cnot = SQRT_2;
    let trials = 1000usize;
    let violations: usize = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(15_000 + i as u64);
            let psi = haar_state_vector(4, &mut rng);
            // random 3-element POVM via the symmetrized construction
            let raw: Vec<CMatrix> = (0..3)
                .map(|_| {
                    let g = CMatrix::from_fn(4, 4, |_, _| {
                        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    &g * g.adjoint()
                })
                .collect();
            let total: CMatrix = raw.iter().fold(CMatrix::zeros(4, 4), |acc, m| acc + m);
            let inv_sqrt = qw1::linalg::psd_inv_sqrt(&HermitianOperator::new(two, total).unwrap())
                .unwrap();
            let ideal = projector(&psi);
            let moved = &cnot * &ideal * cnot.adjoint();
            let mut bad = 0usize;
            for r in raw {
                let m = inv_sqrt.matrix() * r * inv_sqrt.matrix();
                let element = HermitianOperator::new(two, m).unwrap();
                let p_u = qw1::linalg::trace_of_product_re(element.matrix(), &ideal);
                let p_v = qw1::linalg::trace_of_product_re(element.matrix(), &moved);
                let bound = povm_bound(&element, d_cnot).unwrap();
                if (p_u - p_v).abs() > bound {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    assert_eq!(violations, 0, "{violations} POVM bound violations");
    report(
        6,
        "POVM probability bound",
        format!("{trials} random (state, POVM) trials with zero violations"),
    );
}

#[test]
fn criterion_07_tolerance_scenario() {
    let povm = qw1::budget::example_povm();
    let g = tolerance_budget(0.3, 5, &povm).unwrap();
    assert!((g - 0.12).abs() <= 1e-12, "threshold {g}");
    let scenario = example_scenario(0.1, 0.3, 5).unwrap();
    assert!((scenario.admissible_ranges[0].1 - 0.12f64.asin()).abs() <= 1e-9);
    assert!((scenario.admissible_ranges[1].0 - (PI - 0.12f64.asin())).abs() <= 1e-9);
    assert!(scenario.admissible);
    assert!(!example_scenario(FRAC_PI_2, 0.3, 5).unwrap().admissible);
    report(
        7,
        "worked tolerance scenario",
        format!("G = {g:.12} and arcsin endpoints within 1e-9"),
    );
}

#[test]
fn criterion_08_single_qubit_error_rates() {
    let one = QuditRegister::qubits(1).unwrap();
    let u = haar_random_unitary(one, 77).unwrap();
    let opts = AscentOptions::fast(0);
    for p in [0.1, 0.5, 1.0] {
        let ch = NoiseChannel::depolarizing(one, p).unwrap();
        let rate = w1_error_rate(&u, &ch, &opts).unwrap().exact.unwrap();
        assert!((rate - p / 2.0).abs() <= 1e-3, "p={p}: rate {rate}");
    }
    for theta in [0.2, 0.9, FRAC_PI_2, 2.4] {
        let mut e = CMatrix::zeros(2, 2);
        e[(0, 0)] = C64::from_polar(1.0, theta);
        e[(1, 1)] = C64::from_polar(1.0, -theta);
        let ch = NoiseChannel::Unitary {
            register: one,
            matrix: e,
        };
        let rate = w1_error_rate(&u, &ch, &opts).unwrap().exact.unwrap();
        let closed_form = theta.sin().abs();
        assert!(
            (rate - closed_form).abs() <= 1e-9,
            "theta={theta}: rate {rate} vs |sin| {closed_form}"
        );
        // the quoted sqrt(1 − cos 2θ) disagrees by √2; record, never assert
        let quoted = (1.0 - (2.0 * theta).cos()).sqrt();
        assert!((quoted - SQRT_2 * closed_form).abs() <= 1e-9);
    }
    report(
        8,
        "single-qubit error rates",
        "depolarizing p/2 within 1e-3; coherent |sin theta| within 1e-9 (quoted form flagged)"
            .to_string(),
    );
}

#[test]
fn criterion_09_cnot_error_rates() {
    let two = QuditRegister::qubits(2).unwrap();
    let cnot = UnitaryOperator::new(two, gates::cnot()).unwrap();
    let opts = AscentOptions::default().with_seed(0);
    for theta in [FRAC_PI_4, FRAC_PI_2, PI] {
        let cp = UnitaryOperator::new(two, gates::controlled_phase(theta, 4).unwrap()).unwrap();
        let report_ = w1_error_rate(&cnot, &NoiseChannel::unitary(&cp), &opts).unwrap();
        let e = report_.exact.unwrap();
        let expect = (theta / 2.0).sin() / SQRT_2;
        assert!((e - expect).abs() <= 1e-2, "theta={theta}: {e} vs {expect}");

        // cost bounds are exact functions of the rate: 4√2·n·e and (n/2)·e,
        // which for e = sin(θ/2)/√2 are the worked values 8·sin(θ/2) and
        // sin(θ/2)/√2
        let costs = qw1::noise::cost_lower_bounds(e, 2);
        assert!((costs.circuit_cost_lb - 4.0 * SQRT_2 * 2.0 * e).abs() <= 1e-12);
        assert!((costs.experiment_cost_lb - e).abs() <= 1e-12);
        assert!((costs.circuit_cost_lb - 8.0 * (theta / 2.0).sin()).abs() <= 1e-1);
        assert!((costs.experiment_cost_lb - (theta / 2.0).sin() / SQRT_2).abs() <= 1e-2);
    }
    for p in [0.2, 0.6] {
        let ch = NoiseChannel::depolarizing(two, p).unwrap();
        let report_ = w1_error_rate(&cnot, &ch, &opts).unwrap();
        let point = report_.point_estimate.unwrap();
        assert!(
            point >= 3.0 * p / 8.0 - 1e-9 && point <= 3.0 * p / 4.0 + 1e-9,
            "p={p}: point {point} escapes [3p/8, 3p/4]"
        );
    }
    report(
        9,
        "CNOT error rates",
        "coherent rate sin(theta/2)/sqrt(2) within 1e-2, costs exact, depolarizing points in bracket"
            .to_string(),
    );
}

#[test]
fn criterion_10_witness_construction() {
    let solver = SolverOptions::default();
    let results: Vec<(f64, f64, f64)> = (0..100usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(21_000 + i as u64);
            let theta = rng.gen_range(0.0..TAU);
            // every fifth draw exercises the antidiagonal branch
            let amps: [C64; 4] = if i % 5 == 4 {
                let w = rng.gen_range(0.05..0.95_f64);
                [
                    C64::new(0.0, 0.0),
                    C64::from_polar(w.sqrt(), rng.gen_range(0.0..TAU)),
                    C64::from_polar((1.0 - w).sqrt(), rng.gen_range(0.0..TAU)),
                    C64::new(0.0, 0.0),
                ]
            } else {
                let mut a = [C64::new(0.0, 0.0); 4];
                loop {
                    for slot in a.iter_mut() {
                        *slot = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    }
                    let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if norm > 1e-3 {
                        for slot in a.iter_mut() {
                            *slot /= C64::new(norm, 0.0);
                        }
                        break;
                    }
                }
                a
            };
            let w = witness_controlled_phase(theta, &amps).unwrap();
            let x = controlled_phase_difference(theta, &amps).unwrap();
            let residual =
                qw1::cmatrix::max_abs(&(w.reconstruction().matrix() - x.matrix()));
            let sum_dev = if w.branch == WitnessBranch::DegenerateZero {
                0.0
            } else {
                (w.bound() - SQRT_2 * (theta / 2.0).sin()).abs()
            };
            let solver_gap = w1_norm(&x, &solver).unwrap().value - w.bound();
            (residual, sum_dev, solver_gap)
        })
        .collect();
    let mut worst_resid: f64 = 0.0;
    let mut worst_dev: f64 = 0.0;
    let mut worst_gap: f64 = f64::NEG_INFINITY;
    for (residual, sum_dev, solver_gap) in results {
        assert!(residual <= 1e-9, "reconstruction residual {residual:.3e}");
        assert!(sum_dev <= 1e-9, "bound deviation {sum_dev:.3e}");
        assert!(solver_gap <= 1e-4, "solver exceeds witness bound by {solver_gap:.3e}");
        worst_resid = worst_resid.max(residual);
        worst_dev = worst_dev.max(sum_dev);
        worst_gap = worst_gap.max(solver_gap);
    }
    report(
        10,
        "witness construction",
        format!(
            "100 draws: residual <= {worst_resid:.1e}, bound deviation <= {worst_dev:.1e}, solver-bound gap <= {worst_gap:.1e}"
        ),
    );
}

#[test]
fn criterion_11_reproduce_paper() {
    let start = Instant::now();
    let report_ = qw1::report::reproduce_paper(0, 32).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let failures: Vec<&str> = report_
        .rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.quantity.as_str())
        .collect();
    assert!(failures.is_empty(), "failing rows: {failures:?}");
    assert!(elapsed < 600.0, "reproduction took {elapsed:.1}s, budget 600s");
    report(
        11,
        "paper reproduction",
        format!("{} rows pass in {elapsed:.1}s", report_.rows.len()),
    );
}
