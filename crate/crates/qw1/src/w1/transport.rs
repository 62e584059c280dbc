//! Classical W1 distance on `[d]^n` with Hamming cost, solved exactly as a
//! transportation linear program.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::register::QuditRegister;

/// Number of differing base-d digits between two basis labels.
pub fn hamming_distance(register: &QuditRegister, x: usize, y: usize) -> usize {
    let (n, d) = (register.num_qudits(), register.local_dim());
    let (mut a, mut b) = (x, y);
    let mut count = 0;
    for _ in 0..n {
        if a % d != b % d {
            count += 1;
        }
        a /= d;
        b /= d;
    }
    count
}

fn check_distribution(register: &QuditRegister, p: &[f64], name: &str) -> Result<f64> {
    if p.len() != register.dim() {
        return Err(Error::arg(format!(
            "{name} has {} entries, expected {}",
            p.len(),
            register.dim()
        )));
    }
    let mut sum = 0.0;
    for (i, &v) in p.iter().enumerate() {
        if v < -1e-12 {
            return Err(Error::arg(format!("{name}[{i}] = {v} is negative")));
        }
        sum += v.max(0.0);
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::arg(format!("{name} sums to {sum}, expected 1")));
    }
    Ok(sum)
}

/// W1(p, q) with Hamming cost: the optimal transportation cost between two
/// probability vectors indexed by `[d]^n`.
///
/// The program min Σ γ_xy h(x,y) over couplings γ of (p, q) is solved with
/// a floating-point LP; desk-scale sizes (d^n ≤ 64) keep it exact to
/// rounding. Zero-mass rows and columns are dropped up front.
pub fn classical_w1_hamming(register: &QuditRegister, p: &[f64], q: &[f64]) -> Result<f64> {
    let sum_p = check_distribution(register, p, "p")?;
    let sum_q = check_distribution(register, q, "q")?;

    // Equality constraints need identical totals; renormalize q's 1e-9
    // slack onto p's scale.
    let rescale = sum_p / sum_q;

    let sources: Vec<usize> = (0..p.len()).filter(|&x| p[x] > 0.0).collect();
    let sinks: Vec<usize> = (0..q.len()).filter(|&y| q[y] > 0.0).collect();
    if sources.is_empty() || sinks.is_empty() {
        return Ok(0.0);
    }

    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let mut row_exprs = vec![LinearExpr::empty(); sources.len()];
    let mut col_exprs = vec![LinearExpr::empty(); sinks.len()];
    for (i, &x) in sources.iter().enumerate() {
        for (j, &y) in sinks.iter().enumerate() {
            let cost = hamming_distance(register, x, y) as f64;
            let var = problem.add_var(cost, (0.0, f64::INFINITY));
            row_exprs[i].add(var, 1.0);
            col_exprs[j].add(var, 1.0);
        }
    }
    for (i, expr) in row_exprs.into_iter().enumerate() {
        problem.add_constraint(expr, ComparisonOp::Eq, p[sources[i]].max(0.0));
    }
    for (j, expr) in col_exprs.into_iter().enumerate() {
        problem.add_constraint(expr, ComparisonOp::Eq, q[sinks[j]].max(0.0) * rescale);
    }

    let solution = problem.solve().map_err(|e| Error::Numeric {
        message: format!("transportation LP failed: {e}"),
        iterations: 0,
    })?;
    Ok(solution.objective().max(0.0))
}
