//! Dense linear algebra over qudit registers: partial traces, tensor
//! products, Hermitian eigendecomposition, norms.

use nalgebra::DVector;

use crate::cmatrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;


/// Stride of 1-based `site` in a register: site 1 is the most significant
/// digit, so its stride is d^(n-1).
fn stride(n: usize, d: usize, site: usize) -> usize {
    d.pow((n - site) as u32)
}

/// Splits every full index into (kept digits, traced digits), each packed
/// into its own little register ordered as in the original.
fn index_split(n: usize, d: usize, traced: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let dim = d.pow(n as u32);
    let mut is_traced = vec![false; n + 1];
    for &s in traced {
        is_traced[s] = true;
    }
    let mut keep_of = vec![0usize; dim];
    let mut trace_of = vec![0usize; dim];
    for idx in 0..dim {
        let (mut k, mut t) = (0usize, 0usize);
        for (site, &traced_site) in is_traced.iter().enumerate().skip(1) {
            let digit = (idx / stride(n, d, site)) % d;
            if traced_site {
                t = t * d + digit;
            } else {
                k = k * d + digit;
            }
        }
        keep_of[idx] = k;
        trace_of[idx] = t;
    }
    (keep_of, trace_of)
}

/// Partial trace over the given 1-based sites at the raw matrix level.
pub(crate) fn partial_trace_matrix(
    m: &CMatrix,
    n: usize,
    d: usize,
    traced: &[usize],
) -> CMatrix {
    let keep_dim = d.pow((n - traced.len()) as u32);
    let (keep_of, trace_of) = index_split(n, d, traced);
    let dim = m.nrows();
    let mut out = CMatrix::zeros(keep_dim, keep_dim);
    for i in 0..dim {
        for j in 0..dim {
            if trace_of[i] == trace_of[j] {
                out[(keep_of[i], keep_of[j])] += m[(i, j)];
            }
        }
    }
    out
}

/// Partial trace over the i-th subsystem(s).
///
/// `sites` are 1-based, site 1 being the leftmost (most significant) tensor
/// factor. The result lives on the complementary register, preserves the
/// trace and is linear in the input.
pub fn partial_trace(a: &HermitianOperator, sites: &[usize]) -> Result<HermitianOperator> {
    let reg = a.register();
    reg.check_sites(sites)?;
    let out_reg = reg.drop_sites(sites.len())?;
    let m = partial_trace_matrix(a.matrix(), reg.num_qudits(), reg.local_dim(), sites);
    HermitianOperator::new(out_reg, m)
}

/// Reduction of a raw matrix to a single site: trace out every other site.
pub(crate) fn reduce_to_site_matrix(m: &CMatrix, n: usize, d: usize, site: usize) -> CMatrix {
    if n == 1 {
        return m.clone();
    }
    let others: Vec<usize> = (1..=n).filter(|&s| s != site).collect();
    partial_trace_matrix(m, n, d, &others)
}

/// Kronecker product of two operators; registers concatenate, so the first
/// operand occupies the leftmost (most significant) sites.
pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    let reg = a.register().concat(&b.register())?;
    HermitianOperator::new(reg, a.matrix().kronecker(b.matrix()))
}

/// Eigendecomposition of a raw Hermitian matrix: eigenvalues ascending,
/// eigenvector columns matching.
pub(crate) fn hermitian_eig_matrix(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m
        .clone()
        .try_symmetric_eigen(1e-14, 50_000)
        .unwrap_or_else(|| m.clone().symmetric_eigen());
    let dim = m.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigendecomposition A = VΛV† with eigenvalues sorted ascending.
pub fn hermitian_eig(a: &HermitianOperator) -> (DVector<f64>, CMatrix) {
    let (vals, vecs) = hermitian_eig_matrix(a.matrix());
    (DVector::from_vec(vals), vecs)
}

/// Trace norm of a raw Hermitian matrix: the sum of |eigenvalues|.
pub(crate) fn trace_norm_matrix(m: &CMatrix) -> f64 {
    debug_assert_eq!(m.nrows(), m.ncols());
    match m.nrows() {
        1 => m[(0, 0)].re.abs(),
        // Closed form for 2x2 Hermitian: eigenvalues t/2 ± sqrt(t²/4 − det).
        2 => {
            let t = (m[(0, 0)].re + m[(1, 1)].re) * 0.5;
            let det = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr();
            let disc = (t * t - det).max(0.0).sqrt();
            (t + disc).abs() + (t - disc).abs()
        }
        _ => hermitian_eig_matrix(m).0.iter().map(|v| v.abs()).sum(),
    }
}

/// Schatten 1-norm of a Hermitian operator.
pub fn trace_norm(a: &HermitianOperator) -> f64 {
    trace_norm_matrix(a.matrix())
}

/// Largest eigenvalue of a Hermitian operator.
pub fn max_eigenvalue(a: &HermitianOperator) -> f64 {
    let (vals, _) = hermitian_eig_matrix(a.matrix());
    *vals.last().expect("nonempty spectrum")
}

/// Inverse square root of a positive definite operator.
pub(crate) fn psd_inv_sqrt_matrix(m: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eig_matrix(m);
    let dim = m.nrows();
    let mut lam = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        if vals[i] <= 1e-12 {
            return Err(Error::Numeric {
                message: format!("matrix is singular (eigenvalue {:.3e})", vals[i]),
                iterations: 0,
            });
        }
        lam[(i, i)] = C64::new(1.0 / vals[i].sqrt(), 0.0);
    }
    Ok(&vecs * lam * vecs.adjoint())
}

/// Trace of a product of two raw matrices without forming the product.
pub(crate) fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Re Tr(AB), the Hilbert-Schmidt pairing of two operators.
pub fn trace_of_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    trace_of_product(a, b).re
}

/// Inverse square root of a positive definite operator.
pub fn psd_inv_sqrt(a: &HermitianOperator) -> Result<HermitianOperator> {
    let m = psd_inv_sqrt_matrix(a.matrix())?;
    HermitianOperator::new(a.register(), m)
}
