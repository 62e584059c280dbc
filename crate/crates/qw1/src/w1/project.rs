//! Exact orthogonal projection onto the solver's affine constraint set
//! {Σ_i X^(i) = X, Tr_i X^(i) = 0}.
//!
//! Every Hermitian operator splits orthogonally into components indexed by
//! the set S of sites carrying an identity factor. The marginal constraint
//! kills the components of block i with i ∈ S, and the sum constraint acts
//! independently inside each component, where its projection is the usual
//! equal-share correction. Working per component therefore gives the exact
//! projection in closed form, with no inner iteration.

use crate::cmatrix::{CMatrix, C64};
use crate::linalg::partial_trace_matrix;

/// (I_d/d at `site`) ⊗ (partial trace of `m` over `site`); the orthogonal
/// projection of `m` onto operators that look like identity at `site`.
/// `site` is 0-based here.
pub(crate) fn identity_component_at(m: &CMatrix, n: usize, d: usize, site: usize) -> CMatrix {
    let traced = partial_trace_matrix(m, n, d, &[site + 1]);
    embed_identity_at(&traced, n, d, site)
}

/// Embeds an operator on n−1 sites back to n sites with I_d/d at `site`
/// (0-based).
pub(crate) fn embed_identity_at(small: &CMatrix, n: usize, d: usize, site: usize) -> CMatrix {
    let dim = d.pow(n as u32);
    let hi = d.pow(site as u32); // dims of sites left of `site`
    let lo = d.pow((n - site - 1) as u32); // dims of sites right of `site`
    let scale = C64::new(1.0 / d as f64, 0.0);
    let mut out = CMatrix::zeros(dim, dim);
    for rh in 0..hi {
        for rl in 0..lo {
            for ch in 0..hi {
                for cl in 0..lo {
                    let v = small[(rh * lo + rl, ch * lo + cl)] * scale;
                    if v.norm_sqr() == 0.0 {
                        continue;
                    }
                    for k in 0..d {
                        let row = (rh * d + k) * lo + rl;
                        let col = (ch * d + k) * lo + cl;
                        out[(row, col)] = v;
                    }
                }
            }
        }
    }
    out
}

/// Splits `m` into its 2^n identity-weight components. The entry at index
/// `mask` has an identity factor exactly at the sites whose bit is set
/// (bit k ↔ 0-based site k); the components are mutually orthogonal and sum
/// to `m`.
pub(crate) fn weight_components(m: &CMatrix, n: usize, d: usize) -> Vec<CMatrix> {
    let mut comps = vec![m.clone()];
    for site in 0..n {
        let processed = comps.len();
        let mut next = Vec::with_capacity(processed * 2);
        next.resize(processed * 2, CMatrix::zeros(0, 0));
        for (mask, c) in comps.into_iter().enumerate() {
            let with_id = identity_component_at(&c, n, d, site);
            next[mask] = &c - &with_id;
            next[mask | (1 << site)] = with_id;
        }
        comps = next;
    }
    comps
}

/// Projector onto the affine set for a fixed target X.
pub(crate) struct AffineProjector {
    n: usize,
    d: usize,
    x_comps: Vec<CMatrix>,
}

impl AffineProjector {
    pub(crate) fn new(x: &CMatrix, n: usize, d: usize) -> Self {
        AffineProjector {
            n,
            d,
            x_comps: weight_components(x, n, d),
        }
    }

    /// Exact nearest point of the constraint set in the block-stacked
    /// Frobenius geometry.
    pub(crate) fn project(&self, blocks: &[CMatrix]) -> Vec<CMatrix> {
        let n = self.n;
        debug_assert_eq!(blocks.len(), n);
        let dim = blocks[0].nrows();
        let comps: Vec<Vec<CMatrix>> = blocks
            .iter()
            .map(|b| weight_components(b, n, self.d))
            .collect();
        let mut out = vec![CMatrix::zeros(dim, dim); n];
        let full_mask = (1usize << n) - 1;
        for mask in 0..full_mask {
            let outside = n - (mask.count_ones() as usize);
            let mut excess = self.x_comps[mask].clone();
            for (j, comp_j) in comps.iter().enumerate() {
                if mask & (1 << j) == 0 {
                    excess -= &comp_j[mask];
                }
            }
            let share = excess.scale(1.0 / outside as f64);
            for (j, comp_j) in comps.iter().enumerate() {
                if mask & (1 << j) == 0 {
                    out[j] += &comp_j[mask];
                    out[j] += &share;
                }
            }
        }
        // The full-identity component of X is pure trace; the precondition
        // Tr X = 0 makes it vanish, and no feasible block may carry it.
        out
    }
}
