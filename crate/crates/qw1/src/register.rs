use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the Hilbert-space dimension: dense storage only.
pub const MAX_DIM: usize = 256;

/// Shape descriptor for a register of `n` qudits with local dimension `d`.
///
/// All operators in this crate carry a register; every operation respects
/// the factorization it fixes. Sites are numbered from 1 and site 1 is the
/// leftmost (most significant) tensor factor, matching the ket ordering
/// |m, n⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuditRegister {
    n: usize,
    d: usize,
}

impl QuditRegister {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::arg("register needs at least one qudit"));
        }
        if d < 2 {
            return Err(Error::arg("local dimension must be at least 2"));
        }
        let mut dim = 1usize;
        for _ in 0..n {
            dim = dim
                .checked_mul(d)
                .filter(|&x| x <= MAX_DIM)
                .ok_or_else(|| {
                    Error::arg(format!("dimension d^n = {d}^{n} exceeds the cap of {MAX_DIM}"))
                })?;
        }
        Ok(QuditRegister { n, d })
    }

    /// Convenience constructor for qubit registers.
    pub fn qubits(n: usize) -> Result<Self> {
        QuditRegister::new(n, 2)
    }

    /// Number of qudits.
    pub fn num_qudits(&self) -> usize {
        self.n
    }

    /// Local dimension of each qudit.
    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// Total Hilbert-space dimension d^n.
    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// Register obtained by appending `other` (same local dimension).
    pub fn concat(&self, other: &QuditRegister) -> Result<QuditRegister> {
        if self.d != other.d {
            return Err(Error::dim(format!(
                "cannot concatenate registers with local dimensions {} and {}",
                self.d, other.d
            )));
        }
        QuditRegister::new(self.n + other.n, self.d)
    }

    /// Register left after removing `count` sites.
    pub(crate) fn drop_sites(&self, count: usize) -> Result<QuditRegister> {
        if count >= self.n {
            return Err(Error::arg("cannot trace out every site of a register"));
        }
        QuditRegister::new(self.n - count, self.d)
    }

    /// Validates a set of 1-based site indices: nonempty, distinct, in range.
    pub(crate) fn check_sites(&self, sites: &[usize]) -> Result<()> {
        if sites.is_empty() {
            return Err(Error::arg("site list is empty"));
        }
        let mut seen = vec![false; self.n];
        for &s in sites {
            if s < 1 || s > self.n {
                return Err(Error::arg(format!(
                    "site index {s} out of range 1..={}",
                    self.n
                )));
            }
            if seen[s - 1] {
                return Err(Error::arg(format!("site index {s} repeated")));
            }
            seen[s - 1] = true;
        }
        Ok(())
    }
}

impl std::fmt::Display for QuditRegister {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} qudit(s) of dimension {}", self.n, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_is_power() {
        let r = QuditRegister::new(3, 2).unwrap();
        assert_eq!(r.dim(), 8);
        let r = QuditRegister::new(2, 3).unwrap();
        assert_eq!(r.dim(), 9);
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(QuditRegister::new(0, 2).is_err());
        assert!(QuditRegister::new(1, 1).is_err());
        assert!(QuditRegister::new(9, 2).is_err()); // 512 > 256
    }

    #[test]
    fn site_checks() {
        let r = QuditRegister::new(3, 2).unwrap();
        assert!(r.check_sites(&[1, 3]).is_ok());
        assert!(r.check_sites(&[]).is_err());
        assert!(r.check_sites(&[0]).is_err());
        assert!(r.check_sites(&[4]).is_err());
        assert!(r.check_sites(&[2, 2]).is_err());
    }
}
