//! Global parameters: an odd prime `p` and the number of wreath levels `n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime we accept; keeps every exponent in a byte.
const MAX_P: u32 = 251;

/// Validated pair `(p, n)` shared by every structure in the crate.
///
/// `p` is an odd prime and `n >= 1` is the number of wreath levels, so the
/// group under study is the Sylow p-subgroup of Sym(p^n). The pair is
/// validated once here; everything downstream can rely on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeParams {
    p: u32,
    n: u32,
}

fn is_prime(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeParams {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if n < 1 {
            return Err(Error::InvalidLevels);
        }
        if p > MAX_P {
            return Err(Error::ParamRange(format!("p={p} exceeds supported maximum {MAX_P}")));
        }
        if (p as u64).checked_pow(n).is_none() {
            return Err(Error::ParamRange(format!("p^n overflows for p={p}, n={n}")));
        }
        Ok(PrimeParams { p, n })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// p^e as a u64. Panics on overflow, which `new` has ruled out for e <= n.
    pub fn pow_p(&self, e: u32) -> u64 {
        (self.p as u64).pow(e)
    }

    /// Nilpotency class of the group: p^(n-1).
    pub fn class(&self) -> u64 {
        self.pow_p(self.n - 1)
    }

    /// Layer offset mu_k = p^(n-1) - p^(k-1) for 1 <= k <= n.
    pub fn mu(&self, k: u32) -> u64 {
        assert!(k >= 1 && k <= self.n, "layer {k} out of range 1..={}", self.n);
        self.class() - self.pow_p(k - 1)
    }

    /// Number of points the group permutes: p^n.
    pub fn point_count(&self) -> u64 {
        self.pow_p(self.n)
    }

    /// Size of the monomial basis: 1 + p + ... + p^(n-1).
    pub fn basis_size(&self) -> u64 {
        (0..self.n).map(|k| self.pow_p(k)).sum()
    }
}
