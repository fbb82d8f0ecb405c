//! Exact arithmetic in the truncated polynomial ring
//! F_p[x_1,...,x_m] / (x_1^p - x_1, ..., x_m^p - x_m).
//!
//! Elements of this ring are exactly the functions F_p^m -> F_p. Every layer
//! of a wreath element lives here, so this module carries the whole symbolic
//! side of the crate:
//!
//! - [`TruncPoly`]: sparse canonical form (no zero coefficients, every
//!   exponent at most p-1), term table ordered by the base-p digit value of
//!   the exponent vector so the leading term is O(1);
//! - [`TruncPoly::shift`]: the substitution x_i -> x_i + h, the operation
//!   behind conjugation between layers;
//! - [`TruncPoly::shift_taylor`]: the same map written as the Taylor sum
//!   `sum_j 1/j! d^j f/dx_i^j h^j`; the two routes must agree and tests hold
//!   them to that.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Coeff = u32;
pub type Exp = u8;

/// Arithmetic mod p on `Coeff` values. Small helpers used across the crate.
pub mod fp {
    use super::Coeff;

    pub fn add(p: u32, a: Coeff, b: Coeff) -> Coeff {
        (a + b) % p
    }

    pub fn sub(p: u32, a: Coeff, b: Coeff) -> Coeff {
        (a + p - b % p) % p
    }

    pub fn neg(p: u32, a: Coeff) -> Coeff {
        (p - a % p) % p
    }

    pub fn mul(p: u32, a: Coeff, b: Coeff) -> Coeff {
        ((a as u64 * b as u64) % p as u64) as Coeff
    }

    pub fn pow(p: u32, mut base: Coeff, mut e: u64) -> Coeff {
        let mut acc: Coeff = 1;
        base %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(p, acc, base);
            }
            base = mul(p, base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(p: u32, a: Coeff) -> Coeff {
        debug_assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
        pow(p, a, p as u64 - 2)
    }

    /// Inverse of j! mod p, defined for 0 <= j <= p-1.
    pub fn inv_factorial(p: u32, j: u32) -> Coeff {
        debug_assert!(j < p);
        let mut f: Coeff = 1;
        for i in 2..=j {
            f = mul(p, f, i);
        }
        inv(p, f)
    }
}

/// Reduce an exponent by x^p = x: 0 stays 0, otherwise land in 1..=p-1.
pub fn exp_reduce(p: u32, e: u64) -> Exp {
    if e == 0 {
        0
    } else {
        (((e - 1) % (p as u64 - 1)) + 1) as Exp
    }
}

/// Exponent vector (lambda_1, ..., lambda_m) of a power monomial.
///
/// Ordered by p-degree, i.e. by the base-p value lambda_m p^(m-1) + ... +
/// lambda_1, which is the comparison from the highest variable down. Term
/// tables keyed by `ExpVec` therefore iterate in increasing p-degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpVec(Vec<Exp>);

impl ExpVec {
    pub fn new(v: Vec<Exp>) -> Self {
        ExpVec(v)
    }

    pub fn zero(nvars: usize) -> Self {
        ExpVec(vec![0; nvars])
    }

    /// x_i as an exponent vector, `var` 1-based.
    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut v = vec![0; nvars];
        v[var - 1] = 1;
        ExpVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Exponent of x_i, `var` 1-based; 0 beyond the stored length.
    pub fn exponent(&self, var: usize) -> Exp {
        self.0.get(var - 1).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Exp> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Exp] {
        &self.0
    }

    /// Highest 1-based variable index with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e != 0).map(|i| i + 1)
    }

    /// Base-p digit value lambda_m p^(m-1) + ... + lambda_2 p + lambda_1.
    pub fn pdeg_value(&self, p: u32) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0u64, |acc, &e| acc * p as u64 + e as u64)
    }

    /// Total degree sum(lambda_i); the partition weight is `weight()`.
    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Partition weight sum(i * lambda_i).
    pub fn weight(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u64 + 1) * e as u64)
            .sum()
    }

    pub fn padded(&self, nvars: usize) -> ExpVec {
        let mut v = self.0.clone();
        v.resize(nvars.max(v.len()), 0);
        ExpVec(v)
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let len = self.0.len().max(other.0.len());
        for i in (0..len).rev() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors on `nvars` variables with entries below p, in
/// increasing p-degree order.
pub fn all_exponents(p: u32, nvars: usize) -> Vec<ExpVec> {
    let count = (p as u64).pow(nvars as u32);
    let mut out = Vec::with_capacity(count as usize);
    for value in 0..count {
        let mut v = Vec::with_capacity(nvars);
        let mut rest = value;
        for _ in 0..nvars {
            v.push((rest % p as u64) as Exp);
            rest /= p as u64;
        }
        out.push(ExpVec(v));
    }
    out
}

/// Element of F_p[x_1..x_m]/(x_i^p - x_i) in canonical sparse form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    p: u32,
    nvars: usize,
    terms: BTreeMap<ExpVec, Coeff>,
}

impl TruncPoly {
    pub fn zero(p: u32, nvars: usize) -> Self {
        TruncPoly { p, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(p: u32, nvars: usize, c: Coeff) -> Self {
        let mut poly = TruncPoly::zero(p, nvars);
        if !c.is_multiple_of(p) {
            poly.terms.insert(ExpVec::zero(nvars), c % p);
        }
        poly
    }

    pub fn one(p: u32, nvars: usize) -> Self {
        TruncPoly::constant(p, nvars, 1)
    }

    /// The variable x_i, `var` 1-based.
    pub fn var(p: u32, nvars: usize, var: usize) -> Result<Self> {
        if var < 1 || var > nvars {
            return Err(Error::IndexRange(format!(
                "variable x{var} does not exist on {nvars} variables"
            )));
        }
        let mut poly = TruncPoly::zero(p, nvars);
        poly.terms.insert(ExpVec::unit(nvars, var), 1);
        Ok(poly)
    }

    /// Build a polynomial from raw (exponents, coefficient) pairs.
    ///
    /// Exponents longer than `nvars` are rejected, shorter ones padded;
    /// entries are reduced by x^p = x and coefficients mod p; equal monomials
    /// are merged and zeros dropped.
    pub fn from_terms<I>(p: u32, nvars: usize, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExpVec, Coeff)>,
    {
        let mut poly = TruncPoly::zero(p, nvars);
        for (exps, c) in items {
            if exps.len() > nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector on {} variables in a {}-variable ring",
                    exps.len(),
                    nvars
                )));
            }
            let reduced =
                ExpVec(exps.padded(nvars).iter().map(|e| exp_reduce(p, e as u64)).collect());
            let c = c % p;
            if c == 0 {
                continue;
            }
            let cur = poly.terms.get(&reduced).copied().unwrap_or(0);
            let merged = fp::add(p, cur, c);
            if merged == 0 {
                poly.terms.remove(&reduced);
            } else {
                poly.terms.insert(reduced, merged);
            }
        }
        Ok(poly)
    }

    pub fn monomial(p: u32, nvars: usize, exps: ExpVec, c: Coeff) -> Result<Self> {
        TruncPoly::from_terms(p, nvars, [(exps, c)])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, Coeff)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &ExpVec) -> Coeff {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Term of maximal p-degree, if any.
    pub fn leading(&self) -> Option<(&ExpVec, Coeff)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|e| e.max_var()).max()
    }

    /// Same polynomial viewed in a ring with more variables.
    pub fn pad_to(&self, nvars: usize) -> TruncPoly {
        if nvars == self.nvars {
            return self.clone();
        }
        assert!(nvars > self.nvars, "cannot shrink a polynomial");
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (e.padded(nvars), c))
            .collect();
        TruncPoly { p: self.p, nvars, terms }
    }

    fn check_compatible(&self, other: &TruncPoly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ParamMismatch(format!(
                "p={} vs p={}",
                self.p, other.p
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert(0);
            *entry = fp::add(self.p, *entry, c);
            if *entry == 0 {
                terms.remove(e);
            }
        }
        Ok(TruncPoly { p: self.p, nvars: self.nvars, terms })
    }

    pub fn neg(&self) -> TruncPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (e.clone(), fp::neg(self.p, c)))
            .collect();
        TruncPoly { p: self.p, nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: Coeff) -> TruncPoly {
        let c = c % self.p;
        if c == 0 {
            return TruncPoly::zero(self.p, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, &a)| (e.clone(), fp::mul(self.p, a, c)))
            .collect();
        TruncPoly { p: self.p, nvars: self.nvars, terms }
    }

    /// Product reduced by x_i^p = x_i in every variable.
    pub fn mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_compatible(other)?;
        let p = self.p;
        let mut terms: BTreeMap<ExpVec, Coeff> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let exps = ExpVec(
                    (1..=self.nvars)
                        .map(|i| exp_reduce(p, ea.exponent(i) as u64 + eb.exponent(i) as u64))
                        .collect(),
                );
                let c = fp::mul(p, ca, cb);
                let entry = terms.entry(exps).or_insert(0);
                *entry = fp::add(p, *entry, c);
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(TruncPoly { p, nvars: self.nvars, terms })
    }

    pub fn pow(&self, e: u32) -> TruncPoly {
        let mut acc = TruncPoly::one(self.p, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Formal j-th partial derivative with respect to x_i (`var` 1-based).
    pub fn partial(&self, var: usize, order: u32) -> Result<TruncPoly> {
        if var < 1 || var > self.nvars {
            return Err(Error::IndexRange(format!(
                "variable x{var} does not exist on {} variables",
                self.nvars
            )));
        }
        if order < 1 || order >= self.p {
            return Err(Error::Precondition(format!(
                "derivative order {order} outside 1..={}",
                self.p - 1
            )));
        }
        let p = self.p;
        let mut terms: BTreeMap<ExpVec, Coeff> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let deg = e.exponent(var) as u32;
            if deg < order {
                continue;
            }
            // falling factorial deg * (deg-1) * ... * (deg-order+1)
            let mut factor: Coeff = 1;
            for d in 0..order {
                factor = fp::mul(p, factor, deg - d);
            }
            if factor == 0 {
                continue;
            }
            let mut v: Vec<Exp> = e.as_slice().to_vec();
            v[var - 1] -= order as Exp;
            let key = ExpVec(v);
            let entry = terms.entry(key).or_insert(0);
            *entry = fp::add(p, *entry, fp::mul(p, c, factor));
        }
        terms.retain(|_, c| *c != 0);
        Ok(TruncPoly { p, nvars: self.nvars, terms })
    }

    /// Simultaneous substitution x_i -> subs[i-1]. All replacement
    /// polynomials must share p and a common variable count, which becomes
    /// the variable count of the result.
    pub fn substitute(&self, subs: &[TruncPoly]) -> Result<TruncPoly> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} substitutions for {} variables",
                subs.len(),
                self.nvars
            )));
        }
        let out_nvars = subs.first().map(|s| s.nvars).unwrap_or(0);
        for s in subs {
            if s.p != self.p {
                return Err(Error::ParamMismatch("substitution over a different prime".into()));
            }
            if s.nvars != out_nvars {
                return Err(Error::DimensionMismatch(
                    "substitution polynomials disagree on variable count".into(),
                ));
            }
        }
        let mut acc = TruncPoly::zero(self.p, out_nvars);
        for (e, &c) in &self.terms {
            let mut term = TruncPoly::constant(self.p, out_nvars, c);
            for (idx, sub) in subs.iter().enumerate() {
                let deg = e.exponent(idx + 1) as u32;
                if deg > 0 {
                    term = term.mul(&sub.pow(deg))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// f(x + h e_i) - f(x), computed by substitution.
    ///
    /// `h` may only involve variables x_1..x_(i-1).
    pub fn shift(&self, var: usize, h: &TruncPoly) -> Result<TruncPoly> {
        if var < 1 || var > self.nvars {
            return Err(Error::IndexRange(format!(
                "variable x{var} does not exist on {} variables",
                self.nvars
            )));
        }
        if h.p != self.p {
            return Err(Error::ParamMismatch("shift over a different prime".into()));
        }
        if let Some(max) = h.max_var() {
            if max >= var {
                return Err(Error::LayerViolation(format!(
                    "shift polynomial reads x{max}, which is not below x{var}"
                )));
            }
        }
        if h.nvars > self.nvars {
            return Err(Error::DimensionMismatch(
                "shift polynomial has more variables than the target".into(),
            ));
        }
        let mut subs: Vec<TruncPoly> = (1..=self.nvars)
            .map(|j| TruncPoly::var(self.p, self.nvars, j).expect("in range"))
            .collect();
        subs[var - 1] = subs[var - 1].add(&h.pad_to(self.nvars))?;
        self.substitute(&subs)?.sub(self)
    }

    /// The same shift written as the Taylor sum
    /// `sum_{j=1}^{p-1} 1/j! (d^j f / dx_i^j) h^j`.
    pub fn shift_taylor(&self, var: usize, h: &TruncPoly) -> Result<TruncPoly> {
        if var < 1 || var > self.nvars {
            return Err(Error::IndexRange(format!(
                "variable x{var} does not exist on {} variables",
                self.nvars
            )));
        }
        if h.p != self.p {
            return Err(Error::ParamMismatch("shift over a different prime".into()));
        }
        if let Some(max) = h.max_var() {
            if max >= var {
                return Err(Error::LayerViolation(format!(
                    "shift polynomial reads x{max}, which is not below x{var}"
                )));
            }
        }
        if h.nvars > self.nvars {
            return Err(Error::DimensionMismatch(
                "shift polynomial has more variables than the target".into(),
            ));
        }
        let p = self.p;
        let h = h.pad_to(self.nvars);
        let mut acc = TruncPoly::zero(p, self.nvars);
        let mut h_pow = TruncPoly::one(p, self.nvars);
        for j in 1..p {
            h_pow = h_pow.mul(&h)?;
            let deriv = self.partial(var, j)?;
            if deriv.is_zero() {
                continue;
            }
            let term = deriv.mul(&h_pow)?.scalar_mul(fp::inv_factorial(p, j));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Value of the polynomial at a point of F_p^m.
    pub fn evaluate(&self, point: &[Coeff]) -> Result<Coeff> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let p = self.p;
        let mut acc: Coeff = 0;
        for (e, &c) in &self.terms {
            let mut v = c;
            for (idx, &x) in point.iter().enumerate() {
                let deg = e.exponent(idx + 1);
                if deg > 0 {
                    v = fp::mul(p, v, fp::pow(p, x % p, deg as u64));
                }
            }
            acc = fp::add(p, acc, v);
        }
        Ok(acc)
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::render_poly(self))
    }
}
