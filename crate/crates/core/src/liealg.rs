//! The graded Lie algebra of the lower central series of W_n.
//!
//! The algebra has one basis derivation x^L d_k per power monomial of the
//! group, and the bracket of basis elements
//!
//! ```text
//! [x^L d_k, x^T d_j] = d_j(x^L) x^T d_k        for j < k
//!                    = -x^L d_k(x^T) d_j       for j > k
//!                    = 0                       for j = k
//! ```
//!
//! with the *graded* monomial product: a product whose exponent overflows
//! p-1 in any variable is zero (the algebra sits inside the Witt algebra,
//! whose coefficient ring truncates at x_i^p = 0). This is what makes the
//! bracket respect the p-degree grading; the ordinary layer polynomials of
//! the group reduce by x_i^p = x_i instead, and the degree-preserving map
//! `phi` between the two worlds only keeps the graded part.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::params::PrimeParams;
use crate::polyring::{fp, Coeff, Exp, ExpVec};
use crate::structure::{
    basis_b, leading_term, pdeg_monomial, SaturatedSubgroup,
};
use crate::wreath::{PowerMonomial, WreathElement};

/// Bracket of two basis derivations: `None` for zero, otherwise a scalar
/// times a basis derivation.
pub fn bracket_basis(
    params: PrimeParams,
    a: &PowerMonomial,
    b: &PowerMonomial,
) -> Option<(Coeff, PowerMonomial)> {
    let (k, j) = (a.layer(), b.layer());
    if k == j {
        return None;
    }
    if j < k {
        let p = params.p();
        let lam_j = a.exps().exponent(j as usize) as u32;
        if lam_j == 0 {
            return None;
        }
        // exponents of d_j(x^L) x^T, truncating at p-1
        let nvars = k as usize - 1;
        let mut v: Vec<Exp> = Vec::with_capacity(nvars);
        for i in 1..=nvars {
            let mut e = a.exps().exponent(i) as u32 + b.exps().exponent(i) as u32;
            if i == j as usize {
                e -= 1;
            }
            if e > p - 1 {
                return None;
            }
            v.push(e as Exp);
        }
        let mono = PowerMonomial::new(params, k, ExpVec::new(v)).expect("exponents in range");
        Some((lam_j % p, mono))
    } else {
        let (c, m) = bracket_basis(params, b, a)?;
        Some((fp::neg(params.p(), c), m))
    }
}

/// F_p-combination of basis derivations, canonical (no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    params: PrimeParams,
    terms: BTreeMap<PowerMonomial, Coeff>,
}

impl LieElement {
    pub fn zero(params: PrimeParams) -> Self {
        LieElement { params, terms: BTreeMap::new() }
    }

    pub fn basis(params: PrimeParams, m: PowerMonomial) -> Self {
        LieElement::term(params, 1, m)
    }

    pub fn term(params: PrimeParams, coeff: Coeff, m: PowerMonomial) -> Self {
        let mut e = LieElement::zero(params);
        e.accumulate(coeff, m);
        e
    }

    pub fn from_terms<I>(params: PrimeParams, items: I) -> Self
    where
        I: IntoIterator<Item = (Coeff, PowerMonomial)>,
    {
        let mut e = LieElement::zero(params);
        for (c, m) in items {
            e.accumulate(c, m);
        }
        e
    }

    fn accumulate(&mut self, coeff: Coeff, m: PowerMonomial) {
        let p = self.params.p();
        let c = coeff % p;
        if c == 0 {
            return;
        }
        let cur = self.terms.get(&m).copied().unwrap_or(0);
        let merged = fp::add(p, cur, c);
        if merged == 0 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, merged);
        }
    }

    pub fn params(&self) -> PrimeParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PowerMonomial, Coeff)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &PowerMonomial) -> Coeff {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        if self.params != other.params {
            return Err(Error::ParamMismatch("adding over different algebras".into()));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.accumulate(c, m.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> LieElement {
        let p = self.params.p();
        LieElement {
            params: self.params,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), fp::neg(p, c)))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, c: Coeff) -> LieElement {
        let p = self.params.p();
        let c = c % p;
        if c == 0 {
            return LieElement::zero(self.params);
        }
        LieElement {
            params: self.params,
            terms: self
                .terms
                .iter()
                .map(|(m, &a)| (m.clone(), fp::mul(p, a, c)))
                .collect(),
        }
    }

    /// Bilinear extension of the basis bracket.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        if self.params != other.params {
            return Err(Error::ParamMismatch("bracket over different algebras".into()));
        }
        let p = self.params.p();
        let mut out = LieElement::zero(self.params);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some((c, m)) = bracket_basis(self.params, a, b) {
                    out.accumulate(fp::mul(p, fp::mul(p, ca, cb), c), m);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::render_lie_element(self))
    }
}

/// Homogeneous subring: the span of a subset of the basis derivations,
/// closed under the bracket up to scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousSubring {
    params: PrimeParams,
    basis: BTreeSet<PowerMonomial>,
}

impl HomogeneousSubring {
    pub fn new(params: PrimeParams, basis: BTreeSet<PowerMonomial>) -> Result<Self> {
        for m in &basis {
            PowerMonomial::new(params, m.layer(), m.exps().clone())?;
        }
        for a in &basis {
            for b in &basis {
                if let Some((_, m)) = bracket_basis(params, a, b) {
                    if !basis.contains(&m) {
                        return Err(Error::Precondition(format!(
                            "not a subring: [{}, {}] escapes the span",
                            crate::text::render_lie_monomial(a),
                            crate::text::render_lie_monomial(b),
                        )));
                    }
                }
            }
        }
        Ok(HomogeneousSubring { params, basis })
    }

    pub fn zero(params: PrimeParams) -> Self {
        HomogeneousSubring { params, basis: BTreeSet::new() }
    }

    pub fn whole_algebra(params: PrimeParams) -> Self {
        HomogeneousSubring { params, basis: basis_b(params).into_iter().collect() }
    }

    /// The abelian subring spanned by d_1, ..., d_n.
    pub fn canonical_torus(params: PrimeParams) -> Self {
        let basis = (1..=params.n()).map(PowerMonomial::delta).collect();
        HomogeneousSubring { params, basis }
    }

    pub fn params(&self) -> PrimeParams {
        self.params
    }

    pub fn basis(&self) -> impl Iterator<Item = &PowerMonomial> + '_ {
        self.basis.iter()
    }

    pub fn basis_set(&self) -> &BTreeSet<PowerMonomial> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains_basis(&self, m: &PowerMonomial) -> bool {
        self.basis.contains(m)
    }

    /// Span membership: every term must sit on a basis derivation.
    pub fn contains(&self, e: &LieElement) -> bool {
        e.terms().all(|(m, _)| self.basis.contains(m))
    }

    pub fn contains_subring(&self, other: &HomogeneousSubring) -> bool {
        other.basis.is_subset(&self.basis)
    }

    /// Exact ideal test: bracket every basis derivation of the algebra
    /// against every basis element of the candidate.
    pub fn is_ideal(&self) -> bool {
        for b in basis_b(self.params) {
            for u in &self.basis {
                if let Some((_, m)) = bracket_basis(self.params, &b, u) {
                    if !self.basis.contains(&m) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for HomogeneousSubring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.basis.iter().map(crate::text::render_lie_monomial).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Depth of a group element in the lower central series: the largest i with
/// g in gamma_i. `None` for the identity.
pub fn gamma_depth(params: PrimeParams, g: &WreathElement) -> Option<u64> {
    let mut max_pdeg: Option<u64> = None;
    for (idx, f) in g.layers().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let layer = idx as u32 + 1;
        let lt = leading_term(params, f, layer).expect("nonzero layer");
        let d = pdeg_monomial(params, lt.monomial());
        max_pdeg = Some(max_pdeg.map_or(d, |m| m.max(d)));
    }
    max_pdeg.map(|d| params.class() - d)
}

/// The degree-preserving map into the graded algebra: the sum of the leading
/// terms of the layers that realize the depth of g. The identity maps to 0.
pub fn phi(params: PrimeParams, g: &WreathElement) -> LieElement {
    let Some(depth) = gamma_depth(params, g) else {
        return LieElement::zero(params);
    };
    phi_at(params, g, depth)
}

/// phi_i: as `phi` when g has depth exactly i, zero otherwise.
pub fn phi_at(params: PrimeParams, g: &WreathElement, i: u64) -> LieElement {
    if gamma_depth(params, g) != Some(i) {
        return LieElement::zero(params);
    }
    let target = params.class() - i;
    let mut out = LieElement::zero(params);
    for (idx, f) in g.layers().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let layer = idx as u32 + 1;
        let lt = leading_term(params, f, layer).expect("nonzero layer");
        if pdeg_monomial(params, lt.monomial()) == target {
            out = out
                .add(&LieElement::term(params, lt.coeff(), lt.monomial().clone()))
                .expect("same algebra");
        }
    }
    out
}

/// Image of a saturated subgroup: the homogeneous subring spanned by the
/// images of its basis monomials. Dimension equals log_p of the group order.
pub fn subring_image(s: &SaturatedSubgroup) -> HomogeneousSubring {
    HomogeneousSubring::new(s.params(), s.basis_set().clone())
        .expect("images of saturated subgroups are bracket-closed")
}

/// The inverse direction x^L d_k -> x^L D_k: the smallest saturated subgroup
/// containing the images of the basis. On homogeneous ideals this is the
/// two-sided inverse of `subring_image`.
pub fn epsilon(u: &HomogeneousSubring) -> Result<SaturatedSubgroup> {
    let params = u.params();
    let mut basis: BTreeSet<PowerMonomial> = u.basis_set().clone();
    // close under the monomial support of pairwise group commutators
    loop {
        let mut added = Vec::new();
        for a in &basis {
            for b in &basis {
                if a.layer() <= b.layer() {
                    continue;
                }
                let c = crate::structure::monomial_commutator(params, a, b);
                for (idx, f) in c.layers().iter().enumerate() {
                    let layer = idx as u32 + 1;
                    for (exps, _) in f.terms() {
                        let m = PowerMonomial::new(params, layer, exps.clone())?;
                        if !basis.contains(&m) {
                            added.push(m);
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        basis.extend(added);
    }
    SaturatedSubgroup::new(params, basis)
}

/// i-th power of the algebra via the group series. Zero beyond the class.
pub fn lie_power(params: PrimeParams, i: u64) -> Result<HomogeneousSubring> {
    let gamma = crate::structure::lower_central_term(params, i)?;
    Ok(subring_image(&gamma))
}

/// i-th power computed independently by iterated bracket closure:
/// L^1 = L, L^(i+1) = [L^i, L] on the basis.
pub fn lie_power_iterated(params: PrimeParams, i: u64) -> Result<HomogeneousSubring> {
    if i == 0 {
        return Err(Error::IndexRange("powers start at i = 1".into()));
    }
    let mut current = HomogeneousSubring::whole_algebra(params);
    let full = basis_b(params);
    for _ in 1..i {
        let mut next: BTreeSet<PowerMonomial> = BTreeSet::new();
        for u in current.basis() {
            for b in &full {
                if let Some((_, m)) = bracket_basis(params, u, b) {
                    next.insert(m);
                }
            }
        }
        let stable = next == *current.basis_set();
        current = HomogeneousSubring::new(params, next).expect("bracket closure is a subring");
        if stable && current.is_zero() {
            break;
        }
    }
    Ok(current)
}

/// The m-th center in closed form: the span of all basis derivations of
/// p-degree below m, at every layer.
pub fn lie_center_term(params: PrimeParams, m: u64) -> HomogeneousSubring {
    let basis = basis_b(params)
        .into_iter()
        .filter(|b| pdeg_monomial(params, b) < m)
        .collect();
    HomogeneousSubring::new(params, basis).expect("degree cutoffs are bracket-closed")
}

/// Upper central series by iterated centralizers on the basis:
/// Z_0 = 0 and Z_(m+1) = {b : [b, everything] lands in Z_m}.
pub fn lie_upper_series_direct(params: PrimeParams) -> Vec<HomogeneousSubring> {
    let full = basis_b(params);
    let mut series = vec![HomogeneousSubring::zero(params)];
    loop {
        let prev = series.last().expect("nonempty");
        let candidates: BTreeSet<PowerMonomial> = full
            .iter()
            .filter(|b| {
                full.iter().all(|g| match bracket_basis(params, b, g) {
                    None => true,
                    Some((_, m)) => prev.contains_basis(&m),
                })
            })
            .cloned()
            .collect();
        let next =
            HomogeneousSubring::new(params, candidates).expect("centers are bracket-closed");
        if next.dim() == prev.dim() {
            break;
        }
        series.push(next);
    }
    series
}

/// Idealizer within the basis: all basis derivations whose bracket with
/// every basis element of `u` stays in the span of `u`.
pub fn idealizer(u: &HomogeneousSubring) -> HomogeneousSubring {
    let params = u.params();
    let basis = basis_b(params)
        .into_iter()
        .filter(|b| {
            u.basis().all(|h| match bracket_basis(params, b, h) {
                None => true,
                Some((_, m)) => u.contains_basis(&m),
            })
        })
        .collect();
    HomogeneousSubring::new(params, basis).expect("idealizers are homogeneous subrings")
}
