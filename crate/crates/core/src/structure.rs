//! p-degree grading, saturated subgroups, central series, normal closures.
//!
//! The p-degree of x^L D_k is the base-p digit value of L plus the layer
//! offset mu_k = p^(n-1) - p^(k-1). It grades the group compatibly with the
//! lower central series: the i-th term gamma_i is spanned by the monomials
//! of p-degree at most p^(n-1) - i, layer by layer, and every subgroup this
//! crate manipulates (series terms, normal closures, normalizers) is
//! *saturated*: spanned by the set of monic power monomials it contains.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::PrimeParams;
use crate::polyring::{all_exponents, ExpVec, TruncPoly};
use crate::wreath::{taylor_commutator, MonomialElement, PowerMonomial, WreathElement};

/// p-degree of a power monomial, split into its two summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PDegree {
    pub value: u64,
    pub exponent_part: u64,
    pub layer_offset: u64,
}

/// Base-p digit value of an exponent vector.
pub fn pdeg_exps(params: PrimeParams, exps: &ExpVec) -> u64 {
    exps.pdeg_value(params.p())
}

/// p-degree of a monic power monomial.
pub fn pdeg_monomial(params: PrimeParams, m: &PowerMonomial) -> u64 {
    pdeg_exps(params, m.exps()) + params.mu(m.layer())
}

/// p-degree of a scalar monomial; the identity has none.
pub fn pdeg(params: PrimeParams, m: &MonomialElement) -> Result<PDegree> {
    if m.is_identity() {
        return Err(Error::UndefinedDegree);
    }
    let exponent_part = pdeg_exps(params, m.monomial().exps());
    let layer_offset = params.mu(m.layer());
    Ok(PDegree { value: exponent_part + layer_offset, exponent_part, layer_offset })
}

/// Leading term of f D_k: the monomial of maximal p-degree. Within one
/// layer distinct monomials have distinct p-degrees (base-p digits), so the
/// maximum is unique.
pub fn leading_term(params: PrimeParams, f: &TruncPoly, layer: u32) -> Result<MonomialElement> {
    let (exps, coeff) = f.leading().ok_or(Error::ZeroPolynomial)?;
    let mono = PowerMonomial::new(params, layer, exps.clone())?;
    Ok(MonomialElement::new(params, coeff, mono))
}

/// All monic power monomials of one layer, in increasing p-degree order.
pub fn monomials_of_layer(params: PrimeParams, layer: u32) -> Vec<PowerMonomial> {
    all_exponents(params.p(), layer as usize - 1)
        .into_iter()
        .map(|e| PowerMonomial::new(params, layer, e).expect("enumerated in range"))
        .collect()
}

/// The full monomial basis of W_n, layer by layer.
pub fn basis_b(params: PrimeParams) -> Vec<PowerMonomial> {
    (1..=params.n()).flat_map(|k| monomials_of_layer(params, k)).collect()
}

/// Commutator of two monic power monomials, computed from the Taylor sum.
///
/// The result always lives in the higher of the two layers.
pub fn monomial_commutator(
    params: PrimeParams,
    a: &PowerMonomial,
    b: &PowerMonomial,
) -> WreathElement {
    let (ka, kb) = (a.layer(), b.layer());
    if ka == kb {
        return WreathElement::identity(params);
    }
    let p = params.p();
    if ka > kb {
        taylor_commutator(params, &a.to_poly(p, 1), ka, &b.to_poly(p, 1), kb)
            .expect("layers ordered")
    } else {
        taylor_commutator(params, &b.to_poly(p, 1), kb, &a.to_poly(p, 1), ka)
            .expect("layers ordered")
            .inverse()
    }
}

/// A saturated subgroup: the span of a set of monic power monomials that is
/// closed under group multiplication.
///
/// The span of a basis set U is the set of products of arbitrary
/// F_p-combinations per layer; it is a subgroup exactly when the commutator
/// of any two basis monomials falls back into the span, which `new`
/// verifies. Order is p^|basis|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatedSubgroup {
    params: PrimeParams,
    basis: BTreeSet<PowerMonomial>,
}

impl SaturatedSubgroup {
    /// Validate and build. Rejects basis sets whose span is not a subgroup.
    pub fn new(params: PrimeParams, basis: BTreeSet<PowerMonomial>) -> Result<Self> {
        for m in &basis {
            // re-validate shape against params
            PowerMonomial::new(params, m.layer(), m.exps().clone())?;
        }
        let candidate = SaturatedSubgroup { params, basis };
        for a in &candidate.basis {
            for b in &candidate.basis {
                if a.layer() <= b.layer() {
                    continue;
                }
                let c = monomial_commutator(params, a, b);
                if !candidate.contains(&c) {
                    return Err(Error::Precondition(format!(
                        "span is not a subgroup: [{}, {}] escapes it",
                        crate::text::render_monomial(a),
                        crate::text::render_monomial(b),
                    )));
                }
            }
        }
        Ok(candidate)
    }

    pub fn trivial(params: PrimeParams) -> Self {
        SaturatedSubgroup { params, basis: BTreeSet::new() }
    }

    pub fn whole_group(params: PrimeParams) -> Self {
        SaturatedSubgroup { params, basis: basis_b(params).into_iter().collect() }
    }

    /// T = <D_1, ..., D_n>, the canonical elementary abelian regular
    /// subgroup: the constants of every layer.
    pub fn canonical_regular(params: PrimeParams) -> Self {
        let basis = (1..=params.n()).map(PowerMonomial::delta).collect();
        SaturatedSubgroup { params, basis }
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

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// log_p of the subgroup order.
    pub fn log_order(&self) -> u64 {
        self.basis.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains_monomial(&self, m: &PowerMonomial) -> bool {
        self.basis.contains(m)
    }

    /// Membership: every monomial of every layer must be in the basis.
    pub fn contains(&self, w: &WreathElement) -> bool {
        for (idx, f) in w.layers().iter().enumerate() {
            let layer = idx as u32 + 1;
            for (exps, _) in f.terms() {
                let m = PowerMonomial::new(self.params, layer, exps.clone())
                    .expect("layer polynomial is well formed");
                if !self.basis.contains(&m) {
                    return false;
                }
            }
        }
        true
    }

    pub fn contains_subgroup(&self, other: &SaturatedSubgroup) -> bool {
        other.basis.is_subset(&self.basis)
    }

    /// Intersection with the base subgroup B_k.
    pub fn intersect_layer(&self, layer: u32) -> SaturatedSubgroup {
        let basis = self
            .basis
            .iter()
            .filter(|m| m.layer() == layer)
            .cloned()
            .collect();
        SaturatedSubgroup { params: self.params, basis }
    }

    /// Smallest layer with a basis monomial.
    pub fn min_layer(&self) -> Option<u32> {
        self.basis.iter().map(|m| m.layer()).min()
    }

    /// True iff `[s, g]` stays in the span for every basis monomial s and
    /// every monomial generator g of W_n.
    pub fn is_normal(&self) -> bool {
        let gens = basis_b(self.params);
        for s in &self.basis {
            for g in &gens {
                let c = monomial_commutator(self.params, s, g);
                if !self.contains(&c) {
                    return false;
                }
            }
        }
        true
    }

    /// Enumerate every element of the span. Guarded: p^|basis| must stay
    /// small enough to materialize.
    pub fn enumerate_elements(&self) -> Result<Vec<WreathElement>> {
        let p = self.params.p() as u64;
        let log = self.basis.len() as u32;
        let total = p.checked_pow(log).filter(|&t| t <= 1_000_000).ok_or_else(|| {
            Error::SizeGuard(format!("subgroup of order p^{log} too large to enumerate"))
        })?;
        let basis: Vec<&PowerMonomial> = self.basis.iter().collect();
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut e = WreathElement::identity(self.params);
            let mut rest = idx;
            for m in &basis {
                let c = (rest % p) as u32;
                rest /= p;
                if c != 0 {
                    let elem = WreathElement::from_monomial(
                        self.params,
                        &MonomialElement::new(self.params, c, (*m).clone()),
                    );
                    e = e.multiply(&elem).expect("same group");
                }
            }
            out.push(e);
        }
        Ok(out)
    }
}

impl fmt::Display for SaturatedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.basis.iter().map(crate::text::render_monomial).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// gamma_i(W_n): the saturated subgroup of all monomials of p-degree at most
/// p^(n-1) - i. Errors on i = 0; trivial beyond the nilpotency class.
pub fn lower_central_term(params: PrimeParams, i: u64) -> Result<SaturatedSubgroup> {
    if i == 0 {
        return Err(Error::IndexRange("lower central series starts at i = 1".into()));
    }
    let class = params.class();
    if i > class {
        return Ok(SaturatedSubgroup::trivial(params));
    }
    let cutoff = class - i;
    let basis = basis_b(params)
        .into_iter()
        .filter(|m| pdeg_monomial(params, m) <= cutoff)
        .collect();
    SaturatedSubgroup::new(params, basis)
}

/// Z_i(W_n) in closed form. The upper and lower central series coincide
/// term by term with Z_i = gamma_(p^(n-1)+1-i); the identification is pinned
/// against the iterative computation by the test suite.
pub fn upper_central_term(params: PrimeParams, i: u64) -> SaturatedSubgroup {
    let class = params.class();
    if i == 0 {
        return SaturatedSubgroup::trivial(params);
    }
    if i >= class {
        return SaturatedSubgroup::whole_group(params);
    }
    lower_central_term(params, class + 1 - i).expect("index in range")
}

/// The upper central series computed without the closed form: Z_(i+1)/Z_i is
/// the center of W_n/Z_i, found by testing every monomial against every
/// generator. Returns Z_0 (trivial) through Z_class (= W_n).
pub fn upper_central_series_direct(params: PrimeParams) -> Vec<SaturatedSubgroup> {
    let gens = basis_b(params);
    let mut series = vec![SaturatedSubgroup::trivial(params)];
    loop {
        let prev = series.last().expect("nonempty");
        let candidates: BTreeSet<PowerMonomial> = gens
            .iter()
            .filter(|m| {
                gens.iter()
                    .all(|g| prev.contains(&monomial_commutator(params, m, g)))
            })
            .cloned()
            .collect();
        let next = SaturatedSubgroup::new(params, candidates)
            .expect("upper central terms are saturated subgroups");
        let done = next.basis_len() == prev.basis_len();
        if done {
            break;
        }
        series.push(next);
    }
    series
}

/// Normal closure of a scalar power monomial c x^L D_k, in closed form:
/// at layer k every monomial of p-degree at most pdeg(m), above layer k the
/// corresponding slice of gamma_(p^(k-1)+1).
pub fn normal_closure_monomial(
    params: PrimeParams,
    m: &MonomialElement,
) -> Result<SaturatedSubgroup> {
    if m.is_identity() {
        return Err(Error::IdentityInput("the identity generates the trivial subgroup".into()));
    }
    let k = m.layer();
    let t = pdeg(params, m)?.value;
    closure_from_layer_degree(params, k, t)
}

/// Normal closure of f D_k for nonzero f; the threshold is the p-degree of
/// the leading term.
pub fn normal_closure_poly(
    params: PrimeParams,
    f: &TruncPoly,
    layer: u32,
) -> Result<SaturatedSubgroup> {
    if f.is_zero() {
        return Err(Error::IdentityInput("the zero layer generates the trivial subgroup".into()));
    }
    let lead = leading_term(params, f, layer)?;
    let t = pdeg(params, &lead)?.value;
    closure_from_layer_degree(params, layer, t)
}

fn closure_from_layer_degree(
    params: PrimeParams,
    k: u32,
    t: u64,
) -> Result<SaturatedSubgroup> {
    // above layer k the closure contains gamma_(p^(k-1)+1), whose slice at
    // layer h is every monomial of p-degree below mu_k
    let high_cutoff = params.mu(k); // p^(n-1) - p^(k-1)
    let mut basis = BTreeSet::new();
    for m in basis_b(params) {
        let d = pdeg_monomial(params, &m);
        let inside = (m.layer() == k && d <= t) || (m.layer() > k && d < high_cutoff);
        if inside {
            basis.insert(m);
        }
    }
    SaturatedSubgroup::new(params, basis)
}

/// Outcome of the normal-subgroup index bound check for a normal subgroup
/// meeting B_k but none of the earlier layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexBound {
    /// gamma index p^(k-1) + 1.
    pub gamma_index: u64,
    /// Whether gamma_(p^(k-1)+1) is contained in the subgroup.
    pub contains_gamma: bool,
    /// log_p of the index |N : gamma_(p^(k-1)+1)|.
    pub log_p_index: u64,
    /// The bound (n-k+1) p^(k-1).
    pub bound: u64,
}

impl IndexBound {
    pub fn within_bound(&self) -> bool {
        self.contains_gamma && self.log_p_index <= self.bound
    }
}

/// Check that a normal subgroup contained in B_k...B_n but not in
/// B_(k+1)...B_n contains gamma_(p^(k-1)+1) with index at most
/// p^((n-k+1) p^(k-1)).
pub fn contains_gamma_bound(n_sub: &SaturatedSubgroup, k: u32) -> Result<IndexBound> {
    let params = n_sub.params();
    if k < 1 || k > params.n() {
        return Err(Error::IndexRange(format!("layer {k} out of range 1..={}", params.n())));
    }
    match n_sub.min_layer() {
        Some(min) if min == k => {}
        Some(min) => {
            return Err(Error::Precondition(format!(
                "subgroup meets B_{min} first, not B_{k}"
            )));
        }
        None => {
            return Err(Error::Precondition("trivial subgroup has no lowest layer".into()));
        }
    }
    if !n_sub.is_normal() {
        return Err(Error::Precondition("subgroup is not normal".into()));
    }
    let gamma_index = params.pow_p(k - 1) + 1;
    let gamma = lower_central_term(params, gamma_index)?;
    let contains_gamma = n_sub.contains_subgroup(&gamma);
    let log_p_index = n_sub.log_order() - gamma.log_order();
    let bound = (params.n() - k + 1) as u64 * params.pow_p(k - 1);
    Ok(IndexBound { gamma_index, contains_gamma, log_p_index, bound })
}
