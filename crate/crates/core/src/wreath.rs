//! Elements of the iterated wreath product W_n in layered normal form.
//!
//! An element is stored as one truncated polynomial per layer, f_k on the
//! variables x_1..x_(k-1); read as the product f_n D_n * f_(n-1) D_(n-1) *
//! ... * f_1 D_1, which is the unique normal form. The layer f_k D_k acts on
//! a point of F_p^n by subtracting f_k(x_1,..,x_(k-1)) from the k-th
//! coordinate.
//!
//! Conventions, fixed once and relied on everywhere:
//!
//! - points are encoded lexicographically with x_1 most significant;
//! - elements act on the right: `multiply(u, v)` means "apply u, then v",
//!   and permutation tables compose the same way;
//! - commutators are `[a, b] = a^-1 b^-1 a b`. Under these choices the
//!   commutator of f_k D_k with f_i D_i (i < k) comes out as the Taylor sum
//!   `sum_j 1/j! (d^j f_k / dx_i^j) f_i^j D_k` with no sign adjustment,
//!   which the test suite checks against the permutation tables.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PrimeParams;
use crate::polyring::{fp, Coeff, ExpVec, TruncPoly};

/// Guard for materializing permutation tables.
pub const MAX_PERMUTATION_POINTS: u64 = 1_000_000;

/// A monic power monomial x^L D_k: the basis element of layer k with
/// exponent vector L on x_1..x_(k-1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerMonomial {
    layer: u32,
    exps: ExpVec,
}

impl PowerMonomial {
    pub fn new(params: PrimeParams, layer: u32, exps: ExpVec) -> Result<Self> {
        if layer < 1 || layer > params.n() {
            return Err(Error::IndexRange(format!(
                "layer {layer} out of range 1..={}",
                params.n()
            )));
        }
        if exps.len() != (layer - 1) as usize {
            return Err(Error::DimensionMismatch(format!(
                "layer {layer} monomial needs {} exponents, got {}",
                layer - 1,
                exps.len()
            )));
        }
        if exps.iter().any(|e| e as u32 >= params.p()) {
            return Err(Error::ParamRange("exponent not below p".into()));
        }
        Ok(PowerMonomial { layer, exps })
    }

    /// The constant monomial D_k.
    pub fn delta(layer: u32) -> Self {
        PowerMonomial { layer, exps: ExpVec::zero(layer as usize - 1) }
    }

    pub fn layer(&self) -> u32 {
        self.layer
    }

    pub fn exps(&self) -> &ExpVec {
        &self.exps
    }

    /// The monomial as a layer polynomial with the given coefficient.
    pub fn to_poly(&self, p: u32, coeff: Coeff) -> TruncPoly {
        TruncPoly::monomial(p, self.layer as usize - 1, self.exps.clone(), coeff)
            .expect("valid monomial")
    }
}

/// A scalar multiple of a power monomial; the identity exactly when the
/// coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialElement {
    coeff: Coeff,
    mono: PowerMonomial,
}

impl MonomialElement {
    pub fn new(params: PrimeParams, coeff: Coeff, mono: PowerMonomial) -> Self {
        MonomialElement { coeff: coeff % params.p(), mono }
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn monomial(&self) -> &PowerMonomial {
        &self.mono
    }

    pub fn layer(&self) -> u32 {
        self.mono.layer
    }

    pub fn is_identity(&self) -> bool {
        self.coeff == 0
    }

    pub fn is_monic(&self) -> bool {
        self.coeff == 1
    }
}

/// Element of W_n in normal form: one polynomial per layer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    params: PrimeParams,
    layers: Vec<TruncPoly>,
}

impl WreathElement {
    pub fn identity(params: PrimeParams) -> Self {
        let layers = (1..=params.n())
            .map(|k| TruncPoly::zero(params.p(), k as usize - 1))
            .collect();
        WreathElement { params, layers }
    }

    /// Build from per-layer polynomials f_1, ..., f_n (f_k on k-1 variables).
    pub fn from_layers(params: PrimeParams, layers: Vec<TruncPoly>) -> Result<Self> {
        if layers.len() != params.n() as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} layers for n={}",
                layers.len(),
                params.n()
            )));
        }
        for (idx, f) in layers.iter().enumerate() {
            if f.p() != params.p() {
                return Err(Error::ParamMismatch("layer polynomial over wrong prime".into()));
            }
            if f.nvars() != idx {
                return Err(Error::LayerViolation(format!(
                    "layer {} polynomial must have {} variables, has {}",
                    idx + 1,
                    idx,
                    f.nvars()
                )));
            }
        }
        Ok(WreathElement { params, layers })
    }

    /// The element f D_k with a single nonzero layer.
    pub fn from_single_layer(params: PrimeParams, layer: u32, f: TruncPoly) -> Result<Self> {
        if layer < 1 || layer > params.n() {
            return Err(Error::IndexRange(format!(
                "layer {layer} out of range 1..={}",
                params.n()
            )));
        }
        let mut e = WreathElement::identity(params);
        if f.p() != params.p() {
            return Err(Error::ParamMismatch("layer polynomial over wrong prime".into()));
        }
        if f.nvars() != layer as usize - 1 {
            return Err(Error::LayerViolation(format!(
                "layer {layer} polynomial must have {} variables, has {}",
                layer - 1,
                f.nvars()
            )));
        }
        e.layers[layer as usize - 1] = f;
        Ok(e)
    }

    pub fn from_monomial(params: PrimeParams, m: &MonomialElement) -> Self {
        let f = m.mono.to_poly(params.p(), m.coeff);
        WreathElement::from_single_layer(params, m.mono.layer, f).expect("valid monomial")
    }

    pub fn params(&self) -> PrimeParams {
        self.params
    }

    /// Layer polynomial f_k, `k` 1-based.
    pub fn layer(&self, k: u32) -> &TruncPoly {
        &self.layers[k as usize - 1]
    }

    pub fn layers(&self) -> &[TruncPoly] {
        &self.layers
    }

    pub fn is_identity(&self) -> bool {
        self.layers.iter().all(|f| f.is_zero())
    }

    /// Apply the element to a point of F_p^n.
    ///
    /// Every layer reads the original coordinates, so the order of layers is
    /// immaterial here; that is exactly what normal form means.
    pub fn act(&self, point: &[Coeff]) -> Result<Vec<Coeff>> {
        let n = self.params.n() as usize;
        let p = self.params.p();
        if point.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for n={n}",
                point.len()
            )));
        }
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let value = self.layers[k].evaluate(&point[0..k])?;
            out.push(fp::sub(p, point[k] % p, value));
        }
        Ok(out)
    }

    /// Tabulate the action over all p^n points.
    pub fn to_permutation(&self) -> Result<PermutationImage> {
        let total = self.params.point_count();
        if total > MAX_PERMUTATION_POINTS {
            return Err(Error::SizeGuard(format!(
                "p^n = {total} exceeds the permutation table guard {MAX_PERMUTATION_POINTS}"
            )));
        }
        let mut images = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let point = decode_point(self.params, idx);
            let image = self.act(&point)?;
            images.push(encode_point(self.params, &image) as u32);
        }
        Ok(PermutationImage { p: self.params.p(), n: self.params.n(), images })
    }

    /// Group multiplication: apply `self`, then `other`.
    pub fn multiply(&self, other: &WreathElement) -> Result<WreathElement> {
        if self.params != other.params {
            return Err(Error::ParamMismatch("elements live in different groups".into()));
        }
        let p = self.params.p();
        let n = self.params.n() as usize;
        let mut layers = Vec::with_capacity(n);
        for k in 0..n {
            let uk = &self.layers[k];
            let vk = &other.layers[k];
            let composed = if vk.is_zero() {
                uk.clone()
            } else {
                // v_k reads coordinates already translated by self
                let mut subs = Vec::with_capacity(k);
                for j in 0..k {
                    let xj = TruncPoly::var(p, k, j + 1).expect("in range");
                    subs.push(xj.sub(&self.layers[j].pad_to(k))?);
                }
                uk.add(&vk.substitute(&subs)?)?
            };
            layers.push(composed);
        }
        Ok(WreathElement { params: self.params, layers })
    }

    pub fn inverse(&self) -> WreathElement {
        let p = self.params.p();
        let n = self.params.n() as usize;
        // t_j expresses the original x_j through the translated coordinates:
        // t_j = x_j + f_j(t_1, ..., t_(j-1)).
        let mut t: Vec<TruncPoly> = Vec::with_capacity(n);
        let mut layers = Vec::with_capacity(n);
        for k in 0..n {
            let subs: Vec<TruncPoly> = (0..k).map(|j| t[j].pad_to(k)).collect();
            let f_of_t = self.layers[k].substitute(&subs).expect("same ring");
            layers.push(f_of_t.neg());
            let tk = TruncPoly::var(p, k + 1, k + 1)
                .expect("in range")
                .add(&f_of_t.pad_to(k + 1))
                .expect("same ring");
            t.push(tk);
        }
        WreathElement { params: self.params, layers }
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &WreathElement) -> Result<WreathElement> {
        self.inverse()
            .multiply(&other.inverse())?
            .multiply(self)?
            .multiply(other)
    }

    /// Uniformly random element, one coefficient per basis monomial.
    pub fn random<R: Rng>(params: PrimeParams, rng: &mut R) -> WreathElement {
        let p = params.p();
        let layers = (1..=params.n())
            .map(|k| {
                let nvars = k as usize - 1;
                TruncPoly::from_terms(
                    p,
                    nvars,
                    crate::polyring::all_exponents(p, nvars)
                        .into_iter()
                        .map(|e| (e, rng.gen_range(0..p))),
                )
                .expect("valid terms")
            })
            .collect();
        WreathElement { params, layers }
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::render_element(self))
    }
}

/// The symbolic commutator `[f D_k, g D_i]` for i < k, straight from the
/// Taylor sum. Used as the fast path for monomial pairs and cross-checked
/// against the generic `commutator` by the test suite.
pub fn taylor_commutator(
    params: PrimeParams,
    f: &TruncPoly,
    layer_k: u32,
    g: &TruncPoly,
    layer_i: u32,
) -> Result<WreathElement> {
    if layer_i >= layer_k {
        return Err(Error::Precondition(format!(
            "taylor commutator needs i < k, got i={layer_i}, k={layer_k}"
        )));
    }
    let result = f.shift_taylor(layer_i as usize, g)?;
    WreathElement::from_single_layer(params, layer_k, result)
}

/// Permutation of the p^n points, stored as an image table in the
/// lexicographic point encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationImage {
    pub p: u32,
    pub n: u32,
    pub images: Vec<u32>,
}

impl PermutationImage {
    pub fn identity(params: PrimeParams) -> Result<Self> {
        let total = params.point_count();
        if total > MAX_PERMUTATION_POINTS {
            return Err(Error::SizeGuard(format!("p^n = {total} too large")));
        }
        Ok(PermutationImage {
            p: params.p(),
            n: params.n(),
            images: (0..total as u32).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &im in &self.images {
            let Some(slot) = seen.get_mut(im as usize) else {
                return false;
            };
            if *slot {
                return false;
            }
            *slot = true;
        }
        true
    }

    /// Apply `self`, then `other`.
    pub fn compose(&self, other: &PermutationImage) -> Result<PermutationImage> {
        if self.p != other.p || self.n != other.n || self.images.len() != other.images.len() {
            return Err(Error::ParamMismatch("composing permutations of different degrees".into()));
        }
        let images = self
            .images
            .iter()
            .map(|&im| other.images[im as usize])
            .collect();
        Ok(PermutationImage { p: self.p, n: self.n, images })
    }

    pub fn inverse(&self) -> PermutationImage {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        PermutationImage { p: self.p, n: self.n, images }
    }

    /// Serialize as `{"p":..,"n":..,"images":[..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("permutation serializes")
    }
}

/// Lexicographic index of a point, x_1 most significant.
pub fn encode_point(params: PrimeParams, point: &[Coeff]) -> u64 {
    let p = params.p() as u64;
    point.iter().fold(0u64, |acc, &x| acc * p + (x % params.p()) as u64)
}

/// Point with the given lexicographic index.
pub fn decode_point(params: PrimeParams, mut idx: u64) -> Vec<Coeff> {
    let p = params.p() as u64;
    let n = params.n() as usize;
    let mut point = vec![0u32; n];
    for i in (0..n).rev() {
        point[i] = (idx % p) as u32;
        idx /= p;
    }
    point
}
