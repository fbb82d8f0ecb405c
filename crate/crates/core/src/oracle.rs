//! Brute-force cross-checks, deliberately independent of the symbolic path.
//!
//! Everything here works either on explicit permutation tables (built from
//! the translation action alone, never from symbolic multiplication) or on
//! plain F_p linear algebra over the derivation basis. The symbolic
//! operations are tested against these routes at desk scale.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::liealg::{bracket_basis, HomogeneousSubring};
use crate::params::PrimeParams;
use crate::polyring::{all_exponents, fp, TruncPoly};
use crate::structure::{basis_b, SaturatedSubgroup};
use crate::wreath::{PermutationImage, WreathElement};

/// A set of permutations, keyed by their image tables.
pub type PermSet = FxHashSet<Vec<u32>>;

const ENUMERATION_GUARD: u64 = 200_000;

/// Permutations of the monomial basis of W_n.
pub fn basis_perms(params: PrimeParams) -> Result<Vec<PermutationImage>> {
    basis_b(params)
        .iter()
        .map(|m| {
            WreathElement::from_monomial(
                params,
                &crate::wreath::MonomialElement::new(params, 1, m.clone()),
            )
            .to_permutation()
        })
        .collect()
}

/// Subgroup generated by a set of permutations: breadth-first closure under
/// right multiplication. Inverses come for free in a finite group.
pub fn subgroup_closure(params: PrimeParams, gens: &[PermutationImage]) -> Result<PermSet> {
    let id = PermutationImage::identity(params)?;
    let mut seen: PermSet = FxHashSet::default();
    seen.insert(id.images.clone());
    let mut frontier = vec![id];
    while let Some(current) = frontier.pop() {
        for g in gens {
            let next = current.compose(g)?;
            if seen.insert(next.images.clone()) {
                frontier.push(next);
            }
        }
        if seen.len() as u64 > ENUMERATION_GUARD {
            return Err(Error::SizeGuard(format!(
                "subgroup closure exceeded {ENUMERATION_GUARD} permutations"
            )));
        }
    }
    Ok(seen)
}

/// Normal closure of an element as a permutation set.
///
/// Grows a generating set one escaping conjugate at a time: close under
/// multiplication, look for a conjugate of a generator that falls outside,
/// add it, repeat. Each round multiplies the closure by at least p, so the
/// generating set stays at most log_p of the final order.
pub fn normal_closure_perms(params: PrimeParams, g: &WreathElement) -> Result<PermSet> {
    let gens = basis_perms(params)?;
    let inverses: Vec<PermutationImage> = gens.iter().map(|p| p.inverse()).collect();
    let mut nc_gens = vec![g.to_permutation()?];
    loop {
        let closure = subgroup_closure(params, &nc_gens)?;
        let escaped = nc_gens.iter().find_map(|x| {
            gens.iter().zip(&inverses).find_map(|(gen, inv)| {
                let conj = inv
                    .compose(x)
                    .and_then(|y| y.compose(gen))
                    .expect("same degree");
                (!closure.contains(&conj.images)).then_some(conj)
            })
        });
        match escaped {
            Some(conj) => nc_gens.push(conj),
            None => return Ok(closure),
        }
    }
}

/// The span of a saturated subgroup as a permutation set: the subgroup
/// generated by its basis monomials.
pub fn subgroup_perm_set(s: &SaturatedSubgroup) -> Result<PermSet> {
    let params = s.params();
    let gens: Vec<PermutationImage> = s
        .basis()
        .map(|m| {
            WreathElement::from_monomial(
                params,
                &crate::wreath::MonomialElement::new(params, 1, m.clone()),
            )
            .to_permutation()
        })
        .collect::<Result<_>>()?;
    subgroup_closure(params, &gens)
}

/// Every element of W_n, as wreath elements. Guarded; meant for the
/// smallest parameter pairs only.
pub fn enumerate_group(params: PrimeParams) -> Result<Vec<WreathElement>> {
    let p = params.p() as u64;
    let log = params.basis_size();
    let total = log
        .try_into()
        .ok()
        .and_then(|log: u32| p.checked_pow(log))
        .filter(|&t| t <= ENUMERATION_GUARD)
        .ok_or_else(|| {
            Error::SizeGuard(format!("group of order p^{log} too large to enumerate"))
        })?;
    let mut out = Vec::with_capacity(total as usize);
    let layer_exponents: Vec<_> = (1..=params.n())
        .map(|k| all_exponents(params.p(), k as usize - 1))
        .collect();
    for idx in 0..total {
        let mut rest = idx;
        let mut layers = Vec::with_capacity(params.n() as usize);
        for exps in &layer_exponents {
            let terms: Vec<_> = exps
                .iter()
                .map(|e| {
                    let c = (rest % p) as u32;
                    rest /= p;
                    (e.clone(), c)
                })
                .collect();
            layers.push(
                TruncPoly::from_terms(params.p(), exps[0].len(), terms).expect("valid terms"),
            );
        }
        out.push(WreathElement::from_layers(params, layers).expect("valid layers"));
    }
    Ok(out)
}

/// Upper central series over the whole group, permutation tables only:
/// Z_(i+1) = elements whose commutator with every generator falls in Z_i.
pub fn upper_series_perms(params: PrimeParams) -> Result<Vec<PermSet>> {
    let elements: Vec<PermutationImage> = enumerate_group(params)?
        .iter()
        .map(|w| w.to_permutation())
        .collect::<Result<_>>()?;
    let gens = basis_perms(params)?;
    let gen_invs: Vec<PermutationImage> = gens.iter().map(|g| g.inverse()).collect();
    let mut series: Vec<PermSet> = Vec::new();
    let mut current: PermSet = FxHashSet::default();
    current.insert(PermutationImage::identity(params)?.images);
    series.push(current);
    loop {
        let prev = series.last().expect("nonempty");
        let mut next: PermSet = FxHashSet::default();
        for e in &elements {
            let e_inv = e.inverse();
            let central = gens.iter().zip(&gen_invs).all(|(g, g_inv)| {
                let comm = e_inv
                    .compose(g_inv)
                    .and_then(|x| x.compose(e))
                    .and_then(|x| x.compose(g))
                    .expect("same degree");
                prev.contains(&comm.images)
            });
            if central {
                next.insert(e.images.clone());
            }
        }
        if next.len() == prev.len() {
            break;
        }
        series.push(next);
    }
    Ok(series)
}

/// Brute-force normalizer over the whole group, as a permutation set.
pub fn normalizer_perm_set(s: &SaturatedSubgroup) -> Result<PermSet> {
    let params = s.params();
    let span = subgroup_perm_set(s)?;
    let basis: Vec<PermutationImage> = s
        .basis()
        .map(|m| {
            WreathElement::from_monomial(
                params,
                &crate::wreath::MonomialElement::new(params, 1, m.clone()),
            )
            .to_permutation()
        })
        .collect::<Result<_>>()?;
    let mut out: PermSet = FxHashSet::default();
    for w in enumerate_group(params)? {
        let g = w.to_permutation()?;
        let g_inv = g.inverse();
        let normalizes = basis
            .iter()
            .all(|s_perm| {
                let conj = g_inv.compose(s_perm).and_then(|x| x.compose(&g)).expect("same degree");
                span.contains(&conj.images)
            });
        if normalizes {
            out.insert(g.images);
        }
    }
    Ok(out)
}

/// Row-reduced F_p subspace of coordinate vectors, for exact linear algebra
/// over the derivation basis.
#[derive(Debug, Clone)]
pub struct FpSpace {
    p: u32,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl FpSpace {
    pub fn new(p: u32, ncols: usize) -> Self {
        FpSpace { p, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduce a vector by the stored rows, in place.
    pub fn reduce(&self, v: &mut [u32]) {
        let p = self.p;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv] % p;
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = fp::sub(p, *x % p, fp::mul(p, c, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x % self.p == 0)
    }

    /// Insert a vector; returns true if it enlarged the space.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ncols);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(piv) = w.iter().position(|&x| x % self.p != 0) else {
            return false;
        };
        let inv = fp::inv(self.p, w[piv] % self.p);
        for x in w.iter_mut() {
            *x = fp::mul(self.p, *x % self.p, inv);
        }
        // back-substitute into existing rows to keep full reduction
        for row in self.rows.iter_mut() {
            let c = row[piv] % self.p;
            if c != 0 {
                for (x, &wv) in row.iter_mut().zip(&w) {
                    *x = fp::sub(self.p, *x, fp::mul(self.p, c, wv));
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(piv);
        true
    }
}

/// Upper central series of the Lie algebra by exact linear algebra, with no
/// homogeneity assumption: Z_(m+1) is the kernel of z -> (reduce of [z, b]
/// modulo Z_m, for every basis derivation b).
pub fn lie_upper_series_linear(params: PrimeParams) -> Vec<FpSpace> {
    let p = params.p();
    let basis = basis_b(params);
    let d = basis.len();
    // bracket matrices: column j of mats[b] is [e_j, b] in coordinates
    let mats: Vec<Vec<Vec<u32>>> = basis
        .iter()
        .map(|b| {
            basis
                .iter()
                .map(|e_j| {
                    let mut col = vec![0u32; d];
                    if let Some((c, m)) = bracket_basis(params, e_j, b) {
                        let idx = basis.iter().position(|x| x == &m).expect("basis closed");
                        col[idx] = c;
                    }
                    col
                })
                .collect()
        })
        .collect();
    let mut series = vec![FpSpace::new(p, d)];
    loop {
        let prev = series.last().expect("nonempty");
        // constraint rows: for each b and each output coordinate, the
        // reduced image of M_b must vanish
        let mut constraints: Vec<Vec<u32>> = Vec::new();
        for cols in &mats {
            // reduced columns
            let reduced: Vec<Vec<u32>> = cols
                .iter()
                .map(|col| {
                    let mut c = col.clone();
                    prev.reduce(&mut c);
                    c
                })
                .collect();
            // transpose: one constraint row per output coordinate
            let mut rows = vec![vec![0u32; d]; d];
            for (j, col) in reduced.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    rows[i][j] = v % p;
                }
            }
            constraints.extend(rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)));
        }
        let next = nullspace(p, &constraints, d);
        if next.dim() == prev.dim() {
            break;
        }
        series.push(next);
    }
    series
}

/// Nullspace of a constraint matrix over F_p, returned as an `FpSpace`.
pub fn nullspace(p: u32, rows: &[Vec<u32>], ncols: usize) -> FpSpace {
    // row reduce the constraints
    let mut rref = FpSpace::new(p, ncols);
    for row in rows {
        rref.insert(row);
    }
    // free columns parameterize the kernel
    let mut space = FpSpace::new(p, ncols);
    let pivot_set: std::collections::BTreeSet<usize> = rref.pivots.iter().copied().collect();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u32; ncols];
        v[free] = 1;
        for (row, &piv) in rref.rows.iter().zip(&rref.pivots) {
            v[piv] = fp::neg(p, row[free]);
        }
        space.insert(&v);
    }
    space
}

/// Coordinates of a homogeneous subring in the derivation basis, for
/// comparisons against `FpSpace` computations.
pub fn subring_coordinates(params: PrimeParams, s: &HomogeneousSubring) -> Vec<Vec<u32>> {
    let basis = basis_b(params);
    s.basis()
        .map(|m| {
            let mut v = vec![0u32; basis.len()];
            let idx = basis.iter().position(|x| x == m).expect("basis element");
            v[idx] = 1;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::lower_central_term;

    fn pp(p: u32, n: u32) -> PrimeParams {
        PrimeParams::new(p, n).unwrap()
    }

    #[test]
    fn whole_group_closure_has_the_right_order() {
        let params = pp(3, 2);
        let gens = basis_perms(params).unwrap();
        let group = subgroup_closure(params, &gens).unwrap();
        assert_eq!(group.len(), 81);
    }

    #[test]
    fn enumerate_group_matches_closure() {
        let params = pp(3, 2);
        let listed: PermSet = enumerate_group(params)
            .unwrap()
            .iter()
            .map(|w| w.to_permutation().unwrap().images)
            .collect();
        assert_eq!(listed.len(), 81);
        let gens = basis_perms(params).unwrap();
        assert_eq!(listed, subgroup_closure(params, &gens).unwrap());
    }

    #[test]
    fn regular_subgroup_acts_regularly() {
        // the orbit of the origin under T covers every point exactly once
        let params = pp(3, 2);
        let t = SaturatedSubgroup::canonical_regular(params);
        let span = subgroup_perm_set(&t).unwrap();
        assert_eq!(span.len(), 9);
        let origins: FxHashSet<u32> = span.iter().map(|images| images[0]).collect();
        assert_eq!(origins.len(), 9);
        // trivial stabilizer: only the identity fixes the origin
        assert_eq!(span.iter().filter(|im| im[0] == 0).count(), 1);
    }

    #[test]
    fn brute_force_center_is_the_closed_form() {
        let params = pp(3, 2);
        let series = upper_series_perms(params).unwrap();
        // Z_0 trivial, and Z_i has the order of the closed-form term
        for (i, z) in series.iter().enumerate() {
            let expected = crate::structure::upper_central_term(params, i as u64);
            assert_eq!(
                z.len() as u64,
                (params.p() as u64).pow(expected.log_order() as u32),
                "order of Z_{i}"
            );
            let span = subgroup_perm_set(&expected).unwrap();
            assert_eq!(z, &span, "Z_{i} as a set");
        }
        assert_eq!(series.len() as u64, params.class() + 1);
    }

    #[test]
    fn normal_closure_oracle_agrees_at_3_2() {
        let params = pp(3, 2);
        for m in basis_b(params) {
            let elem = WreathElement::from_monomial(
                params,
                &crate::wreath::MonomialElement::new(params, 1, m.clone()),
            );
            let brute = normal_closure_perms(params, &elem).unwrap();
            let closed = crate::structure::normal_closure_monomial(
                params,
                &crate::wreath::MonomialElement::new(params, 1, m),
            )
            .unwrap();
            assert_eq!(brute, subgroup_perm_set(&closed).unwrap());
        }
    }

    #[test]
    fn brute_force_normalizer_agrees_at_3_2() {
        let params = pp(3, 2);
        let t = SaturatedSubgroup::canonical_regular(params);
        let n0 = crate::chains::normalizer(&t);
        let targets = [
            t.clone(),
            n0,
            lower_central_term(params, 2).unwrap(),
            lower_central_term(params, 3).unwrap(),
            SaturatedSubgroup::whole_group(params),
        ];
        for s in targets {
            let brute = normalizer_perm_set(&s).unwrap();
            let symbolic = crate::chains::normalizer(&s);
            assert_eq!(brute, subgroup_perm_set(&symbolic).unwrap());
        }
    }

    #[test]
    fn linear_centers_match_the_closed_form() {
        for (p, n) in [(3, 2), (3, 3), (5, 2)] {
            let params = pp(p, n);
            let series = lie_upper_series_linear(params);
            assert_eq!(series.len() as u64, params.class() + 1, "({p},{n})");
            for (m, space) in series.iter().enumerate() {
                let xi = crate::liealg::lie_center_term(params, m as u64);
                assert_eq!(space.dim(), xi.dim(), "dim of Z_{m} at ({p},{n})");
                for v in subring_coordinates(params, &xi) {
                    assert!(space.contains(&v), "xi_{m} inside Z_{m} at ({p},{n})");
                }
            }
        }
    }

    #[test]
    fn nullspace_small_example() {
        // over F_3: x + y = 0 has kernel dimension 1 in 2 columns
        let space = nullspace(3, &[vec![1, 1]], 2);
        assert_eq!(space.dim(), 1);
        assert!(space.contains(&[1, 2]));
        assert!(!space.contains(&[1, 1]));
    }

    #[test]
    fn gamma_terms_as_perm_sets_nest() {
        let params = pp(3, 2);
        let sets: Vec<PermSet> = (1..=4)
            .map(|i| subgroup_perm_set(&lower_central_term(params, i).unwrap()).unwrap())
            .collect();
        for w in sets.windows(2) {
            assert!(w[1].is_subset(&w[0]));
        }
        assert_eq!(sets[0].len(), 81);
        assert_eq!(sets[3].len(), 1);
    }
}
