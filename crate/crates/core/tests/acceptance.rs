//! Acceptance suite: one test per headline criterion, every comparison an
//! exact equality over F_p. Each test prints a PASS line with its scale and
//! timing; run with `cargo test --test acceptance -- --nocapture` to see
//! them.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;

use polywreath::chains::{
    count_bounded_multiplicity, count_partitions, cross_validate, idealizer_chain_subrings,
    normalizer_chain_subgroups, q_table,
};
use polywreath::liealg::{
    self, lie_center_term, lie_power, lie_power_iterated, lie_upper_series_direct,
    HomogeneousSubring, LieElement,
};
use polywreath::oracle;
use polywreath::params::PrimeParams;
use polywreath::polyring::{all_exponents, TruncPoly};
use polywreath::structure::{
    self, basis_b, lower_central_term, normal_closure_monomial, upper_central_series_direct,
    upper_central_term, SaturatedSubgroup,
};
use polywreath::wreath::{MonomialElement, PowerMonomial, WreathElement};

fn pp(p: u32, n: u32) -> PrimeParams {
    PrimeParams::new(p, n).unwrap()
}

fn monomial_element(params: PrimeParams, m: &PowerMonomial) -> WreathElement {
    WreathElement::from_monomial(params, &MonomialElement::new(params, 1, m.clone()))
}

/// Growth of the normalizer chain: log_p |N_i : N_(i-1)| = q_(p,i+1) for
/// 1 <= i <= n-1, at (3,5) and (5,3), with the q-values produced by the
/// partition enumerator and double-checked against the independent
/// bounded-multiplicity count.
#[test]
fn criterion_1_normalizer_growth() {
    let start = Instant::now();
    // the enumerator agrees with "all bounded-multiplicity partitions minus
    // the single-part one" before its values are used as predictions
    for p in [3, 5] {
        for i in 1..=12 {
            assert_eq!(
                count_partitions(p, i),
                count_bounded_multiplicity(p, i) - 1,
                "partition identity p={p} i={i}"
            );
        }
    }
    let table3 = q_table(3, 5);
    assert_eq!(
        [table3.q(2), table3.q(3), table3.q(4), table3.q(5)],
        [1, 2, 5, 9]
    );

    let params = pp(3, 5);
    let chain = normalizer_chain_subgroups(params, &SaturatedSubgroup::canonical_regular(params), Some(5));
    for i in 1..=4u64 {
        let log_index =
            chain[i as usize + 1].log_order() - chain[i as usize].log_order();
        assert_eq!(
            log_index,
            table3.q(i + 1),
            "(3,5) step {i}: log_3 index vs q_(3,{})",
            i + 1
        );
    }

    let params = pp(5, 3);
    let table5 = q_table(5, 3);
    assert_eq!([table5.q(2), table5.q(3)], [1, 3]);
    let chain = normalizer_chain_subgroups(params, &SaturatedSubgroup::canonical_regular(params), Some(3));
    for i in 1..=2u64 {
        let log_index =
            chain[i as usize + 1].log_order() - chain[i as usize].log_order();
        assert_eq!(log_index, table5.q(i + 1), "(5,3) step {i}");
    }
    println!(
        "criterion 1 (normalizer growth, (3,5) i=1..4 and (5,3) i=1..2): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Chain correspondence at (3,4): the image of N_i in the graded algebra is
/// exactly the i-th idealizer term, basis for basis, at every computed step.
#[test]
fn criterion_2_chain_correspondence() {
    let start = Instant::now();
    let params = pp(3, 4);
    let group = normalizer_chain_subgroups(
        params,
        &SaturatedSubgroup::canonical_regular(params),
        None,
    );
    let lie = idealizer_chain_subrings(
        params,
        &HomogeneousSubring::canonical_torus(params),
        None,
    );
    assert_eq!(group.len(), lie.len(), "chains stabilize together");
    for (idx, (n_i, ni)) in group.iter().zip(&lie).enumerate() {
        let image = liealg::subring_image(n_i);
        assert_eq!(
            image.basis_set(),
            ni.basis_set(),
            "step {}: image of the normalizer term vs the idealizer term",
            idx as i64 - 1
        );
    }
    let cv = cross_validate(params, None);
    assert!(cv.all_equal, "cross validation diffs: {:?}", cv.diffs);
    println!(
        "criterion 2 (chain correspondence at (3,4), {} steps): PASS [{:.2?}]",
        cv.steps.len(),
        start.elapsed()
    );
}

/// Coincidence of the central series at (3,2) and (3,3): the iteratively
/// computed upper series equals the lower series term by term under
/// Z_i = gamma_(p^(n-1)+1-i), and the two series coincide as term sets.
/// At (3,2) the same is confirmed over all 81 elements with permutation
/// tables only.
#[test]
fn criterion_3_series_coincidence() {
    let start = Instant::now();
    for (p, n) in [(3, 2), (3, 3)] {
        let params = pp(p, n);
        let class = params.class();
        let direct = upper_central_series_direct(params);
        assert_eq!(direct.len() as u64, class + 1, "series length at ({p},{n})");
        for i in 0..=class {
            let gamma_index = class + 1 - i;
            let expected = if i == 0 {
                SaturatedSubgroup::trivial(params)
            } else {
                lower_central_term(params, gamma_index).unwrap()
            };
            assert_eq!(
                direct[i as usize], expected,
                "Z_{i} vs gamma_{gamma_index} at ({p},{n})"
            );
            assert_eq!(direct[i as usize], upper_central_term(params, i));
        }
        // as sets of subgroups the two series are identical
        let uppers: Vec<_> = direct.iter().map(|s| s.basis_set().clone()).collect();
        let lowers: Vec<_> = (1..=class + 1)
            .map(|i| lower_central_term(params, i).unwrap().basis_set().clone())
            .collect();
        assert_eq!(
            uppers.iter().collect::<std::collections::BTreeSet<_>>(),
            lowers.iter().collect::<std::collections::BTreeSet<_>>(),
            "term sets at ({p},{n})"
        );
    }
    // full brute force over the order-81 group
    let params = pp(3, 2);
    let perm_series = oracle::upper_series_perms(params).unwrap();
    assert_eq!(perm_series.len() as u64, params.class() + 1);
    for (i, z) in perm_series.iter().enumerate() {
        let closed = upper_central_term(params, i as u64);
        assert_eq!(
            z,
            &oracle::subgroup_perm_set(&closed).unwrap(),
            "brute-force Z_{i} at (3,2)"
        );
    }
    println!(
        "criterion 3 (series coincidence at (3,2) and (3,3), brute force at (3,2)): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Symbolic multiplication and commutators against permutation tables:
/// exhaustive over monomial pairs at (3,2) and (3,3), and 1000 random
/// full-element pairs at each of (3,3) and (5,2).
#[test]
fn criterion_4_oracle_equivalence() {
    let start = Instant::now();
    let mut exhaustive_pairs = 0;
    for (p, n) in [(3, 2), (3, 3)] {
        let params = pp(p, n);
        for a in basis_b(params) {
            for b in basis_b(params) {
                let ea = monomial_element(params, &a);
                let eb = monomial_element(params, &b);
                let pa = ea.to_permutation().unwrap();
                let pb = eb.to_permutation().unwrap();
                assert_eq!(
                    ea.multiply(&eb).unwrap().to_permutation().unwrap(),
                    pa.compose(&pb).unwrap(),
                    "multiply vs composition at ({p},{n})"
                );
                let table_comm = pa
                    .inverse()
                    .compose(&pb.inverse())
                    .unwrap()
                    .compose(&pa)
                    .unwrap()
                    .compose(&pb)
                    .unwrap();
                assert_eq!(
                    ea.commutator(&eb).unwrap().to_permutation().unwrap(),
                    table_comm,
                    "commutator vs table commutator at ({p},{n})"
                );
                exhaustive_pairs += 1;
            }
        }
    }
    let mut random_pairs = 0;
    for (p, n) in [(3, 2), (3, 3), (5, 2)] {
        let params = pp(p, n);
        let mut rng = StdRng::seed_from_u64(0xACCE01);
        for _ in 0..1000 {
            let u = WreathElement::random(params, &mut rng);
            let v = WreathElement::random(params, &mut rng);
            assert_eq!(
                u.multiply(&v).unwrap().to_permutation().unwrap(),
                u.to_permutation()
                    .unwrap()
                    .compose(&v.to_permutation().unwrap())
                    .unwrap(),
                "random pair at ({p},{n})"
            );
            assert!(u.multiply(&u.inverse()).unwrap().is_identity());
            random_pairs += 1;
        }
    }
    println!(
        "criterion 4 (oracle equivalence, {exhaustive_pairs} exhaustive monomial pairs + {random_pairs} random pairs): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Shift by substitution against the Taylor sum: exhaustive over monomials
/// on up to three variables at p = 3, random at p = 5.
#[test]
fn criterion_5_taylor_commutator() {
    let start = Instant::now();
    let mut compared = 0;
    for nvars in 1..=3usize {
        for f_exps in all_exponents(3, nvars) {
            for c_f in 1..3u32 {
                let f = TruncPoly::monomial(3, nvars, f_exps.clone(), c_f).unwrap();
                for var in 1..=nvars {
                    for h_exps in all_exponents(3, var - 1) {
                        for c_h in 1..3u32 {
                            let h = TruncPoly::monomial(3, var - 1, h_exps.clone(), c_h).unwrap();
                            assert_eq!(
                                f.shift(var, &h).unwrap(),
                                f.shift_taylor(var, &h).unwrap(),
                                "p=3 f={f} var={var} h={h}"
                            );
                            compared += 1;
                        }
                    }
                }
            }
        }
    }
    // random full polynomials at p = 5
    let mut rng = StdRng::seed_from_u64(0xACCE05);
    use rand::Rng;
    for _ in 0..400 {
        let nvars = rng.gen_range(1..=3usize);
        let f = TruncPoly::from_terms(
            5,
            nvars,
            all_exponents(5, nvars)
                .into_iter()
                .map(|e| (e, rng.gen_range(0..5u32))),
        )
        .unwrap();
        let var = rng.gen_range(1..=nvars);
        let h = TruncPoly::from_terms(
            5,
            var - 1,
            all_exponents(5, var - 1)
                .into_iter()
                .map(|e| (e, rng.gen_range(0..5u32))),
        )
        .unwrap();
        assert_eq!(f.shift(var, &h).unwrap(), f.shift_taylor(var, &h).unwrap());
        compared += 1;
    }
    println!(
        "criterion 5 (taylor shift agreement, {compared} comparisons): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Closed-form normal closures against brute-force conjugation closures:
/// exhaustive over the 4 monomial generators at (3,2), and over all 13
/// monomial generators at (3,3).
#[test]
fn criterion_6_normal_closure() {
    let start = Instant::now();
    let mut checked = 0;
    for (p, n) in [(3, 2), (3, 3)] {
        let params = pp(p, n);
        for m in basis_b(params) {
            let closed =
                normal_closure_monomial(params, &MonomialElement::new(params, 1, m.clone()))
                    .unwrap();
            let brute =
                oracle::normal_closure_perms(params, &monomial_element(params, &m)).unwrap();
            let span = oracle::subgroup_perm_set(&closed).unwrap();
            assert_eq!(
                span,
                brute,
                "closure of {} at ({p},{n})",
                polywreath::text::render_monomial(&m)
            );
            checked += 1;
        }
    }
    // at (3,2) also take the literal route: conjugate by every one of the
    // 81 group elements, then close under multiplication
    let params = pp(3, 2);
    let whole: Vec<_> = oracle::enumerate_group(params)
        .unwrap()
        .iter()
        .map(|w| w.to_permutation().unwrap())
        .collect();
    for m in basis_b(params) {
        let g = monomial_element(params, &m).to_permutation().unwrap();
        let conjugates: Vec<_> = whole
            .iter()
            .map(|w| w.inverse().compose(&g).unwrap().compose(w).unwrap())
            .collect();
        let literal = oracle::subgroup_closure(params, &conjugates).unwrap();
        let closed =
            normal_closure_monomial(params, &MonomialElement::new(params, 1, m.clone())).unwrap();
        assert_eq!(
            literal,
            oracle::subgroup_perm_set(&closed).unwrap(),
            "all-element conjugation closure of {}",
            polywreath::text::render_monomial(&m)
        );
    }
    println!(
        "criterion 6 (normal closures vs brute force, {checked} generators; all-element conjugation at (3,2)): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Every closure from criterion 6 contains gamma_(p^(k-1)+1) with log_p
/// index at most (n-k+1) p^(k-1).
#[test]
fn criterion_7_index_bound() {
    let start = Instant::now();
    let mut checked = 0;
    for (p, n) in [(3, 2), (3, 3)] {
        let params = pp(p, n);
        for m in basis_b(params) {
            let closed =
                normal_closure_monomial(params, &MonomialElement::new(params, 1, m.clone()))
                    .unwrap();
            let bound = structure::contains_gamma_bound(&closed, m.layer()).unwrap();
            assert!(
                bound.contains_gamma,
                "closure of {} misses gamma_{}",
                polywreath::text::render_monomial(&m),
                bound.gamma_index
            );
            assert!(
                bound.log_p_index <= bound.bound,
                "closure of {}: log index {} above bound {}",
                polywreath::text::render_monomial(&m),
                bound.log_p_index,
                bound.bound
            );
            checked += 1;
        }
    }
    println!(
        "criterion 7 (index bound on {checked} closures): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Lie structure: antisymmetry and the Jacobi identity exhaustively over
/// basis triples at (3,3) and (3,4); the center terms equal both the
/// iterated centralizers (basis route and exact linear algebra) and the
/// matching Lie powers at (3,2), (3,3) and (5,2).
#[test]
fn criterion_8_lie_structure() {
    let start = Instant::now();
    let mut triples = 0;
    for (p, n) in [(3, 3), (3, 4)] {
        let params = pp(p, n);
        let basis = basis_b(params);
        for a in &basis {
            for b in &basis {
                let ea = LieElement::basis(params, a.clone());
                let eb = LieElement::basis(params, b.clone());
                assert!(
                    ea.bracket(&eb)
                        .unwrap()
                        .add(&eb.bracket(&ea).unwrap())
                        .unwrap()
                        .is_zero(),
                    "antisymmetry at ({p},{n})"
                );
                for c in &basis {
                    let ec = LieElement::basis(params, c.clone());
                    let jac = ea
                        .bracket(&eb)
                        .unwrap()
                        .bracket(&ec)
                        .unwrap()
                        .add(&eb.bracket(&ec).unwrap().bracket(&ea).unwrap())
                        .unwrap()
                        .add(&ec.bracket(&ea).unwrap().bracket(&eb).unwrap())
                        .unwrap();
                    assert!(jac.is_zero(), "jacobi at ({p},{n})");
                    triples += 1;
                }
            }
        }
    }
    for (p, n) in [(3, 2), (3, 3), (5, 2)] {
        let params = pp(p, n);
        let class = params.class();
        let direct = lie_upper_series_direct(params);
        let linear = oracle::lie_upper_series_linear(params);
        assert_eq!(direct.len() as u64, class + 1);
        assert_eq!(linear.len() as u64, class + 1);
        for m in 0..=class {
            let xi = lie_center_term(params, m);
            assert_eq!(direct[m as usize], xi, "xi_{m} vs iterated centralizer at ({p},{n})");
            // the exact linear route confirms the dimension and the span
            assert_eq!(linear[m as usize].dim(), xi.dim(), "linear Z_{m} at ({p},{n})");
            for v in oracle::subring_coordinates(params, &xi) {
                assert!(linear[m as usize].contains(&v));
            }
            let power = if m == class {
                HomogeneousSubring::whole_algebra(params)
            } else {
                lie_power(params, class + 1 - m).unwrap()
            };
            assert_eq!(xi, power, "xi_{m} vs the matching Lie power at ({p},{n})");
        }
        for i in 1..=class + 1 {
            assert_eq!(
                lie_power(params, i).unwrap(),
                lie_power_iterated(params, i).unwrap(),
                "power routes at ({p},{n}), i={i}"
            );
        }
    }
    println!(
        "criterion 8 (lie structure, {triples} jacobi triples + center/power towers): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// The correspondence between saturated normal subgroups and homogeneous
/// ideals is a poset bijection, exhaustively over all basis subsets at
/// (3,2).
#[test]
fn criterion_9_poset_bijection() {
    let start = Instant::now();
    let params = pp(3, 2);
    let basis = basis_b(params);
    let mut saturated_normal = Vec::new();
    let mut ideals = Vec::new();
    for mask in 0u32..(1 << basis.len()) {
        let subset: std::collections::BTreeSet<PowerMonomial> = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, m)| m.clone())
            .collect();
        if let Ok(s) = SaturatedSubgroup::new(params, subset.clone()) {
            if s.is_normal() {
                // confirm normality against the permutation tables too
                let span = oracle::subgroup_perm_set(&s).unwrap();
                let normal_by_perms = oracle::basis_perms(params).unwrap().iter().all(|g| {
                    let ginv = g.inverse();
                    span.iter().all(|images| {
                        let perm = polywreath::wreath::PermutationImage {
                            p: 3,
                            n: 2,
                            images: images.clone(),
                        };
                        let conj = ginv.compose(&perm).unwrap().compose(g).unwrap();
                        span.contains(&conj.images)
                    })
                });
                assert!(normal_by_perms, "symbolic and permutation normality agree");
                saturated_normal.push(subset.clone());
            }
        }
        if let Ok(h) = HomogeneousSubring::new(params, subset.clone()) {
            if h.is_ideal() {
                ideals.push(subset);
            }
        }
    }
    assert_eq!(saturated_normal, ideals, "the two families coincide");
    // both directions are mutually inverse and inclusion-preserving (the
    // maps are the identity on basis sets, so inclusion is preserved by
    // construction; assert it anyway on every pair)
    for a in &saturated_normal {
        let s = SaturatedSubgroup::new(params, a.clone()).unwrap();
        let image = liealg::subring_image(&s);
        assert_eq!(image.basis_set(), a);
        assert_eq!(&liealg::epsilon(&image).unwrap(), &s);
        for b in &saturated_normal {
            let sb = SaturatedSubgroup::new(params, b.clone()).unwrap();
            let ib = liealg::subring_image(&sb);
            assert_eq!(
                s.contains_subgroup(&sb),
                image.contains_subring(&ib),
                "order preserved"
            );
        }
    }
    for a in &ideals {
        let h = HomogeneousSubring::new(params, a.clone()).unwrap();
        let eps = liealg::epsilon(&h).unwrap();
        assert!(eps.is_normal());
        assert_eq!(&liealg::subring_image(&eps), &h);
    }
    println!(
        "criterion 9 (poset bijection at (3,2): {} normal saturated subgroups = {} homogeneous ideals): PASS [{:.2?}]",
        saturated_normal.len(),
        ideals.len(),
        start.elapsed()
    );
}

/// Intertwining of commutators and brackets through the graded map,
/// exhaustively over monomial pairs at (3,3): with a of depth i and b of
/// depth j, phi_(i+j) of [a,b] equals [phi a, phi b].
#[test]
fn criterion_10_intertwining() {
    let start = Instant::now();
    let params = pp(3, 3);
    let basis = basis_b(params);
    let mut pairs = 0;
    let mut nonvanishing = 0;
    for a in &basis {
        for b in &basis {
            let ga = monomial_element(params, a);
            let gb = monomial_element(params, b);
            let i = liealg::gamma_depth(params, &ga).unwrap();
            let j = liealg::gamma_depth(params, &gb).unwrap();
            let comm = ga.commutator(&gb).unwrap();
            if !comm.is_identity() {
                nonvanishing += 1;
            }
            let lhs = liealg::phi_at(params, &comm, i + j);
            let rhs = liealg::phi(params, &ga)
                .bracket(&liealg::phi(params, &gb))
                .unwrap();
            assert_eq!(
                lhs,
                rhs,
                "pair ({}, {})",
                polywreath::text::render_monomial(a),
                polywreath::text::render_monomial(b)
            );
            pairs += 1;
        }
    }
    println!(
        "criterion 10 (intertwining at (3,3), {pairs} pairs, {nonvanishing} nonvanishing): PASS [{:.2?}]",
        start.elapsed()
    );
}
