//! Property tests for the algebraic laws and grammar round trips.

use proptest::prelude::*;

use polywreath::chains;
use polywreath::liealg::{self, LieElement};
use polywreath::params::PrimeParams;
use polywreath::polyring::{all_exponents, ExpVec, TruncPoly};
use polywreath::structure::{self, basis_b, pdeg_monomial};
use polywreath::text;
use polywreath::wreath::{PowerMonomial, WreathElement};

fn pp(p: u32, n: u32) -> PrimeParams {
    PrimeParams::new(p, n).unwrap()
}

/// A polynomial on `nvars` variables over F_p, one coefficient per monomial.
fn arb_poly(p: u32, nvars: usize) -> impl Strategy<Value = TruncPoly> {
    let count = (p as usize).pow(nvars as u32);
    prop::collection::vec(0..p, count).prop_map(move |coeffs| {
        TruncPoly::from_terms(
            p,
            nvars,
            all_exponents(p, nvars).into_iter().zip(coeffs),
        )
        .unwrap()
    })
}

fn arb_element(p: u32, n: u32) -> impl Strategy<Value = WreathElement> {
    let params = pp(p, n);
    let layers: Vec<_> = (1..=n).map(|k| arb_poly(p, k as usize - 1)).collect();
    layers.prop_map(move |layers| WreathElement::from_layers(params, layers).unwrap())
}

fn arb_lie(p: u32, n: u32) -> impl Strategy<Value = LieElement> {
    let params = pp(p, n);
    let basis = basis_b(params);
    let count = basis.len();
    prop::collection::vec(0..p, count).prop_map(move |coeffs| {
        LieElement::from_terms(
            params,
            basis.iter().cloned().zip(coeffs).map(|(m, c)| (c, m)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_is_an_elementary_abelian_group(
        a in arb_poly(3, 2),
        b in arb_poly(3, 2),
        c in arb_poly(3, 2),
    ) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.add(&TruncPoly::zero(3, 2)).unwrap(), a.clone());
        prop_assert!(a.add(&a.scalar_mul(2)).unwrap().is_zero());
    }

    #[test]
    fn mul_distributes_and_commutes(
        a in arb_poly(5, 1),
        b in arb_poly(5, 1),
        c in arb_poly(5, 1),
    ) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in arb_poly(3, 2),
        b in arb_poly(3, 2),
        x in 0..3u32,
        y in 0..3u32,
    ) {
        let point = [x, y];
        let lhs = a.mul(&b).unwrap().evaluate(&point).unwrap();
        let rhs = (a.evaluate(&point).unwrap() * b.evaluate(&point).unwrap()) % 3;
        prop_assert_eq!(lhs, rhs);
        let lhs = a.add(&b).unwrap().evaluate(&point).unwrap();
        let rhs = (a.evaluate(&point).unwrap() + b.evaluate(&point).unwrap()) % 3;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_axioms_through_the_oracle(
        u in arb_element(3, 2),
        v in arb_element(3, 2),
        w in arb_element(3, 2),
    ) {
        // associativity symbolically and on tables
        let uv_w = u.multiply(&v).unwrap().multiply(&w).unwrap();
        let u_vw = u.multiply(&v.multiply(&w).unwrap()).unwrap();
        prop_assert_eq!(&uv_w, &u_vw);
        prop_assert_eq!(
            uv_w.to_permutation().unwrap(),
            u.to_permutation().unwrap()
                .compose(&v.to_permutation().unwrap()).unwrap()
                .compose(&w.to_permutation().unwrap()).unwrap()
        );
        // inverses
        prop_assert!(u.multiply(&u.inverse()).unwrap().is_identity());
        prop_assert!(u.inverse().multiply(&u).unwrap().is_identity());
    }

    #[test]
    fn element_text_roundtrip(w in arb_element(3, 3)) {
        let rendered = text::render_element(&w);
        let back = text::parse_element(pp(3, 3), &rendered).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn poly_text_roundtrip(f in arb_poly(5, 2)) {
        let rendered = text::render_poly(&f);
        let back = text::parse_poly(5, 2, &rendered).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn lie_text_roundtrip(e in arb_lie(3, 3)) {
        let rendered = text::render_lie_element(&e);
        let back = text::parse_lie_element(pp(3, 3), &rendered).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn lie_bilinearity_and_antisymmetry(
        a in arb_lie(3, 3),
        b in arb_lie(3, 3),
        c in arb_lie(3, 3),
    ) {
        prop_assert!(a.bracket(&a).unwrap().is_zero());
        prop_assert!(
            a.bracket(&b).unwrap().add(&b.bracket(&a).unwrap()).unwrap().is_zero()
        );
        let lhs = a.add(&b).unwrap().bracket(&c).unwrap();
        let rhs = a.bracket(&c).unwrap().add(&b.bracket(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_at_3_4_sampled(
        (ai, bi, ci) in (0usize..40, 0usize..40, 0usize..40),
    ) {
        let params = pp(3, 4);
        let basis = basis_b(params);
        let a = LieElement::basis(params, basis[ai].clone());
        let b = LieElement::basis(params, basis[bi].clone());
        let c = LieElement::basis(params, basis[ci].clone());
        let jac = a.bracket(&b).unwrap().bracket(&c).unwrap()
            .add(&b.bracket(&c).unwrap().bracket(&a).unwrap()).unwrap()
            .add(&c.bracket(&a).unwrap().bracket(&b).unwrap()).unwrap();
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn gamma_filtration_respects_commutators(
        (ai, bi) in (0usize..13, 0usize..13),
    ) {
        // commutators of series members land as deep as the sum of depths
        let params = pp(3, 3);
        let basis = basis_b(params);
        let a = &basis[ai];
        let b = &basis[bi];
        let depth_a = params.class() - pdeg_monomial(params, a);
        let depth_b = params.class() - pdeg_monomial(params, b);
        let c = structure::monomial_commutator(params, a, b);
        if let Some(depth_c) = liealg::gamma_depth(params, &c) {
            prop_assert!(depth_c >= depth_a + depth_b);
            // strict p-degree decrease for cross-layer pairs
            if a.layer() > b.layer() {
                let lt = structure::leading_term(params, c.layer(a.layer()), a.layer()).unwrap();
                prop_assert!(
                    structure::pdeg(params, &lt).unwrap().value
                        < pdeg_monomial(params, a)
                );
            }
        }
    }

    #[test]
    fn random_elements_of_closures_stay_inside(seed in 0u64..500) {
        // spot membership: conjugates of the generator land in the closure
        let params = pp(3, 3);
        let basis = basis_b(params);
        let m = &basis[(seed % 13) as usize];
        let closure = structure::normal_closure_monomial(
            params,
            &polywreath::wreath::MonomialElement::new(params, 1, m.clone()),
        ).unwrap();
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let g = WreathElement::random(params, &mut rng);
        let elem = WreathElement::from_monomial(
            params,
            &polywreath::wreath::MonomialElement::new(params, 1, m.clone()),
        );
        let conj = g.inverse().multiply(&elem).unwrap().multiply(&g).unwrap();
        prop_assert!(closure.contains(&conj));
    }
}

#[test]
fn saturation_is_preserved_by_layer_slicing() {
    // commutator closure of each layer slice, and the slices multiply back
    for (p, n) in [(3, 2), (3, 3)] {
        let params = pp(p, n);
        for i in 1..=params.class() {
            let s = structure::lower_central_term(params, i).unwrap();
            let mut total = 0;
            for k in 1..=params.n() {
                let slice = s.intersect_layer(k);
                total += slice.basis_len();
                // a single-layer slice is abelian, hence a subgroup
                assert!(structure::SaturatedSubgroup::new(
                    params,
                    slice.basis_set().clone()
                )
                .is_ok());
            }
            assert_eq!(total, s.basis_len());
        }
    }
}

#[test]
fn cross_layer_commutators_strictly_drop_the_degree() {
    // exhaustive at (3,3): a nontrivial commutator of monomials from
    // different layers has strictly smaller p-degree than the higher one
    let params = pp(3, 3);
    let basis = basis_b(params);
    for a in &basis {
        for b in &basis {
            if a.layer() <= b.layer() {
                continue;
            }
            let c = structure::monomial_commutator(params, a, b);
            if c.is_identity() {
                continue;
            }
            let lt = structure::leading_term(params, c.layer(a.layer()), a.layer()).unwrap();
            assert!(
                structure::pdeg(params, &lt).unwrap().value < pdeg_monomial(params, a),
                "[{}, {}]",
                text::render_monomial(a),
                text::render_monomial(b)
            );
        }
    }
}

#[test]
fn jacobi_exhaustive_at_5_2() {
    let params = pp(5, 2);
    let basis = basis_b(params);
    for a in &basis {
        for b in &basis {
            for c in &basis {
                let (a, b, c) = (
                    LieElement::basis(params, a.clone()),
                    LieElement::basis(params, b.clone()),
                    LieElement::basis(params, c.clone()),
                );
                let jac = a
                    .bracket(&b)
                    .unwrap()
                    .bracket(&c)
                    .unwrap()
                    .add(&b.bracket(&c).unwrap().bracket(&a).unwrap())
                    .unwrap()
                    .add(&c.bracket(&a).unwrap().bracket(&b).unwrap())
                    .unwrap();
                assert!(jac.is_zero());
            }
        }
    }
}

#[test]
fn center_power_tower_at_3_4() {
    let params = pp(3, 4);
    let class = params.class();
    let direct = liealg::lie_upper_series_direct(params);
    assert_eq!(direct.len() as u64, class + 1);
    for m in 0..=class {
        let xi = liealg::lie_center_term(params, m);
        assert_eq!(direct[m as usize], xi, "xi_{m} at (3,4)");
        let power = if m == class {
            polywreath::liealg::HomogeneousSubring::whole_algebra(params)
        } else {
            liealg::lie_power(params, class + 1 - m).unwrap()
        };
        assert_eq!(xi, power, "power match at m={m}");
    }
}

#[test]
fn commutator_descent_witnesses_at_3_3() {
    // for every non-constant monomial a witness drops the degree by one
    let params = pp(3, 3);
    let p = 3u32;
    for m in basis_b(params) {
        if m.exps().is_zero() {
            continue;
        }
        let j = m.exps().iter().position(|e| e != 0).unwrap() + 1;
        let witness = if j == 1 {
            PowerMonomial::delta(1)
        } else {
            PowerMonomial::new(
                params,
                j as u32,
                ExpVec::new(vec![(p - 1) as u8; j - 1]),
            )
            .unwrap()
        };
        let c = structure::monomial_commutator(params, &m, &witness);
        let lt = structure::leading_term(params, c.layer(m.layer()), m.layer()).unwrap();
        assert_eq!(
            structure::pdeg(params, &lt).unwrap().value,
            pdeg_monomial(params, &m) - 1,
            "witness for {}",
            text::render_monomial(&m)
        );
    }
}

#[test]
fn chain_growth_matches_partitions_at_many_scales() {
    for (p, n) in [(3, 3), (3, 4), (3, 5), (5, 2), (5, 3)] {
        let params = pp(p, n);
        let report = chains::normalizer_chain(params, None);
        assert!(report.predictions_hold(), "({p},{n})");
        let lie = chains::idealizer_chain(params, None);
        assert!(lie.predictions_hold(), "lie ({p},{n})");
    }
}

#[test]
fn chain_steps_are_saturated_and_monotone() {
    let params = pp(3, 4);
    let chain = chains::normalizer_chain_subgroups(
        params,
        &structure::SaturatedSubgroup::canonical_regular(params),
        None,
    );
    for w in chain.windows(2) {
        assert!(w[1].contains_subgroup(&w[0]));
    }
    // each term rebuilt from its own basis passes the saturation validation
    for s in &chain {
        assert!(structure::SaturatedSubgroup::new(params, s.basis_set().clone()).is_ok());
    }
}
