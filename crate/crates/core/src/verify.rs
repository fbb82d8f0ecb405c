//! The self-check suite behind `verify`: every structural statement the
//! crate implements, exercised at the requested parameters with exhaustive
//! checks where they are affordable and seeded sampling where they are not.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::chains;
use crate::liealg::{self, HomogeneousSubring, LieElement};
use crate::oracle;
use crate::params::PrimeParams;
use crate::polyring::{all_exponents, TruncPoly};
use crate::structure::{self, SaturatedSubgroup};
use crate::wreath::{MonomialElement, PowerMonomial, WreathElement};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub exhaustive: bool,
    pub steps: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, samples: 200, exhaustive: false, steps: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub p: u32,
    pub n: u32,
    pub seed: u64,
    pub exhaustive: bool,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn text_lines(&self) -> Vec<String> {
        let mut lines = vec![format!(
            "# verify p={} n={} seed={} exhaustive={}",
            self.p, self.n, self.seed, self.exhaustive
        )];
        for c in &self.checks {
            lines.push(format!(
                "{} {} ({})",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        lines.push(format!(
            "{}: {} checks",
            if self.passed { "all passed" } else { "FAILURES" },
            self.checks.len()
        ));
        lines
    }
}

struct Runner {
    params: PrimeParams,
    rng: StdRng,
    samples: usize,
    exhaustive: bool,
    steps: Option<u64>,
    checks: Vec<CheckOutcome>,
}

impl Runner {
    fn record(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckOutcome { name: name.to_string(), passed, detail });
    }

    fn random_element(&mut self) -> WreathElement {
        WreathElement::random(self.params, &mut self.rng)
    }

    fn random_poly(&mut self, nvars: usize) -> TruncPoly {
        let p = self.params.p();
        let terms: Vec<_> = all_exponents(p, nvars)
            .into_iter()
            .map(|e| (e, self.rng.gen_range(0..p)))
            .collect();
        TruncPoly::from_terms(p, nvars, terms).expect("valid terms")
    }

    fn ring_axioms(&mut self) {
        let nvars = (self.params.n() as usize).saturating_sub(1).clamp(1, 3);
        let mut failures = 0;
        for _ in 0..self.samples {
            let a = self.random_poly(nvars);
            let b = self.random_poly(nvars);
            let c = self.random_poly(nvars);
            let assoc = a.add(&b).unwrap().add(&c).unwrap() == a.add(&b.add(&c).unwrap()).unwrap();
            let comm = a.add(&b).unwrap() == b.add(&a).unwrap();
            let inv = a.add(&a.scalar_mul(self.params.p() - 1)).unwrap().is_zero();
            let dist = a.mul(&b.add(&c).unwrap()).unwrap()
                == a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            let mul_comm = a.mul(&b).unwrap() == b.mul(&a).unwrap();
            let mul_assoc =
                a.mul(&b).unwrap().mul(&c).unwrap() == a.mul(&b.mul(&c).unwrap()).unwrap();
            if !(assoc && comm && inv && dist && mul_comm && mul_assoc) {
                failures += 1;
            }
        }
        self.record(
            "ring_axioms",
            failures == 0,
            format!("{} sampled triples on {nvars} variables", self.samples),
        );
    }

    fn evaluation_homomorphism(&mut self) {
        let nvars = (self.params.n() as usize).saturating_sub(1).clamp(1, 3);
        let p = self.params.p();
        let mut failures = 0;
        for _ in 0..self.samples {
            let a = self.random_poly(nvars);
            let b = self.random_poly(nvars);
            let point: Vec<u32> = (0..nvars).map(|_| self.rng.gen_range(0..p)).collect();
            let lhs = a.mul(&b).unwrap().evaluate(&point).unwrap();
            let rhs = crate::polyring::fp::mul(
                p,
                a.evaluate(&point).unwrap(),
                b.evaluate(&point).unwrap(),
            );
            if lhs != rhs {
                failures += 1;
            }
        }
        self.record(
            "evaluation_homomorphism",
            failures == 0,
            format!("{} sampled products", self.samples),
        );
    }

    fn taylor_shift(&mut self) {
        let p = self.params.p();
        let mut tested = 0;
        let mut ok = true;
        if p == 3 || self.exhaustive {
            for nvars in 1..=3usize {
                for f_exps in all_exponents(p, nvars) {
                    let f = TruncPoly::monomial(p, nvars, f_exps, 1).unwrap();
                    for var in 1..=nvars {
                        for h_exps in all_exponents(p, var - 1) {
                            for c in 1..p {
                                let h =
                                    TruncPoly::monomial(p, var - 1, h_exps.clone(), c).unwrap();
                                tested += 1;
                                ok &= f.shift(var, &h).unwrap()
                                    == f.shift_taylor(var, &h).unwrap();
                            }
                        }
                    }
                }
            }
        }
        for _ in 0..self.samples {
            let nvars = self.rng.gen_range(1..=3usize);
            let f = self.random_poly(nvars);
            let var = self.rng.gen_range(1..=nvars);
            let h = self.random_poly(var - 1);
            tested += 1;
            ok &= f.shift(var, &h).unwrap() == f.shift_taylor(var, &h).unwrap();
        }
        self.record("taylor_shift", ok, format!("{tested} shifts compared"));
    }

    fn oracle_monomials(&mut self) {
        let params = self.params;
        if params.point_count() > 1_000 {
            self.record("oracle_monomials", true, "skipped: permutation tables too large".into());
            return;
        }
        let basis = structure::basis_b(params);
        let mut ok = true;
        let mut pairs = 0;
        for a in &basis {
            for b in &basis {
                pairs += 1;
                let ea = WreathElement::from_monomial(
                    params,
                    &MonomialElement::new(params, 1, a.clone()),
                );
                let eb = WreathElement::from_monomial(
                    params,
                    &MonomialElement::new(params, 1, b.clone()),
                );
                let pa = ea.to_permutation().unwrap();
                let pb = eb.to_permutation().unwrap();
                // multiplication against table composition
                ok &= ea.multiply(&eb).unwrap().to_permutation().unwrap()
                    == pa.compose(&pb).unwrap();
                // symbolic commutator against the table commutator
                let sym = ea.commutator(&eb).unwrap().to_permutation().unwrap();
                let tab = pa
                    .inverse()
                    .compose(&pb.inverse())
                    .unwrap()
                    .compose(&pa)
                    .unwrap()
                    .compose(&pb)
                    .unwrap();
                ok &= sym == tab;
                // and the monomial fast path agrees with the generic route
                let fast = structure::monomial_commutator(params, a, b);
                ok &= fast == ea.commutator(&eb).unwrap();
            }
        }
        self.record("oracle_monomials", ok, format!("{pairs} monomial pairs, exhaustive"));
    }

    fn oracle_random_pairs(&mut self) {
        let params = self.params;
        if params.point_count() > 10_000 {
            self.record("oracle_random_pairs", true, "skipped: permutation tables too large".into());
            return;
        }
        let mut ok = true;
        for _ in 0..self.samples {
            let u = self.random_element();
            let v = self.random_element();
            let sym = u.multiply(&v).unwrap().to_permutation().unwrap();
            let tab = u
                .to_permutation()
                .unwrap()
                .compose(&v.to_permutation().unwrap())
                .unwrap();
            ok &= sym == tab;
            ok &= u.multiply(&u.inverse()).unwrap().is_identity();
        }
        self.record(
            "oracle_random_pairs",
            ok,
            format!("{} random pairs", self.samples),
        );
    }

    fn regular_action(&mut self) {
        let params = self.params;
        if params.point_count() > 10_000 {
            self.record("regular_action", true, "skipped: too many points".into());
            return;
        }
        let t = SaturatedSubgroup::canonical_regular(params);
        let span = oracle::subgroup_perm_set(&t).unwrap();
        let points = params.point_count() as usize;
        let orbit: std::collections::BTreeSet<u32> =
            span.iter().map(|images| images[0]).collect();
        let stabilizer = span.iter().filter(|im| im[0] == 0).count();
        let ok = span.len() == points && orbit.len() == points && stabilizer == 1;
        self.record(
            "regular_action",
            ok,
            format!("orbit {} of {points}, stabilizer {stabilizer}", orbit.len()),
        );
    }

    fn series_coincidence(&mut self) {
        let params = self.params;
        if params.class() > 200 {
            self.record("series_coincidence", true, "skipped: class too large".into());
            return;
        }
        let direct = structure::upper_central_series_direct(params);
        let mut ok = direct.len() as u64 == params.class() + 1;
        for (i, z) in direct.iter().enumerate() {
            ok &= z == &structure::upper_central_term(params, i as u64);
        }
        self.record(
            "series_coincidence",
            ok,
            format!("{} upper terms against the closed form", direct.len()),
        );
    }

    fn commutator_descent(&mut self) {
        // for each non-constant monomial, the constructed witness drops the
        // p-degree by exactly one
        let params = self.params;
        let p = self.params.p();
        let mut ok = true;
        let mut tested = 0;
        for m in structure::basis_b(params) {
            if m.exps().is_zero() {
                continue;
            }
            let j = m
                .exps()
                .iter()
                .position(|e| e != 0)
                .expect("non-constant")
                + 1;
            let witness = if j == 1 {
                PowerMonomial::delta(1)
            } else {
                let exps = crate::polyring::ExpVec::new(vec![(p - 1) as u8; j - 1]);
                PowerMonomial::new(params, j as u32, exps).expect("valid witness")
            };
            let c = structure::monomial_commutator(params, &m, &witness);
            let lt = structure::leading_term(params, c.layer(m.layer()), m.layer()).unwrap();
            let got = structure::pdeg(params, &lt).unwrap().value;
            let want = structure::pdeg_monomial(params, &m) - 1;
            ok &= got == want;
            // the commutator stays inside the monomial's own layer
            ok &= (1..=params.n())
                .filter(|&k| k != m.layer())
                .all(|k| c.layer(k).is_zero());
            tested += 1;
        }
        self.record("commutator_descent", ok, format!("{tested} witnesses"));
    }

    fn closure_oracle(&mut self) {
        let params = self.params;
        if params.point_count() > 100 {
            self.record("closure_oracle", true, "skipped: permutation tables too large".into());
            return;
        }
        let mut ok = true;
        let mut tested = 0;
        for m in structure::basis_b(params) {
            let elem = WreathElement::from_monomial(
                params,
                &MonomialElement::new(params, 1, m.clone()),
            );
            let brute = oracle::normal_closure_perms(params, &elem).unwrap();
            let closed =
                structure::normal_closure_monomial(params, &MonomialElement::new(params, 1, m))
                    .unwrap();
            ok &= brute == oracle::subgroup_perm_set(&closed).unwrap();
            tested += 1;
        }
        self.record("closure_oracle", ok, format!("{tested} closures against brute force"));
    }

    fn closure_bound(&mut self) {
        let params = self.params;
        let mut ok = true;
        let mut tested = 0;
        for m in structure::basis_b(params) {
            let closed =
                structure::normal_closure_monomial(params, &MonomialElement::new(params, 1, m.clone()))
                    .unwrap();
            let b = structure::contains_gamma_bound(&closed, m.layer()).unwrap();
            ok &= b.within_bound();
            tested += 1;
        }
        self.record("closure_bound", ok, format!("{tested} closures within the index bound"));
    }

    fn jacobi_antisymmetry(&mut self) {
        let params = self.params;
        let basis = structure::basis_b(params);
        let exhaustive = basis.len().pow(3) <= 75_000 || self.exhaustive;
        let mut ok = true;
        let mut tested = 0usize;
        let check = |a: &PowerMonomial, b: &PowerMonomial, c: &PowerMonomial| -> bool {
            let (a, b, c) = (
                LieElement::basis(params, a.clone()),
                LieElement::basis(params, b.clone()),
                LieElement::basis(params, c.clone()),
            );
            let anti = a
                .bracket(&b)
                .unwrap()
                .add(&b.bracket(&a).unwrap())
                .unwrap()
                .is_zero();
            let jacobi = a
                .bracket(&b)
                .unwrap()
                .bracket(&c)
                .unwrap()
                .add(&b.bracket(&c).unwrap().bracket(&a).unwrap())
                .unwrap()
                .add(&c.bracket(&a).unwrap().bracket(&b).unwrap())
                .unwrap()
                .is_zero();
            anti && jacobi
        };
        if exhaustive {
            for a in &basis {
                for b in &basis {
                    for c in &basis {
                        tested += 1;
                        ok &= check(a, b, c);
                    }
                }
            }
        } else {
            for _ in 0..self.samples {
                let a = &basis[self.rng.gen_range(0..basis.len())];
                let b = &basis[self.rng.gen_range(0..basis.len())];
                let c = &basis[self.rng.gen_range(0..basis.len())];
                tested += 1;
                ok &= check(a, b, c);
            }
        }
        self.record(
            "jacobi_antisymmetry",
            ok,
            format!("{tested} triples{}", if exhaustive { ", exhaustive" } else { "" }),
        );
    }

    fn centers_and_powers(&mut self) {
        let params = self.params;
        if params.class() > 200 {
            self.record("centers_and_powers", true, "skipped: class too large".into());
            return;
        }
        let class = params.class();
        let direct = liealg::lie_upper_series_direct(params);
        let mut ok = direct.len() as u64 == class + 1;
        for m in 0..=class {
            let xi = liealg::lie_center_term(params, m);
            ok &= direct.get(m as usize).map(|z| z == &xi).unwrap_or(false);
            let power = if m == class {
                HomogeneousSubring::whole_algebra(params)
            } else {
                liealg::lie_power(params, class + 1 - m).unwrap()
            };
            ok &= xi == power;
        }
        // both power routes agree
        for i in 1..=class + 1 {
            ok &= liealg::lie_power(params, i).unwrap()
                == liealg::lie_power_iterated(params, i).unwrap();
        }
        self.record(
            "centers_and_powers",
            ok,
            format!("{} center terms against powers", class + 1),
        );
    }

    fn intertwining(&mut self) {
        let params = self.params;
        let basis = structure::basis_b(params);
        let mut ok = true;
        let mut pairs = 0;
        for a in &basis {
            for b in &basis {
                pairs += 1;
                let ga = WreathElement::from_monomial(
                    params,
                    &MonomialElement::new(params, 1, a.clone()),
                );
                let gb = WreathElement::from_monomial(
                    params,
                    &MonomialElement::new(params, 1, b.clone()),
                );
                let i = liealg::gamma_depth(params, &ga).expect("monomial");
                let j = liealg::gamma_depth(params, &gb).expect("monomial");
                let lhs = liealg::phi_at(params, &ga.commutator(&gb).unwrap(), i + j);
                let rhs = liealg::phi(params, &ga)
                    .bracket(&liealg::phi(params, &gb))
                    .unwrap();
                ok &= lhs == rhs;
            }
        }
        self.record("intertwining", ok, format!("{pairs} monomial pairs, exhaustive"));
    }

    fn bijection(&mut self) {
        let params = self.params;
        let basis = structure::basis_b(params);
        if basis.len() > 13 {
            self.record("bijection", true, "skipped: basis too large to enumerate subsets".into());
            return;
        }
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
                    saturated_normal.push(subset.clone());
                }
            }
            if let Ok(h) = HomogeneousSubring::new(params, subset.clone()) {
                if h.is_ideal() {
                    ideals.push(subset);
                }
            }
        }
        // the two families coincide as subset families, and the maps between
        // them are mutually inverse
        let mut ok = saturated_normal == ideals;
        for subset in &saturated_normal {
            let s = SaturatedSubgroup::new(params, subset.clone()).unwrap();
            let image = liealg::subring_image(&s);
            ok &= image.basis_set() == subset;
            ok &= liealg::epsilon(&image).unwrap() == s;
        }
        for subset in &ideals {
            let h = HomogeneousSubring::new(params, subset.clone()).unwrap();
            let eps = liealg::epsilon(&h).unwrap();
            ok &= eps.basis_set() == subset;
            ok &= liealg::subring_image(&eps) == h;
        }
        self.record(
            "bijection",
            ok,
            format!(
                "{} saturated normal subgroups vs {} homogeneous ideals",
                saturated_normal.len(),
                ideals.len()
            ),
        );
    }

    fn chain_growth(&mut self) {
        let params = self.params;
        let report = chains::normalizer_chain(params, self.steps);
        let ok = report.predictions_hold();
        let predicted: Vec<String> = report
            .steps
            .iter()
            .filter_map(|s| s.predicted.map(|q| format!("{}={}", s.logp_index, q)))
            .collect();
        self.record(
            "chain_growth",
            ok,
            format!("predicted steps [{}]", predicted.join(", ")),
        );
    }

    fn chain_correspondence(&mut self) {
        let params = self.params;
        let cv = chains::cross_validate(params, self.steps);
        self.record(
            "chain_correspondence",
            cv.all_equal,
            format!("{} steps compared", cv.steps.len()),
        );
    }

    fn partition_identity(&mut self) {
        let p = self.params.p();
        let mut ok = true;
        for i in 1..=20 {
            ok &= chains::count_partitions(p, i) == chains::count_bounded_multiplicity(p, i) - 1;
        }
        self.record("partition_identity", ok, "enumerator against the generating function, i <= 20".into());
    }
}

/// Run the whole suite at the given parameters.
pub fn run_verify(params: PrimeParams, opts: &VerifyOptions) -> VerifyReport {
    let mut runner = Runner {
        params,
        rng: StdRng::seed_from_u64(opts.seed),
        samples: opts.samples,
        exhaustive: opts.exhaustive,
        steps: opts.steps,
        checks: Vec::new(),
    };
    runner.ring_axioms();
    runner.evaluation_homomorphism();
    runner.taylor_shift();
    runner.oracle_monomials();
    runner.oracle_random_pairs();
    runner.regular_action();
    runner.series_coincidence();
    runner.commutator_descent();
    runner.closure_oracle();
    runner.closure_bound();
    runner.jacobi_antisymmetry();
    runner.centers_and_powers();
    runner.intertwining();
    runner.bijection();
    runner.chain_growth();
    runner.chain_correspondence();
    runner.partition_identity();
    let passed = runner.checks.iter().all(|c| c.passed);
    VerifyReport {
        p: params.p(),
        n: params.n(),
        seed: opts.seed,
        exhaustive: opts.exhaustive,
        checks: runner.checks,
        passed,
    }
}
