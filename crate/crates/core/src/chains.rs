//! Normalizer and idealizer chains, restricted partition counting, and the
//! growth comparison between the two.
//!
//! Both chains start from the canonical regular subgroup (its image on the
//! Lie side) and iterate the normalizer (idealizer). Writing t_(p,i) for the
//! number of partitions of i into at least two parts with every part
//! repeated at most p-1 times and q_(p,i) for its partial sums, the expected
//! growth of step i is p^q_(p,i+1) for 1 <= i <= n-1; steps outside that
//! window are reported as data without a prediction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{idealizer, subring_image, HomogeneousSubring};
use crate::params::PrimeParams;
use crate::structure::{basis_b, monomial_commutator, SaturatedSubgroup};
use crate::wreath::PowerMonomial;

/// Number of partitions of `i` into at least two parts, each part repeated
/// at most p-1 times. Exact enumeration.
pub fn count_partitions(p: u32, i: u64) -> u64 {
    fn rec(remaining: u64, max_part: u64, parts_so_far: u64, max_mult: u64) -> u64 {
        if remaining == 0 {
            return if parts_so_far >= 2 { 1 } else { 0 };
        }
        let mut total = 0;
        let top = max_part.min(remaining);
        for part in (1..=top).rev() {
            for mult in 1..=max_mult.min(remaining / part) {
                if part * mult <= remaining {
                    total += rec(remaining - part * mult, part - 1, parts_so_far + mult, max_mult);
                }
            }
        }
        total
    }
    if i == 0 {
        return 0;
    }
    rec(i, i, 0, p as u64 - 1)
}

/// Number of partitions of `i` (any number of parts, at least one) with
/// every part repeated at most p-1 times, by the bounded-multiplicity
/// generating function. Independent of `count_partitions`; the two are tied
/// by "all = at-least-two + the single-part partition".
pub fn count_bounded_multiplicity(p: u32, i: u64) -> u64 {
    if i == 0 {
        return 0;
    }
    let n = i as usize;
    // product over parts k of (1 + x^k + ... + x^((p-1)k)), coefficient of x^i
    let mut table = vec![0u64; n + 1];
    table[0] = 1;
    for part in 1..=n {
        let mut next = vec![0u64; n + 1];
        for (deg, &c) in table.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut mult = 0u64;
            while mult < p as u64 && deg + (mult as usize) * part <= n {
                next[deg + (mult as usize) * part] += c;
                mult += 1;
            }
        }
        table = next;
    }
    table[n]
}

/// The sequences t_(p,i) and their partial sums q_(p,i) for i = 1..=up_to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionTable {
    pub p: u32,
    pub t: Vec<u64>,
    pub q: Vec<u64>,
}

impl PartitionTable {
    pub fn up_to(&self) -> u64 {
        self.t.len() as u64
    }

    /// t_(p,i), 1-based.
    pub fn t(&self, i: u64) -> u64 {
        self.t[i as usize - 1]
    }

    /// q_(p,i), 1-based.
    pub fn q(&self, i: u64) -> u64 {
        self.q[i as usize - 1]
    }
}

pub fn q_table(p: u32, up_to: u64) -> PartitionTable {
    let mut t = Vec::with_capacity(up_to as usize);
    let mut q = Vec::with_capacity(up_to as usize);
    let mut acc = 0u64;
    for i in 1..=up_to {
        let ti = count_partitions(p, i);
        acc += ti;
        t.push(ti);
        q.push(acc);
    }
    PartitionTable { p, t, q }
}

/// Normalizer of a saturated subgroup: the span of all monomial generators
/// whose commutator with every basis element of S stays in S.
pub fn normalizer(s: &SaturatedSubgroup) -> SaturatedSubgroup {
    let params = s.params();
    let basis: BTreeSet<PowerMonomial> = basis_b(params)
        .into_iter()
        .filter(|g| {
            s.basis()
                .all(|m| s.contains(&monomial_commutator(params, g, m)))
        })
        .collect();
    SaturatedSubgroup::new(params, basis)
        .expect("the normalizer of a saturated subgroup is saturated")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Normalizer,
    Idealizer,
}

/// One chain step: `i` counts from 0 (the first normalizer), `basis` is the
/// basis size of N_i, `logp_index` is log_p |N_i : N_(i-1)| and `predicted`
/// carries q_(p,i+1) where the growth statement applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub i: u32,
    pub basis: u64,
    pub logp_index: u64,
    pub predicted: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub p: u32,
    pub n: u32,
    pub kind: ChainKind,
    pub steps: Vec<ChainStep>,
}

impl ChainReport {
    /// Every predicted step matches its computed index.
    pub fn predictions_hold(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.predicted.is_none_or(|q| q == s.logp_index))
    }

    /// CSV with the same columns as the JSON steps.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,basis,logp_index,predicted\n");
        for s in &self.steps {
            let pred = s.predicted.map(|q| q.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", s.i, s.basis, s.logp_index, pred));
        }
        out
    }
}

/// Hard cap on chain length; stabilization stops the iteration well before.
fn step_guard(params: PrimeParams, requested: Option<u64>) -> u64 {
    let natural = params.class().min(10_000);
    requested.map_or(natural, |r| r.min(natural))
}

/// The group chain as subgroups, starting with the seed at index 0.
/// Iteration stops at the first repeated term or at the guard.
pub fn normalizer_chain_subgroups(
    params: PrimeParams,
    start: &SaturatedSubgroup,
    max_steps: Option<u64>,
) -> Vec<SaturatedSubgroup> {
    let guard = step_guard(params, max_steps);
    let mut chain = vec![start.clone()];
    for _ in 0..guard {
        let prev = chain.last().expect("nonempty");
        let next = normalizer(prev);
        let stabilized = next.basis_len() == prev.basis_len();
        chain.push(next);
        if stabilized {
            break;
        }
    }
    chain
}

/// The Lie chain as subrings, starting with the seed at index 0.
pub fn idealizer_chain_subrings(
    params: PrimeParams,
    start: &HomogeneousSubring,
    max_steps: Option<u64>,
) -> Vec<HomogeneousSubring> {
    let guard = step_guard(params, max_steps);
    let mut chain = vec![start.clone()];
    for _ in 0..guard {
        let prev = chain.last().expect("nonempty");
        let next = idealizer(prev);
        let stabilized = next.dim() == prev.dim();
        chain.push(next);
        if stabilized {
            break;
        }
    }
    chain
}

fn report_from_sizes(
    params: PrimeParams,
    kind: ChainKind,
    sizes: &[u64],
    predict: bool,
) -> ChainReport {
    let table = q_table(params.p(), sizes.len() as u64 + 1);
    let steps = sizes
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let i = i as u32;
            let predicted = if predict && i >= 1 && (i as u64) < params.n() as u64 {
                Some(table.q(i as u64 + 1))
            } else {
                None
            };
            ChainStep { i, basis: w[1], logp_index: w[1] - w[0], predicted }
        })
        .collect();
    ChainReport { p: params.p(), n: params.n(), kind, steps }
}

/// Normalizer chain from the canonical regular subgroup, with predictions.
pub fn normalizer_chain(params: PrimeParams, max_steps: Option<u64>) -> ChainReport {
    let start = SaturatedSubgroup::canonical_regular(params);
    normalizer_chain_from(params, &start, max_steps, true)
}

/// Normalizer chain from an arbitrary saturated seed. Predictions only
/// apply to the canonical start.
pub fn normalizer_chain_from(
    params: PrimeParams,
    start: &SaturatedSubgroup,
    max_steps: Option<u64>,
    predict: bool,
) -> ChainReport {
    let chain = normalizer_chain_subgroups(params, start, max_steps);
    let sizes: Vec<u64> = chain.iter().map(|s| s.log_order()).collect();
    report_from_sizes(params, ChainKind::Normalizer, &sizes, predict)
}

/// Idealizer chain from the canonical torus, with predictions.
pub fn idealizer_chain(params: PrimeParams, max_steps: Option<u64>) -> ChainReport {
    let start = HomogeneousSubring::canonical_torus(params);
    idealizer_chain_from(params, &start, max_steps, true)
}

pub fn idealizer_chain_from(
    params: PrimeParams,
    start: &HomogeneousSubring,
    max_steps: Option<u64>,
    predict: bool,
) -> ChainReport {
    let chain = idealizer_chain_subrings(params, start, max_steps);
    let sizes: Vec<u64> = chain.iter().map(|s| s.dim() as u64).collect();
    report_from_sizes(params, ChainKind::Idealizer, &sizes, predict)
}

/// Per-step comparison of the two chains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossStep {
    pub i: u32,
    pub group_logp_index: u64,
    pub lie_dim_increment: u64,
    pub increments_equal: bool,
    /// The image of N_i is exactly the i-th idealizer term, basis for basis.
    pub image_matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub p: u32,
    pub n: u32,
    pub steps: Vec<CrossStep>,
    pub all_equal: bool,
    pub diffs: Vec<String>,
}

/// Run both chains side by side and compare growth and images.
pub fn cross_validate(params: PrimeParams, max_steps: Option<u64>) -> CrossValidation {
    let group = normalizer_chain_subgroups(
        params,
        &SaturatedSubgroup::canonical_regular(params),
        max_steps,
    );
    let lie = idealizer_chain_subrings(
        params,
        &HomogeneousSubring::canonical_torus(params),
        max_steps,
    );
    let mut steps = Vec::new();
    let mut diffs = Vec::new();
    let common = group.len().min(lie.len());
    for idx in 1..common {
        let i = idx as u32 - 1;
        let group_logp_index = group[idx].log_order() - group[idx - 1].log_order();
        let lie_dim_increment = (lie[idx].dim() - lie[idx - 1].dim()) as u64;
        let increments_equal = group_logp_index == lie_dim_increment;
        let image = subring_image(&group[idx]);
        let image_matches = image.basis_set() == lie[idx].basis_set();
        if !increments_equal {
            diffs.push(format!(
                "step {i}: group index p^{group_logp_index} vs lie increment {lie_dim_increment}"
            ));
        }
        if !image_matches {
            diffs.push(format!("step {i}: image of N_{i} differs from the idealizer term"));
        }
        steps.push(CrossStep {
            i,
            group_logp_index,
            lie_dim_increment,
            increments_equal,
            image_matches,
        });
    }
    if group.len() != lie.len() {
        diffs.push(format!(
            "chains stabilized at different lengths: {} vs {}",
            group.len(),
            lie.len()
        ));
    }
    let all_equal = diffs.is_empty();
    CrossValidation { p: params.p(), n: params.n(), steps, all_equal, diffs }
}

/// Read a whitespace-separated `index value` sequence file.
pub fn read_b_file(text: &str) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let idx = parts
            .next()
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or_else(|| Error::Parse {
                pos: lineno,
                msg: format!("line {}: expected an index", lineno + 1),
            })?;
        let value = parts
            .next()
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or_else(|| Error::Parse {
                pos: lineno,
                msg: format!("line {}: expected a value", lineno + 1),
            })?;
        out.push((idx, value));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OeisMatch {
    /// Which computed sequence matched: "t", "q", or "t_plus_singleton".
    pub series: String,
    /// File index minus computed index.
    pub shift: i64,
    /// Number of overlapping entries compared.
    pub overlap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OeisComparison {
    pub p: u32,
    pub matches: Vec<OeisMatch>,
}

/// Compare a b-file against the computed partition sequences, trying small
/// index shifts. Reports every alignment that fits; asserts nothing.
pub fn compare_oeis(table: &PartitionTable, entries: &[(i64, i64)]) -> OeisComparison {
    let candidates: [(&str, Vec<u64>); 3] = [
        ("t", table.t.clone()),
        ("q", table.q.clone()),
        (
            "t_plus_singleton",
            table.t.iter().map(|&v| v + 1).collect(),
        ),
    ];
    let mut matches = Vec::new();
    for (name, series) in &candidates {
        for shift in -2i64..=2 {
            let mut overlap = 0usize;
            let mut ok = true;
            for &(idx, value) in entries {
                let i = idx - shift; // computed index the file row should equal
                if i < 1 || i as usize > series.len() {
                    continue;
                }
                overlap += 1;
                if value < 0 || series[i as usize - 1] != value as u64 {
                    ok = false;
                    break;
                }
            }
            if ok && overlap >= 3 {
                matches.push(OeisMatch { series: name.to_string(), shift, overlap });
            }
        }
    }
    OeisComparison { p: table.p, matches }
}
