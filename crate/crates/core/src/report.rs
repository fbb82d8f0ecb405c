//! Machine-readable reports behind the CLI subcommands and the browser
//! demo: one builder per view, serializable as JSON and renderable as text
//! or CSV by the front ends.

use serde::{Deserialize, Serialize};

use crate::chains::{self, ChainReport, CrossValidation, OeisComparison};
use crate::error::{Error, Result};
use crate::liealg::HomogeneousSubring;
use crate::params::PrimeParams;
use crate::structure::{
    self, contains_gamma_bound, leading_term, pdeg, upper_central_series_direct,
    SaturatedSubgroup,
};
use crate::text;
use crate::wreath::WreathElement;

/// Guard on series tables: p^(n-1) + 1 rows must stay printable.
const MAX_SERIES_ROWS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub i: u64,
    /// log_p of the order of gamma_i.
    pub dim: u64,
    /// The order written p^dim.
    pub order: String,
    /// Index j with Z_j equal to this gamma term.
    pub upper_index: u64,
    /// Whether the independently computed Z_j agrees.
    pub coincides: bool,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub p: u32,
    pub n: u32,
    pub rows: Vec<SeriesRow>,
    pub all_coincide: bool,
}

/// Lower central series table with the upper-series comparison verdict.
pub fn series_report(params: PrimeParams) -> Result<SeriesReport> {
    let class = params.class();
    if class + 1 > MAX_SERIES_ROWS {
        return Err(Error::SizeGuard(format!(
            "series table would have {} rows",
            class + 1
        )));
    }
    let direct = upper_central_series_direct(params);
    let mut rows = Vec::new();
    let mut all_coincide = true;
    for i in 1..=class + 1 {
        let gamma = structure::lower_central_term(params, i)?;
        let upper_index = class + 1 - i;
        let coincides = direct
            .get(upper_index as usize)
            .map(|z| z == &gamma)
            .unwrap_or(false);
        all_coincide &= coincides;
        rows.push(SeriesRow {
            i,
            dim: gamma.log_order(),
            order: format!("{}^{}", params.p(), gamma.log_order()),
            upper_index,
            coincides,
            basis: gamma.basis().map(text::render_monomial).collect(),
        });
    }
    Ok(SeriesReport { p: params.p(), n: params.n(), rows, all_coincide })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub gamma_index: u64,
    pub contains_gamma: bool,
    pub log_p_index: u64,
    pub bound: u64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub p: u32,
    pub n: u32,
    pub element: String,
    pub layer: u32,
    pub pdeg: u64,
    pub basis: Vec<String>,
    pub log_order: u64,
    pub bound: BoundReport,
}

/// Normal closure of a single-layer element given in the element grammar.
pub fn closure_report(params: PrimeParams, element: &str) -> Result<ClosureReport> {
    let w = text::parse_element(params, element)?;
    if w.is_identity() {
        return Err(Error::IdentityInput(
            "the identity has no closure of interest".into(),
        ));
    }
    let nonzero: Vec<u32> = (1..=params.n())
        .filter(|&k| !w.layer(k).is_zero())
        .collect();
    let [layer] = nonzero.as_slice() else {
        return Err(Error::Precondition(
            "closure takes a single-layer element f D_k".into(),
        ));
    };
    let layer = *layer;
    let f = w.layer(layer);
    let closure = structure::normal_closure_poly(params, f, layer)?;
    let lead = leading_term(params, f, layer)?;
    let degree = pdeg(params, &lead)?.value;
    let bound = contains_gamma_bound(&closure, layer)?;
    Ok(ClosureReport {
        p: params.p(),
        n: params.n(),
        element: text::render_element(&w),
        layer,
        pdeg: degree,
        basis: closure.basis().map(text::render_monomial).collect(),
        log_order: closure.log_order(),
        bound: BoundReport {
            gamma_index: bound.gamma_index,
            contains_gamma: bound.contains_gamma,
            log_p_index: bound.log_p_index,
            bound: bound.bound,
            within: bound.within_bound(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainBundle {
    pub p: u32,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lie: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross: Option<CrossValidation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oeis: Option<OeisComparison>,
    pub predictions_hold: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainSelection {
    Group,
    Lie,
    Both,
}

/// Chain report(s), optionally seeded from a subgroup file and compared
/// against a b-file.
pub fn chain_bundle(
    params: PrimeParams,
    selection: ChainSelection,
    steps: Option<u64>,
    subgroup: Option<&SaturatedSubgroup>,
    oeis_entries: Option<&[(i64, i64)]>,
) -> Result<ChainBundle> {
    let mut group = None;
    let mut lie = None;
    let mut cross = None;
    match selection {
        ChainSelection::Group | ChainSelection::Both => {
            let report = match subgroup {
                Some(seed) => chains::normalizer_chain_from(params, seed, steps, false),
                None => chains::normalizer_chain(params, steps),
            };
            group = Some(report);
        }
        ChainSelection::Lie => {}
    }
    match selection {
        ChainSelection::Lie | ChainSelection::Both => {
            let report = match subgroup {
                Some(seed) => {
                    let image = crate::liealg::subring_image(seed);
                    chains::idealizer_chain_from(params, &image, steps, false)
                }
                None => chains::idealizer_chain(params, steps),
            };
            lie = Some(report);
        }
        ChainSelection::Group => {}
    }
    if selection == ChainSelection::Both && subgroup.is_none() {
        cross = Some(chains::cross_validate(params, steps));
    }
    let oeis = oeis_entries.map(|entries| {
        let depth = steps.unwrap_or(params.n() as u64 + 2).max(8) + 2;
        chains::compare_oeis(&chains::q_table(params.p(), depth.min(64)), entries)
    });
    let predictions_hold = group.as_ref().is_none_or(ChainReport::predictions_hold)
        && lie.as_ref().is_none_or(ChainReport::predictions_hold)
        && cross.as_ref().is_none_or(|c| c.all_equal);
    Ok(ChainBundle {
        p: params.p(),
        n: params.n(),
        group,
        lie,
        cross,
        oeis,
        predictions_hold,
    })
}

/// Restrict an arbitrary saturated subgroup seed to the right parameters.
pub fn check_seed(params: PrimeParams, seed: &SaturatedSubgroup) -> Result<()> {
    if seed.params() != params {
        return Err(Error::ParamMismatch(format!(
            "subgroup file is for p={} n={}, requested p={} n={}",
            seed.params().p(),
            seed.params().n(),
            params.p(),
            params.n()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermReport {
    pub p: u32,
    pub n: u32,
    pub element: String,
    pub images: Vec<u32>,
}

/// Permutation table of an element in the lexicographic point order.
pub fn perm_report(params: PrimeParams, element: &str) -> Result<PermReport> {
    let w = text::parse_element(params, element)?;
    let perm = w.to_permutation()?;
    Ok(PermReport {
        p: params.p(),
        n: params.n(),
        element: text::render_element(&w),
        images: perm.images,
    })
}

/// Lie algebra summary used by the browser demo.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieSummary {
    pub p: u32,
    pub n: u32,
    pub dim: usize,
    pub basis: Vec<String>,
}

pub fn lie_summary(params: PrimeParams) -> LieSummary {
    let all = HomogeneousSubring::whole_algebra(params);
    LieSummary {
        p: params.p(),
        n: params.n(),
        dim: all.dim(),
        basis: all.basis().map(text::render_lie_monomial).collect(),
    }
}

/// Identity used by callers that parse a wreath element and want it echoed
/// in canonical form.
pub fn canonical_element(params: PrimeParams, element: &str) -> Result<WreathElement> {
    text::parse_element(params, element)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u32, n: u32) -> PrimeParams {
        PrimeParams::new(p, n).unwrap()
    }

    #[test]
    fn series_report_3_2() {
        let r = series_report(pp(3, 2)).unwrap();
        assert_eq!(r.rows.len(), 4);
        let dims: Vec<u64> = r.rows.iter().map(|row| row.dim).collect();
        assert_eq!(dims, vec![4, 2, 1, 0]);
        assert!(r.all_coincide);
        assert_eq!(r.rows[0].order, "3^4");
    }

    #[test]
    fn series_report_3_1() {
        let r = series_report(pp(3, 1)).unwrap();
        // gamma_1 = C_3, gamma_2 trivial
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0].dim, 1);
        assert_eq!(r.rows[1].dim, 0);
        assert!(r.all_coincide);
    }

    #[test]
    fn closure_report_d1() {
        let r = closure_report(pp(3, 2), "D1").unwrap();
        assert_eq!(r.basis.len(), 3);
        assert_eq!(r.log_order, 3);
        assert!(r.bound.within);
        // identity rejected
        assert!(matches!(
            closure_report(pp(3, 2), "(0)D1"),
            Err(Error::IdentityInput(_))
        ));
        // multi-layer rejected
        assert!(matches!(
            closure_report(pp(3, 2), "(x1)D2 * D1"),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chain_bundle_both() {
        let b = chain_bundle(pp(3, 2), ChainSelection::Both, Some(10), None, None).unwrap();
        assert!(b.predictions_hold);
        assert!(b.group.is_some() && b.lie.is_some() && b.cross.is_some());
        let json = serde_json::to_string(&b).unwrap();
        assert!(json.contains("\"kind\":\"normalizer\""));
        assert!(json.contains("\"kind\":\"idealizer\""));
    }

    #[test]
    fn perm_report_shape() {
        let r = perm_report(pp(3, 1), "D1").unwrap();
        assert_eq!(r.images, vec![2, 0, 1]);
    }
}
