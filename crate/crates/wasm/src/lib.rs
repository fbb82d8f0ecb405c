//! wasm-bindgen surface for the browser demo: thin JSON wrappers around the
//! report builders, one function per interactive panel.
//!
//! The `imp` functions are plain Rust so they can be tested on the host;
//! the exported wrappers only translate errors into `JsValue` strings.

use wasm_bindgen::prelude::*;

use polywreath::report::{
    chain_bundle, closure_report, perm_report, series_report, ChainSelection,
};
use polywreath::verify::{run_verify, VerifyOptions};
use polywreath::{Error, PrimeParams};

mod imp {
    use super::*;

    pub fn series(p: u32, n: u32) -> Result<String, Error> {
        let report = series_report(PrimeParams::new(p, n)?)?;
        Ok(serde_json::to_string(&report).expect("serializes"))
    }

    pub fn chain(p: u32, n: u32, steps: Option<u32>) -> Result<String, Error> {
        let bundle = chain_bundle(
            PrimeParams::new(p, n)?,
            ChainSelection::Both,
            steps.map(u64::from),
            None,
            None,
        )?;
        Ok(serde_json::to_string(&bundle).expect("serializes"))
    }

    pub fn closure(p: u32, n: u32, element: &str) -> Result<String, Error> {
        let report = closure_report(PrimeParams::new(p, n)?, element)?;
        Ok(serde_json::to_string(&report).expect("serializes"))
    }

    pub fn perm(p: u32, n: u32, element: &str) -> Result<String, Error> {
        let report = perm_report(PrimeParams::new(p, n)?, element)?;
        Ok(serde_json::to_string(&report).expect("serializes"))
    }

    pub fn verify(p: u32, n: u32, samples: u32) -> Result<String, Error> {
        let report = run_verify(
            PrimeParams::new(p, n)?,
            &VerifyOptions { samples: samples as usize, ..Default::default() },
        );
        Ok(serde_json::to_string(&report).expect("serializes"))
    }
}

fn to_js(result: Result<String, Error>) -> Result<String, JsValue> {
    result.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Central series table as JSON.
#[wasm_bindgen]
pub fn series_json(p: u32, n: u32) -> Result<String, JsValue> {
    to_js(imp::series(p, n))
}

/// Normalizer and idealizer chains, cross-validated, as JSON.
#[wasm_bindgen]
pub fn chain_json(p: u32, n: u32, steps: Option<u32>) -> Result<String, JsValue> {
    to_js(imp::chain(p, n, steps))
}

/// Normal closure of an element written in the `(<poly>)D<k>` grammar.
#[wasm_bindgen]
pub fn closure_json(p: u32, n: u32, element: &str) -> Result<String, JsValue> {
    to_js(imp::closure(p, n, element))
}

/// Permutation table of an element on the p^n points.
#[wasm_bindgen]
pub fn perm_json(p: u32, n: u32, element: &str) -> Result<String, JsValue> {
    to_js(imp::perm(p, n, element))
}

/// Run the structural self-check suite with a fixed seed.
#[wasm_bindgen]
pub fn verify_json(p: u32, n: u32, samples: u32) -> Result<String, JsValue> {
    to_js(imp::verify(p, n, samples))
}
