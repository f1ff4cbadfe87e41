//! Browser bindings: Schur polynomials, tau functions of bundled points and
//! equation checks. Each binding returns text; errors are prefixed `error:`.

use wasm_bindgen::prelude::*;

use dstau::catalog::{CatalogPoint, CATALOG};
use dstau::grassmann::{schur_nu, Partition};
use dstau::hirota::{verify_equation, HirotaPoly};
use dstau::lie::{build_realization, Family};
use dstau::tau::{tau_sz, Point, TauOptions};
use dstau::{Poly, WeightCut};

fn text(r: Result<String, String>) -> String {
    r.unwrap_or_else(|e| format!("error: {e}"))
}

/// Largest weight cut the page accepts.
pub const MAX_CUT: u32 = 24;

pub fn schur_text(family: &str, rank: usize, partition: &str) -> Result<String, String> {
    let f = Family::parse(family).map_err(|e| e.to_string())?;
    let r = build_realization(f, rank).map_err(|e| e.to_string())?;
    let nu = Partition::parse(partition).map_err(|e| e.to_string())?;
    let s = schur_nu(&r, &nu).map_err(|e| e.to_string())?;
    Ok(format!("{} = {s}", nu.frobenius_string()))
}

pub fn tau_text(example: &str, cut: u32) -> Result<String, String> {
    if cut > MAX_CUT {
        return Err(format!("weight cut is limited to {MAX_CUT}"));
    }
    let p = CatalogPoint::lookup(example).map_err(|e| e.to_string())?;
    let r = p.realization().map_err(|e| e.to_string())?;
    let point = p
        .x(&r)
        .and_then(|x| Point::from_x(&x))
        .map_err(|e| e.to_string())?;
    let opts = TauOptions {
        cut: WeightCut(cut),
        zeroed_times: p.zeroed_times(),
        certify: false,
    };
    let res = tau_sz(&r, &point, &opts).map_err(|e| e.to_string())?;
    Ok(format!("{}\n(terms of weight <= {cut})", res.tau))
}

pub fn verify_text(equation: &str, tau: &str) -> Result<String, String> {
    let eq = HirotaPoly::parse(equation).map_err(|e| e.to_string())?;
    let t = Poly::parse(tau).map_err(|e| e.to_string())?;
    let r = verify_equation(&eq, &t);
    Ok(if r.is_zero() {
        "residual 0".to_string()
    } else {
        format!("residual {r}")
    })
}

#[wasm_bindgen]
pub fn schur(family: &str, rank: usize, partition: &str) -> String {
    text(schur_text(family, rank, partition))
}

#[wasm_bindgen]
pub fn tau(example: &str, cut: u32) -> String {
    text(tau_text(example, cut))
}

#[wasm_bindgen]
pub fn verify(equation: &str, tau: &str) -> String {
    text(verify_text(equation, tau))
}

/// Names of the bundled points, newline separated.
#[wasm_bindgen]
pub fn examples() -> String {
    CATALOG.iter().map(|p| p.name).collect::<Vec<_>>().join("\n")
}
