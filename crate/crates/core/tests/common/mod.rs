#![allow(dead_code)]

use dstau::catalog::CatalogPoint;
use dstau::tau::{tau_sz, Point, TauOptions, TauResult};
use dstau::{Poly, WeightCut};

pub fn golden(name: &str) -> Poly {
    let path = format!("{}/tests/data/{name}.poly", env!("CARGO_MANIFEST_DIR"));
    Poly::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn tau_of(name: &str, cut: u32, certify: bool) -> TauResult {
    let p = CatalogPoint::lookup(name).unwrap();
    let r = p.realization().unwrap();
    let point = Point::from_x(&p.x(&r).unwrap()).unwrap();
    let opts = TauOptions {
        cut: WeightCut(cut),
        zeroed_times: p.zeroed_times(),
        certify,
    };
    tau_sz(&r, &point, &opts).unwrap()
}
