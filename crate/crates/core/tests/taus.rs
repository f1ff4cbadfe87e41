mod common;

use common::{golden, tau_of};
use dstau::catalog::CatalogPoint;
use dstau::grassmann::{Partition, SchurContext};
use dstau::hirota::{verify_equation, HirotaPoly};
use dstau::tau::{stabilization_check, Point};
use dstau::WeightCut;

#[test]
fn a1_taus() {
    for (name, file) in [
        ("a1-f1", "a1_tau1"),
        ("a1-e1", "a1_tau2"),
        ("a1-f2", "a1_tau3"),
        ("a1-e2", "a1_tau4"),
    ] {
        let t = tau_of(name, 18, true);
        assert_eq!(t.tau, golden(file), "{name}");
        assert!(t.exact, "{name}");
    }
}

#[test]
fn a2_taus() {
    for (name, file) in [("a2-lower", "a2_tau1"), ("a2-upper", "a2_tau2")] {
        let t = tau_of(name, 18, true);
        assert_eq!(t.tau, golden(file), "{name}");
        assert!(t.exact, "{name}");
    }
}

#[test]
fn b2_upper_is_a_square_root() {
    let t = tau_of("b2-upper", 18, true);
    assert_eq!(t.tau, golden("b2_tau2"));
    assert!(t.exact);
    assert_eq!(t.tau.pow(2).truncate(WeightCut(18)), t.tau_power);
}

#[test]
fn b2_lower_low_weights() {
    let t = tau_of("b2-lower", 12, false);
    let reference = golden("b2_tau1");
    for w in 0..=8 {
        assert_eq!(t.tau.weight_part(w), reference.weight_part(w), "weight {w}");
    }
    assert_ne!(t.tau.weight_part(9), reference.weight_part(9));
}

#[test]
fn b2_lower_satisfies_the_degree_6_equation_below_the_cut() {
    let cut = 14;
    let t = tau_of("b2-lower", cut, false);
    let eq = HirotaPoly::parse("D1^6 - 5*D1^3*D3 - 5*D3^2 + 9*D1*D5").unwrap();
    let res = verify_equation(&eq, &t.tau);
    assert!(res.min_weight().map_or(true, |w| w + 6 > cut));
}

#[test]
fn d4_tau_is_a_single_hook() {
    let t = tau_of("d4-theta", 18, true);
    assert!(t.exact);
    assert_eq!(t.tau, golden("d4_tau"));
    let mut support: Vec<String> = t.support.unwrap().iter().map(Partition::frobenius_string).collect();
    support.sort();
    assert_eq!(support, ["(6|7)", "(7,6|7,6)", "(7|6)", "(|)"].map(String::from));
    let p = CatalogPoint::lookup("d4-theta").unwrap();
    let r = p.realization().unwrap();
    let ctx = SchurContext::without(&r, WeightCut(11), &p.zeroed_times()).unwrap();
    let reference = golden("d4_s76");
    assert_eq!(ctx.affine(7, 6), reference.scale(&dstau::rational::int(-4)));
    assert_eq!(ctx.affine(6, 7), reference.scale(&dstau::rational::int(4)));
}

#[test]
fn toeplitz_windows_stabilize_on_examples() {
    for name in ["a1-f1", "a1-e2", "a2-lower", "a2-upper", "b2-upper"] {
        let p = CatalogPoint::lookup(name).unwrap();
        let r = p.realization().unwrap();
        let point = Point::from_x(&p.x(&r).unwrap()).unwrap();
        let cut = WeightCut(8);
        let st = stabilization_check(&r, &point.g, cut, &[], 12).unwrap();
        let sz = tau_of(name, 8, false);
        assert_eq!(st.limit(), Some(&sz.tau_power), "{name}");
    }
}
