use dstau::catalog::CatalogPoint;
use dstau::grassmann::{
    exp_nilpotent, giambelli_r, giambelli_s, plucker_nu, schur_nu, schur_weight, Partition,
    SchurContext, XElement,
};
use dstau::laurent::MatrixLaurent;
use dstau::lie::{build_realization, Family};
use dstau::linalg::Matrix;
use dstau::rational::{frac, int};
use dstau::tau::{stabilization_check, tau_sz, Point, TauOptions};
use dstau::{Poly, WeightCut};
use proptest::prelude::*;

fn partitions_upto(n: u32) -> Vec<Partition> {
    (1..=n).flat_map(Partition::of_weight).collect()
}

#[test]
fn giambelli_s_matches_minors() {
    for (family, rank) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
        let r = build_realization(family, rank).unwrap();
        let parts = partitions_upto(10);
        let cut = parts.iter().map(|p| schur_weight(&r, p)).max().unwrap().max(0) as u32;
        let ctx = SchurContext::new(&r, WeightCut(cut)).unwrap();
        let table = ctx.affine_table(9, 9);
        for nu in &parts {
            assert_eq!(giambelli_s(&table, nu).unwrap(), ctx.schur(nu).unwrap(), "{family:?}{rank} {nu}");
        }
    }
}

#[test]
fn giambelli_r_matches_minors() {
    for name in ["a1-f2", "a2-lower", "a2-upper", "b2-upper", "b2-lower"] {
        let p = CatalogPoint::lookup(name).unwrap();
        let r = p.realization().unwrap();
        let point = Point::from_x(&p.x(&r).unwrap()).unwrap();
        let mut table = point.affine();
        table.max_i = table.max_i.max(9);
        table.max_j = table.max_j.max(9);
        for nu in partitions_upto(10) {
            assert_eq!(giambelli_r(&table, &nu).unwrap(), plucker_nu(&point.g, &nu), "{name} {nu}");
        }
    }
}

/// Classical Schur polynomial by Jacobi-Trudi from `sum h_k z^k = exp(sum t_k z^k)`.
fn jacobi_trudi(nu: &Partition, skip: u32) -> Poly {
    let n = nu.weight() as usize;
    let mut h = vec![Poly::one()];
    for k in 1..=n {
        let mut acc = Poly::zero();
        for j in 1..=k {
            if j as u32 % skip == 0 {
                continue;
            }
            acc = acc.add(&Poly::t(j as u32).mul(&h[k - j]).scale(&int(j as i64)));
        }
        h.push(acc.scale(&frac(1, k as i64)));
    }
    let l = nu.len();
    let m = Matrix::from_fn(l, l, |i, j| {
        let k = nu.part(i) as i64 - i as i64 + j as i64;
        if k < 0 {
            Poly::zero()
        } else {
            h[k as usize].clone()
        }
    });
    m.det()
}

#[test]
fn type_a_reduces_to_classical_schur() {
    for n in 1..=3u32 {
        let r = build_realization(Family::A, n as usize).unwrap();
        for nu in partitions_upto(8) {
            assert_eq!(schur_nu(&r, &nu).unwrap(), jacobi_trudi(&nu, n + 1), "A{n} {nu}");
        }
    }
}

#[test]
fn jacobi_trudi_oracle_examples() {
    let nu = Partition::new(vec![2, 1]).unwrap();
    assert_eq!(jacobi_trudi(&nu, 100), Poly::parse("1/3*t1^3 - t3").unwrap());
    let nu = Partition::new(vec![3]).unwrap();
    assert_eq!(jacobi_trudi(&nu, 2), Poly::parse("1/6*t1^3 + t3").unwrap());
}

fn sz_equals_toeplitz(r: &dstau::lie::Realization, point: &Point, cut: u32, n_max: usize) {
    let st = stabilization_check(r, &point.g, WeightCut(cut), &[], n_max).unwrap();
    let opts = TauOptions {
        cut: WeightCut(cut),
        certify: false,
        ..Default::default()
    };
    let sz = tau_sz(r, point, &opts).unwrap();
    let limit = st.limit().expect("windows stabilize");
    for w in 0..=cut {
        assert_eq!(limit.weight_part(w), sz.tau_power.weight_part(w), "weight {w}");
    }
}

#[test]
fn sz_equals_toeplitz_on_examples() {
    for name in ["a1-f1", "a1-e1", "a1-f2", "a1-e2", "a2-lower", "a2-upper", "b2-upper", "b2-lower", "d4-theta"] {
        let p = CatalogPoint::lookup(name).unwrap();
        let r = p.realization().unwrap();
        let point = Point::from_x(&p.x(&r).unwrap()).unwrap();
        sz_equals_toeplitz(&r, &point, 12, 14);
    }
}

/// Strictly triangular blocks at `lambda^-1` and `lambda^-2`; always nilpotent.
fn random_x(rank: usize, upper: bool, seed: &[i64]) -> MatrixLaurent<Poly> {
    let m = rank + 1;
    let mut out = MatrixLaurent::zero(m);
    let mut it = seed.iter().cycle();
    for power in [-1i64, -2] {
        let a = Matrix::from_fn(m, m, |i, j| {
            let v = *it.next().unwrap();
            if (upper && i < j) || (!upper && i > j) {
                Poly::int(v)
            } else {
                Poly::zero()
            }
        });
        out = out.add(&MatrixLaurent::monomial(power, a));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]
    #[test]
    fn sz_equals_toeplitz_random(
        rank in 1usize..=2,
        upper in any::<bool>(),
        seed in proptest::collection::vec(-2i64..=2, 9),
    ) {
        let r = build_realization(Family::A, rank).unwrap();
        let terms = random_x(rank, upper, &seed);
        prop_assert!(exp_nilpotent(&terms).is_ok());
        let x = XElement::new(&r, terms).unwrap();
        let point = Point::from_x(&x).unwrap();
        sz_equals_toeplitz(&r, &point, 12, 14);
    }
}
