use dstau::hirota::{hirota_apply, DMonomial};
use dstau::rational::{factorial, int, Rational};
use dstau::{Monomial, Poly, Time, Var};
use proptest::prelude::*;

fn sparse_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(((0u32..4, 0u32..3, 0u32..3), -5i64..=5), 1..5).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|((a, b, c), k)| {
            let m = Monomial::from_powers([(Var::t(1), a), (Var::t(2), b), (Var::t(3), c)]);
            (m, int(k))
        }))
    })
}

fn dmono() -> impl Strategy<Value = DMonomial> {
    proptest::collection::vec(prop_oneof![Just(1u32), Just(2), Just(3)], 0..5)
        .prop_map(|ix| DMonomial::from_indices(&ix))
}

fn shifted(p: &Poly, sign: i64) -> Poly {
    let mut out = p.clone();
    for i in [1, 3] {
        let t = Time::new(i);
        let v = Poly::var(Var::T(t)).add(&Poly::var(Var::H(t)).scale(&int(sign)));
        out = out.substitute(Var::T(t), &v);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn swap_antisymmetry(f in sparse_poly(), g in sparse_poly(), m in dmono()) {
        let a = hirota_apply(&m, &f, &g);
        let b = hirota_apply(&m, &g, &f);
        if m.count() % 2 == 1 {
            prop_assert_eq!(a, b.neg());
            prop_assert!(hirota_apply(&m, &f, &f).is_zero());
        } else {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn exponential_identity(f in sparse_poly(), g in sparse_poly()) {
        let prod = shifted(&f, 1).mul(&shifted(&g, -1));
        let parts = prod.collect_by(|v| matches!(v, Var::H(_)));
        for a in 0..=2u32 {
            for b in 0..=2 - a {
                let hm = Monomial::from_powers([(Var::H(Time::new(1)), a), (Var::H(Time::new(3)), b)]);
                let coeff = parts.iter().find(|(m, _)| *m == hm).map_or_else(Poly::zero, |(_, p)| p.clone());
                let m = DMonomial::new([(Time::new(1), a), (Time::new(3), b)]);
                let norm = Rational::from_integer(factorial(a) * factorial(b));
                prop_assert_eq!(coeff, hirota_apply(&m, &f, &g).scale(&norm.recip()));
            }
        }
    }
}
