mod common;

use common::tau_of;
use dstau::hirota::{
    ansatz_basis, fit_equations, homogeneous, rescale_times, same_span, verify_equation,
    AnsatzOptions, CorpusEntry, HirotaPoly, Substitution, Surd,
};
use dstau::rational::frac;
use dstau::{Time, WeightCut};

fn eqs(list: &[&str]) -> Vec<HirotaPoly> {
    list.iter().map(|s| HirotaPoly::parse(s).unwrap()).collect()
}

fn exact(names: &[&str]) -> Vec<CorpusEntry> {
    names
        .iter()
        .map(|n| {
            let t = tau_of(n, 18, true);
            assert!(t.exact, "{n}");
            CorpusEntry::exact(*n, t.tau)
        })
        .collect()
}

fn times(ix: &[u32]) -> Vec<Time> {
    ix.iter().map(|&i| Time::new(i)).collect()
}

const WITH_CONSTANT: AnsatzOptions = AnsatzOptions {
    include_constant: true,
    even_only: true,
};

fn assert_sound(space: &dstau::hirota::EquationSpace, corpus: &[CorpusEntry]) {
    for eq in &space.basis {
        for c in corpus {
            let r = verify_equation(eq, &c.tau);
            let ok = match c.valid_weight {
                None => r.is_zero(),
                Some(v) => r.min_weight().map_or(true, |w| w + space.degree_bound > v),
            };
            assert!(ok, "{eq} on {}", c.name);
        }
    }
}

#[test]
fn kdv() {
    let corpus = exact(&["a1-f1", "a1-e1"]);
    let sp = fit_equations(&corpus, &ansatz_basis(4, &times(&[1, 3]), WITH_CONSTANT));
    assert_eq!(sp.basis, eqs(&["D1^4 - 4*D1*D3"]));
    assert_sound(&sp, &corpus);

    let corpus = exact(&["a1-f1", "a1-e1", "a1-f2", "a1-e2"]);
    let sp = fit_equations(&corpus, &ansatz_basis(6, &times(&[1, 3, 5]), WITH_CONSTANT));
    assert_eq!(sp.dimension(), 3);
    assert_eq!(sp.dimension_upto(4), 1);
    assert!(same_span(
        &sp.basis,
        &eqs(&[
            "D1^4 - 4*D1*D3",
            "D1^6 + 20*D1^3*D3 - 96*D1*D5",
            "D1^3*D3 + 2*D3^2 - 6*D1*D5",
        ])
    ));
    assert_sound(&sp, &corpus);
}

#[test]
fn boussinesq() {
    let ts = times(&[1, 2, 4, 5]);
    let all = ansatz_basis(6, &ts, AnsatzOptions::default());
    let corpus = exact(&["a2-lower"]);
    let sp = fit_equations(&corpus, &homogeneous(&all, 4));
    assert_eq!(sp.basis, eqs(&["D1^4 + 3*D2^2"]));

    let corpus = exact(&["a2-lower", "a2-upper"]);
    let sp = fit_equations(&corpus, &homogeneous(&all, 6));
    assert!(same_span(
        &sp.basis,
        &eqs(&[
            "D1^6 + 45*D1^2*D2^2 + 90*D2*D4 - 216*D1*D5",
            "D1^6 + 15*D1^2*D2^2 + 60*D2*D4 - 96*D1*D5",
        ])
    ));
    assert_sound(&sp, &corpus);
}

#[test]
fn b2_dimensions() {
    let cut = WeightCut(18);
    let lower = tau_of("b2-lower", cut.0, false);
    let mut corpus = exact(&["b2-upper"]);
    corpus.insert(0, CorpusEntry::truncated("b2-lower", lower.tau, cut));

    let sp = fit_equations(&corpus[..1], &ansatz_basis(4, &times(&[1, 3]), WITH_CONSTANT));
    assert_eq!(sp.dimension(), 0);

    let sp = fit_equations(&corpus, &ansatz_basis(8, &times(&[1, 3, 5, 7]), WITH_CONSTANT));
    let dims: Vec<usize> = [4, 6, 8].iter().map(|&d| sp.dimension_upto(d)).collect();
    assert_eq!(dims, [0, 1, 2]);
    assert!(same_span(
        &sp.basis,
        &eqs(&[
            "D1^6 - 5*D1^3*D3 - 5*D3^2 + 9*D1*D5",
            "D1^8 + 7*D1^5*D3 - 35*D1^2*D3^2 - 21*D1^3*D5 - 42*D3*D5 + 90*D1*D7",
        ])
    ));
    assert_sound(&sp, &corpus);
}

fn d4_reference() -> Vec<HirotaPoly> {
    eqs(&[
        "2*D1^3*D3p + 4*D3*D3p - 3*D3p^2",
        "D1^3*D3 - D1^3*D3p + D3*D3p - D3^2",
        "D1^6 + 9*D1*D5 - 10*D1^3*D3 + 5*D1^3*D3p - 5*D3*D3p",
    ])
}

#[test]
fn d4_dimensions() {
    let corpus = exact(&["d4-theta"]);
    let ts = vec![Time::new(1), Time::new(3), Time::primed(3), Time::new(5)];
    let sp = fit_equations(&corpus, &ansatz_basis(6, &ts, WITH_CONSTANT));
    assert_eq!(sp.dimension_upto(4), 0);
    assert_eq!(sp.dimension_upto(6), 3);
    assert!(same_span(&sp.basis, &d4_reference()));
    assert_sound(&sp, &corpus);
}

#[test]
fn fit_ignores_corpus_order() {
    let mut corpus = exact(&["a1-f1", "a1-e1", "a1-f2", "a1-e2"]);
    let monos = ansatz_basis(6, &times(&[1, 3, 5]), WITH_CONSTANT);
    let a = fit_equations(&corpus, &monos);
    corpus.reverse();
    let b = fit_equations(&corpus, &monos);
    assert_eq!(a.basis, b.basis);
}

#[test]
fn d4_rescaling() {
    let surd = |c: (i64, i64), b: u64, e: (i64, i64)| Surd::power(frac(c.0, c.1), b, frac(e.0, e.1)).unwrap();
    let mut s = Substitution::new();
    s.insert(Time::new(1), vec![(Time::new(1), surd((1, 1), 2, (-1, 6)))]);
    s.insert(Time::new(3), vec![(Time::new(3), surd((1, 1), 2, (1, 2)))]);
    s.insert(
        Time::primed(3),
        vec![
            (Time::new(3), surd((1, 1), 2, (1, 2))),
            (Time::primed(3), surd((1, 1), 6, (1, 2)).mul(&Surd::rational(frac(1, 3)))),
        ],
    );
    s.insert(Time::new(5), vec![(Time::new(5), surd((1, 1), 2, (7, 6)))]);
    let out = rescale_times(&d4_reference()[0], &s).unwrap();
    let d = dstau::hirota::DMonomial::from_indices;
    let t3p = dstau::hirota::DMonomial::new([(Time::primed(3), 1), (Time::new(3), 1)]);
    let t1t3p = dstau::hirota::DMonomial::new([(Time::new(1), 3), (Time::primed(3), 1)]);
    let t3p2 = dstau::hirota::DMonomial::new([(Time::primed(3), 2)]);
    let r3 = |c: (i64, i64)| surd(c, 3, (1, 2));
    assert_eq!(out.terms[&d(&[1, 1, 1, 3])].as_rational(), Some(frac(2, 1)));
    assert_eq!(out.terms[&t1t3p], r3((2, 3)));
    assert_eq!(out.terms[&d(&[3, 3])].as_rational(), Some(frac(2, 1)));
    assert_eq!(out.terms[&t3p], r3((-4, 3)));
    assert_eq!(out.terms[&t3p2].as_rational(), Some(frac(-2, 1)));
    assert_eq!(out.terms.len(), 5);
}
