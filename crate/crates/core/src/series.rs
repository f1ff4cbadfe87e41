//! Truncated power series in the weight grading.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, WeightCut};
use crate::rational::{binomial, frac, int, Rational};

fn positive_weight(p: &Poly) -> Result<()> {
    match p.terms().iter().find(|t| t.0.weight() == 0) {
        Some((m, _)) => Err(Error::Series(format!(
            "argument has a weight-0 term `{m}`; the series would not terminate"
        ))),
        None => Ok(()),
    }
}

/// `exp(p)` truncated at the cut. Every term of `p` must have positive weight.
pub fn series_exp(p: &Poly, cut: WeightCut) -> Result<Poly> {
    positive_weight(p)?;
    let p = p.truncate(cut);
    let mut acc = Poly::one();
    let mut term = Poly::one();
    for k in 1.. {
        term = term.mul_trunc(&p, cut).scale(&frac(1, k));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Splits `p` as `1 + u` with `u` of positive weight.
fn unit_part(p: &Poly) -> Result<Poly> {
    let c = p.constant_term();
    if !c.is_one() {
        return Err(Error::Series(format!(
            "constant term must be 1, found {c}"
        )));
    }
    let u = p.sub(&Poly::one());
    positive_weight(&u)?;
    Ok(u)
}

/// `(1 + u)^a = sum binom(a, j) u^j` truncated at the cut.
pub fn series_power(p: &Poly, a: &Rational, cut: WeightCut) -> Result<Poly> {
    let u = unit_part(p)?.truncate(cut);
    let mut acc = Poly::one();
    let mut upow = Poly::one();
    for j in 1.. {
        upow = upow.mul_trunc(&u, cut);
        if upow.is_zero() {
            break;
        }
        acc = acc.add(&upow.scale(&binomial(a, j)));
    }
    Ok(acc)
}

pub fn series_inverse(p: &Poly, cut: WeightCut) -> Result<Poly> {
    series_power(p, &int(-1), cut)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Poly,
    /// `value^k == p` with no truncation residue.
    pub exact: bool,
    /// Lowest weight at which `value^k` and `p` differ, when not exact.
    pub residual_weight: Option<u32>,
}

/// The `k`-th root with constant term 1. Exactness is checked against the
/// untruncated `k`-th power of the truncated root.
pub fn series_root(p: &Poly, k: u32, cut: WeightCut) -> Result<Root> {
    if k == 0 {
        return Err(Error::Series("root of order 0".into()));
    }
    let value = series_power(p, &frac(1, k as i64), cut)?;
    let diff = value.pow(k).sub(p);
    Ok(Root {
        exact: diff.is_zero(),
        residual_weight: diff.min_weight(),
        value,
    })
}

/// Coefficients of `tanh(z) = sum c_j z^j` for `j <= n`.
pub fn tanh_coefficients(n: usize) -> Vec<Rational> {
    // tanh = sinh / cosh, both with rational Taylor coefficients.
    let mut sinh = vec![Rational::zero(); n + 1];
    let mut cosh = vec![Rational::zero(); n + 1];
    let mut fact = Rational::one();
    for j in 0..=n {
        if j > 0 {
            fact = fact * int(j as i64);
        }
        if j % 2 == 1 {
            sinh[j] = fact.recip();
        } else {
            cosh[j] = fact.recip();
        }
    }
    let mut out = vec![Rational::zero(); n + 1];
    for j in 0..=n {
        let mut s = sinh[j].clone();
        for i in 1..=j {
            s -= &cosh[i] * &out[j - i];
        }
        out[j] = s;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            series_exp(&p("t1"), WeightCut(3)).unwrap(),
            p("1 + t1 + t1^2/2 + t1^3/6")
        );
        assert_eq!(series_exp(&Poly::zero(), WeightCut(5)).unwrap(), Poly::one());
        let e = series_exp(&p("t1 + t3"), WeightCut(4)).unwrap();
        assert_eq!(e.coeff(&p("t1*t3").terms()[0].0), int(1));
        assert!(series_exp(&p("1 + t1"), WeightCut(3)).is_err());
        assert!(series_exp(&p("a1"), WeightCut(3)).is_err());
    }

    #[test]
    fn root_examples() {
        let r = series_root(&p("1 + 2*t1 + t1^2"), 2, WeightCut(4)).unwrap();
        assert!(r.exact);
        assert_eq!(r.value, p("1 + t1"));
        let r = series_root(&p("1 + t1"), 2, WeightCut(2)).unwrap();
        assert!(!r.exact);
        assert_eq!(r.value, p("1 + t1/2 - t1^2/8"));
        assert_eq!(r.residual_weight, Some(3));
        assert!(series_root(&p("2 + t1"), 2, WeightCut(2)).is_err());
    }

    #[test]
    fn tanh_series() {
        let c = tanh_coefficients(7);
        assert_eq!(c[1], int(1));
        assert_eq!(c[3], frac(-1, 3));
        assert_eq!(c[5], frac(2, 15));
        assert_eq!(c[7], frac(-17, 315));
        assert!(c[2].is_zero());
    }
}
