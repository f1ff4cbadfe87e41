//! Adler-Moser polynomials, the tanh change of variables and matching
//! against KdV tau polynomials.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Time, Var};
use crate::rational::{format_rational, int, Rational};
use crate::series::tanh_coefficients;

/// Sign in front of `theta_(k+1) theta_(k-1)'` in the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recursion {
    /// `theta_(k+1)' theta_(k-1) - theta_(k+1) theta_(k-1)' = (2k-1) theta_k^2`.
    Wronskian,
    /// `theta_(k+1)' theta_(k-1) + theta_(k+1) theta_(k-1)' = (2k-1) theta_k^2`.
    Sum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdlerMoserPoly {
    pub k: u32,
    pub poly: Poly,
}

fn x_coeffs(p: &Poly) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for (m, c) in p.terms() {
        let e = m.exponent(Var::X) as usize;
        if out.len() <= e {
            out.resize(e + 1, Poly::zero());
        }
        let rest = crate::poly::Monomial::from_powers(
            m.powers().iter().copied().filter(|(v, _)| *v != Var::X),
        );
        out[e] = out[e].add(&Poly::term(rest, c.clone()));
    }
    out
}

fn from_x_coeffs(c: &[Poly]) -> Poly {
    let x = Poly::var(Var::X);
    c.iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (j, p)| acc.add(&p.mul(&x.pow(j as u32))))
}

/// `theta_(k+1)' theta_(k-1) -+ theta_(k+1) theta_(k-1)' - (2k-1) theta_k^2`.
pub fn residual(form: Recursion, k: u32, next: &Poly, cur: &Poly, prev: &Poly) -> Poly {
    let d = |p: &Poly| p.derivative(Var::X);
    let a = d(next).mul(prev);
    let b = next.mul(&d(prev));
    let lhs = match form {
        Recursion::Wronskian => a.sub(&b),
        Recursion::Sum => a.add(&b),
    };
    lhs.sub(&cur.mul(cur).scale(&int(2 * k as i64 - 1)))
}

fn step_wronskian(k: u32, cur: &Poly, prev: &Poly) -> Result<Poly> {
    let b = x_coeffs(prev);
    let r = x_coeffs(&cur.mul(cur).scale(&int(2 * k as i64 - 1)));
    let d = b.len() - 1;
    let lead = b[d]
        .as_constant()
        .ok_or_else(|| Error::Computation("leading x-coefficient is not constant".into()))?;
    let top = r.len() + 1 - d;
    let mut c = vec![Poly::zero(); top];
    // coefficient of x^n in sum_j c_j (j x^(j-1) prev - x^j prev') is
    // sum_(i+j-1=n) c_j b_i (j - i); solve from the top.
    for j in (0..top).rev() {
        if j == d {
            continue;
        }
        let n = j + d - 1;
        let mut acc = r.get(n).cloned().unwrap_or_else(Poly::zero);
        for (i, bi) in b.iter().enumerate().take(d) {
            let jj = n + 1 - i;
            if jj < top && jj != j {
                acc = acc.sub(&c[jj].mul(bi).scale(&int(jj as i64 - i as i64)));
            }
        }
        c[j] = acc.scale(&(lead.clone() * int(j as i64 - d as i64)).recip());
    }
    let q = Poly::var(Var::Q(2 * k + 1));
    let next = from_x_coeffs(&c).add(&q.mul(prev));
    if !residual(Recursion::Wronskian, k, &next, cur, prev).is_zero() {
        return Err(Error::Computation(format!(
            "recursion for theta_{} has no polynomial solution",
            k + 1
        )));
    }
    Ok(next)
}

fn step_sum(k: u32, cur: &Poly, prev: &Poly) -> Result<Poly> {
    let q = Poly::var(Var::Q(2 * k + 1));
    let integral = cur.mul(cur).scale(&int(2 * k as i64 - 1)).integrate(Var::X).add(&q);
    integral.div_exact(prev).ok_or_else(|| {
        Error::Computation(format!(
            "theta_{} = (integral + q{}) / theta_{} is not a polynomial",
            k + 1,
            2 * k + 1,
            k - 1
        ))
    })
}

/// `theta_0, ..., theta_k`.
pub fn adler_moser(k: u32, form: Recursion) -> Result<Vec<AdlerMoserPoly>> {
    let mut out = vec![Poly::one(), Poly::var(Var::X)];
    let mut n = 1;
    while (n as u32) < k {
        let next = match form {
            Recursion::Wronskian => step_wronskian(n as u32, &out[n], &out[n - 1])?,
            Recursion::Sum => step_sum(n as u32, &out[n], &out[n - 1])?,
        };
        out.push(next);
        n += 1;
    }
    out.truncate(k as usize + 1);
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(k, poly)| AdlerMoserPoly { k: k as u32, poly })
        .collect())
}

/// `alpha_(2i-1) = (-1)^(i-1) 3^2 5^2 ... (2i-3)^2 (2i-1)`, with an empty product for `i = 2`.
pub fn alpha(i: u32) -> Rational {
    let mut a = int(2 * i as i64 - 1);
    for j in 2..i {
        a *= int((2 * j as i64 - 1).pow(2));
    }
    if i % 2 == 0 {
        -a
    } else {
        a
    }
}

/// Truncated power series in `z` with polynomial coefficients.
fn series_mul(a: &[Poly], b: &[Poly], n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j > n {
                break;
            }
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

fn odd_series(coeffs: &[Rational], u: &[Poly], n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n + 1];
    let mut pow = {
        let mut one = vec![Poly::zero(); n + 1];
        one[0] = Poly::one();
        one
    };
    for c in coeffs.iter().take(n + 1) {
        if !c.is_zero() {
            for (o, p) in out.iter_mut().zip(&pow) {
                *o = o.add(&p.scale(c));
            }
        }
        pow = series_mul(&pow, u, n);
    }
    out
}

/// `q_(2i-1)` as polynomials in `t3, t5, ...` for `i = 2..=k_max`, from
/// `sum q_(2i-1) / alpha_(2i-1) z^(2i-1) = tanh(sum t_(2i-1) z^(2i-1))`.
pub fn q_to_t(k_max: u32) -> Result<Vec<(u32, Poly)>> {
    if k_max < 2 {
        return Err(Error::Invalid("q_to_t needs k_max >= 2".into()));
    }
    let n = 2 * k_max as usize - 1;
    let mut u = vec![Poly::zero(); n + 1];
    for i in 2..=k_max {
        u[2 * i as usize - 1] = Poly::t(2 * i - 1);
    }
    let th = odd_series(&tanh_coefficients(n), &u, n);
    Ok((2..=k_max)
        .map(|i| (2 * i - 1, th[2 * i as usize - 1].scale(&alpha(i))))
        .collect())
}

/// Substitutes the map back through `artanh` and checks that
/// `sum t_(2i-1) z^(2i-1)` is recovered through `z^(2 k_max - 1)`.
pub fn q_to_t_self_check(k_max: u32) -> Result<bool> {
    let map = q_to_t(k_max)?;
    let n = 2 * k_max as usize - 1;
    let mut y = vec![Poly::zero(); n + 1];
    for (l, q) in &map {
        y[*l as usize] = q.scale(&alpha((l + 1) / 2).recip());
    }
    let artanh: Vec<Rational> = (0..=n)
        .map(|j| if j % 2 == 1 { Rational::new(1.into(), (j as i64).into()) } else { Rational::zero() })
        .collect();
    let back = odd_series(&artanh, &y, n);
    Ok((0..=n).all(|j| {
        let expected = if j % 2 == 1 && j >= 3 { Poly::t(j as u32) } else { Poly::zero() };
        back[j] == expected
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchReport {
    pub k: u32,
    pub matched: bool,
    pub scale: Option<Rational>,
    /// `t_l -> r_l t_l` inside the substitution.
    pub time_scales: Vec<(u32, Rational)>,
    /// Shifts of `x` (index 1) and of the constants `q_l`.
    pub shifts: Vec<(u32, Rational)>,
    pub reason: Option<String>,
}

impl MatchReport {
    fn fail(k: u32, reason: impl Into<String>) -> Self {
        MatchReport {
            k,
            matched: false,
            scale: None,
            time_scales: Vec::new(),
            shifts: Vec::new(),
            reason: Some(reason.into()),
        }
    }

    pub fn summary(&self) -> String {
        if !self.matched {
            return format!("k={} no match: {}", self.k, self.reason.as_deref().unwrap_or(""));
        }
        let list = |v: &[(u32, Rational)], p: &str| {
            v.iter()
                .map(|(l, c)| format!("{p}{l}:{}", format_rational(c)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "k={} match scale={} time-scales=[{}] shifts=[{}]",
            self.k,
            format_rational(self.scale.as_ref().unwrap_or(&Rational::one())),
            list(&self.time_scales, "t"),
            list(&self.shifts, "q"),
        )
    }
}

fn substitution(
    map: &[(u32, Poly)],
    scales: &[(u32, Rational)],
    shifts: &[(u32, Rational)],
) -> Vec<(Var, Poly)> {
    let scale_t: Vec<(Var, Poly)> = scales
        .iter()
        .map(|(l, r)| (Var::t(*l), Poly::t(*l).scale(r)))
        .collect();
    let shift = |l: u32| {
        shifts
            .iter()
            .find(|(m, _)| *m == l)
            .map_or_else(Poly::zero, |(_, s)| Poly::constant(s.clone()))
    };
    let mut subs = vec![(Var::X, Poly::t(1).add(&shift(1)))];
    for (l, q) in map {
        subs.push((Var::Q(*l), q.substitute_all(&scale_t).add(&shift(*l))));
    }
    subs
}

fn solve_linear(target: &Poly, at0: &Poly, at1: &Poly) -> Option<Option<Rational>> {
    let slope = at1.sub(at0);
    let rhs = target.sub(at0);
    if slope.is_zero() {
        return rhs.is_zero().then_some(None);
    }
    let (m, c) = slope.terms().first()?;
    let s = rhs.coeff(m) / c;
    (rhs == slope.scale(&s)).then_some(Some(s))
}

/// Looks for `c`, time scales `r_l` and shifts `s_l` with
/// `c * theta_k(x = t1 + s_1, q_l = Q_l(r t) + s_l) = tau`.
pub fn match_kdv(k: u32, tau: &Poly) -> Result<MatchReport> {
    let theta = adler_moser(k, Recursion::Wronskian)?.pop().expect("k >= 0").poly;
    let d = k * (k + 1) / 2;
    if tau.max_weight() != Some(d) {
        return Ok(MatchReport::fail(k, format!("tau has top weight {:?}, theta_{k} has {d}", tau.max_weight())));
    }
    let top_tau = tau.weight_part(d);
    let lead_theta = x_coeffs(&theta).last().cloned().unwrap_or_else(Poly::zero);
    let x_top = crate::poly::Monomial::from_powers([(Var::t(1), d)]);
    let (Some(a), b) = (lead_theta.as_constant(), top_tau.coeff(&x_top)) else {
        return Ok(MatchReport::fail(k, "leading x-coefficient is not constant"));
    };
    if b.is_zero() {
        return Ok(MatchReport::fail(k, "tau has no pure t1 top term"));
    }
    let c = b / a;
    let map = if k >= 2 { q_to_t(k)? } else { Vec::new() };
    let eval = |scales: &[(u32, Rational)], shifts: &[(u32, Rational)]| {
        theta.substitute_all(&substitution(&map, scales, shifts)).scale(&c)
    };
    let mut scales: Vec<(u32, Rational)> = Vec::new();
    for i in 2..=k {
        let l = 2 * i - 1;
        let mut s0 = scales.clone();
        s0.push((l, Rational::zero()));
        let mut s1 = scales.clone();
        s1.push((l, Rational::one()));
        let pick = |p: &Poly| {
            Poly::from_terms(
                p.weight_part(d)
                    .terms()
                    .iter()
                    .filter(|(m, _)| {
                        m.exponent(Var::t(l)) == 1
                            && m.powers().iter().all(|(v, _)| *v == Var::t(1) || *v == Var::t(l))
                    })
                    .cloned(),
            )
        };
        let (f0, f1) = (pick(&eval(&s0, &[])), pick(&eval(&s1, &[])));
        match solve_linear(&pick(&top_tau), &f0, &f1) {
            Some(r) => scales.push((l, r.unwrap_or_else(Rational::one))),
            None => return Ok(MatchReport::fail(k, format!("no scale for t{l}"))),
        }
    }
    if eval(&scales, &[]).weight_part(d) != top_tau {
        return Ok(MatchReport::fail(k, "top-weight parts differ"));
    }
    let mut shifts: Vec<(u32, Rational)> = Vec::new();
    for l in (1..=2 * k.max(1) - 1).step_by(2) {
        if l > d {
            break;
        }
        let w = d - l;
        let mut h0 = shifts.clone();
        h0.push((l, Rational::zero()));
        let mut h1 = shifts.clone();
        h1.push((l, Rational::one()));
        let f0 = eval(&scales, &h0).weight_part(w);
        let f1 = eval(&scales, &h1).weight_part(w);
        match solve_linear(&tau.weight_part(w), &f0, &f1) {
            Some(s) => shifts.push((l, s.unwrap_or_else(Rational::zero))),
            None => return Ok(MatchReport::fail(k, format!("no shift for q{l}"))),
        }
    }
    if &eval(&scales, &shifts) != tau {
        return Ok(MatchReport::fail(k, "lower-weight parts differ after shifts"));
    }
    Ok(MatchReport {
        k,
        matched: true,
        scale: Some(c),
        time_scales: scales,
        shifts,
        reason: None,
    })
}

/// Times `t3, t5, ...` that enter `theta_k` after the change of variables.
pub fn theta_times(k: u32) -> Vec<Time> {
    (2..=k).map(|i| Time::new(2 * i - 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn first_thetas() {
        let th = adler_moser(3, Recursion::Wronskian).unwrap();
        assert_eq!(th[0].poly, p("1"));
        assert_eq!(th[1].poly, p("x"));
        assert_eq!(th[2].poly, p("1/3*x^3 + q3"));
        assert_eq!(th[3].poly, p("1/15*x^6 + q3*x^3 - 3*q3^2 + q5*x"));
    }

    #[test]
    fn sum_form_stops_at_three() {
        assert!(adler_moser(2, Recursion::Sum).is_ok());
        assert!(adler_moser(3, Recursion::Sum).is_err());
    }

    #[test]
    fn residuals_and_degrees() {
        let th = adler_moser(7, Recursion::Wronskian).unwrap();
        for k in 1..=6usize {
            let r = residual(Recursion::Wronskian, k as u32, &th[k + 1].poly, &th[k].poly, &th[k - 1].poly);
            assert!(r.is_zero(), "k={k}");
        }
        for (k, t) in th.iter().enumerate() {
            let deg = t.poly.terms().iter().map(|(m, _)| m.exponent(Var::X)).max().unwrap();
            assert_eq!(deg as usize, k * (k + 1) / 2);
        }
    }

    #[test]
    fn alphas() {
        assert_eq!(alpha(2), int(-3));
        assert_eq!(alpha(3), int(45));
        assert_eq!(alpha(4), int(-1575));
    }

    #[test]
    fn q_map() {
        let m = q_to_t(5).unwrap();
        assert_eq!(m[0], (3, p("-3*t3")));
        assert_eq!(m[1], (5, p("45*t5")));
        assert_eq!(m[3], (9, p("99225*t9 - 33075*t3^3")));
        assert!(q_to_t_self_check(5).unwrap());
    }

    #[test]
    fn trivial_matches() {
        assert!(match_kdv(0, &p("1")).unwrap().matched);
        let r = match_kdv(1, &p("1 + t1")).unwrap();
        assert!(r.matched);
        assert_eq!(r.shifts, vec![(1, int(1))]);
        assert!(!match_kdv(2, &p("1 + t1")).unwrap().matched);
    }
}
