//! Sparse multivariate polynomials over the rationals with a weighted grading.
//!
//! Time variables `t_l` carry weight `l`; parameters `a_i`, `q_i` and `x`
//! carry weight 0. Terms are stored in canonical order: by weight, then
//! lexicographically on the time part (larger exponent of an earlier
//! variable first), then by degree and lexicographically on the rest.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Time {
    pub index: u32,
    pub primed: bool,
}

impl Time {
    pub const fn new(index: u32) -> Self {
        Time { index, primed: false }
    }

    pub const fn primed(index: u32) -> Self {
        Time { index, primed: true }
    }

    pub fn parse(s: &str) -> Option<Time> {
        let s = s.trim();
        let s = s.strip_prefix('t').unwrap_or(s);
        let (digits, primed) = match s.strip_suffix('p').or_else(|| s.strip_suffix('\'')) {
            Some(d) => (d, true),
            None => (s, false),
        };
        let index: u32 = digits.parse().ok()?;
        (index > 0).then_some(Time { index, primed })
    }

    /// Label without the `t` prefix: `3`, `3p`.
    pub fn label(&self) -> String {
        if self.primed {
            format!("{}p", self.index)
        } else {
            self.index.to_string()
        }
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.label())
    }
}

/// Variable order: `t1 < t2 < t3 < t3p < ... < a1 < a2 < ... < x < q3 < ... < h1 < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    T(Time),
    A(u32),
    X,
    Q(u32),
    /// Auxiliary shift variables used by the bilinear exponential identity.
    H(Time),
}

impl Var {
    pub fn t(index: u32) -> Var {
        Var::T(Time::new(index))
    }

    pub fn weight(&self) -> u32 {
        match self {
            Var::T(t) | Var::H(t) => t.index,
            _ => 0,
        }
    }

    pub fn is_time(&self) -> bool {
        matches!(self, Var::T(_))
    }

    pub fn parse(s: &str) -> Option<Var> {
        let num = |r: &str| r.parse::<u32>().ok();
        if s == "x" {
            return Some(Var::X);
        }
        let (head, rest) = s.split_at(s.chars().next()?.len_utf8());
        match head {
            "t" => Time::parse(rest).map(Var::T),
            "h" => Time::parse(rest).map(Var::H),
            "a" => num(rest).map(Var::A),
            "q" => num(rest).map(Var::Q),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T(t) => write!(f, "t{}", t.label()),
            Var::H(t) => write!(f, "h{}", t.label()),
            Var::A(i) => write!(f, "a{i}"),
            Var::Q(i) => write!(f, "q{i}"),
            Var::X => write!(f, "x"),
        }
    }
}

/// Truncation level: monomials of weight above `W` are discarded.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct WeightCut(pub u32);

impl Default for WeightCut {
    fn default() -> Self {
        WeightCut(18)
    }
}

type Powers = SmallVec<[(Var, u32); 4]>;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    weight: u32,
    powers: Powers,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial::from_powers([(v, 1)])
    }

    pub fn from_powers(it: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut powers: Powers = it.into_iter().filter(|&(_, e)| e > 0).collect();
        powers.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Powers = SmallVec::new();
        for (v, e) in powers {
            match merged.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => merged.push((v, e)),
            }
        }
        let weight = merged.iter().map(|(v, e)| v.weight() * e).sum();
        Monomial { weight, powers: merged }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.powers
            .iter()
            .find(|p| p.0 == v)
            .map_or(0, |p| p.1)
    }

    fn split(&self) -> (&[(Var, u32)], &[(Var, u32)]) {
        let k = self.powers.iter().take_while(|p| p.0.is_time()).count();
        self.powers.split_at(k)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.powers, &other.powers);
        let mut out: Powers = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial {
            weight: self.weight + other.weight,
            powers: out,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: Powers = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.powers {
            if j < other.powers.len() && other.powers[j].0 < v {
                return None;
            }
            if j < other.powers.len() && other.powers[j].0 == v {
                let f = other.powers[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.powers.len() {
            return None;
        }
        Some(Monomial {
            weight: self.weight - other.weight,
            powers: out,
        })
    }

    /// Splits into the part over variables selected by `keep` and the rest.
    pub fn partition(&self, keep: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.powers.iter().partition(|p| keep(p.0));
        (Monomial::from_powers(a), Monomial::from_powers(b))
    }
}

fn lex_desc(a: &[(Var, u32)], b: &[(Var, u32)]) -> Ordering {
    for k in 0.. {
        match (a.get(k), b.get(k)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some(&(va, ea)), Some(&(vb, eb))) => {
                if va != vb {
                    return va.cmp(&vb);
                }
                if ea != eb {
                    return eb.cmp(&ea);
                }
            }
        }
    }
    unreachable!()
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ta, ra) = self.split();
        let (tb, rb) = other.split();
        self.weight
            .cmp(&other.weight)
            .then_with(|| lex_desc(ta, tb))
            .then_with(|| {
                let da: u32 = ra.iter().map(|p| p.1).sum();
                let db: u32 = rb.iter().map(|p| p.1).sum();
                da.cmp(&db)
            })
            .then_with(|| lex_desc(ra, rb))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.powers.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Terms sorted ascending in monomial order, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v), Rational::one())
    }

    pub fn t(index: u32) -> Self {
        Poly::var(Var::t(index))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn constant_term(&self) -> Rational {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    /// The rational value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(n, _)| n.cmp(m))
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.last()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0.weight())
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.weight())
    }

    /// Weight if every term has the same weight; zero is homogeneous of any weight.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let w = self.min_weight()?;
        (self.max_weight() == Some(w)).then_some(w)
    }

    pub fn truncate(&self, cut: WeightCut) -> Poly {
        let k = self.terms.partition_point(|t| t.0.weight() <= cut.0);
        Poly {
            terms: self.terms[..k].to_vec(),
        }
    }

    pub fn weight_part(&self, w: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|t| t.0.weight() == w)
                .cloned()
                .collect(),
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|t| t.0.powers().iter().map(|p| p.0))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sgn = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), sgn(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| (t.0.clone(), sgn(&t.1))));
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut terms: Vec<_> = self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_cut(other, None)
    }

    pub fn mul_trunc(&self, other: &Poly, cut: WeightCut) -> Poly {
        self.mul_cut(other, Some(cut.0))
    }

    fn mul_cut(&self, other: &Poly, cut: Option<u32>) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c).truncate(WeightCut(cut.unwrap_or(u32::MAX)));
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c).truncate(WeightCut(cut.unwrap_or(u32::MAX)));
        }
        let limit = cut.unwrap_or(u32::MAX);
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (ma, ca) in &self.terms {
            if ma.weight() > limit {
                break;
            }
            for (mb, cb) in &other.terms {
                if ma.weight() + mb.weight() > limit {
                    break;
                }
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading().cloned()?;
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = r.leading().cloned() {
            let qm = m.div(&lm)?;
            let qc = &c / &lc;
            r = r.sub(&d.mul_monomial(&qm, &qc));
            q.push((qm, qc));
        }
        q.reverse();
        Some(Poly { terms: q })
    }

    pub fn derivative(&self, v: Var) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            (e > 0).then(|| {
                let rest = m.div(&Monomial::var(v)).unwrap();
                (rest, c * int(e as i64))
            })
        }))
    }

    /// Antiderivative in `v` with zero constant of integration.
    pub fn integrate(&self, v: Var) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exponent(v);
            (m.mul(&Monomial::var(v)), c / int(e as i64 + 1))
        }))
    }

    /// Replaces every occurrence of `v` by `value`.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        let mut powers: Vec<Poly> = vec![Poly::one()];
        let mut out = Poly::zero();
        let mut rest_terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            if e == 0 {
                rest_terms.push((m.clone(), c.clone()));
                continue;
            }
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let (_, rest) = m.partition(|w| w == v);
            out = out.add(&powers[e].mul_monomial(&rest, c));
        }
        out.add(&Poly::from_terms(rest_terms))
    }

    /// Applies several substitutions simultaneously.
    pub fn substitute_all(&self, subs: &[(Var, Poly)]) -> Poly {
        let mut acc = Poly::zero();
        let mut cache: FxHashMap<(usize, u32), Poly> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut term = Poly::one();
            let mut rest = Vec::new();
            for &(v, e) in m.powers() {
                match subs.iter().position(|s| s.0 == v) {
                    Some(k) => {
                        let p = cache
                            .entry((k, e))
                            .or_insert_with(|| subs[k].1.pow(e))
                            .clone();
                        term = term.mul(&p);
                    }
                    None => rest.push((v, e)),
                }
            }
            acc = acc.add(&term.mul_monomial(&Monomial::from_powers(rest), c));
        }
        acc
    }

    /// Sets the listed variables to zero.
    pub fn zero_vars(&self, vs: &[Var]) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vs.iter().all(|&v| m.exponent(v) == 0))
                .cloned()
                .collect(),
        }
    }

    /// Groups terms by their monomial in the variables selected by `outer`,
    /// returning each group's coefficient polynomial in the remaining variables.
    pub fn collect_by(&self, outer: impl Fn(Var) -> bool) -> Vec<(Monomial, Poly)> {
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, Rational)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (o, i) = m.partition(&outer);
            groups.entry(o).or_default().push((i, c.clone()));
        }
        let mut out: Vec<_> = groups
            .into_iter()
            .map(|(o, ts)| (o, Poly::from_terms(ts)))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mono: serde_json::Map<String, serde_json::Value> = m
                        .powers()
                        .iter()
                        .map(|(v, e)| (v.to_string(), serde_json::Value::from(*e)))
                        .collect();
                    serde_json::json!({"coeff": format_rational(c), "monomial": mono})
                })
                .collect(),
        )
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Poly> {
        let bad = |m: &str| Error::Parse {
            line: 1,
            column: 1,
            message: m.to_string(),
        };
        let items = value.as_array().ok_or_else(|| bad("expected a list of terms"))?;
        let mut terms = Vec::new();
        for item in items {
            let c = item
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| bad("term without string `coeff`"))?;
            let c = crate::rational::parse_rational(c)?;
            let mono = item
                .get("monomial")
                .and_then(|m| m.as_object())
                .ok_or_else(|| bad("term without `monomial` object"))?;
            let mut powers = Vec::new();
            for (k, e) in mono {
                let v = Var::parse(k).ok_or_else(|| bad(&format!("unknown variable `{k}`")))?;
                let e = e
                    .as_u64()
                    .ok_or_else(|| bad(&format!("bad exponent for `{k}`")))?;
                powers.push((v, e as u32));
            }
            terms.push((Monomial::from_powers(powers), c));
        }
        Ok(Poly::from_terms(terms))
    }

    pub fn parse(text: &str) -> Result<Poly> {
        crate::poly::parser::parse(text)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poly> {
        Poly::parse(s)
    }
}

impl num_traits::Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl num_traits::One for Poly {
    fn one() -> Self {
        Poly::one()
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                Poly::$m(self, rhs)
            }
        }
        impl std::ops::$tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                Poly::$m(&self, &rhs)
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

mod parser {
    use super::*;
    use crate::rational::parse_rational;

    struct P<'a> {
        src: &'a str,
        pos: usize,
    }

    impl<'a> P<'a> {
        fn err(&self, message: impl Into<String>) -> Error {
            let before = &self.src[..self.pos.min(self.src.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.rfind('\n').map_or(before.len(), |k| before.len() - k - 1) + 1;
            Error::Parse {
                line,
                column,
                message: message.into(),
            }
        }

        fn skip_ws(&mut self) {
            while let Some(ch) = self.peek_raw() {
                if ch.is_whitespace() {
                    self.pos += ch.len_utf8();
                } else {
                    break;
                }
            }
        }

        fn peek_raw(&self) -> Option<char> {
            self.src[self.pos..].chars().next()
        }

        fn peek(&mut self) -> Option<char> {
            self.skip_ws();
            self.peek_raw()
        }

        fn eat(&mut self, ch: char) -> bool {
            if self.peek() == Some(ch) {
                self.pos += ch.len_utf8();
                true
            } else {
                false
            }
        }

        fn expr(&mut self) -> Result<Poly> {
            let mut acc = if self.eat('-') {
                self.term()?.neg()
            } else {
                self.eat('+');
                self.term()?
            };
            loop {
                if self.eat('+') {
                    acc = acc.add(&self.term()?);
                } else if self.eat('-') {
                    acc = acc.sub(&self.term()?);
                } else {
                    return Ok(acc);
                }
            }
        }

        fn term(&mut self) -> Result<Poly> {
            let mut acc = self.power()?;
            loop {
                match self.peek() {
                    Some('*') => {
                        self.pos += 1;
                        acc = acc.mul(&self.power()?);
                    }
                    Some('/') => {
                        self.pos += 1;
                        let start = self.pos;
                        let d = self.power()?;
                        let d = d.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| {
                            self.pos = start;
                            self.err("division only by nonzero constants")
                        })?;
                        acc = acc.scale(&d.recip());
                    }
                    Some(ch) if ch.is_ascii_alphanumeric() || ch == '(' => {
                        acc = acc.mul(&self.power()?);
                    }
                    _ => return Ok(acc),
                }
            }
        }

        fn power(&mut self) -> Result<Poly> {
            let base = self.atom()?;
            if self.eat('^') {
                self.skip_ws();
                let start = self.pos;
                while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let e: u32 = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("expected a non-negative integer exponent"))?;
                Ok(base.pow(e))
            } else {
                Ok(base)
            }
        }

        fn atom(&mut self) -> Result<Poly> {
            match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let e = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.err("expected `)`"));
                    }
                    Ok(e)
                }
                Some('-') => {
                    self.pos += 1;
                    Ok(self.atom()?.neg())
                }
                Some(ch) if ch.is_ascii_digit() => {
                    let start = self.pos;
                    while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    Ok(Poly::constant(parse_rational(&self.src[start..self.pos])?))
                }
                Some(ch) if ch.is_ascii_alphabetic() => {
                    let start = self.pos;
                    self.pos += 1;
                    if ch != 'x' {
                        while self
                            .peek_raw()
                            .is_some_and(|c| c.is_ascii_digit() || c == 'p' || c == '\'')
                        {
                            self.pos += 1;
                        }
                    }
                    let name = &self.src[start..self.pos];
                    let v = Var::parse(name).ok_or_else(|| {
                        self.pos = start;
                        self.err(format!("unknown variable `{name}`"))
                    })?;
                    Ok(Poly::var(v))
                }
                Some(ch) => Err(self.err(format!("unexpected `{ch}`"))),
                None => Err(self.err("unexpected end of input")),
            }
        }
    }

    pub fn parse(text: &str) -> Result<Poly> {
        let mut p = P { src: text, pos: 0 };
        if p.peek().is_none() {
            return Err(p.err("empty polynomial"));
        }
        let out = p.expr()?;
        if p.peek().is_some() {
            let ch = p.peek().unwrap();
            return Err(p.err(format!("unexpected `{ch}`")));
        }
        Ok(out)
    }
}
