//! Hirota bilinear derivatives, graded ansatz spaces and equation fitting.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, rref, Matrix};
use crate::poly::{Monomial, Poly, Time, Var, WeightCut};
use crate::rational::{binomial, format_rational, int, Rational};

/// A product `D_l1^e1 D_l2^e2 ...`; the empty product is the constant term.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DMonomial {
    factors: Vec<(Time, u32)>,
}

impl DMonomial {
    pub fn one() -> Self {
        DMonomial::default()
    }

    pub fn new(it: impl IntoIterator<Item = (Time, u32)>) -> Self {
        let mut map: BTreeMap<Time, u32> = BTreeMap::new();
        for (t, e) in it {
            *map.entry(t).or_default() += e;
        }
        DMonomial {
            factors: map.into_iter().filter(|(_, e)| *e > 0).collect(),
        }
    }

    /// From a list of indices with repetition, e.g. `[1, 1, 3]` for `D1^2 D3`.
    pub fn from_indices(ix: &[u32]) -> Self {
        DMonomial::new(ix.iter().map(|&i| (Time::new(i), 1)))
    }

    pub fn factors(&self) -> &[(Time, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(t, e)| t.index * e).sum()
    }

    pub fn count(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Indices in non-decreasing order, one per factor.
    pub fn sequence(&self) -> Vec<Time> {
        self.factors
            .iter()
            .flat_map(|&(t, e)| std::iter::repeat(t).take(e as usize))
            .collect()
    }

    fn from_monomial(m: &Monomial) -> Result<Self> {
        let mut out = Vec::new();
        for &(v, e) in m.powers() {
            match v {
                Var::H(t) => out.push((t, e)),
                other => {
                    return Err(Error::Invalid(format!(
                        "`{other}` is not a bilinear derivative symbol"
                    )))
                }
            }
        }
        Ok(DMonomial::new(out))
    }

    pub fn fmt_with(&self, prefix: &str) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(t, e)| {
                if *e == 1 {
                    format!("{prefix}{}", t.label())
                } else {
                    format!("{prefix}{}^{e}", t.label())
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for DMonomial {
    /// Degree first, then lexicographic on the index sequence.
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.sequence().cmp(&o.sequence()))
    }
}

impl PartialOrd for DMonomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for DMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with("D"))
    }
}

/// A bilinear operator `sum c_m m`, applied to `(f, g)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HirotaPoly {
    terms: Vec<(DMonomial, Rational)>,
}

impl HirotaPoly {
    pub fn new(it: impl IntoIterator<Item = (DMonomial, Rational)>) -> Self {
        let mut map: BTreeMap<DMonomial, Rational> = BTreeMap::new();
        for (m, c) in it {
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        HirotaPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(DMonomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &DMonomial) -> Rational {
        self.terms
            .iter()
            .find(|(k, _)| k == m)
            .map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    /// The constant `beta`, i.e. the coefficient of the empty product.
    pub fn constant(&self) -> Rational {
        self.coeff(&DMonomial::one())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut d = self.terms.iter().map(|(m, _)| m.degree());
        match d.next() {
            Some(first) => d.all(|x| x == first),
            None => true,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HirotaPoly::new(self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    /// Parses `D1^4 - 4*D1*D3` (implicit products allowed, `D3p` for primed times).
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = String::with_capacity(text.len());
        let mut prev_alnum = false;
        for ch in text.chars() {
            if ch == 'D' && !prev_alnum {
                out.push('h');
            } else {
                out.push(ch);
            }
            prev_alnum = ch.is_ascii_alphanumeric();
        }
        let p = Poly::parse(&out)?;
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            terms.push((DMonomial::from_monomial(m)?, c.clone()));
        }
        Ok(HirotaPoly::new(terms))
    }

    /// Coefficient vector over the given monomials.
    pub fn vector(&self, monos: &[DMonomial]) -> Vec<Rational> {
        monos.iter().map(|m| self.coeff(m)).collect()
    }
}

impl fmt::Display for HirotaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut order: Vec<&(DMonomial, Rational)> = self.terms.iter().collect();
        order.sort_by_key(|(m, _)| (std::cmp::Reverse(m.degree()), m.sequence()));
        for (k, (m, c)) in order.into_iter().enumerate() {
            let (neg, a) = (c.is_negative(), c.abs());
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

/// Cached partial derivatives of one polynomial in the time variables.
#[derive(Debug)]
pub struct Derivatives<'a> {
    base: &'a Poly,
    cache: HashMap<Vec<(Time, u32)>, Poly>,
}

impl<'a> Derivatives<'a> {
    pub fn new(base: &'a Poly) -> Self {
        Derivatives {
            base,
            cache: HashMap::new(),
        }
    }

    /// `prod d^e / dt^e` of the base polynomial.
    pub fn get(&mut self, k: &[(Time, u32)]) -> Poly {
        let key: Vec<(Time, u32)> = k.iter().copied().filter(|(_, e)| *e > 0).collect();
        if key.is_empty() {
            return self.base.clone();
        }
        if let Some(p) = self.cache.get(&key) {
            return p.clone();
        }
        let mut shorter = key.clone();
        let last = shorter.len() - 1;
        shorter[last].1 -= 1;
        let t = key[last].0;
        let v = self.get(&shorter).derivative(Var::T(t));
        self.cache.insert(key, v.clone());
        v
    }
}

fn multi_indices(e: &[(Time, u32)]) -> Vec<Vec<(Time, u32)>> {
    let mut out = vec![Vec::new()];
    for &(t, n) in e {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=n).map(move |k| {
                    let mut p = prefix.clone();
                    p.push((t, k));
                    p
                })
            })
            .collect();
    }
    out
}

fn apply_cached(mono: &DMonomial, f: &mut Derivatives, g: &mut Derivatives) -> Poly {
    let e = mono.factors();
    let mut acc = Poly::zero();
    for k in multi_indices(e) {
        let mut c = Rational::one();
        let mut rest = Vec::with_capacity(e.len());
        for (&(t, n), &(_, kv)) in e.iter().zip(&k) {
            c *= binomial(&int(n as i64), kv);
            if (n - kv) % 2 == 1 {
                c = -c;
            }
            rest.push((t, n - kv));
        }
        let a = f.get(&k);
        if a.is_zero() {
            continue;
        }
        let b = g.get(&rest);
        if b.is_zero() {
            continue;
        }
        acc = acc.add(&a.mul(&b).scale(&c));
    }
    acc
}

/// `mono(f, g)` by the signed Leibniz rule
/// `D^n(f, g) = sum_k C(n, k) (-1)^(n-k) d^k f d^(n-k) g`.
pub fn hirota_apply(mono: &DMonomial, f: &Poly, g: &Poly) -> Poly {
    apply_cached(mono, &mut Derivatives::new(f), &mut Derivatives::new(g))
}

/// `eq(tau, tau)`; zero iff `tau` satisfies the equation.
pub fn verify_equation(eq: &HirotaPoly, tau: &Poly) -> Poly {
    let mut d = Derivatives::new(tau);
    let mut acc = Poly::zero();
    for (m, c) in eq.terms() {
        if m.count() % 2 == 1 {
            continue;
        }
        let v = self_apply(m, &mut d);
        acc = acc.add(&v.scale(c));
    }
    acc
}

fn self_apply(m: &DMonomial, d: &mut Derivatives) -> Poly {
    let mut acc = Poly::zero();
    let e = m.factors();
    for k in multi_indices(e) {
        let mut c = Rational::one();
        let mut rest = Vec::with_capacity(e.len());
        for (&(t, n), &(_, kv)) in e.iter().zip(&k) {
            c *= binomial(&int(n as i64), kv);
            if (n - kv) % 2 == 1 {
                c = -c;
            }
            rest.push((t, n - kv));
        }
        let a = d.get(&k);
        if a.is_zero() {
            continue;
        }
        let b = d.get(&rest);
        if !b.is_zero() {
            acc = acc.add(&a.mul(&b).scale(&c));
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnsatzOptions {
    pub include_constant: bool,
    /// Drop monomials with an odd number of factors; they vanish on `(tau, tau)`.
    pub even_only: bool,
}

impl Default for AnsatzOptions {
    fn default() -> Self {
        AnsatzOptions {
            include_constant: false,
            even_only: true,
        }
    }
}

/// All products of the given symbols with degree at most `bound`, in ascending order.
pub fn ansatz_basis(bound: u32, times: &[Time], opts: AnsatzOptions) -> Vec<DMonomial> {
    let mut ts: Vec<Time> = times.to_vec();
    ts.sort();
    ts.dedup();
    let mut out = Vec::new();
    fn go(ts: &[Time], left: u32, cur: &mut Vec<(Time, u32)>, out: &mut Vec<DMonomial>) {
        let Some((&t, rest)) = ts.split_first() else {
            out.push(DMonomial::new(cur.iter().copied()));
            return;
        };
        let mut e = 0;
        while e * t.index <= left {
            cur.push((t, e));
            go(rest, left - e * t.index, cur, out);
            cur.pop();
            e += 1;
        }
    }
    go(&ts, bound, &mut Vec::new(), &mut out);
    out.retain(|m| {
        (opts.include_constant || !m.is_one()) && (!opts.even_only || m.count() % 2 == 0)
    });
    out.sort();
    out
}

/// A fitting input: a tau function, exact through `valid_weight` if given.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub tau: Poly,
    pub valid_weight: Option<u32>,
}

impl CorpusEntry {
    pub fn exact(name: impl Into<String>, tau: Poly) -> Self {
        CorpusEntry {
            name: name.into(),
            tau,
            valid_weight: None,
        }
    }

    pub fn truncated(name: impl Into<String>, tau: Poly, cut: WeightCut) -> Self {
        CorpusEntry {
            name: name.into(),
            tau,
            valid_weight: Some(cut.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationSpace {
    pub degree_bound: u32,
    pub monomials: Vec<DMonomial>,
    /// Reduced echelon basis over the ascending monomial order.
    pub basis: Vec<HirotaPoly>,
    /// `(d, dim of the subspace using monomials of degree <= d)`.
    pub filtration: Vec<(u32, usize)>,
    pub corpus: Vec<String>,
}

impl EquationSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn dimension_upto(&self, d: u32) -> usize {
        self.filtration
            .iter()
            .rev()
            .find(|(k, _)| *k <= d)
            .map_or(0, |(_, n)| *n)
    }

    /// Whether `eq` lies in the span of the basis.
    pub fn contains(&self, eq: &HirotaPoly) -> bool {
        span_contains(&self.basis, eq)
    }
}

/// Monomials of degree exactly `d`.
pub fn homogeneous(monos: &[DMonomial], d: u32) -> Vec<DMonomial> {
    monos.iter().filter(|m| m.degree() == d).cloned().collect()
}

/// Null space of `alpha -> (sum alpha_i m_i(tau, tau))_tau` over all corpus
/// members, with parameters treated as independent variables. For a
/// truncated member only residual weights `w` with `w + deg <= valid` are used.
pub fn fit_equations(corpus: &[CorpusEntry], monomials: &[DMonomial]) -> EquationSpace {
    let mut monos: Vec<DMonomial> = monomials.to_vec();
    monos.sort();
    monos.dedup();
    let degree_bound = monos.iter().map(DMonomial::degree).max().unwrap_or(0);
    let mut row_of: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
    for (ti, entry) in corpus.iter().enumerate() {
        let limit = entry.valid_weight.map(|v| v.saturating_sub(degree_bound));
        if entry.valid_weight.is_some_and(|v| v < degree_bound) {
            continue;
        }
        let tau = match limit {
            Some(_) => entry.tau.truncate(WeightCut(entry.valid_weight.unwrap_or(0))),
            None => entry.tau.clone(),
        };
        let mut d = Derivatives::new(&tau);
        for (j, m) in monos.iter().enumerate() {
            if m.count() % 2 == 1 {
                continue;
            }
            let v = self_apply(m, &mut d);
            for (mono, c) in v.terms() {
                if limit.is_some_and(|l| mono.weight() > l) {
                    continue;
                }
                let n = row_of.len();
                let r = *row_of.entry((ti, mono.clone())).or_insert(n);
                entries.push((r, j, c.clone()));
            }
        }
    }
    let mut a: Matrix<Rational> = Matrix::zeros(row_of.len(), monos.len());
    for (r, c, v) in entries {
        a[(r, c)] = v;
    }
    let null = nullspace(&a);
    let basis = echelon_basis(&null, &monos);
    let mut degrees: Vec<u32> = monos.iter().map(DMonomial::degree).collect();
    degrees.dedup();
    let rows: Vec<usize> = (0..a.rows()).collect();
    let filtration = degrees
        .into_iter()
        .map(|d| {
            let cols: Vec<usize> = (0..monos.len()).filter(|&j| monos[j].degree() <= d).collect();
            (d, cols.len() - rank(&a.submatrix(&rows, &cols)))
        })
        .collect();
    EquationSpace {
        degree_bound,
        monomials: monos,
        basis,
        filtration,
        corpus: corpus.iter().map(|c| c.name.clone()).collect(),
    }
}

fn echelon_basis(vectors: &[Vec<Rational>], monos: &[DMonomial]) -> Vec<HirotaPoly> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(vectors.len(), monos.len(), |i, j| vectors[i][j].clone());
    let (r, pivots) = rref(&m);
    (0..pivots.len())
        .map(|i| HirotaPoly::new((0..monos.len()).map(|j| (monos[j].clone(), r[(i, j)].clone()))))
        .collect()
}

fn union_monomials(eqs: &[&HirotaPoly]) -> Vec<DMonomial> {
    let mut v: Vec<DMonomial> = eqs
        .iter()
        .flat_map(|e| e.terms().iter().map(|(m, _)| m.clone()))
        .collect();
    v.sort();
    v.dedup();
    v
}

fn span_rank(eqs: &[&HirotaPoly], monos: &[DMonomial]) -> usize {
    if eqs.is_empty() {
        return 0;
    }
    rank(&Matrix::from_fn(eqs.len(), monos.len(), |i, j| eqs[i].coeff(&monos[j])))
}

pub fn span_contains(basis: &[HirotaPoly], eq: &HirotaPoly) -> bool {
    let mut all: Vec<&HirotaPoly> = basis.iter().collect();
    let monos = union_monomials(&[all.clone(), vec![eq]].concat());
    let before = span_rank(&all, &monos);
    all.push(eq);
    span_rank(&all, &monos) == before
}

/// Whether two lists of equations span the same space.
pub fn same_span(a: &[HirotaPoly], b: &[HirotaPoly]) -> bool {
    let all: Vec<&HirotaPoly> = a.iter().chain(b).collect();
    let monos = union_monomials(&all);
    let ra = span_rank(&a.iter().collect::<Vec<_>>(), &monos);
    let rb = span_rank(&b.iter().collect::<Vec<_>>(), &monos);
    ra == rb && span_rank(&all, &monos) == ra
}

/// `c * prod p^e` with each exponent reduced to `[0, 1)` and `p` prime.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct Radical {
    powers: Vec<(u64, Rational)>,
}

impl Radical {
    pub fn powers(&self) -> &[(u64, Rational)] {
        &self.powers
    }
}

/// Finite sums of rationals times radicals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Surd {
    terms: BTreeMap<Radical, Rational>,
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Surd {
    pub fn rational(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Radical::default(), c);
        }
        Surd { terms }
    }

    /// `c * base^exp` for a positive integer base.
    pub fn power(c: Rational, base: u64, exp: Rational) -> Result<Self> {
        if base == 0 {
            return Err(Error::Invalid("radical base must be positive".into()));
        }
        let mut out = Surd::rational(c);
        for (p, e) in factor(base) {
            out = out.mul(&Surd::prime_power(p, exp.clone() * int(e as i64)));
        }
        Ok(out)
    }

    fn prime_power(p: u64, exp: Rational) -> Self {
        let fl = exp.floor();
        let frac = exp - &fl;
        let k = fl.to_integer();
        let pr = Rational::from_integer(p.into());
        let c = if k >= 0.into() {
            num_traits::pow(pr, k.try_into().unwrap_or(0usize))
        } else {
            num_traits::pow(pr, (-k).try_into().unwrap_or(0usize)).recip()
        };
        let mut terms = BTreeMap::new();
        let rad = if frac.is_zero() {
            Radical::default()
        } else {
            Radical {
                powers: vec![(p, frac)],
            }
        };
        terms.insert(rad, c);
        Surd { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Radical::default()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Surd) -> Surd {
        let mut terms = self.terms.clone();
        for (r, c) in &o.terms {
            let v = terms.entry(r.clone()).or_insert_with(Rational::zero);
            *v += c;
            if v.is_zero() {
                terms.remove(r);
            }
        }
        Surd { terms }
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        let mut acc = Surd::default();
        for (ra, ca) in &self.terms {
            for (rb, cb) in &o.terms {
                let mut prod = Surd::rational(ca * cb);
                let mut exps: BTreeMap<u64, Rational> = BTreeMap::new();
                for (p, e) in ra.powers.iter().chain(&rb.powers) {
                    *exps.entry(*p).or_insert_with(Rational::zero) += e;
                }
                for (p, e) in exps {
                    prod = prod.mul_prime(p, e);
                }
                acc = acc.add(&prod);
            }
        }
        acc
    }

    fn mul_prime(&self, p: u64, e: Rational) -> Surd {
        let pp = Surd::prime_power(p, e);
        let (rad, c) = pp.terms.into_iter().next().expect("nonzero power");
        let mut terms = BTreeMap::new();
        for (r, x) in &self.terms {
            let mut powers = r.powers.clone();
            powers.extend(rad.powers.iter().cloned());
            powers.sort();
            terms.insert(Radical { powers }, x * &c);
        }
        Surd { terms }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| {
                let rad: Vec<String> = r
                    .powers
                    .iter()
                    .map(|(p, e)| format!("{p}^({})", format_rational(e)))
                    .collect();
                match (rad.is_empty(), c.is_one()) {
                    (true, _) => format_rational(c),
                    (false, true) => rad.join("*"),
                    (false, false) => format!("{}*{}", format_rational(c), rad.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Linear change `D_old -> sum c D_new`; new symbols print with the `DT` prefix.
pub type Substitution = BTreeMap<Time, Vec<(Time, Surd)>>;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SurdEquation {
    pub terms: BTreeMap<DMonomial, Surd>,
}

impl fmt::Display for SurdEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("({c})*{}", m.fmt_with("DT")))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rewrites `eq` in new symbols. Each old symbol must map to new symbols of
/// the same degree, triangularly with nonzero diagonal in index order.
pub fn rescale_times(eq: &HirotaPoly, subs: &Substitution) -> Result<SurdEquation> {
    for (old, image) in subs {
        if let Some((t, _)) = image.iter().find(|(t, _)| t.index != old.index) {
            return Err(Error::Invalid(format!(
                "D{} -> DT{} mixes degrees {} and {}",
                old.label(),
                t.label(),
                old.index,
                t.index
            )));
        }
        let diag = image.iter().find(|(t, _)| t == old);
        if diag.map_or(true, |(_, c)| c.is_zero()) {
            return Err(Error::Invalid(format!(
                "D{} has no diagonal coefficient; the substitution is not triangular",
                old.label()
            )));
        }
        if image.iter().any(|(t, c)| t > old && !c.is_zero()) {
            return Err(Error::Invalid(format!(
                "D{} maps to a later symbol; the substitution is not triangular",
                old.label()
            )));
        }
    }
    let mut out: BTreeMap<DMonomial, Surd> = BTreeMap::new();
    for (m, c) in eq.terms() {
        let mut acc: Vec<(Vec<(Time, u32)>, Surd)> = vec![(Vec::new(), Surd::rational(c.clone()))];
        for t in m.sequence() {
            let image = subs
                .get(&t)
                .cloned()
                .unwrap_or_else(|| vec![(t, Surd::rational(Rational::one()))]);
            let mut next = Vec::new();
            for (mono, coeff) in &acc {
                for (nt, nc) in &image {
                    let mut mm = mono.clone();
                    mm.push((*nt, 1));
                    next.push((mm, coeff.mul(nc)));
                }
            }
            acc = next;
        }
        for (mono, coeff) in acc {
            let key = DMonomial::new(mono);
            let v = out.entry(key.clone()).or_default().add(&coeff);
            if v.is_zero() {
                out.remove(&key);
            } else {
                out.insert(key, v);
            }
        }
    }
    Ok(SurdEquation { terms: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn d(ix: &[u32]) -> DMonomial {
        DMonomial::from_indices(ix)
    }

    #[test]
    fn first_derivative_rule() {
        assert_eq!(hirota_apply(&d(&[1]), &p("t1"), &p("1")), p("1"));
        assert_eq!(hirota_apply(&d(&[1, 1]), &p("t1^2"), &p("1")), p("2"));
        assert_eq!(verify_equation(&HirotaPoly::parse("D1^2").unwrap(), &p("1 + t1")), p("-2"));
    }

    #[test]
    fn odd_count_vanishes_on_diagonal() {
        let f = p("1 + t1 + t3 - t1^3/3 + a1*t1*t3");
        assert!(hirota_apply(&d(&[1, 1, 3]), &f, &f).is_zero());
    }

    #[test]
    fn kdv_on_tau2() {
        let eq = HirotaPoly::parse("D1^4 - 4*D1*D3").unwrap();
        assert!(verify_equation(&eq, &p("1 + t3 - t1^3/3")).is_zero());
        assert_eq!(eq.to_string(), "D1^4 - 4*D1*D3");
    }

    #[test]
    fn ansatz_examples() {
        let t = |i| Time::new(i);
        let opts = AnsatzOptions {
            include_constant: true,
            even_only: true,
        };
        let b = ansatz_basis(4, &[t(1), t(3)], opts);
        assert_eq!(b, vec![DMonomial::one(), d(&[1, 1]), d(&[1, 1, 1, 1]), d(&[1, 3])]);
        let b = ansatz_basis(0, &[t(1)], AnsatzOptions::default());
        assert!(b.is_empty());
        let b = ansatz_basis(6, &[t(1), t(2), t(4), t(5)], AnsatzOptions::default());
        for m in [d(&[1; 6]), d(&[1, 1, 2, 2]), d(&[2, 4]), d(&[1, 5])] {
            assert!(b.contains(&m), "{m}");
        }
    }

    #[test]
    fn kdv1_fit() {
        let t = |i| Time::new(i);
        let opts = AnsatzOptions {
            include_constant: true,
            even_only: true,
        };
        let corpus = vec![
            CorpusEntry::exact("tau1", p("1 + t1")),
            CorpusEntry::exact("tau2", p("1 + t3 - t1^3/3")),
        ];
        let monos = ansatz_basis(4, &[t(1), t(3)], opts);
        let sp = fit_equations(&corpus, &monos);
        assert_eq!(sp.dimension(), 1);
        assert_eq!(sp.basis[0], HirotaPoly::parse("D1^4 - 4 D1 D3").unwrap());
        assert_eq!(sp.dimension_upto(2), 0);
    }

    #[test]
    fn surd_arithmetic() {
        let a = Surd::power(frac(1, 1), 2, frac(1, 2)).unwrap();
        assert_eq!(a.mul(&a).as_rational(), Some(int(2)));
        let b = Surd::power(frac(1, 1), 2, frac(-1, 6)).unwrap();
        let six = (0..6).fold(Surd::rational(int(1)), |acc, _| acc.mul(&b));
        assert_eq!(six.as_rational(), Some(frac(1, 2)));
        let c = Surd::power(frac(1, 1), 12, frac(1, 2)).unwrap();
        assert_eq!(c.to_string(), "2*3^(1/2)");
    }

    #[test]
    fn rescale_scaling() {
        let eq = HirotaPoly::parse("D1^4 - 4 D1 D3").unwrap();
        let mut s = Substitution::new();
        s.insert(Time::new(1), vec![(Time::new(1), Surd::rational(int(2)))]);
        let out = rescale_times(&eq, &s).unwrap();
        assert_eq!(out.terms[&d(&[1, 1, 1, 1])].as_rational(), Some(int(16)));
        assert_eq!(out.terms[&d(&[1, 3])].as_rational(), Some(int(-8)));
        let mut bad = Substitution::new();
        bad.insert(Time::new(1), vec![(Time::new(3), Surd::rational(int(1)))]);
        assert!(rescale_times(&eq, &bad).is_err());
        assert_eq!(rescale_times(&eq, &Substitution::new()).unwrap().terms.len(), 2);
    }
}
