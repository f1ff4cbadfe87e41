//! Matrix realizations of the classical simple Lie algebras with their
//! principal gradation, the cyclic element and its centralizer.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::MatrixLaurent;
use crate::linalg::{rref, solve_in_span, Matrix, SpanTracker};
use crate::poly::Time;
use crate::rational::{format_rational, frac, int, is_integer, Rational};

pub type QMatrix = Matrix<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            other => Err(Error::Invalid(format!("unsupported family `{other}`"))),
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 3,
        }
    }

    pub fn coxeter(self, n: usize) -> u32 {
        let n = n as u32;
        match self {
            Family::A => n + 1,
            Family::B | Family::C => 2 * n,
            Family::D => 2 * n - 2,
        }
    }

    pub fn dual_coxeter(self, n: usize) -> u32 {
        let n = n as u32;
        match self {
            Family::A => n + 1,
            Family::B => 2 * n - 1,
            Family::C => n + 1,
            Family::D => 2 * n - 2,
        }
    }

    pub fn dimension(self, n: usize) -> usize {
        match self {
            Family::A => n * (n + 2),
            Family::B | Family::C => n * (2 * n + 1),
            Family::D => n * (2 * n - 1),
        }
    }

    /// Exponents in increasing order; a repeated exponent is primed.
    pub fn exponents(self, n: usize) -> Vec<Time> {
        let n32 = n as u32;
        let mut out: Vec<Time> = match self {
            Family::A => (1..=n32).map(Time::new).collect(),
            Family::B | Family::C => (1..=n32).map(|k| Time::new(2 * k - 1)).collect(),
            Family::D => {
                let mut v: Vec<Time> = (1..n32).map(|k| Time::new(2 * k - 1)).collect();
                v.push(Time::new(n32 - 1));
                v
            }
        };
        out.sort();
        for k in 1..out.len() {
            if out[k].index == out[k - 1].index {
                out[k].primed = true;
            }
        }
        out
    }

    /// Cartan matrix with `A[i][j] = alpha_j(H_i)`.
    pub fn cartan(self, n: usize) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
        }
        let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self {
            Family::A | Family::B | Family::C => {
                for i in 0..n.saturating_sub(1) {
                    link(&mut a, i, i + 1);
                }
                if n >= 2 && self == Family::B {
                    a[n - 1][n - 2] = -2;
                }
                if n >= 2 && self == Family::C {
                    a[n - 2][n - 1] = -2;
                }
            }
            Family::D => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1);
                }
                link(&mut a, n - 3, n - 1);
            }
        }
        a
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A homogeneous element of the realized algebra, with its principal degree.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub degree: i64,
    pub matrix: QMatrix,
}

/// `Lambda_l` as a Laurent polynomial matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaElement {
    pub label: Time,
    pub matrix: MatrixLaurent<Rational>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `Lambda_l = Lambda^l` (with a pinned partner for a repeated exponent),
    /// the convention reproducing the reference Schur polynomial table.
    #[default]
    Powers,
    /// Rescale partners so that `(Lambda_a | Lambda_b) = h lambda` for `a + b = n + 1`.
    Pairing,
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub family: Family,
    pub rank: usize,
    pub m: usize,
    pub e: Vec<QMatrix>,
    pub f: Vec<QMatrix>,
    pub h: Vec<QMatrix>,
    pub cartan: Vec<Vec<i64>>,
    pub e_theta_minus: QMatrix,
    pub e_theta_plus: QMatrix,
    pub coxeter: u32,
    pub dual_coxeter: u32,
    pub exponents: Vec<Time>,
    pub kappa: Rational,
    /// Principal degree of each basis vector of the representation space.
    pub grading: Vec<i64>,
    /// Homogeneous basis of the realized algebra.
    pub basis: Vec<BasisElement>,
    pub normalization: Normalization,
    /// Explicit `Lambda_{m_a}` overriding the default choice.
    pub overrides: BTreeMap<Time, MatrixLaurent<Rational>>,
    coords: Coordinates,
}

/// Linear coordinates with respect to `basis`, read off a set of pivot entries.
#[derive(Clone, Debug)]
struct Coordinates {
    positions: Vec<usize>,
    inverse: QMatrix,
}

fn flatten(a: &QMatrix) -> Vec<Rational> {
    a.entries().to_vec()
}

impl Coordinates {
    fn new(basis: &[QMatrix]) -> Result<Coordinates> {
        let n = basis.len();
        let rows = Matrix::from_fn(n, basis[0].entries().len(), |i, j| basis[i].entries()[j].clone());
        let (_, positions) = rref(&rows);
        if positions.len() != n {
            return Err(Error::Invalid("algebra basis is linearly dependent".into()));
        }
        let s = Matrix::from_fn(n, n, |i, k| rows[(k, positions[i])].clone());
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                s[(i, j)].clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, _) = rref(&aug);
        let inverse = Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone());
        Ok(Coordinates { positions, inverse })
    }

    fn of(&self, a: &QMatrix) -> Vec<Rational> {
        let e = a.entries();
        let n = self.positions.len();
        (0..n)
            .map(|i| {
                (0..n).fold(Rational::zero(), |acc, k| {
                    acc + &self.inverse[(i, k)] * &e[self.positions[k]]
                })
            })
            .collect()
    }
}

fn bracket(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.commutator(b)
}

fn ratio(a: &QMatrix, b: &QMatrix) -> Option<Rational> {
    let k = b.entries().iter().position(|x| !x.is_zero())?;
    let r = &a.entries()[k] / &b.entries()[k];
    (b.scale(&r) == *a).then_some(r)
}

/// Generator data from which a realization is assembled.
#[derive(Clone, Debug, Default)]
pub struct GeneratorSet {
    pub e: Vec<QMatrix>,
    pub f: Vec<QMatrix>,
    pub h: Option<Vec<QMatrix>>,
    pub lambda_part: Option<QMatrix>,
    pub family_hint: Option<Family>,
    pub normalization: Normalization,
    pub overrides: BTreeMap<Time, MatrixLaurent<Rational>>,
}

/// Builds the standard realization of `family` of the given rank.
pub fn build_realization(family: Family, rank: usize) -> Result<Realization> {
    from_generators(standard_generators(family, rank)?)
}

/// Generators of the standard realization.
pub fn standard_generators(family: Family, rank: usize) -> Result<GeneratorSet> {
    if rank < family.min_rank() {
        return Err(Error::Invalid(format!(
            "{family}{rank} is not supported; rank must be at least {}",
            family.min_rank()
        )));
    }
    Ok(match family {
        Family::A => type_a(rank),
        _ => orthosymplectic(family, rank),
    })
}

fn type_a(n: usize) -> GeneratorSet {
    let m = n + 1;
    let e: Vec<QMatrix> = (1..=n).map(|i| Matrix::unit(m, i, i - 1)).collect();
    let f: Vec<QMatrix> = (1..=n).map(|i| Matrix::unit(m, i - 1, i)).collect();
    GeneratorSet {
        e,
        f,
        lambda_part: Some(Matrix::unit(m, 0, n)),
        family_hint: Some(Family::A),
        ..Default::default()
    }
}

/// Invariant form: anti-diagonal with signs `s_p`; symmetric for B and D,
/// skew for C.
fn form_signs(family: Family, n: usize) -> Vec<i64> {
    let m = if family == Family::B { 2 * n + 1 } else { 2 * n };
    (0..m)
        .map(|p| {
            let alt = if p % 2 == 0 { 1 } else { -1 };
            match family {
                Family::D if p >= n => {
                    let q = m - 1 - p;
                    if q % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                }
                _ => alt,
            }
        })
        .collect()
}

/// `E_ab - s_a s_b E_(b', a')`, the image of a matrix unit in the algebra
/// preserving the anti-diagonal form (primes denote mirrored indices).
fn mirrored_unit(signs: &[i64], a: usize, b: usize) -> QMatrix {
    let m = signs.len();
    let mut x = Matrix::unit(m, a, b);
    let (ab, bb) = (m - 1 - a, m - 1 - b);
    let c = int(-signs[a] * signs[b]);
    x[(bb, ab)] = &x[(bb, ab)] + c;
    x
}

fn orthosymplectic(family: Family, n: usize) -> GeneratorSet {
    let signs = form_signs(family, n);
    let m = signs.len();
    let mut e = Vec::new();
    match family {
        Family::B | Family::C => {
            for p in 0..n {
                e.push(mirrored_unit(&signs, p + 1, p));
            }
        }
        Family::D => {
            for p in 0..n - 1 {
                e.push(mirrored_unit(&signs, p + 1, p));
            }
            e.push(mirrored_unit(&signs, n + 1, n - 1));
        }
        Family::A => unreachable!(),
    }
    let f: Vec<QMatrix> = e
        .iter()
        .map(|x| {
            let t = x.transpose();
            let mut acc = Matrix::zeros(m, m);
            for a in 0..m {
                for b in 0..m {
                    if !t[(a, b)].is_zero() {
                        acc = acc.add(&mirrored_unit(&signs, a, b).scale(&t[(a, b)]));
                    }
                }
            }
            acc
        })
        .collect();
    let f = f
        .into_iter()
        .zip(&e)
        .map(|(y, x)| {
            let h = bracket(x, &y);
            let mu = ratio(&bracket(&h, x), x).expect("E_i is an eigenvector of [E_i, F_i]");
            y.scale(&(int(2) / mu))
        })
        .collect();
    let half = frac(1, 2);
    let lambda_part = match family {
        Family::B => mirrored_unit(&signs, 0, m - 2).scale(&half),
        Family::C => mirrored_unit(&signs, 0, m - 1).scale(&half),
        Family::D => mirrored_unit(&signs, 0, m - 2).scale(&half),
        Family::A => unreachable!(),
    };
    GeneratorSet {
        e,
        f,
        lambda_part: Some(lambda_part),
        family_hint: Some(family),
        ..Default::default()
    }
}

fn name(kind: &str, i: usize) -> String {
    format!("{kind}{}", i + 1)
}

fn check_relations(e: &[QMatrix], f: &[QMatrix], h: &[QMatrix]) -> Result<Vec<Vec<i64>>> {
    let n = e.len();
    let fail = |s: String| Err(Error::Relation(s));
    let mut cartan = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let b = bracket(&e[i], &f[j]);
            let want = if i == j { h[i].clone() } else { Matrix::zeros(b.rows(), b.cols()) };
            if b != want {
                return fail(if i == j {
                    format!("[{},{}] != {}", name("E", i), name("F", i), name("H", i))
                } else {
                    format!("[{},{}] != 0", name("E", i), name("F", j))
                });
            }
            if !bracket(&h[i], &h[j]).is_zero() {
                return fail(format!("[{},{}] != 0", name("H", i), name("H", j)));
            }
            let he = bracket(&h[i], &e[j]);
            let a = match ratio(&he, &e[j]) {
                Some(a) if is_integer(&a) => a,
                _ if he.is_zero() => Rational::zero(),
                _ => {
                    return fail(format!(
                        "[{},{}] is not an integer multiple of {}",
                        name("H", i),
                        name("E", j),
                        name("E", j)
                    ))
                }
            };
            let hf = bracket(&h[i], &f[j]);
            if hf != f[j].scale(&-a.clone()) {
                return fail(format!(
                    "[{},{}] != -{} {}",
                    name("H", i),
                    name("F", j),
                    format_rational(&a),
                    name("F", j)
                ));
            }
            let a: i64 = a.to_integer().try_into().unwrap_or(i64::MAX);
            if i == j && a != 2 {
                return fail(format!("[{},{}] != 2 {}", name("H", i), name("E", i), name("E", i)));
            }
            cartan[i][j] = a;
        }
    }
    Ok(cartan)
}

/// Finds a permutation `p` with `a[p(i)][p(j)] = b[i][j]`.
fn cartan_isomorphic(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    fn go(a: &[Vec<i64>], b: &[Vec<i64>], p: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = p.len();
        if k == a.len() {
            return true;
        }
        for c in 0..a.len() {
            if used[c] {
                continue;
            }
            if (0..k).all(|j| a[c][p[j]] == b[k][j] && a[p[j]][c] == b[j][k]) {
                p.push(c);
                used[c] = true;
                if go(a, b, p, used) {
                    return true;
                }
                p.pop();
                used[c] = false;
            }
        }
        false
    }
    a.len() == b.len() && go(a, b, &mut Vec::new(), &mut vec![false; a.len()])
}

fn identify(cartan: &[Vec<i64>], m: usize, hint: Option<Family>) -> Result<Family> {
    let n = cartan.len();
    let matches: Vec<Family> = [Family::A, Family::B, Family::C, Family::D]
        .into_iter()
        .filter(|f| n >= f.min_rank() && cartan_isomorphic(cartan, &f.cartan(n)))
        .collect();
    if let Some(h) = hint.filter(|h| matches.contains(h)) {
        return Ok(h);
    }
    if n == 2 && matches.contains(&Family::B) && m == 4 {
        return Ok(Family::C);
    }
    matches
        .first()
        .copied()
        .ok_or_else(|| Error::Relation(format!("Cartan matrix {cartan:?} is not of classical type")))
}

/// Homogeneous basis generated by iterated brackets of the generators.
fn graded_closure(e: &[QMatrix], f: &[QMatrix], h: &[QMatrix]) -> Vec<BasisElement> {
    let mut out = Vec::new();
    let mut zero = SpanTracker::new();
    for x in h {
        if zero.insert(&flatten(x)) {
            out.push(BasisElement { degree: 0, matrix: x.clone() });
        }
    }
    for (gens, sign) in [(e, 1i64), (f, -1i64)] {
        let mut level: Vec<QMatrix> = Vec::new();
        let mut span = SpanTracker::new();
        for x in gens {
            if span.insert(&flatten(x)) {
                level.push(x.clone());
            }
        }
        let mut degree = 1;
        while !level.is_empty() {
            out.extend(level.iter().map(|x| BasisElement {
                degree: sign * degree,
                matrix: x.clone(),
            }));
            let mut next = Vec::new();
            let mut span = SpanTracker::new();
            for g in gens {
                for y in &level {
                    let z = bracket(g, y);
                    if span.insert(&flatten(&z)) {
                        next.push(z);
                    }
                }
            }
            level = next;
            degree += 1;
        }
    }
    out.sort_by_key(|b| b.degree);
    out
}

/// Assembles a realization from generators, verifying every relation.
pub fn from_generators(gens: GeneratorSet) -> Result<Realization> {
    let GeneratorSet {
        e,
        f,
        h,
        lambda_part,
        family_hint,
        normalization,
        overrides,
    } = gens;
    let n = e.len();
    if n == 0 || f.len() != n {
        return Err(Error::Invalid(format!(
            "need equally many E and F generators, got {} and {}",
            n,
            f.len()
        )));
    }
    let m = e[0].rows();
    let square = |x: &QMatrix| x.rows() == m && x.cols() == m;
    if !e.iter().chain(&f).all(square) {
        return Err(Error::Invalid(format!("all generators must be {m}x{m}")));
    }
    let h = match h {
        Some(h) if h.len() == n && h.iter().all(square) => h,
        Some(_) => return Err(Error::Invalid("H generators do not match E, F".into())),
        None => e.iter().zip(&f).map(|(x, y)| bracket(x, y)).collect(),
    };
    let cartan = check_relations(&e, &f, &h)?;
    let family = identify(&cartan, m, family_hint)?;
    let basis = graded_closure(&e, &f, &h);
    if basis.len() != family.dimension(n) {
        return Err(Error::Relation(format!(
            "generated algebra has dimension {}, expected {} for {family}{n}",
            basis.len(),
            family.dimension(n)
        )));
    }
    let top = basis.last().map_or(0, |b| b.degree);
    let coxeter = family.coxeter(n);
    if top + 1 != coxeter as i64 {
        return Err(Error::Relation(format!(
            "highest principal degree is {top}, expected {}",
            coxeter - 1
        )));
    }

    // rho = sum c_i H_i with alpha_j(rho) = 1 for all j.
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| int(cartan[i][j])).collect())
        .collect();
    let c = solve_in_span(&cols, &vec![Rational::one(); n])
        .ok_or_else(|| Error::Relation("Cartan matrix is singular".into()))?;
    let rho = h
        .iter()
        .zip(&c)
        .fold(Matrix::zeros(m, m), |acc: QMatrix, (x, ci)| acc.add(&x.scale(ci)));
    let diagonal = (0..m).all(|a| (0..m).all(|b| a == b || rho[(a, b)].is_zero()));
    if !diagonal {
        return Err(Error::Invalid(
            "the principal grading element is not diagonal in the given basis".into(),
        ));
    }
    let low = (0..m).map(|a| rho[(a, a)].clone()).min().unwrap();
    let mut grading = Vec::with_capacity(m);
    for a in 0..m {
        let d = &rho[(a, a)] - &low;
        if !is_integer(&d) {
            return Err(Error::Invalid("principal degrees are not integral".into()));
        }
        grading.push(d.to_integer().try_into().unwrap());
    }

    let coords = Coordinates::new(&basis.iter().map(|b| b.matrix.clone()).collect::<Vec<_>>())?;
    let lowest: Vec<&BasisElement> = basis.iter().filter(|b| b.degree == 1 - coxeter as i64).collect();
    let highest: Vec<&BasisElement> = basis.iter().filter(|b| b.degree == coxeter as i64 - 1).collect();
    if lowest.len() != 1 || highest.len() != 1 {
        return Err(Error::Relation("root spaces of +-theta are not one-dimensional".into()));
    }
    let e_theta_minus = match lambda_part {
        Some(x) => {
            if ratio(&x, &lowest[0].matrix).is_none() {
                return Err(Error::Invalid(
                    "the lambda part of Lambda is not a lowest root vector".into(),
                ));
            }
            x
        }
        None => lowest[0].matrix.clone(),
    };

    let mut r = Realization {
        family,
        rank: n,
        m,
        e,
        f,
        h,
        cartan,
        e_theta_plus: highest[0].matrix.clone(),
        e_theta_minus,
        coxeter,
        dual_coxeter: family.dual_coxeter(n),
        exponents: family.exponents(n),
        kappa: Rational::zero(),
        grading,
        basis,
        normalization,
        overrides,
        coords,
    };
    r.kappa = compute_kappa(&r)?;
    let p = r.form(&r.e_theta_plus, &r.e_theta_minus);
    r.e_theta_plus = r.e_theta_plus.scale(&p.recip());
    Ok(r)
}

/// `kappa` with `(a|b) = kappa tr(ab)`, from the Killing form divided by `2 h^vee`.
pub fn compute_kappa(r: &Realization) -> Result<Rational> {
    let candidates = r.h.iter().chain(r.basis.iter().map(|b| &b.matrix));
    for a in candidates {
        let tr = a.mul(a).trace();
        if tr.is_zero() {
            continue;
        }
        let killing = r.killing(a, a);
        if killing.is_zero() {
            continue;
        }
        return Ok(killing / (int(2 * r.dual_coxeter as i64) * tr));
    }
    Err(Error::Computation("every test element has degenerate trace form".into()))
}

impl Realization {
    /// Coordinates in `basis`, or `None` if `a` is not in the algebra.
    pub fn coordinates(&self, a: &QMatrix) -> Option<Vec<Rational>> {
        let c = self.coords.of(a);
        let back = self
            .basis
            .iter()
            .zip(&c)
            .fold(Matrix::zeros(self.m, self.m), |acc: QMatrix, (b, x)| acc.add(&b.matrix.scale(x)));
        (back == *a).then_some(c)
    }

    pub fn contains(&self, a: &QMatrix) -> bool {
        self.coordinates(a).is_some()
    }

    pub fn ad(&self, a: &QMatrix) -> QMatrix {
        let n = self.basis.len();
        let cols: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|b| self.coords.of(&bracket(a, &b.matrix)))
            .collect();
        Matrix::from_fn(n, n, |i, j| cols[j][i].clone())
    }

    pub fn killing(&self, a: &QMatrix, b: &QMatrix) -> Rational {
        self.ad(a).mul(&self.ad(b)).trace()
    }

    /// The normalized invariant form `kappa tr(ab)`.
    pub fn form(&self, a: &QMatrix, b: &QMatrix) -> Rational {
        &self.kappa * a.mul(b).trace()
    }

    pub fn i_plus(&self) -> QMatrix {
        self.e.iter().fold(Matrix::zeros(self.m, self.m), |acc, x| acc.add(x))
    }

    /// `Lambda = I_+ + lambda E_{-theta}`.
    pub fn principal_lambda(&self) -> MatrixLaurent<Rational> {
        MatrixLaurent::from_blocks(
            self.m,
            [(0, self.i_plus()), (1, self.e_theta_minus.clone())],
        )
    }

    /// Loop-algebra pairing: `kappa tr(XY)` as a Laurent polynomial in lambda.
    pub fn pairing(
        &self,
        x: &MatrixLaurent<Rational>,
        y: &MatrixLaurent<Rational>,
    ) -> BTreeMap<i64, Rational> {
        x.mul(y)
            .trace()
            .into_iter()
            .map(|(k, t)| (k, &self.kappa * t))
            .collect()
    }

    /// Principal degree of the scalar index `Q m + p`: `h Q + d(p)`.
    pub fn scalar_degree(&self, i: i64) -> i64 {
        let m = self.m as i64;
        self.coxeter as i64 * i.div_euclid(m) + self.grading[i.rem_euclid(m) as usize]
    }

    /// Positive times `t_l`, `l = m_a + k h <= max_weight`, in increasing order.
    pub fn times(&self, max_weight: u32) -> Vec<Time> {
        let mut out = Vec::new();
        for k in 0.. {
            let mut any = false;
            for e in &self.exponents {
                let l = e.index + k * self.coxeter;
                if l <= max_weight {
                    any = true;
                    out.push(Time { index: l, primed: e.primed });
                }
            }
            if !any {
                break;
            }
        }
        out.sort();
        out
    }

    /// The adjoint representation, built from structure constants in `basis`.
    pub fn adjoint(&self) -> Result<Realization> {
        let ad = |x: &QMatrix| self.ad(x);
        from_generators(GeneratorSet {
            e: self.e.iter().map(ad).collect(),
            f: self.f.iter().map(ad).collect(),
            h: Some(self.h.iter().map(ad).collect()),
            lambda_part: Some(ad(&self.e_theta_minus)),
            family_hint: Some(self.family),
            normalization: self.normalization,
            overrides: BTreeMap::new(),
        })
    }

    /// Solves `[Lambda, Y] = 0` in loop degree `l` (`0 < l < h`), returning a basis.
    pub fn kernel(&self, l: i64) -> Vec<MatrixLaurent<Rational>> {
        let h = self.coxeter as i64;
        let parts: Vec<(i64, &QMatrix)> = self
            .basis
            .iter()
            .filter_map(|b| {
                let k = (l - b.degree).div_euclid(h);
                ((l - b.degree).rem_euclid(h) == 0).then_some((k, &b.matrix))
            })
            .collect();
        let lam = self.principal_lambda();
        let images: Vec<MatrixLaurent<Rational>> = parts
            .iter()
            .map(|(k, b)| lam.commutator(&MatrixLaurent::monomial(*k, (*b).clone())))
            .collect();
        let mut powers: Vec<i64> = images.iter().flat_map(|x| x.support()).collect();
        powers.sort();
        powers.dedup();
        let mm = self.m * self.m;
        let rows = powers.len() * mm;
        let sys = Matrix::from_fn(rows, parts.len(), |r, c| {
            let (pk, e) = (powers[r / mm], r % mm);
            images[c]
                .block_ref(pk)
                .map_or(Rational::zero(), |b| b.entries()[e].clone())
        });
        crate::linalg::nullspace(&sys)
            .into_iter()
            .map(|v| {
                let mut acc = MatrixLaurent::zero(self.m);
                for ((k, b), x) in parts.iter().zip(&v) {
                    if !x.is_zero() {
                        acc = acc.add(&MatrixLaurent::monomial(*k, b.scale(x)));
                    }
                }
                acc
            })
            .collect()
    }
}

fn lambda_power(lam: &MatrixLaurent<Rational>, k: u32) -> MatrixLaurent<Rational> {
    let mut acc = MatrixLaurent::identity(lam.size());
    for _ in 0..k {
        acc = acc.mul(lam);
    }
    acc
}

fn in_span(x: &MatrixLaurent<Rational>, span: &[MatrixLaurent<Rational>]) -> bool {
    let mut keys: Vec<i64> = span.iter().flat_map(|s| s.support()).chain(x.support()).collect();
    keys.sort();
    keys.dedup();
    let flat = |y: &MatrixLaurent<Rational>| -> Vec<Rational> {
        keys.iter().flat_map(|k| y.block(*k).entries().to_vec()).collect()
    };
    let basis: Vec<Vec<Rational>> = span.iter().map(flat).collect();
    solve_in_span(&basis, &flat(x)).is_some()
}

/// `Lambda_{m_a}` for each exponent `m_a < h`.
fn base_elements(r: &Realization) -> Result<Vec<LambdaElement>> {
    let lam = r.principal_lambda();
    let mut out: Vec<LambdaElement> = Vec::new();
    for label in &r.exponents {
        let l = label.index as i64;
        let ker = r.kernel(l);
        let mult = r.exponents.iter().filter(|e| e.index == label.index).count();
        if ker.len() != mult {
            return Err(Error::Computation(format!(
                "centralizer of Lambda has dimension {} in degree {l}, expected {mult}",
                ker.len()
            )));
        }
        if let Some(x) = r.overrides.get(label) {
            if !in_span(x, &ker) || x.is_zero() {
                return Err(Error::Invalid(format!(
                    "override for t{} is not a nonzero element of the centralizer in degree {l}",
                    label.label()
                )));
            }
            out.push(LambdaElement { label: *label, matrix: x.clone() });
            continue;
        }
        let pow = lambda_power(&lam, label.index);
        let x = if !label.primed {
            if in_span(&pow, &ker) && !pow.is_zero() {
                pow
            } else if ker.len() == 1 {
                // An even exponent of D_n: the first nonzero entry is set to 1.
                let first = ker[0]
                    .blocks()
                    .flat_map(|(_, b)| b.entries().to_vec())
                    .find(|c| !c.is_zero())
                    .unwrap();
                ker[0].scale(&first.recip())
            } else {
                return Err(Error::Computation(format!(
                    "cannot pin the exponent {l}"
                )));
            }
        } else {
            // Partner of Lambda^l: zero at (a0, 0) and 2 at (a1, 0), where a0 < a1
            // are the two positions of degree l in the first column.
            let pos: Vec<usize> = (0..r.m).filter(|&a| r.grading[a] - r.grading[0] == l).collect();
            if pos.len() < 2 {
                return Err(Error::Computation(format!(
                    "cannot pin the repeated exponent {l}"
                )));
            }
            let probe = |y: &MatrixLaurent<Rational>, a: usize| y.block(0)[(a, 0)].clone();
            let (u, v) = (&ker[0], &ker[1]);
            // Solve x u + y v with entry (pos0) = 0, entry (pos1) = 2.
            let m2 = Matrix::from_fn(2, 3, |i, j| match (i, j) {
                (i, 0) => probe(u, pos[i]),
                (i, 1) => probe(v, pos[i]),
                (0, _) => Rational::zero(),
                _ => int(2),
            });
            let (red, piv) = rref(&m2);
            if piv != vec![0, 1] {
                return Err(Error::Computation(format!(
                    "cannot pin the repeated exponent {l}"
                )));
            }
            u.scale(&red[(0, 2)]).add(&v.scale(&red[(1, 2)]))
        };
        out.push(LambdaElement { label: *label, matrix: x });
    }
    if r.normalization == Normalization::Pairing {
        pair_normalize(r, &mut out)?;
    }
    Ok(out)
}

fn pair_normalize(r: &Realization, els: &mut [LambdaElement]) -> Result<()> {
    let n = els.len();
    let h = int(r.coxeter as i64);
    let target = |c: &BTreeMap<i64, Rational>| -> Option<Rational> {
        match c.len() {
            0 => Some(Rational::zero()),
            1 => c.get(&1).cloned(),
            _ => None,
        }
    };
    let impossible = |msg: String| Err(Error::Computation(format!("normalization impossible: {msg}")));
    for a in 0..n {
        for b in 0..n {
            let v = target(&r.pairing(&els[a].matrix, &els[b].matrix));
            let Some(v) = v else {
                return impossible(format!("pairing of {} and {} is not proportional to lambda", els[a].label, els[b].label));
            };
            if a + b + 1 != n && !v.is_zero() {
                return impossible(format!("({}|{}) = {} lambda must vanish", els[a].label, els[b].label, format_rational(&v)));
            }
        }
    }
    for a in 0..n {
        let b = n - 1 - a;
        if b < a {
            break;
        }
        let v = target(&r.pairing(&els[a].matrix, &els[b].matrix)).unwrap();
        if v.is_zero() {
            return impossible(format!("({}|{}) vanishes", els[a].label, els[b].label));
        }
        if a < b {
            let s = &h / &v;
            els[b].matrix = els[b].matrix.scale(&s);
        } else {
            let s2 = &h / &v;
            let s = rational_sqrt(&s2).ok_or_else(|| {
                Error::Computation(format!(
                    "normalization impossible: ({}|{}) needs scale sqrt({})",
                    els[a].label,
                    els[a].label,
                    format_rational(&s2)
                ))
            })?;
            let mut x = els[a].matrix.scale(&s);
            let first = x
                .blocks()
                .flat_map(|(_, b)| b.entries().to_vec())
                .find(|c| !c.is_zero())
                .unwrap();
            if first.is_negative() {
                x = x.neg();
            }
            els[a].matrix = x;
        }
    }
    Ok(())
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// `Lambda_l` for every positive time `l <= max_weight`, with
/// `Lambda_{m_a + k h} = lambda^k Lambda_{m_a}`.
pub fn heisenberg_basis(r: &Realization, max_weight: u32) -> Result<Vec<LambdaElement>> {
    if max_weight < 1 {
        return Err(Error::Invalid("max_weight must be at least 1".into()));
    }
    let base = base_elements(r)?;
    Ok(r.times(max_weight)
        .into_iter()
        .map(|t| {
            let k = (t.index - 1) / r.coxeter;
            let b = base
                .iter()
                .find(|b| b.label.primed == t.primed && b.label.index == t.index - k * r.coxeter)
                .expect("every time reduces to an exponent");
            LambdaElement {
                label: t,
                matrix: b.matrix.shift(k as i64),
            }
        })
        .collect())
}
