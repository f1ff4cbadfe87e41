//! Laurent matrices of `e^xi` and `e^X`, generalized Schur polynomials,
//! Pluecker coordinates, affine coordinates and Giambelli formulas.

use std::collections::BTreeMap;
use std::fmt;


use crate::error::{Error, Result};
use crate::laurent::MatrixLaurent;
use crate::lie::{heisenberg_basis, Realization};
use crate::linalg::Matrix;
use crate::poly::{Poly, Time, Var, WeightCut};
use crate::rational::{frac, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition::default()
    }

    /// Accepts weakly decreasing parts; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::Invalid(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    /// Hook `(k+1, 1^l)`, i.e. Frobenius `(k|l)`.
    pub fn hook(k: u32, l: u32) -> Self {
        let mut parts = vec![k + 1];
        parts.extend(std::iter::repeat(1).take(l as usize));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let n = self.part(0);
        Partition {
            parts: (1..=n)
                .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        }
    }

    /// Arm and leg lengths `(k_1 > ... > k_d | l_1 > ... > l_d)`.
    pub fn frobenius(&self) -> (Vec<u32>, Vec<u32>) {
        let c = self.conjugate();
        let d = (0..self.len()).take_while(|&i| self.parts[i] as usize > i).count();
        (
            (0..d).map(|i| self.parts[i] - 1 - i as u32).collect(),
            (0..d).map(|i| c.parts[i] - 1 - i as u32).collect(),
        )
    }

    pub fn from_frobenius(k: &[u32], l: &[u32]) -> Result<Self> {
        let dec = |v: &[u32]| v.windows(2).all(|w| w[0] > w[1]);
        if k.len() != l.len() || !dec(k) || !dec(l) {
            return Err(Error::Invalid(format!(
                "({k:?}|{l:?}) is not a Frobenius symbol"
            )));
        }
        let d = k.len();
        let rows = d + l.first().map_or(0, |&x| x as usize);
        let mut parts = vec![0u32; rows];
        for i in 0..d {
            parts[i] = k[i] + 1 + i as u32;
        }
        for (j, &lj) in l.iter().enumerate() {
            for i in j + 1..=j + lj as usize {
                parts[i] = parts[i].max(j as u32 + 1);
            }
        }
        Partition::new(parts)
    }

    pub fn frobenius_string(&self) -> String {
        let (k, l) = self.frobenius();
        let j = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("({}|{})", j(&k), j(&l))
    }

    /// Accepts `[5,4,4,1]`, `5,4,4,1`, `[]` and Frobenius `(4,2,1|3,1,0)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let nums = |t: &str| -> Result<Vec<u32>> {
            t.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse::<u32>()
                        .map_err(|_| Error::Invalid(format!("bad partition part `{x}`")))
                })
                .collect()
        };
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let (k, l) = inner
                .split_once('|')
                .ok_or_else(|| Error::Invalid(format!("bad Frobenius symbol `{s}`")))?;
            return Partition::from_frobenius(&nums(k)?, &nums(l)?);
        }
        let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(s);
        Partition::new(nums(inner)?)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn of_weight(n: u32) -> Vec<Partition> {
        fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                go(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions fitting in a box with `rows` parts each at most `cols`.
    pub fn in_box(rows: u32, cols: u32) -> Vec<Partition> {
        fn go(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition { parts: cur.clone() });
            if left == 0 {
                return;
            }
            for p in (1..=max).rev() {
                cur.push(p);
                go(left - 1, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(rows, cols, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// `xi = sum t_l Lambda_l` over positive times of weight at most the cut.
pub fn xi(r: &Realization, cut: WeightCut) -> Result<MatrixLaurent<Poly>> {
    xi_without(r, cut, &[])
}

/// `xi` with the listed times set to zero.
pub fn xi_without(r: &Realization, cut: WeightCut, zeroed: &[Time]) -> Result<MatrixLaurent<Poly>> {
    let mut acc = MatrixLaurent::zero(r.m);
    if cut.0 == 0 {
        return Ok(acc);
    }
    for el in heisenberg_basis(r, cut.0)? {
        if zeroed.contains(&el.label) {
            continue;
        }
        let t = Poly::var(Var::T(el.label));
        acc = acc.add(&el.matrix.to_poly().scale(&t));
    }
    Ok(acc)
}

/// `exp(a)` for a matrix Laurent series whose entries have positive weight.
pub fn exp_series(a: &MatrixLaurent<Poly>, cut: WeightCut) -> MatrixLaurent<Poly> {
    let mut acc = MatrixLaurent::identity(a.size());
    let mut term = MatrixLaurent::identity(a.size());
    for k in 1.. {
        term = term.mul_trunc(a, cut).scale(&Poly::constant(frac(1, k)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// `e^xi` truncated at the cut.
pub fn exp_xi(r: &Realization, cut: WeightCut) -> Result<MatrixLaurent<Poly>> {
    Ok(exp_series(&xi(r, cut)?, cut))
}

/// An element of `lambda^-1 g[lambda^-1]` whose coefficients may involve parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct XElement {
    pub terms: MatrixLaurent<Poly>,
}

impl XElement {
    pub fn new(r: &Realization, terms: MatrixLaurent<Poly>) -> Result<Self> {
        if terms.size() != r.m {
            return Err(Error::Invalid(format!(
                "X has {}x{} blocks, the realization is {}x{}",
                terms.size(),
                terms.size(),
                r.m,
                r.m
            )));
        }
        for (k, b) in terms.blocks() {
            if k >= 0 {
                return Err(Error::Invalid(format!(
                    "X has a lambda^{k} term; only negative powers are allowed"
                )));
            }
            check_in_algebra(r, b).map_err(|e| {
                Error::Invalid(format!("lambda^{k} coefficient of X: {e}"))
            })?;
        }
        Ok(XElement { terms })
    }
}

/// Each parameter-monomial coefficient of `b` must lie in the algebra.
pub fn check_in_algebra(r: &Realization, b: &Matrix<Poly>) -> Result<()> {
    let mut by_mono: BTreeMap<crate::poly::Monomial, Matrix<Rational>> = BTreeMap::new();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            for (m, c) in b[(i, j)].terms() {
                let e = by_mono
                    .entry(m.clone())
                    .or_insert_with(|| Matrix::zeros(r.m, r.m));
                e[(i, j)] = c.clone();
            }
        }
    }
    for (m, a) in by_mono {
        if !r.contains(&a) {
            return Err(Error::Invalid(format!(
                "coefficient of {m} is not in the realized algebra"
            )));
        }
    }
    Ok(())
}

/// `e^X`, requiring nilpotency so that the series terminates.
pub fn exp_x(x: &XElement) -> Result<MatrixLaurent<Poly>> {
    exp_nilpotent(&x.terms)
}

pub fn exp_nilpotent(x: &MatrixLaurent<Poly>) -> Result<MatrixLaurent<Poly>> {
    let m = x.size();
    let mut acc = MatrixLaurent::identity(m);
    let mut term = MatrixLaurent::identity(m);
    for k in 1..=m as i64 + 1 {
        term = term.mul(x).scale(&Poly::constant(frac(1, k)));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term);
    }
    Err(Error::Invalid("X is not nilpotent; e^X does not terminate".into()))
}

/// Principal weight of `s_nu`: rows `i-1`, columns `j - nu_j - 1`.
pub fn schur_weight(r: &Realization, nu: &Partition) -> i64 {
    (0..nu.len() as i64)
        .map(|i| r.scalar_degree(i) - r.scalar_degree(i - nu.part(i as usize) as i64))
        .sum()
}

/// Cached `e^xi` for evaluating many Schur polynomials.
#[derive(Clone, Debug)]
pub struct SchurContext<'a> {
    pub realization: &'a Realization,
    pub cut: WeightCut,
    pub exp_xi: MatrixLaurent<Poly>,
    pub exp_neg_xi: MatrixLaurent<Poly>,
}

impl<'a> SchurContext<'a> {
    pub fn new(r: &'a Realization, cut: WeightCut) -> Result<Self> {
        SchurContext::without(r, cut, &[])
    }

    /// Context with the listed times set to zero.
    pub fn without(r: &'a Realization, cut: WeightCut, zeroed: &[Time]) -> Result<Self> {
        let x = xi_without(r, cut, zeroed)?;
        Ok(SchurContext {
            realization: r,
            cut,
            exp_xi: exp_series(&x, cut),
            exp_neg_xi: exp_series(&x.neg(), cut),
        })
    }

    pub fn entry(&self, i: i64, j: i64) -> Poly {
        self.exp_xi.scalar_entry(i, j)
    }

    /// `s_nu = det(s_{i-1, j - nu_j - 1})`.
    pub fn schur(&self, nu: &Partition) -> Result<Poly> {
        let w = schur_weight(self.realization, nu);
        if w < 0 {
            return Ok(Poly::zero());
        }
        if w as u32 > self.cut.0 {
            return Err(Error::Invalid(format!(
                "s_{nu} has weight {w}, above the cut {}",
                self.cut.0
            )));
        }
        let l = nu.len();
        let m = Matrix::from_fn(l, l, |i, j| {
            self.entry(i as i64, j as i64 - nu.part(j) as i64)
        });
        Ok(m.det())
    }

    /// The hook coordinate `s_(i|j)` read from the generating series.
    pub fn affine(&self, i: u32, j: u32) -> Poly {
        let neg = &self.exp_neg_xi;
        let m = self.realization.m as u32;
        let (bi, a) = (i / m, i % m);
        let (bj, b) = (j / m, m - 1 - j % m);
        let mut acc = Poly::zero();
        for p in bi + 1..=bi + bj + 1 {
            let q = bi + bj + 1 - p;
            let (Some(x), Some(y)) = (self.exp_xi.block_ref(p as i64), neg.block_ref(q as i64)) else {
                continue;
            };
            for c in 0..self.realization.m {
                let (u, v) = (&x[(a as usize, c)], &y[(c, b as usize)]);
                if !u.is_zero() && !v.is_zero() {
                    acc = acc.add(&u.mul_trunc(v, self.cut));
                }
            }
        }
        if j % 2 == 1 {
            acc.neg()
        } else {
            acc
        }
    }

    /// Table of `s_(i|j)` for `i <= max_i`, `j <= max_j`.
    pub fn affine_table(&self, max_i: u32, max_j: u32) -> AffineTable {
        let mut values = BTreeMap::new();
        for i in 0..=max_i {
            for j in 0..=max_j {
                let v = self.affine(i, j);
                if !v.is_zero() {
                    values.insert((i, j), v);
                }
            }
        }
        AffineTable {
            values,
            max_i,
            max_j,
        }
    }
}

pub fn schur_nu(r: &Realization, nu: &Partition) -> Result<Poly> {
    let w = schur_weight(r, nu);
    if nu.is_empty() {
        return Ok(Poly::one());
    }
    if w < 0 {
        return Ok(Poly::zero());
    }
    SchurContext::new(r, WeightCut(w as u32))?.schur(nu)
}

/// `r_{X,nu} = det(r_{i - nu_i - 1, j - 1})` from the Laurent matrix of `e^X`.
pub fn plucker_nu(ex: &MatrixLaurent<Poly>, nu: &Partition) -> Poly {
    let l = nu.len();
    let m = Matrix::from_fn(l, l, |i, j| {
        ex.scalar_entry(i as i64 - nu.part(i) as i64, j as i64)
    });
    m.det()
}

/// Finite table of affine coordinates; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineTable {
    pub values: BTreeMap<(u32, u32), Poly>,
    pub max_i: u32,
    pub max_j: u32,
}

impl AffineTable {
    pub fn get(&self, i: u32, j: u32) -> Result<Poly> {
        if i > self.max_i || j > self.max_j {
            return Err(Error::Invalid(format!(
                "affine coordinate ({i}|{j}) is outside the table range (0..={}|0..={})",
                self.max_i, self.max_j
            )));
        }
        Ok(self.values.get(&(i, j)).cloned().unwrap_or_else(Poly::zero))
    }

    pub fn rows(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.values.keys().map(|k| k.0).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn cols(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.values.keys().map(|k| k.1).collect();
        v.sort();
        v.dedup();
        v
    }

    fn check_range(&self, nu: &Partition) -> Result<(Vec<u32>, Vec<u32>)> {
        let (k, l) = nu.frobenius();
        let need_i = k.first().copied().unwrap_or(0);
        let need_j = l.first().copied().unwrap_or(0);
        if need_i > self.max_i || need_j > self.max_j {
            return Err(Error::Invalid(format!(
                "table too small for {nu}: need i <= {need_i}, j <= {need_j}, have i <= {}, j <= {}",
                self.max_i, self.max_j
            )));
        }
        Ok((k, l))
    }
}

/// `s_nu = det(s_(k_a|l_b))`.
pub fn giambelli_s(table: &AffineTable, nu: &Partition) -> Result<Poly> {
    let (k, l) = table.check_range(nu)?;
    let d = k.len();
    let m = Matrix::from_fn(d, d, |a, b| table.get(k[a], l[b]).unwrap());
    Ok(m.det())
}

/// `r_nu = (-1)^(l_1 + ... + l_d) det(r_(k_a|l_b))`.
pub fn giambelli_r(table: &AffineTable, nu: &Partition) -> Result<Poly> {
    let (k, l) = table.check_range(nu)?;
    let d = k.len();
    let m = Matrix::from_fn(d, d, |a, b| table.get(k[a], l[b]).unwrap());
    let det = m.det();
    Ok(if l.iter().sum::<u32>() % 2 == 1 { det.neg() } else { det })
}

/// `r_(i|j)` from the generating series of `e^X` and `e^-X`:
/// blocks `G_p` of `lambda^-p` in `e^X` and `H_q` in `e^-X`.
pub fn affine_coords_r(ex: &MatrixLaurent<Poly>, ex_inv: &MatrixLaurent<Poly>) -> AffineTable {
    let m = ex.size() as u32;
    let d = (-ex.min_power().unwrap_or(0)).max(0) as u32;
    let dd = (-ex_inv.min_power().unwrap_or(0)).max(0) as u32;
    let max_i = (m * d).max(1) - 1;
    let max_j = (m * (d + dd)).max(1) - 1;
    let mut values = BTreeMap::new();
    for i in 0..=max_i {
        for j in 0..=max_j {
            let (bi, a) = (i / m, m - 1 - i % m);
            let (bj, b) = (j / m, j % m);
            let mut acc = Poly::zero();
            for p in bi + 1..=bi + bj + 1 {
                let q = bi + bj + 1 - p;
                let (Some(g), Some(h)) = (ex.block_ref(-(p as i64)), ex_inv.block_ref(-(q as i64)))
                else {
                    continue;
                };
                for c in 0..m as usize {
                    let (u, v) = (&g[(a as usize, c)], &h[(c, b as usize)]);
                    if !u.is_zero() && !v.is_zero() {
                        acc = acc.add(&u.mul(v));
                    }
                }
            }
            if !acc.is_zero() {
                values.insert((i, j), acc);
            }
        }
    }
    AffineTable {
        values,
        max_i,
        max_j,
    }
}

/// Inverse of `g = I + N` with `N` nilpotent: `sum (-N)^k`.
pub fn inverse_unipotent(g: &MatrixLaurent<Poly>) -> Result<MatrixLaurent<Poly>> {
    let m = g.size();
    let n = g.sub(&MatrixLaurent::identity(m));
    let neg = n.neg();
    let mut acc = MatrixLaurent::identity(m);
    let mut term = MatrixLaurent::identity(m);
    for _ in 0..=m {
        term = term.mul(&neg);
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term);
    }
    Err(Error::Invalid("g - I is not nilpotent".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_realization, Family};

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(part(&[5, 4, 4, 1]).frobenius(), (vec![4, 2, 1], vec![3, 1, 0]));
        assert_eq!(part(&[1]).frobenius(), (vec![0], vec![0]));
        assert_eq!(part(&[2, 2]).frobenius(), (vec![1, 0], vec![1, 0]));
        assert_eq!(part(&[5, 4, 4, 1]).frobenius_string(), "(4,2,1|3,1,0)");
        assert_eq!(Partition::parse("(4,2,1|3,1,0)").unwrap(), part(&[5, 4, 4, 1]));
        assert_eq!(Partition::parse("[5,4,4,1]").unwrap().to_string(), "[5,4,4,1]");
        assert!(Partition::parse("[1,2]").is_err());
    }

    #[test]
    fn frobenius_round_trip() {
        for n in 0..=20 {
            for nu in Partition::of_weight(n) {
                let (k, l) = nu.frobenius();
                assert_eq!(Partition::from_frobenius(&k, &l).unwrap(), nu);
            }
        }
        assert_eq!(Partition::of_weight(10).len(), 42);
        assert_eq!(Partition::in_box(2, 2).len(), 6);
    }

    #[test]
    fn a1_schur() {
        let r = build_realization(Family::A, 1).unwrap();
        assert_eq!(schur_nu(&r, &part(&[3])).unwrap(), p("t1^3/6 + t3"));
        assert_eq!(schur_nu(&r, &part(&[2, 2])).unwrap(), p("t1^4/12 - t1*t3"));
        assert_eq!(schur_nu(&r, &Partition::empty()).unwrap(), Poly::one());
        let ctx = SchurContext::new(&r, WeightCut(2)).unwrap();
        assert_eq!(ctx.entry(0, -2), p("t1^2/2"));
    }

    #[test]
    fn exp_xi_first_order() {
        let r = build_realization(Family::A, 1).unwrap();
        let e = exp_xi(&r, WeightCut(1)).unwrap();
        let want = Matrix::from_rows(vec![vec![p("1"), p("0")], vec![p("t1"), p("1")]]).unwrap();
        assert_eq!(e.block(0), want);
        let e0 = exp_xi(&r, WeightCut(0)).unwrap();
        assert_eq!(e0, MatrixLaurent::identity(2));
    }

    #[test]
    fn b2_s1_vanishes() {
        let r = build_realization(Family::B, 2).unwrap();
        assert_eq!(schur_nu(&r, &part(&[1])).unwrap(), Poly::zero());
        assert_eq!(schur_nu(&r, &part(&[2])).unwrap(), p("t1/2"));
    }

    #[test]
    fn a1_x_f() {
        let r = build_realization(Family::A, 1).unwrap();
        let x = MatrixLaurent::monomial(-1, r.f[0].map(|c| Poly::constant(c.clone())));
        let x = XElement::new(&r, x).unwrap();
        let ex = exp_x(&x).unwrap();
        assert_eq!(ex, MatrixLaurent::identity(2).add(&x.terms));
        assert_eq!(plucker_nu(&ex, &Partition::empty()), Poly::one());
        assert!(plucker_nu(&ex, &part(&[3])).is_zero());
    }

    #[test]
    fn x_must_be_in_algebra() {
        let r = build_realization(Family::A, 1).unwrap();
        let bad = MatrixLaurent::monomial(-1, Matrix::identity(2));
        assert!(XElement::new(&r, bad).is_err());
        let pos = MatrixLaurent::monomial(1, r.f[0].map(|c| Poly::constant(c.clone())));
        assert!(XElement::new(&r, pos).is_err());
    }
}
