//! Dense matrices over exact rings, fraction-free determinants and rational
//! row reduction.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, WeightCut};
use crate::rational::Rational;
use crate::series::series_inverse;

pub trait Ring: Clone + PartialEq + fmt::Debug + Zero + One {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Exact quotient, `None` when not divisible.
    fn div_exact(&self, o: &Self) -> Option<Self>;
    /// Relative cost used to prefer cheap pivots.
    fn size(&self) -> usize {
        1
    }
}

impl Ring for Rational {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        (!o.is_zero()).then(|| self / o)
    }
}

impl Ring for Poly {
    fn plus(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn minus(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn times(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn negate(&self) -> Self {
        Poly::neg(self)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        Poly::div_exact(self, o)
    }
    fn size(&self) -> usize {
        self.len()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// The matrix unit `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m[(i, j)] = T::one();
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(T::negate)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out: Matrix<T> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].plus(&a.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.plus(&self[(i, i)]))
    }

    /// Fraction-free Bareiss elimination with exact division.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        bareiss(self.clone())
    }
}

fn bareiss<T: Ring>(mut a: Matrix<T>) -> T {
    let n = a.rows;
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[(i, k)].is_zero())
            .min_by_key(|&i| a[(i, k)].size());
        let Some(p) = pivot else {
            return T::zero();
        };
        if p != k {
            a.swap_rows(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[(i, j)].times(&a[(k, k)]).minus(&a[(i, k)].times(&a[(k, j)]));
                a[(i, j)] = num
                    .div_exact(&prev)
                    .expect("Bareiss step is an exact division");
            }
            a[(i, k)] = T::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        d.negate()
    } else {
        d
    }
}

/// Laplace expansion along the first row. Exponential cost; used as an oracle.
pub fn det_cofactor<T: Ring>(m: &Matrix<T>) -> T {
    let n = m.rows();
    if n == 0 {
        return T::one();
    }
    let mut acc = T::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = m[(0, j)].times(&det_cofactor(&m.submatrix(&rows, &cols)));
        acc = if j % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
    }
    acc
}

/// Determinant of a matrix of truncated series by LU with pivots whose
/// weight-0 part is a nonzero rational.
pub fn det_series(m: &Matrix<Poly>, cut: WeightCut) -> Result<Poly> {
    let n = m.rows();
    let mut a = m.map(|p| p.truncate(cut));
    let mut det = Poly::one();
    for k in 0..n {
        let unit = |p: &Poly| {
            let c = p.constant_term();
            !c.is_zero() && p.weight_part(0).as_constant().is_some()
        };
        let Some(p) = (k..n).find(|&i| unit(&a[(i, k)])) else {
            if (k..n).all(|i| a[(i, k)].is_zero()) {
                return Ok(Poly::zero());
            }
            return Err(Error::Computation(format!(
                "no invertible pivot in column {k} of the truncated determinant"
            )));
        };
        if p != k {
            a.swap_rows(p, k);
            det = det.neg();
        }
        let piv = a[(k, k)].clone();
        det = det.mul_trunc(&piv, cut);
        let c = piv.constant_term();
        let inv = series_inverse(&piv.scale(&c.recip()), cut)?.scale(&c.recip());
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].mul_trunc(&inv, cut);
            for j in k + 1..n {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let v = a[(i, j)].sub(&f.mul_trunc(&a[(k, j)], cut));
                a[(i, j)] = v;
            }
            a[(i, k)] = Poly::zero();
        }
    }
    Ok(det)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix<Rational>) -> (Matrix<Rational>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !Zero::is_zero(&a[(i, c)])) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a[(r, c)].recip();
        for j in c..cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || Zero::is_zero(&a[(i, c)]) {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = &a[(i, j)] - &f * &a[(r, j)];
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix<Rational>) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space, one vector per free column in increasing order.
pub fn nullspace(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in the span of `basis`, if it lies there.
pub fn solve_in_span(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let n = v.len();
    let k = basis.len();
    let aug = Matrix::from_fn(n, k + 1, |i, j| {
        if j < k {
            basis[j][i].clone()
        } else {
            v[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, k)].clone();
    }
    Some(x)
}

/// Incremental row-echelon basis for testing linear independence.
#[derive(Clone, Debug, Default)]
pub struct SpanTracker {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl SpanTracker {
    pub fn new() -> Self {
        SpanTracker::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !Zero::is_zero(&v[*p]) {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !Zero::is_zero(y) {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !Zero::is_zero(x)) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !Zero::is_zero(&row[p]) {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !Zero::is_zero(y) {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}
