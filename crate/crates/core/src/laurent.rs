//! Finite-support matrix Laurent polynomials in the loop parameter `lambda`.

use std::collections::BTreeMap;

use crate::linalg::{Matrix, Ring};
use crate::poly::{Poly, WeightCut};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Debug)]
pub struct MatrixLaurent<T> {
    m: usize,
    blocks: BTreeMap<i64, Matrix<T>>,
}

impl<T: Ring> MatrixLaurent<T> {
    pub fn zero(m: usize) -> Self {
        MatrixLaurent {
            m,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(m: usize) -> Self {
        MatrixLaurent::monomial(0, Matrix::identity(m))
    }

    /// `lambda^k * a`.
    pub fn monomial(k: i64, a: Matrix<T>) -> Self {
        let mut out = MatrixLaurent::zero(a.rows());
        out.insert(k, a);
        out
    }

    pub fn from_blocks(m: usize, it: impl IntoIterator<Item = (i64, Matrix<T>)>) -> Self {
        let mut out = MatrixLaurent::zero(m);
        for (k, a) in it {
            let acc = out.block(k).add(&a);
            out.insert(k, acc);
        }
        out
    }

    fn insert(&mut self, k: i64, a: Matrix<T>) {
        assert_eq!(a.rows(), self.m);
        if a.is_zero() {
            self.blocks.remove(&k);
        } else {
            self.blocks.insert(k, a);
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn block(&self, k: i64) -> Matrix<T> {
        self.blocks
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.m, self.m))
    }

    pub fn block_ref(&self, k: i64) -> Option<&Matrix<T>> {
        self.blocks.get(&k)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i64, &Matrix<T>)> {
        self.blocks.iter().map(|(k, a)| (*k, a))
    }

    pub fn support(&self) -> Vec<i64> {
        self.blocks.keys().copied().collect()
    }

    pub fn min_power(&self) -> Option<i64> {
        self.blocks.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.blocks.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, a) in &o.blocks {
            let v = out.block(*k).add(a);
            out.insert(*k, v);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Self {
        let mut out = MatrixLaurent::zero(self.m);
        for (k, a) in &self.blocks {
            out.insert(*k, f(a));
        }
        out
    }

    /// Multiplies by `lambda^s`.
    pub fn shift(&self, s: i64) -> Self {
        MatrixLaurent {
            m: self.m,
            blocks: self.blocks.iter().map(|(k, a)| (k + s, a.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = MatrixLaurent::zero(self.m);
        for (i, a) in &self.blocks {
            for (j, b) in &o.blocks {
                let v = out.block(i + j).add(&a.mul(b));
                out.insert(i + j, v);
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Trace as a Laurent polynomial: `lambda^k -> tr(M_k)`.
    pub fn trace(&self) -> BTreeMap<i64, T> {
        self.blocks
            .iter()
            .map(|(k, a)| (*k, a.trace()))
            .filter(|(_, t)| !t.is_zero())
            .collect()
    }

    /// Scalar entry of the Laurent matrix: row `Q1*m + p1`, column `Q2*m + p2`
    /// reads entry `(p1, p2)` of the block `M_{Q1 - Q2}`.
    pub fn scalar_entry(&self, i: i64, j: i64) -> T {
        let m = self.m as i64;
        let (q1, p1) = (i.div_euclid(m), i.rem_euclid(m));
        let (q2, p2) = (j.div_euclid(m), j.rem_euclid(m));
        match self.blocks.get(&(q1 - q2)) {
            Some(a) => a[(p1 as usize, p2 as usize)].clone(),
            None => T::zero(),
        }
    }
}

impl MatrixLaurent<Rational> {
    pub fn to_poly(&self) -> MatrixLaurent<Poly> {
        MatrixLaurent {
            m: self.m,
            blocks: self
                .blocks
                .iter()
                .map(|(k, a)| (*k, a.map(|c| Poly::constant(c.clone()))))
                .collect(),
        }
    }
}

impl MatrixLaurent<Poly> {
    pub fn truncate(&self, cut: WeightCut) -> Self {
        let mut out = MatrixLaurent::zero(self.m);
        for (k, a) in &self.blocks {
            out.insert(*k, a.map(|p| p.truncate(cut)));
        }
        out
    }

    pub fn mul_trunc(&self, o: &Self, cut: WeightCut) -> Self {
        let mut out = MatrixLaurent::zero(self.m);
        for (i, a) in &self.blocks {
            for (j, b) in &o.blocks {
                let prod = mat_mul_trunc(a, b, cut);
                let v = out.block(i + j).add(&prod);
                out.insert(i + j, v);
            }
        }
        out
    }

    /// Entries as rationals, if no entry depends on a variable.
    pub fn to_rational(&self) -> Option<MatrixLaurent<Rational>> {
        let mut out = MatrixLaurent::zero(self.m);
        for (k, a) in &self.blocks {
            let mut rows = Vec::new();
            for i in 0..a.rows() {
                let mut row = Vec::new();
                for j in 0..a.cols() {
                    row.push(a[(i, j)].as_constant()?);
                }
                rows.push(row);
            }
            out.insert(*k, Matrix::from_rows(rows).ok()?);
        }
        Some(out)
    }
}

pub fn mat_mul_trunc(a: &Matrix<Poly>, b: &Matrix<Poly>, cut: WeightCut) -> Matrix<Poly> {
    let mut out: Matrix<Poly> = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let x = &a[(i, k)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                let y = &b[(k, j)];
                if !y.is_zero() {
                    out[(i, j)] = out[(i, j)].add(&x.mul_trunc(y, cut));
                }
            }
        }
    }
    out
}
