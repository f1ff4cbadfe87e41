//! Named Grassmannian points used by the test suite, the CLI and the demo.

use crate::error::{Error, Result};
use crate::grassmann::XElement;
use crate::laurent::MatrixLaurent;
use crate::lie::{build_realization, Family, Realization};
use crate::linalg::Matrix;
use crate::poly::{Poly, Time};
use crate::rational::frac;

#[derive(Clone, Debug)]
pub struct CatalogPoint {
    pub name: &'static str,
    pub family: Family,
    pub rank: usize,
    pub power: i64,
    /// Nonzero entries `(row, column, coefficient)` of the matrix part of `X`.
    pub entries: &'static [(usize, usize, &'static str)],
    pub zeroed: &'static [u32],
}

const A1_F: &[(usize, usize, &str)] = &[(1, 0, "1")];
const A1_E: &[(usize, usize, &str)] = &[(0, 1, "1")];
const A2_LOWER: &[(usize, usize, &str)] = &[(1, 0, "a1"), (2, 0, "a2"), (2, 1, "a3")];
const A2_UPPER: &[(usize, usize, &str)] = &[(0, 1, "a1"), (0, 2, "a2"), (1, 2, "a3")];
const B2_LOWER: &[(usize, usize, &str)] = &[
    (1, 0, "a2"),
    (2, 0, "a3"),
    (2, 1, "a5"),
    (3, 0, "a4"),
    (3, 2, "a5"),
    (4, 1, "a4"),
    (4, 2, "-a3"),
    (4, 3, "a2"),
];
const B2_UPPER: &[(usize, usize, &str)] = &[
    (0, 2, "a3"),
    (0, 3, "a4"),
    (1, 4, "a4"),
    (2, 4, "-a3"),
];
const D4_THETA: &[(usize, usize, &str)] = &[(0, 6, "1/8"), (1, 7, "1/8")];

pub const CATALOG: &[CatalogPoint] = &[
    CatalogPoint { name: "a1-f1", family: Family::A, rank: 1, power: -1, entries: A1_F, zeroed: &[] },
    CatalogPoint { name: "a1-e1", family: Family::A, rank: 1, power: -1, entries: A1_E, zeroed: &[] },
    CatalogPoint { name: "a1-f2", family: Family::A, rank: 1, power: -2, entries: A1_F, zeroed: &[] },
    CatalogPoint { name: "a1-e2", family: Family::A, rank: 1, power: -2, entries: A1_E, zeroed: &[] },
    CatalogPoint { name: "a2-lower", family: Family::A, rank: 2, power: -1, entries: A2_LOWER, zeroed: &[] },
    CatalogPoint { name: "a2-upper", family: Family::A, rank: 2, power: -1, entries: A2_UPPER, zeroed: &[] },
    CatalogPoint { name: "b2-lower", family: Family::B, rank: 2, power: -1, entries: B2_LOWER, zeroed: &[] },
    CatalogPoint { name: "b2-upper", family: Family::B, rank: 2, power: -1, entries: B2_UPPER, zeroed: &[] },
    CatalogPoint { name: "d4-theta", family: Family::D, rank: 4, power: -1, entries: D4_THETA, zeroed: &[11] },
];

impl CatalogPoint {
    pub fn lookup(name: &str) -> Result<&'static CatalogPoint> {
        CATALOG.iter().find(|p| p.name == name).ok_or_else(|| {
            let names: Vec<&str> = CATALOG.iter().map(|p| p.name).collect();
            Error::Invalid(format!("unknown example `{name}`; known: {}", names.join(", ")))
        })
    }

    pub fn realization(&self) -> Result<Realization> {
        build_realization(self.family, self.rank)
    }

    pub fn matrix(&self, m: usize) -> Result<Matrix<Poly>> {
        let mut a = Matrix::zeros(m, m);
        for &(i, j, c) in self.entries {
            a[(i, j)] = Poly::parse(c)?;
        }
        Ok(a)
    }

    pub fn x(&self, r: &Realization) -> Result<XElement> {
        XElement::new(r, MatrixLaurent::monomial(self.power, self.matrix(r.m)?))
    }

    pub fn zeroed_times(&self) -> Vec<Time> {
        self.zeroed.iter().map(|&i| Time::new(i)).collect()
    }
}

/// `1/8 (E_06 + E_17)` is `1/4` of the lowest root vector of the D4 realization.
pub fn d4_scale() -> crate::rational::Rational {
    frac(1, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_points_lie_in_their_algebras() {
        for p in CATALOG {
            let r = p.realization().unwrap();
            assert!(p.x(&r).is_ok(), "{}", p.name);
        }
    }

    #[test]
    fn d4_point_is_a_multiple_of_the_lowest_root() {
        let p = CatalogPoint::lookup("d4-theta").unwrap();
        let r = p.realization().unwrap();
        let e = r.e_theta_minus.map(|c| Poly::constant(c * d4_scale()));
        assert_eq!(p.matrix(r.m).unwrap(), e);
    }

    #[test]
    fn unknown_name() {
        assert!(CatalogPoint::lookup("e8").is_err());
    }
}
