pub mod adler_moser;
pub mod catalog;
pub mod error;
pub mod formats;
pub mod grassmann;
pub mod hirota;
pub mod laurent;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod series;
pub mod tau;

pub use error::{Error, Result};
pub use poly::{Monomial, Poly, Time, Var, WeightCut};
pub use rational::Rational;
