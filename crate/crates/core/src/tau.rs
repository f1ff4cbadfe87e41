//! Tau functions from the Sato-Zhou sum and from block Toeplitz determinants.

use crate::error::{Error, Result};
use crate::grassmann::{
    affine_coords_r, exp_nilpotent, exp_series, giambelli_r, inverse_unipotent, schur_weight,
    xi_without, AffineTable, Partition, SchurContext, XElement,
};
use crate::laurent::MatrixLaurent;
use crate::lie::Realization;
use crate::linalg::{det_series, Matrix};
use crate::poly::{Poly, Time, Var, WeightCut};
use crate::rational::Rational;
use crate::series::series_root;

/// Largest Frobenius candidate count for which the support is listed.
pub const SUPPORT_LIMIT: u128 = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub struct TauOptions {
    pub cut: WeightCut,
    pub zeroed_times: Vec<Time>,
    /// Re-evaluate the full sum to decide whether the root is an exact polynomial.
    pub certify: bool,
}

impl Default for TauOptions {
    fn default() -> Self {
        TauOptions {
            cut: WeightCut::default(),
            zeroed_times: Vec::new(),
            certify: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TauResult {
    /// `sum r_nu s_nu`, truncated at the cut.
    pub tau_power: Poly,
    /// Its `kappa`-th power, truncated at the cut.
    pub tau: Poly,
    pub kappa: Rational,
    /// `tau` is a polynomial whose `1/kappa`-th power is the full sum.
    pub exact: bool,
    /// Lowest weight where `tau^(1/kappa)` and the full sum differ.
    pub residual_weight: Option<u32>,
    /// Upper bound for the weight of the full sum.
    pub full_weight: u32,
    /// Partitions with nonzero `r_nu`, when few enough to list.
    pub support: Option<Vec<Partition>>,
}

/// The Grassmannian point: `e^X` and its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub g: MatrixLaurent<Poly>,
    pub g_inv: MatrixLaurent<Poly>,
}

impl Point {
    pub fn from_x(x: &XElement) -> Result<Self> {
        Ok(Point {
            g: exp_nilpotent(&x.terms)?,
            g_inv: exp_nilpotent(&x.terms.neg())?,
        })
    }

    /// A factor supplied directly; it must be `I` plus a nilpotent
    /// combination of negative powers of `lambda`.
    pub fn from_factor(g: MatrixLaurent<Poly>) -> Result<Self> {
        if g.max_power().is_some_and(|k| k > 0) {
            return Err(Error::Invalid(
                "factor has positive powers of lambda; only the Toeplitz path accepts it".into(),
            ));
        }
        if g.block(0) != Matrix::identity(g.size()) {
            return Err(Error::Invalid("the lambda^0 block of the factor is not I".into()));
        }
        let g_inv = inverse_unipotent(&g)?;
        Ok(Point { g, g_inv })
    }

    pub fn affine(&self) -> AffineTable {
        affine_coords_r(&self.g, &self.g_inv)
    }
}

/// Weight of the hook `(k|l)`; the weight of `s_nu` is additive over hooks.
fn hook_weight(r: &Realization, k: u32, l: u32) -> i64 {
    schur_weight(r, &Partition::hook(k, l))
}

/// Upper bound for the weight of `sum r_nu s_nu` over the support of `table`.
pub fn weight_bound(r: &Realization, table: &AffineTable) -> u32 {
    let (ks, ls) = (table.rows(), table.cols());
    let mut f: Vec<i64> = ks.iter().map(|&k| hook_weight(r, k, 0)).collect();
    let mut g: Vec<i64> = ls
        .iter()
        .map(|&l| hook_weight(r, 0, l) - hook_weight(r, 0, 0))
        .collect();
    f.sort_by(|a, b| b.cmp(a));
    g.sort_by(|a, b| b.cmp(a));
    let (mut best, mut acc) = (0i64, 0i64);
    for d in 0..f.len().min(g.len()) {
        acc += f[d] + g[d];
        best = best.max(acc);
    }
    best as u32
}

/// `sum r_nu s_nu` as `det(I + A B)` with `A_(k,l) = (-1)^l r_(k|l)` and
/// `B_(l,k') = s_(k'|l)`, summed over the hooks in the support.
pub fn sato_zhou_sum(
    r: &Realization,
    table: &AffineTable,
    cut: WeightCut,
    zeroed: &[Time],
) -> Result<Poly> {
    let ks = table.rows();
    let ls = table.cols();
    if ks.is_empty() {
        return Ok(Poly::one());
    }
    let ctx = SchurContext::without(r, cut, zeroed)?;
    let s: Vec<Vec<Poly>> = ks
        .iter()
        .map(|&k| ls.iter().map(|&l| ctx.affine(k, l)).collect())
        .collect();
    let n = ks.len();
    let m = Matrix::from_fn(n, n, |a, b| {
        let mut acc = if a == b { Poly::one() } else { Poly::zero() };
        for (c, &l) in ls.iter().enumerate() {
            let Some(rv) = table.values.get(&(ks[a], l)) else {
                continue;
            };
            if s[b][c].is_zero() {
                continue;
            }
            let term = rv.mul_trunc(&s[b][c], cut);
            acc = if l % 2 == 1 { acc.sub(&term) } else { acc.add(&term) };
        }
        acc
    });
    det_series(&m, cut)
}

/// Partitions with nonzero `r_nu`, enumerated over Frobenius symbols built
/// from the support rows and columns. `None` if there are too many candidates.
pub fn plucker_support(table: &AffineTable) -> Result<Option<Vec<Partition>>> {
    let ks = table.rows();
    let ls = table.cols();
    let (a, b) = (ks.len() as u128, ls.len() as u128);
    if binomial_u128(a + b, a).map_or(true, |c| c > SUPPORT_LIMIT) {
        return Ok(None);
    }
    let mut out = Vec::new();
    for d in 0..=ks.len().min(ls.len()) {
        for kk in subsets_desc(&ks, d) {
            for ll in subsets_desc(&ls, d) {
                let nu = Partition::from_frobenius(&kk, &ll)?;
                if !giambelli_r(table, &nu)?.is_zero() {
                    out.push(nu);
                }
            }
        }
    }
    out.sort();
    Ok(Some(out))
}

fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Subsets of size `d`, each listed in decreasing order.
fn subsets_desc(v: &[u32], d: usize) -> Vec<Vec<u32>> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    fn go(v: &[u32], d: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..v.len() {
            cur.push(v[i]);
            go(v, d, i + 1, cur, out);
            cur.pop();
        }
    }
    go(&sorted, d, 0, &mut Vec::new(), &mut out);
    out
}

/// `1/kappa` as a positive integer.
pub fn root_order(kappa: &Rational) -> Result<u32> {
    let inv = kappa.recip();
    if !inv.is_integer() || inv <= Rational::from_integer(0.into()) {
        return Err(Error::Computation(format!(
            "kappa = {kappa} is not the reciprocal of a positive integer"
        )));
    }
    inv.to_integer()
        .try_into()
        .map_err(|_| Error::Computation(format!("kappa = {kappa} is too small")))
}

/// Tau function of the point by the Sato-Zhou formula.
pub fn tau_sz(r: &Realization, point: &Point, opts: &TauOptions) -> Result<TauResult> {
    let table = point.affine();
    let k = root_order(&r.kappa)?;
    let full_weight = weight_bound(r, &table);
    let cut = opts.cut;
    let zeroed = &opts.zeroed_times;
    let power_full = if opts.certify && full_weight > cut.0 {
        Some(sato_zhou_sum(r, &table, WeightCut(full_weight), zeroed)?)
    } else {
        None
    };
    let tau_power = match &power_full {
        Some(p) => p.truncate(cut),
        None => sato_zhou_sum(r, &table, cut, zeroed)?,
    };
    let root = series_root(&tau_power, k, cut)?;
    let (exact, residual_weight) = if !opts.certify {
        (false, root.residual_weight)
    } else {
        let full = power_full.as_ref().unwrap_or(&tau_power);
        let diff = root.value.pow(k).sub(full);
        (diff.is_zero(), diff.min_weight())
    };
    Ok(TauResult {
        tau_power,
        tau: root.value,
        kappa: r.kappa.clone(),
        exact,
        residual_weight,
        full_weight,
        support: plucker_support(&table)?,
    })
}

/// `gamma = e^xi g` truncated at the cut.
pub fn gamma(
    r: &Realization,
    g: &MatrixLaurent<Poly>,
    cut: WeightCut,
    zeroed: &[Time],
) -> Result<MatrixLaurent<Poly>> {
    let e = exp_series(&xi_without(r, cut, zeroed)?, cut);
    Ok(e.mul_trunc(g, cut))
}

/// `T_N(gamma) = (gamma_(I-J))` for `I, J = 0..=N`.
pub fn toeplitz(gamma: &MatrixLaurent<Poly>, n: usize) -> Matrix<Poly> {
    let m = gamma.size();
    let size = (n + 1) * m;
    Matrix::from_fn(size, size, |i, j| {
        let k = (i / m) as i64 - (j / m) as i64;
        match gamma.block_ref(k) {
            Some(b) => b[(i % m, j % m)].clone(),
            None => Poly::zero(),
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzWindow {
    pub n: usize,
    pub det: Poly,
}

pub fn tau_toeplitz(
    r: &Realization,
    g: &MatrixLaurent<Poly>,
    n: usize,
    cut: WeightCut,
    zeroed: &[Time],
) -> Result<ToeplitzWindow> {
    let gm = gamma(r, g, cut, zeroed)?;
    Ok(ToeplitzWindow {
        n,
        det: det_series(&toeplitz(&gm, n), cut)?,
    })
}

/// Default sweep bound `3 + W m`.
pub fn default_n_max(r: &Realization, cut: WeightCut) -> usize {
    3 + cut.0 as usize * r.m
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stabilization {
    /// `N_0(w)` for `w = 0..=W`; `None` if inconclusive within the sweep.
    pub n0: Vec<Option<usize>>,
    /// `det T_N` for the swept `N`.
    pub windows: Vec<ToeplitzWindow>,
}

impl Stabilization {
    /// The stable value at the cut, if every weight stabilized.
    pub fn limit(&self) -> Option<&Poly> {
        let n0 = self.n0.iter().copied().collect::<Option<Vec<_>>>()?;
        let top = n0.into_iter().max()?;
        self.windows.get(top).map(|w| &w.det)
    }
}

/// Smallest `N_0(w)` with `det T_N` agreeing at weight `<= w` for
/// `N = N_0, N_0 + 1, N_0 + 2`. The sweep stops early once the cut is stable.
pub fn stabilization_check(
    r: &Realization,
    g: &MatrixLaurent<Poly>,
    cut: WeightCut,
    zeroed: &[Time],
    n_max: usize,
) -> Result<Stabilization> {
    let gm = gamma(r, g, cut, zeroed)?;
    let mut windows: Vec<ToeplitzWindow> = Vec::new();
    let stable_at = |ws: &[ToeplitzWindow], n0: usize, w: u32| {
        let c = WeightCut(w);
        let base = ws[n0].det.truncate(c);
        ws[n0 + 1].det.truncate(c) == base && ws[n0 + 2].det.truncate(c) == base
    };
    for n in 0..=n_max {
        windows.push(ToeplitzWindow {
            n,
            det: det_series(&toeplitz(&gm, n), cut)?,
        });
        if n >= 2 && stable_at(&windows, n - 2, cut.0) {
            break;
        }
    }
    let n0 = (0..=cut.0)
        .map(|w| (0..windows.len().saturating_sub(2)).find(|&n0| stable_at(&windows, n0, w)))
        .collect();
    Ok(Stabilization { n0, windows })
}

/// Sets the listed times to zero.
pub fn zero_times(p: &Poly, times: &[Time]) -> Poly {
    let vs: Vec<Var> = times.iter().map(|&t| Var::T(t)).collect();
    p.zero_vars(&vs)
}
