use num_traits::Zero;

use crate::algebra::{Matrix, QSeries, Q};
use crate::error::{Error, Result};

use super::DifferentialBasis;

/// Exponent vectors of the monomials of degree `d` in `g` variables,
/// in lexicographic order with `t_0` largest first.
pub fn monomials(g: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(g: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == g - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(g, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if g > 0 {
        rec(g, d, &mut Vec::new(), &mut out);
    }
    out
}

/// A basis of the homogeneous degree-`d` forms vanishing on the series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relations {
    pub genus: usize,
    pub degree: u32,
    pub monomials: Vec<Vec<u32>>,
    /// Each relation is a coefficient vector indexed like `monomials`.
    pub relations: Vec<Vec<Q>>,
}

impl Relations {
    pub fn dimension(&self) -> usize {
        self.relations.len()
    }

    /// `Σ c_m · m(w)` for relation `k` evaluated on the given series.
    pub fn evaluate(&self, k: usize, series: &[QSeries]) -> QSeries {
        let prec = series.iter().map(|s| s.prec()).min().unwrap_or(0);
        let mut acc = QSeries::zero(prec);
        for (c, m) in self.relations[k].iter().zip(&self.monomials) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&monomial_series(series, m, prec).scale(c));
        }
        acc
    }

    /// Human-readable form with variables `t0, t1, …`.
    pub fn format_relation(&self, k: usize) -> String {
        let mut terms = Vec::new();
        for (c, m) in self.relations[k].iter().zip(&self.monomials) {
            if c.is_zero() {
                continue;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("t{i}") } else { format!("t{i}^{e}") })
                .collect();
            terms.push(format!("({c})*{}", vars.join("*")));
        }
        terms.join(" + ")
    }
}

fn monomial_series(series: &[QSeries], m: &[u32], prec: i64) -> QSeries {
    let mut acc = QSeries::one(prec);
    for (s, &e) in series.iter().zip(m) {
        for _ in 0..e {
            acc = acc.mul(s);
        }
    }
    acc.truncate(prec)
}

/// All degree-`d` relations among `w_1, …, w_g`.
///
/// A nonzero degree-`d` form in the differentials has exactly `d(2g−2)`
/// zeros, so agreement with zero modulo `q^P` for `P > d(2g−2)` forces the
/// relation to hold exactly.
pub fn find_relations(b: &DifferentialBasis, d: u32) -> Result<Relations> {
    let g = b.genus();
    let p = b.precision();
    let bound = d as i64 * (2 * g as i64 - 2);
    if p <= bound {
        return Err(Error::InsufficientPrecision { needed: bound + 1, have: p });
    }
    let mons = monomials(g, d);
    let rows: Vec<Vec<Q>> = mons.iter().map(|m| monomial_series(b.series(), m, p).window(0, p)).collect();
    // relations are the left kernel: vectors c with cᵀ M = 0
    let relations = Matrix::from_rows(rows).transpose().nullspace();
    Ok(Relations { genus: g, degree: d, monomials: mons, relations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }
}
