use num_traits::{One, Zero};

use crate::algebra::{q, QPoly, QSeries, Q};
use crate::error::{Error, Result};

use super::{DifferentialBasis, HyperellipticModel};

/// Where to expand the differentials `xⁱ dx/y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionPoint {
    /// The point at infinity: a Weierstrass point for odd `deg F`, one of
    /// the two points above `∞` (with `y/x^{g+1} → +√lead`) for even
    /// degree.
    Infinity,
    /// The point `(x₀, +√F(x₀))`, which must not be a Weierstrass point.
    Finite(Q),
}

/// Expansions to precision `P` of `xⁱ dx/y`, `0 ≤ i < g`.
///
/// At infinity the parameter is chosen as `x = q^{-2} − β` (odd degree)
/// or `x = q^{-1} − β` (even degree) with `β = a_{2g}/(2g−1)`,
/// respectively `a_{2g+1}/(2g)`; for monic `F` this is the parameter for
/// which recovery returns `F` itself. At a finite point `q = x − x₀`.
pub fn expand_model(m: &HyperellipticModel, at: &ExpansionPoint, p: i64) -> Result<DifferentialBasis> {
    let g = m.genus();
    let f = m.f();
    match at {
        ExpansionPoint::Infinity => {
            let deg = f.deg() as usize;
            let odd = deg % 2 == 1;
            let v: i64 = if odd { 2 } else { 1 };
            let lead = f.lead();
            let beta = if odd {
                f.coeff(2 * g) / (q(2 * g as i64 - 1) * &lead)
            } else {
                f.coeff(2 * g + 1) / (q(2 * g as i64) * &lead)
            };
            // x = q^{-v}(1 − β q^v); U = q^{deg·v} F(x) is a polynomial in q
            let one_minus = QPoly::new({
                let mut c = vec![Q::zero(); v as usize + 1];
                c[0] = Q::one();
                c[v as usize] = -beta.clone();
                c
            });
            let mut u = QPoly::zero();
            for (k, a) in f.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let shift = (deg - k) * v as usize;
                let term = &QPoly::monomial(shift, a.clone()) * &one_minus.pow(k);
                u = &u + &term;
            }
            let us = QSeries::new(0, u.coeffs().to_vec(), p);
            let s = us
                .sqrt()
                .map_err(|_| Error::BadPoint("leading coefficient of F is not a square: needs quadratic twist of parameter".into()))?
                .inv()?;
            // w_i = −v q^{deg·v/2 − v − 1 − i v} (1 − β q^v)^i / √U
            let base = deg as i64 * v / 2 - v - 1;
            let series = (0..g)
                .map(|i| {
                    let poly = &QPoly::monomial((base - i as i64 * v) as usize, q(-v)) * &one_minus.pow(i);
                    QSeries::new(0, poly.coeffs().to_vec(), p + 1).mul(&s).truncate(p)
                })
                .collect();
            DifferentialBasis::new(series)
        }
        ExpansionPoint::Finite(x0) => {
            let fx0 = f.eval(x0);
            if fx0.is_zero() {
                return Err(Error::BadPoint(format!("F({x0}) = 0 is a Weierstrass point")));
            }
            // F(x0 + q) as a series in q
            let shifted = f.compose(&QPoly::new(vec![x0.clone(), Q::one()]));
            let fs = QSeries::new(0, shifted.coeffs().to_vec(), p);
            let s = fs
                .sqrt()
                .map_err(|_| Error::BadPoint(format!("F({x0}) = {fx0} is not a square")))?
                .inv()?;
            let x = QPoly::new(vec![x0.clone(), Q::one()]);
            let series = (0..g)
                .map(|i| {
                    let xi = x.pow(i);
                    QSeries::new(0, xi.coeffs().to_vec(), p + 1).mul(&s).truncate(p)
                })
                .collect();
            DifferentialBasis::new(series)
        }
    }
}
