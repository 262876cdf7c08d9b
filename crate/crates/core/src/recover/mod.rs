//! Recovering a curve from the q-expansions of a basis of its regular
//! differentials at a rational point.
//!
//! A basis `w_1 dq, …, w_g dq` is first put in reduced row echelon form.
//! Its valuation profile tells whether the point can be a Weierstrass
//! point of a hyperelliptic curve (`0, 2, …, 2g−2`) or an ordinary point
//! (`0, 1, …, g−1`). Hyperelliptic curves are recovered as `y² = F(x)`;
//! otherwise the relations among the `w_i` (the canonical ideal) are
//! returned.

mod basis;
mod expand;
mod relations;

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{q, qf, QPoly, QSeries, Q};
use crate::error::{Error, Result};

pub use basis::{format_basis, parse_basis, DifferentialBasis};
pub use expand::{expand_model, ExpansionPoint};
pub use relations::{find_relations, monomials, Relations};

/// Kind of the point at which the expansions are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointType {
    Weierstrass,
    NonWeierstrass,
}

impl PointType {
    /// Pole order of the coordinate `x` at the point.
    fn pole(self) -> i64 {
        match self {
            PointType::Weierstrass => 2,
            PointType::NonWeierstrass => 1,
        }
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointType::Weierstrass => "Weierstrass",
            PointType::NonWeierstrass => "non-Weierstrass",
        })
    }
}

/// Outcome of inspecting a valuation profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileType {
    Point(PointType),
    NotHyperellipticCandidate,
}

/// Which precision bound to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionMode {
    General,
    HyperellipticWp,
    HyperellipticNonWp,
}

/// Number of coefficients that determine a curve of genus `g`.
pub fn required_precision(g: usize, mode: PrecisionMode) -> Result<i64> {
    if g < 2 {
        return Err(Error::GenusTooSmall);
    }
    let g = g as i64;
    Ok(match mode {
        PrecisionMode::General => match g {
            2 => 13,
            3 => 17,
            4 => 21,
            _ => 6 * g - 5,
        },
        PrecisionMode::HyperellipticWp => 4 * g + 5,
        PrecisionMode::HyperellipticNonWp => 2 * g + 4,
    })
}

/// Classify a normalized valuation profile.
pub fn detect_point_type(profile: &[i64]) -> ProfileType {
    if profile.iter().enumerate().all(|(i, &v)| v == 2 * i as i64) {
        ProfileType::Point(PointType::Weierstrass)
    } else if profile.iter().enumerate().all(|(i, &v)| v == i as i64) {
        ProfileType::Point(PointType::NonWeierstrass)
    } else {
        ProfileType::NotHyperellipticCandidate
    }
}

/// A curve `y² = F(x)` with `F` squarefree of degree `2g+1` or `2g+2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperellipticModel {
    genus: usize,
    f: QPoly,
    point_type: PointType,
}

impl HyperellipticModel {
    /// Model with the point at infinity: a Weierstrass point when
    /// `deg F` is odd.
    pub fn new(f: QPoly) -> Result<Self> {
        let d = f.deg();
        if d < 5 {
            return Err(Error::GenusTooSmall);
        }
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let point_type = if d % 2 == 1 { PointType::Weierstrass } else { PointType::NonWeierstrass };
        Ok(HyperellipticModel { genus: (d as usize - 1) / 2, f, point_type })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn f(&self) -> &QPoly {
        &self.f
    }

    pub fn point_type(&self) -> PointType {
        self.point_type
    }
}

impl fmt::Display for HyperellipticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {}", self.f)
    }
}

/// Solve `y2 = F(x)` for `F` of degree `deg` by matching principal parts,
/// where `x` has a pole of order `v` and `y2` one of order `deg·v`. The
/// terms of `y2 − F(x)` are checked to vanish up to the available
/// precision.
pub fn solve_for_f(x: &QSeries, y2: &QSeries, deg: usize) -> Result<QPoly> {
    let v = -x.valuation().ok_or(Error::ZeroDivisor(x.prec()))?;
    if v <= 0 {
        return Err(Error::Invalid("x must have a pole".into()));
    }
    let top = -(deg as i64) * v;
    if y2.valuation() != Some(top) {
        return Err(Error::Inconsistent(format!("y^2 has valuation {:?}, expected {top}", y2.valuation())));
    }
    let mut powers = vec![QSeries::one(x.prec() + v)];
    for k in 1..=deg {
        let next = powers[k - 1].mul(x);
        powers.push(next);
    }
    let lead = x.leading_coeff().unwrap().clone();
    let mut rem = y2.clone();
    let mut c = vec![Q::zero(); deg + 1];
    for k in (0..=deg).rev() {
        let e = -(k as i64) * v;
        if rem.prec() <= e {
            return Err(Error::InsufficientPrecision { needed: e + 1, have: rem.prec() });
        }
        if let Some(val) = rem.valuation() {
            if val < e {
                return Err(Error::Inconsistent(format!("term q^{val} is not matched by a power of x")));
            }
        }
        let ck = rem.coeff(e) / num_traits::pow(lead.clone(), k);
        if !ck.is_zero() {
            rem = rem.sub(&powers[k].scale(&ck));
        }
        c[k] = ck;
    }
    if rem.prec() < 1 {
        return Err(Error::InsufficientPrecision { needed: 1, have: rem.prec() });
    }
    if let Some(val) = rem.valuation() {
        return Err(Error::Inconsistent(format!("y^2 − F(x) has a nonzero term at q^{val}")));
    }
    Ok(QPoly::new(c))
}

/// Recover `y² = F(x)` from a basis whose normalized profile is that of
/// a Weierstrass or non-Weierstrass point of a hyperelliptic curve.
///
/// The returned `F` is monic; `x` is the ratio of the two normalized
/// differentials of lowest order, so it is fixed by the span alone.
pub fn recover_hyperelliptic(b: &DifferentialBasis) -> Result<HyperellipticModel> {
    let (nb, profile) = b.normalize()?;
    let pt = match detect_point_type(&profile) {
        ProfileType::Point(pt) => pt,
        ProfileType::NotHyperellipticCandidate => {
            return Err(Error::NotHyperelliptic(format!("valuation profile {profile:?}")));
        }
    };
    let g = nb.genus();
    let (mode, deg) = match pt {
        PointType::Weierstrass => (PrecisionMode::HyperellipticWp, 2 * g + 1),
        PointType::NonWeierstrass => (PrecisionMode::HyperellipticNonWp, 2 * g + 2),
    };
    let needed = required_precision(g, mode)?;
    if nb.precision() < needed {
        return Err(Error::InsufficientPrecision { needed, have: nb.precision() });
    }
    let (x, y2) = hyperelliptic_coordinates(&nb, pt)?;
    let f = solve_for_f(&x, &y2, deg)?;
    HyperellipticModel::new(f)
}

/// The functions `x` and `y²` on a hyperelliptic curve computed from a
/// normalized basis, with `y` scaled so that `F` is monic.
fn hyperelliptic_coordinates(nb: &DifferentialBasis, pt: PointType) -> Result<(QSeries, QSeries)> {
    let g = nb.genus();
    let w = nb.series();
    let v = pt.pole();
    let xt = w[g - 2].div(&w[g - 1])?;
    // x̃^{g-i} w_g is the start of w_i' = w_i + Σ_{j>i} c_ij w_j; the c_ij
    // are its coefficients at the later pivots, and w_i' keeps the full
    // precision of the w_j
    let mut wp: Vec<QSeries> = w.to_vec();
    let mut t = w[g - 2].clone();
    for i in (0..g - 2).rev() {
        t = t.mul(&xt);
        let mut acc = w[i].clone();
        for (j, wj) in w.iter().enumerate().skip(i + 1) {
            let c = t.coeff(j as i64 * v);
            if !c.is_zero() {
                acc = acc.add(&wj.scale(&c));
            }
        }
        let m = acc.prec().min(t.prec());
        if let Some(val) = acc.truncate(m).sub(&t.truncate(m)).valuation() {
            return Err(Error::Inconsistent(format!("x̃^{} w_g leaves the span at q^{val}", g - 1 - i)));
        }
        wp[i] = acc;
    }
    let x = wp[0].div(&wp[1])?;
    let xg = x.pow(g as i64 - 1)?;
    let y_raw = xg.mul(&x.ddq()).div(&wp[0])?;
    let scale = match pt {
        PointType::Weierstrass => qf(-1, 2),
        PointType::NonWeierstrass => q(-1),
    };
    let y = y_raw.scale(&scale);
    Ok((x, y.mul(&y)))
}

/// Recover a model when the expansions are in a parameter `q` with
/// `q′ = c q^e + …` a uniformizer at the point.
pub fn recover_ramified(b: &DifferentialBasis, e: u32) -> Result<HyperellipticModel> {
    if e == 0 {
        return Err(Error::Invalid("ramification index must be positive".into()));
    }
    if e == 1 {
        return recover_hyperelliptic(b);
    }
    recover_hyperelliptic(&unramify(b, e)?)
}

/// Rewrite the basis in a uniformizer `q′` with `q′ = c qᵉ + …`.
///
/// If every series is `q^{e−1} W(qᵉ)` then `q′ = qᵉ` and the substitution
/// is direct. Otherwise `q′ = ∫ w₁ dq` (the lowest-order differential)
/// and each `w_i/w₁` is expanded as a power series in `q′`.
pub fn unramify(b: &DifferentialBasis, e: u32) -> Result<DifferentialBasis> {
    let e64 = e as i64;
    let p = b.precision();
    let pure = b.series().iter().all(|s| s.terms().all(|(n, _)| n.rem_euclid(e64) == e64 - 1));
    if pure {
        let prec = p / e64;
        let series = b
            .series()
            .iter()
            .map(|s| QSeries::from_fn(0, prec, |k| s.coeff(k * e64 + e64 - 1) / q(e64)))
            .collect();
        return DifferentialBasis::new(series);
    }
    let (nb, profile) = b.normalize()?;
    if profile[0] != e64 - 1 {
        return Err(Error::NoPowerStructure(format!("lowest valuation {} is not e − 1 = {}", profile[0], e64 - 1)));
    }
    let w1 = &nb.series()[0];
    let qp = w1.integral()?;
    let lead = qp.leading_coeff().unwrap().clone();
    let mut out = Vec::with_capacity(nb.genus());
    for wi in nb.series() {
        let mut rem = wi.div(w1)?;
        let mut coeffs: Vec<Q> = Vec::new();
        let mut power = QSeries::one(rem.prec());
        let mut k = 0i64;
        while k * e64 < rem.prec() {
            if let Some(v) = rem.valuation() {
                if v != k * e64 && v < (k + 1) * e64 {
                    return Err(Error::NoPowerStructure(format!("term q^{v} is not a power of q′")));
                }
            }
            let c = rem.coeff(k * e64) / num_traits::pow(lead.clone(), k as usize);
            if !c.is_zero() {
                rem = rem.sub(&power.scale(&c));
            }
            coeffs.push(c);
            power = power.mul(&qp);
            k += 1;
        }
        if let Some(v) = rem.valuation() {
            return Err(Error::NoPowerStructure(format!("term q^{v} left over")));
        }
        out.push(QSeries::new(0, coeffs, k));
    }
    DifferentialBasis::new(out)
}

/// Result of the general recovery procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovered {
    Hyperelliptic(HyperellipticModel),
    /// Generators of the canonical ideal, by degree.
    Canonical(Vec<Relations>),
}

/// Decide between the hyperelliptic and canonical cases from the quadric
/// relations, then recover the curve.
pub fn recover(b: &DifferentialBasis) -> Result<Recovered> {
    let g = b.genus();
    if g == 2 {
        return recover_hyperelliptic(b).map(Recovered::Hyperelliptic);
    }
    let quadrics = find_relations(b, 2)?;
    if quadrics.dimension() == (g - 1) * (g - 2) / 2 {
        return recover_hyperelliptic(b).map(Recovered::Hyperelliptic);
    }
    let mut ideal = vec![quadrics];
    if g == 3 {
        ideal.push(find_relations(b, 4)?);
    } else {
        ideal.push(find_relations(b, 3)?);
    }
    Ok(Recovered::Canonical(ideal))
}

/// Apply `x ↦ x + t` to a model: `F(x − t)`.
pub fn translate(f: &QPoly, t: &Q) -> QPoly {
    f.compose(&QPoly::new(vec![-t.clone(), Q::one()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_table() {
        assert_eq!(required_precision(2, PrecisionMode::General).unwrap(), 13);
        assert_eq!(required_precision(10, PrecisionMode::General).unwrap(), 55);
        assert_eq!(required_precision(3, PrecisionMode::HyperellipticWp).unwrap(), 17);
        assert_eq!(required_precision(3, PrecisionMode::HyperellipticNonWp).unwrap(), 10);
        assert_eq!(required_precision(1, PrecisionMode::General), Err(Error::GenusTooSmall));
    }

    #[test]
    fn profiles() {
        assert_eq!(detect_point_type(&[0, 2, 4]), ProfileType::Point(PointType::Weierstrass));
        assert_eq!(detect_point_type(&[0, 1, 2]), ProfileType::Point(PointType::NonWeierstrass));
        assert_eq!(detect_point_type(&[0, 1, 3]), ProfileType::NotHyperellipticCandidate);
    }
}
