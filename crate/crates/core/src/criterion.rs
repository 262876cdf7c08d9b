//! Deciding whether a set of newform orbits comes from a hyperelliptic
//! curve, and producing its equation.
//!
//! Given orbits `f_1, …, f_m` of total dimension `g`, the rational span of
//! their conjugates has a unique basis `h_1, …, h_g` adapted to the cusp
//! `∞`. When `∞` is an ordinary point, `h_j ≡ q^j` modulo `q^{g+1}`; when
//! it is a Weierstrass point, `h_j ≡ q^{2j−1}` modulo even powers. The
//! candidate coordinates are `x = h_{g−1}/h_g` and `y = (q dx/dq)/h_g`,
//! rescaled so that `F` comes out monic, and `y² = F(x)` is then checked
//! far enough that it must hold exactly.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra::{algebra_dual_basis, apply_functional, q, qf, AlgebraElement, QPoly, QSeries, Q};
use crate::bounds::{genus_of_character, genus_x1, GammaH};
use crate::error::{Error, Result};
use crate::newform::{Newform, RationalOrbitBasis};
use crate::recover::{solve_for_f, translate, HyperellipticModel, PointType};

/// A set of newform orbits at one level whose span is a candidate for
/// the differentials of a curve.
#[derive(Clone, Debug)]
pub struct CandidateSpace {
    level: u64,
    orbits: Vec<Newform>,
    labels: Vec<String>,
}

impl CandidateSpace {
    pub fn new(orbits: Vec<Newform>, labels: Vec<String>) -> Result<Self> {
        let first = orbits.first().ok_or(Error::GenusTooSmall)?;
        let level = first.level();
        if orbits.iter().any(|f| f.level() != level) {
            return Err(Error::Invalid("orbits of different levels".into()));
        }
        if labels.len() != orbits.len() {
            return Err(Error::Invalid("one label per orbit".into()));
        }
        let space = CandidateSpace { level, orbits, labels };
        if space.genus() < 2 {
            return Err(Error::GenusTooSmall);
        }
        Ok(space)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn orbits(&self) -> &[Newform] {
        &self.orbits
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn genus(&self) -> usize {
        self.orbits.iter().map(|f| f.dimension()).sum()
    }

    pub fn trivial_character(&self) -> bool {
        self.orbits.iter().all(|f| f.character().is_trivial())
    }

    /// Genus of the curve `X_H`, `H = ker ε`, through which the space is
    /// known to factor; this bounds the verification precision.
    pub fn dominating_genus(&self) -> u64 {
        if self.trivial_character() {
            return genus_of_character(self.orbits[0].character());
        }
        let kernels: Vec<BTreeSet<u64>> =
            self.orbits.iter().map(|f| f.character().kernel().into_iter().collect()).collect();
        let common = kernels[0].iter().copied().filter(|x| kernels.iter().all(|k| k.contains(x)));
        GammaH::new(self.level, common).map(|h| h.genus()).unwrap_or_else(|_| genus_x1(self.level))
    }

    fn rational_basis(&self) -> Result<RationalOrbitBasis> {
        let refs: Vec<&Newform> = self.orbits.iter().collect();
        RationalOrbitBasis::new(&refs)
    }
}

/// The canonical basis `h_1, …, h_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HBasis {
    pub h: Vec<QSeries>,
    pub point_type: PointType,
}

/// Build the canonical basis, deciding the type of the cusp `∞`.
pub fn canonical_h_basis(c: &CandidateSpace) -> Result<HBasis> {
    let b = c.rational_basis()?;
    let g = b.dimension() as u64;
    let alg = b.algebra();
    let prec = b.precision();
    if prec < 2 * g - 1 {
        return Err(Error::InsufficientPrecision { needed: 2 * g as i64 - 1, have: prec as i64 });
    }
    let pick = |ns: &[u64]| -> Vec<AlgebraElement> { ns.iter().map(|&n| b.ahat(n).clone()).collect() };
    let ordinary: Vec<u64> = (1..=g).collect();
    let weierstrass: Vec<u64> = (1..=g).map(|j| 2 * j - 1).collect();

    let (dual, point_type) = match algebra_dual_basis(alg, &pick(&ordinary)) {
        Ok(d) => (d, PointType::NonWeierstrass),
        Err(Error::NotABasis) => match algebra_dual_basis(alg, &pick(&weierstrass)) {
            Ok(d) => (d, PointType::Weierstrass),
            Err(Error::NotABasis) => {
                return Err(Error::NotHyperelliptic(format!(
                    "neither a_1..a_{g} nor a_1, a_3, .., a_{} span the coefficient algebra",
                    2 * g - 1
                )))
            }
            Err(e) => return Err(e),
        },
        Err(e) => return Err(e),
    };

    if point_type == PointType::Weierstrass {
        if c.level() % 4 != 0 {
            return Err(Error::A2nContradiction(format!("Weierstrass cusp at level {} not divisible by 4", c.level())));
        }
        if let Some(n) = (1..=prec / 2).map(|k| 2 * k).find(|&n| !b.ahat(n).is_zero()) {
            return Err(Error::A2nContradiction(format!("a_{n} is nonzero")));
        }
    }

    let h = dual
        .iter()
        .map(|phi| QSeries::from_fn(0, prec as i64 + 1, |n| if n == 0 { Q::zero() } else { apply_functional(phi, b.ahat(n as u64)) }))
        .collect();
    Ok(HBasis { h, point_type })
}

/// A verified hyperelliptic curve built from newform orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub label: String,
    pub model: HyperellipticModel,
    pub level: u64,
    pub orbits: Vec<String>,
    /// The modular function `x` as a q-expansion, when known.
    pub x: Option<QSeries>,
}

impl CurveRecord {
    pub fn genus(&self) -> usize {
        self.model.genus()
    }

    pub fn point_type(&self) -> PointType {
        self.model.point_type()
    }
}

impl fmt::Display for CurveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "curve {} : genus {} : {} : F = {}",
            self.label,
            self.genus(),
            self.point_type(),
            self.model.f().coeff_string()
        )
    }
}

impl FromStr for CurveRecord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let perr = |msg: &str| Error::Parse { line: 1, msg: msg.into() };
        let parts: Vec<&str> = s.trim().split(" : ").map(str::trim).collect();
        if parts.len() != 4 {
            return Err(perr("expected `curve <label> : genus g : point type : F = c0 c1 ..`"));
        }
        let label = parts[0].strip_prefix("curve ").ok_or_else(|| perr("missing `curve`"))?.trim().to_string();
        let genus: usize = parts[1]
            .strip_prefix("genus ")
            .and_then(|g| g.trim().parse().ok())
            .ok_or_else(|| perr("bad genus"))?;
        let point_type = match parts[2] {
            "Weierstrass" => PointType::Weierstrass,
            "non-Weierstrass" => PointType::NonWeierstrass,
            other => return Err(perr(&format!("unknown point type `{other}`"))),
        };
        let coeffs = parts[3].strip_prefix("F =").ok_or_else(|| perr("missing `F =`"))?;
        let model = HyperellipticModel::new(QPoly::parse_coeffs(coeffs)?)?;
        if model.genus() != genus || model.point_type() != point_type {
            return Err(perr("genus or point type does not match F"));
        }
        let level = label
            .strip_prefix("C_{")
            .map(|r| r.chars().take_while(char::is_ascii_digit).collect::<String>())
            .and_then(|d| d.parse().ok())
            .unwrap_or(0);
        Ok(CurveRecord { label, model, level, orbits: Vec::new(), x: None })
    }
}

/// Curve label in the appendix style: letters of trivial-character orbits
/// go in the superscript, orbits with a character `ε` in the subscript,
/// as in `C_{39}^{A,B}` or `C_{21A_{0,2}}^{A}`.
fn curve_label(level: u64, orbit_labels: &[String]) -> String {
    let digits = level.to_string();
    let mut sup = Vec::new();
    let mut sub = Vec::new();
    let mut character = None;
    for l in orbit_labels {
        let rest = l.strip_prefix(&digits).unwrap_or(l);
        match rest.split_once('_') {
            Some((letter, ch)) => {
                character = Some(ch);
                sub.push(letter);
            }
            None => sup.push(rest),
        }
    }
    sup.sort();
    sub.sort();
    let base = match character {
        Some(ch) => format!("C_{{{level}{}_{ch}}}", sub.join(",")),
        None => format!("C_{{{level}}}"),
    };
    if sup.is_empty() {
        base
    } else {
        format!("{base}^{{{}}}", sup.join(","))
    }
}

/// The verification exponent `(2g_Y − 2)·max(6, d) + 1`.
pub fn verification_bound(g_y: u64, d: usize) -> i64 {
    (2 * g_y as i64 - 2) * (d.max(6) as i64) + 1
}

/// Check `y² = F(x)` through `q^{c−1}`, `c = (2g_Y − 2)·max(6, deg F) + 1`.
///
/// Both sides are functions on a curve of genus `g_Y`, and a nonzero
/// difference has at most `c − 1` zeros counted at the cusp, so agreement
/// this far proves the identity.
pub fn verify_equation(x: &QSeries, y: &QSeries, f: &QPoly, g_y: u64) -> Result<bool> {
    let d = f.degree().unwrap_or(0);
    let c = verification_bound(g_y, d);
    let vx = x.valuation().ok_or(Error::ZeroDivisor(x.prec()))?;
    let vy = y.valuation().ok_or(Error::ZeroDivisor(y.prec()))?;
    // only as much of x and y as the products below can use
    let x = x.truncate(c - (d as i64 - 1).max(0) * vx.min(0));
    let y = y.truncate(c - vy.min(0));
    let mut fx = QSeries::constant(f.lead(), x.prec() - vx.min(0) * d as i64);
    for k in (0..d).rev() {
        fx = fx.mul(&x).add(&QSeries::constant(f.coeff(k), fx.prec()));
    }
    let diff = y.mul(&y).sub(&fx);
    if diff.prec() < c {
        return Err(Error::InsufficientPrecision { needed: c, have: diff.prec() });
    }
    Ok(diff.truncate(c).is_zero())
}

/// Coordinates `x`, `y` from the canonical basis, normalized so that
/// `y² = F(x)` with `F` monic.
pub fn coordinates(hb: &HBasis) -> Result<(QSeries, QSeries)> {
    let g = hb.h.len();
    let hg = &hb.h[g - 1];
    let x = hb.h[g - 2].div(hg)?;
    let scale = match hb.point_type {
        PointType::Weierstrass => qf(-1, 2),
        PointType::NonWeierstrass => q(-1),
    };
    let y = x.qddq().div(hg)?.scale(&scale);
    Ok((x, y))
}

/// Run the criterion on a candidate space.
pub fn attempt_equation(c: &CandidateSpace) -> Result<CurveRecord> {
    let hb = canonical_h_basis(c)?;
    let g = hb.h.len();
    let (x, y) = coordinates(&hb)?;
    let (deg, v) = match hb.point_type {
        PointType::Weierstrass => (2 * g + 1, 2),
        PointType::NonWeierstrass => (2 * g + 2, 1),
    };
    // the principal part of y² fixes F; the tail is checked below
    let head = (deg * v) as i64 + 1;
    let y2 = y.truncate(head - y.val_or_prec()).mul(&y.truncate(head - y.val_or_prec()));
    let f = solve_for_f(&x.truncate(head), &y2.truncate(head), deg)?;
    let model = HyperellipticModel::new(f)?;
    if model.genus() != g {
        return Err(Error::Inconsistent(format!("F has degree {} for genus {g}", model.f().deg())));
    }
    if !verify_equation(&x, &y, model.f(), c.dominating_genus())? {
        return Err(Error::Inconsistent(format!("y^2 = {} fails beyond the principal part", model.f())));
    }
    Ok(CurveRecord {
        label: curve_label(c.level(), c.labels()),
        model,
        level: c.level(),
        orbits: c.labels().to_vec(),
        x: Some(x),
    })
}

/// The curve `y² = F₁(x)F₂(x)` (square factors removed) dominated by two
/// curves sharing the modular function `x`. The two `x`-series may
/// differ by an additive constant, which is absorbed into `F₂`.
pub fn compose_product(c1: &CurveRecord, c2: &CurveRecord) -> Result<CurveRecord> {
    let (x1, x2) = match (&c1.x, &c2.x) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Invalid("composition needs the x-series of both curves".into())),
    };
    let t = x2.coeff(0) - x1.coeff(0);
    let shifted = x2.sub(&QSeries::constant(t.clone(), x2.prec()));
    let diff = shifted.sub(x1);
    if let Some(e) = diff.valuation() {
        return Err(Error::XMismatch(e));
    }
    // F₂(x₂) = F₂(x₁ + t)
    let f2 = translate(c2.model.f(), &-t);
    let f = (c1.model.f() * &f2).odd_part();
    if f.deg() < 5 {
        return Err(Error::GenusTooSmall);
    }
    let model = HyperellipticModel::new(f)?;
    let mut genera = [c1.genus(), c2.genus()];
    genera.sort();
    let level = c1.level;
    Ok(CurveRecord {
        label: format!("C_{{{level}}}^{{{},{}}}", genera[0], genera[1]),
        model,
        level,
        orbits: c1.orbits.iter().chain(&c2.orbits).cloned().collect(),
        x: Some(if diff.prec() < x1.prec() { shifted } else { x1.clone() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(curve_label(39, &["39A".into(), "39B".into()]), "C_{39}^{A,B}");
        assert_eq!(curve_label(21, &["21A".into(), "21A_{0,2}".into()]), "C_{21A_{0,2}}^{A}");
        assert_eq!(curve_label(160, &["160E_{{1,0},1}".into(), "160A_{{1,0},1}".into()]), "C_{160A,E_{{1,0},1}}");
    }

    #[test]
    fn bound() {
        assert_eq!(verification_bound(3, 8), 33);
        assert_eq!(verification_bound(2, 5), 13);
    }
}
