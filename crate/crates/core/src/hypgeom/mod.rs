//! Geometry of hyperelliptic models `y² = F(x)`: changes of model,
//! isomorphism search, genera of quotients and point counts over finite
//! fields.

mod iso;
mod points;

use num_traits::{One, Zero};

use crate::algebra::{q, sqrt_q, Matrix, QPoly, Q};
use crate::error::{Error, Result};

pub use iso::mobius_transform;
pub use points::{count_points, count_points_naive, FiniteField};

/// The change of model `x′ = (ax+b)/(cx+d)`, `y′ = e·y/(cx+d)^{g+1}`,
/// with `M = [[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelTransform {
    pub m: [Q; 4],
    pub e: Q,
}

impl ModelTransform {
    pub fn new(m: [Q; 4], e: Q) -> Result<Self> {
        let t = ModelTransform { m, e };
        if t.det().is_zero() || t.e.is_zero() {
            return Err(Error::Invalid("degenerate transform".into()));
        }
        Ok(t)
    }

    pub fn from_i64(m: [i64; 4], e: i64) -> Result<Self> {
        Self::new(m.map(q), q(e))
    }

    pub fn identity() -> Self {
        ModelTransform::from_i64([1, 0, 0, 1], 1).unwrap()
    }

    pub fn det(&self) -> Q {
        let [a, b, c, d] = &self.m;
        a * d - b * c
    }

    /// `self` applied after `first`: `(M′M, e′e)`.
    pub fn compose(&self, first: &ModelTransform) -> ModelTransform {
        let p = self.matrix().mul(&first.matrix());
        ModelTransform {
            m: [p[(0, 0)].clone(), p[(0, 1)].clone(), p[(1, 0)].clone(), p[(1, 1)].clone()],
            e: &self.e * &first.e,
        }
    }

    /// `(λM, e·λ^{g+1})`, which acts in the same way.
    pub fn rescale(&self, lambda: &Q, g: usize) -> ModelTransform {
        ModelTransform {
            m: self.m.clone().map(|x| x * lambda),
            e: &self.e * num_traits::pow(lambda.clone(), g + 1),
        }
    }

    fn matrix(&self) -> Matrix {
        Matrix::from_rows(vec![self.m[..2].to_vec(), self.m[2..].to_vec()])
    }
}

/// The model `y′² = F′(x′)` obtained from `y² = F(x)` by `t`, so that
/// `e² F(x) = (cx+d)^{2g+2} F′((ax+b)/(cx+d))`.
pub fn apply_transform(f: &QPoly, g: usize, t: &ModelTransform) -> Result<QPoly> {
    let det = t.det();
    if det.is_zero() {
        return Err(Error::Invalid("degenerate transform".into()));
    }
    let n = 2 * g + 2;
    let [a, b, c, d] = &t.m;
    // x = (d x′ − b)/(−c x′ + a), and cx + d = det/(−c x′ + a)
    let inv = mobius_transform(f, n, [d, &-b, &-c, a]);
    let scale = &t.e * &t.e / num_traits::pow(det, n);
    Ok(inv.scale(&scale))
}

/// The canonical representative of the class of `t` under rescaling:
/// for even `g` the unique pair with `e = (det M)^{g/2}`; for odd `g` the
/// pair with `e² = (det M)^g` whose first nonzero matrix entry is
/// positive.
pub fn normalize_transform_pair(t: &ModelTransform, g: usize) -> Result<ModelTransform> {
    let det = t.det();
    if g % 2 == 0 {
        // e λ^{g+1} = λ^g det^{g/2}
        let lambda = num_traits::pow(det, g / 2) / &t.e;
        return Ok(t.rescale(&lambda, g));
    }
    // λ² = det^g / e²
    let lambda = sqrt_q(&(num_traits::pow(det, g) / (&t.e * &t.e)))
        .ok_or_else(|| Error::Invalid("det(M)^g / e² is not a square".into()))?;
    let first = t.m.iter().find(|x| !x.is_zero()).unwrap();
    let lambda = if first * &lambda < Q::zero() { -lambda } else { lambda };
    Ok(t.rescale(&lambda, g))
}

/// A transform of height at most `height` taking `y² = F₁(x)` to
/// `y² = F₂(x)`, if the search finds one. `None` does not prove that the
/// curves are not isomorphic.
pub fn is_isomorphic(f1: &QPoly, f2: &QPoly, g: usize, height: i64) -> Option<ModelTransform> {
    let admissible = |f: &QPoly| matches!(f.degree(), Some(d) if d == 2 * g + 1 || d == 2 * g + 2);
    if !admissible(f1) || !admissible(f2) {
        return None;
    }
    let w = iso::search(f1, f2, 2 * g + 2, height)?;
    // f2 = e_w² · mobius(f1, N) with N = [[a, b], [c, d]]; the model
    // transform is the adjugate of N
    let t = ModelTransform::from_i64([w.d, -w.b, -w.c, w.a], 1).ok()?;
    let e = &w.e * num_traits::pow(t.det(), g + 1);
    Some(ModelTransform { e, ..t })
}

/// Genus of the quotient of a genus-`g` hyperelliptic curve by an
/// automorphism of order `d` commuting with the hyperelliptic involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientGenus {
    Exact(u64),
    /// `⌊g/d⌋` and `⌈g/d⌉` in some order, for the two quotients.
    Pair(u64, u64),
}

pub fn quotient_genus(g: u64, d: u64) -> Result<QuotientGenus> {
    if d < 2 {
        return Err(Error::Invalid("automorphism order must be at least 2".into()));
    }
    Ok(if d % 2 == 0 && (g + 1) % d == 0 {
        QuotientGenus::Pair(g / d, g.div_ceil(d))
    } else {
        QuotientGenus::Exact(g / d)
    })
}

/// Hyperelliptic involution as a transform: `(Id, −1)`.
pub fn hyperelliptic_involution() -> ModelTransform {
    ModelTransform { m: [Q::one(), Q::zero(), Q::zero(), Q::one()], e: -Q::one() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qf;

    #[test]
    fn palindromic_sextic_is_invariant() {
        let f = QPoly::from_i64(&[1, 0, 0, 0, 0, 0, 1]);
        let t = ModelTransform::from_i64([0, 1, 1, 0], 1).unwrap();
        assert_eq!(apply_transform(&f, 2, &t).unwrap(), f);
        assert_eq!(apply_transform(&f, 2, &ModelTransform::identity()).unwrap(), f);
    }

    #[test]
    fn normalization() {
        let t = ModelTransform::from_i64([2, 0, 0, 2], 5).unwrap();
        let n = normalize_transform_pair(&t, 2).unwrap();
        assert_eq!(n.e, n.det());
        let inv = normalize_transform_pair(&hyperelliptic_involution(), 3).unwrap();
        assert_eq!(inv, hyperelliptic_involution());
        let odd = ModelTransform::new([q(2), q(1), q(0), qf(1, 2)], q(1)).unwrap();
        assert!(normalize_transform_pair(&odd, 3).is_ok());
        assert!(normalize_transform_pair(&ModelTransform::from_i64([2, 0, 0, 1], 1).unwrap(), 3).is_err());
    }

    #[test]
    fn quotient_genera() {
        assert_eq!(quotient_genus(11, 2).unwrap(), QuotientGenus::Pair(5, 6));
        assert_eq!(quotient_genus(10, 2).unwrap(), QuotientGenus::Exact(5));
        assert_eq!(quotient_genus(9, 3).unwrap(), QuotientGenus::Exact(3));
    }
}
