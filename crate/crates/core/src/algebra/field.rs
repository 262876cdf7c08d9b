use num_traits::{One, Zero};

use super::factor::is_irreducible;
use super::matrix::Matrix;
use super::poly::QPoly;
use super::rational::{q, to_f64, Q};
use super::roots::{count_real_roots, count_roots_above, isolate_real_roots, refine, Isolated};
use crate::error::{Error, Result};

/// Certified isolating interval of a real root of a defining polynomial.
pub type RootInterval = Isolated;

/// The number field ℚ[x]/(m(x)) for a monic irreducible `m`, with elements
/// represented by coordinate vectors in the power basis `1, θ, …, θ^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    min_poly: QPoly,
    degree: usize,
    real_roots: Vec<RootInterval>,
    complex_pairs: usize,
    traces: Vec<Q>,
    conjugation: Option<Vec<Q>>,
}

impl NumberField {
    /// Construct from a monic irreducible polynomial; reducible or
    /// non-monic input is rejected.
    pub fn new(min_poly: QPoly) -> Result<Self> {
        if !min_poly.is_monic() || min_poly.deg() < 1 {
            return Err(Error::NotMonic(min_poly.to_string()));
        }
        if !is_irreducible(&min_poly) {
            return Err(Error::Reducible(min_poly.to_string()));
        }
        Ok(Self::new_unchecked(min_poly))
    }

    /// Construct without the irreducibility test (callers that have
    /// already certified it, e.g. cubics without rational roots).
    pub fn new_unchecked(min_poly: QPoly) -> Self {
        let degree = min_poly.deg() as usize;
        let real_roots = isolate_real_roots(&min_poly);
        let complex_pairs = (degree - real_roots.len()) / 2;
        let mut traces = vec![q(degree as i64)];
        traces.extend(min_poly.power_sums(degree - 1));
        NumberField { min_poly, degree, real_roots, complex_pairs, traces, conjugation: None }
    }

    /// The field ℚ itself (`m(x) = x`).
    pub fn rationals() -> Self {
        Self::new_unchecked(QPoly::x())
    }

    /// Attach complex conjugation, given as the image of the generator.
    /// The image must be a root of the defining polynomial and the map
    /// must be an involution.
    pub fn with_conjugation(mut self, image: Vec<Q>) -> Result<Self> {
        if image.len() != self.degree {
            return Err(Error::Invalid("conjugation image has wrong length".into()));
        }
        let root = self.from_poly(&self.min_poly.compose(&self.to_poly(&image)));
        if !self.is_zero(&root) {
            return Err(Error::Invalid("conjugation image is not a root of the defining polynomial".into()));
        }
        self.conjugation = Some(image);
        let once = self.conjugate(&self.gen()).unwrap();
        let back = self.conjugate(&once).unwrap();
        if back != self.gen() {
            self.conjugation = None;
            return Err(Error::Invalid("conjugation is not an involution".into()));
        }
        Ok(self)
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn real_embeddings(&self) -> &[RootInterval] {
        &self.real_roots
    }

    pub fn complex_pairs(&self) -> usize {
        self.complex_pairs
    }

    pub fn is_totally_real(&self) -> bool {
        self.complex_pairs == 0
    }

    pub fn conjugation(&self) -> Option<&[Q]> {
        self.conjugation.as_deref()
    }

    pub fn zero(&self) -> Vec<Q> {
        vec![Q::zero(); self.degree]
    }

    pub fn one(&self) -> Vec<Q> {
        self.from_q(Q::one())
    }

    pub fn from_q(&self, a: Q) -> Vec<Q> {
        let mut v = self.zero();
        v[0] = a;
        v
    }

    pub fn gen(&self) -> Vec<Q> {
        if self.degree == 1 {
            return vec![-self.min_poly.coeff(0)];
        }
        let mut v = self.zero();
        v[1] = Q::one();
        v
    }

    pub fn is_zero(&self, a: &[Q]) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// The rational value of `a`, if it lies in ℚ.
    pub fn as_rational(&self, a: &[Q]) -> Option<Q> {
        a[1..].iter().all(|c| c.is_zero()).then(|| a[0].clone())
    }

    pub fn to_poly(&self, a: &[Q]) -> QPoly {
        QPoly::new(a.to_vec())
    }

    /// Reduce a polynomial in θ to coordinates.
    pub fn from_poly(&self, p: &QPoly) -> Vec<Q> {
        let r = p.rem(&self.min_poly);
        (0..self.degree).map(|i| r.coeff(i)).collect()
    }

    pub fn add(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[Q]) -> Vec<Q> {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, a: &[Q], s: &Q) -> Vec<Q> {
        a.iter().map(|x| x * s).collect()
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        if self.degree == 1 {
            return vec![&a[0] * &b[0]];
        }
        self.from_poly(&(&self.to_poly(a) * &self.to_poly(b)))
    }

    pub fn pow(&self, a: &[Q], k: u32) -> Vec<Q> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn inv(&self, a: &[Q]) -> Option<Vec<Q>> {
        if self.is_zero(a) {
            return None;
        }
        let (g, s, _) = QPoly::ext_gcd(&self.to_poly(a), &self.min_poly);
        debug_assert_eq!(g, QPoly::one());
        Some(self.from_poly(&s))
    }

    /// Image under the attached complex conjugation.
    pub fn conjugate(&self, a: &[Q]) -> Option<Vec<Q>> {
        let c = self.conjugation.as_ref()?;
        Some(self.from_poly(&self.to_poly(a).compose(&self.to_poly(c))))
    }

    /// Matrix of multiplication by `a` acting on coordinate columns.
    pub fn mul_matrix(&self, a: &[Q]) -> Matrix {
        let n = self.degree;
        let mut m = Matrix::zeros(n, n);
        let mut col = a.to_vec();
        let theta = self.gen();
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = col[i].clone();
            }
            col = self.mul(&col, &theta);
        }
        m
    }

    pub fn trace(&self, a: &[Q]) -> Q {
        a.iter().zip(&self.traces).fold(Q::zero(), |acc, (x, t)| acc + x * t)
    }

    /// Characteristic polynomial of multiplication by `a` (monic, degree
    /// `n`), computed from the power-sum traces.
    pub fn charpoly(&self, a: &[Q]) -> QPoly {
        let n = self.degree;
        let mut sums = Vec::with_capacity(n);
        let mut p = a.to_vec();
        for k in 0..n {
            if k > 0 {
                p = self.mul(&p, a);
            }
            sums.push(self.trace(&p));
        }
        QPoly::from_power_sums(n, &sums)
    }

    pub fn norm(&self, a: &[Q]) -> Q {
        let c = self.charpoly(a).coeff(0);
        if self.degree % 2 == 1 {
            -c
        } else {
            c
        }
    }

    /// Minimal polynomial of `a` over ℚ.
    pub fn minpoly(&self, a: &[Q]) -> QPoly {
        self.charpoly(a).radical()
    }

    /// True iff the characteristic polynomial of `a` has integer
    /// coefficients, i.e. `a` is an algebraic integer.
    pub fn is_integral(&self, a: &[Q]) -> bool {
        self.charpoly(a).coeffs().iter().all(|c| c.is_integer())
    }

    /// True iff `|σ(a)|² ≤ bound_sq` for every complex embedding σ.
    pub fn archimedean_bound_check(&self, a: &[Q], bound_sq: &Q) -> bool {
        if let (false, Some(_)) = (self.is_totally_real(), self.conjugation.as_ref()) {
            // |σ(a)|² = σ(a · ā) with a · ā totally real and nonnegative
            let abs2 = self.mul(a, &self.conjugate(a).unwrap());
            return count_roots_above(&self.charpoly(&abs2), bound_sq) == 0;
        }
        archimedean_poly_bound(&self.charpoly(a), bound_sq)
    }

    /// Rational approximations of the real embeddings of `a`, evaluated
    /// at midpoints of root intervals refined to the given width.
    pub fn real_embedding_values(&self, a: &[Q], width: &Q) -> Vec<Q> {
        let f = self.to_poly(a);
        self.real_roots
            .iter()
            .map(|iv| {
                let r = refine(&self.min_poly, iv, width);
                f.eval(&((&r.lo + &r.hi) / q(2)))
            })
            .collect()
    }

    /// Floating approximations of the real embeddings of `a`.
    pub fn real_embeddings_f64(&self, a: &[Q]) -> Vec<f64> {
        let w = Q::new(1.into(), num_bigint::BigInt::one() << 60usize);
        self.real_embedding_values(a, &w).iter().map(to_f64).collect()
    }
}

/// True iff every complex root `z` of `p` satisfies `|z|² ≤ bound_sq`.
///
/// Totally real case: the roots of `Res(p(z), w − z²)` are the `z²`.
/// General case: the polynomial whose roots are all products `z_i z_j`;
/// its root of largest modulus is `max |z|²`, which is real and
/// positive, so it suffices to find no real root outside
/// `[-bound_sq, bound_sq]`.
pub fn archimedean_poly_bound(p: &QPoly, bound_sq: &Q) -> bool {
    let n = p.deg();
    if n < 1 {
        return true;
    }
    let n = n as usize;
    let f = p.monic();
    if count_real_roots(&f) == f.radical().deg() as usize {
        let sums = f.power_sums(2 * n);
        let sq: Vec<Q> = (1..=n).map(|k| sums[2 * k - 1].clone()).collect();
        let s = QPoly::from_power_sums(n, &sq);
        return count_roots_above(&s, bound_sq) == 0;
    }
    let m = n * n;
    let sums = f.power_sums(m);
    let prod: Vec<Q> = sums.iter().map(|s| s * s).collect();
    let r = QPoly::from_power_sums(m, &prod);
    let r_neg = r.compose(&QPoly::from_i64(&[0, -1]));
    count_roots_above(&r, bound_sq) == 0 && count_roots_above(&r_neg, bound_sq) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_cubic_field() {
        let k = NumberField::new(QPoly::from_i64(&[1, -2, -1, 1])).unwrap();
        let t = k.gen();
        let t3 = k.pow(&t, 3);
        // θ³ = θ² + 2θ − 1
        assert_eq!(t3, vec![q(-1), q(2), q(1)]);
        let inv = k.inv(&t).unwrap();
        assert_eq!(k.mul(&inv, &t), k.one());
        assert_eq!(k.charpoly(&t), *k.min_poly());
        assert_eq!(k.norm(&t), q(-1));
        assert_eq!(k.trace(&t), q(1));
        assert_eq!(k.real_embeddings().len(), 3);
    }

    #[test]
    fn rejects_reducible_and_non_monic() {
        assert!(NumberField::new(QPoly::from_i64(&[-1, 0, 1])).is_err());
        assert!(NumberField::new(QPoly::from_i64(&[1, 0, 2])).is_err());
    }

    #[test]
    fn bound_checks() {
        let qq = NumberField::rationals();
        assert!(qq.archimedean_bound_check(&[q(2)], &q(8)));
        assert!(!qq.archimedean_bound_check(&[q(3)], &q(8)));
        let plastic = NumberField::new(QPoly::from_i64(&[-1, -1, 0, 1])).unwrap();
        assert!(plastic.archimedean_bound_check(&plastic.gen(), &q(8)));
        // complex roots of x^2 + 2 have |z|^2 = 2 exactly
        let k = NumberField::new(QPoly::from_i64(&[2, 0, 1])).unwrap();
        assert!(k.archimedean_bound_check(&k.gen(), &q(2)));
        assert!(!k.archimedean_bound_check(&k.gen(), &Q::new(199.into(), 100.into())));
        let kc = k.clone().with_conjugation(vec![q(0), q(-1)]).unwrap();
        assert!(kc.archimedean_bound_check(&kc.gen(), &q(2)));
        assert!(!kc.archimedean_bound_check(&kc.gen(), &Q::new(199.into(), 100.into())));
    }
}
