use num_traits::{One, Zero};

use super::field::NumberField;
use super::matrix::Matrix;
use super::poly::QPoly;
use super::rational::Q;
use crate::error::{Error, Result};

/// A finite product `E₁ × … × E_m` of number fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebra {
    factors: Vec<NumberField>,
    offsets: Vec<usize>,
    total_degree: usize,
}

/// Element of an [`EtaleAlgebra`], stored as the concatenation of the
/// power-basis coordinates in each factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub coords: Vec<Q>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<Q>) -> Self {
        AlgebraElement { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl EtaleAlgebra {
    pub fn new(factors: Vec<NumberField>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("an étale algebra needs at least one factor".into()));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut total = 0;
        for f in &factors {
            offsets.push(total);
            total += f.degree();
        }
        Ok(EtaleAlgebra { factors, offsets, total_degree: total })
    }

    /// `ℚ^m`.
    pub fn split_rational(m: usize) -> Result<Self> {
        Self::new(vec![NumberField::rationals(); m])
    }

    pub fn factors(&self) -> &[NumberField] {
        &self.factors
    }

    pub fn total_degree(&self) -> usize {
        self.total_degree
    }

    /// Coordinates of `a` in factor `j`.
    pub fn component<'a>(&self, a: &'a AlgebraElement, j: usize) -> &'a [Q] {
        let o = self.offsets[j];
        &a.coords[o..o + self.factors[j].degree()]
    }

    pub fn from_components(&self, parts: &[Vec<Q>]) -> AlgebraElement {
        assert_eq!(parts.len(), self.factors.len());
        AlgebraElement::new(parts.concat())
    }

    fn map2(&self, a: &AlgebraElement, b: &AlgebraElement, op: impl Fn(&NumberField, &[Q], &[Q]) -> Vec<Q>) -> AlgebraElement {
        let parts: Vec<Vec<Q>> = self
            .factors
            .iter()
            .enumerate()
            .map(|(j, k)| op(k, self.component(a, j), self.component(b, j)))
            .collect();
        self.from_components(&parts)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::new(vec![Q::zero(); self.total_degree])
    }

    pub fn one(&self) -> AlgebraElement {
        self.from_q(Q::one())
    }

    /// The diagonal image of a rational number.
    pub fn from_q(&self, c: Q) -> AlgebraElement {
        let parts: Vec<Vec<Q>> = self.factors.iter().map(|k| k.from_q(c.clone())).collect();
        self.from_components(&parts)
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, a: &AlgebraElement, s: &Q) -> AlgebraElement {
        AlgebraElement::new(a.coords.iter().map(|x| x * s).collect())
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.map2(a, b, |k, x, y| k.mul(x, y))
    }

    pub fn pow(&self, a: &AlgebraElement, e: u32) -> AlgebraElement {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// The rational `c` with `a = c·1`, if any.
    pub fn as_rational(&self, a: &AlgebraElement) -> Option<Q> {
        let mut val: Option<Q> = None;
        for (j, k) in self.factors.iter().enumerate() {
            let c = k.as_rational(self.component(a, j))?;
            match &val {
                Some(v) if *v != c => return None,
                Some(_) => {}
                None => val = Some(c),
            }
        }
        val
    }

    /// Trace from the algebra to ℚ.
    pub fn trace(&self, a: &AlgebraElement) -> Q {
        self.factors
            .iter()
            .enumerate()
            .fold(Q::zero(), |acc, (j, k)| acc + k.trace(self.component(a, j)))
    }

    /// Characteristic polynomial of multiplication by `a` over ℚ.
    pub fn charpoly(&self, a: &AlgebraElement) -> QPoly {
        self.factors
            .iter()
            .enumerate()
            .fold(QPoly::one(), |acc, (j, k)| &acc * &k.charpoly(self.component(a, j)))
    }

    /// True iff `|σ(a)|² ≤ bound_sq` for every embedding σ of every factor.
    pub fn archimedean_bound_check(&self, a: &AlgebraElement, bound_sq: &Q) -> bool {
        self.factors
            .iter()
            .enumerate()
            .all(|(j, k)| k.archimedean_bound_check(self.component(a, j), bound_sq))
    }
}

/// Dual basis functionals `φ_i` (as coordinate row vectors) with
/// `φ_i · e_j = δ_ij`, or [`Error::NotABasis`] when `elems` does not
/// span the algebra over ℚ.
pub fn algebra_dual_basis(alg: &EtaleAlgebra, elems: &[AlgebraElement]) -> Result<Vec<Vec<Q>>> {
    let n = alg.total_degree();
    if elems.len() != n || elems.iter().any(|e| e.len() != n) {
        return Err(Error::NotABasis);
    }
    // columns are the elements; the inverse's rows are the functionals
    let cols = Matrix::from_rows(elems.iter().map(|e| e.coords.clone()).collect()).transpose();
    let inv = cols.inverse().ok_or(Error::NotABasis)?;
    Ok(inv.to_rows())
}

/// Apply a functional to an element.
pub fn apply_functional(phi: &[Q], a: &AlgebraElement) -> Q {
    phi.iter()
        .zip(&a.coords)
        .filter(|(p, _)| !p.is_zero())
        .fold(Q::zero(), |acc, (p, x)| acc + p * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn el(v: &[i64]) -> AlgebraElement {
        AlgebraElement::new(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn dual_basis_small() {
        let e = EtaleAlgebra::split_rational(2).unwrap();
        let elems = [el(&[1, 1]), el(&[0, 1])];
        let phi = algebra_dual_basis(&e, &elems).unwrap();
        for (i, p) in phi.iter().enumerate() {
            for (j, x) in elems.iter().enumerate() {
                assert_eq!(apply_functional(p, x), q((i == j) as i64));
            }
        }
        assert_eq!(phi, vec![vec![q(1), q(0)], vec![q(-1), q(1)]]);
        assert!(matches!(algebra_dual_basis(&e, &[el(&[1, 1]), el(&[2, 2])]), Err(Error::NotABasis)));

        let k = NumberField::new(QPoly::from_i64(&[-2, 0, 1])).unwrap();
        let e = EtaleAlgebra::new(vec![k]).unwrap();
        let phi = algebra_dual_basis(&e, &[el(&[1, 0]), el(&[0, 1])]).unwrap();
        assert_eq!(phi, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn products_and_rational_detection() {
        let k = NumberField::new(QPoly::from_i64(&[-2, 0, 1])).unwrap();
        let e = EtaleAlgebra::new(vec![NumberField::rationals(), k]).unwrap();
        assert_eq!(e.total_degree(), 3);
        let a = el(&[3, 0, 1]);
        let sq = e.mul(&a, &a);
        assert_eq!(sq, el(&[9, 2, 0]));
        assert_eq!(e.as_rational(&e.from_q(q(5))), Some(q(5)));
        assert_eq!(e.as_rational(&a), None);
        assert_eq!(e.trace(&e.one()), q(3));
        assert_eq!(e.charpoly(&a), QPoly::from_i64(&[6, -2, -3, 1]));
    }
}
