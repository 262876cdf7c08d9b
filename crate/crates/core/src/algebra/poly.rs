use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{common_denominator, q, Q};
use crate::error::{Error, Result};

/// Dense univariate polynomial over ℚ, coefficients stored from the
/// constant term upwards with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<Q>,
}

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn constant(a: Q) -> Self {
        Self::new(vec![a])
    }

    pub fn monomial(k: usize, a: Q) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    /// `x - a`.
    pub fn linear_root(a: &Q) -> Self {
        Self::new(vec![-a.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree as a signed integer, `-1` for zero.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|x| x.is_one())
    }

    pub fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        QPoly { c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &QPoly::constant(a.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * q(i as i64))
                .collect(),
        )
    }

    /// `x^deg · self(1/x)` for the given formal degree.
    pub fn reverse(&self, deg: usize) -> Self {
        let mut c = vec![Q::zero(); deg + 1];
        for (i, a) in self.c.iter().enumerate() {
            assert!(i <= deg, "formal degree too small");
            c[deg - i] = a.clone();
        }
        Self::new(c)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        if self.c.len() < d.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let inv = d.lead().recip();
        let mut r = self.c.clone();
        let mut quo = vec![Q::zero(); r.len() - dd];
        for i in (0..quo.len()).rev() {
            let t = &r[i + dd] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                let s = &t * dj;
                r[i + j] -= s;
            }
            quo[i] = t;
        }
        r.truncate(dd);
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Exact division, `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        let (qq, r) = self.div_rem(d);
        r.is_zero().then_some(qq)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut a, mut b) = (a.primitive_part(), b.primitive_part());
        while !b.is_zero() {
            let r = a.rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·a + t·b = g` monic.
    pub fn ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (qq, r) = r0.div_rem(&r1);
            let s = &s0 - &(&qq * &s1);
            let t = &t0 - &(&qq * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lead().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    /// Rational content: the positive rational `c` with `self / c` a
    /// primitive integer polynomial.
    pub fn content(&self) -> Q {
        if self.is_zero() {
            return Q::one();
        }
        let den = common_denominator(self.c.iter());
        let g = self
            .c
            .iter()
            .map(|a| (a * Q::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
        Q::new(g, den)
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive_part(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Integer coefficients of the primitive part.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive_part().c.iter().map(|a| a.to_integer()).collect()
    }

    /// Coefficients as integers, if they all are.
    pub fn as_integers(&self) -> Option<Vec<BigInt>> {
        self.c
            .iter()
            .map(|a| a.is_integer().then(|| a.to_integer()))
            .collect()
    }

    /// Resultant `Res(a, b)` by the Euclidean algorithm over ℚ.
    pub fn resultant(a: &QPoly, b: &QPoly) -> Q {
        if a.is_zero() || b.is_zero() {
            return Q::zero();
        }
        let (mut a, mut b) = (a.clone(), b.clone());
        let mut acc = Q::one();
        loop {
            let m = a.c.len() - 1;
            let n = b.c.len() - 1;
            if n == 0 {
                return acc * pow_q(&b.c[0], m);
            }
            if m < n {
                if (m * n) % 2 == 1 {
                    acc = -acc;
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Q::zero();
            }
            let k = r.c.len() - 1;
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            acc *= pow_q(&b.lead(), m - k);
            a = b;
            b = r;
        }
    }

    pub fn discriminant(&self) -> Q {
        let n = self.c.len() - 1;
        let r = QPoly::resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -Q::one() } else { Q::one() };
        sign * r / self.lead()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && QPoly::gcd(self, &self.derivative()).deg() == 0
    }

    /// Yun's squarefree decomposition of the monic associate:
    /// returns `(a_i, i)` with `monic(self) = ∏ a_i^i`, each `a_i` monic,
    /// squarefree and pairwise coprime; trivial factors are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let f = self.monic();
        let mut out = Vec::new();
        if f.deg() <= 0 {
            return out;
        }
        let fp = f.derivative();
        let a0 = QPoly::gcd(&f, &fp);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = fp.div_exact(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.deg() > 0 {
            let a = QPoly::gcd(&b, &d);
            let nb = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            if a.deg() > 0 {
                out.push((a, i));
            }
            b = nb;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn radical(&self) -> QPoly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(QPoly::one(), |acc, (a, _)| &acc * &a)
    }

    /// `self` with square factors discarded: the leading coefficient times
    /// the product of the factors of odd multiplicity.
    pub fn odd_part(&self) -> QPoly {
        let odd = self
            .squarefree_decomposition()
            .into_iter()
            .filter(|(_, i)| i % 2 == 1)
            .fold(QPoly::one(), |acc, (a, _)| &acc * &a);
        odd.scale(&self.lead())
    }

    /// Power sums `p_1, …, p_k` of the roots (Newton's identities).
    pub fn power_sums(&self, k: usize) -> Vec<Q> {
        let f = self.monic();
        let n = f.c.len() - 1;
        // e_i with sign: f = x^n + c_{n-1} x^{n-1} + ... ; c_{n-i} = (-1)^i e_i
        let coef = |i: usize| -> Q {
            if i > n {
                Q::zero()
            } else {
                f.c[n - i].clone()
            }
        };
        let mut p: Vec<Q> = Vec::with_capacity(k);
        for m in 1..=k {
            // p_m + c1 p_{m-1} + ... + c_{m-1} p_1 + m c_m = 0
            let mut s = if m <= n { coef(m) * q(m as i64) } else { Q::zero() };
            for i in 1..m {
                let ci = coef(i);
                if !ci.is_zero() {
                    s += ci * &p[m - i - 1];
                }
            }
            p.push(-s);
        }
        p
    }

    /// The monic polynomial of degree `n` with the given power sums.
    pub fn from_power_sums(n: usize, p: &[Q]) -> QPoly {
        assert!(p.len() >= n);
        let mut c = vec![Q::one()]; // c[i] = coefficient of x^{n-i}
        for m in 1..=n {
            let mut s = p[m - 1].clone();
            for i in 1..m {
                s += &c[i] * &p[m - i - 1];
            }
            c.push(-s / q(m as i64));
        }
        c.reverse();
        QPoly::new(c)
    }

    /// Format with the given variable name.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }

    /// Space-separated coefficient list from the constant term up.
    pub fn coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.c.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
    }

    /// Parse a space-separated list of rationals, constant term first.
    pub fn parse_coeffs(s: &str) -> Result<QPoly> {
        let c = s
            .split_whitespace()
            .map(super::rational::parse_q)
            .collect::<Result<Vec<_>>>()?;
        if c.is_empty() {
            return Err(Error::Invalid("empty coefficient list".into()));
        }
        Ok(QPoly::new(c))
    }
}

pub(crate) fn pow_q(a: &Q, k: usize) -> Q {
    num_traits::pow::pow(a.clone(), k)
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new(
            (0..n)
                .map(|i| match (self.c.get(i), o.c.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        self + &(-o)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { c: self.c.iter().map(|a| -a).collect() }
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        QPoly::new(c)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, o: QPoly) -> QPoly { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qf;

    #[test]
    fn division_and_gcd() {
        let a = QPoly::from_i64(&[-1, 0, 1]);
        let b = QPoly::from_i64(&[1, 1]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq, QPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        let c = QPoly::from_i64(&[-1, 0, 0, 1]);
        assert_eq!(QPoly::gcd(&a, &c), QPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x - 3) = (3^2 - 2) up to sign convention Res(f, x-a) = (-1)^deg f f(a)
        let f = QPoly::from_i64(&[-2, 0, 1]);
        let g = QPoly::from_i64(&[-3, 1]);
        assert_eq!(QPoly::resultant(&f, &g), q(7));
        assert_eq!(QPoly::from_i64(&[-2, 0, 1]).discriminant(), q(8));
        assert_eq!(QPoly::from_i64(&[1, -2, -1, 1]).discriminant(), q(49));
    }

    #[test]
    fn yun_and_odd_part() {
        let p = QPoly::from_i64(&[-1, 1]);
        let r = QPoly::from_i64(&[1, 0, 1]);
        let f = (&p.pow(3) * &r.pow(2)).scale(&q(5));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(r.clone(), 2), (p.clone(), 3)]);
        assert_eq!(f.odd_part(), p.scale(&q(5)));
        assert_eq!(f.radical(), &p * &r);
    }

    #[test]
    fn newton_identities_round_trip() {
        let f = QPoly::new(vec![qf(1, 3), q(-2), q(0), q(5), q(1)]);
        let p = f.power_sums(4);
        assert_eq!(QPoly::from_power_sums(4, &p), f);
    }

    #[test]
    fn display() {
        assert_eq!(QPoly::from_i64(&[16, 0, -24, 0, 1]).to_string(), "x^4 - 24*x^2 + 16");
    }
}
