use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{QPoly, Q};
use crate::arith::factorize;
use crate::error::{Error, Result};

/// `𝔽_q` for a prime power `q`, with elements numbered `0 … q−1` by
/// their base-`p` digits in a power basis `1, θ, …, θ^{k−1}` where `θ`
/// is a root of a primitive polynomial.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    k: u32,
    q: u64,
    exp: Vec<u64>,
    log: Vec<u64>,
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        let f = factorize(q);
        if f.len() != 1 {
            return Err(Error::Invalid(format!("{q} is not a prime power")));
        }
        let (p, k) = f[0];
        // search for a primitive polynomial x^k + c_{k−1}x^{k−1} + … + c_0
        for tail in 0..q {
            let coeffs = digits(tail, p, k);
            if coeffs[0] == 0 && k > 1 {
                continue;
            }
            if let Some((exp, log)) = power_tables(p, k, q, &coeffs) {
                return Ok(FiniteField { p, k, q, exp, log });
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[((self.log[a as usize] + self.log[b as usize]) % (self.q - 1)) as usize]
    }

    /// `+1` for nonzero squares, `−1` for non-squares, `0` for zero.
    pub fn quadratic_character(&self, a: u64) -> i64 {
        if a == 0 {
            0
        } else if self.log[a as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Image of a rational number, or `None` if `p` divides its
    /// denominator.
    pub fn reduce(&self, x: &Q) -> Option<u64> {
        let p = BigInt::from(self.p);
        let n = ((x.numer() % &p) + &p) % &p;
        let d = ((x.denom() % &p) + &p) % &p;
        let d = d.to_u64()?;
        if d == 0 {
            return None;
        }
        let n = n.to_u64()?;
        Some(n * crate::arith::pow_mod(d, self.p - 2, self.p) % self.p)
    }

    pub fn eval(&self, f: &[u64], x: u64) -> u64 {
        f.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

fn digits(mut n: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = n % p;
            n /= p;
            d
        })
        .collect()
}

/// Powers of `θ` modulo the given monic polynomial; `None` unless `θ`
/// has order exactly `q − 1`, which makes the quotient ring a field.
fn power_tables(p: u64, k: u32, q: u64, tail: &[u64]) -> Option<(Vec<u64>, Vec<u64>)> {
    let k = k as usize;
    let encode = |v: &[u64]| v.iter().rev().fold(0, |acc, &d| acc * p + d);
    let mut cur = vec![0u64; k];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(q as usize - 1);
    let mut log = vec![u64::MAX; q as usize];
    for i in 0..q - 1 {
        let code = encode(&cur);
        if log[code as usize] != u64::MAX {
            return None;
        }
        log[code as usize] = i;
        exp.push(code);
        // multiply by θ, reducing θ^k = −Σ c_j θ^j
        if k == 1 {
            cur[0] = cur[0] * ((p - tail[0]) % p) % p;
        } else {
            let top = cur[k - 1];
            for j in (1..k).rev() {
                cur[j] = (cur[j - 1] + top * (p - tail[j]) % p) % p;
            }
            cur[0] = top * ((p - tail[0]) % p) % p;
        }
    }
    (encode(&cur) == 1).then_some((exp, log))
}

fn reduce_model(f: &QPoly, g: usize, field: &FiniteField) -> Result<Vec<u64>> {
    let p = field.characteristic();
    if p == 2 {
        return Err(Error::Invalid("point counts need odd characteristic".into()));
    }
    let d = f.degree().unwrap_or(0);
    if d != 2 * g + 1 && d != 2 * g + 2 {
        return Err(Error::Invalid(format!("degree {d} is not admissible for genus {g}")));
    }
    let bad = || Error::Invalid(format!("bad reduction at {p}"));
    let coeffs = f.coeffs().iter().map(|c| field.reduce(c).ok_or_else(bad)).collect::<Result<Vec<u64>>>()?;
    let disc = f.discriminant();
    if coeffs[d] == 0 || disc.is_zero() || field.reduce(&disc).is_none_or(|r| r == 0) {
        return Err(bad());
    }
    Ok(coeffs)
}

fn points_at_infinity(coeffs: &[u64], g: usize, field: &FiniteField) -> i64 {
    if coeffs.len() - 1 == 2 * g + 1 {
        1
    } else {
        1 + field.quadratic_character(coeffs[2 * g + 2])
    }
}

/// `#X(𝔽_q)` for the smooth model of `y² = F(x)`, by summing the
/// quadratic character.
pub fn count_points(f: &QPoly, g: usize, q: u64) -> Result<u64> {
    let field = FiniteField::new(q)?;
    let coeffs = reduce_model(f, g, &field)?;
    let affine: i64 = (0..q).map(|x| 1 + field.quadratic_character(field.eval(&coeffs, x))).sum();
    Ok((affine + points_at_infinity(&coeffs, g, &field)) as u64)
}

/// The same count by testing every pair `(x, y)`.
pub fn count_points_naive(f: &QPoly, g: usize, q: u64) -> Result<u64> {
    let field = FiniteField::new(q)?;
    let coeffs = reduce_model(f, g, &field)?;
    let mut n = 0i64;
    for x in 0..q {
        let fx = field.eval(&coeffs, x);
        n += (0..q).filter(|&y| field.mul(y, y) == fx).count() as i64;
    }
    Ok((n + points_at_infinity(&coeffs, g, &field)) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [3, 9, 25, 27, 49] {
            let f = FiniteField::new(q).unwrap();
            let squares = (1..q).filter(|&a| f.quadratic_character(a) == 1).count() as u64;
            assert_eq!(squares, (q - 1) / 2);
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    let c = (a * 7 + b) % q;
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn quintic_over_f3() {
        let f = QPoly::from_i64(&[1, 0, 0, 0, 0, 1]);
        assert_eq!(count_points(&f, 2, 3).unwrap(), 4);
        assert_eq!(count_points_naive(&f, 2, 3).unwrap(), 4);
    }
}
