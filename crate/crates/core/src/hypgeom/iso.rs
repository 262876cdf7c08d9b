use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{q, sqrt_q, QPoly, Q};

/// Integral Möbius data with `G(x) = e² (cx+d)^n F((ax+b)/(cx+d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) struct Witness {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: Q,
}

const P: u64 = 2_147_483_629;

fn modp(x: &Q) -> u64 {
    let m = BigInt::from(P);
    let n = ((x.numer() % &m) + &m) % &m;
    let d = ((x.denom() % &m) + &m) % &m;
    let n = n.to_u64().unwrap();
    let d = d.to_u64().unwrap();
    n * inv_mod(d) % P
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

fn inv_mod(x: u64) -> u64 {
    pow_mod(x, P - 2)
}

fn sm(x: i64) -> u64 {
    x.rem_euclid(P as i64) as u64
}

/// `F_hom(u, v) = Σ f_k u^k v^{n−k}` modulo `P`.
fn hom_eval(f: &[u64], n: usize, u: u64, v: u64) -> u64 {
    let mut acc = 0;
    for k in (0..=n).rev() {
        acc = (acc * u + f.get(k).copied().unwrap_or(0) * pow_mod(v, (n - k) as u64)) % P;
    }
    acc
}

/// `(cx+d)^n F((ax+b)/(cx+d))`.
pub fn mobius_transform(f: &QPoly, n: usize, [a, b, c, d]: [&Q; 4]) -> QPoly {
    let num = QPoly::new(vec![b.clone(), a.clone()]);
    let den = QPoly::new(vec![d.clone(), c.clone()]);
    let mut acc = QPoly::zero();
    for (k, fk) in f.coeffs().iter().enumerate() {
        if fk.is_zero() {
            continue;
        }
        let t = &(&num.pow(k) * &den.pow(n - k)) * &QPoly::constant(fk.clone());
        acc = &acc + &t;
    }
    acc
}

/// Search over primitive integral matrices with entries bounded by
/// `height`, with a cheap test modulo a large prime before the exact one.
pub(super) fn search(f: &QPoly, g: &QPoly, n: usize, height: i64) -> Option<Witness> {
    let fp: Vec<u64> = f.coeffs().iter().map(modp).collect();
    let gp: Vec<u64> = g.coeffs().iter().map(modp).collect();
    let g_at: Vec<u64> = (1..=3u64).map(|t| hom_eval(&gp, n, t, 1)).collect();
    let range: Vec<i64> = (-height..=height).collect();
    range.par_iter().find_map_first(|&a| {
        for &b in &range {
            for &c in &range {
                for &d in &range {
                    if a * d - b * c == 0 || !normalized(a, b, c, d) {
                        continue;
                    }
                    // quick test at x = 1, 2, 3: G(t) ∝ F_hom(a t + b, c t + d)
                    let vals: Vec<u64> = (1..=3i64).map(|t| hom_eval(&fp, n, sm(a * t + b), sm(c * t + d))).collect();
                    if !(0..3).all(|i| (0..3).all(|j| vals[i] * g_at[j] % P == vals[j] * g_at[i] % P)) {
                        continue;
                    }
                    if let Some(e) = exact_check(f, g, n, a, b, c, d) {
                        return Some(Witness { a, b, c, d, e });
                    }
                }
            }
        }
        None
    })
}

fn normalized(a: i64, b: i64, c: i64, d: i64) -> bool {
    let first = [a, b, c, d].into_iter().find(|&x| x != 0).unwrap();
    first > 0 && num_integer::gcd(num_integer::gcd(a, b), num_integer::gcd(c, d)) == 1
}

fn exact_check(f: &QPoly, g: &QPoly, n: usize, a: i64, b: i64, c: i64, d: i64) -> Option<Q> {
    let fm = mobius_transform(f, n, [&q(a), &q(b), &q(c), &q(d)]);
    let i = (0..=n).find(|&i| !g.coeff(i).is_zero())?;
    if fm.coeff(i).is_zero() {
        return None;
    }
    let mu = g.coeff(i) / fm.coeff(i);
    if fm.scale(&mu) != *g {
        return None;
    }
    sqrt_q(&mu)
}
