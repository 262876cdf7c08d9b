//! Small-integer number theory helpers.

use num_integer::Integer;

/// Prime factorization as `(p, exponent)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            for j in (i * i..=n as usize).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k as usize]).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn num_divisors(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// p-adic valuation.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// `a^e mod m`.
pub fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut base = a as u128 % m128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Reduce `a` into `[0, m)` for signed `a`.
pub fn rem_euclid(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// The solution `x mod m1·m2` of `x ≡ a1 (m1)`, `x ≡ a2 (m2)` for coprime moduli.
pub fn crt(a1: u64, m1: u64, a2: u64, m2: u64) -> u64 {
    let e = num_integer::Integer::extended_gcd(&(m1 as i128), &(m2 as i128));
    debug_assert_eq!(e.gcd, 1);
    let m = (m1 * m2) as i128;
    let x = (a1 as i128 * e.y * m2 as i128 + a2 as i128 * e.x * m1 as i128).rem_euclid(m);
    x as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(factorize(376), vec![(2, 3), (47, 1)]);
        assert_eq!(euler_phi(128), 64);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(mult_order(2, 13), 12);
        assert_eq!(crt(2, 3, 3, 5), 8);
        assert_eq!(num_divisors(12), 6);
    }
}
