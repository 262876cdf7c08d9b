//! Factorization over ℚ by the Zassenhaus method: factor modulo a small
//! prime, Hensel-lift to a power exceeding the Mignotte bound, recombine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::QPoly;
use super::rational::Q;

type Fp = Vec<u64>; // coefficients mod p, constant term first, trimmed

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(c)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty());
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let db = b.len() - 1;
    let il = inv(*b.last().unwrap(), p);
    let mut r = a.clone();
    let mut qv = vec![0u64; a.len() - db];
    for i in (0..qv.len()).rev() {
        let t = mulmod(r[i + db], il, p);
        if t == 0 {
            continue;
        }
        qv[i] = t;
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - mulmod(t, y, p)) % p;
        }
    }
    r.truncate(db);
    (trim(qv), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let il = inv(l, p);
            a.iter().map(|&x| mulmod(x, il, p)).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn fp_ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (qq, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&qq, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&qq, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let il = inv(*r0.last().unwrap(), p);
    let sc = |v: &Fp| trim(v.iter().map(|&x| mulmod(x, il, p)).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_powmod(base: &Fp, mut e: u128, m: &Fp, p: u64) -> Fp {
    let mut r: Fp = vec![1];
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = fp_divrem(&fp_mul(&r, &b, p), m, p).1;
        }
        e >>= 1;
        if e > 0 {
            b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        }
    }
    r
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| mulmod(x, i as u64 % p, p))
            .collect(),
    )
}

struct Lcg(u64);
impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }
}

/// Distinct-degree then equal-degree factorization of a monic squarefree
/// polynomial over 𝔽_p (p odd).
fn fp_factor(f: &Fp, p: u64) -> Vec<Fp> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    let mut rng = Lcg(0x9e3779b97f4a7c15 ^ p);
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.push(rest.clone());
            break;
        }
        h = fp_powmod(&h, p as u128, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            equal_degree(&g, d, p, &mut rng, &mut out);
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
    }
    out.sort();
    out
}

fn equal_degree(f: &Fp, d: usize, p: u64, rng: &mut Lcg, out: &mut Vec<Fp>) {
    let n = f.len() - 1;
    if n == d {
        out.push(f.clone());
        return;
    }
    loop {
        let a: Fp = trim((0..n).map(|_| rng.next() % p).collect());
        if a.len() < 2 {
            continue;
        }
        // a^((p^d - 1)/2) = (a · a^p · … · a^{p^{d-1}})^((p-1)/2)
        let mut t = a.clone();
        let mut acc = a.clone();
        for _ in 1..d {
            t = fp_powmod(&t, p as u128, f, p);
            acc = fp_divrem(&fp_mul(&acc, &t, p), f, p).1;
        }
        let b = fp_powmod(&acc, ((p - 1) / 2) as u128, f, p);
        let g = fp_gcd(&fp_sub(&b, &vec![1], p), f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_divrem(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&fp_monic(&h, p), d, p, rng, out);
            return;
        }
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn reduce(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

type Zp = Vec<BigInt>;

fn z_mul(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c.iter().map(|x| x.mod_floor(m)).collect()
}

fn to_z(a: &Fp) -> Zp {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lift `f ≡ g h (mod p)` with `f, g, h` monic to modulus `p^k`.
fn hensel_pair(f: &Zp, g: &Fp, h: &Fp, p: u64, k: u32) -> (Zp, Zp) {
    let (_, s, t) = fp_ext_gcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let prod = z_mul(&gz, &hz, &next);
        let n = f.len().max(prod.len());
        let e: Fp = trim(
            (0..n)
                .map(|i| {
                    let fi = f.get(i).cloned().unwrap_or_default();
                    let pi = prod.get(i).cloned().unwrap_or_default();
                    let d = (fi - pi).mod_floor(&next);
                    debug_assert!((&d % &pj).is_zero());
                    (d / &pj).mod_floor(&pb).to_u64().unwrap()
                })
                .collect(),
        );
        let te = fp_mul(&t, &e, p);
        let (qq, dg) = fp_divrem(&te, g, p);
        let se = fp_mul(&s, &e, p);
        let dh = trim({
            let a = fp_mul(&qq, h, p);
            let n = se.len().max(a.len());
            (0..n)
                .map(|i| (se.get(i).copied().unwrap_or(0) + a.get(i).copied().unwrap_or(0)) % p)
                .collect()
        });
        for (i, c) in dg.iter().enumerate() {
            gz[i] = (&gz[i] + &pj * BigInt::from(*c)).mod_floor(&next);
        }
        for (i, c) in dh.iter().enumerate() {
            hz[i] = (&hz[i] + &pj * BigInt::from(*c)).mod_floor(&next);
        }
        pj = next;
    }
    (gz, hz)
}

/// Factor a primitive squarefree integer polynomial of degree ≥ 1 into
/// primitive irreducible factors.
fn factor_squarefree_z(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    // choose a prime giving the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes().skip(2) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_monic(&reduce(f, p), p);
        if fp.len() != n + 1 {
            continue;
        }
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = fp_factor(&fp, p);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, facs) = best.expect("some prime works");
    // Mignotte-type bound on factor coefficients, times |lc|
    let norm2: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * lc.abs();
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= &bound * 2 {
        m *= &pb;
        k += 1;
    }
    // monic version of f modulo m
    let lc_inv = lc.modinv(&m).expect("lc invertible mod p^k");
    let fmon: Zp = f.iter().map(|c| (c * &lc_inv).mod_floor(&m)).collect();
    let mut lifted: Vec<Zp> = Vec::new();
    let mut target = fmon;
    for i in 0..facs.len() - 1 {
        let g = &facs[i];
        let h = facs[i + 1..].iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
        let (gz, hz) = hensel_pair(&target, g, &h, p, k);
        lifted.push(gz);
        target = hz;
    }
    lifted.push(target);

    // recombination
    let mut rest: Vec<BigInt> = f.to_vec();
    let mut pool: Vec<Zp> = lifted;
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        let idx: Vec<usize> = (0..pool.len()).collect();
        for combo in itertools::Itertools::combinations(idx.into_iter(), size) {
            let lcr = rest.last().unwrap().clone();
            let mut g: Zp = vec![lcr.clone()];
            for &i in &combo {
                g = z_mul(&g, &pool[i], &m);
            }
            let g: Vec<BigInt> = g.iter().map(|c| symmetric(c, &m)).collect();
            let gq = QPoly::new(g.iter().map(|c| Q::from_integer(c.clone())).collect()).primitive_part();
            let rq = QPoly::new(rest.iter().map(|c| Q::from_integer(c.clone())).collect());
            if let Some(quot) = rq.div_exact(&gq) {
                if quot.coeffs().iter().all(|c| c.is_integer()) {
                    out.push(gq.integer_coeffs());
                    rest = quot.integer_coeffs();
                    let mut keep = Vec::new();
                    for (i, x) in pool.into_iter().enumerate() {
                        if !combo.contains(&i) {
                            keep.push(x);
                        }
                    }
                    pool = keep;
                    continue 'outer;
                }
            }
        }
        size += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

/// Factor a nonzero polynomial over ℚ into monic irreducible factors with
/// multiplicities, sorted by degree then coefficients.
pub fn factor_over_q(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    for (a, mult) in f.squarefree_decomposition() {
        let z = a.integer_coeffs();
        for fac in factor_squarefree_z(&z) {
            let fq = QPoly::new(fac.into_iter().map(Q::from_integer).collect()).monic();
            out.push((fq, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    out
}

/// True iff `f` has positive degree and is irreducible over ℚ.
pub fn is_irreducible(f: &QPoly) -> bool {
    if f.deg() < 1 {
        return false;
    }
    let fac = factor_over_q(f);
    fac.len() == 1 && fac[0].1 == 1
}
