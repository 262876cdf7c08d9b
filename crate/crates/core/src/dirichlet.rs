//! Dirichlet characters in the local-exponent encoding `{e_p : p | N}`.
//!
//! For odd `p^α ∥ N` the component `ε_p` is fixed by its value
//! `exp(2πi e_p / φ(p^α))` on the smallest positive generator of
//! `(ℤ/p^αℤ)*`. For `2^α` with `α ≤ 2` the generator is `-1`; for
//! `α > 2` the component is the pair `(e₂′, e₂″)` with
//! `ε₂(-1) = exp(2πi e₂′/2)` and `ε₂(5) = exp(2πi e₂″/2^(α-2))`, each
//! exponent taken relative to the order of its generator.

use std::fmt;
use std::str::FromStr;

use crate::arith::{crt, euler_phi, factorize, gcd, lcm, mult_order};
use crate::error::{Error, Result};

/// Exponent data for one prime-power component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalExponent {
    Single(u64),
    /// Values on `-1` and on `5` (only for `2^α` with `α > 2`).
    Pair(u64, u64),
}

/// A root of unity `exp(2πi k/m)`, with `0 ≤ k < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    pub k: u64,
    pub m: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { k: 0, m: 1 }
    }

    /// Same value with the smallest possible `m`.
    pub fn reduced(self) -> Self {
        if self.k == 0 {
            return Self::one();
        }
        let g = gcd(self.k, self.m);
        RootOfUnity { k: self.k / g, m: self.m / g }
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
    }

    /// Exponent `k'` with this value equal to `exp(2πi k'/m)`.
    pub fn exponent_over(&self, m: u64) -> Option<u64> {
        (m * self.k % self.m == 0).then(|| m * self.k / self.m)
    }

    pub fn mul(self, o: Self) -> Self {
        let m = lcm(self.m, o.m);
        RootOfUnity { k: (self.k * (m / self.m) + o.k * (m / o.m)) % m, m }.reduced()
    }

    pub fn inv(self) -> Self {
        RootOfUnity { k: (self.m - self.k) % self.m, m: self.m }.reduced()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Local {
    p: u64,
    alpha: u32,
    pa: u64,
    phi: u64,
    exp: LocalExponent,
    /// `logs[n]` = discrete logarithm data of the unit `n mod p^α`
    /// (for `2^α`, `α > 2`: `2·t + s` encoding `n = (-1)^s 5^t`).
    logs: Vec<u64>,
}

fn smallest_generator(pa: u64) -> u64 {
    let phi = euler_phi(pa);
    (1..pa.max(2)).find(|&g| gcd(g, pa) == 1 && mult_order(g, pa) == phi).unwrap_or(1)
}

impl Local {
    fn new(p: u64, alpha: u32, exp: LocalExponent) -> Result<Self> {
        let pa = p.pow(alpha);
        let phi = euler_phi(pa);
        let bad = |m: String| Error::Character(m);
        match (p == 2 && alpha > 2, exp) {
            (true, LocalExponent::Pair(a, b)) => {
                if a >= 2 || b >= phi / 2 {
                    return Err(bad(format!("exponents {{{a},{b}}} out of range [0, 2) x [0, {}) at p = 2", phi / 2)));
                }
            }
            (false, LocalExponent::Single(e)) => {
                if e >= phi {
                    return Err(bad(format!("exponent {e} out of range [0, {phi}) at p = {p}")));
                }
            }
            (true, _) => return Err(bad(format!("p = 2 with 2^{alpha} | N needs a pair of exponents"))),
            (false, _) => return Err(bad(format!("a pair of exponents is only allowed for 2^a with a > 2, not at p = {p}"))),
        }
        let mut logs = vec![u64::MAX; pa as usize];
        if p == 2 && alpha > 2 {
            let mut pow5 = 1u64;
            for t in 0..phi / 2 {
                logs[pow5 as usize] = 2 * t;
                logs[(pa - pow5) as usize] = 2 * t + 1;
                pow5 = pow5 * 5 % pa;
            }
        } else if pa > 1 {
            let g = if p == 2 { pa - 1 } else { smallest_generator(pa) };
            let mut x = 1u64;
            for t in 0..phi {
                logs[x as usize] = t;
                x = x * g % pa;
            }
        }
        Ok(Local { p, alpha, pa, phi, exp, logs })
    }

    /// `ε_p(n)` as a fraction `k/φ` of a full turn; `None` when `p | n`.
    fn angle(&self, n: u64) -> Option<u64> {
        let r = n % self.pa;
        if self.pa == 1 {
            return Some(0);
        }
        if r % self.p == 0 {
            return None;
        }
        let l = self.logs[r as usize];
        Some(match self.exp {
            LocalExponent::Single(e) => e * l % self.phi,
            LocalExponent::Pair(a, b) => (a * (l % 2) * (self.phi / 2) + 2 * b * (l / 2)) % self.phi,
        })
    }

    fn order(&self) -> u64 {
        let ord = |e: u64, m: u64| m / gcd(e, m);
        match self.exp {
            LocalExponent::Single(e) => ord(e, self.phi),
            LocalExponent::Pair(a, b) => lcm(ord(a, 2), ord(b, self.phi / 2)),
        }
    }

    fn conductor_exponent(&self) -> u32 {
        (0..=self.alpha)
            .find(|&c| {
                let step = self.p.pow(c);
                (1..self.pa).step_by(step as usize).all(|n| self.angle(n).map_or(true, |a| a == 0))
            })
            .unwrap_or(self.alpha)
    }

    fn with_exp(&self, exp: LocalExponent) -> Self {
        Local { exp, ..self.clone() }
    }

    fn neg_exp(&self) -> LocalExponent {
        let f = |a: u64, m: u64| (m - a) % m;
        match self.exp {
            LocalExponent::Single(a) => LocalExponent::Single(f(a, self.phi)),
            LocalExponent::Pair(a, b) => LocalExponent::Pair(f(a, 2), f(b, self.phi / 2)),
        }
    }

    fn mul_exp(&self, o: &LocalExponent) -> LocalExponent {
        let f = |a: u64, b: u64, m: u64| (a + b) % m;
        match (self.exp, *o) {
            (LocalExponent::Single(a), LocalExponent::Single(b)) => LocalExponent::Single(f(a, b, self.phi)),
            (LocalExponent::Pair(a, b), LocalExponent::Pair(c, d)) => {
                LocalExponent::Pair(f(a, c, 2), f(b, d, self.phi / 2))
            }
            _ => unreachable!("mismatched local exponent shapes"),
        }
    }
}

/// A Dirichlet character modulo `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: u64,
    local: Vec<Local>,
    order: u64,
}

impl DirichletCharacter {
    /// Build from local exponents listed in increasing order of the primes
    /// dividing `modulus`.
    pub fn decode(modulus: u64, encoding: &[LocalExponent]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Character("modulus must be positive".into()));
        }
        let fac = factorize(modulus);
        if fac.len() != encoding.len() {
            return Err(Error::Character(format!(
                "modulus {modulus} has {} prime factors but {} exponents were given",
                fac.len(),
                encoding.len()
            )));
        }
        let local = fac
            .iter()
            .zip(encoding)
            .map(|(&(p, a), &e)| Local::new(p, a, e))
            .collect::<Result<Vec<_>>>()?;
        let order = local.iter().fold(1, |acc, l| lcm(acc, l.order()));
        Ok(DirichletCharacter { modulus, local, order })
    }

    pub fn trivial(modulus: u64) -> Self {
        let enc: Vec<LocalExponent> = factorize(modulus)
            .iter()
            .map(|&(p, a)| if p == 2 && a > 2 { LocalExponent::Pair(0, 0) } else { LocalExponent::Single(0) })
            .collect();
        Self::decode(modulus, &enc).expect("trivial character is always valid")
    }

    /// Every character modulo `N`, in lexicographic order of encodings.
    pub fn all(modulus: u64) -> Vec<Self> {
        let mut encs: Vec<Vec<LocalExponent>> = vec![Vec::new()];
        for (p, a) in factorize(modulus) {
            let phi = euler_phi(p.pow(a));
            let opts: Vec<LocalExponent> = if p == 2 && a > 2 {
                (0..2).flat_map(|x| (0..phi / 2).map(move |y| LocalExponent::Pair(x, y))).collect()
            } else {
                (0..phi).map(LocalExponent::Single).collect()
            };
            encs = encs
                .into_iter()
                .flat_map(|e| {
                    opts.iter().map(move |o| {
                        let mut v = e.clone();
                        v.push(*o);
                        v
                    })
                })
                .collect();
        }
        encs.into_iter().map(|e| Self::decode(modulus, &e).unwrap()).collect()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn encoding(&self) -> Vec<LocalExponent> {
        self.local.iter().map(|l| l.exp).collect()
    }

    /// Recompute the encoding from values at the CRT lifts of the local
    /// generators.
    pub fn encode(&self) -> Vec<LocalExponent> {
        self.local
            .iter()
            .map(|l| {
                let lift = |g: u64| self.lift_local(l, g);
                let exp_at = |n: u64, m: u64| {
                    let v = self.eval(n).expect("lift is a unit");
                    v.exponent_over(m).expect("local value has order dividing the generator order")
                };
                if l.p == 2 && l.alpha > 2 {
                    LocalExponent::Pair(exp_at(lift(l.pa - 1), 2), exp_at(lift(5), l.phi / 2))
                } else if l.pa <= 2 {
                    LocalExponent::Single(0)
                } else {
                    let g = if l.p == 2 { l.pa - 1 } else { smallest_generator(l.pa) };
                    LocalExponent::Single(exp_at(lift(g), l.phi))
                }
            })
            .collect()
    }

    fn lift_local(&self, l: &Local, g: u64) -> u64 {
        let rest = self.modulus / l.pa;
        crt(g % l.pa, l.pa, 1 % rest, rest)
    }

    /// `ε(n)`, or `None` when `gcd(n, N) > 1`.
    pub fn eval(&self, n: u64) -> Option<RootOfUnity> {
        let mut acc = RootOfUnity::one();
        for l in &self.local {
            let a = l.angle(n)?;
            acc = acc.mul(RootOfUnity { k: a, m: l.phi }.reduced());
        }
        Some(acc)
    }

    /// `ε(n)` for signed `n`.
    pub fn eval_signed(&self, n: i64) -> Option<RootOfUnity> {
        self.eval(n.rem_euclid(self.modulus as i64) as u64)
    }

    /// `ε(n)` written over the character order: `exp(2πi k/order)`.
    pub fn eval_exponent(&self, n: u64) -> Option<u64> {
        self.eval(n).map(|v| v.exponent_over(self.order).expect("value order divides character order"))
    }

    pub fn conductor(&self) -> u64 {
        self.local.iter().map(|l| l.p.pow(l.conductor_exponent())).product()
    }

    /// `v_p` of the conductor.
    pub fn conductor_valuation(&self, p: u64) -> u32 {
        self.local.iter().find(|l| l.p == p).map_or(0, |l| l.conductor_exponent())
    }

    /// The character `ε′` modulo `N / p^{v_p(N)}` obtained by dropping the
    /// `p`-component.
    pub fn without_prime(&self, p: u64) -> Self {
        let local: Vec<Local> = self.local.iter().filter(|l| l.p != p).cloned().collect();
        let modulus = local.iter().map(|l| l.pa).product();
        let order = local.iter().fold(1, |acc, l| lcm(acc, l.order()));
        DirichletCharacter { modulus, local, order }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.modulus != o.modulus {
            return Err(Error::Character("moduli differ".into()));
        }
        let enc: Vec<LocalExponent> = self.local.iter().zip(&o.local).map(|(a, b)| a.mul_exp(&b.exp)).collect();
        Self::decode(self.modulus, &enc)
    }

    pub fn inverse(&self) -> Self {
        let local: Vec<Local> = self.local.iter().map(|l| l.with_exp(l.neg_exp())).collect();
        DirichletCharacter { modulus: self.modulus, local, order: self.order }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::trivial(self.modulus);
        for _ in 0..k % self.order {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// The Galois orbit `{ε^k : gcd(k, order) = 1}`, sorted by encoding.
    pub fn galois_orbit(&self) -> Vec<Self> {
        let mut out: Vec<Self> = (1..=self.order).filter(|&k| gcd(k, self.order) == 1).map(|k| self.pow(k)).collect();
        out.sort_by_key(|c| c.encoding());
        out.dedup();
        out
    }

    /// Units `n mod N` with `ε(n) = 1`.
    pub fn kernel(&self) -> Vec<u64> {
        (1..self.modulus.max(2)).filter(|&n| self.eval(n).is_some_and(|v| v.is_one())).collect()
    }

    /// `ε(-1) = 1`.
    pub fn is_even(&self) -> bool {
        self.eval_signed(-1).is_some_and(|v| v.is_one())
    }
}

fn fmt_exp(e: &LocalExponent) -> String {
    match e {
        LocalExponent::Single(a) => a.to_string(),
        LocalExponent::Pair(a, b) => format!("{{{a},{b}}}"),
    }
}

impl fmt::Display for DirichletCharacter {
    /// The encoding in brace notation, e.g. `{2}`, `{0,2}`, `{{0,16}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.local.iter().map(|l| fmt_exp(&l.exp)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Parse a brace encoding such as `{2}`, `{0,2}` or `{{0,16}}`.
pub fn parse_encoding(s: &str) -> Result<Vec<LocalExponent>> {
    let bad = || Error::Character(format!("malformed character encoding `{s}`"));
    let t = s.trim();
    let inner = t.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(bad)?;
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('{') {
            let close = r.find('}').ok_or_else(bad)?;
            let nums: Vec<&str> = r[..close].split(',').collect();
            if nums.len() != 2 {
                return Err(bad());
            }
            let a = nums[0].trim().parse().map_err(|_| bad())?;
            let b = nums[1].trim().parse().map_err(|_| bad())?;
            out.push(LocalExponent::Pair(a, b));
            rest = r[close + 1..].trim_start();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            out.push(LocalExponent::Single(rest[..end].trim().parse().map_err(|_| bad())?));
            rest = &rest[end..];
        }
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    /// Parses `N {…}`, the text form used in fixture files after `char`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, enc) = s.split_once(char::is_whitespace).ok_or_else(|| Error::Character(format!("expected `N {{…}}`, got `{s}`")))?;
        let n: u64 = n.parse().map_err(|_| Error::Character(format!("bad modulus `{n}`")))?;
        Self::decode(n, &parse_encoding(enc)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LocalExponent::*;

    #[test]
    fn level_13_order_6() {
        let chi = DirichletCharacter::decode(13, &[Single(2)]).unwrap();
        assert_eq!(chi.order(), 6);
        assert_eq!(chi.eval(2), Some(RootOfUnity { k: 1, m: 6 }));
        assert_eq!(chi.eval(1), Some(RootOfUnity::one()));
        assert_eq!(chi.conductor(), 13);
        assert_eq!(chi.to_string(), "{2}");
    }

    #[test]
    fn modulus_8() {
        let chi = DirichletCharacter::decode(8, &[Pair(1, 0)]).unwrap();
        assert_eq!(chi.eval(7), Some(RootOfUnity { k: 1, m: 2 }));
        assert_eq!(chi.eval(5), Some(RootOfUnity::one()));
        assert_eq!(chi.conductor(), 4);
        let chi = DirichletCharacter::decode(8, &[Pair(0, 1)]).unwrap();
        assert_eq!(chi.eval(5), Some(RootOfUnity { k: 1, m: 2 }));
        assert!(chi.is_even());
        assert_eq!(chi.conductor(), 8);
    }

    #[test]
    fn trivial_and_errors() {
        let t = DirichletCharacter::trivial(6);
        assert_eq!(t.eval(3), None);
        assert_eq!(t.eval(5), Some(RootOfUnity::one()));
        assert_eq!(DirichletCharacter::trivial(12).conductor(), 1);
        assert!(DirichletCharacter::decode(13, &[Single(12)]).is_err());
        assert!(DirichletCharacter::decode(15, &[Single(0)]).is_err());
        assert!(DirichletCharacter::decode(16, &[Single(0)]).is_err());
        assert!(DirichletCharacter::decode(16, &[Pair(2, 0)]).is_err());
    }

    #[test]
    fn parsing_round_trip() {
        for s in ["13 {2}", "21 {0,2}", "128 {{0,16}}", "40 {{0,0},2}", "48 {{1,0},1}"] {
            let chi: DirichletCharacter = s.parse().unwrap();
            assert_eq!(format!("{} {}", chi.modulus(), chi), s);
        }
    }
}
