//! Numerical bounds used to prune the search: Ogg-type point-count bounds,
//! gonality bounds, Castelnuovo–Severi, level predicates and genus
//! formulas for the curves `X_H` between `X₁(N)` and `X₀(N)`.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{q, Q};
use crate::arith::{divisors, euler_phi, factorize, gcd};
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::newform::RationalOrbitBasis;

/// Largest `g` with `(p−1)(g−1) < 2(p²+1)`.
pub fn ogg_bound_new_hyperelliptic(p: u64) -> u64 {
    // g − 1 < 2(p²+1)/(p−1)
    let num = 2 * (p * p + 1);
    let den = p - 1;
    (num - 1) / den + 1
}

/// `⌊(2/λ)·G + 1⌋`.
pub fn gonality_genus_bound(gonality: u64, lambda: &Q) -> Result<u64> {
    if *lambda <= Q::zero() {
        return Err(Error::Invalid(format!("λ = {lambda} must be positive")));
    }
    let v = q(2) / lambda * q(gonality as i64) + q(1);
    Ok(v.floor().to_integer().to_u64().unwrap_or(0))
}

/// Largest `g` with `g < G_ℚ (p²+1)/(p−1) + 1`.
pub fn ogg_bound_x0_quotient(p: u64, gonality_q: u64) -> u64 {
    let bound = Q::new((gonality_q * (p * p + 1)).into(), (p - 1).into()) + q(1);
    // strict inequality
    let f = bound.floor();
    let g = if f == bound { f - q(1) } else { f };
    g.to_integer().to_u64().unwrap_or(0)
}

/// Bound `p²` for the gonality of `X₀(N)` over `𝔽_p` when `p | N`.
pub fn trivial_char_gonality_bound(p: u64) -> u64 {
    p * p
}

/// `(d₁−1)(d₂−1) + d₁g₁ + d₂g₂`.
pub fn castelnuovo_severi(d1: u64, d2: u64, g1: u64, g2: u64) -> u64 {
    (d1 - 1) * (d2 - 1) + d1 * g1 + d2 * g2
}

/// `Sparse_m`: consecutive divisors satisfy `d_{i+1}/d_i > m`.
/// `Smooth_m`: every prime divisor is at most `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelPredicates {
    pub sparse: bool,
    pub smooth: bool,
}

pub fn level_predicates(n: u64, m: u64) -> LevelPredicates {
    let ds = divisors(n);
    let sparse = ds.windows(2).all(|w| w[1] > m * w[0]);
    let smooth = factorize(n).iter().all(|&(p, _)| p <= m);
    LevelPredicates { sparse, smooth }
}

/// What the rational `â_m` say about functions with a pole only at `∞`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GapReport {
    /// The `m` for which `â_m ∈ ℚ·1̂`, so a function of degree `m` exists.
    pub degrees: Vec<u64>,
    /// `m = 2` occurs: hyperelliptic with `∞` a Weierstrass point, or `g = 1`.
    pub hyperelliptic_wp_or_elliptic: bool,
    /// Both `m = 2` and `m = 3` occur, so the genus is 1.
    pub genus_one: bool,
}

pub fn rr_gap_predicates(b: &RationalOrbitBasis, max_m: u64) -> GapReport {
    let alg = b.algebra();
    let degrees: Vec<u64> = (2..=max_m.min(b.precision()))
        .filter(|&m| alg.as_rational(b.ahat(m)).is_some())
        .collect();
    let has = |m| degrees.contains(&m);
    GapReport {
        hyperelliptic_wp_or_elliptic: has(2),
        genus_one: has(2) && has(3),
        degrees,
    }
}

/// The possible genera of a new modular hyperelliptic curve whose diamond
/// group has the given order, depending on whether the hyperelliptic
/// involution lies in it. Returns an error for orders other than
/// 1, 2, 3, 4, 6; combinations that cannot occur give the empty set.
pub fn possible_genera(d_order: u64, w_in_d: bool) -> Result<Vec<u64>> {
    Ok(match (d_order, w_in_d) {
        (1, false) => (2..=10).collect(),
        (2, true) | (4, true) => vec![2, 4, 6, 8, 10, 12, 14, 16],
        (2, false) => vec![3, 7, 8, 9],
        (3, false) => vec![3, 5],
        (6, true) => vec![2, 12, 14],
        (1, true) | (3, true) | (4, false) | (6, false) => vec![],
        _ => return Err(Error::Invalid(format!("diamond group order {d_order} is not 1, 2, 3, 4 or 6"))),
    })
}

/// The congruence subgroup `Γ_H = {γ ∈ Γ₀(N) : d mod N ∈ H}` for a
/// subgroup `H` of `(ℤ/N)^×`.
#[derive(Clone, Debug)]
pub struct GammaH {
    n: u64,
    h: BTreeSet<u64>,
}

impl GammaH {
    pub fn new(n: u64, h: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("level must be positive".into()));
        }
        let mut set: BTreeSet<u64> = h.into_iter().map(|x| x % n).collect();
        set.insert(1 % n);
        // close under multiplication
        let mut queue: VecDeque<u64> = set.iter().copied().collect();
        let gens: Vec<u64> = set.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = x * g % n;
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        if set.iter().any(|&x| gcd(x, n) != 1 && n > 1) {
            return Err(Error::Invalid("H must consist of units".into()));
        }
        Ok(GammaH { n, h: set })
    }

    pub fn gamma0(n: u64) -> Self {
        let units = (0..n).filter(|&x| gcd(x, n) == 1);
        GammaH::new(n, units).unwrap()
    }

    pub fn gamma1(n: u64) -> Self {
        GammaH::new(n, [1]).unwrap()
    }

    /// `Γ_H` with `H = ker ε`.
    pub fn of_character(eps: &DirichletCharacter) -> Self {
        GammaH::new(eps.modulus(), eps.kernel()).unwrap()
    }

    fn pm_h(&self) -> BTreeSet<u64> {
        let n = self.n;
        self.h.iter().flat_map(|&x| [x, (n - x) % n]).collect()
    }

    /// Index of the image in `PSL₂(ℤ)`.
    pub fn index(&self) -> u64 {
        let psi: u64 = factorize(self.n).iter().map(|&(p, e)| p.pow(e - 1) * (p + 1)).product();
        psi * euler_phi(self.n) / self.pm_h().len() as u64
    }

    pub fn elliptic_points_2(&self) -> u64 {
        let n = self.n;
        if n % 4 == 0 || factorize(n).iter().any(|&(p, _)| p % 4 == 3) {
            return 0;
        }
        let sols = self.h.iter().filter(|&&x| (x * x + 1) % n == 0).count() as u64;
        euler_phi(n) / self.h.len() as u64 * sols
    }

    pub fn elliptic_points_3(&self) -> u64 {
        let n = self.n;
        if n % 9 == 0 || factorize(n).iter().any(|&(p, _)| p % 3 == 2) {
            return 0;
        }
        let sols = self.h.iter().filter(|&&x| (x * x + x + 1) % n == 0).count() as u64;
        euler_phi(n) / self.pm_h().len() as u64 * sols
    }

    /// Cusps, counted as orbits of `Γ_H` on primitive vectors `±(a, c)`
    /// modulo `N`.
    pub fn cusps(&self) -> u64 {
        let n = self.n;
        if n == 1 {
            return 1;
        }
        let pm: Vec<u64> = self.pm_h().into_iter().collect();
        let mut seen = vec![false; (n * n) as usize];
        let mut orbits = 0;
        for a in 0..n {
            for c in 0..n {
                if seen[(a * n + c) as usize] || gcd(gcd(a, c), n) != 1 {
                    continue;
                }
                orbits += 1;
                // orbit of (a, c) under (a, c) ↦ (h⁻¹a + bc, hc), h ∈ ±H
                let mut stack = vec![(a, c)];
                seen[(a * n + c) as usize] = true;
                while let Some((x, y)) = stack.pop() {
                    let mut push = |u: u64, v: u64| {
                        let k = (u * n + v) as usize;
                        if !seen[k] {
                            seen[k] = true;
                            stack.push((u, v));
                        }
                    };
                    push((x + y) % n, y);
                    for &h in &pm {
                        let hinv = inverse_mod(h, n);
                        push(x * hinv % n, y * h % n);
                    }
                }
            }
        }
        orbits
    }

    pub fn genus(&self) -> u64 {
        // 12(g − 1) = μ − 3ν₂ − 4ν₃ − 6ν∞
        let twelve = self.index() as i64
            - 3 * self.elliptic_points_2() as i64
            - 4 * self.elliptic_points_3() as i64
            - 6 * self.cusps() as i64;
        (twelve / 12 + 1) as u64
    }
}

fn inverse_mod(a: u64, n: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(n as i64));
    e.x.rem_euclid(n as i64) as u64
}

pub fn genus_x0(n: u64) -> u64 {
    // closed form for Γ₀(N); avoids the orbit enumeration
    let g = GammaH::gamma0(n);
    let cusps: u64 = divisors(n).iter().map(|&d| euler_phi(gcd(d, n / d))).sum();
    let twelve = g.index() as i64 - 3 * g.elliptic_points_2() as i64 - 4 * g.elliptic_points_3() as i64 - 6 * cusps as i64;
    (twelve / 12 + 1) as u64
}

pub fn genus_x1(n: u64) -> u64 {
    GammaH::gamma1(n).genus()
}

/// Genus of `X_H` with `H = ker ε`; this is `X₀(N)` for trivial `ε`.
pub fn genus_of_character(eps: &DirichletCharacter) -> u64 {
    if eps.is_trivial() {
        genus_x0(eps.modulus())
    } else {
        GammaH::of_character(eps).genus()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qf;

    #[test]
    fn small_genera() {
        assert_eq!(genus_x0(1), 0);
        assert_eq!(genus_x0(11), 1);
        assert_eq!(genus_x0(39), 3);
        assert_eq!(genus_x1(13), 2);
        assert_eq!(GammaH::gamma0(39).genus(), 3);
        for (n, g) in [(13, 2), (16, 2), (18, 2), (22, 6), (23, 12), (25, 12), (29, 22), (37, 40)] {
            assert_eq!(genus_x1(n), g, "X1({n})");
        }
        for n in 1..120 {
            assert_eq!(GammaH::gamma0(n).genus(), genus_x0(n), "X0({n})");
        }
    }

    #[test]
    fn gonality_constant() {
        assert_eq!(gonality_genus_bound(2, &qf(21, 100)).unwrap(), 20);
        assert_eq!(gonality_genus_bound(2, &qf(975, 4096)).unwrap(), 17);
    }
}
