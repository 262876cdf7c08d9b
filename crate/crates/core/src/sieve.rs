//! Exhaustive search for genus-3 hyperelliptic curves `X` with trivial
//! character, `ℚ`-simple jacobian and `a₂ ≠ 0`, by enumerating bounded
//! coefficient vectors `(a₂, a₃, a₅, …)` in totally real cubic fields and
//! rejecting them as soon as the known coefficients rule out a
//! hyperelliptic model.

use itertools::Itertools;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{isolate_real_roots, q, NumberField, QPoly, QSeries, RootInterval, Q};
use crate::arith::{factorize, primes_up_to};
use crate::criterion::CurveRecord;
use crate::error::{Error, Result};
use crate::recover::HyperellipticModel;

/// A monic irreducible integer cubic whose roots are real and bounded by
/// `2√p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicCandidate {
    pub h: QPoly,
    pub roots: Vec<RootInterval>,
}

/// All monic irreducible cubics in `ℤ[x]` with three real roots of absolute
/// value at most `2√p`, in lexicographic order of `(e₁, e₂, e₃)`.
pub fn enumerate_bounded_cubics(p: u64) -> Vec<CubicCandidate> {
    bounded_cubic_coeffs(p)
        .into_iter()
        .map(|c| {
            let h = QPoly::from_i64(&c);
            CubicCandidate { roots: isolate_real_roots(&h), h }
        })
        .collect()
}

/// The `a₂` candidates: bounded cubics for `p = 2`.
pub fn enumerate_a2_cubics() -> Vec<CubicCandidate> {
    enumerate_bounded_cubics(2)
}

/// Coefficients `[c₀, c₁, c₂, 1]` of the bounded cubics.
fn bounded_cubic_coeffs(p: u64) -> Vec<[i64; 4]> {
    let bound_sq = 4 * p as i64;
    let b = (bound_sq as f64).sqrt();
    let e1_max = (3.0 * b).floor() as i64;
    let mut out = Vec::new();
    // x³ − e₁x² + e₂x − e₃
    for e1 in -e1_max..=e1_max {
        // Σr² = e₁² − 2e₂ lies in [e₁²/3, 3B²]
        let e2_lo = (e1 * e1 - 3 * bound_sq).div_euclid(2);
        let e2_hi = (e1 * e1).div_euclid(3);
        for e2 in e2_lo..=e2_hi {
            // the cubic is ≤ 0 at −B and ≥ 0 at B
            let at = |x: f64| x * x * x - e1 as f64 * x * x + e2 as f64 * x;
            let e3_lo = (at(-b) - 1.0).floor() as i64;
            let e3_hi = (at(b) + 1.0).ceil() as i64;
            for e3 in e3_lo..=e3_hi {
                let c = [-e3, e2, -e1, 1];
                if is_bounded_irreducible(c, bound_sq) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Exact test in integer arithmetic: no integer root, positive
/// discriminant (three distinct real roots), and every root squared at
/// most `bound_sq`.
fn is_bounded_irreducible(c: [i64; 4], bound_sq: i64) -> bool {
    let [c0, c1, c2, _] = c.map(i128::from);
    if c0 == 0 || cubic_discriminant(c2, c1, c0) <= 0 {
        return false;
    }
    // the squares of the roots are the roots of S(w) = w(w + c₁)² − (c₂w + c₀)²;
    // S is real-rooted, so its roots are ≤ B² iff S(w + B²) has no sign
    // change among its coefficients
    let s = [-c0 * c0, c1 * c1 - 2 * c2 * c0, 2 * c1 - c2 * c2, 1];
    if shift(&s, bound_sq as i128).iter().any(|&x| x < 0) {
        return false;
    }
    // an integer root divides c₀ and lies in [−B, B]
    let has_root = |r: i128| r * r * r + c2 * r * r + c1 * r + c0 == 0;
    !(1..=c0.abs()).take_while(|d| d * d <= bound_sq as i128).any(|d| c0 % d == 0 && (has_root(d) || has_root(-d)))
}

fn cubic_discriminant(a: i128, b: i128, c: i128) -> i128 {
    a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
}

/// Coefficients of `s(w + t)`.
fn shift(s: &[i128; 4], t: i128) -> [i128; 4] {
    let mut out = [0i128; 4];
    let binom = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 2, 1, 0], [1, 3, 3, 1]];
    for (k, &sk) in s.iter().enumerate() {
        for j in 0..=k {
            out[j] += sk * binom[k][j] * t.pow((k - j) as u32);
        }
    }
    out
}

/// All algebraic integers of the totally real cubic field `e` whose
/// conjugates are bounded by `2√p`, as power-basis coordinates, in a
/// deterministic order.
pub fn enumerate_ap_in_field(e: &NumberField, p: u64) -> Vec<Vec<Q>> {
    elements_with_charpolys(e, p, &bounded_cubic_coeffs(p))
}

fn elements_with_charpolys(e: &NumberField, p: u64, cubics: &[[i64; 4]]) -> Vec<Vec<Q>> {
    let bound = (4.0 * p as f64).sqrt();
    let mut out: Vec<Vec<Q>> = (-(bound.floor() as i64)..=bound.floor() as i64).map(|a| e.from_q(q(a))).collect();
    let m = e.min_poly();
    let int = |i: usize| m.coeff(i).to_integer().to_i128().expect("integral defining polynomial");
    let disc_e = cubic_discriminant(int(2), int(1), int(0));
    let denom = square_part(disc_e);
    let theta = e.real_embeddings_f64(&e.gen());
    for c in cubics {
        // both discriminants differ by the square of an index
        let disc_c = cubic_discriminant(c[2] as i128, c[1] as i128, c[0] as i128);
        if !is_square(disc_c * disc_e) {
            continue;
        }
        let r = f64_roots(c);
        let h = QPoly::from_i64(c);
        for perm in (0..3).permutations(3) {
            let target: Vec<f64> = perm.iter().map(|&i| r[i]).collect();
            let Some(x) = solve_vandermonde(&theta, &target) else { continue };
            let a: Vec<Q> = x.iter().map(|v| Q::new(((v * denom as f64).round() as i64).into(), denom.into())).collect();
            if e.charpoly(&a) == h && !out.contains(&a) {
                out.push(a);
            }
        }
    }
    out
}

/// Largest `k` with `k² | d`, for a nonzero integer `d`.
fn square_part(d: i128) -> i64 {
    let n = u64::try_from(d.abs()).expect("small discriminant");
    factorize(n).iter().map(|&(p, e)| (p as i64).pow(e / 2)).product()
}

fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i128;
    (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
}

/// Roots of a real-rooted monic cubic `[c₀, c₁, c₂, 1]` in floating point,
/// by the trigonometric formula polished with Newton steps.
fn f64_roots(c: &[i64; 4]) -> Vec<f64> {
    let [c0, c1, c2, _] = c.map(|x| x as f64);
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let qq = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let m = 2.0 * (-p / 3.0).sqrt();
    let phi = (3.0 * qq / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
    (0..3)
        .map(|k| {
            let mut x = m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift;
            for _ in 0..3 {
                let f = ((x + c2) * x + c1) * x + c0;
                let df = (3.0 * x + 2.0 * c2) * x + c1;
                if df != 0.0 {
                    x -= f / df;
                }
            }
            x
        })
        .collect()
}

fn solve_vandermonde(theta: &[f64], target: &[f64]) -> Option<Vec<f64>> {
    let mut m: Vec<[f64; 4]> = theta.iter().zip(target).map(|(&t, &y)| [1.0, t, t * t, y]).collect();
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        m.swap(col, piv);
        if m[col][col].abs() < 1e-12 {
            return None;
        }
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    Some((0..3).map(|i| m[i][3] / m[i][i]).collect())
}

/// Point counts of the curve over `𝔽₂` and `𝔽₄` read off from the
/// characteristic polynomial of Frobenius `∏(x² − a₂⁽ⁱ⁾x + 2)`, and the
/// conditions they must satisfy.
pub fn frobenius_counts(h2: &QPoly) -> (i64, i64) {
    let s1 = -h2.coeff(2);
    let s2 = &s1 * &s1 - q(2) * h2.coeff(1);
    let n1 = q(3) - s1;
    let n2 = q(17) - s2;
    (n1.to_integer().to_i64().unwrap(), n2.to_integer().to_i64().unwrap())
}

/// Keep `H₂` iff the point counts over `𝔽₂` and `𝔽₄` are possible for a
/// hyperelliptic genus-3 modular curve with good reduction at 2.
pub fn frobenius_filter(h2: &CubicCandidate) -> bool {
    let (n1, n2) = frobenius_counts(&h2.h);
    n1 >= 1 && n2 > 2 && n1 <= 6 && n2 <= 10 && n1 <= n2
}

/// Search parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Coefficients `a_n` are enumerated for `n ≤ horizon`.
    pub horizon: u64,
    pub frobenius_filter: bool,
    /// Reject partial vectors as soon as `h₁′` leaves the span of the
    /// `h`-basis.
    pub span_filter: bool,
    /// Only the branch `ε(3) = 1`; otherwise `3 | N` is explored as well.
    pub pin_eps3: bool,
    /// Stop after this many `a₂` cubics (after the Frobenius filter).
    pub limit: Option<usize>,
    /// Restrict `H₂` to these polynomials.
    pub fields: Option<Vec<QPoly>>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { horizon: 11, frobenius_filter: true, span_filter: true, pin_eps3: true, limit: None, fields: None }
    }
}

/// Candidate counts after each stage.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageCounts {
    pub cubics: usize,
    pub after_frobenius: usize,
    /// Partial vectors tested against the span condition.
    pub explored: usize,
    /// Full coefficient vectors whose `h₁′` lies in the span.
    pub after_span: usize,
    /// Full vectors giving a squarefree degree-8 equation.
    pub after_model: usize,
    /// Distinct curves.
    pub emitted: usize,
}

/// `a_p` for the primes `3 ≤ p ≤ horizon`, as coordinates in the power
/// basis of `a₂`.
pub type PrimeCoefficients = Vec<(u64, Vec<Q>)>;

/// A curve found by the sieve with every coefficient vector leading to it.
/// Several vectors can share a curve because the horizon does not pin down
/// every coordinate of the last `a_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveHit {
    pub h2: QPoly,
    pub eps3: bool,
    pub tuples: Vec<PrimeCoefficients>,
    pub record: CurveRecord,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SieveReport {
    pub hits: Vec<SieveHit>,
    pub counts: StageCounts,
}

impl SieveReport {
    pub fn records(&self) -> Vec<&CurveRecord> {
        self.hits.iter().map(|h| &h.record).collect()
    }
}

/// The largest horizon for which `a_n` is determined by the `a_p` alone;
/// from 25 on, `a_{25}` would need the unknown `ε(5)`.
const MAX_HORIZON: u64 = 24;

pub fn run_sieve_genus3_simple(config: &SieveConfig) -> Result<SieveReport> {
    check_horizon(config.horizon)?;
    let primes: Vec<u64> = primes_up_to(config.horizon).into_iter().filter(|&p| p > 2).collect();
    let cubics = enumerate_a2_cubics();
    let bounded: Vec<Vec<[i64; 4]>> = primes.iter().map(|&p| bounded_cubic_coeffs(p)).collect();
    let mut counts = StageCounts { cubics: cubics.len(), ..Default::default() };
    let mut kept: Vec<&CubicCandidate> = cubics
        .iter()
        .filter(|c| config.fields.as_ref().is_none_or(|f| f.contains(&c.h)))
        .filter(|c| !config.frobenius_filter || frobenius_filter(c))
        .collect();
    counts.after_frobenius = kept.len();
    if let Some(n) = config.limit {
        kept.truncate(n);
    }
    let per_field: Vec<(Vec<SieveHit>, StageCounts)> = kept
        .par_iter()
        .map(|c| {
            let e = NumberField::new_unchecked(c.h.clone());
            let lists: Vec<Vec<Vec<Q>>> =
                primes.iter().zip(&bounded).map(|(&p, cubics)| elements_with_charpolys(&e, p, cubics)).collect();
            let mut search =
                FieldSearch { e: &e, config, primes: &primes, lists: &lists, hits: Vec::new(), counts: StageCounts::default() };
            for eps3 in [true, false].into_iter().take(if config.pin_eps3 { 1 } else { 2 }) {
                search.run(eps3);
            }
            (search.hits, search.counts)
        })
        .collect();
    let mut hits = Vec::new();
    for (h, c) in per_field {
        hits.extend(h);
        counts.explored += c.explored;
        counts.after_span += c.after_span;
        counts.after_model += c.after_model;
    }
    // fields are already in lexicographic order and each search is
    // deterministic, so the merged list is too
    for (i, hit) in hits.iter_mut().enumerate() {
        hit.record.label = format!("S_{{{}}}", i + 1);
    }
    counts.emitted = hits.len();
    Ok(SieveReport { hits, counts })
}

fn check_horizon(m: u64) -> Result<()> {
    if m < 11 {
        return Err(Error::Invalid(format!("insufficient horizon {m}: a degree-8 equation needs M ≥ 11")));
    }
    if m > MAX_HORIZON {
        return Err(Error::Invalid(format!("horizon {m} exceeds {MAX_HORIZON}")));
    }
    Ok(())
}

/// Run steps 3 to 5 on one fully specified coefficient vector. `ap` lists
/// `a_p` for every prime `3 ≤ p ≤ horizon` in increasing order.
pub fn evaluate_tuple(h2: &QPoly, ap: &[Vec<Q>], eps3: bool, config: &SieveConfig) -> Result<Option<CurveRecord>> {
    check_horizon(config.horizon)?;
    let e = NumberField::new(h2.clone())?;
    let primes: Vec<u64> = primes_up_to(config.horizon).into_iter().filter(|&p| p > 2).collect();
    if ap.len() != primes.len() {
        return Err(Error::Invalid(format!("expected {} prime coefficients", primes.len())));
    }
    let mut coeffs = Coefficients::new(&e, config.horizon, eps3);
    for (&p, a) in primes.iter().zip(ap) {
        coeffs.assign(p, a.clone());
    }
    let Some(basis) = coeffs.dual_basis() else { return Ok(None) };
    if config.span_filter && !span_condition(&coeffs, &basis, config.horizon) {
        return Ok(None);
    }
    Ok(final_model(&coeffs, &basis, config.horizon))
}

struct FieldSearch<'a> {
    e: &'a NumberField,
    config: &'a SieveConfig,
    primes: &'a [u64],
    lists: &'a [Vec<Vec<Q>>],
    hits: Vec<SieveHit>,
    counts: StageCounts,
}

impl FieldSearch<'_> {
    fn run(&mut self, eps3: bool) {
        let m = self.config.horizon;
        let mut coeffs = Coefficients::new(self.e, m, eps3);
        for a3 in &self.lists[0] {
            // 3 | N forces a₃ ∈ {0, ±1}
            if !eps3 && self.e.as_rational(a3).is_none_or(|r| r.abs() > q(1)) {
                continue;
            }
            // ℚ(a₃) = ℚ(a₂), and 1, a₂, a₃ independent so that the cusp is
            // not a Weierstrass point
            if a3[2].is_zero() {
                continue;
            }
            coeffs.assign(3, a3.clone());
            let basis = coeffs.dual_basis().expect("independent");
            self.branch(&mut coeffs, &basis, 1);
            coeffs.clear(3);
        }
    }

    fn branch(&mut self, coeffs: &mut Coefficients, basis: &DualBasis, i: usize) {
        let m = self.config.horizon;
        if i == self.primes.len() {
            self.counts.after_span += 1;
            if let Some(record) = final_model(coeffs, basis, m) {
                self.counts.after_model += 1;
                let ap = self.primes.iter().map(|&p| (p, coeffs.a[p as usize].clone().unwrap())).collect();
                match self.hits.iter_mut().find(|h| h.eps3 == coeffs.eps3 && h.record.model == record.model) {
                    Some(h) => h.tuples.push(ap),
                    None => self.hits.push(SieveHit {
                        h2: self.e.min_poly().clone(),
                        eps3: coeffs.eps3,
                        tuples: vec![ap],
                        record,
                    }),
                }
            }
            return;
        }
        let p = self.primes[i];
        for a in &self.lists[i] {
            self.counts.explored += 1;
            coeffs.assign(p, a.clone());
            let known = coeffs.known_prefix();
            if !self.config.span_filter || span_condition(coeffs, basis, known) {
                self.branch(coeffs, basis, i + 1);
            }
            coeffs.clear(p);
        }
    }
}

/// `a_1 … a_M` as field elements, with `a_n` filled in whenever every
/// prime factor of `n` has been assigned.
struct Coefficients<'a> {
    e: &'a NumberField,
    m: u64,
    eps3: bool,
    /// Assigned prime coefficients, indexed by `p`.
    a: Vec<Option<Vec<Q>>>,
    /// All determined coefficients, indexed by `n`.
    all: Vec<Option<Vec<Q>>>,
}

impl<'a> Coefficients<'a> {
    fn new(e: &'a NumberField, m: u64, eps3: bool) -> Self {
        let mut c = Coefficients { e, m, eps3, a: vec![None; m as usize + 1], all: vec![None; m as usize + 1] };
        c.a[2] = Some(e.gen());
        c.recompute();
        c
    }

    fn assign(&mut self, p: u64, a: Vec<Q>) {
        self.a[p as usize] = Some(a);
        self.recompute();
    }

    fn clear(&mut self, p: u64) {
        self.a[p as usize] = None;
        self.recompute();
    }

    fn recompute(&mut self) {
        let e = self.e;
        self.all[1] = Some(e.one());
        for n in 2..=self.m {
            let f = factorize(n);
            let mut acc = Some(e.one());
            for &(p, k) in &f {
                acc = match (acc, self.prime_power(p, k)) {
                    (Some(x), Some(y)) => Some(e.mul(&x, &y)),
                    _ => None,
                };
            }
            self.all[n as usize] = acc;
        }
    }

    /// `a_{p^k}` from `a_{p^{k+1}} = a_p a_{p^k} − ε(p) p a_{p^{k−1}}`.
    fn prime_power(&self, p: u64, k: u32) -> Option<Vec<Q>> {
        let e = self.e;
        let ap = self.a[p as usize].as_ref()?;
        let eps = match p {
            2 => true,
            3 => self.eps3,
            // p² > M, so only k = 1 occurs
            _ => true,
        };
        let (mut prev, mut cur) = (e.one(), ap.clone());
        for _ in 1..k {
            let mut next = e.mul(ap, &cur);
            if eps {
                next = e.sub(&next, &e.scale(&prev, &q(p as i64)));
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Some(cur)
    }

    fn known_prefix(&self) -> u64 {
        (1..=self.m).take_while(|&n| self.all[n as usize].is_some()).last().unwrap_or(0)
    }

    /// Coordinates of `a_n` in the basis `1, a₂, a₃`, as functionals.
    fn dual_basis(&self) -> Option<DualBasis> {
        let a3 = self.a[3].as_ref()?;
        if a3[2].is_zero() {
            return None;
        }
        Some(DualBasis { u: a3.clone() })
    }

    /// `h₁, h₂, h₃` through `q^n`, i.e. with precision `n + 1`.
    fn h_basis(&self, basis: &DualBasis, n: u64) -> [QSeries; 3] {
        let coords: Vec<[Q; 3]> = (1..=n).map(|k| basis.coords(self.all[k as usize].as_ref().unwrap())).collect();
        [0, 1, 2].map(|i| QSeries::from_fn(0, n as i64 + 1, |k| if k == 0 { Q::zero() } else { coords[k as usize - 1][i].clone() }))
    }
}

struct DualBasis {
    u: Vec<Q>,
}

impl DualBasis {
    fn coords(&self, a: &[Q]) -> [Q; 3] {
        let x2 = &a[2] / &self.u[2];
        let x1 = &a[1] - &x2 * &self.u[1];
        let x0 = &a[0] - &x2 * &self.u[0];
        [x0, x1, x2]
    }
}

/// `h₁′ = (h₂/h₃)² h₃` and the combination `h₁ + αh₂ + βh₃` agreeing with
/// it through `q³`.
fn h1_prime(h: &[QSeries; 3]) -> Option<(QSeries, QSeries)> {
    let xt = h[1].div(&h[2]).ok()?;
    let h1p = xt.mul(&xt).mul(&h[2]);
    let span = h[0].add(&h[1].scale(&h1p.coeff(2))).add(&h[2].scale(&h1p.coeff(3)));
    Some((h1p, span))
}

/// `h₁′` lies in the span of the `h`-basis at every coefficient that
/// `a_1 … a_n` determine.
fn span_condition(c: &Coefficients, basis: &DualBasis, n: u64) -> bool {
    if n < 4 {
        return true;
    }
    let h = c.h_basis(basis, n);
    let Some((h1p, span)) = h1_prime(&h) else { return false };
    h1p.sub(&span).is_zero()
}

/// Step 5: `x = h₂/h₁′`, `y = (q dx/dq)/h₁′` and `y² = F(x)` with `F`
/// squarefree of degree 8.
fn final_model(c: &Coefficients, basis: &DualBasis, m: u64) -> Option<CurveRecord> {
    let h = c.h_basis(basis, m);
    let (_, h1) = h1_prime(&h)?;
    let x = h[1].div(&h1).ok()?;
    let y = x.qddq().div(&h1).ok()?;
    let mut rem = y.mul(&y);
    let lead = x.leading_coeff()?.clone();
    let mut f = Vec::with_capacity(9);
    let mut xk = QSeries::one(x.prec());
    for k in 0..=8 {
        let fk = rem.coeff(k) / num_traits::pow(lead.clone(), k as usize);
        rem = rem.sub(&xk.scale(&fk));
        f.push(fk);
        xk = xk.mul(&x);
    }
    if !rem.is_zero() {
        return None;
    }
    let f = QPoly::new(f);
    if f.degree() != Some(8) || !f.is_squarefree() {
        return None;
    }
    let model = HyperellipticModel::new(f).ok()?;
    Some(CurveRecord { label: String::new(), model, level: 0, orbits: Vec::new(), x: Some(x) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_counts_examples() {
        // s₁ = 3
        assert_eq!(frobenius_counts(&QPoly::from_i64(&[1, 0, -3, 1])).0, 0);
        // s₁ = 0, s₂ = 6
        assert_eq!(frobenius_counts(&QPoly::from_i64(&[-1, -3, 0, 1])), (3, 11));
    }

    #[test]
    fn horizon_checks() {
        assert!(run_sieve_genus3_simple(&SieveConfig { horizon: 10, ..Default::default() }).is_err());
        assert!(check_horizon(25).is_err());
    }
}
