//! Newforms of weight 2 as coefficient data: Euler-product extension,
//! local constraints at each prime, oldform degeneracy maps, rational
//! structure of Galois orbits and the table labeling scheme.

mod label;
mod nfqx;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{q, AlgebraElement, EtaleAlgebra, NumberField, QSeries, Q};
use crate::arith::{factorize, is_prime, num_divisors, primes_up_to, valuation};
use crate::dirichlet::{DirichletCharacter, RootOfUnity};
use crate::error::{Error, Result};

pub use label::{abelian_variety_name, label, letters};
pub use nfqx::{ingest_fixture, parse_nfqx, write_nfqx};

/// One Galois orbit of newforms of weight 2, as the coefficients
/// `a_n ∈ E_f` of a representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Newform {
    level: u64,
    character: DirichletCharacter,
    field: NumberField,
    /// Image in `E_f` of `exp(2πi/order)`; only needed for order > 2.
    zeta: Option<Vec<Q>>,
    /// `coeffs[n] = a_n` for `0 ≤ n ≤ precision` (`a_0 = 0`).
    coeffs: Vec<Vec<Q>>,
    eps: BTreeMap<u64, Vec<Q>>,
}

impl Newform {
    /// Build a newform from `a_p` data (and optionally other `a_n`), filling
    /// in every `a_n` with `n ≤ precision` through the Euler product.
    ///
    /// `given` must contain `a_1` and `a_p` for every prime `p ≤ precision`.
    /// Any other stored coefficient is checked against its Euler value.
    pub fn from_coefficients(
        character: DirichletCharacter,
        field: NumberField,
        zeta: Option<Vec<Q>>,
        eps: BTreeMap<u64, Vec<Q>>,
        given: &BTreeMap<u64, Vec<Q>>,
        precision: u64,
    ) -> Result<Self> {
        let d = field.degree();
        if let Some(z) = &zeta {
            if z.len() != d {
                return Err(Error::Invalid("zeta has the wrong number of coordinates".into()));
            }
        }
        if given.values().chain(eps.values()).any(|v| v.len() != d) {
            return Err(Error::Invalid(format!("coefficients must have {d} coordinates")));
        }
        match given.get(&1) {
            Some(a1) if field.as_rational(a1) == Some(Q::one()) => {}
            _ => return Err(Error::Constraint("a_1 must be 1".into())),
        }
        let level = character.modulus();
        let mut f = Newform {
            level,
            character,
            field,
            zeta,
            coeffs: vec![vec![Q::zero(); d], given[&1].clone()],
            eps,
        };
        for n in 2..=precision {
            if let Some(a) = given.get(&n) {
                if is_prime(n) {
                    f.coeffs.push(a.clone());
                    continue;
                }
            }
            let v = f.euler_value(n).ok_or_else(|| Error::Invalid(format!("a_p missing for a prime dividing {n}")))?;
            if let Some(a) = given.get(&n) {
                if *a != v {
                    return Err(Error::EulerInconsistency(n));
                }
            }
            f.coeffs.push(v);
        }
        Ok(f)
    }

    /// The value of `a_n` forced by the already known `a_m`, `m < n`, and
    /// the stored `a_p`. `None` when `n` is a prime not yet known.
    fn euler_value(&self, n: u64) -> Option<Vec<Q>> {
        let fac = factorize(n);
        let k = &self.field;
        if fac.len() > 1 {
            let (p, e) = fac[0];
            let pe = p.pow(e);
            return Some(k.mul(&self.coeffs[pe as usize], &self.coeffs[(n / pe) as usize]));
        }
        let (p, e) = fac[0];
        if e == 1 {
            return None;
        }
        // a_{p^e} = a_{p^{e-1}} a_p − p ε(p) a_{p^{e-2}}
        let a_p = &self.coeffs[p as usize];
        let prev = &self.coeffs[(n / p) as usize];
        let prev2 = &self.coeffs[(n / p / p) as usize];
        let eps = self.eps_value(p);
        let t = k.scale(&k.mul(&eps, prev2), &q(p as i64));
        Some(k.sub(&k.mul(prev, a_p), &t))
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.character
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// `[E_f : ℚ]`, the number of forms in the orbit.
    pub fn dimension(&self) -> usize {
        self.field.degree()
    }

    /// Largest `n` with `a_n` known.
    pub fn precision(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn zeta(&self) -> Option<&[Q]> {
        self.zeta.as_deref()
    }

    /// `a_n` in power-basis coordinates; panics beyond the precision.
    pub fn coeff(&self, n: u64) -> &[Q] {
        &self.coeffs[n as usize]
    }

    pub fn coeff_element(&self, n: u64) -> AlgebraElement {
        AlgebraElement::new(self.coeffs[n as usize].clone())
    }

    /// `Tr_{E_f/ℚ} a_n` for `1 ≤ n ≤ len`.
    pub fn trace_sequence(&self, len: u64) -> Vec<Q> {
        (1..=len.min(self.precision())).map(|n| self.field.trace(self.coeff(n))).collect()
    }

    /// Embed a root of unity of order dividing the character order into `E_f`.
    pub fn embed_root(&self, r: RootOfUnity) -> Option<Vec<Q>> {
        let k = &self.field;
        let r = r.reduced();
        match r.m {
            1 => Some(k.one()),
            2 => Some(k.from_q(q(-1))),
            m => {
                let z = self.zeta.as_ref()?;
                let order = self.character.order();
                let e = r.exponent_over(order).filter(|_| order % m == 0)?;
                Some(k.pow(z, e as u32))
            }
        }
    }

    /// `ε(p)` as an element of `E_f` (zero when `p | N`).
    pub fn eps_value(&self, p: u64) -> Vec<Q> {
        if let Some(v) = self.eps.get(&p) {
            return v.clone();
        }
        match self.character.eval(p) {
            None => self.field.zero(),
            Some(r) => self.embed_root(r).expect("character values embed into the coefficient field"),
        }
    }

    /// Supplied `ε(p)` values.
    pub fn eps_table(&self) -> &BTreeMap<u64, Vec<Q>> {
        &self.eps
    }

    /// Extend `a_n` up to `target` (a no-op when already known). Requires
    /// `a_p` for every prime `p ≤ target`, supplied in `primes`.
    pub fn extend_coefficients(&self, target: u64, primes: &BTreeMap<u64, Vec<Q>>) -> Result<Newform> {
        let mut given: BTreeMap<u64, Vec<Q>> = (1..=self.precision()).map(|n| (n, self.coeffs[n as usize].clone())).collect();
        for (&p, a) in primes {
            if p <= target {
                if let Some(old) = given.get(&p) {
                    if old != a {
                        return Err(Error::EulerInconsistency(p));
                    }
                }
                given.insert(p, a.clone());
            }
        }
        let prec = target.max(self.precision());
        Newform::from_coefficients(self.character.clone(), self.field.clone(), self.zeta.clone(), self.eps.clone(), &given, prec)
    }

    /// The same orbit with coefficients known only up to `n`.
    pub fn truncate(&self, n: u64) -> Newform {
        let mut f = self.clone();
        f.coeffs.truncate(n.min(self.precision()) as usize + 1);
        f
    }

    /// The rational series `Σ_n c_i(a_n) qⁿ` for coordinate `i`.
    pub fn coordinate_series(&self, i: usize) -> QSeries {
        let prec = self.precision() as i64 + 1;
        QSeries::from_fn(0, prec, |n| self.coeffs[n as usize][i].clone())
    }

    /// The q-expansion of a form with rational coefficients.
    pub fn rational_series(&self) -> Option<QSeries> {
        (self.dimension() == 1).then(|| self.coordinate_series(0))
    }

    /// Check the constraints at every prime `p ≤ precision` dividing `N`
    /// or carrying an `ε(p)` value.
    pub fn check_local_constraints(&self) -> ConstraintReport {
        let mut checks = Vec::new();
        let k = &self.field;
        let n = self.level;
        let order = self.character.order();
        for p in primes_up_to(self.precision()) {
            let vn = valuation(n, p);
            let eps = self.eps_value(p);
            // ε(p) = 0 ⟺ p | N, and supplied ε(p) matches the character
            let ok6 = if vn > 0 {
                k.is_zero(&eps)
            } else {
                let r = self.character.eval(p).unwrap();
                !k.is_zero(&eps)
                    && k.pow(&eps, order as u32) == k.one()
                    && self.embed_root(r).map_or(true, |v| v == eps)
            };
            checks.push(Check::new(p, Constraint::EpsSupport, ok6));
            let a = self.coeff(p);
            let vc = self.character.conductor_valuation(p);
            if vn >= 2 && vc < vn {
                checks.push(Check::new(p, Constraint::VanishingAp, k.is_zero(a)));
            } else if vn == 1 && vc == 0 {
                let r = self.character.without_prime(p).eval(p).unwrap();
                let status = match self.embed_root(r) {
                    Some(v) => Status::from(k.mul(a, a) == v),
                    None => Status::Unchecked,
                };
                checks.push(Check { p, constraint: Constraint::SquareAp, status });
            } else if vn >= 1 && vc == vn {
                checks.push(Check { p, constraint: Constraint::AbsAp, status: self.check_abs_sqrt_p(a, p) });
            } else if vn == 0 {
                // ā_p = ε̄(p) a_p
                let status = match (k.conjugate(a), k.conjugate(&eps)) {
                    (Some(ca), Some(ce)) => Status::from(ca == k.mul(&ce, a)),
                    _ if k.is_totally_real() => Status::from(k.mul(&eps, a) == *a),
                    _ => Status::Unchecked,
                };
                checks.push(Check { p, constraint: Constraint::Conjugation, status });
            }
        }
        ConstraintReport { checks }
    }

    fn check_abs_sqrt_p(&self, a: &[Q], p: u64) -> Status {
        let k = &self.field;
        let pq = q(p as i64);
        if let Some(ca) = k.conjugate(a) {
            return Status::from(k.mul(a, &ca) == k.from_q(pq));
        }
        if k.is_totally_real() {
            return Status::from(k.mul(a, a) == k.from_q(pq));
        }
        if k.archimedean_bound_check(a, &pq) {
            Status::Unchecked
        } else {
            Status::Fail
        }
    }

    /// Ramanujan bound `|σ(a_n)| ≤ σ₀(n)√n` at every prime power `n` up to
    /// the precision; returns the first failing `n`.
    pub fn check_ramanujan(&self) -> std::result::Result<(), u64> {
        let mut ns: Vec<u64> = Vec::new();
        for p in primes_up_to(self.precision()) {
            let mut pe = p;
            while pe <= self.precision() {
                ns.push(pe);
                pe *= p;
            }
        }
        ns.sort_unstable();
        let bad = ns.par_iter().find_first(|&&n| {
            let s = num_divisors(n) as i64;
            let bound = q(s * s) * q(n as i64);
            !self.field.archimedean_bound_check(self.coeff(n), &bound)
        });
        match bad {
            Some(&n) => Err(n),
            None => Ok(()),
        }
    }

    /// True iff `a_n = 0` for every even `n` up to the precision.
    pub fn has_vanishing_even_coefficients(&self) -> bool {
        (2..=self.precision()).step_by(2).all(|n| self.field.is_zero(self.coeff(n)))
    }

    /// Run every check made at ingestion.
    pub fn validate(&self) -> Result<()> {
        let report = self.check_local_constraints();
        if let Some(c) = report.failures().next() {
            return Err(Error::Constraint(format!("level {}: {c}", self.level)));
        }
        self.check_ramanujan()
            .map_err(|n| Error::Constraint(format!("level {}: Ramanujan bound fails at n = {n}", self.level)))
    }
}

/// The constraint families checked prime by prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// `ε(p) = 0` exactly when `p | N`.
    EpsSupport,
    /// `a_p = 0` when `v_p(cond ε) < v_p(N) ≥ 2`.
    VanishingAp,
    /// `a_p² = ε′(p)` when `v_p(cond ε) < v_p(N) = 1`.
    SquareAp,
    /// `|a_p| = √p` when `1 ≤ v_p(cond ε) = v_p(N)`.
    AbsAp,
    /// `ā_p = ε̄(p) a_p` for `p ∤ N`.
    Conjugation,
}

impl Constraint {
    /// Equation number of the constraint in the standard list.
    pub fn id(self) -> u8 {
        match self {
            Constraint::EpsSupport => 6,
            Constraint::VanishingAp => 7,
            Constraint::SquareAp => 8,
            Constraint::AbsAp => 9,
            Constraint::Conjugation => 11,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unchecked,
}

impl From<bool> for Status {
    fn from(b: bool) -> Self {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub p: u64,
    pub constraint: Constraint,
    pub status: Status,
}

impl Check {
    fn new(p: u64, constraint: Constraint, ok: bool) -> Self {
        Check { p, constraint, status: ok.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "constraint ({}) at p = {}: {:?}", self.constraint.id(), self.p, self.status)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintReport {
    pub checks: Vec<Check>,
}

impl ConstraintReport {
    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn unchecked(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Unchecked)
    }

    pub fn status(&self, p: u64, constraint: Constraint) -> Option<Status> {
        self.checks.iter().find(|c| c.p == p && c.constraint == constraint).map(|c| c.status)
    }
}

/// `f(q^d)`: coefficient of `qⁿ` is `a_{n/d}` when `d | n`, else 0.
pub fn oldform_expand(f: &QSeries, d: u32) -> QSeries {
    assert!(d >= 1, "degeneracy index must be positive");
    f.substitute_power(d)
}

/// The coefficients of several orbits gathered in the étale algebra
/// `𝔼 = ∏ E_{f_j}`: `â_n = (a_n^{(j)})_j`, together with the rational
/// series `g_i = Σ_n (â_n)_i qⁿ`.
#[derive(Clone, Debug)]
pub struct RationalOrbitBasis {
    algebra: EtaleAlgebra,
    ahat: Vec<AlgebraElement>,
    series: Vec<QSeries>,
}

impl RationalOrbitBasis {
    /// Combine orbits, truncating to the smallest precision among them.
    pub fn new(forms: &[&Newform]) -> Result<Self> {
        let algebra = EtaleAlgebra::new(forms.iter().map(|f| f.field().clone()).collect())?;
        let prec = forms.iter().map(|f| f.precision()).min().unwrap();
        let ahat: Vec<AlgebraElement> = (0..=prec)
            .map(|n| AlgebraElement::new(forms.iter().flat_map(|f| f.coeff(n).iter().cloned()).collect()))
            .collect();
        let series = (0..algebra.total_degree())
            .map(|i| QSeries::from_fn(0, prec as i64 + 1, |n| ahat[n as usize].coords[i].clone()))
            .collect();
        Ok(RationalOrbitBasis { algebra, ahat, series })
    }

    pub fn algebra(&self) -> &EtaleAlgebra {
        &self.algebra
    }

    pub fn ahat(&self, n: u64) -> &AlgebraElement {
        &self.ahat[n as usize]
    }

    pub fn precision(&self) -> u64 {
        self.ahat.len() as u64 - 1
    }

    /// The `total_degree` rational series spanning the same ℚ-space as all
    /// Galois conjugates of the orbits.
    pub fn series_over_q(&self) -> &[QSeries] {
        &self.series
    }

    pub fn dimension(&self) -> usize {
        self.algebra.total_degree()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_form(level: u64, ap: &[(u64, i64)], prec: u64) -> Result<Newform> {
        let mut given: BTreeMap<u64, Vec<Q>> = ap.iter().map(|&(p, a)| (p, vec![q(a)])).collect();
        given.insert(1, vec![q(1)]);
        Newform::from_coefficients(DirichletCharacter::trivial(level), NumberField::rationals(), None, BTreeMap::new(), &given, prec)
    }

    #[test]
    fn recurrence_and_multiplicativity() {
        // the curve 11a: a_2 = -2, a_3 = -1, a_5 = 1, a_7 = -2
        let f = rational_form(11, &[(2, -2), (3, -1), (5, 1), (7, -2)], 8).unwrap();
        assert_eq!(f.coeff(4), &[q(2)]);
        assert_eq!(f.coeff(6), &[q(2)]);
        assert_eq!(f.coeff(8), &[q(-2) * q(2) - q(2) * q(-2)]);
    }

    #[test]
    fn euler_inconsistency_is_reported() {
        let mut given: BTreeMap<u64, Vec<Q>> = [(1, 1), (2, -2), (3, -1), (5, 1), (6, 3)].iter().map(|&(n, a)| (n, vec![q(a)])).collect();
        given.insert(1, vec![q(1)]);
        let r = Newform::from_coefficients(DirichletCharacter::trivial(11), NumberField::rationals(), None, BTreeMap::new(), &given, 6);
        assert_eq!(r, Err(Error::EulerInconsistency(6)));
    }

    #[test]
    fn vanishing_even_coefficients() {
        let f = rational_form(4 * 7, &[(2, 0), (3, 1), (5, 2), (7, 1), (11, -3), (13, 1)], 13).unwrap();
        assert!(f.has_vanishing_even_coefficients());
    }

    #[test]
    fn constraint_eight_detects_bad_sign() {
        let f = rational_form(2 * 7, &[(2, 3), (3, 0), (5, 0), (7, 1)], 7).unwrap();
        let r = f.check_local_constraints();
        assert_eq!(r.status(2, Constraint::SquareAp), Some(Status::Fail));
        let f = rational_form(4 * 7, &[(2, 0), (3, 0), (5, 0), (7, 1)], 7).unwrap();
        assert_eq!(f.check_local_constraints().status(2, Constraint::VanishingAp), Some(Status::Pass));
    }

    #[test]
    fn degeneracy_map() {
        let f = QSeries::from_i64(1, &[1, 3], 3);
        assert_eq!(oldform_expand(&f, 1), f);
        assert_eq!(oldform_expand(&f, 2), QSeries::from_i64(2, &[1, 0, 3], 6));
    }
}
