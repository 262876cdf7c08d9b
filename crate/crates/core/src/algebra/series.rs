use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::QPoly;
use super::rational::{q, sqrt_q, Q};
use crate::error::{Error, Result};

/// Truncated Laurent series in q over ℚ, known exactly for exponents below
/// `prec`.
///
/// `coeffs[i]` is the coefficient of `q^(start + i)`; the first stored
/// coefficient is nonzero unless the series is zero to its precision, in
/// which case nothing is stored and `start == prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    start: i64,
    coeffs: Vec<Q>,
    prec: i64,
}

impl QSeries {
    /// Series `Σ coeffs[i] q^(start+i) + O(q^prec)`; coefficients at or
    /// beyond `prec` are dropped, missing ones below it are zero.
    pub fn new(start: i64, mut coeffs: Vec<Q>, prec: i64) -> Self {
        let len = (prec - start).max(0) as usize;
        coeffs.resize(len, Q::zero());
        let mut s = QSeries { start, coeffs, prec };
        s.normalize();
        s
    }

    pub fn from_i64(start: i64, c: &[i64], prec: i64) -> Self {
        Self::new(start, c.iter().map(|&x| q(x)).collect(), prec)
    }

    pub fn zero(prec: i64) -> Self {
        QSeries { start: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(a: Q, prec: i64) -> Self {
        Self::new(0, vec![a], prec)
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(Q::one(), prec)
    }

    /// `a q^k + O(q^prec)`.
    pub fn monomial(k: i64, a: Q, prec: i64) -> Self {
        if k >= prec {
            return Self::zero(prec);
        }
        Self::new(k, vec![a], prec)
    }

    /// Build from a function `n ↦ coefficient` on `[start, prec)`.
    pub fn from_fn(start: i64, prec: i64, f: impl FnMut(i64) -> Q) -> Self {
        Self::new(start, (start..prec).map(f).collect(), prec)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.start = self.prec;
            }
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.start += k as i64;
            }
        }
    }

    /// Exponent of the first nonzero coefficient, `None` if the series is
    /// zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Valuation, or the precision for a series indistinguishable from 0.
    pub fn val_or_prec(&self) -> i64 {
        self.start
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of known coefficients past the valuation.
    pub fn relative_prec(&self) -> i64 {
        self.prec - self.start
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^n`; requires `n < prec`.
    pub fn coeff(&self, n: i64) -> Q {
        assert!(n < self.prec, "coefficient q^{n} beyond precision {}", self.prec);
        if n < self.start {
            Q::zero()
        } else {
            self.coeffs[(n - self.start) as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> Option<&Q> {
        self.coeffs.first()
    }

    /// Iterator over `(exponent, coefficient)` for the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Lower the precision to `p` (no-op if `p ≥ prec`).
    pub fn truncate(&self, p: i64) -> Self {
        if p >= self.prec {
            return self.clone();
        }
        let keep = (p - self.start).max(0) as usize;
        Self::new(self.start, self.coeffs[..keep.min(self.coeffs.len())].to_vec(), p)
    }

    pub fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Self::zero(self.prec);
        }
        QSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            prec: self.prec,
        }
    }

    /// Multiply by `q^k` exactly.
    pub fn shift(&self, k: i64) -> Self {
        QSeries { start: self.start + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        let prec = self.prec.min(o.prec);
        let start = self.start.min(o.start).min(prec);
        let mut c = vec![Q::zero(); (prec - start) as usize];
        for (n, a) in self.terms() {
            if n < prec {
                c[(n - start) as usize] += a;
            }
        }
        for (n, b) in o.terms() {
            if n < prec {
                if negate {
                    c[(n - start) as usize] -= b;
                } else {
                    c[(n - start) as usize] += b;
                }
            }
        }
        Self::new(start, c, prec)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.prec + o.start).min(o.prec + self.start);
        let start = self.start + o.start;
        if start >= prec {
            return Self::zero(prec);
        }
        let len = (prec - start) as usize;
        let mut c = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::new(start, c, prec)
    }

    /// Quotient of Laurent series; valuations subtract.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let vb = o.valuation().ok_or(Error::ZeroDivisor(o.prec))?;
        let va = self.start;
        let prec = (self.prec - vb).min(o.prec + va - 2 * vb);
        let start = va - vb;
        if start >= prec {
            return Ok(Self::zero(prec));
        }
        let len = (prec - start) as usize;
        let inv_lead = o.coeffs[0].recip();
        let mut c: Vec<Q> = Vec::with_capacity(len);
        for k in 0..len {
            let mut s = self.coeffs.get(k).cloned().unwrap_or_else(Q::zero);
            for j in 1..=k.min(o.coeffs.len() - 1) {
                let b = &o.coeffs[j];
                if !b.is_zero() && !c[k - j].is_zero() {
                    s -= b * &c[k - j];
                }
            }
            c.push(s * &inv_lead);
        }
        Ok(Self::new(start, c, prec))
    }

    pub fn inv(&self) -> Result<Self> {
        self.valuation().ok_or(Error::ZeroDivisor(self.prec))?;
        Self::one(self.relative_prec()).div(self)
    }

    /// Integer power, negative exponents via inversion.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let v = self.start;
        let rel = self.relative_prec();
        let mut acc = Self::one(rel.max(1));
        let mut base = self.shift(-v);
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.truncate(rel).shift(v * k))
    }

    /// `q · d/dq`; precision preserved.
    pub fn qddq(&self) -> Self {
        QSeries::from_fn(self.start, self.prec, |n| self.coeff(n) * q(n))
    }

    /// `d/dq`; precision drops by one.
    pub fn ddq(&self) -> Self {
        QSeries::from_fn(self.start - 1, self.prec - 1, |n| self.coeff(n + 1) * q(n + 1))
    }

    /// Formal antiderivative with zero constant term; fails on a `q^-1`
    /// term.
    pub fn integral(&self) -> Result<Self> {
        if self.start <= -1 && -1 < self.prec && !self.coeff(-1).is_zero() {
            return Err(Error::Invalid("residue term has no antiderivative".into()));
        }
        Ok(QSeries::from_fn(self.start + 1, self.prec + 1, |n| {
            if n == 0 {
                Q::zero()
            } else {
                self.coeff(n - 1) / q(n)
            }
        }))
    }

    /// Square root by the coefficient recurrence (Hensel lifting in the
    /// series ring). Requires even valuation and a square leading
    /// coefficient.
    pub fn sqrt(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroDivisor(self.prec))?;
        if v % 2 != 0 {
            return Err(Error::Invalid("odd valuation has no square root".into()));
        }
        let s0 = sqrt_q(&self.coeffs[0])
            .ok_or_else(|| Error::BadPoint("leading coefficient is not a square".into()))?;
        let n = self.coeffs.len();
        let two_s0 = &s0 * q(2);
        let mut s: Vec<Q> = vec![s0];
        for k in 1..n {
            let mut t = self.coeffs[k].clone();
            for j in 1..k {
                t -= &s[j] * &s[k - j];
            }
            s.push(t / &two_s0);
        }
        Ok(Self::new(v / 2, s, v / 2 + n as i64))
    }

    /// `n`-th root of a series whose valuation is divisible by `n` and
    /// whose leading coefficient is a perfect `n`-th power.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n == 2 {
            return self.sqrt();
        }
        let v = self.valuation().ok_or(Error::ZeroDivisor(self.prec))?;
        if v % n as i64 != 0 {
            return Err(Error::Invalid("valuation not divisible by root index".into()));
        }
        let u0 = &self.coeffs[0];
        let root_int = |z: &num_bigint::BigInt| -> Option<num_bigint::BigInt> {
            let r = if z.is_negative() {
                if n % 2 == 0 {
                    return None;
                }
                -(-z).nth_root(n)
            } else {
                z.nth_root(n)
            };
            (num_traits::pow::pow(r.clone(), n as usize) == *z).then_some(r)
        };
        let s0 = Q::new(
            root_int(u0.numer()).ok_or_else(|| Error::BadPoint("leading coefficient not an n-th power".into()))?,
            root_int(u0.denom()).ok_or_else(|| Error::BadPoint("leading coefficient not an n-th power".into()))?,
        );
        // Miller's recurrence for s = u^(1/n)
        let alpha = Q::new(1.into(), (n as i64).into());
        let len = self.coeffs.len();
        let mut s: Vec<Q> = vec![s0];
        for k in 1..len {
            let mut t = Q::zero();
            for j in 1..=k {
                let u = &self.coeffs[j];
                if u.is_zero() {
                    continue;
                }
                let w = (&alpha + Q::one()) * q(j as i64) - q(k as i64);
                t += w * u * &s[k - j];
            }
            s.push(t / (u0 * q(k as i64)));
        }
        let vr = v / n as i64;
        Ok(Self::new(vr, s, vr + len as i64))
    }

    /// `self(inner(q))` where `inner` has positive valuation.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let vi = inner
            .valuation()
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::Invalid("inner series must have positive valuation".into()))?;
        let vo = self.start;
        let prec = (self.prec * vi).min(vo * vi + inner.relative_prec());
        let mut acc = Self::zero(prec);
        if self.is_zero() {
            return Ok(acc);
        }
        let mut power = inner.pow(vo)?.truncate(prec);
        for (k, c) in self.coeffs.iter().enumerate() {
            if (vo + k as i64) * vi >= prec {
                break;
            }
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
            power = power.mul(inner).truncate(prec);
        }
        Ok(acc.truncate(prec))
    }

    /// Compositional inverse of a series `c q + …` with `c ≠ 0`.
    pub fn reversion(&self) -> Result<Self> {
        if self.valuation() != Some(1) {
            return Err(Error::Invalid("reversion needs valuation exactly 1".into()));
        }
        let p = self.prec;
        let c1 = self.coeffs[0].clone();
        let mut r = QSeries::monomial(1, c1.recip(), p);
        for k in 2..p {
            let e = self.compose(&r)?;
            let ek = e.coeff(k);
            if !ek.is_zero() {
                let corr = QSeries::monomial(k, -ek / &c1, p);
                r = r.add(&corr);
            }
        }
        Ok(r)
    }

    /// `self(q^d)`; precision is multiplied by `d`.
    pub fn substitute_power(&self, d: u32) -> Self {
        let d = d as i64;
        let start = self.start * d;
        let prec = self.prec * d;
        let mut c = vec![Q::zero(); (prec - start) as usize];
        for (n, a) in self.terms() {
            c[(n * d - start) as usize] = a.clone();
        }
        Self::new(start, c, prec)
    }

    /// `F(self)` by Horner's rule.
    pub fn eval_poly(&self, f: &QPoly) -> Result<Self> {
        // constants are exact; this precision never limits the result
        let exact = self.relative_prec().max(self.prec).max(1);
        if f.is_zero() {
            return Ok(QSeries::zero(exact));
        }
        let mut acc = QSeries::constant(f.lead(), exact);
        for a in f.coeffs().iter().rev().skip(1) {
            acc = acc.mul(self).add(&QSeries::constant(a.clone(), exact));
        }
        Ok(acc)
    }

    /// True when both series agree on every exponent below `p`.
    pub fn agrees_to(&self, o: &Self, p: i64) -> bool {
        if self.prec < p || o.prec < p {
            return false;
        }
        self.truncate(p) == o.truncate(p)
    }

    /// Coefficient vector for exponents in `[lo, hi)`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Q> {
        (lo..hi).map(|n| self.coeff(n)).collect()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match n {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{n}"),
            };
            if n == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if first {
            write!(f, "O(q^{})", self.prec)
        } else {
            write!(f, " + O(q^{})", self.prec)
        }
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
